//! Machine-readable outcome of a single check.

use std::time::Instant;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact_poly::{Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One named check. `residuals` holds `label: value` strings; symbolic values
/// are printed in canonical polynomial form. The check passes iff every
/// residual is exactly zero (or within its tolerance, for numeric entries).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub status: Status,
    pub residuals: Vec<String>,
    pub witnesses: Vec<String>,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            status: Status::Pass,
            residuals: Vec::new(),
            witnesses: Vec::new(),
            elapsed_ms: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn record(&mut self, label: &str, value: String, ok: bool) {
        if !ok {
            self.status = Status::Fail;
        }
        self.residuals.push(format!("{label}: {value}"));
    }

    pub fn poly(&mut self, label: impl AsRef<str>, residual: &Poly) -> &mut Self {
        self.record(label.as_ref(), residual.to_string(), residual.is_zero());
        self
    }

    pub fn polys<'a, I>(&mut self, items: I) -> &mut Self
    where
        I: IntoIterator<Item = &'a (String, Poly)>,
    {
        for (label, p) in items {
            self.poly(label, p);
        }
        self
    }

    pub fn rational(&mut self, label: impl AsRef<str>, residual: &Rational) -> &mut Self {
        self.record(label.as_ref(), residual.to_string(), residual.is_zero());
        self
    }

    /// Numeric residual accepted when `|value| <= tolerance`.
    pub fn numeric(&mut self, label: impl AsRef<str>, value: f64, tolerance: f64) -> &mut Self {
        let ok = value.is_finite() && value.abs() <= tolerance;
        self.record(label.as_ref(), format!("{value:.3e} (tol {tolerance:.1e})"), ok);
        self
    }

    /// A boolean condition that must hold; printed as `true`/`false`.
    pub fn condition(&mut self, label: impl AsRef<str>, holds: bool) -> &mut Self {
        self.record(label.as_ref(), holds.to_string(), holds);
        self
    }

    pub fn witness(&mut self, text: impl Into<String>) -> &mut Self {
        self.witnesses.push(text.into());
        self
    }

    /// Builds a report with `f` and stamps the wall time it took.
    pub fn timed(
        check: impl Into<String>,
        f: impl FnOnce(&mut VerificationReport) -> crate::Result<()>,
    ) -> Self {
        let start = Instant::now();
        let mut report = VerificationReport::new(check);
        if let Err(e) = f(&mut report) {
            report.status = Status::Fail;
            report.witnesses.push(format!("error: {e}"));
        }
        report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        report
    }

    /// Residual lines whose value is not zero.
    pub fn nonzero_residuals(&self) -> impl Iterator<Item = &str> {
        self.residuals
            .iter()
            .map(String::as_str)
            .filter(|r| !(r.ends_with(": 0") || r.ends_with(": true")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::{int, VarSet};

    #[test]
    fn status_follows_residuals() {
        let v = VarSet::new(&["x"]).unwrap();
        let mut r = VerificationReport::new("demo");
        r.poly("zero", &Poly::zero(&v)).rational("also zero", &int(0));
        assert!(r.passed());
        r.poly("x", &Poly::var(&v, "x").unwrap());
        assert!(!r.passed());
        assert_eq!(r.nonzero_residuals().collect::<Vec<_>>(), ["x: x"]);
    }

    #[test]
    fn numeric_tolerance() {
        let mut r = VerificationReport::new("n");
        r.numeric("small", 1e-13, 1e-12);
        assert!(r.passed());
        r.numeric("nan", f64::NAN, 1.0);
        assert!(!r.passed());
    }

    #[test]
    fn json_schema_fields() {
        let r = VerificationReport::timed("t", |r| {
            r.condition("ok", true);
            Ok(())
        });
        let json = serde_json::to_value(&r).unwrap();
        let obj = json.as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["check", "elapsed_ms", "residuals", "status", "witnesses"]);
        assert_eq!(obj["status"], "pass");
    }
}
