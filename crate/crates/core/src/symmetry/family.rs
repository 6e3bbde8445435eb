//! The four-parameter family of point symmetries and its basis.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact_poly::{int, Poly, Rational};

use super::jet::{JetSpace, JetVectorField};

pub const PARAM_NAMES: [&str; 4] = ["alpha", "beta", "gamma", "delta"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
}

impl SymParams {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, delta: Rational) -> Self {
        SymParams {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    pub fn ints(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        SymParams::new(int(alpha), int(beta), int(gamma), int(delta))
    }

    pub fn values(&self) -> [&Rational; 4] {
        [&self.alpha, &self.beta, &self.gamma, &self.delta]
    }

    pub fn is_variational(&self) -> bool {
        self.alpha.is_zero()
    }
}

/// One signed monomial `sign * param * factor` in a component of the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyTerm {
    /// 0 for `xi`, 1..=3 for `eta_1..eta_3`.
    pub component: usize,
    /// Index into [`PARAM_NAMES`].
    pub param: usize,
    /// Point coordinate multiplying the parameter, if any.
    pub factor: Option<&'static str>,
    pub sign: i64,
}

/// A linear family of point fields parametrized by `(alpha, beta, gamma, delta)`.
///
/// The default is
/// `(-alpha t + beta) d/dt + (alpha q1 + gamma q2) d/dq1
///  + (-gamma q1 + alpha q2) d/dq2 + (alpha q3 + delta) d/dq3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryFamily {
    pub terms: Vec<FamilyTerm>,
}

impl Default for SymmetryFamily {
    fn default() -> Self {
        let t = |component, param, factor, sign| FamilyTerm {
            component,
            param,
            factor,
            sign,
        };
        SymmetryFamily {
            terms: vec![
                t(0, 0, Some("t"), -1),
                t(0, 1, None, 1),
                t(1, 0, Some("q1"), 1),
                t(1, 2, Some("q2"), 1),
                t(2, 2, Some("q1"), -1),
                t(2, 0, Some("q2"), 1),
                t(3, 0, Some("q3"), 1),
                t(3, 3, None, 1),
            ],
        }
    }
}

impl SymmetryFamily {
    /// Copy with the sign of term `index` reversed.
    pub fn with_flipped_term(&self, index: usize) -> Option<Self> {
        let mut out = self.clone();
        out.terms.get_mut(index)?.sign *= -1;
        Some(out)
    }

    /// Jet space carrying the four parameters as symbols.
    pub fn symbolic_space() -> JetSpace {
        JetSpace::new(&PARAM_NAMES).expect("distinct names")
    }

    /// The whole family as a single field with symbolic parameters.
    pub fn symbolic(&self) -> JetVectorField {
        let space = SymmetryFamily::symbolic_space();
        let params = PARAM_NAMES.map(|p| space.var(p));
        self.build(&space, |i| params[i].clone())
    }

    /// The member with the given numeric parameters, over the standard jet space.
    pub fn instantiate(&self, p: &SymParams) -> JetVectorField {
        let space = JetSpace::standard();
        let vals = p.values();
        self.build(&space, |i| Poly::constant(space.vars(), vals[i].clone()))
    }

    fn build(&self, space: &JetSpace, param: impl Fn(usize) -> Poly) -> JetVectorField {
        let mut comps = vec![Poly::zero(space.vars()); 4];
        for term in &self.terms {
            let mut p = param(term.param).scale(&int(term.sign));
            if let Some(f) = term.factor {
                p = p * space.var(f);
            }
            comps[term.component] = &comps[term.component] + &p;
        }
        let [xi, e1, e2, e3]: [Poly; 4] = comps.try_into().expect("four components");
        JetVectorField::new(space, xi, [e1, e2, e3]).expect("family coefficients depend on (t, q) only")
    }

    /// Basis `u1..u4`: `u1` from alpha, `u2` from beta, `u3` from delta, `u4` from gamma.
    pub fn basis(&self) -> [JetVectorField; 4] {
        [
            self.instantiate(&SymParams::ints(1, 0, 0, 0)),
            self.instantiate(&SymParams::ints(0, 1, 0, 0)),
            self.instantiate(&SymParams::ints(0, 0, 0, 1)),
            self.instantiate(&SymParams::ints(0, 0, 1, 0)),
        ]
    }
}

/// The three determining relations transcribed term by term, before the
/// accelerations are replaced:
///
/// ```text
/// eta1'' - xi'' qd1 - 2 qdd1 xi' - eta1 qd3 - q1 (eta3' - xi' qd3)
/// eta2'' - xi'' qd2 - 2 qdd2 xi' - eta2 qd3 - q2 (eta3' - xi' qd3)
/// eta3'' - xi'' qd3 - 2 qdd3 xi' + eta1 qd1 + eta2 qd2
///     + q1 (eta1' - xi' qd1) + q2 (eta2' - xi' qd2)
/// ```
///
/// with `'` the total time derivative.
pub fn transcribed_relations(u: &JetVectorField) -> Result<[Poly; 3]> {
    let s = u.space();
    let d = |p: &Poly| s.total_derivative(p);
    let [q1, q2, qd1, qd2, qd3] = ["q1", "q2", "qd1", "qd2", "qd3"].map(|n| s.var(n));
    let qdd = ["qdd1", "qdd2", "qdd3"].map(|n| s.var(n));
    let xi1 = d(&u.xi)?;
    let xi2 = d(&xi1)?;
    let two = int(2);
    let eta1 = d(&u.eta[0])?;
    let eta2 = d(&u.eta[1])?;
    let eta3 = d(&u.eta[2])?;
    let r1 = d(&eta1)? - &xi2 * &qd1 - (&qdd[0] * &xi1).scale(&two) - &u.eta[0] * &qd3
        - &q1 * (&eta3 - &xi1 * &qd3);
    let r2 = d(&eta2)? - &xi2 * &qd2 - (&qdd[1] * &xi1).scale(&two) - &u.eta[1] * &qd3
        - &q2 * (&eta3 - &xi1 * &qd3);
    let r3 = d(&eta3)? - &xi2 * &qd3 - (&qdd[2] * &xi1).scale(&two)
        + &u.eta[0] * &qd1
        + &u.eta[1] * &qd2
        + &q1 * (&eta1 - &xi1 * &qd1)
        + &q2 * (&eta2 - &xi1 * &qd2);
    Ok([r1, r2, r3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_elements() {
        let [u1, u2, u3, u4] = SymmetryFamily::default().basis();
        let s = JetSpace::standard();
        let z = Poly::zero(s.vars());
        assert_eq!(u1.xi, -s.var("t"));
        assert_eq!(u1.eta, [s.var("q1"), s.var("q2"), s.var("q3")]);
        assert_eq!(u2.xi, Poly::one(s.vars()));
        assert_eq!(u3.eta[2], Poly::one(s.vars()));
        assert!(u3.xi.is_zero());
        assert_eq!(u4.eta, [s.var("q2"), -s.var("q1"), z]);
    }

    #[test]
    fn symbolic_family_display() {
        let f = SymmetryFamily::default().symbolic();
        assert_eq!(f.xi.to_string(), "-t*alpha + beta");
        assert_eq!(f.eta[1].to_string(), "-q1*gamma + q2*alpha");
    }

    #[test]
    fn transcription_agrees_with_generator() {
        use crate::symmetry::jet::determining_residuals;
        let s = JetSpace::standard();
        let [t, q1, q2, q3] = ["t", "q1", "q2", "q3"].map(|n| s.var(n));
        let z = Poly::zero(s.vars());
        let fields = [
            JetVectorField::new(&s, z.clone(), [q1.clone(), z.clone(), z.clone()]).unwrap(),
            JetVectorField::new(&s, t.pow(2), [&t * &q2, q3.pow(2), &q1 * &q2]).unwrap(),
            SymmetryFamily::default().basis()[3].clone(),
        ];
        for u in &fields {
            let generated = determining_residuals(u).unwrap();
            let transcribed = transcribed_relations(u).unwrap();
            for (g, tr) in generated.iter().zip(&transcribed) {
                assert_eq!(*g, s.on_shell(tr).unwrap());
            }
        }
        let sym = SymmetryFamily::default().symbolic();
        let r = transcribed_relations(&sym).unwrap();
        assert!(r.iter().all(|p| sym.space().on_shell(p).unwrap().is_zero()));
    }

    #[test]
    fn flipping_terms() {
        let fam = SymmetryFamily::default();
        assert!(fam.with_flipped_term(8).is_none());
        let flipped = fam.with_flipped_term(1).unwrap();
        assert_eq!(flipped.symbolic().xi.to_string(), "-t*alpha - beta");
    }
}
