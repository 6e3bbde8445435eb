//! Named suites of exact checks, each producing [`VerificationReport`]s.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_poly::{int, Poly, Rational};
use crate::model::{
    conservation_residuals, directional_derivative, lagrangian, realization_residuals, InvariantId, SystemId,
    STATE5_VARS,
};
use crate::poisson::{
    cocycle_check, iso_check_phi, matrix_commutator_table, poisson_reports, Cocycle, CommutatorTable,
    MatrixAlgebraBasis, PoissonTensor, StructureConstants,
};
use crate::report::VerificationReport;
use crate::symmetry::{
    conservation_residual, determining_residuals, displayed_canonical_field, displayed_x, dynamics_commutator,
    dynamics_field, expected_family_charge, family_noether_charge, first_order_symmetry_residual,
    noether_charge, pushforward_legendre, pushforward_phi, same_span, solve_determining,
    symmetry_commutator_table, transcribed_relations, variational_residual, JetVectorField, SymParams,
    SymmetryFamily,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Poisson,
    Cocycle,
    Algebra,
    Symmetry,
    Variational,
    Noether,
    Pushforward,
    Realization,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `All` runs them.
    pub const EACH: [Suite; 8] = [
        Suite::Poisson,
        Suite::Cocycle,
        Suite::Algebra,
        Suite::Symmetry,
        Suite::Variational,
        Suite::Noether,
        Suite::Pushforward,
        Suite::Realization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Poisson => "poisson",
            Suite::Cocycle => "cocycle",
            Suite::Algebra => "algebra",
            Suite::Symmetry => "symmetry",
            Suite::Variational => "variational",
            Suite::Noether => "noether",
            Suite::Pushforward => "pushforward",
            Suite::Realization => "realization",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

/// The objects under test. The defaults are the genuine structures; tests
/// substitute corrupted copies to make sure the checks can fail.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub pi: PoissonTensor,
    pub family: SymmetryFamily,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            pi: PoissonTensor::displayed(),
            family: SymmetryFamily::default(),
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<VerificationReport> {
    match suite {
        Suite::Poisson => poisson_reports(&cfg.pi),
        Suite::Cocycle => vec![cocycle_check(&Cocycle::maxwell_bloch()), iso_check_phi()],
        Suite::Algebra => algebra_reports(&cfg.family),
        Suite::Symmetry => symmetry_reports(&cfg.family),
        Suite::Variational => variational_reports(&cfg.family),
        Suite::Noether => noether_reports(&cfg.family),
        Suite::Pushforward => pushforward_reports(&cfg.family),
        Suite::Realization => realization_reports(),
        Suite::All => Suite::EACH.iter().flat_map(|s| run_suite(*s, cfg)).collect(),
    }
}

fn compare_tables(r: &mut VerificationReport, label: &str, got: &CommutatorTable, want: &[Vec<Vec<Rational>>]) {
    let n = got.dim();
    if n != want.len() {
        r.condition(format!("{label}: dimension {n} = {}", want.len()), false);
        return;
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let d = &got.coeffs[i][j][k] - &want[i][j][k];
                if !d.is_zero() {
                    r.rational(format!("{label} [{i1},{j1}] coefficient {k1}", i1 = i + 1, j1 = j + 1, k1 = k + 1), &d);
                }
            }
        }
    }
    r.condition(format!("{label}: all {} brackets agree", n * (n - 1) / 2), true);
}

/// `[u1, u2] = u2`, `[u1, u3] = -u3`, every other bracket zero.
pub fn stated_symmetry_relations() -> Vec<Vec<Vec<Rational>>> {
    let mut c = vec![vec![vec![Rational::zero(); 4]; 4]; 4];
    for (i, j, k, s) in [(0, 1, 1, 1), (0, 2, 2, -1)] {
        c[i][j][k] = int(s);
        c[j][i][k] = int(-s);
    }
    c
}

fn algebra_reports(family: &SymmetryFamily) -> Vec<VerificationReport> {
    let basis = family.basis();
    let mut out = Vec::new();
    out.push(VerificationReport::timed("e-table", |r| {
        let t = matrix_commutator_table(&MatrixAlgebraBasis::nilpotent_e())?;
        compare_tables(r, "E", &t, &StructureConstants::stated_relations().alpha);
        r.witness(t.nonzero_entries().join("; "));
        Ok(())
    }));
    out.push(VerificationReport::timed("symmetry-table", |r| {
        let t = symmetry_commutator_table("u", &basis)?;
        compare_tables(r, "u", &t, &stated_symmetry_relations());
        r.witness(t.nonzero_entries().join("; "));
        Ok(())
    }));
    out.push(VerificationReport::timed("symmetry-jacobi", |r| {
        for i in 0..4 {
            for j in i + 1..4 {
                for k in j + 1..4 {
                    let f = |a: &JetVectorField, b: &JetVectorField, c: &JetVectorField| {
                        a.bracket(&b.bracket(c)?).map(|x| x.to_field())
                    };
                    let (a, b, c) = (&basis[i], &basis[j], &basis[k]);
                    let sum = f(a, b, c)?.checked_add(&f(b, c, a)?)?.checked_add(&f(c, a, b)?)?;
                    for (comp, p) in sum.coords().iter().zip(sum.components()) {
                        r.poly(format!("jacobi(u{},u{},u{}) d/d{comp}", i + 1, j + 1, k + 1), p);
                    }
                }
            }
        }
        Ok(())
    }));
    out.push(VerificationReport::timed("s-iso-sg", |r| {
        let ut = symmetry_commutator_table("u", &basis)?;
        let at = matrix_commutator_table(&MatrixAlgebraBasis::symmetry_a())?;
        compare_tables(r, "u_i -> A_i", &ut, &at.coeffs);
        r.witness(format!("A: {}", at.nonzero_entries().join("; ")));
        Ok(())
    }));
    out
}

fn symmetry_reports(family: &SymmetryFamily) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    out.push(VerificationReport::timed("determining", |r| {
        let u = family.symbolic();
        for (i, p) in determining_residuals(&u)?.iter().enumerate() {
            r.poly(format!("determining[{}] (symbolic alpha..delta)", i + 1), p);
        }
        r.witness(format!("u = {u}"));
        Ok(())
    }));
    out.push(VerificationReport::timed("determining-transcribed", |r| {
        let u = family.symbolic();
        for (i, p) in transcribed_relations(&u)?.iter().enumerate() {
            r.poly(format!("displayed relation {} on shell", i + 1), &u.space().on_shell(p)?);
        }
        Ok(())
    }));
    out.push(VerificationReport::timed("solve-determining", |r| {
        let sol = solve_determining(2)?;
        r.condition(format!("dimension {} = 4", sol.len()), sol.len() == 4);
        r.condition("span equals span{u1..u4}", same_span(&sol, &family.basis()));
        for (k, u) in sol.iter().enumerate() {
            r.witness(format!("v{} = {u}", k + 1));
        }
        Ok(())
    }));
    out
}

fn variational_reports(family: &SymmetryFamily) -> Vec<VerificationReport> {
    vec![VerificationReport::timed("variational", |r| {
        let u = family.symbolic();
        let vars = u.space().vars();
        let three_alpha_l = lagrangian(vars) * Poly::var(vars, "alpha")?.scale(&int(3));
        r.poly("pr1(u) L + L D_t xi - 3 alpha L", &(variational_residual(&u)? - three_alpha_l));
        for (k, name) in [(1, "u2"), (2, "u3"), (3, "u4")] {
            r.poly(format!("pr1({name}) L + L D_t xi"), &variational_residual(&family.basis()[k])?);
        }
        Ok(())
    })]
}

fn noether_reports(family: &SymmetryFamily) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    out.push(VerificationReport::timed("noether-charge", |r| {
        let i = family_noether_charge(family)?;
        r.poly("I + beta Htilde + gamma Jtilde - delta Ctilde", &(&i - expected_family_charge(i.var_set())?));
        r.poly("dI/dt along ham6", &conservation_residual(&i)?);
        r.witness(format!("I = {i}"));
        Ok(())
    }));
    out.push(VerificationReport::timed("noether-named", |r| {
        let cases = [
            ((0, 1, 0, 0), -InvariantId::Htilde.symbolic(), "-Htilde"),
            ((0, 0, 1, 0), -InvariantId::Jtilde.symbolic(), "-Jtilde"),
            ((0, 0, 0, 1), InvariantId::Ctilde.symbolic(), "Ctilde"),
        ];
        for ((a, b, g, d), want, name) in cases {
            let u = family.instantiate(&SymParams::ints(a, b, g, d));
            let i = crate::symmetry::noether_charge_of(&u)?.embed(want.var_set())?;
            r.poly(format!("I(beta={b}, gamma={g}, delta={d}) - ({name})"), &(&i - &want));
        }
        let refused = noether_charge(&SymParams::ints(1, 0, 0, 0));
        r.condition("alpha != 0 has no charge", matches!(refused, Err(Error::NotVariational(_))));
        Ok(())
    }));
    out.push(VerificationReport::timed("j-conservation", |r| {
        let rhs = SystemId::Mb5.rhs_symbolic();
        let dj = directional_derivative(&InvariantId::J.symbolic(), &STATE5_VARS, &rhs)?;
        r.poly("dJ/dt along mb5", &dj);
        Ok(())
    }));
    out
}

fn pushforward_reports(family: &SymmetryFamily) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let pushed = || -> Result<_> {
        let w = pushforward_legendre(&family.symbolic())?;
        Ok((w.clone(), pushforward_phi(&w)?))
    };
    out.push(VerificationReport::timed("pushforward-fl", |r| {
        let (w, _) = pushed()?;
        let d = w.checked_sub(&displayed_canonical_field())?;
        for (c, p) in d.coords().iter().zip(d.components()) {
            r.poly(format!("(FL)_* u - displayed, d/d{c}"), p);
        }
        r.witness(format!("(FL)_* u = {w}"));
        Ok(())
    }));
    out.push(VerificationReport::timed("pushforward-phi", |r| {
        let (_, x) = pushed()?;
        let d = x.field().checked_sub(displayed_x().field())?;
        for (c, p) in d.coords().iter().zip(d.components()) {
            r.poly(format!("X - displayed, d/d{c}"), p);
        }
        for (k, p) in first_order_symmetry_residual(&x)?.iter().enumerate() {
            r.poly(format!("first-order symmetry residual {}", k + 1), p);
        }
        r.witness(format!("X = {x}"));
        Ok(())
    }));
    out.push(VerificationReport::timed("conformal-master", |r| {
        let (_, x) = pushed()?;
        let class = dynamics_commutator(&x)?;
        let vf = dynamics_field(x.var_set())?;
        let alpha = Poly::var(x.var_set(), "alpha")?;
        let d = class.commutator.field().checked_sub(&vf.field().mul_poly(&alpha)?)?;
        for (c, p) in d.coords().iter().zip(d.components()) {
            r.poly(format!("[X,V] - alpha V, d/d{c}"), p);
        }
        for (c, p) in class.second_commutator.field().coords().iter().zip(class.second_commutator.field().components()) {
            r.poly(format!("[[X,V],V], d/d{c}"), p);
        }
        r.condition("conformal with factor alpha", class.factor.as_ref() == Some(&alpha));

        let member = |a, b, g| -> Result<_> {
            let u = family.instantiate(&SymParams::ints(a, b, g, 0));
            dynamics_commutator(&pushforward_phi(&pushforward_legendre(&u)?)?)
        };
        let scaling = member(1, 0, 0)?;
        r.condition("alpha = 1: [X,V] != 0", !scaling.is_symmetry);
        r.condition("alpha = 1: master symmetry", scaling.is_master);
        let plain = member(0, 1, 1)?;
        r.condition("alpha = 0: [X,V] = 0", plain.is_symmetry);
        r.witness(format!("[X,V] = {}", class.commutator));
        Ok(())
    }));
    out
}

fn realization_reports() -> Vec<VerificationReport> {
    vec![
        VerificationReport::timed("realization", |r| {
            r.polys(&realization_residuals()?);
            Ok(())
        }),
        VerificationReport::timed("conservation", |r| {
            r.polys(&conservation_residuals()?);
            Ok(())
        }),
    ]
}

/// Mutation fixtures: the structure with one sign reversed.
pub fn flipped_pi(i: usize, j: usize) -> Result<VerifyConfig> {
    Ok(VerifyConfig {
        pi: PoissonTensor::displayed().with_flipped_sign(i, j)?,
        ..VerifyConfig::default()
    })
}

pub fn flipped_family(term: usize) -> Result<VerifyConfig> {
    let family = SymmetryFamily::default()
        .with_flipped_term(term)
        .ok_or_else(|| Error::IndexOutOfRange(format!("family term {term}")))?;
    Ok(VerifyConfig {
        family,
        ..VerifyConfig::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes() {
        let cfg = VerifyConfig::default();
        for s in Suite::EACH {
            for r in run_suite(s, &cfg) {
                assert!(r.passed(), "{s}/{}: {:?} {:?}", r.check, r.residuals, r.witnesses);
            }
        }
    }

    #[test]
    fn every_family_flip_is_caught() {
        for term in 0..SymmetryFamily::default().terms.len() {
            let cfg = flipped_family(term).unwrap();
            let failing: Vec<_> = run_suite(Suite::All, &cfg).into_iter().filter(|r| !r.passed()).collect();
            assert!(!failing.is_empty(), "term {term}");
            assert!(failing.iter().any(|r| r.nonzero_residuals().next().is_some()), "term {term}");
        }
        assert!(flipped_family(99).is_err());
    }
}
