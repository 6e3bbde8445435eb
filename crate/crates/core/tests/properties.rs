use std::collections::HashMap;

use proptest::prelude::*;

use mbsym::exact_poly::{rank, rat, LinearSystem};
use mbsym::integrators::{integrate, midpoint_step, step, Reversed};
use mbsym::model::{state5_vars, InvariantId};
use mbsym::poisson::{poisson_bracket, PoissonTensor};
use mbsym::symmetry::{lie_bracket, PolyField};
use mbsym::{IntegratorId, Poly, Rational, SystemId, VarSet};

const ABC: [&str; 3] = ["a", "b", "c"];

fn abc() -> VarSet {
    VarSet::new(&ABC).unwrap()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn poly_over(vars: VarSet, max_exp: u32) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), small_rational()), 0..5)
        .prop_map(move |terms| Poly::from_terms(&vars, terms).unwrap())
}

fn poly() -> impl Strategy<Value = Poly> {
    poly_over(abc(), 3)
}

fn field() -> impl Strategy<Value = PolyField> {
    prop::collection::vec(poly_over(abc(), 2), 3).prop_map(|c| PolyField::new(&ABC, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!((&f * &g) * &h, &f * (&g * &h));
        prop_assert_eq!(&f * (&g + &h), &f * &g + &f * &h);
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &Poly::one(&abc()), f.clone());
    }

    #[test]
    fn leibniz_rule(f in poly(), g in poly(), x in prop::sample::select(ABC.to_vec())) {
        let lhs = (&f * &g).diff(x).unwrap();
        let rhs = f.diff(x).unwrap() * &g + &f * g.diff(x).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_commutes_with_substitute(
        f in poly(),
        g in poly(),
        pt in prop::collection::vec(small_rational(), 3),
    ) {
        let point: HashMap<&str, Rational> = ABC.iter().copied().zip(pt).collect();
        let composed = f.substitute(&[("a", g.clone())]).unwrap().eval_exact(&point).unwrap();
        let mut shifted = point.clone();
        shifted.insert("a", g.eval_exact(&point).unwrap());
        prop_assert_eq!(composed, f.eval_exact(&shifted).unwrap());
    }

    #[test]
    fn display_is_canonical(f in poly(), g in poly()) {
        // Equal polynomials print identically regardless of how they were built.
        prop_assert_eq!((&f + &g).to_string(), (&g + &f).to_string());
    }

    #[test]
    fn nullspace_is_annihilated(
        m in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..5),
    ) {
        let matrix: Vec<Vec<Rational>> =
            m.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect();
        let sys = LinearSystem::homogeneous(matrix.clone(), 5).unwrap();
        let basis = sys.nullspace();
        prop_assert_eq!(basis.len(), 5 - rank(matrix.clone()));
        for v in &basis {
            for row in &matrix {
                let dot: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                prop_assert_eq!(dot, rat(0, 1));
            }
        }
    }

    #[test]
    fn lie_bracket_antisymmetric_and_jacobi(u in field(), v in field(), w in field()) {
        let zero = PolyField::zero(&abc(), &ABC).unwrap();
        let minus_sum = |fs: &[PolyField]| fs.iter().fold(zero.clone(), |acc, f| acc.checked_sub(f).unwrap());
        let uv = lie_bracket(&u, &v).unwrap();
        let vu = lie_bracket(&v, &u).unwrap();
        prop_assert!(minus_sum(&[uv.clone(), vu]).is_zero());
        let sum = minus_sum(&[
            lie_bracket(&u, &lie_bracket(&v, &w).unwrap()).unwrap(),
            lie_bracket(&v, &lie_bracket(&w, &u).unwrap()).unwrap(),
            lie_bracket(&w, &uv).unwrap(),
        ]);
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn poisson_bracket_properties(f in poly_over(state5_vars(), 2), g in poly_over(state5_vars(), 2)) {
        let pi = PoissonTensor::displayed();
        let fg = poisson_bracket(&f, &g, &pi).unwrap();
        let gf = poisson_bracket(&g, &f, &pi).unwrap();
        prop_assert!((fg + gf).is_zero());
        // C is a Casimir: it commutes with everything.
        let c = InvariantId::C.symbolic();
        prop_assert!(poisson_bracket(&c, &f, &pi).unwrap().is_zero());
    }
}

fn bounded_state(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn midpoint_preserves_p3_and_jtilde(x in bounded_state(6)) {
        let traj = integrate(IntegratorId::ImplicitMidpoint, SystemId::Ham6, &x, 0.0, 1.0, 0.05).unwrap();
        let j0 = InvariantId::Jtilde.eval_slice(&x).unwrap();
        for s in &traj.states {
            prop_assert!((s[5] - x[5]).abs() <= 1e-12);
            prop_assert!((InvariantId::Jtilde.eval_slice(s).unwrap() - j0).abs() <= 1e-10);
        }
    }

    #[test]
    fn rk4_keeps_casimir_on_short_runs(x in bounded_state(5)) {
        let traj = integrate(IntegratorId::Rk4, SystemId::Mb5, &x, 0.0, 1.0, 1e-2).unwrap();
        let c0 = InvariantId::C.eval_slice(&x).unwrap();
        let c1 = InvariantId::C.eval_slice(traj.last()).unwrap();
        prop_assert!((c1 - c0).abs() <= 1e-8);
    }

    #[test]
    fn midpoint_is_symmetric(x in bounded_state(6)) {
        let y = step(IntegratorId::ImplicitMidpoint, SystemId::Ham6, &x, 0.0, 0.05).unwrap();
        let back = midpoint_step(&Reversed(SystemId::Ham6), &y, 0.05).unwrap();
        for (a, b) in back.iter().zip(&x) {
            prop_assert!((a - b).abs() <= 1e-11);
        }
    }

    #[test]
    fn nonpositive_steps_are_rejected(x in bounded_state(5), h in -1.0f64..=0.0) {
        for m in IntegratorId::ALL {
            prop_assert!(step(m, SystemId::Mb5, &x, 0.0, h).is_err());
        }
    }
}
