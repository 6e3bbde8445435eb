//! Conserved quantities of variational point symmetries.

use crate::error::{Error, Result};
use crate::exact_poly::{Poly, VarSet};
use crate::model::{
    canonical_angular_momentum, canonical_hamiltonian, canonical_vars, directional_derivative,
    lagrangian, legendre_inv_symbolic, v, SystemId, CANONICAL_VARS,
};

use super::family::{SymParams, SymmetryFamily};
use super::jet::{variational_residual, JetVectorField, VELOCITIES};

/// `t, q1..q3, p1..p3` followed by `params`.
pub fn charge_vars<S: AsRef<str>>(params: &[S]) -> Result<VarSet> {
    let mut names: Vec<&str> = vec!["t"];
    names.extend(CANONICAL_VARS);
    names.extend(params.iter().map(AsRef::as_ref));
    VarSet::new(&names)
}

/// Noether charge `eta . dL/dqd - xi (qd . dL/dqd - L)` of a variational
/// symmetry, rewritten in canonical coordinates over [`charge_vars`].
pub fn noether_charge_of(u: &JetVectorField) -> Result<Poly> {
    let residual = variational_residual(u)?;
    if !residual.is_zero() {
        return Err(Error::NotVariational(format!("pr1(u) L + L D_t xi = {residual}")));
    }
    let jet = u.space().vars();
    let l = lagrangian(jet);
    let mut eta_p = Poly::zero(jet);
    let mut energy = -l;
    for (i, qd) in VELOCITIES.iter().enumerate() {
        let p = lagrangian(jet).diff(qd)?;
        eta_p = eta_p + &u.eta[i] * &p;
        energy = energy + v(jet, qd) * p;
    }
    let on_jet = eta_p - &u.xi * &energy;

    let target = charge_vars(u.space().params())?;
    let inv = legendre_inv_symbolic();
    let bindings = VELOCITIES
        .iter()
        .zip(&inv[3..])
        .map(|(name, p)| Ok((*name, p.embed(&target)?)))
        .collect::<Result<Vec<_>>>()?;
    on_jet.compose(&target, &bindings)
}

/// Charge of the member of the default family with parameters `p`, as a
/// polynomial in `(q, p)` only.
pub fn noether_charge(p: &SymParams) -> Result<Poly> {
    if !p.is_variational() {
        return Err(Error::NotVariational(format!("alpha = {} is nonzero", p.alpha)));
    }
    let u = SymmetryFamily::default().instantiate(p);
    noether_charge_of(&u)?.embed(&canonical_vars())
}

/// Charge of `family` restricted to `alpha = 0`, with `beta, gamma, delta`
/// left symbolic.
pub fn family_noether_charge(family: &SymmetryFamily) -> Result<Poly> {
    let u = family.symbolic();
    let space = u.space().clone();
    let zero = [("alpha", Poly::zero(space.vars()))];
    let restricted = JetVectorField::new(
        &space,
        u.xi.substitute(&zero)?,
        [
            u.eta[0].substitute(&zero)?,
            u.eta[1].substitute(&zero)?,
            u.eta[2].substitute(&zero)?,
        ],
    )?;
    noether_charge_of(&restricted)
}

/// `-beta H~ - gamma J~ + delta C~` over any set containing the canonical
/// coordinates and the parameter names.
pub fn expected_family_charge(vars: &VarSet) -> Result<Poly> {
    let h = canonical_hamiltonian(&canonical_vars()).embed(vars)?;
    let j = canonical_angular_momentum(&canonical_vars()).embed(vars)?;
    let c = v(vars, "p3");
    let [beta, gamma, delta] = ["beta", "gamma", "delta"].map(|n| Poly::var(vars, n));
    Ok(-(beta? * h) - gamma? * j + delta? * c)
}

/// `dI/dt + grad I . F` with `F` the canonical Hamiltonian field; zero iff
/// `I` is conserved.
pub fn conservation_residual(charge: &Poly) -> Result<Poly> {
    let vars = charge.var_set();
    let field = SystemId::Ham6
        .rhs_symbolic()
        .iter()
        .map(|c| c.embed(vars))
        .collect::<Result<Vec<_>>>()?;
    let explicit = if vars.contains("t") {
        charge.diff("t")?
    } else {
        Poly::zero(vars)
    };
    Ok(explicit + directional_derivative(charge, &CANONICAL_VARS, &field)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InvariantId;

    #[test]
    fn named_charges() {
        let h = InvariantId::Htilde.symbolic();
        let j = InvariantId::Jtilde.symbolic();
        assert_eq!(noether_charge(&SymParams::ints(0, 1, 0, 0)).unwrap(), -h);
        assert_eq!(noether_charge(&SymParams::ints(0, 0, 1, 0)).unwrap(), -j);
        assert_eq!(
            noether_charge(&SymParams::ints(0, 0, 0, 1)).unwrap(),
            InvariantId::Ctilde.symbolic()
        );
    }

    #[test]
    fn scaling_has_no_charge() {
        let err = noether_charge(&SymParams::ints(1, 0, 0, 0)).unwrap_err();
        assert!(matches!(err, Error::NotVariational(_)));
        let u1 = SymmetryFamily::default().basis()[0].clone();
        assert!(matches!(noether_charge_of(&u1), Err(Error::NotVariational(_))));
    }

    #[test]
    fn symbolic_family_charge() {
        let i = family_noether_charge(&SymmetryFamily::default()).unwrap();
        assert_eq!(i, expected_family_charge(i.var_set()).unwrap());
        assert!(conservation_residual(&i).unwrap().is_zero());
    }

    #[test]
    fn non_conserved_function() {
        let q1 = v(&canonical_vars(), "q1");
        assert_eq!(conservation_residual(&q1).unwrap(), v(&canonical_vars(), "p1"));
    }
}
