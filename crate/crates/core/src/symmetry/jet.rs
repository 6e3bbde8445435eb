//! Jet space of the Euler-Lagrange system, point vector fields and their prolongations.

use crate::error::{Error, Result};
use crate::exact_poly::{Poly, VarSet};
use crate::model::{euler_lagrange_accelerations, euler_lagrange_residuals, lagrangian, v};

use super::field::PolyField;

pub const POINT_COORDS: [&str; 4] = ["t", "q1", "q2", "q3"];
pub const VELOCITIES: [&str; 3] = ["qd1", "qd2", "qd3"];
pub const ACCELERATIONS: [&str; 3] = ["qdd1", "qdd2", "qdd3"];

/// Variables `t, q1..q3, qd1..qd3, qdd1..qdd3` followed by optional symbolic
/// parameters, which behave as constants under every derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSpace {
    vars: VarSet,
    params: Vec<String>,
}

impl JetSpace {
    pub fn new<S: AsRef<str>>(params: &[S]) -> Result<Self> {
        let mut names: Vec<&str> = POINT_COORDS.to_vec();
        names.extend(VELOCITIES);
        names.extend(ACCELERATIONS);
        names.extend(params.iter().map(AsRef::as_ref));
        Ok(JetSpace {
            vars: VarSet::new(&names)?,
            params: params.iter().map(|p| p.as_ref().to_owned()).collect(),
        })
    }

    pub fn standard() -> Self {
        JetSpace::new::<&str>(&[]).expect("fixed names")
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn var(&self, name: &str) -> Poly {
        v(&self.vars, name)
    }

    /// `D_t = d/dt + qd_i d/dq_i + qdd_i d/dqd_i`. Defined for functions of
    /// `(t, q, qd)`; a dependence on `qdd` would need third derivatives.
    pub fn total_derivative(&self, f: &Poly) -> Result<Poly> {
        self.vars.check_same(f.var_set())?;
        if let Some(a) = ACCELERATIONS.iter().find(|a| f.depends_on(a)) {
            return Err(Error::InvalidArgument(format!(
                "total derivative of a function of {a} is outside the second jet"
            )));
        }
        let mut acc = f.diff("t")?;
        for i in 0..3 {
            acc = acc
                + f.diff(POINT_COORDS[i + 1])? * self.var(VELOCITIES[i])
                + f.diff(VELOCITIES[i])? * self.var(ACCELERATIONS[i]);
        }
        Ok(acc)
    }

    /// Substitutes the Euler-Lagrange accelerations for `qdd1..qdd3`.
    pub fn on_shell(&self, f: &Poly) -> Result<Poly> {
        let acc = euler_lagrange_accelerations(&self.vars);
        let bindings: Vec<(&str, Poly)> = ACCELERATIONS.into_iter().zip(acc).collect();
        f.substitute(&bindings)
    }
}

/// Lie point field `xi d/dt + eta_i d/dq_i` with coefficients in `(t, q)`
/// (and possibly symbolic parameters).
#[derive(Clone, Debug, PartialEq)]
pub struct JetVectorField {
    space: JetSpace,
    pub xi: Poly,
    pub eta: [Poly; 3],
}

impl JetVectorField {
    pub fn new(space: &JetSpace, xi: Poly, eta: [Poly; 3]) -> Result<Self> {
        for p in std::iter::once(&xi).chain(eta.iter()) {
            space.vars.check_same(p.var_set())?;
            if let Some(j) = VELOCITIES
                .iter()
                .chain(ACCELERATIONS.iter())
                .find(|n| p.depends_on(n))
            {
                return Err(Error::NotPointField((*j).to_owned()));
            }
        }
        Ok(JetVectorField {
            space: space.clone(),
            xi,
            eta,
        })
    }

    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    pub fn to_field(&self) -> PolyField {
        let mut comps = vec![self.xi.clone()];
        comps.extend(self.eta.iter().cloned());
        PolyField::new(&POINT_COORDS, comps).expect("coordinates belong to the jet space")
    }

    pub fn from_field(space: &JetSpace, f: &PolyField) -> Result<Self> {
        if f.coords() != POINT_COORDS {
            return Err(Error::InvalidArgument(format!(
                "expected a field on (t, q1, q2, q3), got ({})",
                f.coords().join(",")
            )));
        }
        let c = f.components();
        JetVectorField::new(space, c[0].clone(), [c[1].clone(), c[2].clone(), c[3].clone()])
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.eta.iter().all(Poly::is_zero)
    }

    /// `[self, other]` as point fields.
    pub fn bracket(&self, other: &JetVectorField) -> Result<JetVectorField> {
        let b = super::field::lie_bracket(&self.to_field(), &other.to_field())?;
        JetVectorField::from_field(&self.space, &b)
    }

    /// Re-expresses the field over another jet space (e.g. dropping parameters
    /// once they have been substituted).
    pub fn rebase(&self, space: &JetSpace) -> Result<JetVectorField> {
        JetVectorField::new(
            space,
            self.xi.embed(space.vars())?,
            [
                self.eta[0].embed(space.vars())?,
                self.eta[1].embed(space.vars())?,
                self.eta[2].embed(space.vars())?,
            ],
        )
    }
}

impl std::fmt::Display for JetVectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.to_field().fmt(f)
    }
}

/// A point field lifted to velocities (order 1) and accelerations (order 2).
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongedField {
    pub base: JetVectorField,
    pub vel_coeffs: [Poly; 3],
    pub acc_coeffs: Option<[Poly; 3]>,
}

impl ProlongedField {
    /// The prolonged field as a derivation on functions of the jet variables.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        let mut coords: Vec<&str> = POINT_COORDS.to_vec();
        coords.extend(VELOCITIES);
        let mut comps = vec![self.base.xi.clone()];
        comps.extend(self.base.eta.iter().cloned());
        comps.extend(self.vel_coeffs.iter().cloned());
        if let Some(acc) = &self.acc_coeffs {
            coords.extend(ACCELERATIONS);
            comps.extend(acc.iter().cloned());
        }
        PolyField::new(&coords, comps)?.apply(f)
    }
}

/// First or second prolongation:
/// `eta^(1)_i = D_t eta_i - D_t xi qd_i`,
/// `eta^(2)_i = D_t^2 eta_i - D_t^2 xi qd_i - 2 D_t xi qdd_i`.
pub fn prolong(u: &JetVectorField, order: u8) -> Result<ProlongedField> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidArgument(format!("prolongation order {order} not in {{1, 2}}")));
    }
    let s = &u.space;
    let dxi = s.total_derivative(&u.xi)?;
    let mut vel = Vec::with_capacity(3);
    for i in 0..3 {
        vel.push(s.total_derivative(&u.eta[i])? - &dxi * s.var(VELOCITIES[i]));
    }
    let acc_coeffs = if order == 2 {
        let ddxi = s.total_derivative(&dxi)?;
        let mut acc = Vec::with_capacity(3);
        for i in 0..3 {
            let ddeta = s.total_derivative(&s.total_derivative(&u.eta[i])?)?;
            let two_dxi = dxi.scale(&crate::exact_poly::int(2));
            acc.push(ddeta - &ddxi * s.var(VELOCITIES[i]) - two_dxi * s.var(ACCELERATIONS[i]));
        }
        Some(to3(acc))
    } else {
        None
    };
    Ok(ProlongedField {
        base: u.clone(),
        vel_coeffs: to3(vel),
        acc_coeffs,
    })
}

fn to3(v: Vec<Poly>) -> [Poly; 3] {
    v.try_into().expect("three components")
}

/// `pr2(u)` applied to `qdd_i - a_i(q, qd)`, then restricted to solutions by
/// substituting `qdd = a`. All three vanish iff `u` is a Lie point symmetry.
pub fn determining_residuals(u: &JetVectorField) -> Result<[Poly; 3]> {
    let pr = prolong(u, 2)?;
    let eqs = euler_lagrange_residuals(u.space.vars());
    let mut out = Vec::with_capacity(3);
    for e in &eqs {
        out.push(u.space.on_shell(&pr.apply(e)?)?);
    }
    Ok(to3(out))
}

/// `pr1(u) L + L D_t xi`; zero iff `u` is a variational symmetry
/// (without divergence term).
pub fn variational_residual(u: &JetVectorField) -> Result<Poly> {
    let pr = prolong(u, 1)?;
    let l = lagrangian(u.space.vars());
    Ok(pr.apply(&l)? + &l * u.space.total_derivative(&u.xi)?)
}
