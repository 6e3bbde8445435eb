//! Transport of point symmetries to the canonical and five-dimensional pictures,
//! and their interplay with the five-dimensional dynamics.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact_poly::{rat, Poly, VarSet};
use crate::model::{lagrangian, legendre_inv_symbolic, mb5_field, phi_symbolic, v, STATE5_VARS};

use super::family::PARAM_NAMES;
use super::field::{lie_bracket, PolyField};
use super::jet::{determining_residuals, prolong, JetVectorField, VELOCITIES};

pub const EXT_CANONICAL_COORDS: [&str; 7] = ["t", "q1", "q2", "q3", "p1", "p2", "p3"];
pub const EXT5_COORDS: [&str; 6] = ["t", "x1", "y1", "x2", "y2", "z"];

fn with_params<S: AsRef<str>>(coords: &[&str], params: &[S]) -> Result<VarSet> {
    let mut names: Vec<&str> = coords.to_vec();
    names.extend(params.iter().map(AsRef::as_ref));
    VarSet::new(&names)
}

/// `(t, x1, y1, x2, y2, z)` followed by `params`.
pub fn ext5_vars<S: AsRef<str>>(params: &[S]) -> Result<VarSet> {
    with_params(&EXT5_COORDS, params)
}

/// `(t, q1..q3, p1..p3)` followed by `params`.
pub fn ext_canonical_vars<S: AsRef<str>>(params: &[S]) -> Result<VarSet> {
    with_params(&EXT_CANONICAL_COORDS, params)
}

/// Vector field `xi d/dt + sum eta_i d/dx_i` on the extended five-dimensional
/// space; extra variables of the set are parameters.
#[derive(Clone, PartialEq)]
pub struct ExtendedVectorField5(PolyField);

impl ExtendedVectorField5 {
    pub fn new(xi: Poly, eta: [Poly; 5]) -> Result<Self> {
        let mut comps = vec![xi];
        comps.extend(eta);
        Ok(ExtendedVectorField5(PolyField::new(&EXT5_COORDS, comps)?))
    }

    pub fn from_field(f: PolyField) -> Result<Self> {
        if f.coords() != EXT5_COORDS {
            return Err(Error::InvalidArgument(format!(
                "expected a field on (t, x1, y1, x2, y2, z), got ({})",
                f.coords().join(",")
            )));
        }
        Ok(ExtendedVectorField5(f))
    }

    pub fn field(&self) -> &PolyField {
        &self.0
    }

    pub fn var_set(&self) -> &VarSet {
        self.0.var_set()
    }

    pub fn xi(&self) -> &Poly {
        &self.0.components()[0]
    }

    /// Spatial components in `(x1, y1, x2, y2, z)` order.
    pub fn eta(&self) -> &[Poly] {
        &self.0.components()[1..]
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for ExtendedVectorField5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for ExtendedVectorField5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtendedVectorField5({})", self.0)
    }
}

/// `V = d/dt + sum F_i d/dx_i` over `vars`.
pub fn dynamics_field(vars: &VarSet) -> Result<ExtendedVectorField5> {
    let f: [Poly; 5] = mb5_field(vars).try_into().expect("five components");
    ExtendedVectorField5::new(Poly::one(vars), f)
}

fn require_symmetry(u: &JetVectorField) -> Result<()> {
    let res = determining_residuals(u)?;
    if let Some((i, r)) = res.iter().enumerate().find(|(_, r)| !r.is_zero()) {
        return Err(Error::NotSymmetry(format!("determining residual {} = {r}", i + 1)));
    }
    Ok(())
}

/// Lift along the fibre derivative: the point components are kept and the
/// momentum components are `pr1(u)(dL/dqd_i)`, both rewritten in `(t, q, p)`.
pub fn pushforward_legendre(u: &JetVectorField) -> Result<PolyField> {
    require_symmetry(u)?;
    let jet = u.space().vars();
    let pr = prolong(u, 1)?;
    let l = lagrangian(jet);
    let mut comps = vec![u.xi.clone()];
    comps.extend(u.eta.iter().cloned());
    for qd in VELOCITIES {
        comps.push(pr.apply(&l.diff(qd)?)?);
    }

    let target = ext_canonical_vars(u.space().params())?;
    let inv = legendre_inv_symbolic();
    let bindings = VELOCITIES
        .iter()
        .zip(&inv[3..])
        .map(|(name, p)| Ok((*name, p.embed(&target)?)))
        .collect::<Result<Vec<_>>>()?;
    let comps = comps
        .iter()
        .map(|c| c.compose(&target, &bindings))
        .collect::<Result<Vec<_>>>()?;
    PolyField::new(&EXT_CANONICAL_COORDS, comps)
}

/// Push-forward along `(q, p) -> (q1, p1, q2, p2, p3 - (q1^2 + q2^2)/2)`.
///
/// The map forgets `q3`, so the transported components must not depend on it.
pub fn pushforward_phi(w: &PolyField) -> Result<ExtendedVectorField5> {
    if w.coords() != EXT_CANONICAL_COORDS {
        return Err(Error::InvalidArgument(format!(
            "expected a field on (t, q, p), got ({})",
            w.coords().join(",")
        )));
    }
    let vars = w.var_set();
    let mut comps = vec![w.components()[0].clone()];
    for phi_k in phi_symbolic() {
        comps.push(w.apply(&phi_k.embed(vars)?)?);
    }
    for (c, name) in comps.iter().zip(EXT5_COORDS) {
        if c.depends_on("q3") {
            return Err(Error::NotProjectable(format!("{name} component {c} depends on q3")));
        }
    }

    let params: Vec<&String> = vars.names()[EXT_CANONICAL_COORDS.len()..].iter().collect();
    let target = ext5_vars(&params)?;
    let [x1, y1, x2, y2, z] = STATE5_VARS.map(|n| v(&target, n));
    let p3 = z + (x1.pow(2) + x2.pow(2)).scale(&rat(1, 2));
    let bindings = [("q1", x1), ("q2", x2), ("p1", y1), ("p2", y2), ("p3", p3)];
    let comps = comps
        .iter()
        .map(|c| c.compose(&target, &bindings))
        .collect::<Result<Vec<_>>>()?;
    ExtendedVectorField5::from_field(PolyField::new(&EXT5_COORDS, comps)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PushTarget {
    /// Fibre derivative to `(t, q, p)`.
    Fl,
    /// Fibre derivative followed by the projection to `(t, x1, y1, x2, y2, z)`.
    Phi,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PushedField {
    Canonical(PolyField),
    Extended(ExtendedVectorField5),
}

pub fn pushforward(u: &JetVectorField, target: PushTarget) -> Result<PushedField> {
    let w = pushforward_legendre(u)?;
    match target {
        PushTarget::Fl => Ok(PushedField::Canonical(w)),
        PushTarget::Phi => Ok(PushedField::Extended(pushforward_phi(&w)?)),
    }
}

/// The canonical family written out by hand, over `ext_canonical_vars(PARAM_NAMES)`:
/// `(-a t + b) d/dt + (a q1 + g q2) d/dq1 + (-g q1 + a q2) d/dq2 + (a q3 + d) d/dq3
///  + (2a p1 + g p2) d/dp1 + (2a p2 - g p1) d/dp2 + 2a p3 d/dp3`.
pub fn displayed_canonical_field() -> PolyField {
    let vars = ext_canonical_vars(&PARAM_NAMES).expect("distinct names");
    let [t, q1, q2, q3, p1, p2, p3] = EXT_CANONICAL_COORDS.map(|n| v(&vars, n));
    let [a, b, g, d] = PARAM_NAMES.map(|n| v(&vars, n));
    let two_a = a.scale(&rat(2, 1));
    let comps = vec![
        -(&a * &t) + &b,
        &a * &q1 + &g * &q2,
        -(&g * &q1) + &a * &q2,
        &a * &q3 + &d,
        &two_a * &p1 + &g * &p2,
        &two_a * &p2 - &g * &p1,
        &two_a * &p3,
    ];
    PolyField::new(&EXT_CANONICAL_COORDS, comps).expect("coordinates in set")
}

/// The five-dimensional field written out by hand, over `ext5_vars(PARAM_NAMES)`:
/// `(-a t + b) d/dt + (a x1 + g x2) d/dx1 + (2a y1 + g y2) d/dy1
///  + (-g x1 + a x2) d/dx2 + (-g y1 + 2a y2) d/dy2 + 2a z d/dz`.
pub fn displayed_x() -> ExtendedVectorField5 {
    let vars = ext5_vars(&PARAM_NAMES).expect("distinct names");
    let [t, x1, y1, x2, y2, z] = EXT5_COORDS.map(|n| v(&vars, n));
    let [a, b, g, _] = PARAM_NAMES.map(|n| v(&vars, n));
    let two_a = a.scale(&rat(2, 1));
    ExtendedVectorField5::new(
        -(&a * &t) + &b,
        [
            &a * &x1 + &g * &x2,
            &two_a * &y1 + &g * &y2,
            -(&g * &x1) + &a * &x2,
            -(&g * &y1) + &two_a * &y2,
            &two_a * &z,
        ],
    )
    .expect("coordinates in set")
}

/// `D_t eta_i - D_t xi F_i - sum_j eta_j dF_i/dx_j`, with `D_t = d/dt + F . grad`.
/// All five vanish iff `X` is a Lie point symmetry of `xdot = F(x)`.
pub fn first_order_symmetry_residual(x: &ExtendedVectorField5) -> Result<[Poly; 5]> {
    let vars = x.var_set();
    let vf = dynamics_field(vars)?;
    let dt = |p: &Poly| vf.field().apply(p);
    let f = vf.eta();
    let dxi = dt(x.xi())?;
    let mut out = Vec::with_capacity(5);
    for i in 0..5 {
        let mut r = dt(&x.eta()[i])? - &dxi * &f[i];
        for (j, name) in STATE5_VARS.iter().enumerate() {
            r = r - &x.eta()[j] * &f[i].diff(name)?;
        }
        out.push(r);
    }
    Ok(out.try_into().expect("five residuals"))
}

/// `[X, V]` and `[[X, V], V]` with the classification derived from them.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorClass {
    pub commutator: ExtendedVectorField5,
    /// `c` with `[X, V] = c V` and `c` free of `(t, x)`, when it exists.
    pub factor: Option<Poly>,
    pub second_commutator: ExtendedVectorField5,
    pub is_symmetry: bool,
    pub is_conformal: bool,
    pub is_master: bool,
}

pub fn dynamics_commutator(x: &ExtendedVectorField5) -> Result<CommutatorClass> {
    let vf = dynamics_field(x.var_set())?;
    let c1 = lie_bracket(x.field(), vf.field())?;
    let c2 = lie_bracket(&c1, vf.field())?;
    // V has unit time component, so the only candidate factor is [X, V]_t.
    let candidate = c1.components()[0].clone();
    let constant = EXT5_COORDS.iter().all(|n| !candidate.depends_on(n));
    let proportional = c1.checked_sub(&vf.field().mul_poly(&candidate)?)?.is_zero();
    let factor = (constant && proportional).then_some(candidate);
    let is_symmetry = c1.is_zero();
    Ok(CommutatorClass {
        is_conformal: factor.is_some(),
        is_master: !is_symmetry && c2.is_zero(),
        is_symmetry,
        factor,
        commutator: ExtendedVectorField5::from_field(c1)?,
        second_commutator: ExtendedVectorField5::from_field(c2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::family::{SymParams, SymmetryFamily};
    use crate::symmetry::jet::JetSpace;

    fn x_of(p: SymParams) -> ExtendedVectorField5 {
        let u = SymmetryFamily::default().instantiate(&p);
        match pushforward(&u, PushTarget::Phi).unwrap() {
            PushedField::Extended(x) => x,
            PushedField::Canonical(_) => unreachable!(),
        }
    }

    #[test]
    fn symbolic_family_matches_hand_written_fields() {
        let u = SymmetryFamily::default().symbolic();
        assert_eq!(pushforward_legendre(&u).unwrap(), displayed_canonical_field());
        let x = pushforward_phi(&displayed_canonical_field()).unwrap();
        assert_eq!(x, displayed_x());
    }

    #[test]
    fn rotation_and_translations() {
        let x = x_of(SymParams::ints(0, 0, 1, 0));
        assert_eq!(x.to_string(), "(x2) d/dx1 + (y2) d/dy1 + (-x1) d/dx2 + (-y1) d/dy2");
        assert!(x_of(SymParams::ints(0, 0, 0, 1)).is_zero());
        assert_eq!(x_of(SymParams::ints(0, 1, 0, 0)).to_string(), "(1) d/dt");
    }

    #[test]
    fn non_symmetry_is_rejected() {
        let s = JetSpace::standard();
        let z = Poly::zero(s.vars());
        let u = JetVectorField::new(&s, z.clone(), [s.var("q1"), z.clone(), z]).unwrap();
        assert!(matches!(pushforward(&u, PushTarget::Fl), Err(Error::NotSymmetry(_))));
    }

    #[test]
    fn q3_dependence_is_not_projectable() {
        let vars = ext_canonical_vars::<&str>(&[]).unwrap();
        let mut comps = vec![Poly::zero(&vars); 7];
        comps[1] = v(&vars, "q3");
        let w = PolyField::new(&EXT_CANONICAL_COORDS, comps).unwrap();
        assert!(matches!(pushforward_phi(&w), Err(Error::NotProjectable(_))));
    }

    #[test]
    fn first_order_residuals() {
        assert!(first_order_symmetry_residual(&displayed_x())
            .unwrap()
            .iter()
            .all(Poly::is_zero));
        let vars = ext5_vars::<&str>(&[]).unwrap();
        assert!(first_order_symmetry_residual(&dynamics_field(&vars).unwrap())
            .unwrap()
            .iter()
            .all(Poly::is_zero));
        let z = Poly::zero(&vars);
        let dil = ExtendedVectorField5::new(
            z.clone(),
            [v(&vars, "x1"), z.clone(), z.clone(), z.clone(), z],
        )
        .unwrap();
        assert!(first_order_symmetry_residual(&dil).unwrap().iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn commutator_classification() {
        let c = dynamics_commutator(&x_of(SymParams::ints(1, 0, 0, 0))).unwrap();
        let vars = ext5_vars::<&str>(&[]).unwrap();
        assert_eq!(c.commutator, dynamics_field(&vars).unwrap());
        assert_eq!(c.factor, Some(Poly::one(&vars)));
        assert!(c.is_conformal && c.is_master && !c.is_symmetry);

        let c = dynamics_commutator(&x_of(SymParams::ints(0, 2, -1, 0))).unwrap();
        assert!(c.is_symmetry && c.is_conformal && !c.is_master);

        let c = dynamics_commutator(&displayed_x()).unwrap();
        let x = displayed_x();
        let alpha = v(x.var_set(), "alpha");
        assert_eq!(c.factor, Some(alpha.clone()));
        assert!(c.second_commutator.is_zero());
        let v_field = dynamics_field(x.var_set()).unwrap();
        assert_eq!(c.commutator.field(), &v_field.field().mul_poly(&alpha).unwrap());
    }

    #[test]
    fn non_conformal_field() {
        let vars = ext5_vars::<&str>(&[]).unwrap();
        let z = Poly::zero(&vars);
        let dil = ExtendedVectorField5::new(
            z.clone(),
            [v(&vars, "x1"), z.clone(), z.clone(), z.clone(), z],
        )
        .unwrap();
        let c = dynamics_commutator(&dil).unwrap();
        assert!(c.factor.is_none() && !c.is_conformal && !c.is_symmetry);
    }
}
