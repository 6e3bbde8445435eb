//! The Maxwell-Bloch system in its three equivalent forms.
//!
//! * `Mb5`: the five-dimensional Poisson system on `(x1, y1, x2, y2, z)`.
//! * `Ham6`: the canonical Hamiltonian realization on `(q1, q2, q3, p1, p2, p3)`.
//! * `El6`: the Euler-Lagrange equations, written first-order on
//!   `(q1, q2, q3, qd1, qd2, qd3)`.
//!
//! Each right-hand side, first integral and connecting map is defined once as
//! an exact [`Poly`]; the float versions used by the integrators are compiled
//! from those polynomials, so the two renditions cannot drift apart.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_poly::{rank, rat, rational_from_f64, CompiledPoly, Poly, Rational, VarSet};

pub const STATE5_VARS: [&str; 5] = ["x1", "y1", "x2", "y2", "z"];
pub const CANONICAL_VARS: [&str; 6] = ["q1", "q2", "q3", "p1", "p2", "p3"];
pub const TANGENT_VARS: [&str; 6] = ["q1", "q2", "q3", "qd1", "qd2", "qd3"];

fn cached(cell: &'static OnceLock<VarSet>, names: &[&str]) -> VarSet {
    cell.get_or_init(|| VarSet::new(names).expect("static names are distinct"))
        .clone()
}

pub fn state5_vars() -> VarSet {
    static CELL: OnceLock<VarSet> = OnceLock::new();
    cached(&CELL, &STATE5_VARS)
}

pub fn canonical_vars() -> VarSet {
    static CELL: OnceLock<VarSet> = OnceLock::new();
    cached(&CELL, &CANONICAL_VARS)
}

pub fn tangent_vars() -> VarSet {
    static CELL: OnceLock<VarSet> = OnceLock::new();
    cached(&CELL, &TANGENT_VARS)
}

/// Variable `name` of `vars`. Panics if absent; only used with the fixed sets above
/// or sets built from them.
pub(crate) fn v(vars: &VarSet, name: &str) -> Poly {
    Poly::var(vars, name).unwrap_or_else(|e| panic!("{e}"))
}

/// `sum_i grad(f)_i * field_i`, with `field` listed in the order of `coords`.
pub fn directional_derivative(f: &Poly, coords: &[&str], field: &[Poly]) -> Result<Poly> {
    if coords.len() != field.len() {
        return Err(Error::Dimension {
            expected: coords.len(),
            actual: field.len(),
        });
    }
    let mut acc = Poly::zero(f.var_set());
    for (name, comp) in coords.iter().zip(field) {
        acc = acc.checked_add(&f.diff(name)?.checked_mul(comp)?)?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct State5 {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
    pub z: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct State6 {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TangentState6 {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub qd1: f64,
    pub qd2: f64,
    pub qd3: f64,
}

impl State5 {
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64, z: f64) -> Self {
        State5 { x1, y1, x2, y2, z }
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.x1, self.y1, self.x2, self.y2, self.z]
    }

    pub fn from_slice(s: &[f64]) -> Result<Self> {
        match *s {
            [x1, y1, x2, y2, z] => Ok(State5 { x1, y1, x2, y2, z }),
            _ => Err(Error::Dimension {
                expected: 5,
                actual: s.len(),
            }),
        }
    }
}

impl State6 {
    pub fn new(q: [f64; 3], p: [f64; 3]) -> Self {
        State6 {
            q1: q[0],
            q2: q[1],
            q3: q[2],
            p1: p[0],
            p2: p[1],
            p3: p[2],
        }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.q1, self.q2, self.q3, self.p1, self.p2, self.p3]
    }

    pub fn from_slice(s: &[f64]) -> Result<Self> {
        match *s {
            [q1, q2, q3, p1, p2, p3] => Ok(State6::new([q1, q2, q3], [p1, p2, p3])),
            _ => Err(Error::Dimension {
                expected: 6,
                actual: s.len(),
            }),
        }
    }
}

impl TangentState6 {
    pub fn new(q: [f64; 3], qd: [f64; 3]) -> Self {
        TangentState6 {
            q1: q[0],
            q2: q[1],
            q3: q[2],
            qd1: qd[0],
            qd2: qd[1],
            qd3: qd[2],
        }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.q1, self.q2, self.q3, self.qd1, self.qd2, self.qd3]
    }

    pub fn from_slice(s: &[f64]) -> Result<Self> {
        match *s {
            [q1, q2, q3, a, b, c] => Ok(TangentState6::new([q1, q2, q3], [a, b, c])),
            _ => Err(Error::Dimension {
                expected: 6,
                actual: s.len(),
            }),
        }
    }
}

/// The phase space a state or function lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    State5,
    Canonical,
    Tangent,
}

impl Domain {
    pub fn var_set(self) -> VarSet {
        match self {
            Domain::State5 => state5_vars(),
            Domain::Canonical => canonical_vars(),
            Domain::Tangent => tangent_vars(),
        }
    }

    pub fn coordinate_names(self) -> &'static [&'static str] {
        match self {
            Domain::State5 => &STATE5_VARS,
            Domain::Canonical => &CANONICAL_VARS,
            Domain::Tangent => &TANGENT_VARS,
        }
    }

    pub fn dim(self) -> usize {
        self.coordinate_names().len()
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::State5 => "State5",
            Domain::Canonical => "State6",
            Domain::Tangent => "TangentState6",
        })
    }
}

/// A state on any of the three phase spaces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhasePoint {
    State5(State5),
    Canonical(State6),
    Tangent(TangentState6),
}

impl PhasePoint {
    pub fn domain(&self) -> Domain {
        match self {
            PhasePoint::State5(_) => Domain::State5,
            PhasePoint::Canonical(_) => Domain::Canonical,
            PhasePoint::Tangent(_) => Domain::Tangent,
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            PhasePoint::State5(s) => s.to_array().to_vec(),
            PhasePoint::Canonical(s) => s.to_array().to_vec(),
            PhasePoint::Tangent(s) => s.to_array().to_vec(),
        }
    }
}

impl From<State5> for PhasePoint {
    fn from(s: State5) -> Self {
        PhasePoint::State5(s)
    }
}

impl From<State6> for PhasePoint {
    fn from(s: State6) -> Self {
        PhasePoint::Canonical(s)
    }
}

impl From<TangentState6> for PhasePoint {
    fn from(s: TangentState6) -> Self {
        PhasePoint::Tangent(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemId {
    Mb5,
    Ham6,
    El6,
}

impl SystemId {
    pub const ALL: [SystemId; 3] = [SystemId::Mb5, SystemId::Ham6, SystemId::El6];

    pub fn domain(self) -> Domain {
        match self {
            SystemId::Mb5 => Domain::State5,
            SystemId::Ham6 => Domain::Canonical,
            SystemId::El6 => Domain::Tangent,
        }
    }

    pub fn dim(self) -> usize {
        self.domain().dim()
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemId::Mb5 => "mb5",
            SystemId::Ham6 => "ham6",
            SystemId::El6 => "el6",
        }
    }

    /// Right-hand side over the system's own variable set.
    pub fn rhs_symbolic(self) -> Vec<Poly> {
        let vars = self.domain().var_set();
        match self {
            SystemId::Mb5 => mb5_field(&vars),
            SystemId::Ham6 => ham6_field(&vars),
            SystemId::El6 => {
                let mut out: Vec<Poly> = ["qd1", "qd2", "qd3"].iter().map(|n| v(&vars, n)).collect();
                out.extend(euler_lagrange_accelerations(&vars));
                out
            }
        }
    }

    pub(crate) fn compiled(self) -> &'static CompiledField {
        static CELLS: [OnceLock<CompiledField>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        CELLS[self as usize].get_or_init(|| CompiledField::new(self.domain(), &self.rhs_symbolic()))
    }

    pub fn rhs(self, state: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), state)?;
        let mut out = vec![0.0; self.dim()];
        self.compiled().eval(state, &mut out);
        Ok(out)
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_dim(expected: usize, state: &[f64]) -> Result<()> {
    if state.len() == expected {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected,
            actual: state.len(),
        })
    }
}

/// A polynomial vector field lowered to floats, with its Jacobian.
#[derive(Clone, Debug)]
pub(crate) struct CompiledField {
    components: Vec<CompiledPoly>,
    // row-major dim x dim
    jacobian: Vec<CompiledPoly>,
}

impl CompiledField {
    fn new(domain: Domain, field: &[Poly]) -> Self {
        let names = domain.coordinate_names();
        let jacobian = field
            .iter()
            .flat_map(|f| names.iter().map(move |n| f.diff(n).expect("coordinate exists").compile()))
            .collect();
        CompiledField {
            components: field.iter().map(Poly::compile).collect(),
            jacobian,
        }
    }

    pub(crate) fn eval(&self, x: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval(x);
        }
    }

    pub(crate) fn jacobian(&self, x: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.jacobian) {
            *o = c.eval(x);
        }
    }
}

/// `(y1, x1 z, y2, x2 z, -(x1 y1 + x2 y2))` over any set containing the State5 names.
pub(crate) fn mb5_field(vars: &VarSet) -> Vec<Poly> {
    let [x1, y1, x2, y2, z] = STATE5_VARS.map(|n| v(vars, n));
    vec![
        y1.clone(),
        &x1 * &z,
        y2.clone(),
        &x2 * &z,
        -(&x1 * &y1) - &x2 * &y2,
    ]
}

fn ham6_field(vars: &VarSet) -> Vec<Poly> {
    let [q1, q2, _q3, p1, p2, p3] = CANONICAL_VARS.map(|n| v(vars, n));
    let half = rat(1, 2);
    let w = &p3 - (q1.pow(2) + q2.pow(2)).scale(&half);
    vec![
        p1,
        p2,
        w.clone(),
        &q1 * &w,
        &q2 * &w,
        Poly::zero(vars),
    ]
}

/// Accelerations solving the Euler-Lagrange equations:
/// `q1 qd3`, `q2 qd3`, `-(q1 qd1 + q2 qd2)`.
pub fn euler_lagrange_accelerations(vars: &VarSet) -> [Poly; 3] {
    let [q1, q2, _, qd1, qd2, qd3] = TANGENT_VARS.map(|n| v(vars, n));
    [&q1 * &qd3, &q2 * &qd3, -(&q1 * &qd1) - &q2 * &qd2]
}

/// Second-order Euler-Lagrange residuals `qdd_i - a_i(q, qd)` over a set that
/// also contains `qdd1..qdd3`.
pub fn euler_lagrange_residuals(vars: &VarSet) -> [Poly; 3] {
    let acc = euler_lagrange_accelerations(vars);
    let qdd = ["qdd1", "qdd2", "qdd3"].map(|n| v(vars, n));
    [&qdd[0] - &acc[0], &qdd[1] - &acc[1], &qdd[2] - &acc[2]]
}

/// `L = 1/2 (qd1^2 + qd2^2 + qd3^2) + 1/2 qd3 (q1^2 + q2^2)`.
pub fn lagrangian(vars: &VarSet) -> Poly {
    let [q1, q2, _, qd1, qd2, qd3] = TANGENT_VARS.map(|n| v(vars, n));
    let half = rat(1, 2);
    (qd1.pow(2) + qd2.pow(2) + qd3.pow(2)).scale(&half) + (&qd3 * (q1.pow(2) + q2.pow(2))).scale(&half)
}

/// `H~ = 1/2 p1^2 + 1/2 p2^2 + 1/2 (p3 - 1/2 (q1^2 + q2^2))^2`.
pub fn canonical_hamiltonian(vars: &VarSet) -> Poly {
    let [q1, q2, _, p1, p2, p3] = CANONICAL_VARS.map(|n| v(vars, n));
    let half = rat(1, 2);
    let w = &p3 - (q1.pow(2) + q2.pow(2)).scale(&half);
    (p1.pow(2) + p2.pow(2) + w.pow(2)).scale(&half)
}

/// `J~ = q1 p2 - q2 p1`.
pub fn canonical_angular_momentum(vars: &VarSet) -> Poly {
    let [q1, q2, _, p1, p2, _] = CANONICAL_VARS.map(|n| v(vars, n));
    &q1 * &p2 - &q2 * &p1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvariantId {
    H,
    C,
    J,
    Htilde,
    Ctilde,
    Jtilde,
    L,
}

impl InvariantId {
    pub const ALL: [InvariantId; 7] = [
        InvariantId::H,
        InvariantId::C,
        InvariantId::J,
        InvariantId::Htilde,
        InvariantId::Ctilde,
        InvariantId::Jtilde,
        InvariantId::L,
    ];

    pub fn domain(self) -> Domain {
        match self {
            InvariantId::H | InvariantId::C | InvariantId::J => Domain::State5,
            InvariantId::Htilde | InvariantId::Ctilde | InvariantId::Jtilde => Domain::Canonical,
            InvariantId::L => Domain::Tangent,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            InvariantId::H => "H",
            InvariantId::C => "C",
            InvariantId::J => "J",
            InvariantId::Htilde => "Htilde",
            InvariantId::Ctilde => "Ctilde",
            InvariantId::Jtilde => "Jtilde",
            InvariantId::L => "L",
        }
    }

    /// The function as a polynomial over its domain's variable set.
    pub fn symbolic(self) -> Poly {
        let vars = self.domain().var_set();
        let half = rat(1, 2);
        match self {
            InvariantId::H => {
                let [_, y1, _, y2, z] = STATE5_VARS.map(|n| v(&vars, n));
                (y1.pow(2) + y2.pow(2) + z.pow(2)).scale(&half)
            }
            InvariantId::C => {
                let [x1, _, x2, _, z] = STATE5_VARS.map(|n| v(&vars, n));
                (x1.pow(2) + x2.pow(2)).scale(&half) + z
            }
            InvariantId::J => {
                let [x1, y1, x2, y2, _] = STATE5_VARS.map(|n| v(&vars, n));
                &x1 * &y2 - &x2 * &y1
            }
            InvariantId::Htilde => canonical_hamiltonian(&vars),
            InvariantId::Ctilde => v(&vars, "p3"),
            InvariantId::Jtilde => canonical_angular_momentum(&vars),
            InvariantId::L => lagrangian(&vars),
        }
    }

    fn compiled(self) -> &'static CompiledPoly {
        static CELLS: OnceLock<Vec<CompiledPoly>> = OnceLock::new();
        &CELLS.get_or_init(|| InvariantId::ALL.iter().map(|id| id.symbolic().compile()).collect())
            [self as usize]
    }

    /// Value on a raw coordinate slice of the invariant's own domain.
    pub fn eval_slice(self, state: &[f64]) -> Result<f64> {
        check_dim(self.domain().dim(), state)?;
        Ok(self.compiled().eval(state))
    }
}

impl fmt::Display for InvariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn invariant(id: InvariantId, state: impl Into<PhasePoint>) -> Result<f64> {
    let point = state.into();
    if point.domain() != id.domain() {
        return Err(Error::InvariantDomain {
            invariant: id.name().into(),
            domain: point.domain().to_string(),
        });
    }
    id.eval_slice(&point.to_vec())
}

/// Components of the map `(q, p) -> (x1, y1, x2, y2, z)` over the canonical set.
pub fn phi_symbolic() -> Vec<Poly> {
    let vars = canonical_vars();
    let [q1, q2, _, p1, p2, p3] = CANONICAL_VARS.map(|n| v(&vars, n));
    let z = &p3 - (q1.pow(2) + q2.pow(2)).scale(&rat(1, 2));
    vec![q1, p1, q2, p2, z]
}

/// Bindings that pull a State5 polynomial back along the map to the canonical set.
pub fn phi_bindings() -> Vec<(&'static str, Poly)> {
    STATE5_VARS.into_iter().zip(phi_symbolic()).collect()
}

/// Pull-back `f o phi` of a polynomial over the State5 set.
pub fn pull_back_phi(f: &Poly) -> Result<Poly> {
    f.compose(&canonical_vars(), &phi_bindings())
}

pub fn phi(s: State6) -> State5 {
    static CELL: OnceLock<Vec<CompiledPoly>> = OnceLock::new();
    let comps = CELL.get_or_init(|| phi_symbolic().iter().map(Poly::compile).collect());
    let x = s.to_array();
    let out: Vec<f64> = comps.iter().map(|c| c.eval(&x)).collect();
    State5::from_slice(&out).expect("five components")
}

/// `p_i = dL/dqd_i` as polynomials over the tangent set, in canonical order `(q, p)`.
pub fn legendre_symbolic() -> Vec<Poly> {
    let vars = tangent_vars();
    let l = lagrangian(&vars);
    let mut out: Vec<Poly> = ["q1", "q2", "q3"].iter().map(|n| v(&vars, n)).collect();
    out.extend(["qd1", "qd2", "qd3"].iter().map(|n| l.diff(n).expect("velocity exists")));
    out
}

/// Inverse fibre map as polynomials over the canonical set, in tangent order `(q, qd)`.
pub fn legendre_inv_symbolic() -> Vec<Poly> {
    let vars = canonical_vars();
    let [q1, q2, q3, p1, p2, p3] = CANONICAL_VARS.map(|n| v(&vars, n));
    let qd3 = &p3 - (q1.pow(2) + q2.pow(2)).scale(&rat(1, 2));
    vec![q1, q2, q3, p1, p2, qd3]
}

pub fn legendre(ts: TangentState6) -> State6 {
    static CELL: OnceLock<Vec<CompiledPoly>> = OnceLock::new();
    let comps = CELL.get_or_init(|| legendre_symbolic().iter().map(Poly::compile).collect());
    let x = ts.to_array();
    let out: Vec<f64> = comps.iter().map(|c| c.eval(&x)).collect();
    State6::from_slice(&out).expect("six components")
}

pub fn legendre_inv(s: State6) -> TangentState6 {
    static CELL: OnceLock<Vec<CompiledPoly>> = OnceLock::new();
    let comps = CELL.get_or_init(|| legendre_inv_symbolic().iter().map(Poly::compile).collect());
    let x = s.to_array();
    let out: Vec<f64> = comps.iter().map(|c| c.eval(&x)).collect();
    TangentState6::from_slice(&out).expect("six components")
}

/// Rank of the 5x6 Jacobian of `phi` at `sample`, computed exactly from the
/// symbolic Jacobian evaluated at the (exact) rational value of the sample.
pub fn jacobian_rank_phi(sample: State6) -> Result<usize> {
    let coords = sample.to_array();
    let mut point: HashMap<&str, Rational> = HashMap::new();
    for (name, x) in CANONICAL_VARS.iter().zip(coords) {
        let r = rational_from_f64(x)
            .ok_or_else(|| Error::InvalidArgument(format!("non-finite coordinate {name} = {x}")))?;
        point.insert(name, r);
    }
    let mut rows = Vec::with_capacity(5);
    for comp in phi_symbolic() {
        let mut row = Vec::with_capacity(6);
        for name in CANONICAL_VARS {
            row.push(comp.diff(name)?.eval_exact(&point)?);
        }
        rows.push(row);
    }
    Ok(rank(rows))
}

/// Residuals whose vanishing certifies that the canonical system realizes the
/// five-dimensional one and that the Lagrangian picture is equivalent.
/// Each entry is `(label, residual)` over the canonical or tangent set.
pub fn realization_residuals() -> Result<Vec<(String, Poly)>> {
    let can = canonical_vars();
    let tan = tangent_vars();
    let mut out = Vec::new();

    for (five, six) in [
        (InvariantId::H, InvariantId::Htilde),
        (InvariantId::C, InvariantId::Ctilde),
        (InvariantId::J, InvariantId::Jtilde),
    ] {
        let lhs = pull_back_phi(&five.symbolic())?;
        out.push((format!("{five} o phi - {six}"), lhs - six.symbolic()));
    }

    // D(phi) . X_ham6 = X_mb5 o phi
    let ham = SystemId::Ham6.rhs_symbolic();
    let mb = SystemId::Mb5.rhs_symbolic();
    for ((name, comp), target) in STATE5_VARS.iter().zip(phi_symbolic()).zip(&mb) {
        let pushed = directional_derivative(&comp, &CANONICAL_VARS, &ham)?;
        let pulled = pull_back_phi(target)?;
        out.push((format!("dphi.ham6 - mb5 o phi [{name}]"), pushed - pulled));
    }

    // H~ o FL = sum p_i qd_i - L
    let fl = legendre_symbolic();
    let fl_bindings: Vec<(&str, Poly)> = CANONICAL_VARS.iter().copied().zip(fl.iter().cloned()).collect();
    let h_fl = canonical_hamiltonian(&can).compose(&tan, &fl_bindings)?;
    let mut energy = -lagrangian(&tan);
    for (p, qd) in fl[3..].iter().zip(["qd1", "qd2", "qd3"]) {
        energy = energy + p * v(&tan, qd);
    }
    out.push(("Htilde o FL - (p.qd - L)".into(), h_fl - energy));

    // FL^-1 o FL = id on the tangent set, FL o FL^-1 = id on the canonical set.
    let inv = legendre_inv_symbolic();
    for (name, comp) in TANGENT_VARS.iter().zip(&inv) {
        let round = comp.compose(&tan, &fl_bindings)?;
        out.push((format!("FL^-1 o FL - id [{name}]"), round - v(&tan, name)));
    }
    let inv_bindings: Vec<(&str, Poly)> = TANGENT_VARS.iter().copied().zip(inv.iter().cloned()).collect();
    for (name, comp) in CANONICAL_VARS.iter().zip(&fl) {
        let round = comp.compose(&can, &inv_bindings)?;
        out.push((format!("FL o FL^-1 - id [{name}]"), round - v(&can, name)));
    }

    // The first-order tangent system is the Euler-Lagrange system: substituting
    // its accelerations into qdd_i - a_i leaves nothing, and the Euler-Lagrange
    // operator of L reproduces those accelerations.
    let jet = tan.extend(&["qdd1", "qdd2", "qdd3"])?;
    let el = SystemId::El6.rhs_symbolic();
    let acc_bindings: Vec<(&str, Poly)> = ["qdd1", "qdd2", "qdd3"]
        .into_iter()
        .zip(el[3..].iter().map(|p| p.embed(&jet).expect("subset")))
        .collect();
    let lag = lagrangian(&jet);
    for (i, res) in euler_lagrange_residuals(&jet).iter().enumerate() {
        out.push((
            format!("el6 into second-order residual [{}]", i + 1),
            res.substitute(&acc_bindings)?,
        ));
        // d/dt dL/dqd_i - dL/dq_i, expanded with the chain rule on (q, qd, qdd)
        let momentum = lag.diff(&format!("qd{}", i + 1))?;
        let mut dt = Poly::zero(&jet);
        for k in 1..=3 {
            dt = dt
                + momentum.diff(&format!("q{k}"))? * v(&jet, &format!("qd{k}"))
                + momentum.diff(&format!("qd{k}"))? * v(&jet, &format!("qdd{k}"));
        }
        let euler = dt - lag.diff(&format!("q{}", i + 1))?;
        out.push((format!("Euler-Lagrange(L) - residual [{}]", i + 1), euler - res));
    }

    // Hamilton's equations of H~ reproduce the ham6 field.
    let h = canonical_hamiltonian(&can);
    for i in 1..=3 {
        let qdot = h.diff(&format!("p{i}"))?;
        let pdot = -h.diff(&format!("q{i}"))?;
        out.push((format!("dH~/dp{i} - ham6[q{i}]"), qdot - &ham[i - 1]));
        out.push((format!("-dH~/dq{i} - ham6[p{i}]"), pdot - &ham[i + 2]));
    }

    Ok(out)
}

/// Time derivatives of the first integrals along their own systems; all zero.
pub fn conservation_residuals() -> Result<Vec<(String, Poly)>> {
    let mut out = Vec::new();
    for (system, ids) in [
        (SystemId::Mb5, [InvariantId::H, InvariantId::C, InvariantId::J]),
        (SystemId::Ham6, [InvariantId::Htilde, InvariantId::Ctilde, InvariantId::Jtilde]),
    ] {
        let field = system.rhs_symbolic();
        for id in ids {
            let d = directional_derivative(&id.symbolic(), system.domain().coordinate_names(), &field)?;
            out.push((format!("d{id}/dt along {system}"), d));
        }
    }
    Ok(out)
}
