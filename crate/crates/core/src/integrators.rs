//! Fixed-step time integration with invariant bookkeeping.
//!
//! Explicit RK4 is the baseline; the implicit midpoint rule is the
//! structure-preserving scheme (symplectic, and exact on quadratic invariants
//! up to the Newton tolerance).

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{legendre, legendre_inv, Domain, InvariantId, State6, SystemId, TangentState6};

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntegratorId {
    Rk4,
    ImplicitMidpoint,
}

impl IntegratorId {
    pub const ALL: [IntegratorId; 2] = [IntegratorId::Rk4, IntegratorId::ImplicitMidpoint];

    pub fn name(self) -> &'static str {
        match self {
            IntegratorId::Rk4 => "rk4",
            IntegratorId::ImplicitMidpoint => "midpoint",
        }
    }

    /// Classical order of accuracy.
    pub fn order(self) -> u32 {
        match self {
            IntegratorId::Rk4 => 4,
            IntegratorId::ImplicitMidpoint => 2,
        }
    }
}

impl fmt::Display for IntegratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntegratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(IntegratorId::Rk4),
            "midpoint" | "implicit-midpoint" => Ok(IntegratorId::ImplicitMidpoint),
            _ => Err(Error::InvalidArgument(format!("unknown method `{s}` (expected rk4 or midpoint)"))),
        }
    }
}

/// Autonomous vector field `xdot = F(x)` with its Jacobian.
pub trait Dynamics {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64], out: &mut [f64]);
    /// Row-major `dim x dim`.
    fn jacobian(&self, x: &[f64], out: &mut [f64]);
}

impl Dynamics for SystemId {
    fn dim(&self) -> usize {
        SystemId::dim(*self)
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        self.compiled().eval(x, out)
    }

    fn jacobian(&self, x: &[f64], out: &mut [f64]) {
        self.compiled().jacobian(x, out)
    }
}

/// `xdot = x` in `dim` dimensions; solution `x0 e^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentialGrowth {
    pub dim: usize,
}

impl Dynamics for ExponentialGrowth {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(x);
    }

    fn jacobian(&self, _x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for i in 0..self.dim {
            out[i * self.dim + i] = 1.0;
        }
    }
}

/// `xdot = -F(x)`: stepping it forward steps `F` backward in time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reversed<D>(pub D);

impl<D: Dynamics> Dynamics for Reversed<D> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        self.0.eval(x, out);
        out.iter_mut().for_each(|v| *v = -*v);
    }

    fn jacobian(&self, x: &[f64], out: &mut [f64]) {
        self.0.jacobian(x, out);
        out.iter_mut().for_each(|v| *v = -*v);
    }
}

fn axpy(x: &[f64], a: f64, k: &[f64], out: &mut [f64]) {
    for ((o, xi), ki) in out.iter_mut().zip(x).zip(k) {
        *o = xi + a * ki;
    }
}

pub fn rk4_step<D: Dynamics + ?Sized>(f: &D, x: &[f64], h: f64) -> Vec<f64> {
    let n = x.len();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    f.eval(x, &mut k1);
    axpy(x, 0.5 * h, &k1, &mut tmp);
    f.eval(&tmp, &mut k2);
    axpy(x, 0.5 * h, &k2, &mut tmp);
    f.eval(&tmp, &mut k3);
    axpy(x, h, &k3, &mut tmp);
    f.eval(&tmp, &mut k4);
    (0..n)
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Solves `y = x + h F((x + y) / 2)` by Newton's method from an explicit
/// Euler guess, stopping once the max-norm of the update is `<= NEWTON_TOL`.
pub fn midpoint_step<D: Dynamics + ?Sized>(f: &D, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = x.len();
    let mut fx = vec![0.0; n];
    f.eval(x, &mut fx);
    let mut y: Vec<f64> = (0..n).map(|i| x[i] + h * fx[i]).collect();
    let mut mid = vec![0.0; n];
    let mut jac = vec![0.0; n * n];
    let mut last = f64::INFINITY;
    for _ in 0..NEWTON_MAX_ITER {
        for i in 0..n {
            mid[i] = 0.5 * (x[i] + y[i]);
        }
        f.eval(&mid, &mut fx);
        f.jacobian(&mid, &mut jac);
        let g = DVector::from_fn(n, |i, _| -(y[i] - x[i] - h * fx[i]));
        let a = DMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            id - 0.5 * h * jac[i * n + j]
        });
        let Some(d) = a.lu().solve(&g) else {
            return Err(Error::NewtonDivergence {
                iterations: 0,
                last_update: last,
            });
        };
        last = d.amax();
        for i in 0..n {
            y[i] += d[i];
        }
        if !last.is_finite() {
            break;
        }
        if last <= NEWTON_TOL {
            return Ok(y);
        }
    }
    Err(Error::NewtonDivergence {
        iterations: NEWTON_MAX_ITER,
        last_update: last,
    })
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("step size must be positive and finite, got {h}")))
    }
}

fn check_dim<D: Dynamics + ?Sized>(f: &D, state: &[f64]) -> Result<()> {
    if state.len() != f.dim() {
        return Err(Error::Dimension {
            expected: f.dim(),
            actual: state.len(),
        });
    }
    Ok(())
}

pub fn step_with<D: Dynamics + ?Sized>(method: IntegratorId, f: &D, state: &[f64], h: f64) -> Result<Vec<f64>> {
    check_step(h)?;
    check_dim(f, state)?;
    match method {
        IntegratorId::Rk4 => Ok(rk4_step(f, state, h)),
        IntegratorId::ImplicitMidpoint => midpoint_step(f, state, h),
    }
}

/// One step of `method`. The systems are autonomous, so `t` only enters
/// through error messages.
pub fn step(method: IntegratorId, system: SystemId, state: &[f64], t: f64, h: f64) -> Result<Vec<f64>> {
    let out = step_with(method, &system, state, h)?;
    if out.iter().all(|v| v.is_finite()) {
        Ok(out)
    } else {
        Err(Error::BlowUp { time: t + h })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// `None` for trajectories of auxiliary test dynamics.
    pub system: Option<SystemId>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub h: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectories hold at least the initial state")
    }
}

/// Steps from `t0` to `t_end` with step `h`, shortening the last step so the
/// final time is exactly `t_end`.
pub fn integrate_with<D: Dynamics + ?Sized>(
    method: IntegratorId,
    f: &D,
    init: &[f64],
    t0: f64,
    t_end: f64,
    h: f64,
) -> Result<Trajectory> {
    check_step(h)?;
    check_dim(f, init)?;
    if !(t_end >= t0) {
        return Err(Error::InvalidArgument(format!("t_end = {t_end} precedes t0 = {t0}")));
    }
    let span = t_end - t0;
    let ratio = span / h;
    // A span that is a whole number of steps up to rounding gets no sliver step.
    let nearest = ratio.round();
    let (full, partial) = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        (nearest as usize, 0.0)
    } else {
        let k = ratio.floor();
        (k as usize, span - k * h)
    };

    let total = full + usize::from(partial > 0.0);
    let mut times = Vec::with_capacity(total + 1);
    let mut states = Vec::with_capacity(total + 1);
    times.push(t0);
    states.push(init.to_vec());
    let mut x = init.to_vec();
    for k in 1..=total {
        let (hk, tk) = if k <= full {
            (h, if k == full && partial == 0.0 { t_end } else { t0 + k as f64 * h })
        } else {
            (partial, t_end)
        };
        x = step_with(method, f, &x, hk)?;
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::BlowUp { time: tk });
        }
        times.push(tk);
        states.push(x.clone());
    }
    Ok(Trajectory {
        system: None,
        times,
        states,
        h,
    })
}

pub fn integrate(
    method: IntegratorId,
    system: SystemId,
    init: &[f64],
    t0: f64,
    t_end: f64,
    h: f64,
) -> Result<Trajectory> {
    let mut traj = integrate_with(method, &system, init, t0, t_end, h)?;
    traj.system = Some(system);
    Ok(traj)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantDrift {
    pub invariant: InvariantId,
    pub initial: f64,
    pub max_abs_deviation: f64,
    pub final_deviation: f64,
}

impl InvariantDrift {
    /// Maximum deviation relative to `|initial|` (absolute when the initial value is 0).
    pub fn max_relative_deviation(&self) -> f64 {
        if self.initial == 0.0 {
            self.max_abs_deviation
        } else {
            self.max_abs_deviation / self.initial.abs()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub entries: Vec<InvariantDrift>,
}

impl DriftReport {
    pub fn get(&self, id: InvariantId) -> Option<&InvariantDrift> {
        self.entries.iter().find(|e| e.invariant == id)
    }
}

/// Evaluates `id` on a raw state of `system`. Canonical invariants are also
/// accepted on Lagrangian states, through the fibre derivative.
pub fn invariant_on(system: SystemId, id: InvariantId, state: &[f64]) -> Result<f64> {
    match (system.domain(), id.domain()) {
        (a, b) if a == b => id.eval_slice(state),
        (Domain::Tangent, Domain::Canonical) => {
            let ts = TangentState6::from_slice(state)?;
            id.eval_slice(&legendre(ts).to_array())
        }
        (_, domain) => Err(Error::InvariantDomain {
            invariant: id.name().into(),
            domain: format!("{} (trajectory of {system}, invariant needs {domain})", system.domain()),
        }),
    }
}

pub fn drift_report(traj: &Trajectory, invariants: &[InvariantId]) -> Result<DriftReport> {
    let system = traj
        .system
        .ok_or_else(|| Error::InvalidArgument("trajectory is not tagged with a system".into()))?;
    let mut entries = Vec::with_capacity(invariants.len());
    for &id in invariants {
        let initial = invariant_on(system, id, &traj.states[0])?;
        let mut max_dev: f64 = 0.0;
        let mut dev = 0.0;
        for s in &traj.states {
            dev = (invariant_on(system, id, s)? - initial).abs();
            max_dev = max_dev.max(dev);
        }
        entries.push(InvariantDrift {
            invariant: id,
            initial,
            max_abs_deviation: max_dev,
            final_deviation: dev,
        });
    }
    Ok(DriftReport { entries })
}

/// Tangent state whose Legendre image is the given canonical state.
pub fn lagrangian_state(canonical: &[f64]) -> Result<Vec<f64>> {
    Ok(legendre_inv(State6::from_slice(canonical)?).to_array().to_vec())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub h0: f64,
    /// Max-norm error at `t_end` for `h0` and `h0 / 2` against an `h0 / 64` reference.
    pub err_h: f64,
    pub err_h2: f64,
    pub order: f64,
}

pub fn convergence_order_with<D: Dynamics + ?Sized>(
    method: IntegratorId,
    f: &D,
    init: &[f64],
    t_end: f64,
    h0: f64,
) -> Result<ConvergenceStudy> {
    let end = |h: f64| -> Result<Vec<f64>> { Ok(integrate_with(method, f, init, 0.0, t_end, h)?.last().to_vec()) };
    let reference = end(h0 / 64.0)?;
    let dist = |a: &[f64]| a.iter().zip(&reference).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let err_h = dist(&end(h0)?);
    let err_h2 = dist(&end(h0 / 2.0)?);
    Ok(ConvergenceStudy {
        h0,
        err_h,
        err_h2,
        order: (err_h / err_h2).log2(),
    })
}

pub fn convergence_order(
    method: IntegratorId,
    system: SystemId,
    init: &[f64],
    t_end: f64,
    h0: f64,
) -> Result<ConvergenceStudy> {
    convergence_order_with(method, &system, init, t_end, h0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: [f64; 5] = [1.0, 0.5, -0.3, 0.2, 0.1];

    // Independent oracle: RK4 written out against the closed-form field.
    fn mb5(x: &[f64; 5]) -> [f64; 5] {
        let [x1, y1, x2, y2, z] = *x;
        [y1, x1 * z, y2, x2 * z, -(x1 * y1 + x2 * y2)]
    }

    fn oracle_rk4(x: [f64; 5], h: f64) -> [f64; 5] {
        let add = |a: [f64; 5], s: f64, b: [f64; 5]| std::array::from_fn(|i| a[i] + s * b[i]);
        let k1 = mb5(&x);
        let k2 = mb5(&add(x, h / 2.0, k1));
        let k3 = mb5(&add(x, h / 2.0, k2));
        let k4 = mb5(&add(x, h, k3));
        std::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
    }

    #[test]
    fn rk4_matches_oracle() {
        let got = step(IntegratorId::Rk4, SystemId::Mb5, &FIXTURE, 0.0, 1e-3).unwrap();
        let want = oracle_rk4(FIXTURE, 1e-3);
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= 1e-15, "{g} vs {w}");
        }
    }

    #[test]
    fn equilibrium_is_fixed() {
        let eq = [0.0, 0.0, 0.0, 0.0, 1.0];
        for m in IntegratorId::ALL {
            assert_eq!(step(m, SystemId::Mb5, &eq, 0.0, 0.1).unwrap(), eq);
            let tr = integrate(m, SystemId::Mb5, &eq, 0.0, 1.0, 0.1).unwrap();
            assert!(tr.states.iter().all(|s| s == &eq));
            let d = drift_report(&tr, &[InvariantId::H, InvariantId::C, InvariantId::J]).unwrap();
            assert!(d.entries.iter().all(|e| e.max_abs_deviation == 0.0));
        }
    }

    #[test]
    fn midpoint_keeps_p3() {
        let x = [1.0, -0.3, 0.0, 0.5, 0.2, 0.645];
        let y = step(IntegratorId::ImplicitMidpoint, SystemId::Ham6, &x, 0.0, 0.1).unwrap();
        assert!((y[5] - x[5]).abs() <= NEWTON_TOL);
    }

    #[test]
    fn time_grid() {
        let tr = integrate(IntegratorId::Rk4, SystemId::Mb5, &FIXTURE, 0.0, 1.0, 0.3).unwrap();
        assert_eq!(tr.times.len(), 5);
        assert_eq!(*tr.times.last().unwrap(), 1.0);
        let tr = integrate(IntegratorId::Rk4, SystemId::Mb5, &FIXTURE, 0.0, 1.0, 0.1).unwrap();
        assert_eq!(tr.times.len(), 11);
        assert_eq!(*tr.times.last().unwrap(), 1.0);
        let tr = integrate(IntegratorId::Rk4, SystemId::Mb5, &FIXTURE, 2.0, 2.0, 0.1).unwrap();
        assert_eq!(tr.len(), 1);
    }

    #[test]
    fn bad_arguments() {
        assert!(integrate(IntegratorId::Rk4, SystemId::Mb5, &FIXTURE, 0.0, 1.0, 0.0).is_err());
        assert!(integrate(IntegratorId::Rk4, SystemId::Mb5, &FIXTURE, 1.0, 0.0, 0.1).is_err());
        assert!(matches!(
            integrate(IntegratorId::Rk4, SystemId::Ham6, &FIXTURE, 0.0, 1.0, 0.1),
            Err(Error::Dimension { expected: 6, actual: 5 })
        ));
        let tr = integrate(IntegratorId::Rk4, SystemId::Mb5, &FIXTURE, 0.0, 0.1, 0.1).unwrap();
        assert!(matches!(drift_report(&tr, &[InvariantId::Htilde]), Err(Error::InvariantDomain { .. })));
    }

    #[test]
    fn blow_up_is_reported() {
        let big = [1e150, 1e150, 0.0, 0.0, 1e150];
        let err = integrate(IntegratorId::Rk4, SystemId::Mb5, &big, 0.0, 1.0, 0.1).unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }));
    }

    #[test]
    fn newton_failure_is_reported() {
        struct Stiff;
        impl Dynamics for Stiff {
            fn dim(&self) -> usize {
                1
            }
            fn eval(&self, x: &[f64], out: &mut [f64]) {
                out[0] = x[0] * x[0];
            }
            fn jacobian(&self, x: &[f64], out: &mut [f64]) {
                out[0] = 2.0 * x[0];
            }
        }
        // y = 1 + h ((1 + y) / 2)^2 has no real root for h = 10.
        let err = midpoint_step(&Stiff, &[1.0], 10.0).unwrap_err();
        assert!(matches!(err, Error::NewtonDivergence { .. }));
    }

    #[test]
    fn exponential_growth_orders() {
        let f = ExponentialGrowth { dim: 1 };
        let tr = integrate_with(IntegratorId::Rk4, &f, &[1.0], 0.0, 1.0, 1e-3).unwrap();
        assert!((tr.last()[0] - 1f64.exp()).abs() < 1e-12);
        let rk = convergence_order_with(IntegratorId::Rk4, &f, &[1.0], 1.0, 0.1).unwrap();
        assert!((rk.order - 4.0).abs() < 0.2, "{rk:?}");
        let mp = convergence_order_with(IntegratorId::ImplicitMidpoint, &f, &[1.0], 1.0, 0.1).unwrap();
        assert!((mp.order - 2.0).abs() < 0.1, "{mp:?}");
    }

    #[test]
    fn midpoint_is_symmetric() {
        let x = [1.0, -0.3, 0.0, 0.5, 0.2, 0.645];
        let y = midpoint_step(&SystemId::Ham6, &x, 0.05).unwrap();
        let back = midpoint_step(&Reversed(SystemId::Ham6), &y, 0.05).unwrap();
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() <= 10.0 * NEWTON_TOL);
        }
    }

    #[test]
    fn lagrangian_trajectory_invariants() {
        let ts = lagrangian_state(&[1.0, -0.3, 0.0, 0.5, 0.2, 0.645]).unwrap();
        let tr = integrate(IntegratorId::Rk4, SystemId::El6, &ts, 0.0, 1.0, 1e-2).unwrap();
        let d = drift_report(&tr, &[InvariantId::Htilde, InvariantId::Ctilde, InvariantId::Jtilde]).unwrap();
        assert!(d.entries.iter().all(|e| e.max_abs_deviation < 1e-9), "{d:?}");
    }
}
