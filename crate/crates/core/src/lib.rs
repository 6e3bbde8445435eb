//! Exact certification and fixed-step simulation of the five-dimensional
//! Maxwell-Bloch system (rotating wave approximation), its canonical
//! six-dimensional realization and its Lagrangian form.

pub mod error;
pub mod exact_poly;
pub mod integrators;
pub mod model;
pub mod poisson;
pub mod report;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use exact_poly::{Poly, Rational, VarSet};
pub use integrators::{DriftReport, IntegratorId, Trajectory};
pub use model::{InvariantId, State5, State6, SystemId, TangentState6};
pub use report::{Status, VerificationReport};
pub use symmetry::{ExtendedVectorField5, JetVectorField, SymParams};
pub use verify::{Suite, VerifyConfig};
