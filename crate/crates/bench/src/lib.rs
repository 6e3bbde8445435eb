//! Shared fixtures for the benchmarks.

/// A generic `mb5` state away from the equilibria.
pub const STATE5: [f64; 5] = [1.0, 0.5, -0.3, 0.2, 0.1];

/// A `ham6` state with the same `(x, y)` image as [`STATE5`] under the reduction map.
pub const STATE6: [f64; 6] = [1.0, -0.3, 0.0, 0.5, 0.2, 0.645];
