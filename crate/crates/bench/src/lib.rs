//! Shared fixtures for the benchmarks.

use kimura_core::{InitialCondition, WfConfig};

/// Point mass used by the solution benchmarks.
pub fn delta_ic(x0: f64) -> InitialCondition {
    InitialCondition::Delta { x0 }
}

/// `6x(1−x)` on `[0, 1]`.
pub fn parabola_ic() -> InitialCondition {
    InitialCondition::Polynomial { coefficients: vec![0.0, 6.0, -6.0] }
}

/// Small Wright-Fisher run that finishes in milliseconds.
pub fn small_wf(seed: u64) -> WfConfig {
    WfConfig { population_size: 50, x0: 0.3, generations: 100, replicates: 10_000, seed }
}
