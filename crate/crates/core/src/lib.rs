//! Exact measure-valued solutions of the neutral Kimura drift-diffusion
//! equation
//!
//! ```text
//! ∂ₜp = ∂ₓ²(x(1−x)p),   x ∈ [0,1]
//! ```
//!
//! written as `p(x,t) = a(t)δ₀ + r(x,t) + b(t)δ₁`, where the interior density
//! `r` is expanded in shifted Gegenbauer polynomials `C_n^{3/2}(2x−1)` and the
//! boundary masses `a` (extinction) and `b` (fixation) are fixed by
//! conservation of total mass and of the first moment.
//!
//! The crate also carries everything needed to check that construction
//! independently: Gegenbauer evaluation and closed-form integral identities
//! ([`special`]), Gauss-Legendre and adaptive quadrature ([`quadrature`]),
//! a neutral Wright-Fisher Monte Carlo oracle ([`wf`]) and an
//! identity-versus-quadrature suite ([`verify`]).

pub mod chebyshev;
pub mod error;
pub mod kimura;
pub mod quadrature;
pub mod special;
pub mod verify;
pub mod wf;

pub use error::{Error, Result};
pub use kimura::{
    asymptotic_fixation, project_coefficients, ConservationReport, InitialCondition,
    MeasureSolution, SpectralCoefficients,
};
pub use quadrature::{adaptive_integrate, gauss_legendre, integrate, Interval, QuadratureRule};
pub use special::{GegenbauerParam, GeneratingFunctionPoint};
pub use wf::{simulate, time_map, WfConfig, WfTrajectoryStats};
