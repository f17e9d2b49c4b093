//! Closed-form N-soliton potentials of the nonstationary Schrödinger
//! operator L = i∂_{x₂} + ∂²_{x₁} − u(x) over decaying backgrounds.
//!
//! The library builds real, regular multi-soliton potentials through an
//! N-fold determinant dressing: a Hermitian coupling matrix C plus the
//! x-dependent coupling-integral matrix B(x) form A(x) = C + B(x), whose
//! determinant calculus yields the potential, the dressed Jost solutions,
//! transmission coefficients, spectral data, and large-time ray asymptotics
//! in closed form. A quadrature-based step-by-step recursion serves as an
//! independent oracle for every closed formula.

pub mod asymptotics;
pub mod background;
pub mod config;
pub mod dressing;
pub mod error;
pub mod golden;
pub mod linalg;
pub mod quad;
pub mod recursion;
pub mod spectral;
pub mod verify;

pub use background::BackgroundModel;
pub use config::{CouplingMatrix, DressingConfig, Point, SpectralParameters};
pub use error::{Error, Result};
pub use linalg::Cx;
