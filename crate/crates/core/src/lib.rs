//! Analysis of asymmetric bidirectional vehicle platoons.
//!
//! - [`numerics`]: polynomials and rational transfer functions.
//! - [`platoon`]: Laplacian construction, real spectrum, uniform bounds and
//!   the diagonal-dominance certificate.
//! - [`closedform`]: closed-form spectrum of homogeneous platoons.
//! - [`analysis`]: product-form transfer function, its state-space check,
//!   H∞ peaks and the harmonic-instability test.
//! - [`sim`]: RK4 time simulation driven by the leader position.

pub mod analysis;
pub mod closedform;
pub mod error;
pub mod models;
pub mod numerics;
pub mod platoon;
pub mod sim;
pub mod statespace;

pub use error::{Error, Result};
pub use numerics::{ComplexValue, Polynomial, RationalTF};
pub use platoon::PlatoonConfig;
