//! Certified computation of `M_theta(n) = floor(1 / frac(theta^(1/n)))`.
//!
//! `exact` supplies the certified arithmetic, `mfun` the function itself,
//! `periodic` the closed form for `theta = e^(k/l)`, `bounds` executable
//! inequalities, and `stats` finite-window statistics.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod mfun;
pub mod periodic;
pub mod stats;
pub mod theta;

pub use error::{Error, Result};
pub use mfun::{m_sequence, m_theta, n0, MSequence, MValue};
pub use theta::ThetaExpr;
