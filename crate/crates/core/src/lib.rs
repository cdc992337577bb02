//! Structural analysis of Lindblad generators: dissipative strength,
//! nonnormality, their ratio, regime classification and transient
//! amplification of the propagator norm.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod superop;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use metrics::{Regime, RegimeThresholds, StructuralMetrics};
pub use models::{ModelKind, ModelSpec};
pub use superop::{LindbladModel, Superoperator};
