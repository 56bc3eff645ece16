//! Hybrid hawk/wolf metaheuristic plus the imaging pipeline it trains:
//! grayscale preprocessing, Otsu segmentation, per-segment statistical
//! features, a forward-only convolutional classifier, and a trainer that
//! tunes the classifier head by minimizing batch RMSE with the hybrid
//! optimizer.
//!
//! The numeric core is generic over the scalar type (see [`scalar::Real`]);
//! the aliases below pin the common entry points to `f32` / `f64`.

pub mod error;
pub mod features;
pub mod network;
pub mod optimizer;
pub mod pipeline;
pub mod rng;
pub mod scalar;
pub mod segmentation;
pub mod trainer;
pub mod util;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` aliases — the precision the CLI and reports run at.
pub type SearchSpace64 = optimizer::SearchSpace<f64>;
pub type Candidate64 = optimizer::Candidate<f64>;
pub type Trace64 = optimizer::Trace<f64>;

/// `f32` aliases for callers that trade precision for footprint.
pub type SearchSpace32 = optimizer::SearchSpace<f32>;
pub type Candidate32 = optimizer::Candidate<f32>;
pub type Trace32 = optimizer::Trace<f32>;
