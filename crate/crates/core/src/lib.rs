//! Graph coloring with a color-equivariant linear message-passing network.
//!
//! The network keeps an `n x k` matrix of per-node color beliefs and updates
//! it with five scalars per layer, so relabelling colors commutes with the
//! forward pass. Final beliefs are decoded by argmax and optionally repaired
//! by local search or completed exactly. Greedy, Tabucol and belief
//! propagation baselines and an exact chromatic-number oracle ship alongside.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the `f64` instantiation used by the solver pipeline.

pub mod baselines;
pub mod error;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod io;
pub mod model;
pub mod refine;
pub mod scalar;
pub mod train;

pub use error::{Error, Result};
pub use graph::{count_conflicts, ColorAssignment, ConflictReport, Graph};
pub use scalar::Scalar;

pub type Embedding = model::EmbeddingMatrix<f64>;
pub type Embedding32 = model::EmbeddingMatrix<f32>;
pub type Params = model::GdnParams<f64>;
pub type Params32 = model::GdnParams<f32>;
pub type Layer = model::LayerParams<f64>;
pub type Loss = train::LossConfig<f64>;
pub type Gradients = train::GradientRecord<f64>;
pub type Adam = train::AdamState<f64>;
