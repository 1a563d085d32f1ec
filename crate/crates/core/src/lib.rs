//! Parameter-free anomaly detection with a-contrario neurons.
//!
//! A neuron scales a series to integers, takes the integer median, and asks
//! whether a deviation of `n` units is expected fewer than once among the
//! windows of the series. The network trains many neurons on random subsamples
//! and sums their scores and votes.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod kernel;
pub mod multivariate;
pub mod network;
pub mod neuron;
pub mod persist;

pub use dataset::{load_csv, Dataset, ScoreReport, ScoreRow};
pub use error::{Error, Result};
pub use kernel::{log_binomial, AContrarioTest};
pub use network::{AggregateOutput, DecimalsRule, NetworkConfig, NetworkModel};
pub use neuron::{Decision, NeuronModel, WindowRule};
