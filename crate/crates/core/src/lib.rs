//! Multi-network stochastic blockmodel (MNSBM).
//!
//! An observed binary graph is modelled as the Heaviside aggregation of `S`
//! latent Poisson stochastic-blockmodel multigraphs. Inference is a
//! partially collapsed Gibbs sampler: rates are drawn explicitly to resample
//! the per-dyad latent counts, block assignments are swept with the rates
//! integrated out, and hyperparameters move by log-space random-walk
//! Metropolis-Hastings.

pub mod ensemble;
pub mod error;
pub mod graph_io;
pub mod prediction;
pub mod rng;
pub mod sbm;
pub mod special;
pub mod synth;
pub mod trace;
pub use ensemble::{run_chain, run_chain_with, EnsembleState, SweepConfig};
pub use error::{Error, Result};
pub use graph_io::{parse_edge_list, split_holdout, write_graph, HeldoutSet, ObservedGraph};
pub use prediction::{auc, predict_link_prob, same_block_vectors, structure_auc, PredictionTable, SimilarityVectors};
pub use sbm::{Assignment, BlockStats, Hyperparams, RateMatrix};
pub use synth::{experiment_grid, generate, planted_params, GroundTruth, PlantedData, PlantedModel};
pub use trace::{ChainTrace, TraceHeader, TraceRecord};
