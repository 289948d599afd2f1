//! Single-subnetwork Poisson stochastic blockmodel machinery.

mod assignment;
mod crp;
mod gibbs;
mod hyper;
mod matrix;
mod stats;
mod topology;

pub use assignment::Assignment;
pub use crp::{crp_log_density, sample_crp};
pub use gibbs::gibbs_sweep_z;
pub use hyper::{log_acceptance, mh_update_hyperparams, MhAccepts, DEFAULT_STEP};
pub use matrix::SymMatrix;
pub use stats::{block_stats, collapsed_log_likelihood, sample_eta, BlockStats, Hyperparams, RateMatrix};
pub use topology::Topology;
