//! Network dictionary learning and network denoising/reconstruction.
//!
//! Mesoscale patches of a network are sampled along random k-walks or
//! k-paths by motif-sampling chains, factorized online into a small set of
//! latent motifs, and used to rebuild or denoise the network.

pub mod cli;
pub mod denoise;
pub mod error;
pub mod factorization;
pub mod graph;
pub mod ndl;
pub mod ndr;
pub mod patches;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
