//! Schedule-independent random streams.
//!
//! Every unit of work in a sweep (one subnetwork in a per-subnetwork phase,
//! one contiguous dyad block in the edge phase) owns a ChaCha8 stream keyed
//! by `(master seed, phase, iteration, unit)`. The key is the full 256-bit
//! ChaCha key, so distinct tuples give independent streams and the result of
//! a sweep cannot depend on which worker ran which unit or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Phase tag mixed into the stream key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Phase {
    Init = 1,
    Eta = 2,
    Edges = 3,
    Heldout = 4,
    Gibbs = 5,
    Hyper = 6,
    Split = 7,
    Generate = 8,
    Grid = 9,
}

/// Derives the stream for one unit of work.
pub fn stream(master_seed: u64, phase: Phase, iteration: u64, unit: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&(phase as u64).to_le_bytes());
    key[16..24].copy_from_slice(&iteration.to_le_bytes());
    key[24..32].copy_from_slice(&unit.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Derives a child seed, e.g. one per restart of an experiment grid.
pub fn derive_seed(master_seed: u64, phase: Phase, index: u64) -> u64 {
    use rand::RngCore;
    stream(master_seed, phase, 0, index).next_u64()
}
