//! Deterministic seed splitting for parallel ensembles.
//!
//! Every run is driven by a single 64-bit master seed. Worker streams are
//! derived per orbit index by the fixed scheme below, so an ensemble is
//! reproducible bit-for-bit regardless of how orbits are assigned to
//! threads:
//!
//! ```text
//! state   = master XOR ((index + 1) * 0x9E3779B97F4A7C15)
//! seed[i] = splitmix64(state), i = 0..3   (little-endian bytes)
//! stream  = ChaCha8 with that 32-byte seed
//! ```

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step; advances `state` and returns the next output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent substream for orbit `index` of the ensemble seeded by
/// `master`.
pub fn orbit_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut state = master ^ (index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
