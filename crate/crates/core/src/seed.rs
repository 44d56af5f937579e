//! Seed derivation and the per-edge transmission coin stream.
//!
//! Every stochastic routine takes an explicit 64-bit seed. Child seeds are
//! derived with a fixed mixing function so that trial `t` of a run sees the
//! same randomness no matter which worker executes it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn fmix64(mut z: u64) -> u64 {
    z ^= z >> 33;
    z = z.wrapping_mul(0xff51_afd7_ed55_8ccd);
    z ^= z >> 33;
    z = z.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    z ^ (z >> 33)
}

/// Derives the seed of child stream `index` from `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ fmix64(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Derives a seed from a master seed and a path of indices.
pub fn derive_seed_path(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(master, |s, &i| derive_seed(s, i))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Maps 64 random bits to a uniform double in `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One uniform per undirected edge, computed on demand.
///
/// The coin of edge `{u, v}` depends only on the seed and the unordered pair,
/// so it is identical for both orientations and independent of the order in
/// which edges are visited. An edge is open at probability `p` iff its coin
/// is `< p`, which couples runs at different `p` monotonically.
#[derive(Clone, Copy, Debug)]
pub struct EdgeCoins {
    key: u64,
    salt: u64,
}

impl EdgeCoins {
    pub fn new(seed: u64) -> Self {
        EdgeCoins {
            key: splitmix64(seed),
            salt: splitmix64(seed ^ 0x5851_f42d_4c95_7f2d),
        }
    }

    #[inline]
    pub fn uniform(&self, u: usize, v: usize) -> f64 {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let pair = ((a as u64) << 32) | (b as u64 & 0xffff_ffff);
        unit_f64(fmix64(fmix64(pair ^ self.key).wrapping_add(self.salt)))
    }

    #[inline]
    pub fn is_open(&self, u: usize, v: usize, p: f64) -> bool {
        self.uniform(u, v) < p
    }
}
