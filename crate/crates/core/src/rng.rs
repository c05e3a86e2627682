//! Keyed deterministic random streams.
//!
//! Every random decision in the crate draws from an [`RngStream`] derived
//! from a master seed plus a key describing what the stream is for (purpose,
//! wolf index, iteration, channel, ...). Two consequences:
//!
//! * a single 64-bit seed reproduces any experiment exactly;
//! * parallel evaluation order cannot change results, because each unit of
//!   work owns a stream that depends only on its key, never on scheduling.
//!
//! The generator is SplitMix64: `state += GOLDEN; return avalanche(state)`.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn avalanche(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream purposes; each constant opens an independent key domain under one
/// master seed.
pub mod purpose {
    pub const PACK_INIT: u64 = 0x11;
    pub const COEFFICIENTS: u64 = 0x22;
    pub const BINARIZE: u64 = 0x33;
    pub const CV_FOLDS: u64 = 0x44;
    pub const EMBED: u64 = 0x55;
    pub const COVER: u64 = 0x66;
    pub const SPLIT: u64 = 0x77;
    pub const TRIAL: u64 = 0x88;
    pub const SELECTION: u64 = 0x99;
    pub const CLASSIFIER: u64 = 0xAA;
}

/// A deterministic random stream addressed by a key.
#[derive(Debug, Clone)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    /// Derive a stream from key parts. Each part is folded through the
    /// avalanche function so that nearby keys yield unrelated streams.
    pub fn from_key(parts: &[u64]) -> Self {
        let mut state = 0x243F_6A88_85A3_08D3; // pi fraction, arbitrary non-zero start
        for &p in parts {
            state = avalanche(state ^ p.wrapping_mul(GOLDEN)).wrapping_add(GOLDEN);
        }
        RngStream { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        avalanche(self.state)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform draw in `[lo, hi)`.
    #[inline]
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[0, n)`.
    #[inline]
    pub fn next_index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Standard normal draw (Box-Muller, cosine branch).
    pub fn next_gaussian(&mut self) -> f64 {
        let mut u1 = self.next_f64();
        while u1 <= 0.0 {
            u1 = self.next_f64();
        }
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Fair random sign.
    #[inline]
    pub fn next_sign(&mut self) -> f64 {
        if self.next_f64() < 0.5 {
            -1.0
        } else {
            1.0
        }
    }

    /// First `k` entries of a random permutation of `0..n` (partial
    /// Fisher-Yates).
    pub fn partial_permutation(&mut self, n: usize, k: usize) -> Vec<usize> {
        debug_assert!(k <= n);
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.next_index(n - i);
            idx.swap(i, j);
        }
        idx.truncate(k);
        idx
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        let n = items.len();
        for i in 0..n.saturating_sub(1) {
            let j = i + self.next_index(n - i);
            items.swap(i, j);
        }
    }
}

/// Collapse key parts into a single derived 64-bit seed.
pub fn derive_seed(parts: &[u64]) -> u64 {
    RngStream::from_key(parts).next_u64()
}
