use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reproducible stream of uniform permutations.
///
/// Backed by the counter-based ChaCha8 generator: the same `(seed, stream)`
/// pair yields the same sequence on every platform, and distinct streams are
/// independent, which lets a computation be split into chunks with derived
/// seeds.
#[derive(Debug, Clone)]
pub struct PermutationSampler {
    seed: u64,
    rng: ChaCha8Rng,
    draws: u64,
}

impl PermutationSampler {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            seed,
            rng,
            draws: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of permutations drawn so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Overwrites `perm` with a fresh uniform permutation of `{0, …, len−1}`
    /// (Fisher-Yates shuffle of the identity).
    pub fn draw_into(&mut self, perm: &mut [usize]) {
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        perm.shuffle(&mut self.rng);
        self.draws += 1;
    }

    /// Fills `signs` with independent fair `±1` values.
    pub fn signs_into(&mut self, signs: &mut [f64]) {
        for s in signs.iter_mut() {
            *s = if self.rng.random::<bool>() { 1.0 } else { -1.0 };
        }
    }

    /// The underlying generator, for drawing auxiliary randomness from the
    /// same reproducible stream.
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
