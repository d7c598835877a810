use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed and trial budget for the randomised searches. Every randomised
/// result is a deterministic function of the input and this value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    pub budget: usize,
}

pub const DEFAULT_BUDGET: usize = 64;

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SearchConfig {
    pub fn new(seed: u64, budget: usize) -> Self {
        SearchConfig { seed, budget }
    }

    pub fn with_seed(seed: u64) -> Self {
        SearchConfig {
            seed,
            ..SearchConfig::default()
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}
