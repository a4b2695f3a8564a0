//! Inputs shared by the criterion benches.

use idcode_core::Code;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A uniformly random code of `size` distinct words in F^n.
pub fn random_code(n: u32, size: usize, seed: u64) -> Code {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = sample(&mut rng, 1usize << n, size).into_iter().map(|i| i as u32);
    Code::new(n, words).expect("sampled words are distinct and in range")
}
