//! Fixtures shared by the criterion benchmarks in `benches/`.

use maedm::Instance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform `[0, 99]` instance of size `n`, seeded by `n`.
pub fn uniform_instance(n: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let w = (0..n * n).map(|_| rng.gen_range(0..100)).collect();
    Instance::new(format!("uniform{n}"), n, w).expect("valid generated instance")
}
