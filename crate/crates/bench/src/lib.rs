//! Seeded instances shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reldisc::combinat::rat;
use reldisc::{Hypergraph, SliceFunction};

pub fn random_hypergraph(n: usize, k: usize, density: f64, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Hypergraph::from_fn(n, k, |_| rng.gen_bool(density)).expect("valid shape")
}

pub fn random_function(n: usize, k: usize, seed: u64) -> SliceFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SliceFunction::from_fn(n, k, |_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=6)))
        .expect("valid shape")
}
