//! Ready-made realizations: the three-user worked example and small random
//! instances for oracle comparisons and property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{CacheRealization, DemandRealization};

/// Three users, files A, B, C split into three packets each. User `u` caches
/// packet `u` of every file; users 0 and 1 request A, user 2 requests B.
pub fn example_one() -> (CacheRealization, DemandRealization) {
    let sets: Vec<Vec<Vec<usize>>> = (0..3).map(|u| vec![vec![u]; 3]).collect();
    let cache = CacheRealization::from_sets(3, 3, &sets).expect("static example");
    let demand = DemandRealization::new(vec![vec![0], vec![0], vec![1]], &cache).expect("static example");
    (cache, demand)
}

/// Shape of a random small instance.
#[derive(Debug, Clone, Copy)]
pub struct RandomShape {
    pub users: usize,
    pub files: usize,
    pub packets: usize,
    pub max_requests: usize,
    /// Probability that a given user caches a given packet.
    pub cache_prob: f64,
}

/// Independent per-packet caching and uniformly drawn request sets.
pub fn random_instance(shape: RandomShape, seed: u64) -> (CacheRealization, DemandRealization) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<Vec<Vec<usize>>> = (0..shape.users)
        .map(|_| {
            (0..shape.files)
                .map(|_| {
                    (0..shape.packets)
                        .filter(|_| rng.gen_bool(shape.cache_prob))
                        .collect()
                })
                .collect()
        })
        .collect();
    let cache = CacheRealization::from_sets(shape.files, shape.packets, &sets).expect("indices within range");
    let requests = (0..shape.users)
        .map(|_| {
            let count = rng.gen_range(1..=shape.max_requests.min(shape.files).max(1));
            (0..count).map(|_| rng.gen_range(0..shape.files)).collect()
        })
        .collect();
    let demand = DemandRealization::new(requests, &cache).expect("requests within library");
    (cache, demand)
}

/// Draws random shapes until the conflict graph has between 1 and `max_vertices` vertices.
pub fn random_small_instance(max_vertices: usize, seed: u64) -> (CacheRealization, DemandRealization) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    loop {
        let shape = RandomShape {
            users: rng.gen_range(1..=4),
            files: rng.gen_range(1..=4),
            packets: rng.gen_range(1..=3),
            max_requests: rng.gen_range(1..=2),
            cache_prob: rng.gen_range(0.0..0.8),
        };
        let (cache, demand) = random_instance(shape, rng.gen());
        let size = demand.total_needed();
        if (1..=max_vertices).contains(&size) {
            return (cache, demand);
        }
    }
}
