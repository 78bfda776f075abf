//! Random generators and brute-force oracles shared by the cyforge test
//! suites. The oracles deliberately avoid the engine's path, polynomial and
//! linear-algebra types: they work on plain arrow-index words and dense
//! rational matrices.

pub mod enumerate;
pub mod gen;
pub mod oracle;

pub use rand_chacha::ChaCha8Rng;

/// A seeded generator, so every corpus is reproducible.
pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
