//! Seeded inputs shared by the benchmarks.

use nomcorr::{Complex64, ComplexMatrix, ComplexVector, ContingencyTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense `n x n` system with entries uniform in the unit square.
pub fn random_system(n: usize, seed: u64) -> (ComplexMatrix, ComplexVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, draw());
        }
    }
    let b = ComplexVector((0..n).map(|_| draw()).collect());
    (a, b)
}

/// `rows x cols` table with counts uniform in `0..max_count`.
pub fn random_table(rows: usize, cols: usize, max_count: u64, seed: u64) -> ContingencyTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(1..max_count)).collect())
        .collect();
    ContingencyTable::new(
        (0..rows).map(|i| format!("r{i}")).collect(),
        (0..cols).map(|j| format!("c{j}")).collect(),
        counts,
    )
    .expect("labels are distinct")
}
