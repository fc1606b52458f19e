//! Fixed-seed inputs shared by the benchmarks.

use geodom::gen::{generate, GenParams};
use geodom::{InstanceFile, Kind};

/// A random instance of `kind` with `n` primary and `n` secondary elements.
pub fn instance(kind: Kind, n: usize, seed: u64) -> InstanceFile {
    let p = GenParams { n, m: n, k: 1, coord_range: (4 * n as i64).max(20), ..Default::default() };
    generate(kind, &p, seed).expect("benchmark parameters are valid")
}
