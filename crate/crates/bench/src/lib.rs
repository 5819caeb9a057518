//! Fixed inputs shared by the benchmarks.

use epw_core::num::BigRational;
use epw_core::{rng, subspace, LagrangianSubspace};

/// The graph Lagrangian of a seeded random symmetric matrix.
pub fn graph_instance(seed: u64, height: i64) -> LagrangianSubspace<BigRational> {
    subspace::random_graph_lagrangian(&mut rng::seeded(seed), height)
}
