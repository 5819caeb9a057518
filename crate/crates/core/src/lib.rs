//! Exact linear algebra for Gushel–Mukai varieties and EPW sextics.
//!
//! Everything is computed over [`Rationals`] or a [`PrimeField`] through the
//! [`Field`] trait. The exterior algebra of V₆ = ⟨e₀,…,e₅⟩ uses lexicographic
//! bases of increasing index tuples and the volume form e₀∧…∧e₅ ↦ 1.
//!
//! * [`exterior`]: multivectors, the symplectic form on Λ³V₆, contraction,
//!   decomposability and Pfaffian kernels.
//! * [`subspace`]: echelonized subspaces, Lagrangian certification, graph
//!   Lagrangians and decomposable-vector scans.
//! * [`gm`]: GM data sets and their correspondence with Lagrangians.
//! * [`epw`]: EPW multiplicities, sextics, duality and stratification scans.
//! * [`lattice`]: Gram lattices and stored Hodge-theoretic tables.
//! * [`json`]: JSON forms of the objects above, with every number written as
//!   a string.
//!
//! Random generation uses [`rand_chacha::ChaCha8Rng`] seeded by
//! [`rng::seeded`], whose output stream is stable across platforms and
//! releases.

pub mod epw;
pub mod error;
pub mod exterior;
pub mod gm;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod projective;
pub mod scalars;
pub mod subspace;

pub use epw::{
    chart_sextic, discriminant_sextic, dual_lagrangian, epw_multiplicity, epw_multiplicity_direct,
    epw_multiplicity_symplectic, homogenized_chart_sextic, stratify_scan, DiscriminantComparison,
    StratificationReport,
};
pub use error::{Error, Result};
pub use exterior::{Multivector, SymmetricForm};
pub use gm::{
    fiber_quadric_corank, gm_to_lagrangian, kernel_correspondence, lagrangian_to_gm, sigma1,
    smoothness_spot_check, verify_gm_axioms, GmDataSet, Hyperplane, Sigma1Locus,
};
pub use lattice::{GramLattice, HodgeDiamond};
pub use poly::{MultivariatePolynomial, Polynomial};
pub use scalars::{Field, PrimeField, Rationals};
pub use subspace::{lagrangian_from_graph, scan_decomposables, LagrangianSubspace, Subspace};

pub mod rng {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// The generator behind every seeded operation.
    pub type Rng = ChaCha8Rng;

    pub fn seeded(seed: u64) -> Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }
}

/// Re-exported number types used in public signatures.
pub mod num {
    pub use num_bigint::BigInt;
    pub use num_rational::BigRational;
}
