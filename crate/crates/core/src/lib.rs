//! Near-factorizations of finite abelian groups: mate computation,
//! nonexistence filters, symmetry-reduced exhaustive search and strong
//! circular external difference families.

pub mod combinatorics;
pub mod criteria;
pub mod error;
pub mod group;
pub mod linalg;
pub mod mate;
pub mod orbit;
pub mod scalar;
pub mod scedf;
pub mod search;
pub mod subset;

pub use criteria::{evaluate_all, CriterionId, CriterionVerdict, Outcome, Witness};
pub use error::{Error, Result};
pub use group::{ElementIndex, GroupElement, GroupSpec, PrimaryComponent};
pub use mate::{
    build_walk_matrix, compute_mate, compute_mate_dense, compute_mate_sparse, dense_inverse,
    matrix_product_check, verify, MateAlgorithm, MateResult, MateTag, NearFactorization,
    WalkMatrix,
};
pub use orbit::{gl_orbit_catalog, mixed_aut_orbits, OrbitCatalog, OrbitContext};
pub use scalar::{ExactRing, Field, Fp};
pub use scedf::{circular_extension_is_blocked, difference_multiset, is_scedf, DifferenceFamily};
pub use search::{search, search_with, SearchOptions, SearchReport, SearchTask, Strategy};
pub use subset::GroupSubset;

/// Exact rationals used by the dense route and the exact fallback.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integers for fraction-free elimination.
pub type Integer = num_bigint::BigInt;
/// The first modular field of the sparse route.
pub type Fp0 = Fp<{ scalar::MODULI[0] }>;
pub type RationalMatrix = linalg::DenseMatrix<Rational>;
pub type IntegerMatrix = linalg::DenseMatrix<Integer>;
