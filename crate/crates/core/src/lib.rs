//! Exact linear algebra over Q(i) and checkers for multibraided quantum
//! groups and their first-order differential calculi.
//!
//! Every structure map is a [`LinMap`] between explicitly dimensioned
//! coordinate spaces, and every identity is checked as an exact matrix
//! equality. Tensor products use the row-major convention
//! `e_i ⊗ e_j ↦ e_{i·dim_B + j}`.

/// `kr!(a, b, c)` is `a ⊗ b ⊗ c`.
macro_rules! kr {
    ($($m:expr),+ $(,)?) => { $crate::linalg::kron_all(&[$(&$m),+]) };
}

/// `ch!(a, b, c)` is `a ∘ b ∘ c` (applied right to left).
macro_rules! ch {
    ($($m:expr),+ $(,)?) => { $crate::linalg::chain(&[$(&$m),+]) };
}

pub mod algebra;
pub mod bicov;
pub mod bundle;
pub mod calculus;
pub mod covariant;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod star;
pub mod suite;

pub use algebra::Algebra;
pub use error::{Error, Result, Witness};
pub use linalg::{LinMap, Semilinear, SparseVec, Subspace};
pub use report::{Report, ReportDoc, Status};
pub use scalar::Scalar;

/// Identity on an `n`-dimensional space.
pub fn id(n: usize) -> LinMap {
    LinMap::identity(n)
}
