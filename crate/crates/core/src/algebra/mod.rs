//! Exact arithmetic: GF(2), GF(4), and quadratic forms over GF(2).

pub mod gf2;
pub mod gf4;
pub mod quadratic;

pub use gf2::{Gf2Solver, Gf2Vector};
pub use gf4::Gf4;
pub use quadratic::{orthogonal_group_order, Plane, PlaneKind, QuadraticSpace, Sign};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gram matrix is not alternating at ({row}, {col})")]
    NotAlternating { row: usize, col: usize },
    #[error("bilinear form is degenerate")]
    Degenerate,
    #[error("dimension {0} is not a positive even number")]
    OddDimension(usize),
    #[error("{singular} singular vectors match neither type")]
    NotQuadratic { singular: u64 },
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("dimension {dim} exceeds the enumeration limit {limit}")]
    TooLarge { dim: usize, limit: usize },
}
