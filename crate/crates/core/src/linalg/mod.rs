//! Exact linear algebra, polynomials and truncated power series over
//! cyclotomic fields.

mod echelon;
mod matrix;
mod multipoly;
mod poly;
mod series;

pub use echelon::Echelon;
pub use matrix::{char_series_from_traces, eigen_from_traces, k_subsets, CycMatrix, MatrixKey, Vector};
pub use multipoly::{DegreeBasis, Mono, MultiPoly, MAX_VARS};
pub use poly::UniPoly;
pub use series::{SeriesOp, TruncSeries};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("not of finite order within cap {0}")]
    NotFiniteOrder(u64),
    #[error("eigenvalue multiplicities are not nonnegative integers")]
    NonIntegral,
    #[error("truncation bounds differ ({0} vs {1})")]
    BoundMismatch(usize, usize),
    #[error("series has zero constant term")]
    NotInvertible,
}

/// Dot product of two vectors.
pub fn dot(a: &[crate::cyclo::Cyclotomic], b: &[crate::cyclo::Cyclotomic]) -> crate::cyclo::Cyclotomic {
    let mut s = crate::cyclo::Cyclotomic::zero(1);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * y);
        }
    }
    s
}
