//! Exact integer linear algebra and homology of chain complexes.
//!
//! Free ranks over the rationals come from sparse fraction-free elimination
//! and scale to the product triangulations built in [`crate::complexes`].
//! Integer homology (torsion) goes through a dense Smith normal form and is
//! only attempted below [`HomologyOptions::snf_nnz_cutoff`].

mod chain;
mod matrix;
mod profile;
mod rank;
mod smith;

use thiserror::Error;

pub use chain::{
    exact_dims_consistent, homology, homology_with, pair_sequence_consistent, relative_homology, ChainComplex,
    Coefficients, HomologyOptions, Subcomplex,
};
pub use matrix::IntegerMatrix;
pub use profile::{
    connected_sum, euler_characteristic, kunneth, normalize_torsion, poincare_dual_check, HomologyGroup,
    HomologyProfile,
};
pub use rank::rational_rank;
pub use smith::{smith_divisors, smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("boundary of boundary is nonzero at degree {degree}")]
    InvalidComplex { degree: usize },
    #[error("boundary matrix at degree {degree} has the wrong shape")]
    ShapeMismatch { degree: usize },
    #[error("selection is not closed under faces at degree {degree}")]
    NotASubcomplex { degree: usize },
    #[error("integer Künneth needs Tor terms; profiles must be torsion-free")]
    TorsionPresent,
    #[error("expected a manifold of dimension {expected}, found top degree {found:?}")]
    DimensionMismatch { expected: usize, found: Option<usize> },
    #[error("profile is not that of a closed connected orientable manifold")]
    NotClosedConnected,
    #[error("boundary at degree {degree} has {nnz} nonzeros, above the Smith form cutoff {cutoff}")]
    TooLargeForSmithForm { degree: usize, nnz: usize, cutoff: usize },
    #[error("torsion coefficient in degree {degree} does not fit in 64 bits")]
    TorsionOverflow { degree: usize },
}
