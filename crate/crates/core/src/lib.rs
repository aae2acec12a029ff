//! Spectral computations for the Cosserat operator `sigma Delta - grad div`
//! on corner domains: essential-spectrum intervals from corner symbols,
//! analytic bounds, and discrete eigenvalues of the Stokes Schur complement.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod cone3d;
pub mod contour;
pub mod error;
pub mod fem;
pub mod mellin2d;
pub mod roots;
pub mod special;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    Branch, ComplexRoot, RootKind, SearchStatus, SpectralParam, SpectrumInterval, TheoryTag,
};
