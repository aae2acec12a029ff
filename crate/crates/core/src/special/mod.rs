//! Special functions: complex gamma and Ferrers (associated Legendre)
//! functions of complex degree.

pub mod gamma;
pub mod legendre;

pub use gamma::{gamma, gamma_real};
pub use legendre::{legendre_p, legendre_pair, legendre_pair_scaled};
