//! Tensor-product Stokes elements on boxes and the discrete Cosserat spectrum.

pub mod assemble;
pub mod basis;
pub mod eigen;
pub mod envelope;
pub mod export;
pub mod mesh;
pub mod quadrature;
pub mod scalar;
pub mod schur;
pub mod sparse;
pub mod study;

pub use assemble::{assemble, FeSpacePair, OperatorSet, TensorLayout};
pub use eigen::{cosserat_eigs, EigMethod, EigOptions, EigPair, EigReport};
pub use export::{correlation, export_eigenfunction, sample_grid, FieldSamples};
pub use mesh::{build_mesh, domain_extents, Mesh, MeshSpec};
pub use schur::{project_mean_zero, schur_apply, SchurOperator};
pub use sparse::CsrMatrix;
pub use study::{
    convergence_study, extrapolate_with_rate, fitted_rate, ConvergenceStudy, EigenTrend, FemReport,
    LevelResult, Timings,
};
