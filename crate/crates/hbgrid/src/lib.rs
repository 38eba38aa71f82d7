//! Generalized sparse grid spaces with the hierarchical (Faber-Schauder)
//! basis on the d-dimensional unit cube, zero boundary values.
//!
//! The crate builds the spaces S_Lambda spanned by hierarchical basis
//! blocks over a monotone set Lambda of level multi-indices, assembles the
//! diagonally scaled Galerkin system for the Dirichlet Laplacian, and
//! measures its extreme eigenvalues. The headline use is checking the
//! two-sided combinatorial bounds
//!
//! ```text
//!   c * n_Lambda * n'_Lambda  <=  kappa  <=  C * n_Lambda * ñ_Lambda
//! ```
//!
//! on the condition number of the scaled system, for full grids, standard
//! sparse grids, and energy-optimized sparse grids.
//!
//! Entry points: [`index_set`] for building Lambda, [`space`] +
//! [`assembly`] for the linear algebra, [`spectral`] for eigenvalues and
//! the sandwich check, [`extremal`] for explicit witness functions,
//! [`prewavelet`] for the L2-orthogonal decomposition oracle, and
//! [`solver`] for preconditioned CG. The `hbgrid` binary exposes the same
//! functionality on the command line.

pub mod assembly;
pub mod basis;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod index_set;
pub mod lapack;
pub mod prewavelet;
pub mod report;
pub mod solver;
pub mod space;
pub mod spectral;
pub mod transform;

pub use error::{Error, Result};
pub use index_set::{
    bounds_quantities, gap_example, make_energy_optimized, make_full_grid, make_standard_sparse,
    monotone_closure, BoundsReport, MonotoneIndexSet, MultiIndex, Ratio,
};
pub use space::SparseGridSpace;
pub use spectral::{sandwich_check, Method, SandwichReport, SpectralReport};
