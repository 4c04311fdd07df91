//! Element core for 6-node quadratic triangles in 2-D electromagnetics.
//!
//! The crate evaluates the analytic elemental matrices of the scalar
//! quadratic basis `N` and the vector edge basis `(U, V)`, checks them
//! against two independent integration oracles (exact rational symbolic
//! integration and Gauss quadrature), and assembles them into global
//! generalized eigenproblems such as waveguide cutoff-mode computation.

#![allow(clippy::needless_range_loop)]

pub mod assembly;
pub mod dense;
pub mod dof;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod matrices;
pub mod mesh;
pub mod parallel;
pub mod quadrature;
pub mod scalar;
pub mod shape;
pub mod sparse;
pub mod verify;
pub mod waveguide;

pub use assembly::{assemble, assemble_gradient, assemble_mixed, Operator, Term};
pub use dense::DenseMatrix;
pub use dof::{DofMap, FieldType};
pub use eigen::{solve_generalized, EigenResult};
pub use error::{Error, Result};
pub use geometry::{EdgeSign, Point, TriangleGeometry};
pub use matrices::{element_matrix, ElementMatrix, MatrixKind};
pub use mesh::{gen_rect_mesh, read_mesh, write_mesh, Mesh};
pub use sparse::SparseMatrix;
pub use verify::{run_verify, VerifyReport};
pub use waveguide::{convergence_study, cutoff_modes, rect_cutoff_modes, ModeType, WaveguideReport};
