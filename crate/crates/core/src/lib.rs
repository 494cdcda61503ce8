//! Quantifying magic (non-stabilizerness) of one- to three-qubit states.
//!
//! The crate measures the relative-entropy distance from a state to the
//! convex hull of pure stabilizer states. It provides:
//!
//! - [`qmat`]: a dense complex-matrix kernel (Hermitian eigendecomposition,
//!   tensor/entrywise products, entropies) for dimensions up to 8.
//! - [`stab`]: enumeration of pure stabilizer states and the single-qubit
//!   stabilizer octahedron.
//! - [`bloch`]: Bloch-vector geometry of the octahedron (faces, edges,
//!   tangent hyperplanes, symmetry rotations).
//! - [`family`]: one-parameter families of single-qubit states whose closest
//!   stabilizer state is known in closed form, with closed-form entropy,
//!   inverse maps, and heatmap sampling.
//! - [`optim`]: a Frank-Wolfe minimizer of relative entropy over the
//!   stabilizer polytope (exact vertex oracle, away steps).
//! - [`witness`]: supporting-hyperplane witnesses for products of
//!   single-qubit states, proving that magic measured this way can be
//!   strictly subadditive under tensor products.
//!
//! With the default `parallel` feature, grid scans and vertex sweeps run on
//! a rayon thread pool; every parallel entry point has a `*_seq` sibling.

pub mod bloch;
pub mod error;
pub mod family;
pub mod optim;
pub mod qmat;
pub mod stab;
pub mod tol;
pub mod witness;

pub use error::{Error, Result};
pub use qmat::{CMat, DensityMatrix, EigenSystem, C64};
