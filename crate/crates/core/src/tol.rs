//! Centralized numerical tolerances.
//!
//! Every comparison threshold used by the crate lives here so that the
//! validation story is auditable in one place. Values are grouped by the
//! quantity they bound, not by the module that uses them.

/// Max entrywise deviation from Hermitian symmetry accepted by
/// [`crate::qmat::hermitian_eig`].
pub const HERMITIAN_INPUT: f64 = 1e-10;

/// Max entrywise deviation from Hermitian symmetry accepted when
/// constructing a [`crate::qmat::DensityMatrix`].
pub const DENSITY_HERMITIAN: f64 = 1e-12;

/// Max deviation of a density-matrix trace from 1.
pub const DENSITY_TRACE: f64 = 1e-12;

/// Most negative eigenvalue accepted as "positive semidefinite".
pub const DENSITY_EIGENVALUE: f64 = -1e-12;

/// Max reconstruction error `|U D U' - M|` guaranteed by the
/// eigendecomposition (also the unitarity bound on `U`).
pub const EIG_RECONSTRUCTION: f64 = 1e-10;

/// Eigenvalues at or below this are treated as outside the support when
/// deciding whether a relative entropy is finite.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Rounding grid used to deduplicate enumerated stabilizer projectors:
/// real and imaginary parts are snapped to multiples of this.
pub const STABILIZER_DEDUPE: f64 = 1e-9;

/// Half-width of the boundary band in octahedron membership tests
/// (`|x|_1` within this of 1 counts as boundary).
pub const OCTAHEDRON_BOUNDARY: f64 = 1e-10;

/// Smallest eigenvalue admitted by the divided-logarithm matrix.
pub const DIVIDED_LOG_MIN: f64 = 1e-10;

/// Max allowed `|Tr(phi sigma)|` for a hyperplane to count as tangent at
/// `sigma`, and max allowed defect in hyperplane normalization.
pub const TANGENCY: f64 = 1e-10;

/// A reconstructed witness is valid when its minimum over stabilizer
/// vertices is at least this (slightly negative to absorb roundoff).
pub const WITNESS_VALID_MIN: f64 = -1e-10;

/// Entrywise agreement required between independently computed routes to
/// the same matrix (closed form vs direct reconstruction).
pub const CROSS_ROUTE: f64 = 1e-9;

/// Entrywise agreement required between the structured multi-site
/// correction and its definition as an entrywise quotient.
pub const DELTA_AGREEMENT: f64 = 1e-10;

/// Max commutator entry `|[rho, sigma]|` for two states to count as
/// commuting.
pub const COMMUTATOR: f64 = 1e-10;

/// A witness trace below this counts as a polytope violation.
pub const VIOLATION_TRACE: f64 = -1e-9;

/// Relative-entropy values are never meaningfully below this.
pub const ENTROPY_FLOOR: f64 = -1e-10;
