//! Dense complex-matrix kernel for dimensions up to 8.
//!
//! Provides square complex matrices with tensor and entrywise products, a
//! Hermitian eigensolver (analytic for 2x2, cyclic complex Jacobi above),
//! matrix logarithm, and von Neumann / relative entropies in bits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<C64>,
}

impl CMat {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        CMat {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix from rows of complex entries.
    ///
    /// Panics if the rows do not form a square matrix.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == dim),
            "rows must form a square matrix"
        );
        CMat::from_fn(dim, |r, c| rows[r][c])
    }

    /// Matrix dimension (number of rows = columns).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    /// Trace.
    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Trace of the product `self * other` without forming it.
    pub fn trace_product(&self, other: &CMat) -> C64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in trace product");
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += self[(r, c)] * other[(c, r)];
            }
        }
        acc
    }

    /// Scalar multiple.
    pub fn scale(&self, s: C64) -> CMat {
        CMat {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Largest entrywise absolute difference from `other`.
    ///
    /// Panics if dimensions differ.
    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff requires equal dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation `|M(j,k) - conj(M(k,j))|` from Hermitian symmetry.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// Kronecker (tensor) product `self (x) rhs`.
    pub fn tensor(&self, rhs: &CMat) -> CMat {
        let (da, db) = (self.dim, rhs.dim);
        CMat::from_fn(da * db, |r, c| {
            self[(r / db, c / db)] * rhs[(r % db, c % db)]
        })
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, rhs: &CMat) -> Result<CMat> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(CMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Entrywise quotient `self(j,k) / rhs(j,k)`.
    pub fn hadamard_div(&self, rhs: &CMat) -> Result<CMat> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(CMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a / b)
                .collect(),
        })
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl std::ops::Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "matrix addition requires equal dims");
        CMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "matrix subtraction requires equal dims");
        CMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "matrix product requires equal dims");
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

/// Pauli identity.
pub fn pauli_i() -> CMat {
    CMat::identity(2)
}

/// Pauli X.
pub fn pauli_x() -> CMat {
    CMat::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]])
}

/// Pauli Y.
pub fn pauli_y() -> CMat {
    let i = C64::new(0.0, 1.0);
    CMat::from_rows(&[vec![ZERO, -i], vec![i, ZERO]])
}

/// Pauli Z.
pub fn pauli_z() -> CMat {
    CMat::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]])
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    /// Real eigenvalues sorted in descending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose column `j` is the eigenvector of `values[j]`.
    pub basis: CMat,
}

impl EigenSystem {
    /// Rebuilds `U D U'` from the decomposition.
    pub fn reconstruct(&self) -> CMat {
        let n = self.basis.dim();
        let mut ud = CMat::zeros(n);
        for r in 0..n {
            for c in 0..n {
                ud[(r, c)] = self.basis[(r, c)] * self.values[c];
            }
        }
        &ud * &self.basis.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
///
/// Uses the closed-form solution for 2x2 inputs and cyclic complex Jacobi
/// rotations above, so reconstruction is accurate to ~1e-14 for the
/// dimensions this crate works at (2, 4, 8).
pub fn hermitian_eig(m: &CMat) -> Result<EigenSystem> {
    if m.data
        .iter()
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(Error::InvalidArgument(
            "matrix has a non-finite entry".into(),
        ));
    }
    let dev = m.hermiticity_deviation();
    if dev > tol::HERMITIAN_INPUT {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    let n = m.dim();
    // Work on the symmetrized copy so sub-tolerance asymmetry cannot leak in.
    let a = CMat::from_fn(n, |r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5);
    let mut sys = match n {
        0 => return Err(Error::InvalidArgument("empty matrix".into())),
        1 => EigenSystem {
            values: vec![a[(0, 0)].re],
            basis: CMat::identity(1),
        },
        2 => eig2(&a),
        _ => jacobi(a)?,
    };
    sort_descending(&mut sys);
    Ok(sys)
}

fn eig2(a: &CMat) -> EigenSystem {
    let (p, q) = (a[(0, 0)].re, a[(1, 1)].re);
    let b = a[(0, 1)];
    let mean = 0.5 * (p + q);
    let delta = 0.5 * (p - q);
    let radius = (delta * delta + b.norm_sqr()).sqrt();
    if b.norm() == 0.0 {
        return EigenSystem {
            values: vec![p, q],
            basis: CMat::identity(2),
        };
    }
    // Stable null vector of (A - lambda_+ I): avoids cancellation in
    // radius - delta when |b| << |delta|.
    let s = if delta >= 0.0 {
        b.norm_sqr() / (radius + delta)
    } else {
        radius - delta
    };
    let norm = (b.norm_sqr() + s * s).sqrt();
    let vp = (b / norm, C64::new(s / norm, 0.0));
    let basis = CMat::from_rows(&[vec![vp.0, -vp.1], vec![vp.1, vp.0.conj()]]);
    EigenSystem {
        values: vec![mean + radius, mean - radius],
        basis,
    }
}

fn jacobi(mut a: CMat) -> Result<EigenSystem> {
    let n = a.dim();
    let mut v = CMat::identity(n);
    let scale = a.frobenius().max(f64::MIN_POSITIVE);
    for _ in 0..60 {
        let mut off = 0.0_f64;
        for r in 0..n {
            for c in (r + 1)..n {
                off += 2.0 * a[(r, c)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            let values = (0..n).map(|i| a[(i, i)].re).collect();
            return Ok(EigenSystem { values, basis: v });
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cphase = phase.conj();
                // Right-multiply by the rotation: mixes columns p and q.
                for i in 0..n {
                    let (aip, aiq) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = aip * c - aiq * cphase * s;
                    a[(i, q)] = aip * s + aiq * cphase * c;
                    let (vip, viq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = vip * c - viq * cphase * s;
                    v[(i, q)] = vip * s + viq * cphase * c;
                }
                // Left-multiply by its adjoint: mixes rows p and q.
                for j in 0..n {
                    let (apj, aqj) = (a[(p, j)], a[(q, j)]);
                    a[(p, j)] = apj * c - aqj * phase * s;
                    a[(q, j)] = apj * s + aqj * phase * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
            }
        }
    }
    Err(Error::NoConvergence(
        "Jacobi eigensolver exceeded 60 sweeps".into(),
    ))
}

fn sort_descending(sys: &mut EigenSystem) {
    let n = sys.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sys.values[j].partial_cmp(&sys.values[i]).unwrap());
    let values = order.iter().map(|&i| sys.values[i]).collect();
    let basis = CMat::from_fn(n, |r, c| sys.basis[(r, order[c])]);
    sys.values = values;
    sys.basis = basis;
}

/// Density matrix of an `n`-qubit system.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: CMat,
    qubits: u32,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, positivity, and power-of-two size.
    pub fn new(mat: CMat) -> Result<Self> {
        let dim = mat.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidDensity(format!(
                "dimension {dim} is not a power of two >= 2"
            )));
        }
        let dev = mat.hermiticity_deviation();
        if dev > tol::DENSITY_HERMITIAN {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {dev:.3e})"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol::DENSITY_TRACE || tr.im.abs() > tol::DENSITY_TRACE {
            return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
        }
        let eig = hermitian_eig(&mat)?;
        if let Some(&min) = eig.values.last() {
            if min < tol::DENSITY_EIGENVALUE {
                return Err(Error::InvalidDensity(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(DensityMatrix {
            qubits: dim.trailing_zeros(),
            mat,
        })
    }

    /// Wraps a matrix known to satisfy the density-matrix contract.
    pub(crate) fn new_unchecked(mat: CMat) -> Self {
        DensityMatrix {
            qubits: mat.dim().trailing_zeros(),
            mat,
        }
    }

    /// Underlying matrix.
    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// Number of qubits `n` (dimension is `2^n`).
    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    /// Matrix dimension `2^n`.
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Tensor product with another density matrix.
    pub fn tensor(&self, rhs: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            qubits: self.qubits + rhs.qubits,
            mat: self.mat.tensor(&rhs.mat),
        }
    }
}

/// Reduced state of one qubit, tracing out all others.
///
/// Sites are numbered from the most significant bit of the basis index,
/// matching the order of tensor-product factors.
pub fn reduced_single_site(rho: &DensityMatrix, site: u32) -> Result<DensityMatrix> {
    let n = rho.qubits();
    if site >= n {
        return Err(Error::InvalidArgument(format!(
            "site {site} out of range for {n} qubits"
        )));
    }
    let dim = rho.dim();
    let shift = n - 1 - site;
    let mut out = CMat::zeros(2);
    for j in 0..dim {
        let a = (j >> shift) & 1;
        for b in 0..2 {
            let k = (j & !(1 << shift)) | (b << shift);
            out[(a, b)] += rho.mat()[(j, k)];
        }
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// Base-2 logarithm of a positive-definite Hermitian matrix.
pub fn matrix_log2(m: &CMat) -> Result<CMat> {
    let sys = hermitian_eig(m)?;
    if sys.values.iter().any(|&v| v <= 0.0) {
        return Err(Error::InvalidArgument(
            "matrix logarithm requires strictly positive eigenvalues".into(),
        ));
    }
    let logged = EigenSystem {
        values: sys.values.iter().map(|v| v.log2()).collect(),
        basis: sys.basis,
    };
    Ok(logged.reconstruct())
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let sys = hermitian_eig(rho.mat())?;
    Ok(-sys
        .values
        .iter()
        .filter(|&&p| p > tol::SUPPORT_CUTOFF)
        .map(|&p| p * p.log2())
        .sum::<f64>())
}

/// Relative entropy `Tr(rho log2 rho) - Tr(rho log2 tau)` in bits.
///
/// Returns `+inf` when the support of `rho` is not contained in the support
/// of `tau` (eigenvalues at or below the support cutoff count as zero).
pub fn relative_entropy(rho: &DensityMatrix, tau: &DensityMatrix) -> Result<f64> {
    if rho.dim() != tau.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: tau.dim(),
        });
    }
    let rsys = hermitian_eig(rho.mat())?;
    let tsys = hermitian_eig(tau.mat())?;
    let n = rho.dim();
    let mut value = 0.0;
    for &p in &rsys.values {
        if p > tol::SUPPORT_CUTOFF {
            value += p * p.log2();
        }
    }
    for (j, &q) in tsys.values.iter().enumerate() {
        // Weight of rho along tau's j-th eigenvector.
        let mut mass = 0.0;
        for (i, &p) in rsys.values.iter().enumerate() {
            if p <= tol::SUPPORT_CUTOFF {
                continue;
            }
            let mut overlap = ZERO;
            for r in 0..n {
                overlap += rsys.basis[(r, i)].conj() * tsys.basis[(r, j)];
            }
            mass += p * overlap.norm_sqr();
        }
        if q <= tol::SUPPORT_CUTOFF {
            if mass > tol::SUPPORT_CUTOFF {
                return Ok(f64::INFINITY);
            }
        } else {
            value -= mass * q.log2();
        }
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> CMat {
        CMat::from_fn(dim, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> CMat {
        let m = random_matrix(rng, dim);
        CMat::from_fn(dim, |r, c_| (m[(r, c_)] + m[(c_, r)].conj()) * 0.5)
    }

    #[test]
    fn eig_identity() {
        let sys = hermitian_eig(&CMat::identity(2)).unwrap();
        assert!((sys.values[0] - 1.0).abs() < 1e-14);
        assert!((sys.values[1] - 1.0).abs() < 1e-14);
        let utu = &sys.basis.adjoint() * &sys.basis;
        assert!(utu.max_abs_diff(&CMat::identity(2)) < 1e-12);
    }

    #[test]
    fn eig_diagonal_keeps_computational_basis() {
        let m = CMat::from_rows(&[
            vec![c(0.75, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.25, 0.0)],
        ]);
        let sys = hermitian_eig(&m).unwrap();
        assert!((sys.values[0] - 0.75).abs() < 1e-15);
        assert!((sys.values[1] - 0.25).abs() < 1e-15);
        assert!(sys.basis.max_abs_diff(&CMat::identity(2)) < 1e-15);
    }

    #[test]
    fn eig_pure_tilted_state() {
        // (I + (X+Z)/sqrt2)/2 is a projector, so its spectrum is {1, 0}.
        let inv = 1.0 / 2.0_f64.sqrt();
        let m = &(&pauli_i() + &(&pauli_x() + &pauli_z()).scale(c(inv, 0.0))).scale(c(0.5, 0.0));
        let sys = hermitian_eig(m).unwrap();
        assert!((sys.values[0] - 1.0).abs() < 1e-12);
        assert!(sys.values[1].abs() < 1e-12);
        assert!(sys.reconstruct().max_abs_diff(m) < 1e-12);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &dim in &[2, 4, 8] {
            for _ in 0..50 {
                let m = random_hermitian(&mut rng, dim);
                let sys = hermitian_eig(&m).unwrap();
                assert!(sys.reconstruct().max_abs_diff(&m) < 1e-10);
                let utu = &sys.basis.adjoint() * &sys.basis;
                assert!(utu.max_abs_diff(&CMat::identity(dim)) < 1e-10);
                for w in sys.values.windows(2) {
                    assert!(w[0] >= w[1]);
                }
            }
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMat::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn relative_entropy_of_identical_states_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_hermitian(&mut rng, 4);
        let sys = hermitian_eig(&m).unwrap();
        // Shift and normalize the spectrum to produce a full-rank state.
        let shift = sys.values.last().unwrap().abs() + 0.1;
        let tr: f64 = sys.values.iter().map(|v| v + shift).sum();
        let rho = EigenSystem {
            values: sys.values.iter().map(|v| (v + shift) / tr).collect(),
            basis: sys.basis,
        }
        .reconstruct();
        let rho = DensityMatrix::new(rho).unwrap();
        let s = relative_entropy(&rho, &rho).unwrap();
        assert!(s.abs() < 1e-10, "got {s}");
    }

    #[test]
    fn relative_entropy_pure_vs_maximally_mixed() {
        let zero = DensityMatrix::new(CMat::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ]))
        .unwrap();
        let mixed = DensityMatrix::new(CMat::identity(2).scale(c(0.5, 0.0))).unwrap();
        let s = relative_entropy(&zero, &mixed).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_t_state_vs_scaled_axis() {
        // Commuting pure-vs-mixed pair: value is -log2((1+r)/2) at r = 1/sqrt3.
        let r = 1.0 / 3.0_f64.sqrt();
        let axis = [r / 3.0_f64.sqrt(); 3];
        let pure = [1.0 / 3.0_f64.sqrt(); 3];
        let dm = |x: [f64; 3]| {
            let m = &(&pauli_x().scale(c(x[0], 0.0)) + &pauli_y().scale(c(x[1], 0.0)))
                + &pauli_z().scale(c(x[2], 0.0));
            DensityMatrix::new((&pauli_i() + &m).scale(c(0.5, 0.0))).unwrap()
        };
        let s = relative_entropy(&dm(pure), &dm(axis)).unwrap();
        assert!((s - 0.342496936884082).abs() < 1e-12, "got {s}");
        let closed = -((1.0 + r) / 2.0).log2();
        assert!((s - closed).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_support_violation_is_infinite() {
        let zero = DensityMatrix::new(CMat::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ]))
        .unwrap();
        let one = DensityMatrix::new(CMat::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]))
        .unwrap();
        assert!(relative_entropy(&zero, &one).unwrap().is_infinite());
        let mixed = DensityMatrix::new(CMat::identity(2).scale(c(0.5, 0.0))).unwrap();
        assert!(relative_entropy(&mixed, &zero).unwrap().is_infinite());
    }

    #[test]
    fn relative_entropy_rejects_dimension_mismatch() {
        let a = DensityMatrix::new(CMat::identity(2).scale(c(0.5, 0.0))).unwrap();
        let b = DensityMatrix::new(CMat::identity(4).scale(c(0.25, 0.0))).unwrap();
        assert!(matches!(
            relative_entropy(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_of_diagonals() {
        let d = |a: f64, b: f64| {
            CMat::from_rows(&[vec![c(a, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(b, 0.0)]])
        };
        let t = d(2.0, 3.0).tensor(&d(5.0, 7.0));
        let expect = [10.0, 14.0, 15.0, 21.0];
        for (i, &e) in expect.iter().enumerate() {
            assert!((t[(i, i)] - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn hadamard_identity_and_mismatch() {
        let h = pauli_i().hadamard(&pauli_i()).unwrap();
        assert!(h.max_abs_diff(&pauli_i()) < 1e-15);
        assert!(matches!(
            CMat::identity(2).hadamard(&CMat::identity(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hadamard_tensor_mixed_product_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (a, b) = (random_matrix(&mut rng, 2), random_matrix(&mut rng, 2));
            let (d, e) = (random_matrix(&mut rng, 2), random_matrix(&mut rng, 2));
            let lhs = a.hadamard(&b).unwrap().tensor(&d.hadamard(&e).unwrap());
            let rhs = a.tensor(&d).hadamard(&b.tensor(&e)).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }
    }

    #[test]
    fn matrix_log2_matches_scalar_logs() {
        let m = CMat::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.25, 0.0)],
        ]);
        let l = matrix_log2(&m).unwrap();
        assert!((l[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-13);
        assert!((l[(1, 1)] - c(-2.0, 0.0)).norm() < 1e-13);
        assert!(matrix_log2(&CMat::zeros(2)).is_err());
    }

    #[test]
    fn von_neumann_entropy_examples() {
        let mixed = DensityMatrix::new(CMat::identity(2).scale(c(0.5, 0.0))).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-13);
        let zero = DensityMatrix::new(CMat::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ]))
        .unwrap();
        assert!(von_neumann_entropy(&zero).unwrap().abs() < 1e-13);
    }

    #[test]
    fn reduced_single_site_recovers_product_factors() {
        let dm = |x: [f64; 3]| {
            let m = &(&pauli_x().scale(c(x[0], 0.0)) + &pauli_y().scale(c(x[1], 0.0)))
                + &pauli_z().scale(c(x[2], 0.0));
            DensityMatrix::new((&pauli_i() + &m).scale(c(0.5, 0.0))).unwrap()
        };
        let t = 1.0 / 3.0_f64.sqrt();
        let h = 1.0 / 2.0_f64.sqrt();
        let (a, b) = (dm([t, t, t]), dm([h, h, 0.0]));
        let ab = a.tensor(&b);
        assert!(
            reduced_single_site(&ab, 0)
                .unwrap()
                .mat()
                .max_abs_diff(a.mat())
                < 1e-14
        );
        assert!(
            reduced_single_site(&ab, 1)
                .unwrap()
                .mat()
                .max_abs_diff(b.mat())
                < 1e-14
        );
        assert!(reduced_single_site(&ab, 2).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(CMat::identity(2)).is_err());
        assert!(DensityMatrix::new(CMat::identity(3).scale(c(1.0 / 3.0, 0.0))).is_err());
        let neg = CMat::from_rows(&[
            vec![c(1.5, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-0.5, 0.0)],
        ]);
        assert!(DensityMatrix::new(neg).is_err());
    }
}
