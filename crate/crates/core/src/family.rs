//! Families of states whose closest stabilizer state is known by
//! construction.
//!
//! Starting from a boundary stabilizer state `sigma` and a supporting
//! hyperplane `phi` tangent at `sigma`, the map
//! `rho(sigma, phi, t) = sigma - t * phi (.) L(sigma)` (entrywise product
//! in `sigma`'s eigenbasis, `L` the divided-logarithm matrix) produces a
//! ray of states whose relative-entropy distance to the stabilizer
//! polytope is attained at `sigma` and has a closed form. The module also
//! provides the ray's Bloch form, the endpoint parameter `t_max`, the
//! inclination angle of facet rays, the inverse map from a magic state
//! back to its stabilizer, and a linear model of angle versus distance.

use crate::bloch::{
    classify_boundary, density_from_bloch, vec3, BlochVector, BoundaryClass, SupportingHyperplane,
};
use crate::error::{Error, Result};
use crate::qmat::{hermitian_eig, relative_entropy, CMat, DensityMatrix, EigenSystem, C64};
use crate::stab::{octahedron_membership, Membership};
use crate::tol;

/// Divided-logarithm matrix `L(sigma)` in the eigenbasis of `sigma`.
#[derive(Clone, Debug)]
pub struct DividedLog {
    matrix: CMat,
    eigen: EigenSystem,
}

impl DividedLog {
    /// Entries `L(k,l)` in the eigenbasis (real, symmetric).
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// The eigensystem of `sigma` the entries refer to.
    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }
}

/// Divided-difference entry `(a - b) / (ln a - ln b)`, continued by `a` on
/// the diagonal `a = b` (tolerance 1e-12). Arguments are ordered internally
/// so the result is exactly symmetric.
pub(crate) fn divided_entry(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi - lo <= 1e-12 {
        hi
    } else {
        (hi - lo) / ((hi - lo) / lo).ln_1p()
    }
}

/// Builds the divided-difference matrix for a list of eigenvalues.
pub(crate) fn divided_matrix(values: &[f64]) -> CMat {
    CMat::from_fn(values.len(), |k, l| {
        C64::new(divided_entry(values[k], values[l]), 0.0)
    })
}

/// Divided-logarithm matrix of a full-rank state.
pub fn divided_log(sigma: &DensityMatrix) -> Result<DividedLog> {
    let eigen = hermitian_eig(sigma.mat())?;
    if eigen.values.iter().any(|&v| v < tol::DIVIDED_LOG_MIN) {
        return Err(Error::InvalidArgument(format!(
            "divided log requires eigenvalues >= {:.0e}, got {:?}",
            tol::DIVIDED_LOG_MIN,
            eigen.values
        )));
    }
    Ok(DividedLog {
        matrix: divided_matrix(&eigen.values),
        eigen,
    })
}

/// The scalar `g_r = r / ln((1+r)/(1-r))` controlling ray bending.
pub fn g_factor(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "g factor needs r in (0, 1), got {r}"
        )));
    }
    Ok(r / ((1.0 + r) / (1.0 - r)).ln())
}

/// Reverse map `rho = sigma - t * phi (.) L(sigma)` in `sigma`'s eigenbasis.
///
/// `phi` is any Hermitian matrix with `Tr(phi sigma) = 0`; the entrywise
/// product is taken in the eigenbasis of `sigma` and the result rotated
/// back. Fails when the result is not positive semidefinite, which marks
/// `t` past the endpoint of the ray.
pub fn magic_from_stabilizer(sigma: &DensityMatrix, phi: &CMat, t: f64) -> Result<DensityMatrix> {
    if phi.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: phi.dim(),
            right: sigma.dim(),
        });
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "ray parameter t = {t} must be >= 0"
        )));
    }
    let dev = phi.hermiticity_deviation();
    if dev > tol::HERMITIAN_INPUT {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    let tangency = (phi * sigma.mat()).trace();
    if tangency.norm() > tol::TANGENCY {
        return Err(Error::InvalidArgument(format!(
            "hyperplane is not tangent at sigma: Tr(phi sigma) = {tangency}"
        )));
    }
    let dl = divided_log(sigma)?;
    let u = &dl.eigen().basis;
    let phi_tilde = &(&u.adjoint() * phi) * u;
    let sigma_tilde = CMat::from_fn(sigma.dim(), |k, l| {
        if k == l {
            C64::new(dl.eigen().values[k], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let rho_tilde = &sigma_tilde - &phi_tilde.hadamard(dl.matrix())?.scale(C64::new(t, 0.0));
    let rho = &(u * &rho_tilde) * &u.adjoint();
    DensityMatrix::new(rho).map_err(|e| match e {
        Error::InvalidDensity(msg) if msg.contains("negative eigenvalue") => {
            Error::InvalidArgument(format!(
                "t = {t} is past the endpoint of the ray (state left the Bloch ball): {msg}"
            ))
        }
        other => other,
    })
}

fn check_ray_inputs(x_sigma: &BlochVector, phi: &SupportingHyperplane) -> Result<f64> {
    let r = x_sigma.r();
    if !(r > 1e-9 && r < 1.0 - 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "stabilizer Bloch length r = {r} must be strictly inside (0, 1)"
        )));
    }
    if !phi.is_tangent_at(x_sigma) {
        return Err(Error::InvalidArgument(format!(
            "hyperplane is not tangent at sigma: Tr(phi sigma) = {:.3e}",
            phi.value_at(x_sigma)
        )));
    }
    Ok(r)
}

/// Direction and magnitude of the ray's Bloch velocity: `x_rho(t) =
/// x_sigma - t * w`.
fn ray_velocity(x_sigma: &BlochVector, phi: &SupportingHyperplane, r: f64) -> Result<[f64; 3]> {
    let g = g_factor(r)?;
    let coeff = phi.phi0() * ((r * r - 1.0) + 2.0 * g) / (2.0 * r * r);
    Ok(vec3::add(
        &vec3::scale(&x_sigma.components(), coeff),
        &vec3::scale(&phi.x_phi(), g),
    ))
}

/// Bloch form of the reverse map.
pub fn magic_bloch(
    x_sigma: &BlochVector,
    phi: &SupportingHyperplane,
    t: f64,
) -> Result<BlochVector> {
    let r = check_ray_inputs(x_sigma, phi)?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "ray parameter t = {t} must be >= 0"
        )));
    }
    let w = ray_velocity(x_sigma, phi, r)?;
    let x = vec3::sub(&x_sigma.components(), &vec3::scale(&w, t));
    BlochVector::new(x)
        .map_err(|_| Error::InvalidArgument(format!("t = {t} is past the endpoint of the ray")))
}

/// Ray parameter at which the state becomes pure (`|x_rho| = 1`).
///
/// Solves the quadratic `|x_sigma - t w|^2 = 1` for its positive root.
pub fn t_max(x_sigma: &BlochVector, phi: &SupportingHyperplane) -> Result<f64> {
    let r = check_ray_inputs(x_sigma, phi)?;
    let w = ray_velocity(x_sigma, phi, r)?;
    let w2 = vec3::dot(&w, &w);
    if w2 < 1e-24 {
        return Err(Error::InvalidArgument(
            "ray does not move; no positive endpoint parameter".into(),
        ));
    }
    let b = vec3::dot(&x_sigma.components(), &w);
    let disc = b * b + w2 * (1.0 - r * r);
    if disc < 0.0 {
        return Err(Error::InvalidArgument(
            "no positive endpoint parameter; hyperplane does not support sigma".into(),
        ));
    }
    Ok((b + disc.sqrt()) / w2)
}

/// Alternate closed-form endpoint parameter retained for comparison.
///
/// This published closed form disagrees with the quadratic solve away from
/// its derivation's commuting checkpoints (at the facet centroid it returns
/// exactly 3/2 of the quadratic root, consistent with a dropped `2 r^2`
/// factor). [`t_max`] is authoritative; this form backs the comparison
/// column behind the CLI's alternate endpoint flag.
pub fn t_max_alternate(x_sigma: &BlochVector, phi: &SupportingHyperplane) -> Result<f64> {
    let r = check_ray_inputs(x_sigma, phi)?;
    let g = g_factor(r)?;
    let r2 = r * r;
    let phi0 = phi.phi0();
    let r_phi = phi.r_phi();
    let h =
        (r2 - 1.0) * (r2 - 1.0) * phi0 * phi0 + 4.0 * g * g * (r2 * r_phi * r_phi - phi0 * phi0);
    if h.abs() < 1e-300 {
        return Err(Error::InvalidArgument(
            "degenerate coefficient in alternate form".into(),
        ));
    }
    let inner = phi0 * phi0 - h * (r2 - 1.0) / (r2 * (r2 - 1.0) * (r2 - 1.0));
    if inner < 0.0 {
        return Err(Error::InvalidArgument(
            "alternate form has no real root".into(),
        ));
    }
    Ok((r2 - 1.0) / h * (phi0 - inner.sqrt()))
}

/// Closed-form relative entropy (bits) between the ray state at `t` and
/// its stabilizer `sigma`.
pub fn rel_entropy_closed_form(
    x_sigma: &BlochVector,
    phi: &SupportingHyperplane,
    t: f64,
) -> Result<f64> {
    let r = check_ray_inputs(x_sigma, phi)?;
    let tmax = t_max(x_sigma, phi)?;
    if !(0.0..=tmax * (1.0 + 1e-9) + 1e-12).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "t = {t} outside the ray range [0, {tmax}]"
        )));
    }
    let r_rho = magic_bloch(x_sigma, phi, t.min(tmax))?.r();
    let log_ratio_sigma = ((1.0 + r) / (1.0 - r)).log2();
    // Common coefficient of the stabilizer term in both branches.
    let sigma_coeff = r - (t * phi.phi0() / (2.0 * r)) * (r * r - 1.0);
    let sigma_term = sigma_coeff * log_ratio_sigma;
    let one_minus_r2 = (1.0 - r) * (1.0 + r);
    if r_rho >= 1.0 - 1e-12 {
        Ok(1.0 - 0.5 * (one_minus_r2.log2() + sigma_term))
    } else {
        let one_minus_rho2 = (1.0 - r_rho) * (1.0 + r_rho);
        Ok(0.5
            * (r_rho * ((1.0 + r_rho) / (1.0 - r_rho)).log2()
                + (one_minus_rho2 / one_minus_r2).log2()
                - sigma_term))
    }
}

/// Inclination of a facet ray against the facet normal, in radians.
///
/// Facet rays tilt away from the normal by an angle that depends only on
/// the stabilizer's Bloch length; the centroid ray is exactly normal.
pub fn inclination_angle(r_sigma: f64) -> Result<f64> {
    let lo = 1.0 / 3.0_f64.sqrt();
    if !(r_sigma >= lo - 1e-12 && r_sigma < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "facet states have Bloch length in [1/sqrt(3), 1), got {r_sigma}"
        )));
    }
    let r = r_sigma.max(lo);
    let g = g_factor(r)?;
    let u = 1.0 - r * r;
    let v = (3.0 * r * r - 1.0).max(0.0);
    let num = u + 2.0 * g * v;
    let den = 3.0_f64.sqrt() * r * (u * u + 4.0 * g * g * v).sqrt();
    let arg = num / den;
    if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&arg) {
        return Err(Error::InvalidArgument(format!(
            "angle argument {arg} outside [-1, 1]"
        )));
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

/// Inverse map: the stabilizer state of a pure magic state in the (+++)
/// facet region, given the ray's inclination angle.
///
/// Exact when `x_rho` is the pure endpoint of a facet ray and `alpha` is
/// that ray's true inclination angle; with a fitted `alpha` the result is
/// approximate.
pub fn closest_stabilizer_from_magic(x_rho: &BlochVector, alpha: f64) -> Result<BlochVector> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "inclination angle {alpha} outside [0, pi/2)"
        )));
    }
    let x = x_rho.components();
    if x.iter().any(|&v| v < -1e-12) {
        return Err(Error::InvalidArgument(
            "magic state is outside the (+++) octant region".into(),
        ));
    }
    let sum: f64 = x.iter().sum();
    if sum < 1.0 - 1e-12 {
        return Err(Error::InvalidArgument(
            "state is inside the stabilizer octahedron; it is its own closest state".into(),
        ));
    }
    let centroid = [1.0 / 3.0; 3];
    // In-plane part of x_rho relative to the facet normal.
    let planar = [0, 1, 2].map(|k| x[k] - sum / 3.0);
    if vec3::norm(&planar) < 1e-12 {
        return BlochVector::new(centroid);
    }
    let b = 1.0 + alpha.tan() * ((1.0 - sum) * (1.0 - sum) / (3.0 - sum * sum)).sqrt();
    let x_sigma = vec3::add(&centroid, &vec3::scale(&planar, b));
    if x_sigma.iter().any(|&v| v < -1e-10) {
        return Err(Error::InvalidArgument(
            "closest state lies on an edge, outside this map's facet domain".into(),
        ));
    }
    BlochVector::new(x_sigma.map(|v| v.max(0.0)))
}

/// Least-squares line fitted to (distance, angle) samples.
#[derive(Clone, Copy, Debug)]
pub struct AngleModel {
    /// Slope of angle versus distance.
    pub slope: f64,
    /// Intercept at distance zero.
    pub intercept: f64,
    /// Largest absolute residual over the samples.
    pub max_residual: f64,
}

impl AngleModel {
    /// Model prediction at a distance.
    pub fn predict(&self, distance: f64) -> f64 {
        self.slope * distance + self.intercept
    }
}

/// Fits the linear angle-versus-distance model used by the inverse map.
pub fn fit_angle_model(samples: &[(f64, f64)]) -> Result<AngleModel> {
    if samples.len() < 10 {
        return Err(Error::InvalidArgument(format!(
            "need at least 10 samples, got {}",
            samples.len()
        )));
    }
    let (dmin, dmax) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(d, _)| {
            (lo.min(d), hi.max(d))
        });
    if dmax - dmin < 1e-12 {
        return Err(Error::InvalidArgument(
            "need at least 2 distinct distances to fit a line".into(),
        ));
    }
    let n = samples.len() as f64;
    let sx: f64 = samples.iter().map(|s| s.0).sum();
    let sy: f64 = samples.iter().map(|s| s.1).sum();
    let sxx: f64 = samples.iter().map(|s| s.0 * s.0).sum();
    let sxy: f64 = samples.iter().map(|s| s.0 * s.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let max_residual = samples
        .iter()
        .map(|&(d, a)| (a - slope * d - intercept).abs())
        .fold(0.0, f64::max);
    Ok(AngleModel {
        slope,
        intercept,
        max_residual,
    })
}

/// A reverse-map ray: stabilizer state, tangent hyperplane, and derived
/// scalars.
#[derive(Clone, Debug)]
pub struct MagicRay {
    sigma: BlochVector,
    phi: SupportingHyperplane,
    t_max: f64,
    g_r: f64,
    alpha: Option<f64>,
    x_d: [f64; 3],
}

impl MagicRay {
    /// Builds a ray from a boundary, non-vertex stabilizer state and a
    /// hyperplane tangent at it.
    pub fn new(sigma: BlochVector, phi: SupportingHyperplane) -> Result<Self> {
        if octahedron_membership(&sigma) != Membership::Boundary {
            return Err(Error::InvalidArgument(
                "ray stabilizer must lie on the octahedron boundary".into(),
            ));
        }
        let class = classify_boundary(&sigma)?;
        if matches!(class, BoundaryClass::Vertex { .. }) {
            return Err(Error::InvalidArgument(
                "vertices are rank-deficient and admit no rays".into(),
            ));
        }
        let tmax = t_max(&sigma, &phi)?;
        let g_r = g_factor(sigma.r())?;
        let alpha = match class {
            BoundaryClass::Facet { .. } => Some(inclination_angle(sigma.r())?),
            _ => None,
        };
        let endpoint = magic_bloch(&sigma, &phi, tmax)?;
        let x_d = vec3::sub(&endpoint.components(), &sigma.components());
        Ok(MagicRay {
            sigma,
            phi,
            t_max: tmax,
            g_r,
            alpha,
            x_d,
        })
    }

    /// The stabilizer state the ray starts from.
    pub fn sigma(&self) -> &BlochVector {
        &self.sigma
    }

    /// The tangent hyperplane defining the ray.
    pub fn phi(&self) -> &SupportingHyperplane {
        &self.phi
    }

    /// Endpoint parameter where the ray state becomes pure.
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Bending factor `g_r` of the stabilizer state.
    pub fn g_r(&self) -> f64 {
        self.g_r
    }

    /// Inclination angle against the facet normal (facet rays only).
    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// Displacement from the stabilizer to the pure endpoint.
    pub fn x_d(&self) -> [f64; 3] {
        self.x_d
    }

    /// Ray state at parameter `t`.
    pub fn state_at(&self, t: f64) -> Result<BlochVector> {
        magic_bloch(&self.sigma, &self.phi, t)
    }

    /// Pure state at the end of the ray.
    pub fn endpoint(&self) -> Result<BlochVector> {
        self.state_at(self.t_max)
    }

    /// Closed-form relative entropy of the ray state at `t`.
    pub fn entropy_at(&self, t: f64) -> Result<f64> {
        rel_entropy_closed_form(&self.sigma, &self.phi, t)
    }

    /// Density matrices (state, stabilizer) at parameter `t`.
    pub fn densities_at(&self, t: f64) -> Result<(DensityMatrix, DensityMatrix)> {
        let sigma = density_from_bloch(&self.sigma);
        let rho = magic_from_stabilizer(&sigma, &self.phi.matrix(), t)?;
        Ok((rho, sigma))
    }
}

/// Direct relative entropy between the ray state at `t` and `sigma`,
/// through the full matrix route (cross-check for the closed form).
pub fn rel_entropy_direct(
    x_sigma: &BlochVector,
    phi: &SupportingHyperplane,
    t: f64,
) -> Result<f64> {
    let sigma = density_from_bloch(x_sigma);
    let rho = magic_from_stabilizer(&sigma, &phi.matrix(), t)?;
    relative_entropy(&rho, &sigma)
}
