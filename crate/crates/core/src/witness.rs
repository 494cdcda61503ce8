//! Multi-site witness planes for products of ray states.
//!
//! A product of boundary stabilizer states with tangent planes and ray
//! parameters defines a joint tangent operator on the product polytope.
//! This module rebuilds that operator along two independent routes, splits
//! it into lifted single-site planes plus a genuinely multi-site
//! correction, evaluates its trace against product states in closed form,
//! and searches for stabilizer states that push the trace negative, which
//! certifies that the product polytope reaches past every product plane.

use std::collections::BTreeMap;

use crate::bloch::{
    classify_boundary, density_from_bloch, edge_hyperplane, vec3, BlochVector, BoundaryClass,
    EdgeId, FacetId, SupportingHyperplane, VertexId,
};
use crate::error::{Error, Result};
use crate::family::{divided_entry, magic_bloch, rel_entropy_closed_form, t_max};
use crate::optim::relative_entropy_of_magic;
use crate::qmat::{hermitian_eig, CMat, DensityMatrix, C64};
use crate::stab::enumerate_pure_stabilizers;
use crate::tol;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Largest entry of the commutator `[a, b]`.
fn commutator_norm(a: &CMat, b: &CMat) -> f64 {
    let ab = a * b;
    let ba = b * a;
    ab.max_abs_diff(&ba)
}

/// Whether two states commute: largest commutator entry within tolerance.
pub fn classify_commuting(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<bool> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    Ok(commutator_norm(rho.mat(), sigma.mat()) <= tol::COMMUTATOR)
}

/// One tensor factor of a product ray: a boundary stabilizer state, its
/// tangent plane, the ray parameter, and the resulting ray state.
#[derive(Clone, Debug)]
pub struct RayComponent {
    sigma: BlochVector,
    phi: SupportingHyperplane,
    t: f64,
    t_max: f64,
    rho: BlochVector,
    commuting: bool,
}

impl RayComponent {
    /// Builds a component, validating that `sigma` lies on the octahedron
    /// boundary, `phi` is tangent there, and `t` is within `[0, t_max]`.
    pub fn new(sigma: BlochVector, phi: SupportingHyperplane, t: f64) -> Result<Self> {
        classify_boundary(&sigma)?;
        let tmax = t_max(&sigma, &phi)?;
        if !t.is_finite() || t < 0.0 || t > tmax * (1.0 + 1e-9) {
            return Err(Error::InvalidArgument(format!(
                "ray parameter t = {t} outside [0, {tmax:.12}]"
            )));
        }
        let t_eff = t.min(tmax);
        let rho = magic_bloch(&sigma, &phi, t_eff)?;
        let sigma_dm = density_from_bloch(&sigma);
        let n_rho = commutator_norm(density_from_bloch(&rho).mat(), sigma_dm.mat());
        let commuting = n_rho <= tol::COMMUTATOR;
        // The ray commutator must track the plane commutator scaled by t
        // and the off-diagonal divided-log entry; a gross mismatch means
        // the state was not built from this plane.
        let n_phi = commutator_norm(&phi.matrix(), sigma_dm.mat());
        if t_eff > 0.0 && n_phi > 1e-8 {
            let r = sigma.r();
            let expected = t_eff * divided_entry((1.0 + r) / 2.0, (1.0 - r) / 2.0) * n_phi;
            if n_rho > 4.0 * expected || n_rho < expected / 4.0 {
                return Err(Error::Inconsistent(format!(
                    "state commutator {n_rho:.3e} inconsistent with plane commutator {n_phi:.3e}"
                )));
            }
        }
        Ok(RayComponent {
            sigma,
            phi,
            t: t_eff,
            t_max: tmax,
            rho,
            commuting,
        })
    }

    /// Stabilizer Bloch vector.
    pub fn sigma(&self) -> &BlochVector {
        &self.sigma
    }

    /// Tangent plane at the stabilizer.
    pub fn phi(&self) -> &SupportingHyperplane {
        &self.phi
    }

    /// Ray parameter.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Endpoint parameter of the ray.
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Bloch vector of the ray state at `t`.
    pub fn rho_bloch(&self) -> &BlochVector {
        &self.rho
    }

    /// Ray state at `t` as a density matrix.
    pub fn rho_density(&self) -> DensityMatrix {
        density_from_bloch(&self.rho)
    }

    /// Stabilizer as a density matrix.
    pub fn sigma_density(&self) -> DensityMatrix {
        density_from_bloch(&self.sigma)
    }

    /// Whether the ray state commutes with its stabilizer.
    pub fn commuting(&self) -> bool {
        self.commuting
    }
}

/// Per-site quantities in the eigenbasis of the site stabilizer.
struct SiteData {
    /// Stabilizer eigenvalues, descending; index 0 is the `+x_hat` branch.
    values: [f64; 2],
    basis: CMat,
    /// Tangent plane conjugated into the eigenbasis and scaled by `t`.
    phi_hat: CMat,
    /// Off-diagonal divided-log entry between the two eigenvalues.
    l_off: f64,
    t: f64,
    r: f64,
    phi0: f64,
    x_phi: [f64; 3],
    x_hat: [f64; 3],
    /// Longitudinal plane component `x_phi . x_hat`.
    a_long: f64,
    /// Transverse part of `x_phi`.
    c0: [f64; 3],
    /// Rotation channel `x_hat x x_phi`.
    c1: [f64; 3],
}

fn site_data(comp: &RayComponent) -> Result<SiteData> {
    let sigma_dm = comp.sigma_density();
    let eig = hermitian_eig(sigma_dm.mat())?;
    let values = [eig.values[0], eig.values[1]];
    if values[1] < tol::DIVIDED_LOG_MIN {
        return Err(Error::InvalidArgument(format!(
            "stabilizer eigenvalue {:.3e} too small for the divided logarithm",
            values[1]
        )));
    }
    let conjugated = &(&eig.basis.adjoint() * &comp.phi().matrix()) * &eig.basis;
    let phi_hat = conjugated.scale(C64::new(comp.t(), 0.0));
    let r = comp.sigma().r();
    let x_hat = vec3::scale(&comp.sigma().components(), 1.0 / r);
    let x_phi = comp.phi().x_phi();
    let c1 = vec3::cross(&x_hat, &x_phi);
    let c0 = vec3::cross(&c1, &x_hat);
    Ok(SiteData {
        values,
        basis: eig.basis,
        phi_hat,
        l_off: divided_entry(values[0], values[1]),
        t: comp.t(),
        r,
        phi0: comp.phi().phi0(),
        x_phi,
        x_hat,
        a_long: vec3::dot(&x_phi, &x_hat),
        c0,
        c1,
    })
}

/// Bit of matrix index `index` belonging to `site` (site 0 is the most
/// significant bit, matching tensor-factor order).
fn site_bit(index: usize, site: usize, n: usize) -> usize {
    (index >> (n - 1 - site)) & 1
}

/// Pair-contraction ratios of two site spectra: the divided-log product
/// over the aligned (`plus`) and swapped (`minus`) eigenvalue pairings.
pub fn gamma_pm(r1: f64, r2: f64) -> Result<(f64, f64)> {
    for r in [r1, r2] {
        if !(r > 1e-9 && r < 1.0 - 1e-9) {
            return Err(Error::InvalidArgument(format!(
                "Bloch length {r} must be strictly inside (0, 1)"
            )));
        }
    }
    let l1 = ((1.0 + r1) / (1.0 - r1)).ln();
    let l2 = ((1.0 + r2) / (1.0 - r2)).ln();
    let plus = 2.0 * r1 * r2 * (l1 + l2) / ((r1 + r2) * l1 * l2);
    // (l1 - l2)/(r1 - r2) through a cancellation-free log argument; the
    // series takes over where the direct quotient loses digits.
    let u = 2.0 * (r1 - r2) / ((1.0 - r1) * (1.0 + r2));
    let slope = if (r1 - r2).abs() < 1e-7 {
        2.0 / ((1.0 - r1) * (1.0 + r2)) * (1.0 - u / 2.0 + u * u / 3.0)
    } else {
        u.ln_1p() / (r1 - r2)
    };
    let minus = 2.0 * r1 * r2 * slope / (l1 * l2);
    Ok((plus, minus))
}

/// Joint tangent operator of a product ray, with its split into lifted
/// single-site planes plus the multi-site correction.
///
/// All matrices live in the product eigenbasis of the site stabilizers;
/// per-site ray parameters are absorbed into the plane factors.
pub struct HyperplaneNQ {
    components: Vec<RayComponent>,
    sites: Vec<SiteData>,
    basis: CMat,
    phi: CMat,
    phi_tilde: CMat,
    chi: CMat,
    delta: CMat,
    a_m: BTreeMap<(u8, u8), f64>,
    gammas: (f64, f64),
    scale: f64,
}

/// Rebuilds the joint tangent operator of a product ray along two routes.
///
/// The structured route assembles lifted planes plus the correction term;
/// the direct route divides the product-state displacement entrywise by
/// the divided logarithm of the product stabilizer. The two must agree up
/// to a positive scale, and the correction must match its defining
/// entrywise quotient; any mismatch is an internal-consistency error.
pub fn reconstruct_hyperplane(components: &[RayComponent]) -> Result<HyperplaneNQ> {
    let n = components.len();
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "need 2 or 3 components, got {n}"
        )));
    }
    for comp in components {
        if comp.t() <= 0.0 {
            return Err(Error::InvalidArgument(
                "ray parameter must be positive to define a joint plane".into(),
            ));
        }
    }
    let sites: Vec<SiteData> = components.iter().map(site_data).collect::<Result<_>>()?;
    let dim = 1usize << n;

    let mut basis = sites[0].basis.clone();
    for s in &sites[1..] {
        basis = basis.tensor(&s.basis);
    }

    let lambda: Vec<f64> = (0..dim)
        .map(|k| (0..n).map(|i| sites[i].values[site_bit(k, i, n)]).product())
        .collect();

    // Lifted single-site part: complement of the product of plane deficits.
    let mut prod_factor = plane_deficit(&sites[0]);
    for s in &sites[1..] {
        prod_factor = prod_factor.tensor(&plane_deficit(s));
    }
    let phi_tilde = &CMat::identity(dim) - &prod_factor;

    // Correction coefficients per differing-site set and sign pattern.
    let mut d_tables: BTreeMap<u8, Vec<f64>> = BTreeMap::new();
    for mask in 0..(1u8 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let l_prod: f64 = members.iter().map(|&i| sites[i].l_off).product();
        let mut dv = Vec::with_capacity(1 << members.len());
        for nu in 0..(1usize << members.len()) {
            let mut lam = 1.0;
            let mut lam_bar = 1.0;
            for (j, &i) in members.iter().enumerate() {
                let bit = nu >> j & 1;
                lam *= sites[i].values[bit];
                lam_bar *= sites[i].values[1 - bit];
            }
            dv.push(1.0 - l_prod / divided_entry(lam, lam_bar));
        }
        d_tables.insert(mask, dv);
    }

    let mut a_m = BTreeMap::new();
    for (&mask, dv) in &d_tables {
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let full = dv.len() - 1;
        for m in 0..dv.len() {
            // Coefficients for complementary sign patterns are equal, so
            // fold each pair with an integer weight; odd patterns then
            // cancel exactly instead of up to rounding.
            let mut acc = 0.0;
            for (nu, &d) in dv.iter().enumerate() {
                let bar = full ^ nu;
                if nu > bar {
                    continue;
                }
                let sign = |p: usize| {
                    if (p & m).count_ones() % 2 == 1 {
                        -1i32
                    } else {
                        1
                    }
                };
                acc += d * f64::from(sign(nu) + sign(bar));
            }
            let mut m_sites: u8 = 0;
            for (j, &i) in members.iter().enumerate() {
                if m >> j & 1 == 1 {
                    m_sites |= 1 << i;
                }
            }
            a_m.insert((mask, m_sites), acc / dv.len() as f64);
        }
    }

    let delta = CMat::from_fn(dim, |k, l| {
        let mut dmask: u8 = 0;
        for i in 0..n {
            if site_bit(k, i, n) != site_bit(l, i, n) {
                dmask |= 1 << i;
            }
        }
        if dmask.count_ones() < 2 {
            return C64::new(0.0, 0.0);
        }
        let members: Vec<usize> = (0..n).filter(|i| dmask >> i & 1 == 1).collect();
        let mut nu = 0usize;
        for (j, &i) in members.iter().enumerate() {
            nu |= site_bit(k, i, n) << j;
        }
        C64::new(d_tables[&dmask][nu], 0.0)
    });

    let chi = prod_factor.hadamard(&delta)?;
    let phi = &phi_tilde + &chi;

    // The correction table must agree with its defining quotient on every
    // entry, including the ones it declares exactly zero.
    let mut delta_dev = 0.0_f64;
    for k in 0..dim {
        for l in 0..dim {
            let mut l_prod = 1.0;
            for (i, s) in sites.iter().enumerate() {
                let (kb, lb) = (site_bit(k, i, n), site_bit(l, i, n));
                l_prod *= if kb == lb { s.values[kb] } else { s.l_off };
            }
            let numeric = 1.0 - l_prod / divided_entry(lambda[k], lambda[l]);
            delta_dev = delta_dev.max((delta[(k, l)].re - numeric).abs());
        }
    }
    if delta_dev > tol::DELTA_AGREEMENT {
        return Err(Error::Inconsistent(format!(
            "correction table deviates from its entrywise quotient by {delta_dev:.3e}"
        )));
    }

    // Direct route: product-state displacement over the divided log.
    let mut rho_tilde = site_state_tilde(&sites[0]);
    for s in &sites[1..] {
        rho_tilde = rho_tilde.tensor(&site_state_tilde(s));
    }
    let phi_direct = CMat::from_fn(dim, |k, l| {
        let sigma_entry = if k == l {
            C64::new(lambda[k], 0.0)
        } else {
            C64::new(0.0, 0.0)
        };
        (sigma_entry - rho_tilde[(k, l)]) / divided_entry(lambda[k], lambda[l])
    });
    let mut scale_num = 0.0;
    let mut scale_den = 0.0;
    for k in 0..dim {
        for l in 0..dim {
            scale_num += (phi_direct[(k, l)].conj() * phi[(k, l)]).re;
            scale_den += phi_direct[(k, l)].norm_sqr();
        }
    }
    let scale = scale_num / scale_den;
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::Inconsistent(format!(
            "split and direct plane routes differ by a non-positive scale {scale:.3e}"
        )));
    }
    let route_dev = phi.max_abs_diff(&phi_direct.scale(C64::new(scale, 0.0)));
    if route_dev > tol::CROSS_ROUTE {
        return Err(Error::Inconsistent(format!(
            "split and direct plane routes disagree by {route_dev:.3e}"
        )));
    }

    // Pair ratios from the closed form, checked against the table route.
    let gammas = gamma_pm(sites[0].r, sites[1].r)?;
    let pair = &d_tables[&0b11];
    let gamma_dev = (gammas.0 - (1.0 - pair[0]))
        .abs()
        .max((gammas.1 - (1.0 - pair[1])).abs());
    if gamma_dev > 1e-10 {
        return Err(Error::Inconsistent(format!(
            "closed-form pair ratios deviate from the table route by {gamma_dev:.3e}"
        )));
    }

    Ok(HyperplaneNQ {
        components: components.to_vec(),
        sites,
        basis,
        phi,
        phi_tilde,
        chi,
        delta,
        a_m,
        gammas,
        scale,
    })
}

/// Single-site plane deficit `I - phi_hat` in the site eigenbasis.
fn plane_deficit(site: &SiteData) -> CMat {
    let mut m = site.phi_hat.scale(C64::new(-1.0, 0.0));
    m[(0, 0)] += C64::new(1.0, 0.0);
    m[(1, 1)] += C64::new(1.0, 0.0);
    m
}

/// Site ray state in the site eigenbasis: the spectrum minus the plane
/// weighted entrywise by the divided log.
fn site_state_tilde(site: &SiteData) -> CMat {
    CMat::from_fn(2, |k, l| {
        let weight = if k == l { site.values[k] } else { site.l_off };
        let diag = if k == l {
            C64::new(site.values[k], 0.0)
        } else {
            C64::new(0.0, 0.0)
        };
        diag - site.phi_hat[(k, l)] * weight
    })
}

impl HyperplaneNQ {
    /// Number of sites.
    pub fn n(&self) -> usize {
        self.components.len()
    }

    /// The components the plane was built from.
    pub fn components(&self) -> &[RayComponent] {
        &self.components
    }

    /// Product eigenbasis mapping eigen coordinates to computational ones.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// Joint tangent operator in the product eigenbasis.
    pub fn phi(&self) -> &CMat {
        &self.phi
    }

    /// Lifted single-site part.
    pub fn phi_tilde(&self) -> &CMat {
        &self.phi_tilde
    }

    /// Multi-site correction.
    pub fn chi(&self) -> &CMat {
        &self.chi
    }

    /// Correction coefficient table (zero unless at least two sites
    /// differ).
    pub fn delta(&self) -> &CMat {
        &self.delta
    }

    /// Sign-pattern transform of the correction coefficients, keyed by
    /// (site mask, pattern mask); odd patterns vanish.
    pub fn a_m(&self) -> &BTreeMap<(u8, u8), f64> {
        &self.a_m
    }

    /// Pair-contraction ratios of the first two sites.
    pub fn gammas(&self) -> (f64, f64) {
        self.gammas
    }

    /// Least-squares scale between the structured and direct routes.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Per-site channel vectors: transverse plane part and rotation
    /// channel. Both vanish exactly for commuting sites.
    pub fn c_vectors(&self) -> Vec<([f64; 3], [f64; 3])> {
        self.sites.iter().map(|s| (s.c0, s.c1)).collect()
    }

    /// Joint tangent operator in the computational basis.
    pub fn phi_computational(&self) -> CMat {
        &(&self.basis * &self.phi) * &self.basis.adjoint()
    }

    fn check_sites(&self, xs: &[BlochVector]) -> Result<()> {
        if xs.len() != self.n() {
            return Err(Error::DimensionMismatch {
                left: xs.len(),
                right: self.n(),
            });
        }
        Ok(())
    }

    /// Product state conjugated into the product eigenbasis.
    fn product_tilde(&self, xs: &[BlochVector]) -> Result<CMat> {
        self.check_sites(xs)?;
        let site = |i: usize| {
            let dm = density_from_bloch(&xs[i]);
            &(&self.sites[i].basis.adjoint() * dm.mat()) * &self.sites[i].basis
        };
        let mut out = site(0);
        for i in 1..self.n() {
            out = out.tensor(&site(i));
        }
        Ok(out)
    }

    /// Trace of the joint operator against a product state.
    pub fn witness_trace(&self, xs: &[BlochVector]) -> Result<f64> {
        Ok(self.phi.trace_product(&self.product_tilde(xs)?).re)
    }

    /// Trace of the lifted single-site part, in closed form.
    pub fn phi_tilde_trace(&self, xs: &[BlochVector]) -> Result<f64> {
        self.check_sites(xs)?;
        let mut prod = 1.0;
        for (site, x) in self.sites.iter().zip(xs) {
            prod *= 1.0 - site.t * 0.5 * (site.phi0 + vec3::dot(&site.x_phi, &x.components()));
        }
        Ok(1.0 - prod)
    }

    /// Trace of the multi-site correction against a product state, from
    /// the sign-pattern expansion.
    pub fn chi_trace(&self, xs: &[BlochVector]) -> Result<f64> {
        self.check_sites(xs)?;
        let n = self.n();
        let mut p = vec![0.0; n];
        let mut q = vec![0.0; n];
        let mut f = vec![0.0; n];
        for (i, (site, x)) in self.sites.iter().zip(xs).enumerate() {
            let c = x.components();
            p[i] = vec3::dot(&site.c0, &c);
            q[i] = vec3::dot(&site.c1, &c);
            f[i] = 1.0 - site.t * 0.5 * (site.phi0 + site.a_long * vec3::dot(&c, &site.x_hat));
        }
        let mut total = 0.0;
        for (&(s_mask, m_mask), &a) in &self.a_m {
            let weight = m_mask.count_ones();
            if weight % 2 == 1 {
                continue;
            }
            let sign = if weight % 4 == 2 { -1.0 } else { 1.0 };
            let mut term = sign * a;
            for i in 0..n {
                let bit = 1u8 << i;
                term *= if s_mask & bit != 0 {
                    -0.5 * self.sites[i].t * if m_mask & bit != 0 { q[i] } else { p[i] }
                } else {
                    f[i]
                };
            }
            total += term;
        }
        Ok(total)
    }

    /// Trace of the multi-site correction against a product state, from
    /// the matrix.
    pub fn chi_trace_matrix(&self, xs: &[BlochVector]) -> Result<f64> {
        Ok(self.chi.trace_product(&self.product_tilde(xs)?).re)
    }

    /// Two-site correction trace in terms of the pair ratios.
    pub fn chi_trace_two_site(&self, xs: &[BlochVector]) -> Result<f64> {
        if self.n() != 2 {
            return Err(Error::InvalidArgument(format!(
                "pair closed form needs exactly 2 sites, got {}",
                self.n()
            )));
        }
        self.check_sites(xs)?;
        let (gp, gm) = self.gammas;
        let mut p = [0.0; 2];
        let mut q = [0.0; 2];
        for i in 0..2 {
            let c = xs[i].components();
            p[i] = vec3::dot(&self.sites[i].c0, &c);
            q[i] = vec3::dot(&self.sites[i].c1, &c);
        }
        let t12 = self.sites[0].t * self.sites[1].t;
        Ok(t12 / 8.0 * ((2.0 - gp - gm) * p[0] * p[1] + (gp - gm) * q[0] * q[1]))
    }
}

/// Summary of a plane's minimum over the pure stabilizer states.
#[derive(Clone, Copy, Debug)]
pub struct ValidationReport {
    /// Smallest trace against any enumerated pure stabilizer state.
    pub min_value: f64,
    /// Label of a state attaining the minimum.
    pub argmin_label: usize,
    /// Whether the plane keeps the whole polytope on one side.
    pub valid: bool,
}

/// Minimizes a candidate plane (computational basis, dimension `2^n`)
/// over all pure stabilizer states.
pub fn validate_hyperplane(phi: &CMat, n: u32) -> Result<ValidationReport> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "site count {n} not in 1..=3"
        )));
    }
    if phi.dim() != 1 << n {
        return Err(Error::DimensionMismatch {
            left: phi.dim(),
            right: 1 << n,
        });
    }
    let dev = phi.hermiticity_deviation();
    if dev > tol::HERMITIAN_INPUT {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    let mut min_value = f64::INFINITY;
    let mut argmin_label = 0;
    for stab in enumerate_pure_stabilizers(n)? {
        let v = phi.trace_product(stab.projector().mat()).re;
        if v < min_value {
            min_value = v;
            argmin_label = stab.label();
        }
    }
    Ok(ValidationReport {
        min_value,
        argmin_label,
        valid: min_value >= tol::WITNESS_VALID_MIN,
    })
}

/// Verdict of a violation search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A product stabilizer state pushes the joint plane negative.
    Violation,
    /// No qualifying product state was found.
    NoneFound,
}

/// Outcome of [`find_violation`].
#[derive(Clone, Debug)]
pub struct WitnessReport {
    /// Search verdict.
    pub verdict: Verdict,
    /// Most negative trace encountered.
    pub trace_value: f64,
    /// Per-site Bloch vectors of the state attaining `trace_value`.
    pub site_blochs: Vec<[f64; 3]>,
    /// Product state attaining `trace_value`.
    pub state: DensityMatrix,
    /// Signed displacement applied to the facet site when the targeted
    /// construction ran.
    pub beta1: Option<f64>,
    /// Joint-minus-sum magic gap, filled by [`find_violation_confirmed`].
    pub optimizer_gap: Option<f64>,
}

/// Largest step from `x` along `dir` that stays on the closed facet.
fn max_facet_step(x: &BlochVector, facet: &FacetId, dir: &[f64; 3]) -> f64 {
    let comps = x.components();
    let signs = facet.signs();
    let mut beta = f64::INFINITY;
    for k in 0..3 {
        let slope = signs[k] as f64 * dir[k];
        if slope < -1e-15 {
            beta = beta.min(signs[k] as f64 * comps[k] / -slope);
        }
    }
    if beta.is_finite() {
        beta
    } else {
        0.0
    }
}

/// Point of the plane's tangent face maximizing the transverse channel.
///
/// The channel is linear over the face, so its extreme points (the
/// octahedron vertices the plane touches) exhaust the maxima.
fn tangent_extreme(phi: &SupportingHyperplane, c0: &[f64; 3]) -> BlochVector {
    let mut best_score = f64::NEG_INFINITY;
    let mut best = VertexId::all()[0];
    let mut fallback = (f64::INFINITY, best);
    for v in VertexId::all() {
        let value = phi.value_at(&v.bloch());
        if value < fallback.0 {
            fallback = (value, v);
        }
        if value.abs() <= 1e-9 {
            let score = vec3::dot(c0, &v.bloch().components()).abs();
            if score > best_score {
                best_score = score;
                best = v;
            }
        }
    }
    if best_score.is_finite() {
        best.bloch()
    } else {
        fallback.1.bloch()
    }
}

fn product_density(xs: &[BlochVector]) -> DensityMatrix {
    let mut dm = density_from_bloch(&xs[0]);
    for x in &xs[1..] {
        dm = dm.tensor(&density_from_bloch(x));
    }
    dm
}

/// Searches for a product stabilizer state with a negative joint-plane
/// trace.
///
/// When at least two components are non-commuting and one of them sits in
/// a facet interior, the targeted construction displaces the facet state
/// along its in-facet channels (largest step either way) and moves one
/// other non-commuting site to the tangent-face point with the strongest
/// transverse channel, leaving remaining sites at their stabilizers. The
/// verdict is a violation when the best trace falls below the threshold.
/// Otherwise an exploratory scan over products of octahedron vertices
/// (exhaustive for product states, by multilinearity) reports its best
/// value under a none-found verdict.
pub fn find_violation(components: &[RayComponent]) -> Result<WitnessReport> {
    let hp = reconstruct_hyperplane(components)?;
    let n = components.len();
    let c_vecs = hp.c_vectors();
    let mut facet_sites: Vec<(usize, FacetId)> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for (i, comp) in components.iter().enumerate() {
        if comp.commuting() {
            continue;
        }
        active.push(i);
        if let BoundaryClass::Facet { id, barycentric } = classify_boundary(comp.sigma())? {
            if barycentric.iter().all(|&w| w > 1e-9) {
                facet_sites.push((i, id));
            }
        }
    }

    let base: Vec<BlochVector> = components.iter().map(|c| *c.sigma()).collect();
    if active.len() >= 2 && !facet_sites.is_empty() {
        let mut best: Option<(f64, Vec<BlochVector>, f64)> = None;
        for &(a_idx, facet) in &facet_sites {
            let normal = facet.normal();
            let (c0, c1) = c_vecs[a_idx];
            let in_facet = vec3::sub(&c0, &vec3::scale(&normal, vec3::dot(&c0, &normal)));
            for u in [in_facet, c1] {
                let len = vec3::norm(&u);
                if len <= 1e-12 {
                    continue;
                }
                let unit = vec3::scale(&u, 1.0 / len);
                for sign in [1.0_f64, -1.0] {
                    let dir = vec3::scale(&unit, sign);
                    let beta = max_facet_step(components[a_idx].sigma(), &facet, &dir);
                    if beta <= 1e-12 {
                        continue;
                    }
                    let xa = BlochVector::new(vec3::add(
                        &components[a_idx].sigma().components(),
                        &vec3::scale(&dir, beta),
                    ))?;
                    for &b_idx in &active {
                        if b_idx == a_idx {
                            continue;
                        }
                        let xb = tangent_extreme(components[b_idx].phi(), &c_vecs[b_idx].0);
                        let mut xs = base.clone();
                        xs[a_idx] = xa;
                        xs[b_idx] = xb;
                        let v = hp.witness_trace(&xs)?;
                        if best.as_ref().is_none_or(|(bv, _, _)| v < *bv) {
                            best = Some((v, xs, sign * beta));
                        }
                    }
                }
            }
        }
        if let Some((value, xs, beta)) = best {
            let verdict = if value < tol::VIOLATION_TRACE {
                Verdict::Violation
            } else {
                Verdict::NoneFound
            };
            return Ok(WitnessReport {
                verdict,
                trace_value: value,
                site_blochs: xs.iter().map(|x| x.components()).collect(),
                state: product_density(&xs),
                beta1: Some(beta),
                optimizer_gap: None,
            });
        }
    }

    let verts = VertexId::all();
    let mut best_value = f64::INFINITY;
    let mut best_xs: Vec<BlochVector> = base.clone();
    for combo in 0..6usize.pow(n as u32) {
        let mut c = combo;
        let xs: Vec<BlochVector> = (0..n)
            .map(|_| {
                let v = verts[c % 6].bloch();
                c /= 6;
                v
            })
            .collect();
        let v = hp.witness_trace(&xs)?;
        if v < best_value {
            best_value = v;
            best_xs = xs;
        }
    }
    Ok(WitnessReport {
        verdict: Verdict::NoneFound,
        trace_value: best_value,
        site_blochs: best_xs.iter().map(|x| x.components()).collect(),
        state: product_density(&best_xs),
        beta1: None,
        optimizer_gap: None,
    })
}

/// Joint magic of the product ray state minus the sum of per-site closed
/// forms; negative values certify that magic is not additive here.
pub fn nonadditivity_gap(components: &[RayComponent], tol_gap: f64) -> Result<f64> {
    if components.is_empty() {
        return Err(Error::InvalidArgument("need at least one component".into()));
    }
    let mut joint = components[0].rho_density();
    for comp in &components[1..] {
        joint = joint.tensor(&comp.rho_density());
    }
    let joint_value = relative_entropy_of_magic(&joint, tol_gap)?.value;
    let mut sum = 0.0;
    for comp in components {
        sum += rel_entropy_closed_form(comp.sigma(), comp.phi(), comp.t())?;
    }
    Ok(joint_value - sum)
}

/// [`find_violation`] plus an optimizer run filling `optimizer_gap`.
pub fn find_violation_confirmed(
    components: &[RayComponent],
    tol_gap: f64,
) -> Result<WitnessReport> {
    let mut report = find_violation(components)?;
    report.optimizer_gap = Some(nonadditivity_gap(components, tol_gap)?);
    Ok(report)
}

/// Plane parameters scanned per axis by [`edge_edge_search`].
pub fn edge_parameter_grid(resolution: usize) -> Result<Vec<f64>> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution {resolution} must be at least 2"
        )));
    }
    let half = 1.0 / 2.0_f64.sqrt();
    Ok((0..resolution)
        .map(|k| (2.0 * k as f64 / (resolution - 1) as f64 - 1.0) * half)
        .collect())
}

/// Result of scanning plane pairs for a product of two edge rays.
#[derive(Clone, Debug)]
pub struct EdgeSearchReport {
    /// Plane parameters shared by both grid axes.
    pub grid: Vec<f64>,
    /// Minimum stabilizer trace per cell (first index: first component's
    /// parameter); `None` marks skipped near-commuting cells.
    pub values: Vec<Vec<Option<f64>>>,
    /// Largest cell minimum, i.e. the plane pair closest to validity.
    pub best_min_trace: f64,
    /// Grid indices attaining `best_min_trace`.
    pub best_cell: (usize, usize),
    /// Number of evaluated cells.
    pub cells_scanned: usize,
    /// Number of skipped cells.
    pub cells_skipped: usize,
    /// Whether every evaluated cell dips below the violation threshold,
    /// i.e. no plane pair in the scanned family supports the polytope.
    pub all_negative: bool,
}

struct EdgeScanInput {
    sigma: [BlochVector; 2],
    edges: [EdgeId; 2],
    fractions: [f64; 2],
    grid: Vec<f64>,
}

fn edge_scan_input(a: &RayComponent, b: &RayComponent, resolution: usize) -> Result<EdgeScanInput> {
    let grid = edge_parameter_grid(resolution)?;
    let mut edges = Vec::with_capacity(2);
    for comp in [a, b] {
        if comp.commuting() {
            return Err(Error::InvalidArgument(
                "edge scan needs non-commuting components".into(),
            ));
        }
        match classify_boundary(comp.sigma())? {
            BoundaryClass::Edge { id, .. } => edges.push(id),
            _ => {
                return Err(Error::InvalidArgument(
                    "edge scan components must sit on edge interiors".into(),
                ))
            }
        }
    }
    Ok(EdgeScanInput {
        sigma: [*a.sigma(), *b.sigma()],
        edges: [edges[0], edges[1]],
        fractions: [a.t() / a.t_max(), b.t() / b.t_max()],
        grid,
    })
}

/// One grid cell: rebuild both components on the given planes at the same
/// endpoint fractions, reconstruct, and minimize over stabilizer states.
fn edge_scan_cell(input: &EdgeScanInput, i: usize, j: usize) -> Result<Option<f64>> {
    let params = [input.grid[i], input.grid[j]];
    if params.iter().any(|c| c.abs() <= 1e-9) {
        return Ok(None);
    }
    let mut comps = Vec::with_capacity(2);
    for (k, &c) in params.iter().enumerate() {
        let phi = edge_hyperplane(&input.edges[k], c)?;
        let t = input.fractions[k] * t_max(&input.sigma[k], &phi)?;
        comps.push(RayComponent::new(input.sigma[k], phi, t)?);
    }
    let hp = reconstruct_hyperplane(&comps)?;
    Ok(Some(
        validate_hyperplane(&hp.phi_computational(), 2)?.min_value,
    ))
}

fn edge_scan_report(input: EdgeScanInput, flat: Vec<Option<f64>>) -> EdgeSearchReport {
    let res = input.grid.len();
    let mut values = Vec::with_capacity(res);
    let mut best_min_trace = f64::NEG_INFINITY;
    let mut best_cell = (0, 0);
    let mut cells_scanned = 0;
    let mut cells_skipped = 0;
    let mut all_negative = true;
    for i in 0..res {
        let mut row = Vec::with_capacity(res);
        for j in 0..res {
            let cell = flat[i * res + j];
            match cell {
                Some(v) => {
                    cells_scanned += 1;
                    if v >= tol::VIOLATION_TRACE {
                        all_negative = false;
                    }
                    if v > best_min_trace {
                        best_min_trace = v;
                        best_cell = (i, j);
                    }
                }
                None => cells_skipped += 1,
            }
            row.push(cell);
        }
        values.push(row);
    }
    EdgeSearchReport {
        grid: input.grid,
        values,
        best_min_trace,
        best_cell,
        cells_scanned,
        cells_skipped,
        all_negative: all_negative && cells_scanned > 0,
    }
}

/// Scans the plane-pair family of two edge rays, reporting the plane pair
/// whose stabilizer minimum comes closest to validity. Parallel when the
/// `parallel` feature is active.
#[cfg(feature = "parallel")]
pub fn edge_edge_search(
    a: &RayComponent,
    b: &RayComponent,
    resolution: usize,
) -> Result<EdgeSearchReport> {
    let input = edge_scan_input(a, b, resolution)?;
    let res = input.grid.len();
    let flat = (0..res * res)
        .into_par_iter()
        .map(|f| edge_scan_cell(&input, f / res, f % res))
        .collect::<Result<Vec<_>>>()?;
    Ok(edge_scan_report(input, flat))
}

/// Scans the plane-pair family of two edge rays, reporting the plane pair
/// whose stabilizer minimum comes closest to validity. Parallel when the
/// `parallel` feature is active.
#[cfg(not(feature = "parallel"))]
pub fn edge_edge_search(
    a: &RayComponent,
    b: &RayComponent,
    resolution: usize,
) -> Result<EdgeSearchReport> {
    edge_edge_search_seq(a, b, resolution)
}

/// Sequential variant of [`edge_edge_search`].
pub fn edge_edge_search_seq(
    a: &RayComponent,
    b: &RayComponent,
    resolution: usize,
) -> Result<EdgeSearchReport> {
    let input = edge_scan_input(a, b, resolution)?;
    let res = input.grid.len();
    let flat = (0..res * res)
        .map(|f| edge_scan_cell(&input, f / res, f % res))
        .collect::<Result<Vec<_>>>()?;
    Ok(edge_scan_report(input, flat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::facet_hyperplane;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn facet_component(x: [f64; 3], fraction: f64) -> RayComponent {
        let sigma = BlochVector::new(x).unwrap();
        let facet = match classify_boundary(&sigma).unwrap() {
            BoundaryClass::Facet { id, .. } => id,
            other => panic!("expected facet point, got {other:?}"),
        };
        let phi = facet_hyperplane(&facet);
        let tm = t_max(&sigma, &phi).unwrap();
        RayComponent::new(sigma, phi, fraction * tm).unwrap()
    }

    fn edge_component(edge: &str, weight: f64, c: f64, fraction: f64) -> RayComponent {
        let e: EdgeId = edge.parse().unwrap();
        let sigma = e.point(weight).unwrap();
        let phi = edge_hyperplane(&e, c).unwrap();
        let tm = t_max(&sigma, &phi).unwrap();
        RayComponent::new(sigma, phi, fraction * tm).unwrap()
    }

    fn violation_pair() -> Vec<RayComponent> {
        vec![
            facet_component([0.5, 0.3, 0.2], 0.5),
            facet_component([0.2, 0.5, 0.3], 0.5),
        ]
    }

    fn random_product(rng: &mut ChaCha8Rng, n: usize) -> Vec<BlochVector> {
        (0..n)
            .map(|_| {
                BlochVector::new([
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                ])
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn gamma_values_match_frozen_oracles() {
        let r = 1.0 / 3.0_f64.sqrt();
        let (gp, gm) = gamma_pm(r, r).unwrap();
        assert!(approx(gp, 0.876793814802700, 1e-12), "got {gp}");
        assert!(approx(gm, 1.153151090514408, 1e-12), "got {gm}");
        let (gp2, gm2) = gamma_pm(0.5, 0.7).unwrap();
        assert!(approx(gp2, 0.867265386761553, 1e-12), "got {gp2}");
        assert!(approx(gm2, 1.168082265818547, 1e-12), "got {gm2}");
        for (a, b) in [(gp, gm), (gp2, gm2)] {
            assert!((a - b).abs() > 1e-6);
        }
    }

    #[test]
    fn gamma_is_continuous_across_the_equal_radius_switch() {
        // Just above the switch, the direct quotient must match the series
        // continuation evaluated by hand.
        let (r1, r2) = (0.5_f64, 0.5_f64 + 2e-7);
        let (l1, l2) = (
            ((1.0 + r1) / (1.0 - r1)).ln(),
            ((1.0 + r2) / (1.0 - r2)).ln(),
        );
        let u = 2.0 * (r1 - r2) / ((1.0 - r1) * (1.0 + r2));
        let series_slope =
            2.0 / ((1.0 - r1) * (1.0 + r2)) * (1.0 - u / 2.0 + u * u / 3.0 - u * u * u / 4.0);
        let series = 2.0 * r1 * r2 * series_slope / (l1 * l2);
        let (_, direct) = gamma_pm(r1, r2).unwrap();
        assert!(approx(direct, series, 1e-12), "{direct} vs {series}");

        let (_, below) = gamma_pm(0.5, 0.5 + 0.9e-7).unwrap();
        let (_, above) = gamma_pm(0.5, 0.5 + 1.1e-7).unwrap();
        let (_, equal) = gamma_pm(0.5, 0.5).unwrap();
        assert!(approx(below, above, 1e-6));
        assert!(approx(below, equal, 1e-6));
        assert!(approx(
            equal,
            4.0 / 3.0 / (3.0_f64.ln() * 3.0_f64.ln()),
            1e-12
        ));
    }

    #[test]
    fn gamma_rejects_degenerate_radii() {
        assert!(gamma_pm(0.0, 0.5).is_err());
        assert!(gamma_pm(0.5, 1.0).is_err());
    }

    #[test]
    fn classify_commuting_examples() {
        let centroid = facet_component([1.0 / 3.0; 3], 0.5);
        assert!(centroid.commuting());
        assert!(classify_commuting(&centroid.rho_density(), &centroid.sigma_density()).unwrap());

        let tilted = facet_component([0.5, 0.3, 0.2], 0.5);
        assert!(!tilted.commuting());
        assert!(!classify_commuting(&tilted.rho_density(), &tilted.sigma_density()).unwrap());

        let symmetric_edge = edge_component("s1-s3", 0.5, 0.0, 0.5);
        assert!(symmetric_edge.commuting());

        let tilted_edge = edge_component("s1-s3", 0.5, 0.3, 0.5);
        assert!(!tilted_edge.commuting());

        let a = density_from_bloch(&BlochVector::new([0.3, 0.0, 0.0]).unwrap());
        let b = DensityMatrix::new(CMat::identity(4).scale(C64::new(0.25, 0.0))).unwrap();
        assert!(matches!(
            classify_commuting(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ray_component_validation() {
        let facet = FacetId::new([1, 1, 1]).unwrap();
        let phi = facet_hyperplane(&facet);
        let vertex = BlochVector::new([1.0, 0.0, 0.0]).unwrap();
        assert!(RayComponent::new(vertex, phi, 0.1).is_err());

        let sigma = BlochVector::new([0.5, 0.3, 0.2]).unwrap();
        let tm = t_max(&sigma, &phi).unwrap();
        assert!(RayComponent::new(sigma, phi, -0.1).is_err());
        assert!(RayComponent::new(sigma, phi, tm * 1.01).is_err());
        assert!(RayComponent::new(sigma, phi, f64::NAN).is_err());

        let other = facet_hyperplane(&FacetId::new([-1, 1, 1]).unwrap());
        assert!(RayComponent::new(sigma, other, 0.1).is_err());

        let endpoint = RayComponent::new(sigma, phi, tm).unwrap();
        assert!(approx(endpoint.rho_bloch().r(), 1.0, 1e-9));
    }

    #[test]
    fn reconstruct_splits_consistently() {
        let comps = violation_pair();
        let hp = reconstruct_hyperplane(&comps).unwrap();
        assert!(approx(hp.scale(), 1.0, 1e-9), "scale {}", hp.scale());
        let sum = hp.phi_tilde() + hp.chi();
        assert!(sum.max_abs_diff(hp.phi()) < 1e-15);

        // Correction entries vanish unless both sites flip.
        let delta = hp.delta();
        for k in 0..4 {
            for l in 0..4 {
                let flips = (k ^ l == 3) as usize;
                if flips == 0 {
                    assert!(delta[(k, l)].norm() < 1e-15, "({k},{l})");
                } else {
                    assert!(delta[(k, l)].norm() > 1e-3, "({k},{l})");
                }
            }
        }

        let (gp, gm) = hp.gammas();
        let a00 = hp.a_m()[&(0b11, 0b00)];
        let a11 = hp.a_m()[&(0b11, 0b11)];
        assert!(approx(a00, 1.0 - (gp + gm) / 2.0, 1e-12));
        assert!(approx(a11, (gm - gp) / 2.0, 1e-12));
    }

    #[test]
    fn odd_sign_patterns_vanish() {
        let comps = violation_pair();
        let hp = reconstruct_hyperplane(&comps).unwrap();
        assert_eq!(hp.a_m()[&(0b11, 0b01)], 0.0);
        assert_eq!(hp.a_m()[&(0b11, 0b10)], 0.0);

        let triple = vec![
            facet_component([0.5, 0.3, 0.2], 0.5),
            facet_component([0.2, 0.5, 0.3], 0.5),
            facet_component([0.25, 0.35, 0.4], 0.5),
        ];
        let hp3 = reconstruct_hyperplane(&triple).unwrap();
        for (&(_, m), &a) in hp3.a_m() {
            if m.count_ones() % 2 == 1 {
                assert_eq!(a, 0.0, "pattern {m:#05b}");
            }
        }
    }

    #[test]
    fn collinear_pair_has_no_correction() {
        let comps = vec![
            facet_component([1.0 / 3.0; 3], 0.5),
            facet_component([1.0 / 3.0; 3], 0.5),
        ];
        let hp = reconstruct_hyperplane(&comps).unwrap();
        let zero = CMat::zeros(4);
        assert!(hp.chi().max_abs_diff(&zero) < 1e-14);
        for (c0, c1) in hp.c_vectors() {
            assert!(vec3::norm(&c0) < 1e-14);
            assert!(vec3::norm(&c1) < 1e-14);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let xs = random_product(&mut rng, 2);
            assert!(hp.chi_trace(&xs).unwrap().abs() < 1e-14);
        }
        let report = validate_hyperplane(&hp.phi_computational(), 2).unwrap();
        assert!(report.valid);
        assert!(report.min_value.abs() < 1e-10);
    }

    #[test]
    fn chi_trace_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pair = reconstruct_hyperplane(&violation_pair()).unwrap();
        let triple = reconstruct_hyperplane(&[
            facet_component([0.5, 0.3, 0.2], 0.5),
            facet_component([0.2, 0.5, 0.3], 0.7),
            edge_component("s1-s3", 0.4, 0.3, 0.5),
        ])
        .unwrap();
        for (hp, n) in [(&pair, 2), (&triple, 3)] {
            for _ in 0..40 {
                let xs = random_product(&mut rng, n);
                let analytic = hp.chi_trace(&xs).unwrap();
                let matrix = hp.chi_trace_matrix(&xs).unwrap();
                assert!(approx(analytic, matrix, 1e-9), "{analytic} vs {matrix}");
                let split = hp.phi_tilde_trace(&xs).unwrap() + analytic;
                let total = hp.witness_trace(&xs).unwrap();
                assert!(approx(split, total, 1e-10), "{split} vs {total}");
            }
        }
    }

    #[test]
    fn two_site_closed_form_matches_the_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let hp = reconstruct_hyperplane(&violation_pair()).unwrap();
        for _ in 0..40 {
            let xs = random_product(&mut rng, 2);
            let closed = hp.chi_trace_two_site(&xs).unwrap();
            let matrix = hp.chi_trace_matrix(&xs).unwrap();
            assert!(approx(closed, matrix, 1e-10), "{closed} vs {matrix}");
        }
        assert!(hp
            .chi_trace_two_site(&random_product(&mut rng, 2)[..1])
            .is_err());
    }

    #[test]
    fn on_plane_products_reduce_to_the_correction() {
        let comps = violation_pair();
        let hp = reconstruct_hyperplane(&comps).unwrap();
        // Facet points are tangent states of facet planes.
        let xs = vec![
            BlochVector::new([0.6, 0.25, 0.15]).unwrap(),
            BlochVector::new([0.1, 0.3, 0.6]).unwrap(),
        ];
        assert!(hp.phi_tilde_trace(&xs).unwrap().abs() < 1e-12);
        let total = hp.witness_trace(&xs).unwrap();
        let chi = hp.chi_trace(&xs).unwrap();
        assert!(approx(total, chi, 1e-12));
    }

    #[test]
    fn violation_example_is_detected() {
        let report = find_violation(&violation_pair()).unwrap();
        assert_eq!(report.verdict, Verdict::Violation);
        assert!(report.trace_value < -1e-5, "trace {}", report.trace_value);
        assert!(report.trace_value > -1e-1);
        let beta = report.beta1.expect("targeted construction should run");
        assert!(beta.abs() > 1e-6);
        // The displaced site stays on its facet.
        let x1 = report.site_blochs[0];
        assert!(approx(x1[0].abs() + x1[1].abs() + x1[2].abs(), 1.0, 1e-12));
        assert_eq!(report.state.dim(), 4);
    }

    #[test]
    fn violation_is_confirmed_by_the_optimizer() {
        let comps = vec![
            facet_component([0.5, 0.3, 0.2], 1.0),
            facet_component([0.2, 0.5, 0.3], 1.0),
        ];
        let report = find_violation_confirmed(&comps, 1e-6).unwrap();
        assert_eq!(report.verdict, Verdict::Violation);
        let gap = report.optimizer_gap.unwrap();
        assert!(gap < -1e-4, "gap {gap}");
    }

    #[test]
    fn commuting_products_find_nothing() {
        let tt = vec![
            facet_component([1.0 / 3.0; 3], 0.5),
            facet_component([1.0 / 3.0; 3], 0.5),
        ];
        let report = find_violation(&tt).unwrap();
        assert_eq!(report.verdict, Verdict::NoneFound);
        assert!(report.beta1.is_none());
        assert!(report.trace_value > -1e-9, "trace {}", report.trace_value);

        let th = vec![
            facet_component([1.0 / 3.0; 3], 0.5),
            edge_component("s1-s3", 0.5, 0.0, 0.5),
        ];
        let report = find_violation(&th).unwrap();
        assert_eq!(report.verdict, Verdict::NoneFound);
        assert!(report.trace_value > -1e-9);
    }

    #[test]
    fn validate_hyperplane_examples() {
        let facet = facet_hyperplane(&FacetId::new([1, 1, 1]).unwrap());
        let report = validate_hyperplane(&facet.matrix(), 1).unwrap();
        assert!(report.valid);
        assert!(report.min_value.abs() < 1e-12);

        let hp = reconstruct_hyperplane(&violation_pair()).unwrap();
        let joint = validate_hyperplane(&hp.phi_computational(), 2).unwrap();
        assert!(!joint.valid);
        assert!(joint.min_value < -1e-9);

        assert!(validate_hyperplane(&facet.matrix(), 2).is_err());
        assert!(validate_hyperplane(&CMat::identity(2), 0).is_err());
    }

    #[test]
    fn validation_verdict_is_scale_invariant() {
        let hp = reconstruct_hyperplane(&violation_pair()).unwrap();
        let phi = hp.phi_computational();
        let base = validate_hyperplane(&phi, 2).unwrap();
        let scaled = validate_hyperplane(&phi.scale(C64::new(2.5, 0.0)), 2).unwrap();
        assert_eq!(base.valid, scaled.valid);
        assert_eq!(base.argmin_label, scaled.argmin_label);
        assert!(approx(scaled.min_value, 2.5 * base.min_value, 1e-12));
    }

    #[test]
    fn edge_edge_scan_supports_the_conjecture() {
        let a = edge_component("s1-s3", 0.5, 0.3, 0.5);
        let b = edge_component("s1-s3", 0.5, 0.3, 0.5);
        let report = edge_edge_search(&a, &b, 5).unwrap();
        assert_eq!(report.grid.len(), 5);
        assert!(approx(report.grid[0], -1.0 / 2.0_f64.sqrt(), 1e-15));
        assert!(approx(report.grid[4], 1.0 / 2.0_f64.sqrt(), 1e-15));
        assert_eq!(report.cells_scanned, 16);
        assert_eq!(report.cells_skipped, 9);
        assert!(report.all_negative);
        assert!(
            report.best_min_trace < -1e-9,
            "best {}",
            report.best_min_trace
        );
        let (i, j) = report.best_cell;
        assert_eq!(report.values[i][j], Some(report.best_min_trace));
    }

    #[test]
    fn edge_edge_scan_rejects_bad_inputs() {
        let a = edge_component("s1-s3", 0.5, 0.3, 0.5);
        assert!(edge_edge_search(&a, &a, 1).is_err());
        let commuting = edge_component("s1-s3", 0.5, 0.0, 0.5);
        assert!(edge_edge_search(&commuting, &a, 5).is_err());
        let facet = facet_component([0.5, 0.3, 0.2], 0.5);
        assert!(edge_edge_search(&facet, &a, 5).is_err());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_edge_scans_agree() {
        let a = edge_component("s1-s3", 0.5, 0.3, 0.5);
        let b = edge_component("s1-s2", 0.4, -0.25, 0.6);
        let par = edge_edge_search(&a, &b, 4).unwrap();
        let seq = edge_edge_search_seq(&a, &b, 4).unwrap();
        assert_eq!(par.cells_scanned, seq.cells_scanned);
        assert_eq!(par.best_cell, seq.best_cell);
        for (ra, rb) in par.values.iter().zip(&seq.values) {
            for (va, vb) in ra.iter().zip(rb) {
                match (va, vb) {
                    (Some(x), Some(y)) => assert_eq!(x.to_bits(), y.to_bits()),
                    (None, None) => {}
                    other => panic!("mismatched cells {other:?}"),
                }
            }
        }
    }

    #[test]
    fn reconstruct_rejects_bad_inputs() {
        let single = vec![facet_component([0.5, 0.3, 0.2], 0.5)];
        assert!(reconstruct_hyperplane(&single).is_err());
        let four = vec![
            facet_component([0.5, 0.3, 0.2], 0.5),
            facet_component([0.2, 0.5, 0.3], 0.5),
            facet_component([1.0 / 3.0; 3], 0.5),
            facet_component([1.0 / 3.0; 3], 0.5),
        ];
        assert!(reconstruct_hyperplane(&four).is_err());
        let zero_t = vec![
            facet_component([0.5, 0.3, 0.2], 0.0),
            facet_component([0.2, 0.5, 0.3], 0.5),
        ];
        assert!(reconstruct_hyperplane(&zero_t).is_err());
    }
}
