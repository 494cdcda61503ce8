//! Relative entropy of magic by convex minimization over the stabilizer
//! polytope.
//!
//! The distance `min_sigma S(rho || sigma)` over mixtures of pure
//! stabilizer states is computed by a Frank-Wolfe iteration with away
//! steps and a golden-section line search. A single-qubit fast path
//! searches the octahedron boundary geometrically. Batch and heatmap
//! helpers evaluate many independent minimizations, in parallel when the
//! `parallel` feature is enabled.

use crate::bloch::{vec3, BlochVector, EdgeId, FacetId};
use crate::error::{Error, Result};
use crate::family::divided_entry;
use crate::qmat::{hermitian_eig, von_neumann_entropy, CMat, DensityMatrix, C64};
use crate::stab::{enumerate_pure_stabilizers, octahedron_membership, Membership};
use crate::tol;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const MAX_ITERATIONS: usize = 200_000;
const REBUILD_PERIOD: usize = 64;
const LINE_SEARCH_STEPS: usize = 48;
const RANK_FLOOR: f64 = 1e-12;

/// Outcome of a polytope minimization.
#[derive(Clone, Debug)]
pub struct OptimResult {
    /// Minimized relative entropy in bits.
    pub value: f64,
    /// Minimizing mixed stabilizer state.
    pub sigma_star: DensityMatrix,
    /// Mixture weights over the pure stabilizer states, in label order.
    pub weights: Vec<f64>,
    /// Iterations used.
    pub iterations: usize,
    /// Final linearization gap (certified optimality bound, bits).
    pub gap: f64,
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
///
/// Returns the best evaluated point and value.
fn golden_min(mut lo: f64, mut hi: f64, steps: usize, h: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = h(x1);
    let mut f2 = h(x2);
    for _ in 0..steps {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = h(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = h(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Cross entropy `-Tr(rho log2 tau)` in bits; infinite when `tau` loses
/// rank on the support of `rho`. Used for the final reported value; the
/// iteration itself steers by gradients, whose precision scales with the
/// step direction instead of the absolute objective.
fn cross_entropy_bits(rho: &CMat, tau: &CMat) -> f64 {
    let sys = match hermitian_eig(tau) {
        Ok(s) => s,
        Err(_) => return f64::INFINITY,
    };
    let dim = tau.dim();
    let mut total = 0.0;
    for k in 0..dim {
        let mut overlap = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                overlap += (sys.basis[(r, k)].conj() * rho[(r, c)] * sys.basis[(c, k)]).re;
            }
        }
        let overlap = overlap.max(0.0);
        if sys.values[k] < RANK_FLOOR {
            if overlap > tol::SUPPORT_CUTOFF {
                return f64::INFINITY;
            }
        } else {
            total -= overlap * sys.values[k].log2();
        }
    }
    total
}

/// Gradient of `-Tr(rho log2 sigma)` with respect to `sigma`, as a
/// Hermitian matrix, given `sigma`'s eigensystem.
fn gradient_bits(rho: &CMat, values: &[f64], basis: &CMat) -> CMat {
    let dim = rho.dim();
    let rho_tilde = &(&basis.adjoint() * rho) * basis;
    let ln2 = std::f64::consts::LN_2;
    let scaled = CMat::from_fn(dim, |k, l| {
        rho_tilde[(k, l)] * (-1.0 / (ln2 * divided_entry(values[k], values[l])))
    });
    &(basis * &scaled) * &basis.adjoint()
}

/// Relative entropy of magic: `min_sigma S(rho || sigma)` over the
/// stabilizer polytope, by Frank-Wolfe with away steps.
///
/// `tol` bounds the final linearization gap (bits) and must lie in
/// `[1e-10, 1e-3]`. The returned weights certify the minimizer.
pub fn relative_entropy_of_magic(rho: &DensityMatrix, tol_gap: f64) -> Result<OptimResult> {
    if !(1e-10..=1e-3).contains(&tol_gap) {
        return Err(Error::InvalidArgument(format!(
            "gap tolerance {tol_gap} outside [1e-10, 1e-3]"
        )));
    }
    let verts = enumerate_pure_stabilizers(rho.qubits())?;
    let nv = verts.len();
    let dim = rho.dim();
    let mut weights = vec![1.0 / nv as f64; nv];
    let mut sigma = rebuild(&weights, verts, dim);
    let entropy = von_neumann_entropy(rho)?;

    let mut iterations = 0usize;
    let mut converged: Option<f64> = None;
    // Set after a convergence candidate was re-checked on the exact
    // mixture, so the check is not repeated forever.
    let mut rebuilt_for_check = false;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let sys = hermitian_eig(&sigma)?;
        let grad = gradient_bits(rho.mat(), &sys.values, &sys.basis);
        let lambda_min = *sys.values.last().expect("nonempty spectrum");

        let mut best_vertex = 0;
        let mut best_score = f64::INFINITY;
        let mut away_vertex = None;
        let mut away_score = f64::NEG_INFINITY;
        for j in 0..nv {
            let s = grad.trace_product(verts[j].projector().mat()).re;
            if s < best_score {
                best_score = s;
                best_vertex = j;
            }
            if weights[j] > 1e-15 && s > away_score {
                away_score = s;
                away_vertex = Some(j);
            }
        }
        let at_sigma = grad.trace_product(&sigma).re;
        let gap = at_sigma - best_score;
        if gap <= tol_gap {
            if rebuilt_for_check {
                converged = Some(gap);
                break;
            }
            // Confirm on the exact mixture before accepting.
            normalize(&mut weights);
            sigma = rebuild(&weights, verts, dim);
            rebuilt_for_check = true;
            continue;
        }
        rebuilt_for_check = false;

        // Choose between the toward-vertex and away-from-vertex moves.
        let fw_descent = best_score - at_sigma;
        let (direction, gamma_cap, toward, pivot) = match away_vertex {
            Some(a) if (at_sigma - away_score) < fw_descent => {
                let d = &sigma - verts[a].projector().mat();
                let cap = weights[a] / (1.0 - weights[a]).max(1e-300);
                (d, cap, false, a)
            }
            _ => {
                let d = verts[best_vertex].projector().mat() - &sigma;
                (d, 1.0, true, best_vertex)
            }
        };

        // Keep the iterate's least eigenvalue above the rank floor.
        let gamma_hi = if toward {
            gamma_cap.min((1.0 - RANK_FLOOR / lambda_min).max(0.0))
        } else {
            let mut cap = gamma_cap;
            let mut guard = 0;
            while cap > 0.0 && guard < 60 {
                let probe = &sigma + &direction.scale(C64::new(cap, 0.0));
                match hermitian_eig(&probe) {
                    Ok(s) if *s.values.last().unwrap() >= RANK_FLOOR => break,
                    _ => {
                        cap *= 0.5;
                        guard += 1;
                    }
                }
            }
            cap
        };
        if gamma_hi <= 0.0 {
            continue;
        }

        // Line search on the sign of the directional derivative: the
        // derivative scales with the direction, so it stays resolvable
        // where absolute objective differences sink below rounding.
        let slope_at = |g: f64| -> f64 {
            let tau = &sigma + &direction.scale(C64::new(g, 0.0));
            match hermitian_eig(&tau) {
                Ok(s) => {
                    let gr = gradient_bits(rho.mat(), &s.values, &s.basis);
                    gr.trace_product(&direction).re
                }
                Err(_) => f64::INFINITY,
            }
        };
        if slope_at(0.0) >= 0.0 {
            continue;
        }
        let gamma = if slope_at(gamma_hi) <= 0.0 {
            gamma_hi
        } else {
            let mut lo = 0.0;
            let mut hi = gamma_hi;
            for _ in 0..LINE_SEARCH_STEPS {
                let mid = 0.5 * (lo + hi);
                if slope_at(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        if gamma <= 0.0 {
            continue;
        }

        if toward {
            for w in weights.iter_mut() {
                *w *= 1.0 - gamma;
            }
            weights[pivot] += gamma;
        } else {
            let dropped = (gamma_cap - gamma).abs() < 1e-15 * gamma_cap.max(1.0);
            for w in weights.iter_mut() {
                *w *= 1.0 + gamma;
            }
            weights[pivot] = if dropped {
                0.0
            } else {
                (weights[pivot] - gamma).max(0.0)
            };
        }
        if iterations.is_multiple_of(REBUILD_PERIOD) {
            normalize(&mut weights);
            sigma = rebuild(&weights, verts, dim);
        } else {
            sigma = &sigma + &direction.scale(C64::new(gamma, 0.0));
        }
    }

    let final_gap = match converged {
        Some(g) => g,
        None => {
            return Err(Error::NoConvergence(format!(
                "gap above tolerance {tol_gap:.3e} after {iterations} iterations"
            )))
        }
    };

    normalize(&mut weights);
    let sigma = rebuild(&weights, verts, dim);
    let value = cross_entropy_bits(rho.mat(), &sigma) - entropy;
    let sigma_star = DensityMatrix::new(sigma)?;
    Ok(OptimResult {
        value,
        sigma_star,
        weights,
        iterations,
        gap: final_gap,
    })
}

fn normalize(weights: &mut [f64]) {
    let sum: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w = (*w / sum).max(0.0);
    }
    let sum: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= sum;
    }
}

fn rebuild(weights: &[f64], verts: &[crate::stab::PureStabilizer], dim: usize) -> CMat {
    let mut out = CMat::zeros(dim);
    for (j, &w) in weights.iter().enumerate() {
        if w > 1e-16 {
            out = &out + &verts[j].projector().mat().scale(C64::new(w, 0.0));
        }
    }
    out
}

/// Batch of independent minimizations, parallel when the `parallel`
/// feature is active.
#[cfg(feature = "parallel")]
pub fn relative_entropy_of_magic_batch(
    rhos: &[DensityMatrix],
    tol_gap: f64,
) -> Result<Vec<OptimResult>> {
    rhos.par_iter()
        .map(|r| relative_entropy_of_magic(r, tol_gap))
        .collect()
}

/// Batch of independent minimizations, parallel when the `parallel`
/// feature is active.
#[cfg(not(feature = "parallel"))]
pub fn relative_entropy_of_magic_batch(
    rhos: &[DensityMatrix],
    tol_gap: f64,
) -> Result<Vec<OptimResult>> {
    relative_entropy_of_magic_batch_seq(rhos, tol_gap)
}

/// Sequential batch of independent minimizations.
pub fn relative_entropy_of_magic_batch_seq(
    rhos: &[DensityMatrix],
    tol_gap: f64,
) -> Result<Vec<OptimResult>> {
    rhos.iter()
        .map(|r| relative_entropy_of_magic(r, tol_gap))
        .collect()
}

/// Entropy of a single-qubit state from its Bloch length, in bits.
fn bloch_entropy_bits(r: f64) -> f64 {
    let mut h = 0.0;
    for p in [(1.0 + r) / 2.0, (1.0 - r) / 2.0] {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// `S(rho || sigma)` in bits for single-qubit states given as Bloch
/// vectors.
fn bloch_rel_entropy_bits(x_rho: &[f64; 3], x_sigma: &[f64; 3]) -> f64 {
    let r_rho = vec3::norm(x_rho);
    let r_sigma = vec3::norm(x_sigma);
    let q_plus = ((1.0 + r_sigma) / 2.0).max(1e-300);
    let q_minus = ((1.0 - r_sigma) / 2.0).max(1e-300);
    let align = if r_sigma > 1e-15 {
        vec3::dot(x_rho, x_sigma) / r_sigma
    } else {
        0.0
    };
    let cross =
        0.5 * (q_plus.log2() + q_minus.log2()) + 0.5 * align * (q_plus.log2() - q_minus.log2());
    -bloch_entropy_bits(r_rho) - cross
}

/// Closest stabilizer state of a single-qubit state: exact geometric
/// search over the octahedron boundary.
///
/// Returns the relative entropy of magic (bits) and the minimizing Bloch
/// vector. States inside the octahedron return distance zero and
/// themselves.
pub fn closest_stabilizer_1q(x_rho: &BlochVector) -> Result<(f64, BlochVector)> {
    if octahedron_membership(x_rho) != Membership::Outside {
        return Ok((0.0, *x_rho));
    }
    let x = x_rho.components();
    let mut best_value = f64::INFINITY;
    let mut best_point = [0.0; 3];
    let mut consider = |p: [f64; 3]| {
        let v = bloch_rel_entropy_bits(&x, &p);
        if v < best_value {
            best_value = v;
            best_point = p;
        }
    };

    // Facet interiors: the optimum lies on the line from the facet
    // centroid through the in-plane projection of x_rho.
    for facet in FacetId::all() {
        let n = facet.signs().map(f64::from);
        let centroid = vec3::scale(&n, 1.0 / 3.0);
        let offset = (vec3::dot(&n, &x) - 1.0) / 3.0;
        let projected = vec3::sub(&x, &vec3::scale(&n, offset));
        let dirv = vec3::sub(&projected, &centroid);
        if vec3::norm(&dirv) < 1e-14 {
            consider(centroid);
            continue;
        }
        let mut s_cap = f64::INFINITY;
        for k in 0..3 {
            let slope = n[k] * dirv[k];
            if slope < -1e-300 {
                s_cap = s_cap.min((1.0 / 3.0) / -slope);
            }
        }
        let line = |s: f64| vec3::add(&centroid, &vec3::scale(&dirv, s));
        let (s_best, _) = golden_min(0.0, s_cap.min(1e6), 72, |s| {
            bloch_rel_entropy_bits(&x, &line(s))
        });
        consider(line(s_best));
    }

    // Edges, including their endpoints.
    for edge in EdgeId::all() {
        let (a, b) = edge.endpoints();
        let pa = a.bloch().components();
        let pb = b.bloch().components();
        let seg = |w: f64| vec3::add(&vec3::scale(&pa, w), &vec3::scale(&pb, 1.0 - w));
        let (w_best, _) = golden_min(0.0, 1.0, 72, |w| bloch_rel_entropy_bits(&x, &seg(w)));
        consider(seg(w_best));
        consider(pa);
        consider(pb);
    }

    Ok((best_value, BlochVector::new(best_point)?))
}

/// One evaluated point of the facet heatmap.
#[derive(Clone, Debug)]
pub struct HeatmapSample {
    /// Integer grid coordinates, summing to `resolution - 1`.
    pub index: [usize; 3],
    /// Unit Bloch vector of the sampled pure state.
    pub direction: [f64; 3],
    /// Relative entropy of magic in bits.
    pub value: f64,
    /// Bloch vector of the closest stabilizer state.
    pub closest: [f64; 3],
}

fn heatmap_indices(resolution: usize) -> Result<Vec<[usize; 3]>> {
    if resolution < 8 {
        return Err(Error::InvalidArgument(format!(
            "heatmap resolution {resolution} below the minimum of 8"
        )));
    }
    let m = resolution - 1;
    let mut idx = Vec::new();
    for i in 0..=m {
        for j in 0..=(m - i) {
            idx.push([i, j, m - i - j]);
        }
    }
    Ok(idx)
}

fn heatmap_eval(index: [usize; 3]) -> Result<HeatmapSample> {
    let raw = index.map(|v| v as f64);
    let direction = vec3::scale(&raw, 1.0 / vec3::norm(&raw));
    let state = BlochVector::new(direction)?;
    let (value, closest) = closest_stabilizer_1q(&state)?;
    Ok(HeatmapSample {
        index,
        direction,
        value,
        closest: closest.components(),
    })
}

/// Relative entropy of magic over a triangular grid of pure states in the
/// (+++) octant, vertices and boundary arcs included. Parallel when the
/// `parallel` feature is active.
#[cfg(feature = "parallel")]
pub fn facet_heatmap(resolution: usize) -> Result<Vec<HeatmapSample>> {
    heatmap_indices(resolution)?
        .into_par_iter()
        .map(heatmap_eval)
        .collect()
}

/// Relative entropy of magic over a triangular grid of pure states in the
/// (+++) octant, vertices and boundary arcs included. Parallel when the
/// `parallel` feature is active.
#[cfg(not(feature = "parallel"))]
pub fn facet_heatmap(resolution: usize) -> Result<Vec<HeatmapSample>> {
    facet_heatmap_seq(resolution)
}

/// Sequential variant of [`facet_heatmap`].
pub fn facet_heatmap_seq(resolution: usize) -> Result<Vec<HeatmapSample>> {
    heatmap_indices(resolution)?
        .into_iter()
        .map(heatmap_eval)
        .collect()
}

/// Spread of the magic value around one circle of constant angle from the
/// symmetric (+++) direction.
#[derive(Clone, Copy, Debug)]
pub struct SymmetryRow {
    /// Polar angle of the circle, radians from the (+++) axis.
    pub polar_angle: f64,
    /// Number of circle points inside the octant.
    pub samples: usize,
    /// Max minus min of the magic value over those points.
    pub spread: f64,
}

/// Measures how close the magic value is to rotational symmetry about the
/// (+++) axis, circle by circle.
pub fn symmetry_spread(circles: usize, points_per_circle: usize) -> Result<Vec<SymmetryRow>> {
    if circles == 0 || points_per_circle < 3 {
        return Err(Error::InvalidArgument(
            "need at least 1 circle and 3 points per circle".into(),
        ));
    }
    let axis = vec3::scale(&[1.0, 1.0, 1.0], 1.0 / 3.0_f64.sqrt());
    let e1 = vec3::scale(&[1.0, -1.0, 0.0], 1.0 / 2.0_f64.sqrt());
    let e2 = vec3::scale(&[1.0, 1.0, -2.0], 1.0 / 6.0_f64.sqrt());
    let theta_max = (1.0 / 3.0_f64.sqrt()).acos();
    let mut rows = Vec::with_capacity(circles);
    for c in 1..=circles {
        let theta = theta_max * c as f64 / circles as f64;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut kept = 0usize;
        for p in 0..points_per_circle {
            let psi = std::f64::consts::TAU * p as f64 / points_per_circle as f64;
            let planar = vec3::add(&vec3::scale(&e1, psi.cos()), &vec3::scale(&e2, psi.sin()));
            let x = vec3::add(
                &vec3::scale(&axis, theta.cos()),
                &vec3::scale(&planar, theta.sin()),
            );
            if x.iter().any(|&v| v < -1e-12) {
                continue;
            }
            let (value, _) = closest_stabilizer_1q(&BlochVector::new(x.map(|v| v.max(0.0)))?)?;
            lo = lo.min(value);
            hi = hi.max(value);
            kept += 1;
        }
        if kept >= 2 {
            rows.push(SymmetryRow {
                polar_angle: theta,
                samples: kept,
                spread: hi - lo,
            });
        }
    }
    Ok(rows)
}
