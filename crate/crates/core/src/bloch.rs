//! Bloch-vector geometry of the single-qubit stabilizer octahedron.
//!
//! Vertices `s1..s6` are the Pauli eigenstates at `+e1, +e2, +e3, -e1,
//! -e2, -e3`. Facets are labeled by sign octants, edges by their vertex
//! pair. Supporting hyperplanes are stored in the Bloch parametrization
//! `phi = (phi0 I + x_phi . sigma)/2` normalized to `Tr(phi^2) = 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qmat::{self, CMat, DensityMatrix, C64};
use crate::tol;

/// Small fixed-size real-vector helpers shared across the crate.
pub(crate) mod vec3 {
    pub fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    pub fn norm(a: &[f64; 3]) -> f64 {
        dot(a, a).sqrt()
    }

    pub fn one_norm(a: &[f64; 3]) -> f64 {
        a[0].abs() + a[1].abs() + a[2].abs()
    }

    pub fn add(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    pub fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    pub fn scale(a: &[f64; 3], s: f64) -> [f64; 3] {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    pub fn matvec(m: &[[f64; 3]; 3], x: &[f64; 3]) -> [f64; 3] {
        [dot(&m[0], x), dot(&m[1], x), dot(&m[2], x)]
    }
}

/// Bloch vector of a single-qubit state `(I + x . sigma)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    x: [f64; 3],
}

impl BlochVector {
    /// Validates `|x| <= 1` (within 1e-12) and finiteness.
    pub fn new(x: [f64; 3]) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "Bloch vector has a non-finite component".into(),
            ));
        }
        let r = vec3::norm(&x);
        if r > 1.0 + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "Bloch vector length {r:.12} exceeds 1"
            )));
        }
        Ok(BlochVector { x })
    }

    /// Cartesian components.
    pub fn components(&self) -> [f64; 3] {
        self.x
    }

    /// Euclidean length (purity radius).
    pub fn r(&self) -> f64 {
        vec3::norm(&self.x)
    }

    /// 1-norm, the octahedron membership functional.
    pub fn one_norm(&self) -> f64 {
        vec3::one_norm(&self.x)
    }
}

/// Density matrix `(I + x . sigma)/2` of a Bloch vector.
pub fn density_from_bloch(x: &BlochVector) -> DensityMatrix {
    let [a, b, c] = x.components();
    let half = 0.5;
    let m = CMat::from_rows(&[
        vec![
            C64::new(half * (1.0 + c), 0.0),
            C64::new(half * a, -half * b),
        ],
        vec![
            C64::new(half * a, half * b),
            C64::new(half * (1.0 - c), 0.0),
        ],
    ]);
    DensityMatrix::new_unchecked(m)
}

/// Bloch vector `x_i = Tr(rho sigma_i)` of a single-qubit state.
pub fn bloch_from_density(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 2,
        });
    }
    let m = rho.mat();
    let x = 2.0 * m[(1, 0)].re;
    let y = 2.0 * m[(1, 0)].im;
    let z = (m[(0, 0)] - m[(1, 1)]).re;
    BlochVector::new([x, y, z])
}

/// One of the six octahedron vertices `s1..s6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u8);

impl VertexId {
    /// Vertex from its 1-based index.
    pub fn new(index: u8) -> Result<Self> {
        if (1..=6).contains(&index) {
            Ok(VertexId(index))
        } else {
            Err(Error::InvalidArgument(format!(
                "vertex index {index} not in 1..=6"
            )))
        }
    }

    /// All six vertices in order `s1..s6`.
    pub fn all() -> [VertexId; 6] {
        [1, 2, 3, 4, 5, 6].map(VertexId)
    }

    /// 1-based index.
    pub fn index(&self) -> u8 {
        self.0
    }

    /// Coordinate axis of the vertex (0, 1, or 2).
    pub fn axis(&self) -> usize {
        ((self.0 - 1) % 3) as usize
    }

    /// Sign of the vertex along its axis.
    pub fn sign(&self) -> f64 {
        if self.0 <= 3 {
            1.0
        } else {
            -1.0
        }
    }

    /// Bloch vector of the vertex.
    pub fn bloch(&self) -> BlochVector {
        let mut x = [0.0; 3];
        x[self.axis()] = self.sign();
        BlochVector { x }
    }

    fn from_axis_sign(axis: usize, positive: bool) -> VertexId {
        VertexId(axis as u8 + if positive { 1 } else { 4 })
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl FromStr for VertexId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let idx = s
            .strip_prefix('s')
            .and_then(|t| t.parse::<u8>().ok())
            .ok_or_else(|| {
                Error::InvalidArgument(format!("bad vertex id {s:?}, expected s1..s6"))
            })?;
        VertexId::new(idx)
    }
}

/// One of the twelve octahedron edges, keyed by its vertex pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeId {
    a: VertexId,
    b: VertexId,
}

impl EdgeId {
    /// Edge between two vertices on different axes (stored in index order).
    pub fn new(a: VertexId, b: VertexId) -> Result<Self> {
        if a.axis() == b.axis() {
            return Err(Error::InvalidArgument(format!(
                "{a} and {b} do not span an edge"
            )));
        }
        Ok(if a.index() <= b.index() {
            EdgeId { a, b }
        } else {
            EdgeId { a: b, b: a }
        })
    }

    /// All twelve edges in lexicographic vertex order.
    pub fn all() -> Vec<EdgeId> {
        let mut edges = Vec::with_capacity(12);
        for i in 1..=6u8 {
            for j in (i + 1)..=6 {
                if let Ok(e) = EdgeId::new(VertexId(i), VertexId(j)) {
                    edges.push(e);
                }
            }
        }
        edges
    }

    /// Endpoint vertices in canonical order.
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.a, self.b)
    }

    /// The coordinate axis used by neither endpoint.
    pub fn free_axis(&self) -> usize {
        3 - self.a.axis() - self.b.axis()
    }

    /// Convex combination `w * a + (1 - w) * b` of the endpoints.
    pub fn point(&self, weight_a: f64) -> Result<BlochVector> {
        if !(0.0..=1.0).contains(&weight_a) {
            return Err(Error::InvalidArgument(format!(
                "edge weight {weight_a} not in [0, 1]"
            )));
        }
        let pa = self.a.bloch().components();
        let pb = self.b.bloch().components();
        BlochVector::new(vec3::add(
            &vec3::scale(&pa, weight_a),
            &vec3::scale(&pb, 1.0 - weight_a),
        ))
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

impl FromStr for EdgeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once('-').ok_or_else(|| {
            Error::InvalidArgument(format!("bad edge id {s:?}, expected like s1-s3"))
        })?;
        EdgeId::new(a.parse()?, b.parse()?)
    }
}

/// One of the eight octahedron facets, keyed by its sign octant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FacetId {
    signs: [i8; 3],
}

impl FacetId {
    /// Facet from per-axis signs, each +1 or -1.
    pub fn new(signs: [i8; 3]) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!(
                "facet signs {signs:?} must be +-1"
            )));
        }
        Ok(FacetId { signs })
    }

    /// All eight facets in binary sign order (+++ first).
    pub fn all() -> [FacetId; 8] {
        let mut out = [FacetId { signs: [1; 3] }; 8];
        for (i, f) in out.iter_mut().enumerate() {
            f.signs = [0, 1, 2].map(|k| if i >> (2 - k) & 1 == 0 { 1 } else { -1 });
        }
        out
    }

    /// Per-axis signs.
    pub fn signs(&self) -> [i8; 3] {
        self.signs
    }

    /// Unit outward normal of the facet plane.
    pub fn normal(&self) -> [f64; 3] {
        let s = 1.0 / 3.0_f64.sqrt();
        self.signs.map(|v| v as f64 * s)
    }

    /// The three vertices spanning the facet, in axis order.
    pub fn vertices(&self) -> [VertexId; 3] {
        [0, 1, 2].map(|axis| VertexId::from_axis_sign(axis, self.signs[axis] > 0))
    }

    /// Facet centroid.
    pub fn centroid(&self) -> BlochVector {
        BlochVector {
            x: self.signs.map(|v| v as f64 / 3.0),
        }
    }

    /// Barycentric combination of the facet vertices.
    pub fn point(&self, barycentric: [f64; 3]) -> Result<BlochVector> {
        let sum: f64 = barycentric.iter().sum();
        if barycentric.iter().any(|&w| w < 0.0) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "barycentric coordinates {barycentric:?} must be nonnegative and sum to 1"
            )));
        }
        BlochVector::new([0, 1, 2].map(|k| self.signs[k] as f64 * barycentric[k]))
    }
}

impl fmt::Display for FacetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.signs {
            write!(f, "{}", if s > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

impl FromStr for FacetId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 3 || chars.iter().any(|&c| c != '+' && c != '-') {
            return Err(Error::InvalidArgument(format!(
                "bad facet id {s:?}, expected like ++-"
            )));
        }
        FacetId::new([0, 1, 2].map(|i| if chars[i] == '+' { 1 } else { -1 }))
    }
}

/// Location of a point on the octahedron boundary.
#[derive(Clone, Copy, Debug)]
pub enum BoundaryClass {
    /// Interior of a facet, with barycentric weights over its vertices.
    Facet { id: FacetId, barycentric: [f64; 3] },
    /// Interior of an edge, with convex weights over its two endpoints.
    Edge { id: EdgeId, weights: [f64; 2] },
    /// A vertex.
    Vertex { id: VertexId },
}

/// Classifies a boundary point as facet-, edge-, or vertex-supported.
///
/// Components within the boundary tolerance of zero are treated as exactly
/// zero, so near-edge and near-vertex points resolve to the
/// lower-dimensional face.
pub fn classify_boundary(x: &BlochVector) -> Result<BoundaryClass> {
    let s = x.one_norm();
    if (s - 1.0).abs() > tol::OCTAHEDRON_BOUNDARY {
        return Err(Error::InvalidArgument(format!(
            "point with 1-norm {s:.12} is not on the octahedron boundary"
        )));
    }
    let comps = x.components();
    let live: Vec<usize> = (0..3)
        .filter(|&k| comps[k].abs() > tol::OCTAHEDRON_BOUNDARY)
        .collect();
    match live.len() {
        1 => {
            let k = live[0];
            Ok(BoundaryClass::Vertex {
                id: VertexId::from_axis_sign(k, comps[k] > 0.0),
            })
        }
        2 => {
            let mut va = VertexId::from_axis_sign(live[0], comps[live[0]] > 0.0);
            let mut vb = VertexId::from_axis_sign(live[1], comps[live[1]] > 0.0);
            let mut wa = comps[live[0]].abs();
            let mut wb = comps[live[1]].abs();
            if va.index() > vb.index() {
                std::mem::swap(&mut va, &mut vb);
                std::mem::swap(&mut wa, &mut wb);
            }
            let total = wa + wb;
            Ok(BoundaryClass::Edge {
                id: EdgeId::new(va, vb)?,
                weights: [wa / total, wb / total],
            })
        }
        3 => {
            let id = FacetId::new(comps.map(|v| if v > 0.0 { 1 } else { -1 }))?;
            let total: f64 = comps.iter().map(|v| v.abs()).sum();
            Ok(BoundaryClass::Facet {
                id,
                barycentric: comps.map(|v| v.abs() / total),
            })
        }
        _ => Err(Error::InvalidArgument(
            "zero Bloch vector is not on the boundary".into(),
        )),
    }
}

/// Supporting hyperplane `phi = (phi0 I + x_phi . sigma)/2` of the
/// octahedron, normalized to `Tr(phi^2) = 1`.
#[derive(Clone, Copy, Debug)]
pub struct SupportingHyperplane {
    phi0: f64,
    x_phi: [f64; 3],
}

impl SupportingHyperplane {
    /// Validates normalization `phi0^2 + |x_phi|^2 = 2` and nonnegativity
    /// over the six octahedron vertices.
    pub fn new(phi0: f64, x_phi: [f64; 3]) -> Result<Self> {
        let norm2 = phi0 * phi0 + vec3::dot(&x_phi, &x_phi);
        if (norm2 - 2.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "hyperplane normalization phi0^2 + |x_phi|^2 = {norm2:.12} is not 2"
            )));
        }
        let plane = SupportingHyperplane { phi0, x_phi };
        let min = plane.min_vertex_value();
        if min < tol::WITNESS_VALID_MIN {
            return Err(Error::InvalidArgument(format!(
                "hyperplane dips to {min:.3e} on an octahedron vertex"
            )));
        }
        Ok(plane)
    }

    /// Scalar part `phi0`.
    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    /// Vector part `x_phi`.
    pub fn x_phi(&self) -> [f64; 3] {
        self.x_phi
    }

    /// Length of the vector part.
    pub fn r_phi(&self) -> f64 {
        vec3::norm(&self.x_phi)
    }

    /// Witness value `Tr(phi rho_x) = (phi0 + x_phi . x)/2` at a state.
    pub fn value_at(&self, x: &BlochVector) -> f64 {
        0.5 * (self.phi0 + vec3::dot(&self.x_phi, &x.components()))
    }

    /// Smallest witness value over the six octahedron vertices.
    pub fn min_vertex_value(&self) -> f64 {
        let m = self.x_phi.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        0.5 * (self.phi0 - m)
    }

    /// Whether the plane touches the state (`Tr(phi rho_x) = 0` within
    /// tolerance).
    pub fn is_tangent_at(&self, x: &BlochVector) -> bool {
        self.value_at(x).abs() <= tol::TANGENCY
    }

    /// Matrix form `(phi0 I + x_phi . sigma)/2`.
    pub fn matrix(&self) -> CMat {
        let [a, b, c] = self.x_phi;
        let half = C64::new(0.5, 0.0);
        let mut m = qmat::pauli_x().scale(C64::new(a, 0.0));
        m = &m + &qmat::pauli_y().scale(C64::new(b, 0.0));
        m = &m + &qmat::pauli_z().scale(C64::new(c, 0.0));
        m = &m + &qmat::pauli_i().scale(C64::new(self.phi0, 0.0));
        m.scale(half)
    }
}

/// The unique normalized supporting hyperplane on a facet interior.
pub fn facet_hyperplane(facet: &FacetId) -> SupportingHyperplane {
    let inv = 1.0 / 2.0_f64.sqrt();
    let x_phi = facet.signs().map(|s| -(s as f64) * inv);
    SupportingHyperplane { phi0: inv, x_phi }
}

/// The one-parameter hyperplane family supporting an edge.
///
/// For edge s1-s3 the family is `x_phi = (-b, c, -b)` with
/// `b = sqrt((2 - c^2)/3)` and `phi0 = b`; other edges follow by mapping
/// the endpoint axes (with their signs) and the free axis. Admissible
/// parameters satisfy `c^2 <= 1/2`; the extremes coincide with the two
/// adjacent facet hyperplanes.
pub fn edge_hyperplane(edge: &EdgeId, c: f64) -> Result<SupportingHyperplane> {
    if c * c > 0.5 + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "edge parameter c = {c} outside |c| <= 1/sqrt(2)"
        )));
    }
    let b = ((2.0 - c * c) / 3.0).sqrt();
    let (va, vb) = edge.endpoints();
    let mut x_phi = [0.0; 3];
    x_phi[va.axis()] = -va.sign() * b;
    x_phi[vb.axis()] = -vb.sign() * b;
    x_phi[edge.free_axis()] = c;
    SupportingHyperplane::new(b, x_phi)
}

/// The 24 rotations of the Bloch sphere induced by single-qubit Clifford
/// gates: signed coordinate permutations with determinant +1.
pub fn clifford_rotations() -> Vec<[[f64; 3]; 3]> {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let perm_sign = |p: &[usize; 3]| -> f64 {
        let mut sign = 1.0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if p[i] > p[j] {
                    sign = -sign;
                }
            }
        }
        sign
    };
    let mut out = Vec::with_capacity(24);
    for p in &perms {
        for bits in 0..8u8 {
            let signs = [0, 1, 2].map(|k| if bits >> k & 1 == 0 { 1.0 } else { -1.0 });
            if perm_sign(p) * signs[0] * signs[1] * signs[2] > 0.0 {
                let mut m = [[0.0; 3]; 3];
                for r in 0..3 {
                    m[r][p[r]] = signs[r];
                }
                out.push(m);
            }
        }
    }
    out
}

/// Applies a rotation matrix to a Bloch vector.
pub fn rotate(rotation: &[[f64; 3]; 3], x: &BlochVector) -> BlochVector {
    BlochVector {
        x: vec3::matvec(rotation, &x.components()),
    }
}
