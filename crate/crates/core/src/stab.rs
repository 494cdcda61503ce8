//! Pure stabilizer states for one to three qubits.
//!
//! States are generated as the closed orbit of `|0..0><0..0|` under
//! Hadamard, phase, and CNOT gates, deduplicated on a rounding grid, and
//! cached per qubit count. The single-qubit polytope (the octahedron) also
//! gets a direct membership test.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::OnceLock;

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::qmat::{CMat, DensityMatrix, C64};
use crate::tol;

/// A pure stabilizer state with its canonical orbit label.
#[derive(Clone, Debug)]
pub struct PureStabilizer {
    projector: DensityMatrix,
    label: usize,
}

impl PureStabilizer {
    /// Rank-1 projector onto the state.
    pub fn projector(&self) -> &DensityMatrix {
        &self.projector
    }

    /// Canonical label (position in the sorted orbit).
    pub fn label(&self) -> usize {
        self.label
    }
}

/// Position of a Bloch vector relative to the stabilizer octahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Classifies a Bloch vector against the octahedron `|x|_1 <= 1`.
pub fn octahedron_membership(x: &BlochVector) -> Membership {
    let s = x.one_norm();
    if (s - 1.0).abs() <= tol::OCTAHEDRON_BOUNDARY {
        Membership::Boundary
    } else if s < 1.0 {
        Membership::Interior
    } else {
        Membership::Outside
    }
}

/// All pure stabilizer states on `n` qubits (`n` in 1..=3), cached.
///
/// Labels and order are deterministic across runs: states are sorted by
/// their rounded projector entries.
pub fn enumerate_pure_stabilizers(n: u32) -> Result<&'static [PureStabilizer]> {
    static CACHE: [OnceLock<Vec<PureStabilizer>>; 3] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "qubit count {n} not in 1..=3"
        )));
    }
    Ok(CACHE[(n - 1) as usize].get_or_init(|| orbit(n)))
}

/// Expected orbit size `2^n * prod_{k=1..n} (2^k + 1)`.
pub fn expected_count(n: u32) -> usize {
    let mut count = 1usize << n;
    for k in 1..=n {
        count *= (1usize << k) + 1;
    }
    count
}

type Key = Vec<(i64, i64)>;

fn round_key(m: &CMat) -> Key {
    let dim = m.dim();
    let mut key = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            let v = m[(r, c)];
            key.push((
                (v.re / tol::STABILIZER_DEDUPE).round() as i64,
                (v.im / tol::STABILIZER_DEDUPE).round() as i64,
            ));
        }
    }
    key
}

fn embed_single(gate: &CMat, site: u32, n: u32) -> CMat {
    let mut out = CMat::identity(1 << site);
    out = out.tensor(gate);
    out.tensor(&CMat::identity(1 << (n - 1 - site)))
}

fn cnot(control: u32, target: u32, n: u32) -> CMat {
    let dim = 1usize << n;
    let (cs, ts) = (n - 1 - control, n - 1 - target);
    let mut m = CMat::zeros(dim);
    for j in 0..dim {
        let image = if j >> cs & 1 == 1 { j ^ (1 << ts) } else { j };
        m[(image, j)] = C64::new(1.0, 0.0);
    }
    m
}

fn generators(n: u32) -> Vec<CMat> {
    let inv = C64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let hadamard = CMat::from_fn(2, |r, c| if r == 1 && c == 1 { -inv } else { inv });
    let phase = CMat::from_fn(2, |r, c| match (r, c) {
        (0, 0) => C64::new(1.0, 0.0),
        (1, 1) => C64::new(0.0, 1.0),
        _ => C64::new(0.0, 0.0),
    });
    let mut gates = Vec::new();
    for site in 0..n {
        gates.push(embed_single(&hadamard, site, n));
        gates.push(embed_single(&phase, site, n));
    }
    for control in 0..n {
        for target in 0..n {
            if control != target {
                gates.push(cnot(control, target, n));
            }
        }
    }
    gates
}

fn orbit(n: u32) -> Vec<PureStabilizer> {
    let gates = generators(n);
    let dim = 1usize << n;
    let mut start = CMat::zeros(dim);
    start[(0, 0)] = C64::new(1.0, 0.0);

    let mut seen: HashMap<Key, CMat> = HashMap::new();
    let mut queue = vec![start.clone()];
    seen.insert(round_key(&start), start);
    while let Some(state) = queue.pop() {
        for gate in &gates {
            let next = &(gate * &state) * &gate.adjoint();
            let key = round_key(&next);
            if let Entry::Vacant(slot) = seen.entry(key) {
                slot.insert(next.clone());
                queue.push(next);
            }
        }
    }

    let mut entries: Vec<(Key, CMat)> = seen.into_iter().collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    entries
        .into_iter()
        .enumerate()
        .map(|(label, (_, mat))| PureStabilizer {
            projector: DensityMatrix::new_unchecked(mat),
            label,
        })
        .collect()
}
