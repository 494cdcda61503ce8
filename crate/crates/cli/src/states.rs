//! Parsers for state specifications and witness component specifications.

use remag_core::bloch::{
    classify_boundary, edge_hyperplane, facet_hyperplane, BlochVector, BoundaryClass, EdgeId,
    FacetId, VertexId,
};
use remag_core::family::t_max;
use remag_core::qmat::{CMat, C64};
use remag_core::witness::RayComponent;
use remag_core::DensityMatrix;

use crate::errors::{input_err, CliError, CliResult};

/// A named single- or two-qubit reference state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    T,
    H,
    Hlike,
    Psi2q,
}

impl Named {
    fn parse(word: &str) -> CliResult<Named> {
        match word.trim() {
            "T" | "t" => Ok(Named::T),
            "H" | "h" => Ok(Named::H),
            "Hlike" | "hlike" | "H-like" => Ok(Named::Hlike),
            "psi2q" | "Psi2q" | "PSI2Q" => Ok(Named::Psi2q),
            other => Err(CliError::Usage(format!(
                "unknown state name {other:?}; expected T, H, Hlike, or psi2q"
            ))),
        }
    }

    fn density(self) -> DensityMatrix {
        match self {
            Named::T => pure_bloch([1.0, 1.0, 1.0]),
            Named::H => pure_bloch([1.0, 1.0, 0.0]),
            Named::Hlike => pure_bloch([1.0, 0.0, 1.0]),
            Named::Psi2q => {
                let amps = [
                    C64::new(0.5, 0.0),
                    C64::new(0.5, 0.0),
                    C64::new(0.5, 0.0),
                    C64::new(0.0, 0.5),
                ];
                let mat = CMat::from_fn(4, |r, c| amps[r] * amps[c].conj());
                DensityMatrix::new(mat).expect("fixed projector is a valid state")
            }
        }
    }
}

fn pure_bloch(direction: [f64; 3]) -> DensityMatrix {
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    let x = BlochVector::new(direction.map(|v| v / norm)).expect("unit vector");
    remag_core::bloch::density_from_bloch(&x)
}

/// Parsed `--state` value: a Bloch triple, one named state, or a tensor
/// product of named states.
#[derive(Clone, Debug)]
pub struct StateSpec {
    pub label: String,
    pub density: DensityMatrix,
    pub bloch: Option<BlochVector>,
}

fn parse_triple(text: &str) -> CliResult<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "expected three comma-separated components, got {text:?}"
        )));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| CliError::Usage(format!("bad component {part:?}: {e}")))?;
    }
    Ok(out)
}

/// Parses a `--state` specification.
pub fn parse_state(text: &str) -> CliResult<StateSpec> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(CliError::Usage("empty state specification".into()));
    }
    if trimmed.contains(',') {
        let x = parse_triple(trimmed)?;
        let bloch = BlochVector::new(x).map_err(input_err)?;
        return Ok(StateSpec {
            label: trimmed.to_string(),
            density: remag_core::bloch::density_from_bloch(&bloch),
            bloch: Some(bloch),
        });
    }
    let factors: Vec<&str> = trimmed
        .split(['\u{2297}', '*'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if factors.is_empty() {
        return Err(CliError::Usage(format!("no state names in {text:?}")));
    }
    let named: Vec<Named> = factors
        .iter()
        .map(|f| Named::parse(f))
        .collect::<CliResult<_>>()?;
    let mut density = named[0].density();
    for factor in &named[1..] {
        density = density.tensor(&factor.density());
    }
    if density.qubits() > 3 {
        return Err(CliError::Usage(format!(
            "state has {} qubits; at most 3 are supported",
            density.qubits()
        )));
    }
    let bloch = if density.qubits() == 1 {
        Some(remag_core::bloch::bloch_from_density(&density).map_err(input_err)?)
    } else {
        None
    };
    Ok(StateSpec {
        label: trimmed.to_string(),
        density,
        bloch,
    })
}

/// Parses a witness component specification and builds its ray component.
///
/// Accepted forms (optionally suffixed `@FRACTION` of the endpoint
/// parameter, default 0.5 for explicit specs and 1 for named states):
/// `T`, `H`, `Hlike`, `facet:X,Y,Z`, a bare triple `X,Y,Z`, or
/// `edge:ID:WEIGHT:C` (for example `edge:s1-s3:0.5:0.3`).
pub fn parse_component(text: &str) -> CliResult<RayComponent> {
    let trimmed = text.trim();
    let (body, frac) = match trimmed.rsplit_once('@') {
        Some((body, frac_text)) => {
            let frac = frac_text.trim().parse::<f64>().map_err(|e| {
                CliError::Usage(format!("bad endpoint fraction {frac_text:?}: {e}"))
            })?;
            (body.trim(), Some(frac))
        }
        None => (trimmed, None),
    };
    if let Some(f) = frac {
        if !(0.0..=1.0).contains(&f) {
            return Err(CliError::Usage(format!(
                "endpoint fraction {f} outside [0, 1]"
            )));
        }
    }

    if let Ok(named) = Named::parse(body) {
        let (sigma, phi) = match named {
            Named::T => {
                let sigma = BlochVector::new([1.0 / 3.0; 3]).expect("centroid");
                let facet = FacetId::new([1, 1, 1]).expect("octant");
                (sigma, facet_hyperplane(&facet))
            }
            Named::H => {
                let edge: EdgeId = "s1-s2".parse().map_err(input_err)?;
                (
                    edge.point(0.5).map_err(input_err)?,
                    edge_hyperplane(&edge, 0.0).map_err(input_err)?,
                )
            }
            Named::Hlike => {
                let edge: EdgeId = "s1-s3".parse().map_err(input_err)?;
                (
                    edge.point(0.5).map_err(input_err)?,
                    edge_hyperplane(&edge, 0.0).map_err(input_err)?,
                )
            }
            Named::Psi2q => {
                return Err(CliError::Usage(
                    "witness components must be single-qubit states".into(),
                ))
            }
        };
        let tm = t_max(&sigma, &phi).map_err(input_err)?;
        return RayComponent::new(sigma, phi, frac.unwrap_or(1.0) * tm).map_err(input_err);
    }

    if let Some(rest) = body.strip_prefix("edge:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!(
                "edge component must be edge:ID:WEIGHT:C, got {body:?}"
            )));
        }
        let edge: EdgeId = parts[0].trim().parse().map_err(input_err)?;
        let weight = parts[1]
            .trim()
            .parse::<f64>()
            .map_err(|e| CliError::Usage(format!("bad edge weight {:?}: {e}", parts[1])))?;
        let c = parts[2]
            .trim()
            .parse::<f64>()
            .map_err(|e| CliError::Usage(format!("bad plane parameter {:?}: {e}", parts[2])))?;
        let sigma = edge.point(weight).map_err(input_err)?;
        let phi = edge_hyperplane(&edge, c).map_err(input_err)?;
        let tm = t_max(&sigma, &phi).map_err(input_err)?;
        return RayComponent::new(sigma, phi, frac.unwrap_or(0.5) * tm).map_err(input_err);
    }

    let triple_text = body.strip_prefix("facet:").unwrap_or(body);
    if triple_text.contains(',') {
        let sigma = BlochVector::new(parse_triple(triple_text)?).map_err(input_err)?;
        let facet = match classify_boundary(&sigma).map_err(input_err)? {
            BoundaryClass::Facet { id, .. } => id,
            other => {
                return Err(CliError::Usage(format!(
                    "component {body:?} is not a facet-interior point (classified {other:?})"
                )))
            }
        };
        let phi = facet_hyperplane(&facet);
        let tm = t_max(&sigma, &phi).map_err(input_err)?;
        return RayComponent::new(sigma, phi, frac.unwrap_or(0.5) * tm).map_err(input_err);
    }

    Err(CliError::Usage(format!(
        "cannot parse component {text:?}; expected a name, facet:X,Y,Z, or edge:ID:WEIGHT:C"
    )))
}

/// Parses a `--face` value: a facet id or an edge id; vertex ids are
/// rejected because no rays leave the vertices.
pub enum Face {
    Facet(FacetId),
    Edge(EdgeId),
}

pub fn parse_face(text: &str) -> CliResult<Face> {
    let trimmed = text.trim();
    if trimmed.parse::<VertexId>().is_ok() {
        return Err(CliError::Usage(format!(
            "face {trimmed:?} is a vertex; rays start from facets or edges"
        )));
    }
    if let Ok(facet) = trimmed.parse::<FacetId>() {
        return Ok(Face::Facet(facet));
    }
    if let Ok(edge) = trimmed.parse::<EdgeId>() {
        return Ok(Face::Edge(edge));
    }
    Err(CliError::Usage(format!(
        "cannot parse face {text:?}; expected a facet like +++ or an edge like s1-s3"
    )))
}
