//! Subcommand implementations: compute with the core crate, emit CSV or
//! JSON, and print a short summary to the side channel.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use serde::Serialize;

use remag_core::bloch::{
    classify_boundary, density_from_bloch, edge_hyperplane, facet_hyperplane, BlochVector,
    BoundaryClass, FacetId,
};
use remag_core::family::{fit_angle_model, inclination_angle, t_max_alternate, MagicRay};
use remag_core::optim::{
    closest_stabilizer_1q, facet_heatmap, relative_entropy_of_magic, symmetry_spread,
};
use remag_core::qmat::CMat;
use remag_core::stab::{enumerate_pure_stabilizers, expected_count};
use remag_core::witness::{
    edge_edge_search, find_violation, find_violation_confirmed, reconstruct_hyperplane,
    validate_hyperplane, RayComponent, Verdict,
};

use crate::errors::{compute_err, input_err, io_err, CliError, CliResult};
use crate::states::{parse_component, parse_face, parse_state, Face};
use crate::Format;

const SCHEMA_VERSION: u32 = 1;

/// Output channels: `data` is the requested file (or stdout), `notes` is
/// the human summary (stdout when data goes to a file, stderr otherwise).
struct Sinks {
    data: Box<dyn Write>,
    notes: Box<dyn Write>,
}

fn sinks(out: &Option<PathBuf>) -> CliResult<Sinks> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| io_err(format!("cannot create {}: {e}", path.display())))?;
            Ok(Sinks {
                data: Box::new(file),
                notes: Box::new(io::stdout()),
            })
        }
        None => Ok(Sinks {
            data: Box::new(io::stdout()),
            notes: Box::new(io::stderr()),
        }),
    }
}

fn write_json<T: Serialize>(sink: &mut dyn Write, doc: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *sink, doc).map_err(io_err)?;
    writeln!(sink).map_err(io_err)
}

fn require_json(format: Format, command: &str) -> CliResult<()> {
    if format == Format::Csv {
        return Err(CliError::Usage(format!(
            "{command} emits a structured json report; csv is not available"
        )));
    }
    Ok(())
}

fn mat_entries(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.dim())
        .map(|r| {
            (0..m.dim())
                .map(|c| {
                    let z = m[(r, c)];
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

#[derive(Serialize)]
struct MagicReport {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    state: String,
    qubits: u32,
    value: f64,
    method: &'static str,
    gap: f64,
    iterations: usize,
    closest_bloch: Option<[f64; 3]>,
    closest_matrix: Vec<Vec<[f64; 2]>>,
}

pub fn cmd_magic(
    seed: u64,
    state: &str,
    tol: f64,
    out: &Option<PathBuf>,
    format: Format,
) -> CliResult<()> {
    require_json(format, "magic")?;
    let spec = parse_state(state)?;
    let report = if let Some(bloch) = &spec.bloch {
        let (value, closest) = closest_stabilizer_1q(bloch).map_err(compute_err)?;
        MagicReport {
            schema_version: SCHEMA_VERSION,
            command: "magic",
            seed,
            state: spec.label.clone(),
            qubits: 1,
            value,
            method: "analytic",
            gap: 0.0,
            iterations: 0,
            closest_bloch: Some(closest.components()),
            closest_matrix: mat_entries(density_from_bloch(&closest).mat()),
        }
    } else {
        let res = relative_entropy_of_magic(&spec.density, tol).map_err(input_err)?;
        MagicReport {
            schema_version: SCHEMA_VERSION,
            command: "magic",
            seed,
            state: spec.label.clone(),
            qubits: spec.density.qubits(),
            value: res.value,
            method: "optimizer",
            gap: res.gap,
            iterations: res.iterations,
            closest_bloch: None,
            closest_matrix: mat_entries(res.sigma_star.mat()),
        }
    };

    println!("state: {}", report.state);
    println!("qubits: {}", report.qubits);
    println!("value: {}", report.value);
    println!("method: {}", report.method);
    println!("gap: {}", report.gap);
    println!("iterations: {}", report.iterations);
    if let Some(b) = report.closest_bloch {
        println!("closest: {},{},{}", b[0], b[1], b[2]);
    }
    if let Some(path) = out {
        let mut file = File::create(path)
            .map_err(|e| io_err(format!("cannot create {}: {e}", path.display())))?;
        write_json(&mut file, &report)?;
    }
    Ok(())
}

#[derive(Serialize, Clone)]
struct HeatRow {
    index: [usize; 3],
    direction: [f64; 3],
    value: f64,
    closest: [f64; 3],
}

#[derive(Serialize, Clone, Copy)]
struct SymRow {
    polar_angle: f64,
    samples: usize,
    spread: f64,
}

#[derive(Serialize)]
struct HeatmapReport {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    resolution: usize,
    samples: Vec<HeatRow>,
    max: HeatRow,
    symmetry: Vec<SymRow>,
    max_symmetry_spread: f64,
}

pub fn cmd_heatmap(
    seed: u64,
    resolution: usize,
    circles: usize,
    points_per_circle: usize,
    out: &Option<PathBuf>,
    format: Format,
) -> CliResult<()> {
    let samples = facet_heatmap(resolution).map_err(input_err)?;
    let symmetry: Vec<SymRow> = symmetry_spread(circles, points_per_circle)
        .map_err(input_err)?
        .iter()
        .map(|r| SymRow {
            polar_angle: r.polar_angle,
            samples: r.samples,
            spread: r.spread,
        })
        .collect();
    let rows: Vec<HeatRow> = samples
        .iter()
        .map(|s| HeatRow {
            index: s.index,
            direction: s.direction,
            value: s.value,
            closest: s.closest,
        })
        .collect();
    let max = rows
        .iter()
        .cloned()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("grid is nonempty");
    let max_symmetry_spread = symmetry.iter().map(|r| r.spread).fold(0.0, f64::max);

    let mut sinks = sinks(out)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut sinks.data);
            w.write_record([
                "i",
                "j",
                "k",
                "x1",
                "x2",
                "x3",
                "value",
                "closest_x1",
                "closest_x2",
                "closest_x3",
            ])
            .map_err(io_err)?;
            for r in &rows {
                w.write_record([
                    r.index[0].to_string(),
                    r.index[1].to_string(),
                    r.index[2].to_string(),
                    fmt(r.direction[0]),
                    fmt(r.direction[1]),
                    fmt(r.direction[2]),
                    fmt(r.value),
                    fmt(r.closest[0]),
                    fmt(r.closest[1]),
                    fmt(r.closest[2]),
                ])
                .map_err(io_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        Format::Json => {
            let report = HeatmapReport {
                schema_version: SCHEMA_VERSION,
                command: "heatmap",
                seed,
                resolution,
                samples: rows.clone(),
                max: max.clone(),
                symmetry: symmetry.clone(),
                max_symmetry_spread,
            };
            write_json(&mut sinks.data, &report)?;
        }
    }

    writeln!(
        sinks.notes,
        "max value {} at index ({},{},{}) direction ({},{},{})",
        max.value,
        max.index[0],
        max.index[1],
        max.index[2],
        max.direction[0],
        max.direction[1],
        max.direction[2]
    )
    .map_err(io_err)?;
    for row in &symmetry {
        writeln!(
            sinks.notes,
            "symmetry circle polar_angle={} samples={} spread={}",
            row.polar_angle, row.samples, row.spread
        )
        .map_err(io_err)?;
    }
    writeln!(sinks.notes, "max symmetry spread {max_symmetry_spread}").map_err(io_err)?;
    Ok(())
}

#[derive(Serialize)]
struct RayPoint {
    t: f64,
    x: [f64; 3],
}

#[derive(Serialize)]
struct RayLine {
    ray: usize,
    c: Option<f64>,
    sigma: [f64; 3],
    t_max: f64,
    t_max_alt: Option<f64>,
    points: Vec<RayPoint>,
}

#[derive(Serialize)]
struct RaysReport {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    face: String,
    kind: &'static str,
    rays: Vec<RayLine>,
}

fn build_ray(
    id: usize,
    sigma: BlochVector,
    phi: &remag_core::bloch::SupportingHyperplane,
    c: Option<f64>,
    steps: usize,
    alternate: bool,
) -> CliResult<RayLine> {
    let ray = MagicRay::new(sigma, *phi).map_err(input_err)?;
    let tm = ray.t_max();
    let t_max_alt = if alternate {
        Some(t_max_alternate(&sigma, phi).map_err(compute_err)?)
    } else {
        None
    };
    let mut points = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = tm * k as f64 / (steps - 1) as f64;
        let x = ray.state_at(t).map_err(compute_err)?;
        points.push(RayPoint {
            t,
            x: x.components(),
        });
    }
    Ok(RayLine {
        ray: id,
        c,
        sigma: sigma.components(),
        t_max: tm,
        t_max_alt,
        points,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_rays(
    seed: u64,
    face_text: &str,
    c_list: &Option<Vec<f64>>,
    resolution: usize,
    steps: usize,
    alternate: bool,
    out: &Option<PathBuf>,
    format: Format,
) -> CliResult<()> {
    if resolution < 2 {
        return Err(CliError::Usage(format!(
            "resolution {resolution} must be at least 2"
        )));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!("steps {steps} must be at least 2")));
    }
    let face = parse_face(face_text)?;
    let mut rays = Vec::new();
    let kind = match &face {
        Face::Facet(facet) => {
            if c_list.is_some() {
                return Err(CliError::Usage(
                    "--c sets edge plane parameters; it does not apply to facets".into(),
                ));
            }
            let phi = facet_hyperplane(facet);
            let mut sigmas = vec![facet.centroid()];
            let m = resolution;
            for i in 1..m {
                for j in 1..(m - i) {
                    let k = m - i - j;
                    if i == j && j == k {
                        continue;
                    }
                    let bary = [
                        i as f64 / m as f64,
                        j as f64 / m as f64,
                        k as f64 / m as f64,
                    ];
                    sigmas.push(facet.point(bary).map_err(compute_err)?);
                }
            }
            for sigma in sigmas {
                rays.push(build_ray(rays.len(), sigma, &phi, None, steps, alternate)?);
            }
            "facet"
        }
        Face::Edge(edge) => {
            let half = 1.0 / 2.0_f64.sqrt();
            let cs = c_list
                .clone()
                .unwrap_or_else(|| vec![0.0, half / 2.0, half]);
            for &c in &cs {
                let phi = edge_hyperplane(edge, c).map_err(input_err)?;
                for m in 1..resolution {
                    let w = m as f64 / resolution as f64;
                    let sigma = edge.point(w).map_err(compute_err)?;
                    rays.push(build_ray(
                        rays.len(),
                        sigma,
                        &phi,
                        Some(c),
                        steps,
                        alternate,
                    )?);
                }
            }
            "edge"
        }
    };

    let mut sinks = sinks(out)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut sinks.data);
            w.write_record([
                "ray",
                "kind",
                "face",
                "c",
                "sigma_x",
                "sigma_y",
                "sigma_z",
                "t_max",
                "t_max_alt",
                "t",
                "x1",
                "x2",
                "x3",
            ])
            .map_err(io_err)?;
            for line in &rays {
                for p in &line.points {
                    w.write_record([
                        line.ray.to_string(),
                        kind.to_string(),
                        face_text.trim().to_string(),
                        line.c.map(fmt).unwrap_or_default(),
                        fmt(line.sigma[0]),
                        fmt(line.sigma[1]),
                        fmt(line.sigma[2]),
                        fmt(line.t_max),
                        line.t_max_alt.map(fmt).unwrap_or_default(),
                        fmt(p.t),
                        fmt(p.x[0]),
                        fmt(p.x[1]),
                        fmt(p.x[2]),
                    ])
                    .map_err(io_err)?;
                }
            }
            w.flush().map_err(io_err)?;
        }
        Format::Json => {
            let report = RaysReport {
                schema_version: SCHEMA_VERSION,
                command: "rays",
                seed,
                face: face_text.trim().to_string(),
                kind,
                rays,
            };
            write_json(&mut sinks.data, &report)?;
            writeln!(sinks.notes, "emitted {} rays", report.rays.len()).map_err(io_err)?;
            return Ok(());
        }
    }
    writeln!(
        sinks.notes,
        "emitted {} rays of {} points each",
        rays.len(),
        steps
    )
    .map_err(io_err)?;
    Ok(())
}

#[derive(Serialize)]
struct ComponentEcho {
    spec: String,
    sigma: [f64; 3],
    t: f64,
    t_max: f64,
    commuting: bool,
}

#[derive(Serialize)]
struct ValidationDoc {
    min_value: f64,
    argmin_label: usize,
    valid: bool,
}

#[derive(Serialize)]
struct EdgeScanDoc {
    resolution: usize,
    grid: Vec<f64>,
    values: Vec<Vec<Option<f64>>>,
    best_min_trace: f64,
    best_cell: [usize; 2],
    cells_scanned: usize,
    cells_skipped: usize,
    all_negative: bool,
}

#[derive(Serialize)]
struct WitnessDoc {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    components: Vec<ComponentEcho>,
    verdict: &'static str,
    trace_value: f64,
    site_blochs: Vec<[f64; 3]>,
    beta1: Option<f64>,
    optimizer_gap: Option<f64>,
    gammas: [f64; 2],
    route_scale: f64,
    validation: ValidationDoc,
    edge_scan: Option<EdgeScanDoc>,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_witness(
    seed: u64,
    a: &str,
    b: &str,
    third: &Option<String>,
    tol: f64,
    confirm: bool,
    resolution: usize,
    out: &Option<PathBuf>,
    format: Format,
) -> CliResult<()> {
    require_json(format, "witness")?;
    let mut specs = vec![a.to_string(), b.to_string()];
    if let Some(t) = third {
        specs.push(t.clone());
    }
    let comps: Vec<RayComponent> = specs
        .iter()
        .map(|s| parse_component(s))
        .collect::<CliResult<_>>()?;

    let hp = reconstruct_hyperplane(&comps).map_err(input_err)?;
    let report = if confirm {
        find_violation_confirmed(&comps, tol).map_err(input_err)?
    } else {
        find_violation(&comps).map_err(input_err)?
    };
    let validation =
        validate_hyperplane(&hp.phi_computational(), comps.len() as u32).map_err(compute_err)?;

    let edge_pair = comps.len() == 2
        && comps.iter().all(|c| {
            !c.commuting() && matches!(classify_boundary(c.sigma()), Ok(BoundaryClass::Edge { .. }))
        });
    let edge_scan = if edge_pair {
        let scan = edge_edge_search(&comps[0], &comps[1], resolution).map_err(input_err)?;
        Some(EdgeScanDoc {
            resolution,
            grid: scan.grid,
            values: scan.values,
            best_min_trace: scan.best_min_trace,
            best_cell: [scan.best_cell.0, scan.best_cell.1],
            cells_scanned: scan.cells_scanned,
            cells_skipped: scan.cells_skipped,
            all_negative: scan.all_negative,
        })
    } else {
        None
    };

    let verdict = match report.verdict {
        Verdict::Violation => "violation",
        Verdict::NoneFound => "none-found",
    };
    let doc = WitnessDoc {
        schema_version: SCHEMA_VERSION,
        command: "witness",
        seed,
        components: specs
            .iter()
            .zip(&comps)
            .map(|(spec, c)| ComponentEcho {
                spec: spec.clone(),
                sigma: c.sigma().components(),
                t: c.t(),
                t_max: c.t_max(),
                commuting: c.commuting(),
            })
            .collect(),
        verdict,
        trace_value: report.trace_value,
        site_blochs: report.site_blochs,
        beta1: report.beta1,
        optimizer_gap: report.optimizer_gap,
        gammas: [hp.gammas().0, hp.gammas().1],
        route_scale: hp.scale(),
        validation: ValidationDoc {
            min_value: validation.min_value,
            argmin_label: validation.argmin_label,
            valid: validation.valid,
        },
        edge_scan,
    };

    let mut sinks = sinks(out)?;
    write_json(&mut sinks.data, &doc)?;
    writeln!(
        sinks.notes,
        "verdict: {verdict} (trace {})",
        doc.trace_value
    )
    .map_err(io_err)?;
    if let Some(gap) = doc.optimizer_gap {
        writeln!(sinks.notes, "optimizer gap: {gap}").map_err(io_err)?;
    }
    Ok(())
}

#[derive(Serialize, Clone, Copy)]
struct AngleRow {
    r: f64,
    distance: f64,
    alpha: f64,
}

#[derive(Serialize)]
struct FitDoc {
    slope: f64,
    intercept: f64,
    max_residual: f64,
}

#[derive(Serialize)]
struct AngleReport {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    samples: Vec<AngleRow>,
    fit: FitDoc,
}

pub fn cmd_angle(
    seed: u64,
    r_min: Option<f64>,
    r_max: Option<f64>,
    samples: usize,
    out: &Option<PathBuf>,
    format: Format,
) -> CliResult<()> {
    let lo = 1.0 / 3.0_f64.sqrt();
    let r_min = r_min.unwrap_or(lo);
    let r_max = r_max.unwrap_or(0.99);
    if samples < 10 {
        return Err(CliError::Usage(format!(
            "need at least 10 samples, got {samples}"
        )));
    }
    if r_min < lo - 1e-12 || r_max >= 1.0 || r_min >= r_max {
        return Err(CliError::Usage(format!(
            "sweep range [{r_min}, {r_max}] must sit inside [1/sqrt(3), 1)"
        )));
    }
    let facet = FacetId::new([1, 1, 1]).expect("octant");
    let phi = facet_hyperplane(&facet);
    let x_t = [lo; 3];
    let mut rows = Vec::with_capacity(samples);
    for k in 0..samples {
        let r = r_min + (r_max - r_min) * k as f64 / (samples - 1) as f64;
        // Stabilizers along the centroid-to-vertex line; s solves |x(s)| = r.
        let v = (3.0 * r * r - 1.0).max(0.0);
        let s = if v <= 1e-13 { 0.0 } else { (v / 2.0).sqrt() };
        let sigma = BlochVector::new([(1.0 + 2.0 * s) / 3.0, (1.0 - s) / 3.0, (1.0 - s) / 3.0])
            .map_err(compute_err)?;
        let ray = MagicRay::new(sigma, phi).map_err(compute_err)?;
        let endpoint = ray.endpoint().map_err(compute_err)?.components();
        let distance = (0..3)
            .map(|i| (endpoint[i] - x_t[i]).powi(2))
            .sum::<f64>()
            .sqrt();
        let alpha = inclination_angle(r).map_err(compute_err)?;
        rows.push(AngleRow { r, distance, alpha });
    }
    let pairs: Vec<(f64, f64)> = rows.iter().map(|row| (row.distance, row.alpha)).collect();
    let fit = fit_angle_model(&pairs).map_err(compute_err)?;

    let mut sinks = sinks(out)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut sinks.data);
            w.write_record(["r", "distance", "alpha"]).map_err(io_err)?;
            for row in &rows {
                w.write_record([fmt(row.r), fmt(row.distance), fmt(row.alpha)])
                    .map_err(io_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        Format::Json => {
            let report = AngleReport {
                schema_version: SCHEMA_VERSION,
                command: "angle",
                seed,
                samples: rows.clone(),
                fit: FitDoc {
                    slope: fit.slope,
                    intercept: fit.intercept,
                    max_residual: fit.max_residual,
                },
            };
            write_json(&mut sinks.data, &report)?;
        }
    }
    writeln!(
        sinks.notes,
        "fit: slope {} intercept {} max residual {}",
        fit.slope, fit.intercept, fit.max_residual
    )
    .map_err(io_err)?;
    writeln!(
        sinks.notes,
        "first row: distance {} alpha {}",
        rows[0].distance, rows[0].alpha
    )
    .map_err(io_err)?;
    Ok(())
}

#[derive(Serialize)]
struct StabilizerDoc {
    label: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct EnumerateReport {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    n: u32,
    count: usize,
    expected: usize,
    states: Option<Vec<StabilizerDoc>>,
}

pub fn cmd_enumerate(
    seed: u64,
    n: u32,
    full: bool,
    out: &Option<PathBuf>,
    format: Format,
) -> CliResult<()> {
    require_json(format, "enumerate")?;
    let states = enumerate_pure_stabilizers(n).map_err(input_err)?;
    let report = EnumerateReport {
        schema_version: SCHEMA_VERSION,
        command: "enumerate",
        seed,
        n,
        count: states.len(),
        expected: expected_count(n),
        states: full.then(|| {
            states
                .iter()
                .map(|s| StabilizerDoc {
                    label: s.label(),
                    matrix: mat_entries(s.projector().mat()),
                })
                .collect()
        }),
    };
    let mut sinks = sinks(out)?;
    write_json(&mut sinks.data, &report)?;
    writeln!(
        sinks.notes,
        "count: {} (expected {})",
        report.count, report.expected
    )
    .map_err(io_err)?;
    Ok(())
}
