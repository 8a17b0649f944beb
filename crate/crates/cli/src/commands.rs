use std::io::Write;
use std::path::Path;

use branchcurve_core::chart::{real_slice, Chart};
use branchcurve_core::curve::{
    classify, curve_coeffs, oracle_check, projective_form, CurveClass, CurveTag, CLASSIFY_TOL,
};
use branchcurve_core::flow::{curve_sequence, riemann_at, singular_time, BlowupSequence, ModelGeometry};
use branchcurve_core::tensor::{curvature_operator_blocks, four_part_decomposition_check, symmetry_residual};
use branchcurve_core::ExecMode;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::input::{read_input, Source};
use crate::output::{coeff_matrix, format_float, independent_components, mat3, to_json, Complex, Component, Float};

pub const ORACLE_SAMPLES: usize = 1000;
pub const ORACLE_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Emit {
    Coeffs,
    Class,
    Blocks,
    All,
}

#[derive(Serialize)]
struct InputSummary {
    source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometry: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    time: Option<Float>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<Float>,
}

#[derive(Serialize)]
struct CoeffsOut {
    raw: Vec<Vec<Complex>>,
    normalized: Vec<Vec<Complex>>,
}

#[derive(Serialize)]
struct ClassOut {
    tag: &'static str,
    detail: String,
}

impl From<&CurveClass> for ClassOut {
    fn from(c: &CurveClass) -> Self {
        Self {
            tag: c.tag.as_str(),
            detail: c.detail.clone(),
        }
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct BlocksOut {
    A: Vec<Vec<Float>>,
    B: Vec<Vec<Float>>,
    C: Vec<Vec<Float>>,
    Wplus: Vec<Vec<Float>>,
    Wminus: Vec<Vec<Float>>,
    scal: Float,
}

#[derive(Serialize)]
struct Diagnostics {
    oracle_samples: usize,
    oracle_max_relative_error: Float,
    oracle_passed: bool,
    symmetry_residual: Float,
    decomposition_max_deviation: Float,
    tol: Float,
}

#[derive(Serialize)]
struct ComputeOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<InputSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs: Option<CoeffsOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<ClassOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<BlocksOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<Diagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    riemann: Option<Vec<Component>>,
}

pub fn compute(path: &Path, emit: Emit, tol: f64, mode: ExecMode) -> CliResult<String> {
    let input = read_input(path, tol)?;
    let blocks = curvature_operator_blocks(&input.riemann);
    let coeffs = curve_coeffs(&blocks);
    let class = classify(&coeffs, CLASSIFY_TOL);
    let all = emit == Emit::All;

    let mut out = ComputeOut {
        input: None,
        coeffs: None,
        class: None,
        blocks: None,
        diagnostics: None,
        riemann: None,
    };
    if all {
        out.input = Some(match &input.source {
            Source::Geometry { geometry, time } => InputSummary {
                source: "geometry",
                geometry: Some(geometry.name()),
                time: Some(Float(*time)),
                kappa: match geometry {
                    ModelGeometry::Cp2 { kappa } => Some(Float(*kappa)),
                    ModelGeometry::Product(_) => None,
                },
            },
            Source::Components => InputSummary {
                source: "riemann",
                geometry: None,
                time: None,
                kappa: None,
            },
        });
    }
    if all || emit == Emit::Coeffs {
        out.coeffs = Some(CoeffsOut {
            raw: coeff_matrix(&coeffs),
            normalized: coeff_matrix(&projective_form(&coeffs)),
        });
    }
    if all || emit == Emit::Class {
        out.class = Some((&class).into());
    }
    if all || emit == Emit::Blocks {
        out.blocks = Some(BlocksOut {
            A: mat3(&blocks.a),
            B: mat3(&blocks.b),
            C: mat3(&blocks.c),
            Wplus: mat3(&blocks.w_plus),
            Wminus: mat3(&blocks.w_minus),
            scal: Float(blocks.scal),
        });
    }
    if all {
        let oracle = oracle_check(&blocks, &coeffs, ORACLE_SAMPLES, tol, ORACLE_SEED, mode);
        let decomposition = match four_part_decomposition_check(&input.riemann, tol) {
            Ok(r) | Err(r) => r.max_deviation,
        };
        out.diagnostics = Some(Diagnostics {
            oracle_samples: oracle.samples,
            oracle_max_relative_error: Float(oracle.max_relative_error),
            oracle_passed: oracle.passed,
            symmetry_residual: Float(symmetry_residual(&input.riemann)),
            decomposition_max_deviation: Float(decomposition),
            tol: Float(tol),
        });
        out.riemann = Some(independent_components(&input.riemann));
    }
    Ok(to_json(&out))
}

pub struct FlowArgs<'a> {
    pub geometry: &'a str,
    pub kappa: Option<f64>,
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

pub fn flow(args: &FlowArgs<'_>) -> CliResult<String> {
    let geom = ModelGeometry::from_name(args.geometry, args.kappa)?;
    if args.steps == 0 {
        return Err(CliError::Schema("--steps must be at least 1".into()));
    }
    if !(args.t0.is_finite() && args.t1.is_finite()) || args.t0 < 0.0 || args.t1 < args.t0 {
        return Err(CliError::Schema(format!(
            "need 0 <= t0 <= t1, got t0 = {}, t1 = {}",
            args.t0, args.t1
        )));
    }
    let big_t = singular_time(&geom);
    if args.t1 >= big_t {
        return Err(CliError::SingularTime(format!(
            "time range [{}, {}] reaches the singular time {} of {}",
            args.t0,
            args.t1,
            big_t,
            geom.name()
        )));
    }
    let mut out = String::from("t,class");
    for m in 0..5 {
        for n in 0..5 {
            out.push_str(&format!(",c{m}{n}_re,c{m}{n}_im"));
        }
    }
    out.push('\n');
    for k in 0..args.steps {
        let t = if args.steps == 1 {
            args.t0
        } else {
            args.t0 + (args.t1 - args.t0) * k as f64 / (args.steps - 1) as f64
        };
        let coeffs = curve_coeffs(&curvature_operator_blocks(&riemann_at(&geom, t)?));
        let class = classify(&coeffs, CLASSIFY_TOL);
        out.push_str(&format_float(t));
        out.push(',');
        out.push_str(class.tag.as_str());
        for z in projective_form(&coeffs).c.iter().flatten() {
            out.push(',');
            out.push_str(&format_float(z.re));
            out.push(',');
            out.push_str(&format_float(z.im));
        }
        out.push('\n');
    }
    Ok(out)
}

pub struct BlowupArgs<'a> {
    pub geometry: &'a str,
    pub kappa: Option<f64>,
    pub lambda_base: f64,
    pub count: usize,
    pub t: f64,
}

#[derive(Serialize)]
struct BlowupEntryOut {
    index: usize,
    lambda: Float,
    time: Float,
    distance: Float,
    class: &'static str,
}

#[derive(Serialize)]
struct LimitOut {
    class: ClassOut,
    normalized: Vec<Vec<Complex>>,
}

#[derive(Serialize)]
struct BlowupOut {
    geometry: String,
    singular_time: Float,
    t: Float,
    lambda_base: Float,
    tol: Float,
    entries: Vec<BlowupEntryOut>,
    limit: LimitOut,
    degenerate: bool,
    monotone: bool,
    converged: bool,
    last_within_first: bool,
}

/// Returns the report and whether `d_N <= d_1` holds.
pub fn blowup(args: &BlowupArgs<'_>, tol: f64, mode: ExecMode) -> CliResult<(String, bool)> {
    let geom = ModelGeometry::from_name(args.geometry, args.kappa)?;
    if args.count == 0 {
        return Err(CliError::Schema("--count must be at least 1".into()));
    }
    let seq = BlowupSequence::geometric(geom, args.lambda_base, args.count, args.t)?;
    let report = curve_sequence(&seq, tol, mode)?;
    let first = report.entries.first().map_or(0.0, |e| e.distance);
    let last = report.entries.last().map_or(0.0, |e| e.distance);
    let last_within_first = last <= first + tol;
    let out = BlowupOut {
        geometry: report.geometry.clone(),
        singular_time: Float(report.singular_time),
        t: Float(report.t),
        lambda_base: Float(args.lambda_base),
        tol: Float(tol),
        entries: report
            .entries
            .iter()
            .map(|e| BlowupEntryOut {
                index: e.index,
                lambda: Float(e.lambda),
                time: Float(e.time),
                distance: Float(e.distance),
                class: e.tag.as_str(),
            })
            .collect(),
        limit: LimitOut {
            class: (&report.limit_class).into(),
            normalized: coeff_matrix(&report.limit),
        },
        degenerate: report.degenerate,
        monotone: report.monotone,
        converged: report.converged,
        last_within_first,
    };
    Ok((to_json(&out), last_within_first))
}

pub fn plot(path: &Path, chart: Chart, grid: usize, tol: f64, mode: ExecMode) -> CliResult<String> {
    let input = read_input(path, tol)?;
    let coeffs = curve_coeffs(&curvature_operator_blocks(&input.riemann));
    if classify(&coeffs, CLASSIFY_TOL).tag == CurveTag::IdenticallyZero {
        return Err(CliError::Degenerate(
            "curve coefficients vanish identically, nothing to plot".into(),
        ));
    }
    let points = real_slice(&coeffs, chart, grid, mode)?;
    let mut out = String::from("x,y,log10_abs_delta\n");
    for p in points {
        let v = if p.log10_abs_delta == f64::NEG_INFINITY {
            "-inf".to_string()
        } else {
            format_float(p.log10_abs_delta)
        };
        out.push_str(&format!("{},{},{}\n", format_float(p.x), format_float(p.y), v));
    }
    Ok(out)
}

pub fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to standard output: {e}"))),
    }
}
