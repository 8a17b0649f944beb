//! Input documents: a named model geometry at a time, or an explicit list of
//! frame components completed by the curvature symmetries.

use std::path::Path;

use branchcurve_core::flow::{riemann_at, ModelGeometry};
use branchcurve_core::tensor::{symmetry_orbit, validate_symmetries, FramedRiemann};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    geometry: Option<String>,
    time: Option<f64>,
    kappa: Option<f64>,
    riemann: Option<Vec<RawComponent>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Geometry { geometry: ModelGeometry, time: f64 },
    Components,
}

#[derive(Debug, Clone)]
pub struct Input {
    pub source: Source,
    pub riemann: FramedRiemann,
}

pub fn read_input(path: &Path, tol: f64) -> CliResult<Input> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    parse_input(&text, tol)
}

pub fn parse_input(text: &str, tol: f64) -> CliResult<Input> {
    let raw: RawDocument =
        serde_json::from_str(text).map_err(|e| CliError::Schema(format!("invalid input document: {e}")))?;
    match (raw.geometry, raw.riemann) {
        (Some(name), None) => {
            let time = raw
                .time
                .ok_or_else(|| CliError::Schema("geometry input needs a \"time\"".into()))?;
            let geometry = ModelGeometry::from_name(&name, raw.kappa)?;
            let riemann = riemann_at(&geometry, time)?;
            Ok(Input {
                source: Source::Geometry { geometry, time },
                riemann,
            })
        }
        (None, Some(list)) => {
            if raw.time.is_some() || raw.kappa.is_some() {
                return Err(CliError::Schema(
                    "\"time\" and \"kappa\" only apply to geometry input".into(),
                ));
            }
            Ok(Input {
                source: Source::Components,
                riemann: complete(&list, tol)?,
            })
        }
        (Some(_), Some(_)) => Err(CliError::Schema(
            "input must contain exactly one of \"geometry\" and \"riemann\", found both".into(),
        )),
        (None, None) => Err(CliError::Schema(
            "input must contain exactly one of \"geometry\" and \"riemann\"".into(),
        )),
    }
}

fn complete(list: &[RawComponent], tol: f64) -> CliResult<FramedRiemann> {
    let mut r = FramedRiemann::zero();
    let mut assigned = [[[[false; 4]; 4]; 4]; 4];
    for c in list {
        let idx = [c.i, c.j, c.k, c.l];
        if idx.iter().any(|&x| !(1..=4).contains(&x)) {
            return Err(CliError::Schema(format!(
                "component indices must lie in 1..4, got ({},{},{},{})",
                c.i, c.j, c.k, c.l
            )));
        }
        if !c.value.is_finite() {
            return Err(CliError::Schema("component values must be finite".into()));
        }
        for ((i, j, k, l), sign) in symmetry_orbit(c.i - 1, c.j - 1, c.k - 1, c.l - 1) {
            let v = sign * c.value;
            if assigned[i][j][k][l] {
                let existing = r.get(i, j, k, l);
                if (existing - v).abs() > tol {
                    return Err(CliError::Symmetry(format!(
                        "R_{}{}{}{} = {} from ({},{},{},{}) conflicts with the value {} already implied",
                        i + 1,
                        j + 1,
                        k + 1,
                        l + 1,
                        v,
                        c.i,
                        c.j,
                        c.k,
                        c.l,
                        existing
                    )));
                }
            } else {
                assigned[i][j][k][l] = true;
                r.set(i, j, k, l, v);
            }
        }
    }
    validate_symmetries(&r, tol).map_err(|v| CliError::Symmetry(format!("symmetry validation failed: {v}")))?;
    Ok(r)
}
