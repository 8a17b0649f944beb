//! Closed form Ricci flows of the model geometries and their parabolic
//! blow-ups.
//!
//! A round `n`-sphere factor of unit initial radius evolves by
//! `σ(t) = 1 − 2(n−1)t`, flat factors are static and the Fubini–Study
//! metric on CP² by `σ(t) = 1 − 2κt`. Frames are rescaled with the metric so
//! they stay orthonormal, which makes every sectional component `1/σ`.

use std::fmt;

use crate::curve::{classify, curve_coeffs, projective_form, CurveClass, CurveCoeffs, CurveTag, CLASSIFY_TOL};
use crate::exec::{map_indexed, ExecMode};
use crate::tensor::{curvature_operator_blocks, diag3, FramedRiemann};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Sphere(usize),
    Euclidean(usize),
}

impl Factor {
    pub fn dim(&self) -> usize {
        match *self {
            Factor::Sphere(n) | Factor::Euclidean(n) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelGeometry {
    Product(Vec<Factor>),
    Cp2 { kappa: f64 },
}

impl ModelGeometry {
    /// Adjacent flat factors are merged.
    pub fn product(factors: Vec<Factor>) -> Result<Self> {
        let mut merged: Vec<Factor> = Vec::new();
        for f in factors {
            match (f, merged.last_mut()) {
                (Factor::Euclidean(0), _) | (Factor::Sphere(0), _) => {
                    return Err(Error::InvalidGeometry("factor of dimension 0".into()))
                }
                (Factor::Sphere(n), _) if !(2..=4).contains(&n) => {
                    return Err(Error::InvalidGeometry(format!("sphere factor of dimension {n}")))
                }
                (Factor::Euclidean(k), Some(Factor::Euclidean(prev))) => *prev += k,
                (f, _) => merged.push(f),
            }
        }
        let total: usize = merged.iter().map(Factor::dim).sum();
        if total != 4 {
            return Err(Error::InvalidGeometry(format!("total dimension {total}, expected 4")));
        }
        Ok(Self::Product(merged))
    }

    pub fn cp2(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidGeometry(format!("cp2 needs a positive kappa, got {kappa}")));
        }
        Ok(Self::Cp2 { kappa })
    }

    /// Parses names such as `s3xr`, `s2xs2`, `s2xr2`, `s4`, `r4` or `cp2`.
    /// `kappa` is only accepted for `cp2` and defaults to 1.
    pub fn from_name(name: &str, kappa: Option<f64>) -> Result<Self> {
        if name == "cp2" {
            return Self::cp2(kappa.unwrap_or(1.0));
        }
        if kappa.is_some() {
            return Err(Error::InvalidGeometry(format!("kappa is only meaningful for cp2, not {name}")));
        }
        let mut factors = Vec::new();
        for token in name.split('x') {
            let (kind, digits) = token.split_at(token.len().min(1));
            let dim = if digits.is_empty() {
                None
            } else {
                Some(digits.parse::<usize>().map_err(|_| {
                    Error::InvalidGeometry(format!("bad factor {token:?} in {name:?}"))
                })?)
            };
            factors.push(match (kind, dim) {
                ("s", Some(n)) => Factor::Sphere(n),
                ("r", d) => Factor::Euclidean(d.unwrap_or(1)),
                _ => return Err(Error::InvalidGeometry(format!("bad factor {token:?} in {name:?}"))),
            });
        }
        Self::product(factors)
    }

    pub fn name(&self) -> String {
        match self {
            Self::Cp2 { .. } => "cp2".to_string(),
            Self::Product(factors) => factors
                .iter()
                .map(|f| match *f {
                    Factor::Sphere(n) => format!("s{n}"),
                    Factor::Euclidean(1) => "r".to_string(),
                    Factor::Euclidean(k) => format!("r{k}"),
                })
                .collect::<Vec<_>>()
                .join("x"),
        }
    }

    /// Rate `c` in `σ(t) = 1 − c t` for each factor; zero for flat ones.
    fn rates(&self) -> Vec<f64> {
        match self {
            Self::Cp2 { kappa } => vec![2.0 * kappa],
            Self::Product(factors) => factors
                .iter()
                .map(|f| match *f {
                    Factor::Sphere(n) => 2.0 * (n as f64 - 1.0),
                    Factor::Euclidean(_) => 0.0,
                })
                .collect(),
        }
    }

    pub fn sigmas(&self, t: f64) -> Vec<f64> {
        self.rates().iter().map(|c| 1.0 - c * t).collect()
    }
}

impl fmt::Display for ModelGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// First zero of any `σ`; infinite for flat geometries.
pub fn singular_time(geom: &ModelGeometry) -> f64 {
    geom.rates()
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|c| 1.0 / c)
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowSample {
    pub geometry: ModelGeometry,
    pub t: f64,
    pub singular_time: f64,
    pub sigma: Vec<f64>,
}

pub fn sample(geom: &ModelGeometry, t: f64) -> Result<FlowSample> {
    let big_t = singular_time(geom);
    if !(t < big_t) || !t.is_finite() {
        return Err(Error::Domain {
            time: t,
            singular_time: big_t,
        });
    }
    Ok(FlowSample {
        geometry: geom.clone(),
        t,
        singular_time: big_t,
        sigma: geom.sigmas(t),
    })
}

/// Curvature with factor scales `σ`; `None` drops the factor's curvature.
fn riemann_from_scales(geom: &ModelGeometry, scales: &[Option<f64>]) -> FramedRiemann {
    match geom {
        ModelGeometry::Cp2 { .. } => match scales[0] {
            None => FramedRiemann::zero(),
            Some(s) => {
                let a = diag3([0.5 / s; 3]);
                let c = diag3([1.5 / s, 0.0, 0.0]);
                FramedRiemann::from_blocks(&a, &[[0.0; 3]; 3], &c).expect("traces agree")
            }
        },
        ModelGeometry::Product(factors) => {
            let mut pairs = Vec::new();
            let mut offset = 0;
            for (f, scale) in factors.iter().zip(scales) {
                if let (Factor::Sphere(n), Some(s)) = (f, scale) {
                    for i in offset..offset + n {
                        for j in i + 1..offset + n {
                            pairs.push(((i, j), 1.0 / s));
                        }
                    }
                }
                offset += f.dim();
            }
            FramedRiemann::from_sectional(&pairs)
        }
    }
}

/// Frame components of the curvature at time `t < T`. Negative times are
/// allowed.
pub fn riemann_at(geom: &ModelGeometry, t: f64) -> Result<FramedRiemann> {
    let s = sample(geom, t)?;
    let scales: Vec<_> = s.sigma.into_iter().map(Some).collect();
    Ok(riemann_from_scales(geom, &scales))
}

/// Components for the metric `κ g` in the rescaled orthonormal frame.
pub fn scale_metric(r: &FramedRiemann, kappa: f64) -> Result<FramedRiemann> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidArgument(format!("kappa must be positive, got {kappa}")));
    }
    Ok(r.scaled(1.0 / kappa))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlowupEntry {
    pub index: usize,
    pub lambda: f64,
}

/// Parabolic rescalings `g_i(t) = λ_i⁻¹ g(T + λ_i t)` sampled at one
/// negative time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupSequence {
    geometry: ModelGeometry,
    entries: Vec<BlowupEntry>,
    t: f64,
    singular_time: f64,
}

impl BlowupSequence {
    pub fn new(geometry: ModelGeometry, entries: Vec<BlowupEntry>, t: f64) -> Result<Self> {
        let big_t = singular_time(&geometry);
        if !big_t.is_finite() {
            return Err(Error::InfiniteSingularTime(geometry.name()));
        }
        if !(t < 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("blow-up time must be negative, got {t}")));
        }
        if entries.is_empty() {
            return Err(Error::InvalidArgument("empty blow-up sequence".into()));
        }
        for w in entries.windows(2) {
            if !(w[1].lambda < w[0].lambda) || w[1].index <= w[0].index {
                return Err(Error::InvalidArgument("scales must strictly decrease".into()));
            }
        }
        for e in &entries {
            let time = big_t + e.lambda * t;
            if !(e.lambda > 0.0) || !(0.0..big_t).contains(&time) {
                return Err(Error::Domain {
                    time,
                    singular_time: big_t,
                });
            }
        }
        Ok(Self {
            geometry,
            entries,
            t,
            singular_time: big_t,
        })
    }

    /// `λ_i = base^i` for `i ≤ count`, starting at the first `i ≥ 1` with
    /// `T + λ_i t ≥ 0`.
    pub fn geometric(geometry: ModelGeometry, base: f64, count: usize, t: f64) -> Result<Self> {
        if !(base > 0.0 && base < 1.0) {
            return Err(Error::InvalidArgument(format!("lambda base must lie in (0, 1), got {base}")));
        }
        let big_t = singular_time(&geometry);
        if !big_t.is_finite() {
            return Err(Error::InfiniteSingularTime(geometry.name()));
        }
        let entries: Vec<_> = (1..=count)
            .map(|i| BlowupEntry {
                index: i,
                lambda: base.powi(i as i32),
            })
            .filter(|e| big_t + e.lambda * t >= 0.0)
            .collect();
        if entries.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "no admissible index i <= {count}: T + base^i t < 0 throughout"
            )));
        }
        Self::new(geometry, entries, t)
    }

    pub fn geometry(&self) -> &ModelGeometry {
        &self.geometry
    }

    pub fn entries(&self) -> &[BlowupEntry] {
        &self.entries
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn singular_time(&self) -> f64 {
        self.singular_time
    }
}

/// `λ_i · riemann_at(T + λ_i t)`.
pub fn blowup_riemann(seq: &BlowupSequence, index: usize) -> Result<FramedRiemann> {
    let e = seq
        .entries
        .iter()
        .find(|e| e.index == index)
        .ok_or_else(|| Error::InvalidArgument(format!("index {index} is not in the sequence")))?;
    let r = riemann_at(&seq.geometry, seq.singular_time + e.lambda * seq.t)?;
    scale_metric(&r, 1.0 / e.lambda)
}

/// The `λ → 0` limit of [`blowup_riemann`]: factors that become singular at
/// `T` keep scale `−c t`, all others flatten out.
pub fn limit_riemann(seq: &BlowupSequence) -> FramedRiemann {
    let big_t = seq.singular_time;
    let scales: Vec<_> = seq
        .geometry
        .rates()
        .iter()
        .map(|&c| (c > 0.0 && (1.0 / c - big_t).abs() <= 1e-15 * big_t).then(|| -c * seq.t))
        .collect();
    riemann_from_scales(&seq.geometry, &scales)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceEntry {
    pub index: usize,
    pub lambda: f64,
    /// Unrescaled flow time `T + λ t`.
    pub time: f64,
    pub coeffs: CurveCoeffs,
    pub tag: CurveTag,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveSequenceReport {
    pub geometry: String,
    pub t: f64,
    pub singular_time: f64,
    pub entries: Vec<SequenceEntry>,
    pub limit: CurveCoeffs,
    pub limit_class: CurveClass,
    /// Every curve in the sequence and the limit vanish identically.
    pub degenerate: bool,
    /// Distances never increase by more than `tol`.
    pub monotone: bool,
    /// Monotone and the last distance is within `tol` of zero.
    pub converged: bool,
    pub tol: f64,
}

/// Normalised curve of every rescaled metric and its distance to the
/// normalised limit curve.
pub fn curve_sequence(seq: &BlowupSequence, tol: f64, mode: ExecMode) -> Result<CurveSequenceReport> {
    let limit_raw = curve_coeffs(&curvature_operator_blocks(&limit_riemann(seq)));
    let limit = projective_form(&limit_raw);
    let limit_class = classify(&limit_raw, CLASSIFY_TOL);
    let computed = map_indexed(seq.entries.len(), mode, |k| -> Result<SequenceEntry> {
        let e = seq.entries[k];
        let raw = curve_coeffs(&curvature_operator_blocks(&blowup_riemann(seq, e.index)?));
        let coeffs = projective_form(&raw);
        Ok(SequenceEntry {
            index: e.index,
            lambda: e.lambda,
            time: seq.singular_time + e.lambda * seq.t,
            distance: coeffs.distance(&limit),
            tag: classify(&raw, CLASSIFY_TOL).tag,
            coeffs,
        })
    });
    let entries = computed.into_iter().collect::<Result<Vec<_>>>()?;
    let degenerate = limit_class.tag == CurveTag::IdenticallyZero
        && entries.iter().all(|e| e.tag == CurveTag::IdenticallyZero);
    let monotone = entries.windows(2).all(|w| w[1].distance <= w[0].distance + tol);
    let converged = monotone && entries.last().is_some_and(|e| e.distance <= tol);
    Ok(CurveSequenceReport {
        geometry: seq.geometry.name(),
        t: seq.t,
        singular_time: seq.singular_time,
        entries,
        limit,
        limit_class,
        degenerate,
        monotone,
        converged,
        tol,
    })
}
