//! The branching curve as a bidegree (4,4) form on P¹×P¹.
//!
//! With `T₊ = T₊(a)`, `T₋ = T₋(b)` the ruling triples, the tangent-line
//! pencil through `t₊ ∩ t₋` meets the curvature quadric where
//!
//! ```text
//! P(a) s² + 2 M(a,b) s + Q(b) = 0,
//! P = T₊ᵀ W₊ T₊,  M = T₊ᵀ B T₋,  Q = T₋ᵀ W₋ T₋,
//! ```
//!
//! and the branching curve is the quarter discriminant `M² − P·Q = 0`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bivector::{
    qform_lambda2g, qform_r, qform_v, t_minus_triple, t_plus_triple, BivectorCoords, SpinorPoint,
};
use crate::exec::{map_indexed, ExecMode};
use crate::poly::{powers, CompensatedSum, Quadratic};
use crate::sampling::random_spinor;
use crate::tensor::{identity3, max_abs3, trace3, CurvatureBlocks, FramedRiemann, Mat3};
use crate::C64;

/// Tolerance for pattern matching of normalised coefficients.
pub const CLASSIFY_TOL: f64 = 1e-9;

const ZERO: C64 = C64::new(0.0, 0.0);

fn bilinear(m: &Mat3, x: &[C64; 3], y: &[C64; 3]) -> C64 {
    let mut s = ZERO;
    for i in 0..3 {
        for j in 0..3 {
            s += x[i] * y[j] * m[i][j];
        }
    }
    s
}

/// Which structural degeneracies the blocks show; used to explain an
/// identically vanishing curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockProfile {
    pub w_plus_scalar: bool,
    pub w_minus_scalar: bool,
    pub w_plus_zero: bool,
    pub w_minus_zero: bool,
    pub b_zero: bool,
}

impl BlockProfile {
    pub fn of(blocks: &CurvatureBlocks) -> Self {
        let reference = max_abs3(&blocks.a)
            .max(max_abs3(&blocks.b))
            .max(max_abs3(&blocks.c));
        let tol = CLASSIFY_TOL * reference;
        let scalar_part = |m: &Mat3| {
            let mut d = *m;
            let t = trace3(m) / 3.0;
            for (i, row) in d.iter_mut().enumerate() {
                row[i] -= t;
            }
            max_abs3(&d)
        };
        Self {
            w_plus_scalar: scalar_part(&blocks.w_plus) <= tol,
            w_minus_scalar: scalar_part(&blocks.w_minus) <= tol,
            w_plus_zero: max_abs3(&blocks.w_plus) <= tol,
            w_minus_zero: max_abs3(&blocks.w_minus) <= tol,
            b_zero: max_abs3(&blocks.b) <= tol,
        }
    }
}

/// `c[m][n]` multiplies `(a¹)^m (a²)^(4−m) (b¹)^n (b²)^(4−n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveCoeffs {
    pub c: [[C64; 5]; 5],
    /// Natural size of the coefficients (square of the largest block entry);
    /// the zero test in [`classify`] is relative to it.
    pub reference: f64,
    pub profile: Option<BlockProfile>,
}

impl CurveCoeffs {
    /// Raw coefficient matrix; zero testing becomes absolute.
    pub fn from_matrix(c: [[C64; 5]; 5]) -> Self {
        Self {
            c,
            reference: 1.0,
            profile: None,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().flatten().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Divide by the entry of largest modulus (first in row-major order on
    /// ties). The zero curve is returned unchanged.
    pub fn normalized(&self) -> Self {
        let max = self.max_abs();
        if max == 0.0 {
            return *self;
        }
        let pivot = *self
            .c
            .iter()
            .flatten()
            .find(|z| z.norm() >= max * (1.0 - 1e-9))
            .expect("max attained");
        Self {
            c: self.c.map(|row| row.map(|z| z / pivot)),
            reference: 1.0,
            profile: self.profile,
        }
    }

    /// Largest entrywise modulus of the difference.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut d = 0.0_f64;
        for m in 0..5 {
            for n in 0..5 {
                d = d.max((self.c[m][n] - other.c[m][n]).norm());
            }
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut c = [[ZERO; 5]; 5];
        for m in 0..5 {
            for n in 0..5 {
                c[n][m] = self.c[m][n];
            }
        }
        Self { c, ..*self }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            c: self.c.map(|row| row.map(|z| z * s)),
            ..*self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveTag {
    IdenticallyZero,
    QuadrupleDiagonal,
    DoubleRectangle,
    Other,
}

impl CurveTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveTag::IdenticallyZero => "IDENTICALLY_ZERO",
            CurveTag::QuadrupleDiagonal => "QUADRUPLE_DIAGONAL",
            CurveTag::DoubleRectangle => "DOUBLE_RECTANGLE",
            CurveTag::Other => "OTHER",
        }
    }
}

impl fmt::Display for CurveTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveClass {
    pub tag: CurveTag,
    pub detail: String,
}

/// `c2 s² + c1 s + c0` with `s = λ/μ` the pencil parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilQuadratic {
    pub c2: C64,
    pub c1: C64,
    pub c0: C64,
}

impl PencilQuadratic {
    pub fn discriminant(&self) -> C64 {
        self.c1 * self.c1 - self.c2 * self.c0 * 4.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionCase {
    TwoPoints,
    Tangent,
    LineContained,
}

pub fn pencil_quadratic(blocks: &CurvatureBlocks, a: &SpinorPoint, b: &SpinorPoint) -> PencilQuadratic {
    let (tp, tm) = (t_plus_triple(a), t_minus_triple(b));
    PencilQuadratic {
        c2: bilinear(&blocks.w_plus, &tp, &tp),
        c1: bilinear(&blocks.b, &tp, &tm) * 2.0,
        c0: bilinear(&blocks.w_minus, &tm, &tm),
    }
}

pub fn intersection_case(q: &PencilQuadratic, tol: f64) -> IntersectionCase {
    if q.c2.norm() <= tol && q.c1.norm() <= tol && q.c0.norm() <= tol {
        return IntersectionCase::LineContained;
    }
    let scale = q
        .c1
        .norm_sqr()
        .max((q.c2 * q.c0 * 4.0).norm())
        .max(f64::MIN_POSITIVE);
    if q.discriminant().norm() <= tol * scale {
        IntersectionCase::Tangent
    } else {
        IntersectionCase::TwoPoints
    }
}

/// `(M, P, Q)` at a point, evaluated numerically without any expansion.
pub fn discriminant_terms(blocks: &CurvatureBlocks, a: &SpinorPoint, b: &SpinorPoint) -> (C64, C64, C64) {
    let (tp, tm) = (t_plus_triple(a), t_minus_triple(b));
    (
        bilinear(&blocks.b, &tp, &tm),
        bilinear(&blocks.w_plus, &tp, &tp),
        bilinear(&blocks.w_minus, &tm, &tm),
    )
}

/// Size of `M² − P·Q` before any cancellation: the same expression with
/// every entry replaced by its modulus and the difference by a sum.
pub fn term_scale(blocks: &CurvatureBlocks, a: &SpinorPoint, b: &SpinorPoint) -> f64 {
    let (tp, tm) = (t_plus_triple(a), t_minus_triple(b));
    let abs_form = |m: &Mat3, x: &[C64; 3], y: &[C64; 3]| {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += x[i].norm() * y[j].norm() * m[i][j].abs();
            }
        }
        s
    };
    let m = abs_form(&blocks.b, &tp, &tm);
    m * m + abs_form(&blocks.w_plus, &tp, &tp) * abs_form(&blocks.w_minus, &tm, &tm)
}

/// `M² − P·Q` evaluated directly.
pub fn curve_value_direct(blocks: &CurvatureBlocks, a: &SpinorPoint, b: &SpinorPoint) -> C64 {
    let (m, p, q) = discriminant_terms(blocks, a, b);
    m * m - p * q
}

// Coefficients of the ruling triples as binary quadratics, by power of the
// first coordinate: T₊ = [2i a¹a², i(a²² − a¹²), −a¹² − a²²].
fn t_plus_forms() -> [Quadratic; 3] {
    let i = C64::new(0.0, 1.0);
    [
        [ZERO, i * 2.0, ZERO],
        [i, ZERO, -i],
        [C64::new(-1.0, 0.0), ZERO, C64::new(-1.0, 0.0)],
    ]
}

fn t_minus_forms() -> [Quadratic; 3] {
    let i = C64::new(0.0, 1.0);
    [
        [ZERO, i * 2.0, ZERO],
        [i, ZERO, -i],
        [C64::new(1.0, 0.0), ZERO, C64::new(1.0, 0.0)],
    ]
}

/// Quartic `Tᵀ W T` in one spinor, by power of the first coordinate.
fn quartic(w: &Mat3, t: &[Quadratic; 3]) -> [C64; 5] {
    let mut acc = [CompensatedSum::default(); 5];
    for i in 0..3 {
        for j in 0..3 {
            if w[i][j] == 0.0 {
                continue;
            }
            for p in 0..3 {
                for q in 0..3 {
                    acc[p + q].add(t[i][p] * t[j][q] * w[i][j]);
                }
            }
        }
    }
    acc.map(|s| s.value())
}

/// Exact expansion of `M² − P·Q` into the 5×5 coefficient matrix.
pub fn curve_coeffs(blocks: &CurvatureBlocks) -> CurveCoeffs {
    let (tp, tm) = (t_plus_forms(), t_minus_forms());

    // M[p][q] multiplies (a¹)^p (a²)^(2−p) (b¹)^q (b²)^(2−q)
    let mut m_acc = [[CompensatedSum::default(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let bij = blocks.b[i][j];
            if bij == 0.0 {
                continue;
            }
            for p in 0..3 {
                for q in 0..3 {
                    m_acc[p][q].add(tp[i][p] * tm[j][q] * bij);
                }
            }
        }
    }
    let m = m_acc.map(|row| row.map(|s| s.value()));
    let p_form = quartic(&blocks.w_plus, &tp);
    let q_form = quartic(&blocks.w_minus, &tm);

    let mut acc = [[CompensatedSum::default(); 5]; 5];
    for p1 in 0..3 {
        for q1 in 0..3 {
            for p2 in 0..3 {
                for q2 in 0..3 {
                    let (row, col) = (p1 + p2, q1 + q2);
                    debug_assert!(row <= 4 && col <= 4);
                    acc[row][col].add(m[p1][q1] * m[p2][q2]);
                }
            }
        }
    }
    for (row, pv) in p_form.iter().enumerate() {
        for (col, qv) in q_form.iter().enumerate() {
            acc[row][col].add(-(pv * qv));
        }
    }
    let magnitude = blocks.magnitude();
    CurveCoeffs {
        c: acc.map(|row| row.map(|s| s.value())),
        reference: magnitude * magnitude,
        profile: Some(BlockProfile::of(blocks)),
    }
}

/// `Σ c[m][n] (a¹)^m (a²)^(4−m) (b¹)^n (b²)^(4−n)`
pub fn evaluate(coeffs: &CurveCoeffs, a: &SpinorPoint, b: &SpinorPoint) -> C64 {
    let (a1, a2, b1, b2) = (powers(a.c1, 4), powers(a.c2, 4), powers(b.c1, 4), powers(b.c2, 4));
    let mut s = CompensatedSum::default();
    for m in 0..5 {
        for n in 0..5 {
            s.add(coeffs.c[m][n] * a1[m] * a2[4 - m] * b1[n] * b2[4 - n]);
        }
    }
    s.value()
}

/// Outcome of comparing the expanded coefficients with direct evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub samples: usize,
    pub tol: f64,
    pub max_relative_error: f64,
    pub worst: Option<(SpinorPoint, SpinorPoint)>,
    pub passed: bool,
}

/// Compare `evaluate(coeffs, a, b)` against `M² − P·Q` computed directly at
/// `samples` random points. The error is measured relative to
/// [`term_scale`].
pub fn oracle_check(
    blocks: &CurvatureBlocks,
    coeffs: &CurveCoeffs,
    samples: usize,
    tol: f64,
    seed: u64,
    mode: ExecMode,
) -> OracleReport {
    let errors = map_indexed(samples, mode, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let (a, b) = (random_spinor(&mut rng), random_spinor(&mut rng));
        let direct = curve_value_direct(blocks, &a, &b);
        let expanded = evaluate(coeffs, &a, &b);
        let denom = term_scale(blocks, &a, &b).max(f64::MIN_POSITIVE);
        ((expanded - direct).norm() / denom, a, b)
    });
    let mut report = OracleReport {
        samples,
        tol,
        max_relative_error: 0.0,
        worst: None,
        passed: true,
    };
    for (err, a, b) in errors {
        if err > report.max_relative_error || err.is_nan() || report.worst.is_none() {
            report.max_relative_error = if err.is_nan() { f64::INFINITY } else { err };
            report.worst = Some((a, b));
        }
    }
    report.passed = report.max_relative_error <= tol;
    report
}

fn quadruple_diagonal_pattern() -> [[C64; 5]; 5] {
    // (a¹b² − a²b¹)⁴ normalised by its middle coefficient 6
    let mut p = [[ZERO; 5]; 5];
    let binom = [1.0, 4.0, 6.0, 4.0, 1.0];
    for m in 0..5 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        p[m][4 - m] = C64::new(sign * binom[m] / 6.0, 0.0);
    }
    p
}

fn double_rectangle_pattern() -> [[C64; 5]; 5] {
    let mut p = [[ZERO; 5]; 5];
    p[2][2] = C64::new(1.0, 0.0);
    p
}

fn pattern_residual(c: &[[C64; 5]; 5], pattern: &[[C64; 5]; 5]) -> f64 {
    let mut r = 0.0_f64;
    for m in 0..5 {
        for n in 0..5 {
            r = r.max((c[m][n] - pattern[m][n]).norm());
        }
    }
    r
}

fn zero_detail(profile: Option<BlockProfile>) -> String {
    let Some(p) = profile else {
        return "all coefficients vanish".to_string();
    };
    let flags = format!(
        "W+ ∝ Id: {}, W- ∝ Id: {}, B = 0: {}, W+ = 0: {}, W- = 0: {}",
        p.w_plus_scalar, p.w_minus_scalar, p.b_zero, p.w_plus_zero, p.w_minus_zero
    );
    if p.b_zero && p.w_plus_zero && p.w_minus_zero {
        format!("branching does not exist: all curve blocks vanish ({flags})")
    } else if p.b_zero && (p.w_plus_scalar || p.w_minus_scalar) {
        format!("branch locus is the whole quadric ({flags})")
    } else {
        format!("M^2 = PQ cancellation ({flags})")
    }
}

/// Normalised coefficients, with curves that are zero up to rounding (per
/// [`classify`] at [`CLASSIFY_TOL`]) replaced by exact zeros.
pub fn projective_form(coeffs: &CurveCoeffs) -> CurveCoeffs {
    if coeffs.max_abs() <= CLASSIFY_TOL * coeffs.reference {
        CurveCoeffs {
            c: [[ZERO; 5]; 5],
            reference: 1.0,
            profile: coeffs.profile,
        }
    } else {
        coeffs.normalized()
    }
}

/// Frame-fixed classification of a curve.
pub fn classify(coeffs: &CurveCoeffs, tol: f64) -> CurveClass {
    if coeffs.max_abs() <= tol * coeffs.reference {
        return CurveClass {
            tag: CurveTag::IdenticallyZero,
            detail: zero_detail(coeffs.profile),
        };
    }
    let n = coeffs.normalized().c;
    let quad = pattern_residual(&n, &quadruple_diagonal_pattern());
    if quad <= tol {
        return CurveClass {
            tag: CurveTag::QuadrupleDiagonal,
            detail: format!("(a1 b2 - a2 b1)^4, residual {quad:e}"),
        };
    }
    let rect = pattern_residual(&n, &double_rectangle_pattern());
    if rect <= tol {
        return CurveClass {
            tag: CurveTag::DoubleRectangle,
            detail: format!("(a1 a2 b1 b2)^2, residual {rect:e}"),
        };
    }
    CurveClass {
        tag: CurveTag::Other,
        detail: format!(
            "no frame-fixed pattern (quadruple-diagonal residual {quad:e}, double-rectangle residual {rect:e})"
        ),
    }
}

/// Pointwise membership in the intersection of the three quadrics.
pub fn k3_membership(r: &FramedRiemann, u: &BivectorCoords, tol: f64) -> bool {
    let u = u.normalized();
    qform_v(&u, 1.0).norm() <= tol
        && qform_lambda2g(&u, &u).norm() <= tol
        && qform_r(r, &u, &u).norm() <= tol
}

/// Blocks whose Weyl parts are `κ·Id` (not traceless); only meaningful for
/// exercising the conic identity `T₊ᵀ T₊ = 0`.
pub fn scalar_weyl_blocks(kappa_plus: f64, kappa_minus: f64) -> CurvatureBlocks {
    let s = |k: f64| identity3().map(|row| row.map(|v| v * k));
    CurvatureBlocks {
        a: s(kappa_plus),
        b: [[0.0; 3]; 3],
        c: s(kappa_minus),
        scal: 0.0,
        w_plus: s(kappa_plus),
        w_minus: s(kappa_minus),
    }
}
