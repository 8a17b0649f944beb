//! Numeric search for singular points of the branching curve.
//!
//! Seeds on a grid in each affine chart are refined by damped Newton on
//! `∇Δ = 0`; a seed is kept when `Δ` and `∇Δ` vanish relative to their
//! cancellation-free size. This is a diagnostic, not a certified solver.

use crate::bivector::SpinorPoint;
use crate::chart::{Chart, ChartPolynomial};
use crate::curve::{classify, CurveCoeffs, CurveTag, CLASSIFY_TOL};
use crate::exec::{map_indexed, ExecMode};
use crate::{Error, Result, C64};

const MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularCandidate {
    pub chart: Chart,
    pub x: C64,
    pub y: C64,
    pub a: SpinorPoint,
    pub b: SpinorPoint,
    /// `|Δ|` relative to its cancellation-free size.
    pub residual: f64,
    /// `|∇Δ|` relative to its cancellation-free size.
    pub gradient: f64,
    /// Estimated vanishing order of `Δ` at the point.
    pub multiplicity: usize,
}

struct Local {
    value: C64,
    grad: [C64; 2],
    hess: [[C64; 2]; 2],
    value_scale: f64,
    grad_scale: f64,
}

fn local(poly: &ChartPolynomial, x: C64, y: C64) -> Local {
    let s = poly.shifted(x, y);
    let abs = ChartPolynomial {
        chart: poly.chart,
        q: poly.q.map(|row| row.map(|z| C64::new(z.norm(), 0.0))),
    };
    let abs_shift = abs.shifted(C64::new(x.norm(), 0.0), C64::new(y.norm(), 0.0));
    Local {
        value: s[0][0],
        grad: [s[1][0], s[0][1]],
        hess: [[s[2][0] * 2.0, s[1][1]], [s[1][1], s[0][2] * 2.0]],
        value_scale: abs_shift[0][0].re.max(f64::MIN_POSITIVE),
        grad_scale: abs_shift[1][0].re.max(abs_shift[0][1].re).max(f64::MIN_POSITIVE),
    }
}

fn grad_norm(l: &Local) -> f64 {
    (l.grad[0].norm_sqr() + l.grad[1].norm_sqr()).sqrt()
}

/// Levenberg step for `H δ = −g` with damping relative to `‖H‖²`.
fn damped_step(l: &Local) -> Option<[C64; 2]> {
    let h = l.hess;
    let hn = h.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    if hn == 0.0 || !hn.is_finite() {
        return None;
    }
    let mu = 1e-6 * hn;
    // (Hᴴ H + μ I) δ = −Hᴴ g
    let hh = |i: usize, j: usize| h[0][i].conj() * h[0][j] + h[1][i].conj() * h[1][j];
    let m = [
        [hh(0, 0) + mu, hh(0, 1)],
        [hh(1, 0), hh(1, 1) + mu],
    ];
    let rhs = [
        -(h[0][0].conj() * l.grad[0] + h[1][0].conj() * l.grad[1]),
        -(h[0][1].conj() * l.grad[0] + h[1][1].conj() * l.grad[1]),
    ];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.norm() == 0.0 {
        return None;
    }
    Some([
        (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ])
}

fn refine(poly: &ChartPolynomial, mut x: C64, mut y: C64) -> (C64, C64) {
    let mut cur = local(poly, x, y);
    for _ in 0..MAX_ITER {
        let Some(step) = damped_step(&cur) else { break };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let (nx, ny) = (x + step[0] * t, y + step[1] * t);
            let next = local(poly, nx, ny);
            if grad_norm(&next) < grad_norm(&cur) {
                x = nx;
                y = ny;
                cur = next;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (x, y)
}

fn multiplicity(poly: &ChartPolynomial, x: C64, y: C64, tol: f64) -> usize {
    let s = poly.shifted(x, y);
    let scale = poly
        .q
        .iter()
        .flatten()
        .fold(0.0_f64, |m, z| m.max(z.norm()))
        * (1.0 + x.norm()).powi(4)
        * (1.0 + y.norm()).powi(4);
    let threshold = tol.sqrt() * scale;
    for order in 0..=8 {
        let nonzero = (0..=order)
            .filter(|&p| p < 5 && order - p < 5)
            .any(|p| s[p][order - p].norm() > threshold);
        if nonzero {
            return order;
        }
    }
    9
}

fn seeds(grid_n: usize) -> Vec<(C64, C64)> {
    let node = |j: usize, shift: C64| {
        let r = -2.0 + 4.0 * j as f64 / (grid_n - 1) as f64;
        let base = if j % 2 == 0 { C64::new(r, 0.0) } else { C64::new(0.0, r) };
        base + shift
    };
    let mut out = Vec::with_capacity(grid_n * grid_n);
    for i in 0..grid_n {
        for j in 0..grid_n {
            out.push((node(i, C64::new(0.013, 0.007)), node(j, C64::new(-0.011, 0.017))));
        }
    }
    out
}

/// Candidate singular points of the curve, sorted by chart and coordinates.
pub fn singular_sample(
    coeffs: &CurveCoeffs,
    grid_n: usize,
    tol: f64,
    mode: ExecMode,
) -> Result<Vec<SingularCandidate>> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!("grid size must be at least 2, got {grid_n}")));
    }
    if classify(coeffs, CLASSIFY_TOL).tag == CurveTag::IdenticallyZero {
        return Err(Error::DegenerateInput("curve coefficients vanish identically".into()));
    }
    let seeds = seeds(grid_n);
    let per_chart = seeds.len();
    let found = map_indexed(per_chart * 4, mode, |k| {
        let chart = Chart::ALL[k / per_chart];
        let poly = ChartPolynomial::new(coeffs, chart);
        let (x0, y0) = seeds[k % per_chart];
        let (x, y) = refine(&poly, x0, y0);
        let l = local(&poly, x, y);
        let residual = l.value.norm() / l.value_scale;
        let gradient = grad_norm(&l) / l.grad_scale;
        if residual <= tol && gradient <= tol && x.is_finite() && y.is_finite() {
            let (a, b) = chart.spinors(x, y);
            Some(SingularCandidate {
                chart,
                x,
                y,
                a,
                b,
                residual,
                gradient,
                multiplicity: multiplicity(&poly, x, y, tol),
            })
        } else {
            None
        }
    });
    let mut out: Vec<SingularCandidate> = found.into_iter().flatten().collect();
    out.sort_by(|p, q| {
        p.chart
            .cmp(&q.chart)
            .then(p.x.re.total_cmp(&q.x.re))
            .then(p.x.im.total_cmp(&q.x.im))
            .then(p.y.re.total_cmp(&q.y.re))
            .then(p.y.im.total_cmp(&q.y.im))
    });
    out.dedup_by(|p, q| {
        p.chart == q.chart
            && (p.x - q.x).norm() + (p.y - q.y).norm() <= 1e-6 * (1.0 + q.x.norm() + q.y.norm())
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::curve_coeffs;
    use crate::tensor::{curvature_operator_blocks, FramedRiemann};

    fn coeffs_of(pairs: &[(usize, usize)]) -> CurveCoeffs {
        let list: Vec<_> = pairs.iter().map(|&p| (p, 1.0)).collect();
        curve_coeffs(&curvature_operator_blocks(&FramedRiemann::from_sectional(&list)))
    }

    #[test]
    fn quadruple_diagonal_is_singular_along_the_diagonal() {
        let k = coeffs_of(&[(0, 1), (0, 2), (1, 2)]);
        let pts = singular_sample(&k, 6, 1e-10, ExecMode::default()).unwrap();
        assert!(pts.len() > 10, "{}", pts.len());
        for p in &pts {
            // a ∝ b
            let minor = p.a.c1 * p.b.c2 - p.a.c2 * p.b.c1;
            let size = (p.a.c1.norm() + p.a.c2.norm()) * (p.b.c1.norm() + p.b.c2.norm());
            assert!(minor.norm() <= 1e-3 * size, "{p:?}");
            assert!(p.multiplicity > 1);
        }
    }

    #[test]
    fn double_rectangle_candidates_are_on_the_rectangle() {
        let k = coeffs_of(&[(0, 1), (2, 3)]);
        let pts = singular_sample(&k, 5, 1e-10, ExecMode::Sequential).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            let v = p.a.c1 * p.a.c2 * p.b.c1 * p.b.c2;
            assert!(v.norm() <= 1e-3, "{p:?}");
            assert!(p.multiplicity >= 2);
        }
    }

    #[test]
    fn modes_give_identical_ordered_output() {
        let k = coeffs_of(&[(0, 1), (0, 2), (1, 2)]);
        let seq = singular_sample(&k, 4, 1e-10, ExecMode::Sequential).unwrap();
        let par = singular_sample(&k, 4, 1e-10, ExecMode::Parallel).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn zero_curve_is_refused() {
        let k = coeffs_of(&[(0, 1)]);
        assert!(matches!(singular_sample(&k, 4, 1e-10, ExecMode::Sequential), Err(Error::DegenerateInput(_))));
        assert!(singular_sample(&coeffs_of(&[(0, 1), (2, 3)]), 1, 1e-10, ExecMode::Sequential).is_err());
    }
}
