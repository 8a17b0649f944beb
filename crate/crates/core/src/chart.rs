//! Affine charts of P¹×P¹ and real-slice sampling of the curve.

use std::fmt;
use std::str::FromStr;

use crate::bivector::SpinorPoint;
use crate::curve::CurveCoeffs;
use crate::exec::{map_indexed, ExecMode};
use crate::{Error, Result, C64};

const ONE: C64 = C64::new(1.0, 0.0);

/// `p` puts the affine coordinate second (`[1, x]`), `m` first (`[x, 1]`);
/// the first letter refers to `a`, the second to `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chart {
    PP,
    PM,
    MP,
    MM,
}

impl Chart {
    pub const ALL: [Chart; 4] = [Chart::PP, Chart::PM, Chart::MP, Chart::MM];

    pub fn as_str(&self) -> &'static str {
        match self {
            Chart::PP => "pp",
            Chart::PM => "pm",
            Chart::MP => "mp",
            Chart::MM => "mm",
        }
    }

    fn a_second(&self) -> bool {
        matches!(self, Chart::PP | Chart::PM)
    }

    fn b_second(&self) -> bool {
        matches!(self, Chart::PP | Chart::MP)
    }

    pub fn spinors(&self, x: C64, y: C64) -> (SpinorPoint, SpinorPoint) {
        let a = if self.a_second() {
            SpinorPoint { c1: ONE, c2: x }
        } else {
            SpinorPoint { c1: x, c2: ONE }
        };
        let b = if self.b_second() {
            SpinorPoint { c1: ONE, c2: y }
        } else {
            SpinorPoint { c1: y, c2: ONE }
        };
        (a, b)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pp" => Ok(Chart::PP),
            "pm" => Ok(Chart::PM),
            "mp" => Ok(Chart::MP),
            "mm" => Ok(Chart::MM),
            other => Err(Error::InvalidArgument(format!(
                "unknown chart {other:?}, expected pp, pm, mp or mm"
            ))),
        }
    }
}

/// The curve restricted to a chart: `q[i][j]` multiplies `x^i y^j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPolynomial {
    pub chart: Chart,
    pub q: [[C64; 5]; 5],
}

impl ChartPolynomial {
    pub fn new(coeffs: &CurveCoeffs, chart: Chart) -> Self {
        let mut q = [[C64::new(0.0, 0.0); 5]; 5];
        for (i, row) in q.iter_mut().enumerate() {
            let m = if chart.a_second() { 4 - i } else { i };
            for (j, v) in row.iter_mut().enumerate() {
                let n = if chart.b_second() { 4 - j } else { j };
                *v = coeffs.c[m][n];
            }
        }
        Self { chart, q }
    }

    pub fn eval(&self, x: C64, y: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in (0..5).rev() {
            let mut row = C64::new(0.0, 0.0);
            for j in (0..5).rev() {
                row = row * y + self.q[i][j];
            }
            acc = acc * x + row;
        }
        acc
    }

    /// Coefficients of `(u, v) ↦ Δ(x + u, y + v)`.
    pub fn shifted(&self, x: C64, y: C64) -> [[C64; 5]; 5] {
        const BINOM: [[f64; 5]; 5] = [
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0, 0.0],
            [1.0, 2.0, 1.0, 0.0, 0.0],
            [1.0, 3.0, 3.0, 1.0, 0.0],
            [1.0, 4.0, 6.0, 4.0, 1.0],
        ];
        let (xp, yp) = (powers5(x), powers5(y));
        let mut out = [[C64::new(0.0, 0.0); 5]; 5];
        for (p, row) in out.iter_mut().enumerate() {
            for (r, v) in row.iter_mut().enumerate() {
                for i in p..5 {
                    for j in r..5 {
                        *v += self.q[i][j] * xp[i - p] * yp[j - r] * (BINOM[i][p] * BINOM[j][r]);
                    }
                }
            }
        }
        out
    }

    /// `Σ |q_ij| |x|^i |y|^j`, the size of `Δ(x, y)` without cancellation.
    pub fn abs_scale(&self, x: C64, y: C64) -> f64 {
        let (xp, yp) = (powers5(C64::new(x.norm(), 0.0)), powers5(C64::new(y.norm(), 0.0)));
        let mut s = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                s += self.q[i][j].norm() * xp[i].re * yp[j].re;
            }
        }
        s
    }
}

fn powers5(z: C64) -> [C64; 5] {
    let mut p = [ONE; 5];
    for k in 1..5 {
        p[k] = p[k - 1] * z;
    }
    p
}

/// One sample of the real slice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlicePoint {
    pub x: f64,
    pub y: f64,
    pub log10_abs_delta: f64,
}

/// `log10 |Δ|` on the real `n × n` grid over `[-3, 3]²`, `x`-major.
pub fn real_slice(coeffs: &CurveCoeffs, chart: Chart, n: usize, mode: ExecMode) -> Result<Vec<SlicePoint>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grid size must be at least 2, got {n}")));
    }
    if coeffs.max_abs() == 0.0 {
        return Err(Error::DegenerateInput("curve coefficients vanish identically".into()));
    }
    let poly = ChartPolynomial::new(coeffs, chart);
    let node = |k: usize| -3.0 + 6.0 * k as f64 / (n - 1) as f64;
    Ok(map_indexed(n * n, mode, |idx| {
        let (x, y) = (node(idx / n), node(idx % n));
        let delta = poly.eval(C64::new(x, 0.0), C64::new(y, 0.0));
        SlicePoint {
            x,
            y,
            log10_abs_delta: delta.norm().log10(),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::evaluate;
    use crate::sampling;
    use crate::tensor::curvature_operator_blocks;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chart_polynomial_matches_bihomogeneous_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let blocks = curvature_operator_blocks(&sampling::random_curvature(&mut rng));
        let k = crate::curve::curve_coeffs(&blocks);
        for chart in Chart::ALL {
            let poly = ChartPolynomial::new(&k, chart);
            for _ in 0..20 {
                let (x, y) = (sampling::random_complex(&mut rng), sampling::random_complex(&mut rng));
                let (a, b) = chart.spinors(x, y);
                let direct = evaluate(&k, &a, &b);
                assert!((poly.eval(x, y) - direct).norm() <= 1e-12 * (1.0 + poly.abs_scale(x, y)));
                let shifted = poly.shifted(x, y);
                assert!((shifted[0][0] - direct).norm() <= 1e-12 * (1.0 + poly.abs_scale(x, y)));
            }
        }
    }

    #[test]
    fn chart_names_round_trip() {
        for chart in Chart::ALL {
            assert_eq!(chart.as_str().parse::<Chart>().unwrap(), chart);
        }
        assert!("px".parse::<Chart>().is_err());
    }

    #[test]
    fn real_slice_is_x_major_and_rejects_zero() {
        let mut c = [[C64::new(0.0, 0.0); 5]; 5];
        c[4][4] = ONE;
        let k = CurveCoeffs::from_matrix(c);
        let pts = real_slice(&k, Chart::PP, 3, ExecMode::Sequential).unwrap();
        let xy: Vec<_> = pts.iter().map(|p| (p.x, p.y)).collect();
        assert_eq!(xy[..4], [(-3.0, -3.0), (-3.0, 0.0), (-3.0, 3.0), (0.0, -3.0)]);
        // c[4][4] is (a¹b¹)⁴, constant 1 in the pp chart
        assert!(pts.iter().all(|p| p.log10_abs_delta == 0.0));
        let zero = CurveCoeffs::from_matrix([[C64::new(0.0, 0.0); 5]; 5]);
        assert!(matches!(real_slice(&zero, Chart::PP, 3, ExecMode::Sequential), Err(Error::DegenerateInput(_))));
        assert!(real_slice(&k, Chart::PP, 1, ExecMode::Sequential).is_err());
    }
}
