//! Coordinates on `Λ²(T_xM ⊗ C)`.
//!
//! Two coordinate systems are used for bivectors:
//!
//! * `Wedge`: `[u12, u13, u14, u23, u24, u34]` in the frame `e_i ∧ e_j`.
//! * `SelfDual`: `[u1..u6] = [u12+u34, u13-u24, u14+u23, u12-u34, u13+u24, u14-u23]`.
//!   These are `√2` times the coefficients in the orthonormal basis
//!   `f_i^± = (e∧e ± e∧e)/√2`; [`BivectorCoords::from_orthonormal`] and
//!   [`BivectorCoords::orthonormal_coeffs`] convert to and from those.
//!
//! All quadratic forms are complex bilinear; nothing is conjugated.

use crate::tensor::{FramedRiemann, PAIRS};
use crate::{Error, Result, C64};

const I: C64 = C64::new(0.0, 1.0);

/// Point of P¹ in homogeneous coordinates `[c1, c2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinorPoint {
    pub c1: C64,
    pub c2: C64,
}

impl SpinorPoint {
    pub fn new(c1: C64, c2: C64) -> Result<Self> {
        if c1 == C64::new(0.0, 0.0) && c2 == C64::new(0.0, 0.0) {
            return Err(Error::ZeroSpinor);
        }
        Ok(Self { c1, c2 })
    }

    pub fn real(c1: f64, c2: f64) -> Result<Self> {
        Self::new(C64::new(c1, 0.0), C64::new(c2, 0.0))
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            c1: self.c1 * s,
            c2: self.c2 * s,
        }
    }
}

/// Vector of `T_xM ⊗ C` in the frame `{e_i}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector4C(pub [C64; 4]);

impl Vector4C {
    /// `Σ (w^i)²`, the metric quadric in an orthonormal frame.
    pub fn metric_quadric(&self) -> C64 {
        self.0.iter().map(|w| w * w).sum()
    }

    pub fn basis(i: usize) -> Self {
        let mut w = [C64::new(0.0, 0.0); 4];
        w[i] = C64::new(1.0, 0.0);
        Self(w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Wedge,
    SelfDual,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BivectorCoords {
    pub u: [C64; 6],
    pub basis: Basis,
}

impl BivectorCoords {
    pub fn wedge(u: [C64; 6]) -> Self {
        Self {
            u,
            basis: Basis::Wedge,
        }
    }

    pub fn self_dual(u: [C64; 6]) -> Self {
        Self {
            u,
            basis: Basis::SelfDual,
        }
    }

    pub fn wedge_real(u: [f64; 6]) -> Self {
        Self::wedge(u.map(|x| C64::new(x, 0.0)))
    }

    pub fn to_sd_basis(&self) -> Self {
        match self.basis {
            Basis::SelfDual => *self,
            Basis::Wedge => {
                let [u12, u13, u14, u23, u24, u34] = self.u;
                Self::self_dual([
                    u12 + u34,
                    u13 - u24,
                    u14 + u23,
                    u12 - u34,
                    u13 + u24,
                    u14 - u23,
                ])
            }
        }
    }

    pub fn from_sd_basis(&self) -> Self {
        match self.basis {
            Basis::Wedge => *self,
            Basis::SelfDual => {
                let [u1, u2, u3, u4, u5, u6] = self.u;
                Self::wedge([
                    (u1 + u4) * 0.5,
                    (u2 + u5) * 0.5,
                    (u3 + u6) * 0.5,
                    (u3 - u6) * 0.5,
                    (u5 - u2) * 0.5,
                    (u1 - u4) * 0.5,
                ])
            }
        }
    }

    /// Wedge coordinates of `Σ x_i f_i^+ + Σ y_i f_i^-`.
    pub fn from_orthonormal(plus: [C64; 3], minus: [C64; 3]) -> Self {
        let s = std::f64::consts::SQRT_2;
        Self::self_dual([
            plus[0] * s,
            plus[1] * s,
            plus[2] * s,
            minus[0] * s,
            minus[1] * s,
            minus[2] * s,
        ])
        .from_sd_basis()
    }

    /// Coefficients in the orthonormal basis `(f_i^+, f_i^-)`.
    pub fn orthonormal_coeffs(&self) -> ([C64; 3], [C64; 3]) {
        let sd = self.to_sd_basis().u;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        (
            [sd[0] * h, sd[1] * h, sd[2] * h],
            [sd[3] * h, sd[4] * h, sd[5] * h],
        )
    }

    pub fn max_modulus(&self) -> f64 {
        self.u.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Coordinates divided by the one of largest modulus.
    pub fn normalized(&self) -> Self {
        Self {
            u: normalize_projective(&self.u),
            basis: self.basis,
        }
    }
}

/// Divide by the coordinate of largest modulus (first one on ties).
/// A zero vector is returned unchanged.
pub fn normalize_projective<const N: usize>(v: &[C64; N]) -> [C64; N] {
    let max = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if max == 0.0 {
        return *v;
    }
    let pivot = v
        .iter()
        .find(|z| z.norm() >= max * (1.0 - 1e-9))
        .copied()
        .expect("max attained");
    v.map(|z| z / pivot)
}

/// Projective equality after normalisation by the largest coordinate.
pub fn projectively_equal<const N: usize>(u: &[C64; N], v: &[C64; N], tol: f64) -> bool {
    let (nu, nv) = (normalize_projective(u), normalize_projective(v));
    nu.iter().zip(nv.iter()).all(|(a, b)| (a - b).norm() <= tol)
}

/// `[a¹b¹+a²b², i(a²b²−a¹b¹), −i(a¹b²+a²b¹), a²b¹−a¹b²]`
pub fn segre(a: &SpinorPoint, b: &SpinorPoint) -> Vector4C {
    let (a1, a2, b1, b2) = (a.c1, a.c2, b.c1, b.c2);
    Vector4C([
        a1 * b1 + a2 * b2,
        I * (a2 * b2 - a1 * b1),
        -I * (a1 * b2 + a2 * b1),
        a2 * b1 - a1 * b2,
    ])
}

/// Plücker coordinates `u^ij = w^i w̃^j − w^j w̃^i` of the line through two points.
pub fn pluecker(w: &Vector4C, w_tilde: &Vector4C) -> Result<BivectorCoords> {
    let mut u = [C64::new(0.0, 0.0); 6];
    for (p, &(i, j)) in PAIRS.iter().enumerate() {
        u[p] = w.0[i] * w_tilde.0[j] - w.0[j] * w_tilde.0[i];
    }
    let scale = w.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
        * w_tilde.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    let minors = u.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if scale == 0.0 || minors <= 1e-12 * scale {
        return Err(Error::DegenerateLine);
    }
    Ok(BivectorCoords::wedge(u))
}

/// The ruling line `t₊` through `[a¹,a²]`, as the printed self-dual triple
/// `[2i a¹a², i((a²)²−(a¹)²), −(a¹)²−(a²)², 0, 0, 0]`.
pub fn t_plus(a: &SpinorPoint) -> BivectorCoords {
    let z = C64::new(0.0, 0.0);
    let [x, y, w] = t_plus_triple(a);
    BivectorCoords::self_dual([x, y, w, z, z, z])
}

/// `[0, 0, 0, 2i b¹b², i((b²)²−(b¹)²), (b¹)²+(b²)²]`
pub fn t_minus(b: &SpinorPoint) -> BivectorCoords {
    let z = C64::new(0.0, 0.0);
    let [x, y, w] = t_minus_triple(b);
    BivectorCoords::self_dual([z, z, z, x, y, w])
}

/// Self-dual part of [`t_plus`]; used directly as the coefficient vector `T₊`.
pub fn t_plus_triple(a: &SpinorPoint) -> [C64; 3] {
    let (a1, a2) = (a.c1, a.c2);
    [
        I * a1 * a2 * 2.0,
        I * (a2 * a2 - a1 * a1),
        -(a1 * a1) - a2 * a2,
    ]
}

pub fn t_minus_triple(b: &SpinorPoint) -> [C64; 3] {
    let (b1, b2) = (b.c1, b.c2);
    [I * b1 * b2 * 2.0, I * (b2 * b2 - b1 * b1), b1 * b1 + b2 * b2]
}

/// `v_x(u) = 2√|det g| (u¹²u³⁴ − u¹³u²⁴ + u¹⁴u²³)`
pub fn qform_v(u: &BivectorCoords, sqrt_det_g: f64) -> C64 {
    let [u12, u13, u14, u23, u24, u34] = u.from_sd_basis().u;
    (u12 * u34 - u13 * u24 + u14 * u23) * (2.0 * sqrt_det_g)
}

/// `Λ²g(u, h)`; in an orthonormal frame the plain bilinear dot product of
/// wedge coordinates.
pub fn qform_lambda2g(u: &BivectorCoords, h: &BivectorCoords) -> C64 {
    let (u, h) = (u.from_sd_basis().u, h.from_sd_basis().u);
    u.iter().zip(h.iter()).map(|(x, y)| x * y).sum()
}

/// `R_x(u, h) = Σ R_ijlk u^ij h^kl` over `i<j`, `k<l`.
pub fn qform_r(r: &FramedRiemann, u: &BivectorCoords, h: &BivectorCoords) -> C64 {
    let k = r.wedge_form();
    let (u, h) = (u.from_sd_basis().u, h.from_sd_basis().u);
    let mut s = C64::new(0.0, 0.0);
    for p in 0..6 {
        for q in 0..6 {
            s += u[p] * h[q] * k[p][q];
        }
    }
    s
}
