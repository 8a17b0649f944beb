//! Frame components of the Riemann tensor and its block decomposition.
//!
//! Sign convention: a unit round sphere factor has `R_abba = +1`, so the
//! Ricci contraction is `Ric(j,l) = Σ_i R_ijli` and is positive on spheres.
//! The curvature bilinear form on bivectors pairs `e_i∧e_j` with `e_k∧e_l`
//! as `R_ijlk`.

use std::fmt;

use crate::{Error, Result};

/// Default tolerance for the exact algebraic identities.
pub const DEFAULT_TOL: f64 = 1e-12;

pub type Mat3 = [[f64; 3]; 3];
pub type Mat4 = [[f64; 4]; 4];
type Components = [[[[f64; 4]; 4]; 4]; 4];

/// Index pairs `(i, j)`, `i < j`, in the order of the wedge basis
/// `[e12, e13, e14, e23, e24, e34]` (zero-based).
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// The orthonormal self-dual / anti-self-dual basis `f1+, f2+, f3+, f1-, f2-, f3-`
/// expressed in wedge coordinates.
pub const SD_FRAME: [[f64; 6]; 6] = [
    [H, 0.0, 0.0, 0.0, 0.0, H],
    [0.0, H, 0.0, 0.0, -H, 0.0],
    [0.0, 0.0, H, H, 0.0, 0.0],
    [H, 0.0, 0.0, 0.0, 0.0, -H],
    [0.0, H, 0.0, 0.0, H, 0.0],
    [0.0, 0.0, H, -H, 0.0, 0.0],
];

pub fn identity3() -> Mat3 {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

pub fn diag3(d: [f64; 3]) -> Mat3 {
    [[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]]
}

pub fn trace3(m: &Mat3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

pub fn transpose3(m: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            t[j][i] = *v;
        }
    }
    t
}

pub fn max_abs3(m: &Mat3) -> f64 {
    m.iter().flatten().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// All 256 components `R_ijkl = Rm(e_i, e_j, e_k, e_l)` in an orthonormal frame.
#[derive(Clone, Copy, PartialEq)]
pub struct FramedRiemann {
    components: Components,
}

impl fmt::Debug for FramedRiemann {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for (i, j, k, l) in all_indices() {
            let v = self.components[i][j][k][l];
            if v != 0.0 {
                list.entry(&((i + 1, j + 1, k + 1, l + 1), v));
            }
        }
        list.finish()
    }
}

fn all_indices() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..4).flat_map(|i| {
        (0..4).flat_map(move |j| (0..4).flat_map(move |k| (0..4).map(move |l| (i, j, k, l))))
    })
}

impl Default for FramedRiemann {
    fn default() -> Self {
        Self::zero()
    }
}

impl FramedRiemann {
    pub fn zero() -> Self {
        Self {
            components: [[[[0.0; 4]; 4]; 4]; 4],
        }
    }

    pub fn from_components(components: Components) -> Self {
        Self { components }
    }

    pub fn components(&self) -> &Components {
        &self.components
    }

    /// Zero-based component access.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.components[i][j][k][l]
    }

    /// Raw write of one component; no symmetric completion.
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        self.components[i][j][k][l] = value;
    }

    /// Set `R_ijkl` and every component related to it by the pair
    /// antisymmetries and pair symmetry.
    pub fn set_with_symmetries(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        for (idx, sign) in symmetry_orbit(i, j, k, l) {
            self.components[idx.0][idx.1][idx.2][idx.3] = sign * value;
        }
    }

    /// Tensor from the sectional-type components `R_abba = value` for each
    /// listed pair `a != b`.
    pub fn from_sectional(pairs: &[((usize, usize), f64)]) -> Self {
        let mut r = Self::zero();
        for &((a, b), v) in pairs {
            r.set_with_symmetries(a, b, b, a, v);
        }
        r
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = *self;
        out.components
            .iter_mut()
            .flatten()
            .flatten()
            .flatten()
            .for_each(|v| *v *= factor);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for (i, j, k, l) in all_indices() {
            out.components[i][j][k][l] += other.components[i][j][k][l];
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Largest componentwise deviation and the (one-based) index where it occurs.
    pub fn max_deviation(&self, other: &Self) -> (f64, [usize; 4]) {
        let mut worst = (0.0, [1, 1, 1, 1]);
        for (i, j, k, l) in all_indices() {
            let d = (self.components[i][j][k][l] - other.components[i][j][k][l]).abs();
            if d > worst.0 {
                worst = (d, [i + 1, j + 1, k + 1, l + 1]);
            }
        }
        worst
    }

    /// Matrix of the curvature bilinear form in the wedge basis:
    /// `K[p][q] = R_x(e_p, e_q)` with `R_x(e_i∧e_j, e_k∧e_l) = R_ijlk`.
    pub fn wedge_form(&self) -> [[f64; 6]; 6] {
        let mut k = [[0.0; 6]; 6];
        for (p, &(i, j)) in PAIRS.iter().enumerate() {
            for (q, &(kk, l)) in PAIRS.iter().enumerate() {
                k[p][q] = self.components[i][j][l][kk];
            }
        }
        k
    }

    /// Inverse of [`curvature_operator_blocks`]: builds the tensor whose
    /// curvature operator has blocks `[A B; Bᵀ C]` in the self-dual basis.
    ///
    /// The first Bianchi identity holds iff `trace(A) = trace(C)`.
    pub fn from_blocks(a: &Mat3, b: &Mat3, c: &Mat3) -> Result<Self> {
        check_symmetric3(a)?;
        check_symmetric3(c)?;
        let (ta, tc) = (trace3(a), trace3(c));
        let scale = 1.0 + max_abs3(a).max(max_abs3(c));
        if (ta - tc).abs() > 1e-12 * scale {
            return Err(Error::TraceMismatch {
                plus: ta,
                minus: tc,
            });
        }
        Ok(Self::assemble_from_blocks(a, b, c))
    }

    fn assemble_from_blocks(a: &Mat3, b: &Mat3, c: &Mat3) -> Self {
        let mut kf = [[0.0; 6]; 6];
        for i in 0..3 {
            for j in 0..3 {
                kf[i][j] = a[i][j];
                kf[3 + i][3 + j] = c[i][j];
                kf[i][3 + j] = b[i][j];
                kf[3 + j][i] = b[i][j];
            }
        }
        let mut kw = [[0.0; 6]; 6];
        for (p, row) in kw.iter_mut().enumerate() {
            for (q, out) in row.iter_mut().enumerate() {
                let mut s = 0.0;
                for (x, fx) in SD_FRAME.iter().enumerate() {
                    for (y, fy) in SD_FRAME.iter().enumerate() {
                        s += fx[p] * kf[x][y] * fy[q];
                    }
                }
                *out = s;
            }
        }
        let mut r = Self::zero();
        for (p, &(i, j)) in PAIRS.iter().enumerate() {
            for (q, &(k, l)) in PAIRS.iter().enumerate() {
                // R_x(e_ij, e_kl) = R_ijlk = -R_ijkl
                let v = -kw[p][q];
                r.components[i][j][k][l] = v;
                r.components[j][i][k][l] = -v;
                r.components[i][j][l][k] = -v;
                r.components[j][i][l][k] = v;
            }
        }
        r
    }
}

fn check_symmetric3(m: &Mat3) -> Result<()> {
    let scale = 1.0 + max_abs3(m);
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (m[i][j] - m[j][i]).abs() > 1e-12 * scale {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// The eight index tuples related to `(i,j,k,l)` by the pair
/// antisymmetries and pair symmetry, with their signs.
pub fn symmetry_orbit(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> [((usize, usize, usize, usize), f64); 8] {
    [
        ((i, j, k, l), 1.0),
        ((j, i, k, l), -1.0),
        ((i, j, l, k), -1.0),
        ((j, i, l, k), 1.0),
        ((k, l, i, j), 1.0),
        ((l, k, i, j), -1.0),
        ((k, l, j, i), -1.0),
        ((l, k, j, i), 1.0),
    ]
}

/// Symmetric 4×4 matrix: metric, Ricci tensor or a Kulkarni–Nomizu factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricBilinear4 {
    entries: Mat4,
}

impl SymmetricBilinear4 {
    pub fn new(entries: Mat4) -> Result<Self> {
        let scale = 1.0 + entries.iter().flatten().fold(0.0_f64, |a, v| a.max(v.abs()));
        for i in 0..4 {
            for j in (i + 1)..4 {
                if (entries[i][j] - entries[j][i]).abs() > 1e-12 * scale {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn identity() -> Self {
        Self::diagonal([1.0; 4])
    }

    pub fn zero() -> Self {
        Self::diagonal([0.0; 4])
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut entries = [[0.0; 4]; 4];
        for i in 0..4 {
            entries[i][i] = d[i];
        }
        Self { entries }
    }

    pub fn entries(&self) -> &Mat4 {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    /// `self + factor * other`
    pub fn add_scaled(&self, factor: f64, other: &Self) -> Self {
        let mut entries = self.entries;
        for i in 0..4 {
            for j in 0..4 {
                entries[i][j] += factor * other.entries[i][j];
            }
        }
        Self { entries }
    }
}

/// Which identity a [`SymmetryViolation`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryIdentity {
    AntisymmetryFirstPair,
    AntisymmetryLastPair,
    PairSymmetry,
    FirstBianchi,
}

impl fmt::Display for SymmetryIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SymmetryIdentity::AntisymmetryFirstPair => "antisymmetry-first-pair",
            SymmetryIdentity::AntisymmetryLastPair => "antisymmetry-last-pair",
            SymmetryIdentity::PairSymmetry => "pair-symmetry",
            SymmetryIdentity::FirstBianchi => "first-bianchi",
        };
        f.write_str(s)
    }
}

/// First identity found violated, with one-based indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryViolation {
    pub identity: SymmetryIdentity,
    pub indices: [usize; 4],
    pub deviation: f64,
}

impl fmt::Display for SymmetryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k, l] = self.indices;
        write!(
            f,
            "{} violated at ({i},{j},{k},{l}), deviation {:e}",
            self.identity, self.deviation
        )
    }
}

fn identity_deviations(r: &FramedRiemann, i: usize, j: usize, k: usize, l: usize) -> [f64; 4] {
    let c = &r.components;
    [
        (c[i][j][k][l] + c[j][i][k][l]).abs(),
        (c[i][j][k][l] + c[i][j][l][k]).abs(),
        (c[i][j][k][l] - c[k][l][i][j]).abs(),
        (c[i][j][k][l] + c[j][k][i][l] + c[k][i][j][l]).abs(),
    ]
}

const IDENTITIES: [SymmetryIdentity; 4] = [
    SymmetryIdentity::AntisymmetryFirstPair,
    SymmetryIdentity::AntisymmetryLastPair,
    SymmetryIdentity::PairSymmetry,
    SymmetryIdentity::FirstBianchi,
];

/// Checks the four curvature identities componentwise. Identities are
/// taken in the order of [`SymmetryIdentity`], index tuples of each in
/// lexicographic order.
pub fn validate_symmetries(r: &FramedRiemann, tol: f64) -> std::result::Result<(), SymmetryViolation> {
    for (n, identity) in IDENTITIES.iter().enumerate() {
        for (i, j, k, l) in all_indices() {
            let dev = identity_deviations(r, i, j, k, l)[n];
            if dev > tol || dev.is_nan() {
                return Err(SymmetryViolation {
                    identity: *identity,
                    indices: [i + 1, j + 1, k + 1, l + 1],
                    deviation: dev,
                });
            }
        }
    }
    Ok(())
}

/// Largest deviation from any of the four identities.
pub fn symmetry_residual(r: &FramedRiemann) -> f64 {
    all_indices()
        .flat_map(|(i, j, k, l)| identity_deviations(r, i, j, k, l))
        .fold(0.0, f64::max)
}

pub fn ricci_and_scalar(r: &FramedRiemann) -> (SymmetricBilinear4, f64) {
    let mut ric = [[0.0; 4]; 4];
    for (j, row) in ric.iter_mut().enumerate() {
        for (l, out) in row.iter_mut().enumerate() {
            *out = (0..4).map(|i| r.components[i][j][l][i]).sum();
        }
    }
    let scal = (0..4).map(|j| ric[j][j]).sum();
    (SymmetricBilinear4 { entries: ric }, scal)
}

/// `(k⊠l)_ijkl = k_ik l_jl + k_jl l_ik - k_il l_jk - k_jk l_il`
pub fn kulkarni_nomizu(k: &SymmetricBilinear4, l: &SymmetricBilinear4) -> FramedRiemann {
    let (k, l) = (&k.entries, &l.entries);
    let mut out = FramedRiemann::zero();
    for (a, b, c, d) in all_indices() {
        out.components[a][b][c][d] =
            k[a][c] * l[b][d] + k[b][d] * l[a][c] - k[a][d] * l[b][c] - k[b][c] * l[a][d];
    }
    out
}

/// 3×3 blocks of the curvature operator in the self-dual basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureBlocks {
    pub a: Mat3,
    pub b: Mat3,
    pub c: Mat3,
    pub scal: f64,
    pub w_plus: Mat3,
    pub w_minus: Mat3,
}

impl CurvatureBlocks {
    /// Assemble blocks from `A`, `B`, `C`; the scalar curvature follows
    /// from `trace(A) + trace(C) = scal / 2`.
    pub fn from_abc(a: Mat3, b: Mat3, c: Mat3) -> Self {
        let scal = 2.0 * (trace3(&a) + trace3(&c));
        let shift = scal / 12.0;
        let mut w_plus = a;
        let mut w_minus = c;
        for i in 0..3 {
            w_plus[i][i] -= shift;
            w_minus[i][i] -= shift;
        }
        Self {
            a,
            b,
            c,
            scal,
            w_plus,
            w_minus,
        }
    }

    /// Blocks with prescribed Weyl parts and mixed block; `A` and `C` are
    /// left as `W± + scal/12`.
    pub fn from_weyl(w_plus: Mat3, b: Mat3, w_minus: Mat3, scal: f64) -> Self {
        let mut a = w_plus;
        let mut c = w_minus;
        for i in 0..3 {
            a[i][i] += scal / 12.0;
            c[i][i] += scal / 12.0;
        }
        Self {
            a,
            b,
            c,
            scal,
            w_plus,
            w_minus,
        }
    }

    /// Largest entry magnitude over `W+`, `W-` and `B`, the blocks that
    /// enter the branching curve.
    pub fn magnitude(&self) -> f64 {
        max_abs3(&self.w_plus)
            .max(max_abs3(&self.w_minus))
            .max(max_abs3(&self.b))
    }

    /// Every block multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let s = |m: &Mat3| m.map(|row| row.map(|v| v * factor));
        Self {
            a: s(&self.a),
            b: s(&self.b),
            c: s(&self.c),
            scal: self.scal * factor,
            w_plus: s(&self.w_plus),
            w_minus: s(&self.w_minus),
        }
    }

    /// Blocks of the same tensor in the frame with `e4` reversed. This
    /// exchanges the self-dual and anti-self-dual halves, with
    /// `f1± ↦ f1∓`, `f2± ↦ f2∓`, `f3± ↦ −f3∓`.
    pub fn swapped(&self) -> Self {
        let flip = |m: &Mat3| {
            let mut out = *m;
            for (i, row) in out.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    if (i == 2) != (j == 2) {
                        *v = -*v;
                    }
                }
            }
            out
        };
        Self {
            a: flip(&self.c),
            b: flip(&transpose3(&self.b)),
            c: flip(&self.a),
            scal: self.scal,
            w_plus: flip(&self.w_minus),
            w_minus: flip(&self.w_plus),
        }
    }
}

/// `A(i,j) = R_x(f_i+, f_j+)`, `C(i,j) = R_x(f_i-, f_j-)`,
/// `B(i,j) = R_x(f_j-, f_i+)`.
pub fn curvature_operator_blocks(r: &FramedRiemann) -> CurvatureBlocks {
    let k = r.wedge_form();
    let mut kf = [[0.0; 6]; 6];
    for (x, fx) in SD_FRAME.iter().enumerate() {
        for (y, fy) in SD_FRAME.iter().enumerate() {
            let mut s = 0.0;
            for p in 0..6 {
                for q in 0..6 {
                    s += fx[p] * k[p][q] * fy[q];
                }
            }
            kf[x][y] = s;
        }
    }
    let mut a = [[0.0; 3]; 3];
    let mut b = [[0.0; 3]; 3];
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = kf[i][j];
            c[i][j] = kf[3 + i][3 + j];
            b[i][j] = kf[3 + j][i];
        }
    }
    let (_, scal) = ricci_and_scalar(r);
    let mut w_plus = a;
    let mut w_minus = c;
    for i in 0..3 {
        w_plus[i][i] -= scal / 12.0;
        w_minus[i][i] -= scal / 12.0;
    }
    CurvatureBlocks {
        a,
        b,
        c,
        scal,
        w_plus,
        w_minus,
    }
}

/// Worst componentwise mismatch of the four-part reconstruction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompositionReport {
    pub max_deviation: f64,
    pub indices: [usize; 4],
}

/// Rebuild `Rm` from its Weyl, traceless Ricci and scalar parts and compare.
///
/// With `R_abba = +1` on spheres the decomposition reads
/// `Rm = W - ½ Ric°⊠g - (scal/24) g⊠g`, where `W` is the tensor with blocks
/// `(W+, 0, W-)`.
pub fn four_part_decomposition_check(
    r: &FramedRiemann,
    tol: f64,
) -> std::result::Result<DecompositionReport, DecompositionReport> {
    let blocks = curvature_operator_blocks(r);
    let traceless3 = |m: &Mat3| {
        let mut m = *m;
        let t = trace3(&m) / 3.0;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= t;
        }
        m
    };
    let weyl = FramedRiemann::assemble_from_blocks(
        &traceless3(&blocks.w_plus),
        &[[0.0; 3]; 3],
        &traceless3(&blocks.w_minus),
    );
    let (ric, scal) = ricci_and_scalar(r);
    let g = SymmetricBilinear4::identity();
    let traceless = ric.add_scaled(-scal / 4.0, &g);
    let recon = weyl
        .add(&kulkarni_nomizu(&traceless, &g).scaled(-0.5))
        .add(&kulkarni_nomizu(&g, &g).scaled(-scal / 24.0));
    let (max_deviation, indices) = recon.max_deviation(r);
    let report = DecompositionReport {
        max_deviation,
        indices,
    };
    if max_deviation <= tol {
        Ok(report)
    } else {
        Err(report)
    }
}
