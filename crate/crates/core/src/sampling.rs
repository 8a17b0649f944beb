//! Seeded random inputs for property checks, oracles and benchmarks.

use rand::Rng;

use crate::bivector::{SpinorPoint, Vector4C};
use crate::tensor::{kulkarni_nomizu, FramedRiemann, Mat3, SymmetricBilinear4};
use crate::C64;

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Spinor point with unit-norm homogeneous coordinates.
pub fn random_spinor<R: Rng + ?Sized>(rng: &mut R) -> SpinorPoint {
    loop {
        let (c1, c2) = (random_complex(rng), random_complex(rng));
        let n = (c1.norm_sqr() + c2.norm_sqr()).sqrt();
        if n > 1e-3 {
            return SpinorPoint::new(c1 / n, c2 / n).expect("nonzero");
        }
    }
}

pub fn random_vector4<R: Rng + ?Sized>(rng: &mut R) -> Vector4C {
    Vector4C([
        random_complex(rng),
        random_complex(rng),
        random_complex(rng),
        random_complex(rng),
    ])
}

pub fn random_matrix3<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    m.iter_mut()
        .flatten()
        .for_each(|v| *v = rng.gen_range(-1.0..1.0));
    m
}

pub fn random_symmetric3<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = rng.gen_range(-1.0..1.0);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

pub fn random_symmetric4<R: Rng + ?Sized>(rng: &mut R) -> SymmetricBilinear4 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let v = rng.gen_range(-1.0..1.0);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    SymmetricBilinear4::new(m).expect("symmetric by construction")
}

/// Generic algebraic curvature tensor built from random curvature-operator
/// blocks with matched traces.
pub fn random_curvature<R: Rng + ?Sized>(rng: &mut R) -> FramedRiemann {
    let a = random_symmetric3(rng);
    let mut c = random_symmetric3(rng);
    let shift = (crate::tensor::trace3(&a) - crate::tensor::trace3(&c)) / 3.0;
    for (i, row) in c.iter_mut().enumerate() {
        row[i] += shift;
    }
    let b = random_matrix3(rng);
    FramedRiemann::from_blocks(&a, &b, &c).expect("traces matched")
}

/// Algebraic curvature tensor as a signed sum of Kulkarni–Nomizu squares;
/// independent of the block machinery.
pub fn random_curvature_kn<R: Rng + ?Sized>(rng: &mut R) -> FramedRiemann {
    let mut r = FramedRiemann::zero();
    for _ in 0..6 {
        let h = random_symmetric4(rng);
        let w = rng.gen_range(-1.0..1.0);
        r = r.add(&kulkarni_nomizu(&h, &h).scaled(w));
    }
    r
}
