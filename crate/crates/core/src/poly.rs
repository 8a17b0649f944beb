use crate::C64;

/// Neumaier-compensated complex accumulator (componentwise on re/im).
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: C64) {
        neumaier(&mut self.re, x.re);
        neumaier(&mut self.im, x.im);
    }

    pub(crate) fn value(&self) -> C64 {
        C64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Binary quadratic form stored by power of the first variable:
/// `q[p]` multiplies `x1^p x2^(2-p)`.
pub(crate) type Quadratic = [C64; 3];

pub(crate) fn powers(z: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = C64::new(1.0, 0.0);
    for _ in 0..=n {
        out.push(acc);
        acc *= z;
    }
    out
}
