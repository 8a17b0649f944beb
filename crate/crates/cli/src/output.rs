//! Serialisation helpers. Every float is written with 17 significant digits
//! and `-0.0` is written as `0`.

use std::io;
use std::str::FromStr;

use branchcurve_core::curve::CurveCoeffs;
use branchcurve_core::tensor::{FramedRiemann, Mat3, PAIRS};
use branchcurve_core::C64;
use serde::{Serialize, Serializer};
use serde_json::ser::Formatter;

pub fn format_float(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    let s = format!("{v:.16e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}

/// JSON number with fixed precision; non-finite values become `null`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Float(pub f64);

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let n = serde_json::Number::from_str(&format_float(self.0)).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

pub type Complex = [Float; 2];

pub fn complex(z: C64) -> Complex {
    [Float(z.re), Float(z.im)]
}

pub fn coeff_matrix(k: &CurveCoeffs) -> Vec<Vec<Complex>> {
    k.c.iter().map(|row| row.iter().map(|&z| complex(z)).collect()).collect()
}

pub fn mat3(m: &Mat3) -> Vec<Vec<Float>> {
    m.iter().map(|row| row.iter().map(|&v| Float(v)).collect()).collect()
}

#[derive(Serialize)]
pub struct Component {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: Float,
}

/// The 21 components `R_ijkl` with `i<j`, `k<l`, `(i,j) <= (k,l)`; enough
/// to rebuild the tensor by symmetric completion.
pub fn independent_components(r: &FramedRiemann) -> Vec<Component> {
    let mut out = Vec::with_capacity(21);
    for (p, &(i, j)) in PAIRS.iter().enumerate() {
        for &(k, l) in &PAIRS[p..] {
            out.push(Component {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                l: l + 1,
                value: Float(r.get(i, j, k, l)),
            });
        }
    }
    out
}

/// Objects are indented; an array directly under an object puts each
/// element on its own line, anything nested deeper stays on that line.
#[derive(Default)]
struct Layout {
    indent: usize,
    arrays: usize,
    fresh: bool,
}

impl Layout {
    fn newline<W: ?Sized + io::Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.indent {
            w.write_all(b"  ")?;
        }
        Ok(())
    }

    fn open<W: ?Sized + io::Write>(&mut self, w: &mut W, token: &[u8], breaks: bool) -> io::Result<()> {
        if breaks {
            self.indent += 1;
        }
        self.fresh = true;
        w.write_all(token)
    }

    fn close<W: ?Sized + io::Write>(&mut self, w: &mut W, token: &[u8], breaks: bool) -> io::Result<()> {
        if breaks {
            self.indent -= 1;
            if !self.fresh {
                self.newline(w)?;
            }
        }
        self.fresh = false;
        w.write_all(token)
    }

    fn item<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool, breaks: bool) -> io::Result<()> {
        if !first {
            w.write_all(if breaks { b"," } else { b", " })?;
        }
        if breaks {
            self.newline(w)?;
        }
        Ok(())
    }
}

impl Formatter for Layout {
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.arrays += 1;
        let breaks = self.arrays == 1;
        self.open(w, b"[", breaks)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        let breaks = self.arrays == 1;
        self.arrays -= 1;
        self.close(w, b"]", breaks)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        let breaks = self.arrays == 1;
        self.item(w, first, breaks)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.fresh = false;
        Ok(())
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        let breaks = self.arrays == 0;
        self.open(w, b"{", breaks)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        let breaks = self.arrays == 0;
        self.close(w, b"}", breaks)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        let breaks = self.arrays == 0;
        self.item(w, first, breaks)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.fresh = false;
        Ok(())
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Layout::default());
    value.serialize(&mut ser).expect("serialisable");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}
