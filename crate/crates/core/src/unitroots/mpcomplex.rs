//! Just enough multiprecision complex arithmetic for Horner evaluation and
//! the Aberth update, on top of MPFR floats.

use rug::{Assign, Float};

#[derive(Clone, Debug)]
pub(crate) struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn zero(prec: u32) -> Self {
        MpComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        MpComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_polar_unit(angle: &Float) -> Self {
        let prec = angle.prec();
        let (s, c) = angle.clone().sin_cos(Float::new(prec));
        MpComplex { re: c, im: s }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn norm_sqr(&self) -> Float {
        let mut n = Float::with_val(self.prec(), self.re.square_ref());
        n += Float::with_val(self.prec(), self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn sub(&self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }

    pub fn add_assign(&mut self, o: &MpComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }

    pub fn sub_assign(&mut self, o: &MpComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }

    pub fn mul(&self, o: &MpComplex) -> MpComplex {
        let mut out = MpComplex::zero(self.prec());
        mul_into(&mut out, self, o, &mut Float::new(self.prec()));
        out
    }

    /// `1 / self`.
    pub fn recip(&self) -> MpComplex {
        let n = self.norm_sqr();
        MpComplex {
            re: Float::with_val(self.prec(), &self.re / &n),
            im: -Float::with_val(self.prec(), &self.im / &n),
        }
    }

    pub fn div(&self, o: &MpComplex) -> MpComplex {
        self.mul(&o.recip())
    }
}

/// `out = a * b`; `tmp` is scratch.
pub(crate) fn mul_into(out: &mut MpComplex, a: &MpComplex, b: &MpComplex, tmp: &mut Float) {
    out.re.assign(&a.re * &b.re);
    tmp.assign(&a.im * &b.im);
    out.re -= &*tmp;
    out.im.assign(&a.re * &b.im);
    tmp.assign(&a.im * &b.re);
    out.im += &*tmp;
}

/// Values of `p(z)` and `p'(z)` by simultaneous Horner recurrences.
/// `coeffs` is low degree first.
pub(crate) fn horner_with_derivative(coeffs: &[Float], z: &MpComplex) -> (MpComplex, MpComplex) {
    let prec = z.prec();
    let mut p = MpComplex::zero(prec);
    let mut dp = MpComplex::zero(prec);
    let mut t = MpComplex::zero(prec);
    let mut tmp = Float::new(prec);
    for c in coeffs.iter().rev() {
        // dp = dp * z + p
        mul_into(&mut t, &dp, z, &mut tmp);
        std::mem::swap(&mut dp, &mut t);
        dp.add_assign(&p);
        // p = p * z + c
        mul_into(&mut t, &p, z, &mut tmp);
        std::mem::swap(&mut p, &mut t);
        p.re += c;
    }
    (p, dp)
}

pub(crate) fn horner(coeffs: &[Float], z: &MpComplex) -> MpComplex {
    let prec = z.prec();
    let mut p = MpComplex::zero(prec);
    let mut t = MpComplex::zero(prec);
    let mut tmp = Float::new(prec);
    for c in coeffs.iter().rev() {
        mul_into(&mut t, &p, z, &mut tmp);
        std::mem::swap(&mut p, &mut t);
        p.re += c;
    }
    p
}
