//! Aberth–Ehrlich simultaneous root iteration: a double-precision warm
//! start followed by multiprecision refinement.

use num_complex::Complex64;
use rug::{Float, Integer};

use super::intpoly;
use super::mpcomplex::{horner_with_derivative, MpComplex};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

const F64_MAX_ITER: usize = 2000;
const F64_TOL: f64 = 1e-13;
/// Extra iterations after the convergence test passes.
const POLISH: usize = 2;

/// Starting points on the unit circle at angles `2 pi (j + 1/4) / r`; the
/// quarter offset keeps them off the real axis, where roots of the
/// polynomials handled here often sit.
fn initial_guesses(r: usize) -> Vec<Complex64> {
    (0..r)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * (j as f64 + 0.25) / r as f64))
        .collect()
}

fn warm_start(c: &[Integer], exec: Execution) -> Vec<Complex64> {
    let coeffs = intpoly::to_scaled_f64(c);
    let r = coeffs.len() - 1;
    let mut z = initial_guesses(r);
    for _ in 0..F64_MAX_ITER {
        let updates = par::map_range(exec, r, |j| {
            let (p, dp) = intpoly::horner_f64_with_derivative(&coeffs, z[j]);
            if p == Complex64::new(0.0, 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            let n = p / dp;
            let s: Complex64 = (0..r)
                .filter(|&k| k != j)
                .map(|k| (z[j] - z[k]).inv())
                .sum();
            n / (Complex64::new(1.0, 0.0) - n * s)
        });
        let mut worst: f64 = 0.0;
        for (zj, d) in z.iter_mut().zip(&updates) {
            if d.is_finite() {
                *zj -= d;
                worst = worst.max(d.norm() / zj.norm().max(1.0));
            }
        }
        if worst < F64_TOL {
            break;
        }
    }
    z
}

/// Roots of the integer polynomial `c` (degree at least 1) at `prec` bits.
///
/// Iterates until every correction is below `2^{-prec/2}` relative to the
/// root, then polishes. Errors with [`Error::NoConvergence`] after
/// `max_iter` multiprecision iterations.
pub(crate) fn aberth_roots(
    c: &[Integer],
    prec: u32,
    max_iter: usize,
    exec: Execution,
) -> Result<Vec<MpComplex>> {
    let r = c.len() - 1;
    let wp = prec + 32;
    if r == 1 {
        let re = Float::with_val(wp, &c[0]) / Float::with_val(wp, &c[1]);
        return Ok(vec![MpComplex {
            re: -re,
            im: Float::new(wp),
        }]);
    }
    let coeffs = intpoly::to_floats(c, wp);
    let mut z: Vec<MpComplex> = warm_start(c, exec)
        .into_iter()
        .map(|w| MpComplex::from_f64(wp, w.re, w.im))
        .collect();
    let threshold = Float::with_val(wp, Float::i_exp(1, -(prec as i32) / 2));
    let mut polish_left = None;
    for _ in 0..max_iter {
        let updates = par::map_range(exec, r, |j| {
            let (p, dp) = horner_with_derivative(&coeffs, &z[j]);
            if p.re.is_zero() && p.im.is_zero() {
                return MpComplex::zero(wp);
            }
            let n = p.div(&dp);
            let mut s = MpComplex::zero(wp);
            for (k, zk) in z.iter().enumerate() {
                if k != j {
                    s.add_assign(&z[j].sub(zk).recip());
                }
            }
            let mut den = MpComplex::from_f64(wp, 1.0, 0.0);
            den.sub_assign(&n.mul(&s));
            n.div(&den)
        });
        let mut converged = true;
        for (zj, d) in z.iter_mut().zip(&updates) {
            if !(d.re.is_finite() && d.im.is_finite()) {
                converged = false;
                continue;
            }
            zj.sub_assign(d);
            let mut scale = zj.abs();
            if scale < 1 {
                scale = Float::with_val(wp, 1);
            }
            if d.abs() / scale >= threshold {
                converged = false;
            }
        }
        match polish_left {
            Some(0) => return Ok(z),
            Some(k) => polish_left = Some(k - 1),
            None if converged => polish_left = Some(POLISH - 1),
            None => {}
        }
    }
    if polish_left.is_some() {
        return Ok(z);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
    })
}
