//! Integer coefficient vectors (low degree first) used during root
//! extraction.

use std::cmp::Ordering;

use num_complex::Complex64;
use rug::{Float, Integer};

/// Coefficients divided by a common power of two so the largest has
/// magnitude in `[1/2, 1)`, then rounded to `f64`.
pub(crate) fn to_scaled_f64(c: &[Integer]) -> Vec<f64> {
    let emax = c
        .iter()
        .filter(|x| x.cmp0() != Ordering::Equal)
        .map(|x| x.significant_bits() as i32)
        .max()
        .unwrap_or(0);
    c.iter()
        .map(|x| {
            let (m, e) = x.to_f64_exp();
            m * 2f64.powi(e as i32 - emax)
        })
        .collect()
}

pub(crate) fn to_floats(c: &[Integer], prec: u32) -> Vec<Float> {
    c.iter().map(|x| Float::with_val(prec, x)).collect()
}

pub(crate) fn horner_f64(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

pub(crate) fn horner_f64_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// `c / f` for monic `f`, or `None` if the remainder is nonzero.
pub(crate) fn div_monic_exact(c: &[Integer], f: &[Integer]) -> Option<Vec<Integer>> {
    let n = c.len();
    let m = f.len();
    debug_assert!(m >= 1 && f[m - 1] == 1);
    if n < m {
        return c.iter().all(|x| x.cmp0() == Ordering::Equal).then(Vec::new);
    }
    let mut rem = c.to_vec();
    let mut q = vec![Integer::new(); n - m + 1];
    let mut t = Integer::new();
    for k in (0..=n - m).rev() {
        let lead = std::mem::take(&mut rem[k + m - 1]);
        if lead.cmp0() != Ordering::Equal {
            for (j, fj) in f[..m - 1].iter().enumerate() {
                if fj.cmp0() != Ordering::Equal {
                    use rug::Assign;
                    t.assign(&lead * fj);
                    rem[k + j] -= &t;
                }
            }
        }
        q[k] = lead;
    }
    rem[..m - 1]
        .iter()
        .all(|x| x.cmp0() == Ordering::Equal)
        .then_some(q)
}

pub(crate) fn derivative(c: &[Integer]) -> Vec<Integer> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, x)| Integer::from(x * k as u64))
        .collect()
}

/// Divides out the content so the coefficients are coprime, with a
/// positive leading coefficient.
pub(crate) fn primitive(mut c: Vec<Integer>) -> Vec<Integer> {
    let mut g = Integer::new();
    for x in &c {
        g.gcd_mut(x);
    }
    if g.cmp0() == Ordering::Equal {
        return c;
    }
    if c.last().is_some_and(|x| x.cmp0() == Ordering::Less) {
        g = -g;
    }
    for x in c.iter_mut() {
        x.div_exact_mut(&g);
    }
    c
}
