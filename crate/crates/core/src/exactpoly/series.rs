use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use rug::{Assign, Integer, Rational};

use crate::error::{Error, Result};

/// Power series `sum_{k<=order} c_k s^k` with all higher terms discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Pads or truncates `coeffs` to exactly `order + 1` entries.
    pub fn new<I, T>(order: usize, coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<Rational>,
    {
        let mut c: Vec<Rational> = coeffs.into_iter().take(order + 1).map(Into::into).collect();
        c.resize(order + 1, Rational::new());
        TruncatedSeries { order, coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, std::iter::empty::<Rational>())
    }

    pub fn one(order: usize) -> Self {
        Self::new(order, [1])
    }

    /// The series of `e^s`.
    pub fn exp_s(order: usize) -> Self {
        let mut c = Vec::with_capacity(order + 1);
        let mut fact = Integer::from(1);
        for k in 0..=order {
            if k > 0 {
                fact *= k as u64;
            }
            c.push(Rational::from((Integer::from(1), fact.clone())));
        }
        TruncatedSeries { order, coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    /// The same series viewed at a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        Self::new(order.min(self.order), self.coeffs.iter().cloned())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(
            self.order,
            self.coeffs.iter().map(|a| Rational::from(a * c)),
        )
    }

    /// `f(c s)`.
    pub fn dilate(&self, c: &Rational) -> Self {
        let mut pw = Rational::from(1);
        let mut out = Vec::with_capacity(self.order + 1);
        for a in &self.coeffs {
            out.push(Rational::from(a * &pw));
            pw *= c;
        }
        TruncatedSeries {
            order: self.order,
            coeffs: out,
        }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.cmp0() == Ordering::Equal {
            return Err(Error::BadConstantTerm {
                expected: "nonzero".into(),
                found: "0".into(),
            });
        }
        let inv0 = c0.clone().recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.order + 1);
        out.push(inv0.clone());
        let mut t = Rational::new();
        for k in 1..=self.order {
            let mut acc = Rational::new();
            for j in 1..=k {
                t.assign(&self.coeffs[j] * &out[k - j]);
                acc += &t;
            }
            acc *= &inv0;
            out.push(-acc);
        }
        Ok(TruncatedSeries {
            order: self.order,
            coeffs: out,
        })
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

fn binary(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    f: impl Fn(&Rational, &Rational) -> Rational,
) -> TruncatedSeries {
    let order = a.order.min(b.order);
    TruncatedSeries {
        order,
        coeffs: (0..=order).map(|k| f(&a.coeffs[k], &b.coeffs[k])).collect(),
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        binary(self, rhs, |x, y| Rational::from(x + y))
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        binary(self, rhs, |x, y| Rational::from(x - y))
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        let mut out = vec![Rational::new(); order + 1];
        let mut t = Rational::new();
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.cmp0() == Ordering::Equal {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                t.assign(a * b);
                out[i + j] += &t;
            }
        }
        TruncatedSeries { order, coeffs: out }
    }
}

/// Logarithm of a series with constant term 1.
///
/// With `g = log f` and `f_0 = 1`, `f' = f g'` gives
/// `k g_k = k f_k - sum_{j<k} j g_j f_{k-j}`.
pub fn series_log(ts: &TruncatedSeries) -> Result<TruncatedSeries> {
    if ts.coeffs[0] != 1 {
        return Err(Error::BadConstantTerm {
            expected: "1".into(),
            found: ts.coeffs[0].to_string(),
        });
    }
    let f = &ts.coeffs;
    let mut g = vec![Rational::new(); ts.order + 1];
    let mut t = Rational::new();
    for k in 1..=ts.order {
        let mut acc = Rational::from(&f[k] * k as u64);
        for j in 1..k {
            if g[j].cmp0() == Ordering::Equal {
                continue;
            }
            t.assign(&g[j] * &f[k - j]);
            t *= j as u64;
            acc -= &t;
        }
        acc /= k as u64;
        g[k] = acc;
    }
    Ok(TruncatedSeries {
        order: ts.order,
        coeffs: g,
    })
}

/// Exponential of a series with zero constant term.
///
/// With `h = exp g`, `h' = g' h` gives `k h_k = sum_{1<=j<=k} j g_j h_{k-j}`.
pub fn series_exp(ts: &TruncatedSeries) -> Result<TruncatedSeries> {
    if ts.coeffs[0].cmp0() != Ordering::Equal {
        return Err(Error::BadConstantTerm {
            expected: "0".into(),
            found: ts.coeffs[0].to_string(),
        });
    }
    let g = &ts.coeffs;
    let mut h = vec![Rational::new(); ts.order + 1];
    h[0] = Rational::from(1);
    let mut t = Rational::new();
    for k in 1..=ts.order {
        let mut acc = Rational::new();
        for j in 1..=k {
            if g[j].cmp0() == Ordering::Equal {
                continue;
            }
            t.assign(&g[j] * &h[k - j]);
            t *= j as u64;
            acc += &t;
        }
        acc /= k as u64;
        h[k] = acc;
    }
    Ok(TruncatedSeries {
        order: ts.order,
        coeffs: h,
    })
}
