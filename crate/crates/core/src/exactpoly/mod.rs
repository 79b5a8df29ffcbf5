//! Exact dense polynomials over the rationals, truncated power series, and
//! expansion of cyclotomic-quotient products.
//!
//! Nothing in this module rounds. Coefficient vectors are stored low degree
//! first and normalized so the last stored coefficient is nonzero; the zero
//! polynomial is the empty vector.

mod factored;
mod series;

pub(crate) use factored::quotient_integer;
pub use factored::{expand_factored, expand_factored_direct, FactoredSpec};
pub use series::{series_exp, series_log, TruncatedSeries};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Assign, Integer, Rational};

use crate::error::{Error, Result};

/// Cumulants are computed through this order unless a caller asks otherwise.
pub const DEFAULT_SERIES_ORDER: usize = 16;

/// Dense polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactPoly {
    coeffs: Vec<Rational>,
}

impl ExactPoly {
    pub fn zero() -> Self {
        ExactPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ExactPoly {
            coeffs: vec![Rational::from(1)],
        }
    }

    /// Builds a polynomial from coefficients `c_0, c_1, ...`, dropping
    /// trailing zeros.
    pub fn from_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<Rational>,
    {
        let mut p = ExactPoly {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        };
        p.trim();
        p
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().copied())
    }

    pub(crate) fn from_integer_vec(coeffs: Vec<Integer>) -> Self {
        Self::from_coeffs(coeffs)
    }

    /// `c * z^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::new(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self
            .coeffs
            .last()
            .is_some_and(|c| c.cmp0() == Ordering::Equal)
        {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| c.cmp0() != Ordering::Equal)
    }

    /// Splits `p = z^v * q` with `q(0) != 0`.
    pub fn split_valuation(&self) -> (usize, ExactPoly) {
        match self.valuation() {
            None => (0, ExactPoly::zero()),
            Some(v) => (
                v,
                ExactPoly {
                    coeffs: self.coeffs[v..].to_vec(),
                },
            ),
        }
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.cmp0() != Ordering::Less)
    }

    /// `p_k = p_{n-k}` for every `k`. The zero polynomial counts as
    /// palindromic.
    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|k| self.coeffs[k] == self.coeffs[n - 1 - k])
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `p(1)`, the sum of the coefficients.
    pub fn value_at_one(&self) -> Rational {
        self.coeffs.iter().fold(Rational::new(), |acc, c| acc + c)
    }

    pub fn scale(&self, c: &Rational) -> ExactPoly {
        ExactPoly::from_coeffs(self.coeffs.iter().map(|a| Rational::from(a * c)))
    }

    /// Divides by `p(1)` so the coefficients sum to one.
    pub fn normalized(&self) -> Result<ExactPoly> {
        let total = self.value_at_one();
        if total.cmp0() == Ordering::Equal {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.scale(&total.recip()))
    }

    pub fn derivative(&self) -> ExactPoly {
        ExactPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * Integer::from(k))),
        )
    }

    pub fn pow(&self, e: u32) -> ExactPoly {
        (0..e).fold(ExactPoly::one(), |acc, _| &acc * self)
    }

    /// Polynomial long division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &ExactPoly) -> Result<(ExactPoly, ExactPoly)> {
        let dd = divisor.degree().ok_or(Error::NonPolynomialQuotient)?;
        let Some(nd) = self.degree() else {
            return Ok((ExactPoly::zero(), ExactPoly::zero()));
        };
        if nd < dd {
            return Ok((ExactPoly::zero(), self.clone()));
        }
        let lead_inv = divisor.coeffs[dd].clone().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::new(); nd - dd + 1];
        let mut t = Rational::new();
        for k in (0..=nd - dd).rev() {
            let q = Rational::from(&rem[k + dd] * &lead_inv);
            if q.cmp0() == Ordering::Equal {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                t.assign(&q * d);
                rem[k + j] -= &t;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((ExactPoly::from_coeffs(quot), ExactPoly::from_coeffs(rem)))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &ExactPoly) -> Result<ExactPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonPolynomialQuotient)
        }
    }

    /// Integer coefficients `w_k` and a positive integer `D` with
    /// `p_k = w_k / D`, `D` the least common denominator.
    pub fn to_integer_scaled(&self) -> (Vec<Integer>, Integer) {
        let mut den = Integer::from(1);
        for c in &self.coeffs {
            den.lcm_mut(c.denom());
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * Integer::from(&den / c.denom()))
            .collect();
        (ints, den)
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.cmp0() == Ordering::Equal {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &ExactPoly {
    type Output = ExactPoly;
    fn add(self, rhs: &ExactPoly) -> ExactPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ExactPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)))
    }
}

impl Sub for &ExactPoly {
    type Output = ExactPoly;
    fn sub(self, rhs: &ExactPoly) -> ExactPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ExactPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)))
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        ExactPoly::from_coeffs(self.coeffs.iter().map(|c| Rational::from(-c)))
    }
}

impl Mul for &ExactPoly {
    type Output = ExactPoly;
    fn mul(self, rhs: &ExactPoly) -> ExactPoly {
        if self.is_zero() || rhs.is_zero() {
            return ExactPoly::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        let mut t = Rational::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0() == Ordering::Equal {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                t.assign(a * b);
                out[i + j] += &t;
            }
        }
        ExactPoly::from_coeffs(out)
    }
}

/// Binary operation selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    ExactDiv,
}

pub fn poly_arith(p: &ExactPoly, q: &ExactPoly, op: PolyOp) -> Result<ExactPoly> {
    match op {
        PolyOp::Add => Ok(p + q),
        PolyOp::Mul => Ok(p * q),
        PolyOp::ExactDiv => p.exact_div(q),
    }
}

/// Normalized raw moments `sum_k p_k k^m / sum_k p_k` for `m = 0..=max_order`.
///
/// The coefficients are taken as (unnormalized) probabilities, so they must
/// be nonnegative and not all zero.
pub fn power_sums(p: &ExactPoly, max_order: usize) -> Result<Vec<Rational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(index) = p.coeffs.iter().position(|c| c.cmp0() == Ordering::Less) {
        return Err(Error::NegativeCoefficient { index });
    }
    let (weights, _) = p.to_integer_scaled();
    let sums = integer_power_sums(&weights, max_order);
    let total = sums[0].clone();
    Ok(sums
        .into_iter()
        .map(|s| Rational::from((s, total.clone())))
        .collect())
}

/// `sum_k w_k k^m` for `m = 0..=max_order`, exact.
pub(crate) fn integer_power_sums(weights: &[Integer], max_order: usize) -> Vec<Integer> {
    let mut sums = vec![Integer::new(); max_order + 1];
    let mut term = Integer::new();
    for (k, w) in weights.iter().enumerate() {
        if w.cmp0() == Ordering::Equal {
            continue;
        }
        term.assign(w);
        for s in sums.iter_mut() {
            *s += &term;
            term *= k as u64;
        }
    }
    sums
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn constructor_trims_and_reports_degree() {
        let p = ExactPoly::from_integers(&[1, 2, 2, 1]);
        assert_eq!(p.degree(), Some(3));
        let z = ExactPoly::from_integers(&[0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        let p = ExactPoly::from_integers(&[1, 0, 0]);
        assert_eq!(p.degree(), Some(0));
    }

    #[test]
    fn inversion_pmf_for_three_sums_to_one() {
        let p = ExactPoly::from_coeffs([q(1, 6), q(2, 6), q(2, 6), q(1, 6)]);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.value_at_one(), 1);
    }

    #[test]
    fn arithmetic_examples() {
        let a = ExactPoly::from_integers(&[1, 1]);
        let b = ExactPoly::from_integers(&[1, 0, 1]);
        assert_eq!(
            poly_arith(&a, &b, PolyOp::Mul).unwrap(),
            ExactPoly::from_integers(&[1, 1, 1, 1])
        );
        let inv3 = ExactPoly::from_integers(&[1, 2, 2, 1]);
        assert_eq!(
            poly_arith(&inv3, &a, PolyOp::ExactDiv).unwrap(),
            ExactPoly::from_integers(&[1, 1, 1])
        );
        assert_eq!(
            poly_arith(&a, &b, PolyOp::ExactDiv),
            Err(Error::NonPolynomialQuotient)
        );
        assert_eq!(
            poly_arith(&a, &b, PolyOp::Add).unwrap(),
            ExactPoly::from_integers(&[2, 1, 1])
        );
    }

    #[test]
    fn division_by_zero_is_rejected() {
        let a = ExactPoly::from_integers(&[1, 1]);
        assert!(a.exact_div(&ExactPoly::zero()).is_err());
    }

    #[test]
    fn power_sum_examples() {
        let coin = ExactPoly::from_integers(&[1, 1]);
        assert_eq!(
            power_sums(&coin, 2).unwrap(),
            vec![q(1, 1), q(1, 2), q(1, 2)]
        );
        let inv3 = ExactPoly::from_integers(&[1, 2, 2, 1]);
        assert_eq!(power_sums(&inv3, 1).unwrap(), vec![q(1, 1), q(3, 2)]);
        let two_point = ExactPoly::from_integers(&[1, 0, 0, 0, 1]);
        assert_eq!(
            power_sums(&two_point, 2).unwrap(),
            vec![q(1, 1), q(2, 1), q(8, 1)]
        );
        assert_eq!(
            power_sums(&ExactPoly::zero(), 2),
            Err(Error::ZeroPolynomial)
        );
        assert_eq!(
            power_sums(&ExactPoly::from_integers(&[1, -1, 1]), 2),
            Err(Error::NegativeCoefficient { index: 1 })
        );
    }

    #[test]
    fn integer_scaling_uses_least_common_denominator() {
        let p = ExactPoly::from_coeffs([q(1, 6), q(1, 4), q(0, 1), q(2, 3)]);
        let (w, d) = p.to_integer_scaled();
        assert_eq!(d, 12);
        assert_eq!(w, vec![Integer::from(2), 3.into(), 0.into(), 8.into()]);
    }

    #[test]
    fn valuation_and_palindromes() {
        let p = ExactPoly::from_coeffs([q(0, 1), q(1, 2), q(1, 2)]);
        assert_eq!(p.valuation(), Some(1));
        assert!(!p.is_palindromic());
        let (v, core) = p.split_valuation();
        assert_eq!(v, 1);
        assert!(core.is_palindromic());
        assert!(ExactPoly::from_integers(&[1, 2, 2, 1]).is_palindromic());
        assert!(!ExactPoly::from_integers(&[1, 2, 0, 1]).is_palindromic());
    }

    #[test]
    fn derivative_and_eval() {
        let p = ExactPoly::from_integers(&[1, 2, 3]);
        assert_eq!(p.derivative(), ExactPoly::from_integers(&[2, 6]));
        assert_eq!(p.eval(&q(1, 2)), q(11, 4));
    }
}
