use std::cmp::Ordering;

use rug::ops::Pow;
use rug::Integer;

use super::ExactPoly;
use crate::error::{Error, Result};

/// The rational function `prod_j (1 - z^{b_j}) / prod_j (1 - z^{a_j})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredSpec {
    pub numerator: Vec<u64>,
    pub denominator: Vec<u64>,
}

impl FactoredSpec {
    pub fn new(numerator: Vec<u64>, denominator: Vec<u64>) -> Result<Self> {
        let spec = FactoredSpec {
            numerator,
            denominator,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.numerator.len() != self.denominator.len() {
            return Err(Error::InvalidFactoredSpec(format!(
                "{} numerator exponents but {} denominator exponents",
                self.numerator.len(),
                self.denominator.len()
            )));
        }
        if self
            .numerator
            .iter()
            .chain(&self.denominator)
            .any(|&e| e == 0)
        {
            return Err(Error::InvalidFactoredSpec(
                "exponents must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.numerator.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerator.is_empty()
    }

    /// `sum_j (b_j - a_j)`, or `None` when it is negative.
    pub fn degree(&self) -> Option<usize> {
        let b: u64 = self.numerator.iter().sum();
        let a: u64 = self.denominator.iter().sum();
        b.checked_sub(a).map(|d| d as usize)
    }

    /// `prod b_j / prod a_j`, the value of the expansion at `z = 1`.
    pub fn value_at_one(&self) -> rug::Rational {
        let num = self
            .numerator
            .iter()
            .fold(Integer::from(1), |acc, &b| acc * b);
        let den = self
            .denominator
            .iter()
            .fold(Integer::from(1), |acc, &a| acc * a);
        rug::Rational::from((num, den))
    }

    /// `sum_j (b_j^m - a_j^m)`.
    pub fn power_difference(&self, m: u32) -> Integer {
        let pw = |e: u64| Integer::from(e).pow(m);
        let b = self
            .numerator
            .iter()
            .fold(Integer::new(), |acc, &e| acc + pw(e));
        let a = self
            .denominator
            .iter()
            .fold(Integer::new(), |acc, &e| acc + pw(e));
        b - a
    }
}

/// `c * (1 - z^b)` in place; `c` must already have room for the new top
/// coefficients.
fn mul_one_minus(c: &mut [Integer], len: usize, b: usize) -> usize {
    let new_len = len + b;
    for k in (b..new_len).rev() {
        let (lo, hi) = c.split_at_mut(k);
        hi[0] -= &lo[k - b];
    }
    new_len
}

/// `c / (1 - z^a)` in place, checking that the division is exact.
fn div_one_minus(c: &mut Vec<Integer>, a: usize) -> Result<()> {
    let len = c.len();
    if len == 0 {
        return Ok(());
    }
    if len <= a {
        return Err(Error::NonPolynomialQuotient);
    }
    let qlen = len - a;
    for k in a..qlen {
        let (lo, hi) = c.split_at_mut(k);
        hi[0] += &lo[k - a];
    }
    // The top a coefficients must be exactly -q_{k-a}.
    for k in qlen..len {
        let mut t = c[k].clone();
        if k >= a {
            t += &c[k - a];
        }
        if t.cmp0() != Ordering::Equal {
            return Err(Error::NonPolynomialQuotient);
        }
    }
    c.truncate(qlen);
    Ok(())
}

fn mul_integer(p: &[Integer], q: &[Integer]) -> Vec<Integer> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Integer::new(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.cmp0() == Ordering::Equal {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `1 + z^a + ... + z^{b-a}` for `a | b`, i.e. `(1 - z^b)/(1 - z^a)`.
fn geometric_block(a: usize, b: usize) -> Vec<Integer> {
    let mut c = vec![Integer::new(); b - a + 1];
    for k in (0..=b - a).step_by(a) {
        c[k] = Integer::from(1);
    }
    c
}

fn check_nonnegative(c: &[Integer]) -> Result<()> {
    match c.iter().position(|x| x.cmp0() == Ordering::Less) {
        Some(index) => Err(Error::NegativeCoefficient { index }),
        None => Ok(()),
    }
}

fn precheck(spec: &FactoredSpec) -> Result<usize> {
    spec.validate()?;
    spec.degree().ok_or(Error::NonPolynomialQuotient)
}

/// Expands a factored spec, first cancelling every factor `(1 - z^a)`
/// against a numerator factor `(1 - z^b)` with `a | b`, so intermediate
/// results stay polynomial. Leftover factors go through
/// [`expand_factored_direct`]'s numerator-then-divide scheme.
pub fn expand_factored(spec: &FactoredSpec) -> Result<ExactPoly> {
    precheck(spec)?;
    let mut nums: Vec<u64> = spec.numerator.clone();
    let mut dens: Vec<u64> = spec.denominator.clone();
    // Largest denominators first: they have the fewest admissible partners.
    dens.sort_unstable_by(|x, y| y.cmp(x));
    nums.sort_unstable();
    let mut blocks = Vec::new();
    let mut left_dens = Vec::new();
    for a in dens {
        match nums.iter().position(|&b| b >= a && b % a == 0) {
            Some(i) => blocks.push((a as usize, nums.remove(i) as usize)),
            None => left_dens.push(a),
        }
    }
    let mut acc = vec![Integer::from(1)];
    // Multiply small blocks first to keep the working polynomial short.
    blocks.sort_unstable_by_key(|&(a, b)| b - a);
    for (a, b) in blocks {
        if a == b {
            continue;
        }
        acc = multiply_block(&acc, a, b);
    }
    let acc = apply_quotient(acc, &nums, &left_dens)?;
    check_nonnegative(&acc)?;
    Ok(ExactPoly::from_integer_vec(acc))
}

/// `p * (1 + z^a + ... + z^{b-a})` via a sliding-window sum.
fn multiply_block(p: &[Integer], a: usize, b: usize) -> Vec<Integer> {
    if a == 1 {
        // Running window of width b over p.
        let len = p.len() + b - 1;
        let mut out = Vec::with_capacity(len);
        let mut window = Integer::new();
        for k in 0..len {
            if k < p.len() {
                window += &p[k];
            }
            if k >= b {
                window -= &p[k - b];
            }
            out.push(window.clone());
        }
        out
    } else {
        mul_integer(p, &geometric_block(a, b))
    }
}

fn apply_quotient(mut acc: Vec<Integer>, nums: &[u64], dens: &[u64]) -> Result<Vec<Integer>> {
    let extra: usize = nums.iter().map(|&b| b as usize).sum();
    let mut len = acc.len();
    acc.resize(len + extra, Integer::new());
    for &b in nums {
        len = mul_one_minus(&mut acc, len, b as usize);
    }
    for &a in dens {
        div_one_minus(&mut acc, a as usize)?;
    }
    while acc.last().is_some_and(|c| c.cmp0() == Ordering::Equal) {
        acc.pop();
    }
    Ok(acc)
}

/// Integer coefficients of `prod (1 - z^b) / prod (1 - z^a)` with no sign
/// check, failing only when the quotient is not a polynomial.
pub(crate) fn quotient_integer(nums: &[u64], dens: &[u64]) -> Result<Vec<Integer>> {
    apply_quotient(vec![Integer::from(1)], nums, dens)
}

/// Expands the full numerator product and then divides by each
/// denominator factor in turn. Slower than [`expand_factored`] but makes no
/// assumption about divisibility between exponents; the two must agree.
pub fn expand_factored_direct(spec: &FactoredSpec) -> Result<ExactPoly> {
    precheck(spec)?;
    let acc = apply_quotient(vec![Integer::from(1)], &spec.numerator, &spec.denominator)?;
    check_nonnegative(&acc)?;
    Ok(ExactPoly::from_integer_vec(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(b: &[u64], a: &[u64]) -> FactoredSpec {
        FactoredSpec::new(b.to_vec(), a.to_vec()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(
            expand_factored(&spec(&[2], &[1])).unwrap(),
            ExactPoly::from_integers(&[1, 1])
        );
        assert_eq!(
            expand_factored(&spec(&[1, 2, 3], &[1, 1, 1])).unwrap(),
            ExactPoly::from_integers(&[1, 2, 2, 1])
        );
        assert_eq!(
            expand_factored(&spec(&[2], &[3])),
            Err(Error::NonPolynomialQuotient)
        );
        assert_eq!(
            expand_factored_direct(&spec(&[2], &[3])),
            Err(Error::NonPolynomialQuotient)
        );
    }

    #[test]
    fn non_dividing_exponents_use_fallback() {
        // (1-z^4)(1-z^6)/((1-z^2)(1-z^3)) = (1+z^2)(1+z^3)
        let s = spec(&[4, 6], &[3, 2]);
        let want = ExactPoly::from_integers(&[1, 0, 1, 1, 0, 1]);
        assert_eq!(expand_factored(&s).unwrap(), want);
        assert_eq!(expand_factored_direct(&s).unwrap(), want);
        // Gaussian binomial [4 choose 2].
        let g = spec(&[4, 3], &[1, 2]);
        assert_eq!(
            expand_factored(&g).unwrap(),
            ExactPoly::from_integers(&[1, 1, 2, 1, 1])
        );
        assert_eq!(
            expand_factored_direct(&g).unwrap(),
            expand_factored(&g).unwrap()
        );
    }

    #[test]
    fn inexact_and_negative_cases() {
        assert_eq!(
            expand_factored(&spec(&[3], &[2])),
            Err(Error::NonPolynomialQuotient)
        );
        // (1-z^2)(1-z^3)/((1-z)(1-z^4)) is not a polynomial either.
        assert!(expand_factored(&spec(&[2, 3], &[1, 4])).is_err());
        assert_eq!(
            expand_factored(&spec(&[2, 2], &[1, 2])).unwrap(),
            ExactPoly::from_integers(&[1, 1])
        );
        assert!(matches!(
            FactoredSpec::new(vec![1], vec![]),
            Err(Error::InvalidFactoredSpec(_))
        ));
        assert!(FactoredSpec::new(vec![0], vec![1]).is_err());
    }

    #[test]
    fn negative_coefficients_are_reported() {
        let s = FactoredSpec {
            numerator: vec![1, 2, 3],
            denominator: vec![3],
        };
        assert!(s.validate().is_err());
        let s = spec(&[1, 6], &[2, 3]);
        // (1-z)(1-z^6)/((1-z^2)(1-z^3)) = 1 - z + z^2
        let direct = expand_factored_direct(&s);
        assert!(matches!(direct, Err(Error::NegativeCoefficient { .. })));
        assert_eq!(expand_factored(&s), direct);
    }

    #[test]
    fn value_at_one_matches_product_ratio() {
        let s = spec(&[5, 6, 7, 8], &[1, 2, 3, 4]);
        let p = expand_factored(&s).unwrap();
        assert_eq!(p.value_at_one(), s.value_at_one());
        assert_eq!(p.value_at_one(), 70);
    }
}
