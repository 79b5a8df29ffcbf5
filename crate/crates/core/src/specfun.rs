//! Exact special-number tables: Bernoulli, Stirling (both kinds), Cauchy,
//! Euler, and the coefficients `h_{m,k}` of `(2 sinh(s/2))^{2k}`.
//!
//! Everything is built from integer recurrences; no table here ever passes
//! through floating point.

use std::cmp::Ordering;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::exactpoly::TruncatedSeries;

/// `C(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// `n!`.
pub fn factorial(n: u64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// `B_0, ..., B_max` with the convention `B_1 = -1/2`, from
/// `sum_{j<=m} C(m+1, j) B_j = 0`.
pub fn bernoulli(max: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(max + 1);
    b.push(Rational::from(1));
    for m in 1..=max {
        if m > 1 && m % 2 == 1 {
            b.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            if bj.cmp0() != Ordering::Equal {
                acc += Rational::from(bj * binomial(m as u64 + 1, j as u64));
            }
        }
        acc /= m as u64 + 1;
        b.push(-acc);
    }
    b
}

/// Which Stirling triangle to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StirlingKind {
    /// `S(m, k)`: set partitions of `m` elements into `k` blocks.
    Second,
    /// `[m, k]`: permutations of `m` elements with `k` cycles.
    FirstSignless,
}

/// Rows `0..=max` of the chosen Stirling triangle.
pub fn stirling_table(kind: StirlingKind, max: usize) -> Vec<Vec<Integer>> {
    let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(max + 1);
    rows.push(vec![Integer::from(1)]);
    for m in 1..=max {
        let prev = &rows[m - 1];
        let mut row = vec![Integer::new(); m + 1];
        for k in 1..=m {
            let left = &prev[k - 1];
            let up = prev.get(k).cloned().unwrap_or_default();
            let factor = match kind {
                StirlingKind::Second => k as u64,
                StirlingKind::FirstSignless => m as u64 - 1,
            };
            row[k] = left + up * factor;
        }
        rows.push(row);
    }
    rows
}

pub fn stirling(kind: StirlingKind, m: usize, k: usize) -> Result<Integer> {
    if k > m {
        return Err(Error::IndexOutOfRange { row: m, col: k });
    }
    Ok(stirling_table(kind, m)[m][k].clone())
}

/// Cauchy numbers `A_0..A_max`, the coefficients of `z / log(1 - z)`:
/// `A_0 = -1`, `A_k = -sum_{j<k} A_j / (k + 1 - j)`.
pub fn cauchy(max: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = Vec::with_capacity(max + 1);
    a.push(Rational::from(-1));
    for k in 1..=max {
        let mut acc = Rational::new();
        for (j, aj) in a.iter().enumerate() {
            acc += Rational::from(aj / (k as u64 + 1 - j as u64));
        }
        a.push(-acc);
    }
    debug_assert!(a.iter().skip(1).all(|x| x.cmp0() == Ordering::Greater));
    a
}

/// Even-index Euler numbers `E_0, E_2, ..., E_{2 max}` from
/// `sum_{j<=m} C(2m, 2j) E_{2j} = 0` for `m >= 1`, the coefficient
/// identity behind `cosh(s) * sech(s) = 1`.
pub fn euler(max: usize) -> Vec<Integer> {
    let mut e: Vec<Integer> = Vec::with_capacity(max + 1);
    e.push(Integer::from(1));
    for m in 1..=max {
        let mut acc = Integer::new();
        for (j, ej) in e.iter().enumerate() {
            acc += ej * binomial(2 * m as u64, 2 * j as u64);
        }
        e.push(-acc);
    }
    e
}

/// Table of `h_{m,k}`, defined by `(2 sinh(s/2))^{2k} = sum_{m>=k} h_{m,k} s^{2m}`.
///
/// `(2 sinh(s/2))^2 = 2(cosh s - 1)` so the table comes from powers of one
/// exact even series. Rows are indexed by `m = 0..=max_m`, columns by `k`.
#[derive(Debug, Clone)]
pub struct SinhPowerTable {
    max_m: usize,
    rows: Vec<Vec<Rational>>,
}

impl SinhPowerTable {
    pub fn new(max_m: usize) -> Self {
        let order = 2 * max_m;
        // 2(cosh s - 1) = sum_{j>=1} 2 s^{2j} / (2j)!
        let mut c = vec![Rational::new(); order + 1];
        let mut fact = Integer::from(1);
        for i in 1..=order {
            fact *= i as u64;
            if i % 2 == 0 {
                c[i] = Rational::from((Integer::from(2), fact.clone()));
            }
        }
        let base = TruncatedSeries::new(order, c);
        let mut rows = vec![vec![Rational::new(); max_m + 1]; max_m + 1];
        let mut power = TruncatedSeries::one(order);
        for k in 0..=max_m {
            for (m, row) in rows.iter_mut().enumerate() {
                row[k] = power.coeff(2 * m).clone();
            }
            power = &power * &base;
        }
        SinhPowerTable { max_m, rows }
    }

    pub fn max_m(&self) -> usize {
        self.max_m
    }

    pub fn get(&self, m: usize, k: usize) -> Result<&Rational> {
        if k == 0 || k > m || m > self.max_m {
            return Err(Error::IndexOutOfRange { row: m, col: k });
        }
        Ok(&self.rows[m][k])
    }
}

/// `h_{m,k}`; valid for `1 <= k <= m`.
pub fn sinh_power(m: usize, k: usize) -> Result<Rational> {
    if k == 0 || k > m {
        return Err(Error::IndexOutOfRange { row: m, col: k });
    }
    SinhPowerTable::new(m).get(m, k).cloned()
}

/// Rising factorial `x (x+1) ... (x+n-1)`.
pub fn rising(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::from(1);
    let mut t = x.clone();
    for _ in 0..n {
        acc *= &t;
        t += 1;
    }
    acc
}

/// Generalized binomial `C(x + n - 1, n) = x^(n rising) / n!`.
pub fn multiset_binomial(x: &Rational, n: usize) -> Rational {
    rising(x, n) / factorial(n as u64)
}
