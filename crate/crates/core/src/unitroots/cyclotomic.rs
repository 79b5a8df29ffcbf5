//! Exact removal of cyclotomic factors.
//!
//! Candidates `d` are found by evaluating the polynomial at `e^{2 pi i/d}` in
//! double precision; every candidate is then confirmed, and its multiplicity
//! found, by exact division by `Phi_d` over the integers.

use std::cmp::Ordering;

use num_complex::Complex64;
use rug::Integer;

use super::intpoly;
use crate::error::{Error, Result};
use crate::exactpoly::quotient_integer;
use crate::par::{self, Execution};

/// Relative size of `|R(e^{2 pi i/d})|` below which `d` is tried exactly.
const CANDIDATE_TOLERANCE: f64 = 1e-8;

/// A cyclotomic factor `Phi_order^multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicFactor {
    pub order: u64,
    pub multiplicity: usize,
}

pub(crate) fn mobius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

pub(crate) fn totients(limit: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for i in 2..=limit {
        if phi[i] == i as u64 {
            for j in (i..=limit).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    phi
}

/// Integer coefficients of the `d`-th cyclotomic polynomial, from
/// `Phi_d = prod_{e | d} (1 - z^e)^{mu(d/e)}` for `d >= 2`.
pub fn cyclotomic_poly(d: u64) -> Vec<Integer> {
    if d == 1 {
        return vec![Integer::from(-1), Integer::from(1)];
    }
    let mut nums = Vec::new();
    let mut dens = Vec::new();
    for e in 1..=d {
        if d % e == 0 {
            match mobius(d / e) {
                1 => nums.push(e),
                -1 => dens.push(e),
                _ => {}
            }
        }
    }
    quotient_integer(&nums, &dens).expect("cyclotomic quotient is exact")
}

/// Splits `c = cofactor * prod Phi_d^{m_d}` with `d >= 2`, fails with
/// [`Error::DegenerateAtOne`] if `z = 1` is a root.
pub(crate) fn strip_cyclotomic(
    c: &[Integer],
    exec: Execution,
) -> Result<(Vec<CyclotomicFactor>, Vec<Integer>)> {
    let total = c.iter().fold(Integer::new(), |acc, x| acc + x);
    if total.cmp0() == Ordering::Equal {
        return Err(Error::DegenerateAtOne);
    }
    let mut factors = Vec::new();
    let mut rest = c.to_vec();
    let phi2 = cyclotomic_poly(2);
    let m = divide_out(&mut rest, &phi2);
    if m > 0 {
        factors.push(CyclotomicFactor {
            order: 2,
            multiplicity: m,
        });
    }
    let deg = rest.len() - 1;
    if deg == 0 {
        return Ok((factors, rest));
    }
    // phi(d) >= d / 6 for every d below 10^7, so no d beyond 7 deg has
    // phi(d) <= deg.
    let limit = 7 * deg + 30;
    let phi = totients(limit);
    let candidates: Vec<u64> = (3..=limit as u64)
        .filter(|&d| phi[d as usize] as usize <= deg)
        .collect();
    let scaled = intpoly::to_scaled_f64(&rest);
    let scale: f64 = scaled.iter().map(|x| x.abs()).sum();
    let hits = par::map_slice(exec, &candidates, |&d| {
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / d as f64);
        intpoly::horner_f64(&scaled, w).norm() <= CANDIDATE_TOLERANCE * scale
    });
    for (&d, hit) in candidates.iter().zip(hits) {
        if !hit || phi[d as usize] as usize > rest.len() - 1 {
            continue;
        }
        let m = divide_out(&mut rest, &cyclotomic_poly(d));
        if m > 0 {
            factors.push(CyclotomicFactor {
                order: d,
                multiplicity: m,
            });
        }
    }
    Ok((factors, rest))
}

/// Divides `c` by the monic `f` as often as exactly possible.
fn divide_out(c: &mut Vec<Integer>, f: &[Integer]) -> usize {
    let mut m = 0;
    while c.len() >= f.len() {
        match intpoly::div_monic_exact(c, f) {
            Some(q) => {
                *c = q;
                m += 1;
            }
            None => break,
        }
    }
    m
}
