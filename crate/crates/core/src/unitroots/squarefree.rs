//! Squarefreeness certificates and, when they fail, exact squarefree
//! decomposition over the rationals.

use rug::{Integer, Rational};

use super::intpoly;
use crate::exactpoly::ExactPoly;

const PRIMES: [u64; 4] = [(1 << 61) - 1, (1 << 31) - 1, 1_000_000_007, 998_244_353];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn reduce(c: &[Integer], p: u64) -> Vec<u64> {
    let pi = Integer::from(p);
    c.iter()
        .map(|x| {
            let mut r = Integer::from(x % &pi);
            if r < 0 {
                r += &pi;
            }
            r.to_u64().unwrap()
        })
        .collect()
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo `b` in `F_p[z]`; `b` nonzero and trimmed.
fn rem_mod(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let inv = powmod(b[db], p - 2, p);
    trim(&mut a);
    while a.len() > db {
        let k = a.len() - 1 - db;
        let f = mulmod(*a.last().unwrap(), inv, p);
        for (j, &bj) in b.iter().enumerate() {
            let t = mulmod(f, bj, p);
            a[k + j] = (a[k + j] + p - t) % p;
        }
        trim(&mut a);
    }
    a
}

fn gcd_degree_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> usize {
    let (mut a, mut b) = (a, b);
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_mod(a, &b, p);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// `Some(true)` if `gcd(c, c') = 1` modulo `p` with no drop in degree for
/// either polynomial (which proves `c` squarefree over the rationals),
/// `Some(false)` if the modular gcd is nontrivial, `None` if `p` is unusable.
fn squarefree_mod(c: &[Integer], p: u64) -> Option<bool> {
    let n = c.len() - 1;
    let f = reduce(c, p);
    if f[n] == 0 || (n as u64) % p == 0 {
        return None;
    }
    let df = reduce(&intpoly::derivative(c), p);
    Some(gcd_degree_mod(f, df, p) == 0)
}

/// Certifies that the integer polynomial `c` has no repeated factor.
pub(crate) fn certify_squarefree(c: &[Integer]) -> bool {
    if c.len() <= 2 {
        return true;
    }
    PRIMES.iter().any(|&p| squarefree_mod(c, p) == Some(true))
}

fn monic(p: &ExactPoly) -> ExactPoly {
    match p.degree() {
        None => p.clone(),
        Some(d) => p.scale(&p.coeffs()[d].clone().recip()),
    }
}

fn gcd(a: &ExactPoly, b: &ExactPoly) -> ExactPoly {
    let (mut a, mut b) = (monic(a), monic(b));
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b).expect("nonzero divisor");
        a = b;
        b = monic(&r);
    }
    a
}

/// Yun's decomposition `c = lc * prod_i s_i^i` into pairwise coprime
/// squarefree `s_i`, returned as primitive integer polynomials with their
/// multiplicities. Constant factors are dropped.
pub(crate) fn squarefree_decomposition(c: &[Integer]) -> Vec<(Vec<Integer>, usize)> {
    let f = ExactPoly::from_coeffs(c.iter().cloned().map(Rational::from));
    let df = f.derivative();
    let a0 = gcd(&f, &df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let c1 = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c1 - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = gcd(&b, &d);
        let nb = b.exact_div(&a).expect("gcd divides");
        let nc = d.exact_div(&a).expect("gcd divides");
        if a.degree().unwrap_or(0) > 0 {
            out.push((to_primitive(&a), i));
        }
        d = &nc - &nb.derivative();
        b = nb;
        i += 1;
    }
    out
}

fn to_primitive(p: &ExactPoly) -> Vec<Integer> {
    let (ints, _) = p.to_integer_scaled();
    intpoly::primitive(ints)
}
