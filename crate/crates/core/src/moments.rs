//! Exact distribution view of a nonnegative polynomial: moments, cumulants
//! by two independent routes, the fourth-moment gap, the moment generating
//! function bound for root-unitary laws, and the odd-degree `(1 + z)` lift.

use std::cmp::Ordering;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Assign, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exactpoly::{self, expand_factored, ExactPoly, FactoredSpec, TruncatedSeries};
use crate::specfun;

/// Probability law on `{0, ..., degree}` with `P(X = k) = p_k / p(1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    pmf: ExactPoly,
    total: Rational,
    weights: Vec<Integer>,
    weight_sum: Integer,
}

pub fn make_distribution(p: &ExactPoly) -> Result<Distribution> {
    Distribution::new(p)
}

impl Distribution {
    pub fn new(p: &ExactPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if let Some(index) = p.coeffs().iter().position(|c| c.cmp0() == Ordering::Less) {
            return Err(Error::NegativeCoefficient { index });
        }
        let total = p.value_at_one();
        let pmf = p.scale(&total.clone().recip());
        let (weights, _) = p.to_integer_scaled();
        let weight_sum = weights.iter().fold(Integer::new(), |acc, w| acc + w);
        Ok(Distribution {
            pmf,
            total,
            weights,
            weight_sum,
        })
    }

    /// Point probabilities; they sum to one.
    pub fn pmf(&self) -> &ExactPoly {
        &self.pmf
    }

    pub fn prob(&self, k: usize) -> Rational {
        self.pmf.coeff(k)
    }

    /// Value of the input polynomial at 1.
    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn degree(&self) -> usize {
        self.weights.len() - 1
    }

    /// Integer weights proportional to the probabilities, and their sum.
    pub fn integer_weights(&self) -> (&[Integer], &Integer) {
        (&self.weights, &self.weight_sum)
    }

    pub fn is_palindromic(&self) -> bool {
        self.pmf.is_palindromic()
    }

    pub fn mean(&self) -> Rational {
        if self.is_palindromic() {
            return Rational::from((self.degree() as u64, 2u64));
        }
        self.raw_moments(1).pop().unwrap()
    }

    /// `E X^m` for `m = 0..=max`.
    pub fn raw_moments(&self, max: usize) -> Vec<Rational> {
        self.moments_about(&Rational::new(), max)
    }

    /// `E (X - c)^m` for `m = 0..=max`, exact.
    pub fn moments_about(&self, c: &Rational, max: usize) -> Vec<Rational> {
        let a = c.numer();
        let b = c.denom();
        let sums = shifted_power_sums(&self.weights, a, b, max);
        let mut den = self.weight_sum.clone();
        sums.into_iter()
            .enumerate()
            .map(|(m, s)| {
                if m > 0 {
                    den *= b;
                }
                Rational::from((s, den.clone()))
            })
            .collect()
    }

    /// `E (X - mu)^m` for `m = 0..=max`.
    pub fn central_moments(&self, max: usize) -> Vec<Rational> {
        self.moments_about(&self.mean(), max)
    }

    pub fn central_moment(&self, m: usize) -> Rational {
        self.central_moments(m).pop().unwrap()
    }

    pub fn variance(&self) -> Rational {
        self.central_moment(2)
    }
}

/// `sum_k w_k (b k - a)^m` for `m = 0..=max`.
fn shifted_power_sums(weights: &[Integer], a: &Integer, b: &Integer, max: usize) -> Vec<Integer> {
    if a.cmp0() == Ordering::Equal && *b == 1 {
        return exactpoly::integer_power_sums(weights, max);
    }
    let mut sums = vec![Integer::new(); max + 1];
    let mut base = Integer::new();
    let mut term = Integer::new();
    for (k, w) in weights.iter().enumerate() {
        if w.cmp0() == Ordering::Equal {
            continue;
        }
        base.assign(b * k as u64);
        base -= a;
        term.assign(w);
        for s in sums.iter_mut() {
            *s += &term;
            term *= &base;
        }
    }
    sums
}

pub fn central_moment(d: &Distribution, m: usize) -> Rational {
    d.central_moment(m)
}

/// `E (X - mu)^4 / sigma^4`.
pub fn normalized_fourth(d: &Distribution) -> Result<Rational> {
    let c = d.central_moments(4);
    if c[2].cmp0() == Ordering::Equal {
        return Err(Error::ZeroVariance);
    }
    Ok(&c[4] / Rational::from(c[2].square_ref()))
}

/// Exact cumulants `kappa_1, ..., kappa_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantVector {
    values: Vec<Rational>,
}

impl CumulantVector {
    pub fn new(values: Vec<Rational>) -> Self {
        CumulantVector { values }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `kappa_m` for `1 <= m <= order`.
    pub fn get(&self, m: usize) -> &Rational {
        &self.values[m - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Cumulants from the exact moment generating series of the PMF.
///
/// The series is taken about `n/2` for palindromic laws and about 0
/// otherwise; `kappa_1` is shifted back accordingly.
pub fn cumulants_from_pmf(d: &Distribution, order: usize) -> CumulantVector {
    let center = if d.is_palindromic() {
        Rational::from((d.degree() as u64, 2u64))
    } else {
        Rational::new()
    };
    let moments = d.moments_about(&center, order);
    let mut fact = Integer::from(1);
    let coeffs: Vec<Rational> = moments
        .into_iter()
        .enumerate()
        .map(|(m, mu)| {
            if m > 0 {
                fact *= m as u64;
            }
            mu / &fact
        })
        .collect();
    let mgf = TruncatedSeries::new(order, coeffs);
    let log = exactpoly::series_log(&mgf).expect("moment series has constant term 1");
    let mut fact = Integer::from(1);
    let mut values = Vec::with_capacity(order);
    for m in 1..=order {
        fact *= m as u64;
        values.push(Rational::from(log.coeff(m) * &fact));
    }
    if order >= 1 {
        values[0] += center;
    }
    CumulantVector { values }
}

/// Cumulants of a factored law through the Bernoulli-number closed form
/// `kappa_m = (-1)^m B_m / m * sum_j (b_j^m - a_j^m)` for `m >= 2`, with
/// `kappa_1 = n/2`.
pub fn cumulants_factored(spec: &FactoredSpec, order: usize) -> Result<CumulantVector> {
    expand_factored(spec)?;
    Ok(cumulants_factored_unchecked(spec, order))
}

/// [`cumulants_factored`] without the expansion that certifies `spec`
/// defines a polynomial with nonnegative coefficients.
pub fn cumulants_factored_unchecked(spec: &FactoredSpec, order: usize) -> CumulantVector {
    let bern = specfun::bernoulli(order);
    let mut values = Vec::with_capacity(order);
    for m in 1..=order {
        if m == 1 {
            let n = spec.degree().unwrap_or(0) as u64;
            values.push(Rational::from((n, 2u64)));
            continue;
        }
        let mut v = Rational::from(&bern[m] * spec.power_difference(m as u32));
        v /= m as u64;
        if m % 2 == 1 {
            v = -v;
        }
        values.push(v);
    }
    CumulantVector { values }
}

/// Normalized fourth moment and its distances to the Bernoulli floor 1 and
/// the normal ceiling 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourthMomentGap {
    pub variance: Rational,
    pub m4: Rational,
    /// `3 - m4`.
    pub gap_to_3: Rational,
    /// `m4 - 1`.
    pub gap_to_1: Rational,
    /// Upper bound `3 - 1/(2 sigma^2)` valid for root-unitary laws.
    pub upper_bound: Rational,
    /// Whether `1 <= m4 <= 3 - 1/(2 sigma^2)`; only evaluated for
    /// palindromic laws of even degree.
    pub sandwich: Option<bool>,
}

pub fn fourth_moment_gap(d: &Distribution) -> Result<FourthMomentGap> {
    let c = d.central_moments(4);
    let variance = c[2].clone();
    if variance.cmp0() == Ordering::Equal {
        return Err(Error::ZeroVariance);
    }
    let m4 = &c[4] / Rational::from(variance.square_ref());
    let upper_bound = Rational::from(3) - Rational::from(&variance * 2u32).recip();
    let sandwich =
        (d.is_palindromic() && d.degree() % 2 == 0).then(|| m4 >= 1 && m4 <= upper_bound);
    Ok(FourthMomentGap {
        gap_to_3: Rational::from(3) - &m4,
        gap_to_1: Rational::from(&m4 - 1u32),
        variance,
        m4,
        upper_bound,
        sandwich,
    })
}

/// Outcome of one grid point of [`mgf_bound_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MgfVerdict {
    /// The bound holds with margin above the resolution threshold.
    Holds,
    /// Both sides are exactly 1 (`s = 0`).
    Equal,
    /// The margin is below the resolution threshold in absolute value.
    Inconclusive,
    Violated,
}

#[derive(Clone, Debug)]
pub struct MgfRow {
    pub s: Rational,
    pub lhs: Float,
    /// `exp(3/2 s^2 exp(2|s|/sigma))`, the bound the verdict refers to.
    pub rhs: Float,
    /// `exp(3/2 s^2 exp(2s/sigma))`; below `lhs` for negative `s` in
    /// general, since the left side is even in `s`.
    pub rhs_signed: Float,
    /// `rhs - lhs`.
    pub margin: Float,
    pub verdict: MgfVerdict,
}

#[derive(Clone, Debug)]
pub struct MgfReport {
    pub precision_bits: u32,
    /// Margins at or below this value are reported as inconclusive.
    pub threshold: Float,
    pub rows: Vec<MgfRow>,
}

impl MgfReport {
    /// No grid point violates the bound or is inconclusive.
    pub fn all_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| matches!(r.verdict, MgfVerdict::Holds | MgfVerdict::Equal))
    }
}

pub const MGF_DEFAULT_PRECISION: u32 = 128;

/// Checks `E exp((X - n) s / sigma) <= exp(3/2 s^2 exp(2 |s| / sigma))` on
/// a grid of `s`, where the law has degree `2n` and is palindromic.
///
/// For `s >= 0` this is `exp(3/2 s^2 exp(2 s / sigma))`. For `s < 0` the
/// signed form is not a bound (take `1 + z^2` at `s = -1`); symmetry of the
/// law makes the left side even, so the bound at `|s|` applies.
pub fn mgf_bound_check(
    d: &Distribution,
    s_values: &[Rational],
    precision_bits: u32,
) -> Result<MgfReport> {
    if !d.is_palindromic() {
        return Err(Error::NotPalindromic);
    }
    if d.degree() % 2 == 1 {
        return Err(Error::OddDegree);
    }
    let variance = d.variance();
    if variance.cmp0() == Ordering::Equal {
        return Err(Error::ZeroVariance);
    }
    let prec = precision_bits;
    let n = d.degree() / 2;
    let sigma = Float::with_val(prec, &variance).sqrt();
    let (weights, wsum) = d.integer_weights();
    let wsum = Float::with_val(prec, wsum);
    let threshold = Float::with_val(prec, Float::i_exp(1, -64));
    let mut rows = Vec::with_capacity(s_values.len());
    for s in s_values {
        let t = Float::with_val(prec, s) / &sigma;
        if s.cmp0() == Ordering::Equal {
            let one = Float::with_val(prec, 1);
            rows.push(MgfRow {
                s: s.clone(),
                lhs: one.clone(),
                rhs: one.clone(),
                rhs_signed: one,
                margin: Float::new(prec),
                verdict: MgfVerdict::Equal,
            });
            continue;
        }
        let mut lhs = Float::new(prec);
        let mut x = Float::new(prec);
        for (k, w) in weights.iter().enumerate() {
            if w.cmp0() == Ordering::Equal {
                continue;
            }
            x.assign(&t * (k as i64 - n as i64));
            x.exp_round(Round::Nearest);
            x *= w;
            lhs += &x;
        }
        lhs /= &wsum;
        let s_f = Float::with_val(prec, s);
        let bound = |t: &Float| {
            let e2 = Float::with_val(prec, t * 2u32).exp();
            (Float::with_val(prec, s_f.square_ref()) * e2 * 3u32 / 2u32).exp()
        };
        let rhs = bound(&Float::with_val(prec, t.abs_ref()));
        let rhs_signed = bound(&t);
        let margin = Float::with_val(prec, &rhs - &lhs);
        let verdict = if margin > threshold {
            MgfVerdict::Holds
        } else if margin < Float::with_val(prec, -&threshold) {
            MgfVerdict::Violated
        } else {
            MgfVerdict::Inconclusive
        };
        rows.push(MgfRow {
            s: s.clone(),
            lhs,
            rhs,
            rhs_signed,
            margin,
            verdict,
        });
    }
    Ok(MgfReport {
        precision_bits: prec,
        threshold,
        rows,
    })
}

/// Exact comparison of an odd-degree palindromic law `Y` with the law of
/// `X = Y + B`, `B` a fair coin, whose generating polynomial is `(1+z) q`.
#[derive(Clone, Debug)]
pub struct LiftReport {
    pub lifted: Distribution,
    pub mean_shift: Rational,
    pub variance_shift: Rational,
    /// `mu_4(X) - (3/2) V(X) + 5/16`, to be compared with `mu_4(Y)`.
    pub fourth_from_lift: Rational,
    pub fourth_original: Rational,
}

impl LiftReport {
    pub fn mean_identity(&self) -> bool {
        self.mean_shift == (1, 2)
    }
    pub fn variance_identity(&self) -> bool {
        self.variance_shift == (1, 4)
    }
    pub fn fourth_identity(&self) -> bool {
        self.fourth_from_lift == self.fourth_original
    }
    pub fn all_hold(&self) -> bool {
        self.mean_identity() && self.variance_identity() && self.fourth_identity()
    }
}

pub fn odd_degree_lift(q: &ExactPoly) -> Result<LiftReport> {
    let y = Distribution::new(q)?;
    if y.degree() % 2 == 0 {
        return Err(Error::EvenDegree);
    }
    if !y.is_palindromic() {
        return Err(Error::NotPalindromic);
    }
    let lifted = Distribution::new(&(&ExactPoly::from_integers(&[1, 1]) * q))?;
    // Means are computed from the PMFs rather than taken from symmetry.
    let my = y.raw_moments(1).pop().unwrap();
    let mx = lifted.raw_moments(1).pop().unwrap();
    let cy = y.moments_about(&my, 4);
    let cx = lifted.moments_about(&mx, 4);
    let fourth_from_lift = (&cx[4] - (&cx[2] * Rational::from((3, 2)))) + Rational::from((5, 16));
    Ok(LiftReport {
        mean_shift: mx - my,
        variance_shift: Rational::from(&cx[2] - &cy[2]),
        fourth_from_lift,
        fourth_original: cy[4].clone(),
        lifted,
    })
}

/// `B_2 = 1/6` gives `kappa_2 = sum (b^2 - a^2)/12`; exposed for callers
/// who only need the variance of a factored law.
pub fn factored_variance(spec: &FactoredSpec) -> Rational {
    Rational::from((spec.power_difference(2), 12))
}

/// `|kappa_4| / kappa_2^2` computed from raw power differences.
pub(crate) fn factored_kurtosis_excess(spec: &FactoredSpec) -> Option<Rational> {
    let d2 = spec.power_difference(2);
    if d2.cmp0() == Ordering::Equal {
        return None;
    }
    let d4 = spec.power_difference(4);
    Some(Rational::from((d4 * 144, d2.pow(2u32) * 120)))
}
