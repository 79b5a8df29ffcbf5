//! Limit-law diagnostics: the fourth-moment classification, the cumulant
//! condition for factored families, the `(q, q_k)` readout from the jump
//! function, reference-law moment tables, convergence sweeps and the
//! Kolmogorov distance to the matched normal law.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exactpoly::FactoredSpec;
use crate::families::FamilySpec;
use crate::moments::{self, cumulants_from_pmf, Distribution};
use crate::par::{self, Execution};
use crate::specfun::{binomial, factorial};
use crate::unitroots::{self, AngleOptions, AngleProfile, Jump, JumpFunction};

/// Positive zeros of `J_0`.
pub const BESSEL_J0_ZEROS: [f64; 5] = [
    2.404825557695773,
    5.520078110286311,
    8.653727912911013,
    11.79153443901428,
    14.93091770848779,
];

/// Positive zeros of `J_{3/2}`, the roots of `tan x = x`.
pub const BESSEL_J3_2_ZEROS: [f64; 5] = [
    4.493409457909064,
    7.725251836937707,
    10.904_121_659_428_9,
    14.06619391283147,
    17.22075527193077,
];

/// Jumps below this mass are not resolved.
pub const RESOLUTION_FLOOR: f64 = 1e-6;
/// Gap below which the normal or Bernoulli verdict is reported.
pub const GAP_THRESHOLD: f64 = 0.05;
/// Relative tolerance for matching standardized moments.
pub const MATCH_TOLERANCE: f64 = 0.02;
/// Largest jump below which an unmatched law is not called a mixture.
pub const MIXTURE_JUMP: f64 = 0.05;

/// A limit law with exactly known moments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReferenceLaw {
    Normal,
    /// `+-1` with probability `1/2` each.
    BernoulliPm1,
    /// Uniform with mean 0 and variance 1.
    UniformCentered,
    /// Density proportional to `x^k (1-x)^k` on `[0, 1]`.
    BetaKK(u32),
    /// Binomial with `l` trials and success probability `1/2`.
    BinomialHalf(u32),
    /// Density `1/(pi sqrt(x(1-x)))` on `[0, 1]`.
    Arcsine,
}

impl ReferenceLaw {
    /// Parses `normal`, `bernoulli_pm1`, `uniform_centered`, `beta_kk`,
    /// `binomial_half` or `arcsine`; `param` is `k` or `l` where needed.
    pub fn from_name(name: &str, param: Option<u32>) -> Result<Self> {
        let need = |p: Option<u32>| {
            p.ok_or_else(|| Error::InvalidParams(format!("{name} needs a parameter")))
        };
        Ok(match name {
            "normal" => ReferenceLaw::Normal,
            "bernoulli_pm1" => ReferenceLaw::BernoulliPm1,
            "uniform_centered" => ReferenceLaw::UniformCentered,
            "beta_kk" => ReferenceLaw::BetaKK(need(param)?),
            "binomial_half" => ReferenceLaw::BinomialHalf(need(param)?),
            "arcsine" => ReferenceLaw::Arcsine,
            _ => return Err(Error::UnknownLaw(name.to_string())),
        })
    }

    /// Verdict a match against this law produces.
    pub fn verdict(&self) -> Verdict {
        match self {
            ReferenceLaw::Normal => Verdict::Normal,
            ReferenceLaw::BernoulliPm1 => Verdict::Bernoulli,
            ReferenceLaw::UniformCentered | ReferenceLaw::BetaKK(0) => Verdict::UniformLike,
            ReferenceLaw::BetaKK(_) | ReferenceLaw::Arcsine => Verdict::BetaLike,
            ReferenceLaw::BinomialHalf(_) => Verdict::BinomialLike,
        }
    }

    /// The `q_k` of the product representation, first `count` terms, where
    /// known; the normal law has none.
    pub fn q_sequence(&self, count: usize, prec: u32) -> Option<Vec<Float>> {
        let pi2 = Float::with_val(prec, Constant::Pi).square();
        let seq = |f: &dyn Fn(u64) -> Float| (1..=count as u64).map(f).collect::<Vec<_>>();
        match self {
            ReferenceLaw::Normal => Some(Vec::new()),
            ReferenceLaw::BernoulliPm1 | ReferenceLaw::BinomialHalf(1) => Some(seq(&|k| {
                Float::with_val(prec, 8u32)
                    / Float::with_val(prec, &pi2 * ((2 * k - 1) * (2 * k - 1)))
            })),
            ReferenceLaw::UniformCentered | ReferenceLaw::BetaKK(0) => Some(seq(&|k| {
                Float::with_val(prec, 6u32) / Float::with_val(prec, &pi2 * (k * k))
            })),
            ReferenceLaw::BinomialHalf(l) => {
                // cosh(s/sqrt l)^l: every Bernoulli atom divided by l, repeated l times.
                let l = *l as u64;
                let mut out = Vec::with_capacity(count);
                'outer: for k in 1.. {
                    for _ in 0..l {
                        if out.len() == count {
                            break 'outer;
                        }
                        out.push(
                            Float::with_val(prec, 8u32)
                                / Float::with_val(prec, &pi2 * ((2 * k - 1) * (2 * k - 1) * l)),
                        );
                    }
                }
                Some(out)
            }
            ReferenceLaw::BetaKK(1) if count <= BESSEL_J3_2_ZEROS.len() => Some(
                BESSEL_J3_2_ZEROS[..count]
                    .iter()
                    .map(|z| Float::with_val(prec, 10u32) / Float::with_val(prec, z * z))
                    .collect(),
            ),
            ReferenceLaw::Arcsine if count <= BESSEL_J0_ZEROS.len() => Some(
                BESSEL_J0_ZEROS[..count]
                    .iter()
                    .map(|z| Float::with_val(prec, 4u32) / Float::with_val(prec, z * z))
                    .collect(),
            ),
            _ => None,
        }
    }
}

impl fmt::Display for ReferenceLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceLaw::Normal => write!(f, "normal"),
            ReferenceLaw::BernoulliPm1 => write!(f, "bernoulli_pm1"),
            ReferenceLaw::UniformCentered => write!(f, "uniform_centered"),
            ReferenceLaw::BetaKK(k) => write!(f, "beta_kk(k={k})"),
            ReferenceLaw::BinomialHalf(l) => write!(f, "binomial_half(l={l})"),
            ReferenceLaw::Arcsine => write!(f, "arcsine"),
        }
    }
}

/// `m`-th moment of `law`: about zero for the normal, Bernoulli and
/// centered uniform laws, raw moments on `[0, 1]` for Beta and arcsine,
/// raw moments on `{0..l}` for the binomial.
pub fn reference_moments(law: &ReferenceLaw, m: usize) -> Result<Rational> {
    let mu = m as u64;
    Ok(match law {
        ReferenceLaw::Normal => {
            if m % 2 == 1 {
                Rational::new()
            } else {
                // (m - 1)!!
                Rational::from((1..mu).step_by(2).fold(Integer::from(1), |a, j| a * j))
            }
        }
        ReferenceLaw::BernoulliPm1 => Rational::from(u32::from(m % 2 == 0)),
        ReferenceLaw::UniformCentered => {
            if m % 2 == 1 {
                Rational::new()
            } else {
                Rational::from((Integer::from(3u32).pow(m as u32 / 2), Integer::from(mu + 1)))
            }
        }
        ReferenceLaw::BetaKK(k) => {
            let k = *k as u64;
            Rational::from((
                factorial(k + mu) * factorial(2 * k + 1),
                factorial(k) * factorial(2 * k + mu + 1),
            ))
        }
        ReferenceLaw::BinomialHalf(l) => {
            let l = *l as u64;
            let s: Integer = (0..=l)
                .map(|j| binomial(l, j) * Integer::from(j).pow(m as u32))
                .sum();
            Rational::from((s, Integer::from(1) << l as u32))
        }
        ReferenceLaw::Arcsine => {
            Rational::from((binomial(2 * mu, mu), Integer::from(1) << (2 * m as u32)))
        }
    })
}

fn central_from_raw(raw: &[Rational]) -> Vec<Rational> {
    let mean = raw[1].clone();
    (0..raw.len())
        .map(|m| {
            let mut acc = Rational::new();
            for j in 0..=m {
                let mut t = Rational::from(&raw[j] * binomial(m as u64, j as u64));
                t *= Rational::from((&mean).pow((m - j) as i32));
                if (m - j) % 2 == 1 {
                    acc -= t;
                } else {
                    acc += t;
                }
            }
            acc
        })
        .collect()
}

/// Standardized moments `E((X - mu)^m) / sigma^m` for `m = 0..=max`.
fn standardized(central: &[Rational]) -> Vec<f64> {
    let sd = central[2].to_f64().sqrt();
    central
        .iter()
        .enumerate()
        .map(|(m, c)| c.to_f64() / sd.powi(m as i32))
        .collect()
}

/// Standardized moments of `law` for `m = 0..=max`.
pub fn reference_standardized_moments(law: &ReferenceLaw, max: usize) -> Vec<f64> {
    let raw: Vec<Rational> = (0..=max.max(2))
        .map(|m| reference_moments(law, m).expect("known law"))
        .collect();
    standardized(&central_from_raw(&raw))[..=max].to_vec()
}

/// Reported verdict of [`classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Normal,
    Bernoulli,
    UniformLike,
    BetaLike,
    BinomialLike,
    Mixture,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Normal => "normal",
            Verdict::Bernoulli => "bernoulli",
            Verdict::UniformLike => "uniform-like",
            Verdict::BetaLike => "beta-like",
            Verdict::BinomialLike => "binomial-like",
            Verdict::Mixture => "mixture",
            Verdict::Undetermined => "undetermined",
        })
    }
}

/// `q` and the largest jump masses of a finite-`n` jump function.
#[derive(Clone, Debug)]
pub struct ProductParams {
    /// `1 - sum` of all jump masses at or above the resolution floor.
    pub q: Float,
    /// The `K` largest masses, descending.
    pub q_list: Vec<Float>,
    /// Number of jumps at or above the resolution floor.
    pub resolved: usize,
    /// Sum of the mass error bounds of the resolved jumps.
    pub q_error: Float,
}

/// Reads `q` and `q_1, ..., q_K` off the jump function.
pub fn extract_product_params(jf: &JumpFunction, k: usize) -> ProductParams {
    let prec = jf.precision_bits;
    let floor = Float::with_val(prec, RESOLUTION_FLOOR);
    let resolved: Vec<&Jump> = jf.jumps.iter().filter(|j| j.mass >= floor).collect();
    let q_error = resolved
        .iter()
        .fold(Float::new(prec), |a, j| a + &j.mass_error);
    let mut masses: Vec<&Float> = resolved.iter().map(|j| &j.mass).collect();
    masses.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    let resolved_sum = masses.iter().fold(Float::new(prec), |a, m| a + *m);
    ProductParams {
        q_error,
        q: Float::with_val(prec, 1u32) - resolved_sum,
        q_list: masses.iter().take(k).map(|m| (*m).clone()).collect(),
        resolved: masses.len(),
    }
}

/// `3 + 1/sigma^2 - 3 sum_j mass_j location_j` from the jump function.
pub fn fourth_moment_from_jumps(jf: &JumpFunction, variance: &Rational) -> Float {
    let prec = jf.precision_bits;
    let inv = Float::with_val(prec, variance).recip();
    Float::with_val(prec, 3u32) + inv - jf.second_moment() * 3u32
}

/// `(144/120) sum (b^4 - a^4) / (sum (b^2 - a^2))^2`, equal to
/// `|kappa_4| / kappa_2^2` of the factored law.
pub fn cumulant_condition(spec: &FactoredSpec) -> Result<Rational> {
    spec.validate()?;
    moments::factored_kurtosis_excess(spec).ok_or(Error::DegenerateSpec)
}

/// Evidence behind a verdict.
#[derive(Clone, Debug)]
pub struct Evidence {
    pub variance: Rational,
    pub m4: Rational,
    pub gap_to_3: Rational,
    pub gap_to_1: Rational,
    /// Standardized moments 0..=6.
    pub standardized_moments: Vec<f64>,
    pub matched_law: Option<ReferenceLaw>,
    /// Largest relative deviation from the matched law over moments 3..=6.
    pub match_error: Option<f64>,
    pub top_jump: Option<Float>,
    /// `|q_k - q_k(law)|` for the matched law, where its sequence is known.
    pub q_residuals: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LimitLawDescriptor {
    pub verdict: Verdict,
    pub q: Option<Float>,
    pub q_list: Vec<Float>,
    pub evidence: Evidence,
}

/// Number of jumps read out by [`classify`].
pub const CLASSIFY_TOP_K: usize = 5;

fn candidate_laws() -> Vec<ReferenceLaw> {
    let mut v = vec![ReferenceLaw::UniformCentered, ReferenceLaw::Arcsine];
    v.extend((1..=8).map(ReferenceLaw::BetaKK));
    v.extend((2..=32).map(ReferenceLaw::BinomialHalf));
    v
}

fn match_error(ours: &[f64], theirs: &[f64]) -> f64 {
    (3..=6)
        .map(|m| {
            if m % 2 == 1 {
                (ours[m] - theirs[m]).abs()
            } else {
                (ours[m] / theirs[m] - 1.0).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Classifies the law of `d` from its fourth moment and, beyond the two
/// extremes, from its first six standardized moments. With an angle
/// profile the `(q, q_k)` readout is attached.
///
/// A single instance cannot certify a limit: the verdict is a reporting
/// convenience and always comes with the raw evidence.
pub fn classify(d: &Distribution, ap: Option<&AngleProfile>) -> Result<LimitLawDescriptor> {
    let gap = moments::fourth_moment_gap(d)?;
    let ours = standardized(&d.central_moments(6));
    let (q, q_list, top_jump) = match ap {
        Some(ap) => {
            let pp = extract_product_params(&unitroots::jump_function(ap), CLASSIFY_TOP_K);
            let top = pp.q_list.first().cloned();
            (Some(pp.q), pp.q_list, top)
        }
        None => (None, Vec::new(), None),
    };
    let mut best: Option<(ReferenceLaw, f64)> = None;
    for law in candidate_laws() {
        let e = match_error(&ours, &reference_standardized_moments(&law, 6));
        if e < MATCH_TOLERANCE && best.as_ref().is_none_or(|(_, b)| e < *b) {
            best = Some((law, e));
        }
    }
    let verdict = if gap.gap_to_1.to_f64() < GAP_THRESHOLD {
        Verdict::Bernoulli
    } else if gap.gap_to_3.to_f64() < GAP_THRESHOLD {
        Verdict::Normal
    } else if let Some((law, _)) = &best {
        law.verdict()
    } else if top_jump.as_ref().is_some_and(|t| t.to_f64() > MIXTURE_JUMP) {
        Verdict::Mixture
    } else {
        Verdict::Undetermined
    };
    let q_residuals = match (&best, ap) {
        (Some((law, _)), Some(_)) => law
            .q_sequence(q_list.len(), q_list.first().map_or(64, Float::prec))
            .map(|refq| {
                q_list
                    .iter()
                    .zip(&refq)
                    .map(|(a, b)| Float::with_val(a.prec(), a - b).abs().to_f64())
                    .collect()
            })
            .unwrap_or_default(),
        _ => Vec::new(),
    };
    Ok(LimitLawDescriptor {
        verdict,
        q,
        q_list,
        evidence: Evidence {
            variance: gap.variance,
            m4: gap.m4,
            gap_to_3: gap.gap_to_3,
            gap_to_1: gap.gap_to_1,
            standardized_moments: ours,
            match_error: best.as_ref().map(|(_, e)| *e),
            matched_law: best.map(|(l, _)| l),
            top_jump,
            q_residuals,
        },
    })
}

/// One line of [`cumulant_sign_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantSign {
    pub order: usize,
    pub value: Rational,
    /// `(-1)^{m-1} kappa_{2m} > 0`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantSignReport {
    pub rows: Vec<CumulantSign>,
}

impl CumulantSignReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &CumulantSign> {
        self.rows.iter().filter(|r| !r.holds)
    }
}

/// Checks `(-1)^{m-1} kappa_{2m} > 0` for `2m <= max_order` on the exact
/// cumulants of `d`. Violations are reported, not raised.
pub fn cumulant_sign_check(d: &Distribution, max_order: usize) -> Result<CumulantSignReport> {
    if !d.is_palindromic() {
        return Err(Error::NotPalindromic);
    }
    if d.degree() % 2 == 1 {
        return Err(Error::OddDegree);
    }
    if d.degree() == 0 {
        return Err(Error::ZeroVariance);
    }
    let k = cumulants_from_pmf(d, max_order);
    let rows = (1..=max_order / 2)
        .map(|m| {
            let value = k.get(2 * m).clone();
            let sign = value.cmp0();
            let holds = if m % 2 == 1 {
                sign == Ordering::Greater
            } else {
                sign == Ordering::Less
            };
            CumulantSign {
                order: 2 * m,
                value,
                holds,
            }
        })
        .collect();
    Ok(CumulantSignReport { rows })
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// Also extract root angles and report the top jump mass.
    pub angles: bool,
    pub precision_bits: u32,
    pub execution: Execution,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            angles: false,
            precision_bits: unitroots::DEFAULT_PRECISION_BITS,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepData {
    pub degree: usize,
    pub variance: Rational,
    pub m4: Rational,
    pub gap_to_3: Rational,
    pub gap_to_1: Rational,
    pub cumulant_condition: Option<Rational>,
    pub top_jump: Option<Float>,
    pub top_jump_error: Option<Float>,
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub spec: FamilySpec,
    pub result: Result<SweepData>,
}

fn sweep_row(spec: &FamilySpec, opts: &SweepOptions) -> Result<SweepData> {
    let out = spec.generate()?;
    let d = Distribution::new(&out.poly)?;
    let gap = moments::fourth_moment_gap(&d)?;
    let cumulant_condition = spec
        .factored_spec()
        .and_then(|fs| cumulant_condition(&fs).ok());
    let (top_jump, top_jump_error) = if opts.angles {
        let (_, stripped) = out.poly.split_valuation();
        let aopts = AngleOptions {
            execution: Execution::Sequential,
            ..AngleOptions::with_precision(opts.precision_bits)
        };
        let ap = unitroots::unit_angles_with(&stripped, &aopts)?;
        let jf = unitroots::jump_function(&ap);
        match jf
            .jumps
            .iter()
            .max_by(|a, b| a.mass.partial_cmp(&b.mass).unwrap_or(Ordering::Equal))
        {
            Some(j) => (Some(j.mass.clone()), Some(j.mass_error.clone())),
            None => (None, None),
        }
    } else {
        (None, None)
    };
    Ok(SweepData {
        degree: d.degree(),
        variance: gap.variance,
        m4: gap.m4,
        gap_to_3: gap.gap_to_3,
        gap_to_1: gap.gap_to_1,
        cumulant_condition,
        top_jump,
        top_jump_error,
    })
}

/// Evaluates every row of `schedule`; rows run in parallel and failures
/// are recorded per row. Output order follows the schedule.
pub fn convergence_sweep(schedule: &[FamilySpec], opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    if schedule.is_empty() {
        return Err(Error::InvalidParams("empty sweep schedule".into()));
    }
    Ok(par::map_slice(opts.execution, schedule, |spec| SweepRow {
        spec: spec.clone(),
        result: sweep_row(spec, opts),
    }))
}

/// How the discrete CDF is compared with the normal one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum KolmogorovConvention {
    /// `sup_x |F(x) - Phi((x - mu)/sigma)|` over all real `x`, attained at
    /// one side of a support point.
    #[default]
    Classical,
    /// `max_k |F(k) - Phi((k + 1/2 - mu)/sigma)|`.
    ContinuityCorrected,
    /// `max_k |(F(k-) + F(k))/2 - Phi((k - mu)/sigma)|`.
    JumpMidpoint,
}

/// Distance to the normal law with the same mean and variance, at
/// `precision_bits`.
pub fn kolmogorov_distance_to_normal(d: &Distribution) -> Result<Float> {
    kolmogorov_distance_with(d, KolmogorovConvention::Classical, 128)
}

pub fn kolmogorov_distance_with(
    d: &Distribution,
    conv: KolmogorovConvention,
    precision_bits: u32,
) -> Result<Float> {
    let prec = precision_bits;
    let var = d.variance();
    if var.cmp0() == Ordering::Equal {
        return Err(Error::ZeroVariance);
    }
    let mean = d.mean();
    let sd = Float::with_val(prec, &var).sqrt();
    let sqrt2 = Float::with_val(prec, 2u32).sqrt();
    let phi = |x: Rational| -> Float {
        let z = Float::with_val(prec, x - &mean) / &sd;
        Float::with_val(prec, -z / &sqrt2).erfc() / 2u32
    };
    let mut below = Rational::new();
    let mut worst = Float::new(prec);
    let mut upd = |v: Float| {
        let v = v.abs();
        if v > worst {
            worst = v;
        }
    };
    for k in 0..=d.degree() {
        let above = &below + d.prob(k);
        let kq = Rational::from(k as u64);
        match conv {
            KolmogorovConvention::Classical => {
                let p = phi(kq);
                upd(Float::with_val(prec, &p - &below));
                upd(Float::with_val(prec, &p - &above));
            }
            KolmogorovConvention::ContinuityCorrected => {
                let p = phi(kq + Rational::from((1, 2)));
                upd(Float::with_val(prec, &p - &above));
            }
            KolmogorovConvention::JumpMidpoint => {
                let mid = Rational::from(&below + &above) / 2u32;
                let p = phi(kq);
                upd(Float::with_val(prec, &p - &mid));
            }
        }
        below = above;
    }
    Ok(worst)
}
