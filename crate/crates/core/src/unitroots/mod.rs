//! Unit-circle root structure of integer-scaled polynomials, and the
//! quantities built from the root angles: the angle power sums `S_{n,k}`,
//! `omega`, the jump function and angle-side cumulants.
//!
//! Root extraction runs in three stages:
//!
//! 1. cyclotomic factors are divided out exactly, which handles the heavily
//!    repeated roots of unity of the factored families;
//! 2. the remaining cofactor is certified squarefree modulo a prime (or split
//!    with an exact squarefree decomposition when that fails);
//! 3. each squarefree piece goes through Aberth–Ehrlich iteration at the
//!    requested precision. For palindromic even-degree cofactors the result
//!    is cross-checked by counting sign changes of the real trigonometric
//!    polynomial `e^{-i t theta} R(e^{i theta})` between consecutive angles.

mod aberth;
mod cyclotomic;
mod intpoly;
mod mpcomplex;
mod squarefree;

pub use cyclotomic::{cyclotomic_poly, CyclotomicFactor};

use std::cmp::Ordering;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exactpoly::ExactPoly;
use crate::moments::{self, Distribution};
use crate::par::{self, Execution};
use crate::specfun::SinhPowerTable;
use mpcomplex::MpComplex;

pub const DEFAULT_PRECISION_BITS: u32 = 256;

#[derive(Clone, Debug)]
pub struct AngleOptions {
    pub precision_bits: u32,
    /// Divide out cyclotomic factors exactly before iterating. Without it
    /// every root goes through Aberth iteration, which can only resolve
    /// repeated roots through the squarefree decomposition.
    pub strip_cyclotomic: bool,
    pub max_iterations: usize,
    pub execution: Execution,
}

impl Default for AngleOptions {
    fn default() -> Self {
        AngleOptions {
            precision_bits: DEFAULT_PRECISION_BITS,
            strip_cyclotomic: true,
            max_iterations: 200,
            execution: Execution::default(),
        }
    }
}

impl AngleOptions {
    pub fn with_precision(precision_bits: u32) -> Self {
        AngleOptions {
            precision_bits,
            ..Self::default()
        }
    }

    /// `| |z| - 1 |` above this is a root off the circle.
    pub fn modulus_tolerance(&self) -> Float {
        pow2(self.precision_bits, -(self.precision_bits as i32) / 4)
    }

    /// Angles closer than this are one root.
    pub fn merge_tolerance(&self) -> Float {
        pow2(self.precision_bits, -(self.precision_bits as i32) / 8)
    }
}

fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, e))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AngleSource {
    /// `2 pi index / order` with `gcd(index, order) = 1`, confirmed by
    /// exact division by the cyclotomic polynomial.
    Cyclotomic {
        order: u64,
        index: u64,
    },
    Aberth,
}

/// A root `e^{i angle}` with `angle` in `(0, pi]`, standing for itself and
/// its conjugate.
#[derive(Clone, Debug)]
pub struct UnitAngle {
    pub angle: Float,
    pub multiplicity: usize,
    /// `|P(e^{i angle})| / sum_k |p_k|` at the working precision.
    pub residual: Float,
    /// Half-width of an interval around `angle` that contains the true root
    /// angle (rounding only for cyclotomic angles; `2 d |f/f'|` on the
    /// squarefree factor for iterated ones).
    pub error_bound: Float,
    pub source: AngleSource,
    pub at_pi: bool,
}

impl UnitAngle {
    /// Number of conjugate pairs this angle accounts for; a root at `-1`
    /// counts half per unit of multiplicity.
    pub fn pair_weight(&self) -> Rational {
        if self.at_pi {
            Rational::from((self.multiplicity as u64, 2u64))
        } else {
            Rational::from(self.multiplicity as u64)
        }
    }

    /// Number of roots (with multiplicity) this entry accounts for.
    pub fn root_count(&self) -> usize {
        if self.at_pi {
            self.multiplicity
        } else {
            2 * self.multiplicity
        }
    }

    /// `1 - cos(angle)`, computed as `2 sin^2(angle/2)`.
    pub fn one_minus_cos(&self) -> Float {
        let prec = self.angle.prec();
        let half = Float::with_val(prec, &self.angle / 2u32);
        let s = half.sin();
        Float::with_val(prec, s.square_ref()) * 2u32
    }

    /// `cot(angle/2)`, the relative sensitivity of `1 - cos(angle)`.
    fn half_cot(&self) -> Float {
        let prec = self.angle.prec();
        if self.at_pi {
            return Float::new(prec);
        }
        Float::with_val(prec, &self.angle / 2u32).cot()
    }
}

/// How the root count was certified beyond the modulus test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootCertificate {
    /// Every root is a root of unity found by exact division.
    Cyclotomic,
    /// The trigonometric form of the non-cyclotomic cofactor changes sign
    /// between every pair of consecutive computed angles.
    SignChanges { cofactor_degree: usize },
    /// Only the modulus test applies (non-palindromic or repeated factors in
    /// the cofactor).
    ModulusOnly,
}

#[derive(Clone, Debug)]
pub struct AngleProfile {
    pub degree: usize,
    /// Sorted ascending in `(0, pi]`.
    pub angles: Vec<UnitAngle>,
    pub precision_bits: u32,
    pub residual_bound: Float,
    /// Largest `| |z| - 1 |` among iterated roots (zero if none).
    pub modulus_deviation: Float,
    pub modulus_tolerance: Float,
    pub cyclotomic_factors: Vec<CyclotomicFactor>,
    pub certificate: RootCertificate,
}

impl AngleProfile {
    /// Sum of pair weights, i.e. half the degree.
    pub fn pair_count(&self) -> Rational {
        self.angles
            .iter()
            .map(UnitAngle::pair_weight)
            .fold(Rational::new(), |a, w| a + w)
    }

    pub fn root_count(&self) -> usize {
        self.angles.iter().map(UnitAngle::root_count).sum()
    }
}

/// `p_k = p_{n-k}` for all `k`.
pub fn self_inversive_check(p: &ExactPoly) -> bool {
    p.is_palindromic()
}

pub fn unit_angles(p: &ExactPoly, precision_bits: u32) -> Result<AngleProfile> {
    unit_angles_with(p, &AngleOptions::with_precision(precision_bits))
}

pub fn unit_angles_with(p: &ExactPoly, opts: &AngleOptions) -> Result<AngleProfile> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    if degree == 0 {
        return Err(Error::InvalidParams(
            "constant polynomial has no roots".into(),
        ));
    }
    if p.coeff(0).cmp0() == Ordering::Equal {
        return Err(Error::RootsOffCircle { max_deviation: 1.0 });
    }
    let prec = opts.precision_bits;
    let (ints, _) = p.to_integer_scaled();
    let ints = intpoly::primitive(ints);

    let (factors, cofactor) = if opts.strip_cyclotomic {
        cyclotomic::strip_cyclotomic(&ints, opts.execution)?
    } else {
        let total = ints.iter().fold(Integer::new(), |a, x| a + x);
        if total.cmp0() == Ordering::Equal {
            return Err(Error::DegenerateAtOne);
        }
        (Vec::new(), ints.clone())
    };

    let mut angles = cyclotomic_angles(&factors, prec);
    let mut deviation = Float::new(prec);
    let mut certificate = if cofactor.len() == 1 {
        RootCertificate::Cyclotomic
    } else {
        RootCertificate::ModulusOnly
    };
    if cofactor.len() > 1 {
        let squarefree = squarefree::certify_squarefree(&cofactor);
        let pieces = if squarefree {
            vec![(cofactor.clone(), 1)]
        } else {
            squarefree::squarefree_decomposition(&cofactor)
        };
        let mut iterated = Vec::new();
        for (piece, mult) in &pieces {
            let (found, dev) = iterate_piece(piece, *mult, opts)?;
            if dev > deviation {
                deviation = dev;
            }
            iterated.extend(found);
        }
        iterated.sort_by(|a, b| a.angle.partial_cmp(&b.angle).unwrap());
        if squarefree && is_palindromic_int(&cofactor) && (cofactor.len() - 1) % 2 == 0 {
            let changes = trig_sign_changes(&cofactor, &iterated, prec);
            let want = (cofactor.len() - 1) / 2;
            if changes != want {
                return Err(Error::UnresolvedMultiplicity(format!(
                    "trigonometric form shows {changes} sign changes, expected {want}"
                )));
            }
            certificate = RootCertificate::SignChanges {
                cofactor_degree: cofactor.len() - 1,
            };
        }
        angles.extend(iterated);
    }

    angles.sort_by(|a, b| a.angle.partial_cmp(&b.angle).unwrap());
    let scaled: Vec<Float> = intpoly::to_floats(&ints, prec + 32);
    let scale = ints.iter().fold(Float::new(prec + 32), |a, x| {
        a + Float::with_val(prec + 32, x).abs()
    });
    let residuals = par::map_slice(opts.execution, &angles, |a| {
        let z = MpComplex::from_polar_unit(&Float::with_val(prec + 32, &a.angle));
        Float::with_val(prec, mpcomplex::horner(&scaled, &z).abs() / &scale)
    });
    let mut residual_bound = Float::new(prec);
    for (a, r) in angles.iter_mut().zip(residuals) {
        if r > residual_bound {
            residual_bound.assign(&r);
        }
        a.residual = r;
    }
    let profile = AngleProfile {
        degree,
        angles,
        precision_bits: prec,
        residual_bound,
        modulus_deviation: deviation,
        modulus_tolerance: opts.modulus_tolerance(),
        cyclotomic_factors: factors,
        certificate,
    };
    if profile.root_count() != degree {
        return Err(Error::UnresolvedMultiplicity(format!(
            "{} roots accounted for, degree {}",
            profile.root_count(),
            degree
        )));
    }
    Ok(profile)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn cyclotomic_angles(factors: &[CyclotomicFactor], prec: u32) -> Vec<UnitAngle> {
    let tau = Float::with_val(prec + 32, Constant::Pi) * 2u32;
    let mut out = Vec::new();
    for f in factors {
        for k in 1..=f.order / 2 {
            if gcd(k, f.order) != 1 {
                continue;
            }
            let angle = Float::with_val(prec, Float::with_val(prec + 32, &tau * k) / f.order);
            out.push(UnitAngle {
                angle,
                multiplicity: f.multiplicity,
                residual: Float::new(prec),
                error_bound: pow2(prec, 3 - prec as i32),
                source: AngleSource::Cyclotomic {
                    order: f.order,
                    index: k,
                },
                at_pi: 2 * k == f.order,
            });
        }
    }
    out
}

/// Aberth roots of one squarefree piece, reduced to upper-half angles.
fn iterate_piece(
    piece: &[Integer],
    mult: usize,
    opts: &AngleOptions,
) -> Result<(Vec<UnitAngle>, Float)> {
    let prec = opts.precision_bits;
    let roots = aberth::aberth_roots(piece, prec, opts.max_iterations, opts.execution)?;
    let tol = opts.modulus_tolerance();
    let merge = opts.merge_tolerance();
    let mut deviation = Float::new(prec);
    for z in &roots {
        let d = Float::with_val(prec, z.abs() - 1u32).abs();
        if d > deviation {
            deviation = d;
        }
    }
    if deviation > tol {
        return Err(Error::RootsOffCircle {
            max_deviation: deviation.to_f64(),
        });
    }
    let pi = Float::with_val(prec, Constant::Pi);
    let wp = prec + 32;
    let fl = intpoly::to_floats(piece, wp);
    let deg = piece.len() - 1;
    let ulp = pow2(prec, 3 - prec as i32);
    let mut upper: Vec<UnitAngle> = Vec::new();
    for z in &roots {
        let zw = MpComplex {
            re: Float::with_val(wp, &z.re),
            im: Float::with_val(wp, &z.im),
        };
        let (f, df) = mpcomplex::horner_with_derivative(&fl, &zw);
        // a disc of radius d |f/f'| about z contains a root
        let radius = Float::with_val(prec, f.abs() / df.abs()) * (2 * deg) as u32 + &ulp;
        let a = Float::with_val(prec, z.arg());
        let near_pi = Float::with_val(prec, &pi - Float::with_val(prec, a.abs_ref())) <= merge;
        if Float::with_val(prec, a.abs_ref()) <= merge {
            return Err(Error::DegenerateAtOne);
        }
        if near_pi {
            let offset = Float::with_val(prec, &pi - Float::with_val(prec, a.abs_ref()));
            upper.push(UnitAngle {
                angle: pi.clone(),
                multiplicity: mult,
                residual: Float::new(prec),
                error_bound: offset + &radius,
                source: AngleSource::Aberth,
                at_pi: true,
            });
        } else if a.is_sign_positive() {
            upper.push(UnitAngle {
                angle: a,
                multiplicity: mult,
                residual: Float::new(prec),
                error_bound: radius,
                source: AngleSource::Aberth,
                at_pi: false,
            });
        }
    }
    upper.sort_by(|a, b| a.angle.partial_cmp(&b.angle).unwrap());
    let mut merged: Vec<UnitAngle> = Vec::new();
    for a in upper {
        match merged.last_mut() {
            Some(last) if Float::with_val(prec, &a.angle - &last.angle) <= merge => {
                let sep = Float::with_val(prec, &a.angle - &last.angle);
                let e = if a.error_bound > last.error_bound {
                    &a.error_bound
                } else {
                    &last.error_bound
                };
                last.error_bound = sep + e;
                last.multiplicity += a.multiplicity;
            }
            _ => merged.push(a),
        }
    }
    let count: usize = merged.iter().map(UnitAngle::root_count).sum();
    if count != mult * (piece.len() - 1) {
        return Err(Error::UnresolvedMultiplicity(format!(
            "{count} roots recovered from a factor of degree {} and multiplicity {mult}",
            piece.len() - 1
        )));
    }
    Ok((merged, deviation))
}

fn is_palindromic_int(c: &[Integer]) -> bool {
    let n = c.len();
    (0..n / 2).all(|k| c[k] == c[n - 1 - k])
}

/// Sign changes of `g(theta) = c_t + 2 sum_{k>=1} c_{t+k} cos(k theta)` along
/// `0`, the midpoints between consecutive angles, and `pi`.
fn trig_sign_changes(c: &[Integer], angles: &[UnitAngle], prec: u32) -> usize {
    let wp = prec + 32;
    let t = (c.len() - 1) / 2;
    let pi = Float::with_val(wp, Constant::Pi);
    let mut points = vec![Float::new(wp)];
    for w in angles.windows(2) {
        points.push(Float::with_val(wp, &w[0].angle + &w[1].angle) / 2u32);
    }
    points.push(pi);
    let coeffs: Vec<Float> = c[t..].iter().map(|x| Float::with_val(wp, x)).collect();
    let values: Vec<Float> = points
        .iter()
        .map(|theta| {
            let cos1 = Float::with_val(wp, theta.cos_ref());
            let mut prev = Float::with_val(wp, 1);
            let mut cur = cos1.clone();
            let mut g = coeffs[0].clone();
            for ck in &coeffs[1..] {
                g += Float::with_val(wp, ck * &cur) * 2u32;
                let next = Float::with_val(wp, &cur * &cos1) * 2u32 - &prev;
                prev = cur;
                cur = next;
            }
            g
        })
        .collect();
    if values.iter().any(|v| v.is_zero()) {
        return 0;
    }
    values
        .windows(2)
        .filter(|w| w[0].is_sign_positive() != w[1].is_sign_positive())
        .count()
}

/// `S_{n,k} = sum_j 1/(1 - cos phi_j)^k` over conjugate pairs.
pub fn angle_power_sums(ap: &AngleProfile, k: u32) -> Float {
    let prec = ap.precision_bits;
    let mut s = Float::new(prec);
    for a in &ap.angles {
        let x = Float::with_val(prec, a.one_minus_cos().recip());
        let term = x.pow(k) * Float::with_val(prec, &a.pair_weight());
        s += term;
    }
    s
}

/// First-order bound on the error of [`angle_power_sums`] induced by the
/// angle error bounds, plus rounding.
pub fn angle_power_sum_error(ap: &AngleProfile, k: u32) -> Float {
    let prec = ap.precision_bits;
    let mut e = Float::new(prec);
    for a in &ap.angles {
        let x = Float::with_val(prec, a.one_minus_cos().recip()).pow(k)
            * Float::with_val(prec, &a.pair_weight());
        let rel = Float::with_val(prec, &a.error_bound * a.half_cot()) * (2 * k);
        e += x * rel;
    }
    let s = angle_power_sums(ap, k);
    e + s * pow2(prec, 4 - prec as i32) * (ap.angles.len() as u32 + 1)
}

/// `omega_n = S_{n,2} / S_{n,1}^2`.
pub fn omega(ap: &AngleProfile) -> Float {
    let s1 = angle_power_sums(ap, 1);
    let s2 = angle_power_sums(ap, 2);
    s2 / Float::with_val(ap.precision_bits, s1.square_ref())
}

/// Coefficient side against angle side for the second and fourth moments.
#[derive(Clone, Debug)]
pub struct FourthIdentityReport {
    pub variance: Rational,
    pub s1: Float,
    pub m4: Rational,
    /// `3 + 1/sigma^2 - 3 omega` with `sigma^2` exact.
    pub m4_from_angles: Float,
    pub kappa4: Rational,
    /// `S_{n,1} - 3 S_{n,2}`.
    pub kappa4_from_angles: Float,
    pub variance_discrepancy: Float,
    pub m4_discrepancy: Float,
    pub kappa4_discrepancy: Float,
}

/// Checks `sigma^2 = S_{n,1}`, `kappa_4 = S_{n,1} - 3 S_{n,2}` and
/// `m4 = 3 + 1/sigma^2 - 3 omega`, each within `tolerance`.
pub fn fourth_identity_check(
    d: &Distribution,
    ap: &AngleProfile,
    tolerance: &Float,
) -> Result<FourthIdentityReport> {
    if !d.is_palindromic() {
        return Err(Error::NotPalindromic);
    }
    if d.degree() % 2 == 1 {
        return Err(Error::OddDegree);
    }
    let prec = ap.precision_bits;
    let gap = moments::fourth_moment_gap(d)?;
    let c = d.central_moments(4);
    let kappa4 = &c[4] - Rational::from(c[2].square_ref()) * 3u32;
    let s1 = angle_power_sums(ap, 1);
    let s2 = angle_power_sums(ap, 2);
    let var_f = Float::with_val(prec, &gap.variance);
    let om = Float::with_val(prec, &s2 / Float::with_val(prec, s1.square_ref()));
    let m4_from_angles =
        Float::with_val(prec, 3u32) + Float::with_val(prec, var_f.recip_ref()) - om * 3u32;
    let kappa4_from_angles = Float::with_val(prec, &s1 - Float::with_val(prec, &s2 * 3u32));
    let diff = |x: &Float, q: &Rational| Float::with_val(prec, x - q).abs();
    let report = FourthIdentityReport {
        variance_discrepancy: diff(&s1, &gap.variance),
        m4_discrepancy: diff(&m4_from_angles, &gap.m4),
        kappa4_discrepancy: diff(&kappa4_from_angles, &kappa4),
        variance: gap.variance,
        s1,
        m4: gap.m4,
        m4_from_angles,
        kappa4,
        kappa4_from_angles,
    };
    for (what, dsc) in [
        ("variance", &report.variance_discrepancy),
        ("fourth moment", &report.m4_discrepancy),
        ("fourth cumulant", &report.kappa4_discrepancy),
    ] {
        if dsc > tolerance {
            return Err(Error::MismatchBeyondTolerance {
                what: what.into(),
                discrepancy: dsc.to_f64(),
                tolerance: tolerance.to_f64(),
            });
        }
    }
    Ok(report)
}

/// One atom of the jump function.
#[derive(Clone, Debug)]
pub struct Jump {
    /// `1 / (sigma^2 (1 - cos phi))`.
    pub location: Float,
    /// `pair_weight * location`.
    pub mass: Float,
    pub pair_weight: Rational,
    /// Bound on the absolute error of `mass` (and of `location` times the
    /// pair weight), to first order in the angle errors.
    pub mass_error: Float,
}

/// Discrete measure with an atom of mass `1/(sigma^2 (1 - cos phi_j))` at
/// that same location for every conjugate pair.
#[derive(Clone, Debug)]
pub struct JumpFunction {
    /// Sorted by location, largest first.
    pub jumps: Vec<Jump>,
    pub precision_bits: u32,
}

impl JumpFunction {
    pub fn total_mass(&self) -> Float {
        self.jumps
            .iter()
            .fold(Float::new(self.precision_bits), |a, j| a + &j.mass)
    }

    /// `sum_j pair_weight_j * location_j^2`, i.e. `omega` reconstructed
    /// from the jumps.
    pub fn second_moment(&self) -> Float {
        self.jumps
            .iter()
            .fold(Float::new(self.precision_bits), |a, j| {
                a + Float::with_val(self.precision_bits, &j.mass * &j.location)
            })
    }
}

/// The jump function, normalized by the angle-side variance `S_{n,1}`.
pub fn jump_function(ap: &AngleProfile) -> JumpFunction {
    let prec = ap.precision_bits;
    let s1 = angle_power_sums(ap, 1);
    let s1_rel = Float::with_val(prec, angle_power_sum_error(ap, 1) / &s1);
    let mut jumps: Vec<Jump> = ap
        .angles
        .iter()
        .map(|a| {
            let location = Float::with_val(prec, &s1 * a.one_minus_cos()).recip();
            let w = a.pair_weight();
            let mass = Float::with_val(prec, &location * &w);
            let rel = Float::with_val(prec, &a.error_bound * a.half_cot()) * 2u32
                + &s1_rel
                + pow2(prec, 4 - prec as i32);
            Jump {
                mass_error: Float::with_val(prec, &mass * &rel),
                mass,
                location,
                pair_weight: w,
            }
        })
        .collect();
    jumps.sort_by(|a, b| b.location.partial_cmp(&a.location).unwrap());
    JumpFunction {
        jumps,
        precision_bits: prec,
    }
}

/// `kappa_2, kappa_4, ..., kappa_M` from
/// `kappa_{2m} = (2m)! sum_{k<=m} (-1)^{k-1} / (k 2^k) h_{m,k} S_{n,k}`.
pub fn angle_cumulants(ap: &AngleProfile, max_order: usize) -> Result<Vec<Float>> {
    if max_order % 2 == 1 || max_order == 0 {
        return Err(Error::InvalidParams(format!(
            "angle cumulants need a positive even order, got {max_order}"
        )));
    }
    let prec = ap.precision_bits;
    let half = max_order / 2;
    let table = SinhPowerTable::new(half);
    let sums: Vec<Float> = (1..=half as u32).map(|k| angle_power_sums(ap, k)).collect();
    let mut out = Vec::with_capacity(half);
    for m in 1..=half {
        let mut facc = Float::new(prec);
        for k in 1..=m {
            let mut c = Rational::from(table.get(m, k)?) / (Integer::from(k) << k as u32);
            if k % 2 == 0 {
                c = -c;
            }
            facc += Float::with_val(prec, &sums[k - 1] * &c);
        }
        let fact = crate::specfun::factorial(2 * m as u64);
        out.push(facc * Float::with_val(prec, &fact));
    }
    Ok(out)
}

/// `S_{n,1} / sum_j w_j phi_j^{-2}`; lies in `[2, pi^2/2]`.
pub fn cosine_sandwich_ratio(ap: &AngleProfile) -> Float {
    let prec = ap.precision_bits;
    let s1 = angle_power_sums(ap, 1);
    let inv_sq = ap.angles.iter().fold(Float::new(prec), |acc, a| {
        let x = Float::with_val(prec, a.angle.square_ref()).recip();
        acc + x * Float::with_val(prec, &a.pair_weight())
    });
    s1 / inv_sq
}

/// `max_j 1/(1 - cos phi_j)`.
pub fn max_inverse_gap(ap: &AngleProfile) -> Float {
    let prec = ap.precision_bits;
    ap.angles
        .iter()
        .map(|a| a.one_minus_cos().recip())
        .fold(Float::new(prec), |m, x| if x > m { x } else { m })
}
