//! Constructors for the concrete polynomial families: products of
//! cyclotomic quotients (inversions and their relatives, rank statistics),
//! Turán–Fejér, Reimer, Chung–Feller/Gegenbauer, the Euler-number family
//! and mixtures of hypergeometric laws.
//!
//! Factored families return the raw integer expansion; the others return a
//! probability mass function whose coefficients sum to one.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::exactpoly::{expand_factored, ExactPoly, FactoredSpec};
use crate::moments::factored_variance;
use crate::specfun::{self, binomial, factorial, StirlingKind};

/// A family together with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Inversions {
        n: u64,
    },
    StirlingInversions {
        n: u64,
        r: u64,
    },
    Gaussian {
        n: u64,
        m: u64,
    },
    Mahonian {
        a: Vec<u64>,
    },
    QCatalan {
        n: u64,
        m: u64,
    },
    UniformSums {
        d: Vec<u64>,
    },
    Bimodal {
        i: u64,
        k: u64,
        j: u64,
        l: u64,
    },
    SignedRank {
        a: Vec<u64>,
    },
    TuranFejer {
        n: u64,
        k: u64,
    },
    /// Only `m = 1` is implemented.
    Reimer {
        n: u64,
        m: u64,
    },
    ChungFeller {
        n: u64,
    },
    Gegenbauer {
        n: u64,
        alpha: Rational,
    },
    EulerCosh {
        n: u64,
    },
    HypergeomMixture {
        n: u64,
        r: u64,
        p: Vec<Rational>,
    },
}

/// Names accepted by [`FamilySpec::from_params`], with their parameters.
pub const FAMILY_NAMES: [(&str, &str); 14] = [
    ("inversions", "n"),
    ("stirling_inversions", "n, r"),
    ("gaussian", "n, m"),
    ("mahonian", "a (list)"),
    ("q_catalan", "n, m"),
    ("uniform_sums", "d (list)"),
    ("bimodal", "i, k, j, l"),
    ("signed_rank", "a (list)"),
    ("turan_fejer", "n, k"),
    ("reimer", "n [, m = 1]"),
    ("chung_feller", "n"),
    ("gegenbauer", "n, alpha"),
    ("euler_cosh", "n"),
    ("hypergeom_mixture", "n, r, p (list)"),
];

/// A generated polynomial plus the closed forms known for it.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyOutput {
    pub spec: FamilySpec,
    pub poly: ExactPoly,
    pub expected_mean: Option<Rational>,
    pub expected_variance: Option<Rational>,
    /// Closed-form normalized fourth moment, when one is known.
    pub expected_m4_identity: Option<Rational>,
    pub claims_root_unitary: bool,
    /// Power of `z` removed from the literal generating function (bimodal).
    pub dropped_shift: u64,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(invalid(msg))
    }
}

fn q(n: impl Into<Integer>, d: impl Into<Integer>) -> Rational {
    Rational::from((n.into(), d.into()))
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Inversions { .. } => "inversions",
            FamilySpec::StirlingInversions { .. } => "stirling_inversions",
            FamilySpec::Gaussian { .. } => "gaussian",
            FamilySpec::Mahonian { .. } => "mahonian",
            FamilySpec::QCatalan { .. } => "q_catalan",
            FamilySpec::UniformSums { .. } => "uniform_sums",
            FamilySpec::Bimodal { .. } => "bimodal",
            FamilySpec::SignedRank { .. } => "signed_rank",
            FamilySpec::TuranFejer { .. } => "turan_fejer",
            FamilySpec::Reimer { .. } => "reimer",
            FamilySpec::ChungFeller { .. } => "chung_feller",
            FamilySpec::Gegenbauer { .. } => "gegenbauer",
            FamilySpec::EulerCosh { .. } => "euler_cosh",
            FamilySpec::HypergeomMixture { .. } => "hypergeom_mixture",
        }
    }

    /// Parses `name` with `key=value` parameters; list values use `:` as
    /// separator (`a=3:2:2`), rationals may be written `num/den`.
    pub fn from_params(name: &str, params: &BTreeMap<String, String>) -> Result<FamilySpec> {
        let get = |key: &str| -> Result<u64> {
            let v = params
                .get(key)
                .ok_or_else(|| invalid(format!("{name}: missing parameter `{key}`")))?;
            v.trim().parse().map_err(|_| {
                invalid(format!(
                    "{name}: `{key}` must be a nonnegative integer, got `{v}`"
                ))
            })
        };
        let get_or = |key: &str, default: u64| -> Result<u64> {
            if params.contains_key(key) {
                get(key)
            } else {
                Ok(default)
            }
        };
        let list = |key: &str| -> Result<Vec<u64>> {
            let v = params
                .get(key)
                .ok_or_else(|| invalid(format!("{name}: missing parameter `{key}`")))?;
            v.split(':')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| invalid(format!("{name}: bad list entry `{s}` in `{key}`")))
                })
                .collect()
        };
        let rational = |s: &str| -> Result<Rational> {
            s.trim()
                .parse::<Rational>()
                .map_err(|_| invalid(format!("{name}: `{s}` is not a rational number")))
        };
        let allowed: &[&str] = match name {
            "inversions" | "chung_feller" | "euler_cosh" => &["n"],
            "stirling_inversions" => &["n", "r"],
            "gaussian" | "q_catalan" => &["n", "m"],
            "mahonian" | "signed_rank" => &["a"],
            "uniform_sums" => &["d"],
            "bimodal" => &["i", "k", "j", "l"],
            "turan_fejer" => &["n", "k"],
            "reimer" => &["n", "m"],
            "gegenbauer" => &["n", "alpha"],
            "hypergeom_mixture" => &["n", "r", "p"],
            _ => return Err(invalid(format!("unknown family `{name}`"))),
        };
        if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(invalid(format!("{name}: unexpected parameter `{bad}`")));
        }
        let spec = match name {
            "inversions" => FamilySpec::Inversions { n: get("n")? },
            "stirling_inversions" => FamilySpec::StirlingInversions {
                n: get("n")?,
                r: get("r")?,
            },
            "gaussian" => FamilySpec::Gaussian {
                n: get("n")?,
                m: get("m")?,
            },
            "mahonian" => FamilySpec::Mahonian { a: list("a")? },
            "q_catalan" => FamilySpec::QCatalan {
                n: get("n")?,
                m: get("m")?,
            },
            "uniform_sums" => FamilySpec::UniformSums { d: list("d")? },
            "bimodal" => FamilySpec::Bimodal {
                i: get("i")?,
                k: get("k")?,
                j: get("j")?,
                l: get("l")?,
            },
            "signed_rank" => FamilySpec::SignedRank { a: list("a")? },
            "turan_fejer" => FamilySpec::TuranFejer {
                n: get("n")?,
                k: get("k")?,
            },
            "reimer" => FamilySpec::Reimer {
                n: get("n")?,
                m: get_or("m", 1)?,
            },
            "chung_feller" => FamilySpec::ChungFeller { n: get("n")? },
            "gegenbauer" => FamilySpec::Gegenbauer {
                n: get("n")?,
                alpha: rational(
                    params
                        .get("alpha")
                        .ok_or_else(|| invalid("gegenbauer: missing parameter `alpha`"))?,
                )?,
            },
            "euler_cosh" => FamilySpec::EulerCosh { n: get("n")? },
            "hypergeom_mixture" => FamilySpec::HypergeomMixture {
                n: get("n")?,
                r: get("r")?,
                p: params
                    .get("p")
                    .ok_or_else(|| invalid("hypergeom_mixture: missing parameter `p`"))?
                    .split(':')
                    .map(rational)
                    .collect::<Result<_>>()?,
            },
            _ => unreachable!(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parameters as `key=value` pairs in the syntax of [`from_params`](Self::from_params).
    pub fn params(&self) -> Vec<(&'static str, String)> {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(":");
        match self {
            FamilySpec::Inversions { n }
            | FamilySpec::ChungFeller { n }
            | FamilySpec::EulerCosh { n } => {
                vec![("n", n.to_string())]
            }
            FamilySpec::StirlingInversions { n, r } => {
                vec![("n", n.to_string()), ("r", r.to_string())]
            }
            FamilySpec::Gaussian { n, m }
            | FamilySpec::QCatalan { n, m }
            | FamilySpec::Reimer { n, m } => {
                vec![("n", n.to_string()), ("m", m.to_string())]
            }
            FamilySpec::Mahonian { a } | FamilySpec::SignedRank { a } => vec![("a", join(a))],
            FamilySpec::UniformSums { d } => vec![("d", join(d))],
            FamilySpec::Bimodal { i, k, j, l } => vec![
                ("i", i.to_string()),
                ("k", k.to_string()),
                ("j", j.to_string()),
                ("l", l.to_string()),
            ],
            FamilySpec::TuranFejer { n, k } => vec![("n", n.to_string()), ("k", k.to_string())],
            FamilySpec::Gegenbauer { n, alpha } => {
                vec![("n", n.to_string()), ("alpha", alpha.to_string())]
            }
            FamilySpec::HypergeomMixture { n, r, p } => vec![
                ("n", n.to_string()),
                ("r", r.to_string()),
                (
                    "p",
                    p.iter()
                        .map(Rational::to_string)
                        .collect::<Vec<_>>()
                        .join(":"),
                ),
            ],
        }
    }

    /// Parameter-domain checks.
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::Inversions { n } => require(*n >= 1, "inversions: n >= 1"),
            FamilySpec::StirlingInversions { n, r } => {
                require(*n >= 1 && *r >= 1, "stirling_inversions: n, r >= 1")
            }
            FamilySpec::Gaussian { n, .. } => require(*n >= 1, "gaussian: n >= 1"),
            FamilySpec::Mahonian { a } => require(
                !a.is_empty() && a.iter().all(|&x| x >= 1),
                "mahonian: nonempty list of positive integers",
            ),
            FamilySpec::QCatalan { n, m } => {
                require(*n >= 2 && *m >= 1, "q_catalan: n >= 2, m >= 1")
            }
            FamilySpec::UniformSums { d } => require(
                !d.is_empty() && d.iter().all(|&x| x >= 2),
                "uniform_sums: nonempty list with every d_j >= 2",
            ),
            FamilySpec::Bimodal { i, k, j, l } => {
                require(j <= k, "bimodal: j <= k")?;
                require(i + j + l >= 1, "bimodal: at least one of i, j, l positive")
            }
            FamilySpec::SignedRank { a } => require(
                !a.is_empty() && a.iter().all(|&x| x >= 1),
                "signed_rank: nonempty list of positive integers",
            ),
            FamilySpec::TuranFejer { n, k } => require(k <= n, "turan_fejer: 0 <= k <= n"),
            FamilySpec::Reimer { n, m } => {
                require(*n >= 1, "reimer: n >= 1")?;
                if *m != 1 {
                    return Err(Error::NotImplemented(format!(
                        "reimer polynomials with m = {m}; only m = 1 is supported"
                    )));
                }
                Ok(())
            }
            FamilySpec::ChungFeller { n } | FamilySpec::EulerCosh { n } => {
                require(*n >= 1, "n >= 1")
            }
            FamilySpec::Gegenbauer { n, alpha } => require(
                *n >= 1 && alpha.cmp0() == Ordering::Greater,
                "gegenbauer: n >= 1, alpha > 0",
            ),
            FamilySpec::HypergeomMixture { n, r, p } => {
                require(*r >= 1 && n > r, "hypergeom_mixture: r >= 1 and n > r")?;
                require(
                    p.len() as u64 == *r,
                    "hypergeom_mixture: p must have r entries",
                )?;
                require(
                    p.iter().all(|x| x.cmp0() != Ordering::Less),
                    "hypergeom_mixture: p_j >= 0",
                )?;
                let total: Rational = p.iter().sum();
                require(total == 1, "hypergeom_mixture: p must sum to 1")?;
                require(
                    p.iter().eq(p.iter().rev()),
                    "hypergeom_mixture: p must satisfy p_j = p_(r-1-j)",
                )
            }
        }
    }

    /// The product form, for families of that shape.
    pub fn factored_spec(&self) -> Option<FactoredSpec> {
        let (num, den): (Vec<u64>, Vec<u64>) = match self {
            FamilySpec::Inversions { n } => ((1..=*n).collect(), vec![1; *n as usize]),
            FamilySpec::StirlingInversions { n, r } => (
                (0..*n).map(|j| r + j * r * r).collect(),
                vec![*r; *n as usize],
            ),
            FamilySpec::Gaussian { n, m } => {
                ((1..=*n).map(|j| j + m).collect(), (1..=*n).collect())
            }
            FamilySpec::Mahonian { a } => {
                let mut a = a.clone();
                a.sort_unstable_by(|x, y| y.cmp(x));
                let total: u64 = a.iter().sum();
                (
                    (1..=total).collect(),
                    a.iter().flat_map(|&aj| 1..=aj).collect(),
                )
            }
            FamilySpec::QCatalan { n, m } => (
                (2..=*n).map(|j| (m - 1) * n + j).collect(),
                (2..=*n).collect(),
            ),
            FamilySpec::UniformSums { d } => (d.clone(), vec![1; d.len()]),
            FamilySpec::Bimodal { i, k, j, l } => {
                let mut num = Vec::new();
                let mut den = Vec::new();
                for nu in 1..=*i {
                    num.push(k + nu);
                    den.push(nu);
                }
                for nu in 1..=*l {
                    num.push(k + i + nu);
                    den.push(nu);
                }
                for nu in 1..=*j {
                    num.push(k - j + nu);
                    den.push(nu);
                }
                (num, den)
            }
            // (1 + z^a) = (1 - z^{2a}) / (1 - z^a)
            FamilySpec::SignedRank { a } => (a.iter().map(|x| 2 * x).collect(), a.clone()),
            _ => return None,
        };
        Some(FactoredSpec {
            numerator: num,
            denominator: den,
        })
    }

    /// The `n` in the scaling `X_n / n` of the stated limit theorem.
    pub fn scale(&self) -> Option<u64> {
        match self {
            FamilySpec::TuranFejer { n, .. }
            | FamilySpec::Reimer { n, .. }
            | FamilySpec::ChungFeller { n }
            | FamilySpec::Gegenbauer { n, .. }
            | FamilySpec::EulerCosh { n }
            | FamilySpec::HypergeomMixture { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// Copy with the scaling parameter replaced, for convergence schedules.
    pub fn with_scale(&self, new_n: u64) -> Option<FamilySpec> {
        let mut s = self.clone();
        match &mut s {
            FamilySpec::TuranFejer { n, .. }
            | FamilySpec::Reimer { n, .. }
            | FamilySpec::ChungFeller { n }
            | FamilySpec::Gegenbauer { n, .. }
            | FamilySpec::EulerCosh { n }
            | FamilySpec::HypergeomMixture { n, .. } => *n = new_n,
            _ => return None,
        }
        Some(s)
    }

    pub fn generate(&self) -> Result<FamilyOutput> {
        self.validate()?;
        match self {
            FamilySpec::TuranFejer { n, k } => gen_turan_fejer(*n, *k),
            FamilySpec::Reimer { n, .. } => gen_reimer(*n),
            FamilySpec::ChungFeller { n } => {
                gen_chung_feller_gegenbauer(*n, &q(1, 2)).map(|mut o| {
                    o.spec = self.clone();
                    o
                })
            }
            FamilySpec::Gegenbauer { n, alpha } => gen_chung_feller_gegenbauer(*n, alpha),
            FamilySpec::EulerCosh { n } => gen_euler_cosh(*n),
            FamilySpec::HypergeomMixture { n, r, p } => gen_hypergeom_mixture(*n, *r, p),
            _ => gen_factored_family(self),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .params()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(f, "{}({})", self.name(), params.join(","))
    }
}

/// Generates any family; shorthand for [`FamilySpec::generate`].
pub fn generate(spec: &FamilySpec) -> Result<FamilyOutput> {
    spec.generate()
}

/// Families of the form `prod (1 - z^{b_j}) / (1 - z^{a_j})`, expanded
/// exactly; the output is the integer-coefficient polynomial itself.
pub fn gen_factored_family(spec: &FamilySpec) -> Result<FamilyOutput> {
    spec.validate()?;
    let fs = spec
        .factored_spec()
        .ok_or_else(|| invalid(format!("{} is not a factored family", spec.name())))?;
    let poly = expand_factored(&fs)?;
    let degree = fs.degree().expect("expansion succeeded") as u64;
    let dropped_shift = match spec {
        FamilySpec::Bimodal { i, j, .. } => {
            i * i.saturating_sub(1) / 2 + j * j.saturating_sub(1) / 2
        }
        _ => 0,
    };
    Ok(FamilyOutput {
        spec: spec.clone(),
        poly,
        expected_mean: Some(q(degree, 2)),
        expected_variance: Some(factored_variance(&fs)),
        expected_m4_identity: None,
        claims_root_unitary: true,
        dropped_shift,
    })
}

/// `3 - 2(3n^2 + 6n + k^2 + 4k + 6) / ((n-k)(n+k+2)(2k+5))`.
pub fn turan_fejer_m4(n: u64, k: u64) -> Option<Rational> {
    if k >= n {
        return None;
    }
    let num = Integer::from(3 * n * n + 6 * n + k * k + 4 * k + 6);
    let den = Integer::from(n - k) * (n + k + 2) * (2 * k + 5);
    Some(Rational::from(3) - Rational::from((num * 2u32, den)))
}

/// `C(j+k, k) C(n-j, k) / C(n+k+1, 2k+1)` for `j = 0..=n-k`.
pub fn gen_turan_fejer(n: u64, k: u64) -> Result<FamilyOutput> {
    require(k <= n, "turan_fejer: 0 <= k <= n")?;
    let den = binomial(n + k + 1, 2 * k + 1);
    let coeffs: Vec<Rational> = (0..=n - k)
        .map(|j| Rational::from((binomial(j + k, k) * binomial(n - j, k), den.clone())))
        .collect();
    Ok(FamilyOutput {
        spec: FamilySpec::TuranFejer { n, k },
        poly: ExactPoly::from_coeffs(coeffs),
        expected_mean: Some(q(n - k, 2)),
        expected_variance: Some(q((n - k) * (n + k + 2), 4 * (2 * k + 3))),
        expected_m4_identity: turan_fejer_m4(n, k),
        claims_root_unitary: true,
        dropped_shift: 0,
    })
}

/// `12 sum_j C(n,j) y^{n-j} (1-y)^j A_{j+2}` with Cauchy numbers `A_k`.
pub fn gen_reimer(n: u64) -> Result<FamilyOutput> {
    require(n >= 1, "reimer: n >= 1")?;
    let a = specfun::cauchy(n as usize + 2);
    let nn = n as usize;
    let mut c = vec![Rational::new(); nn + 1];
    for j in 0..=nn {
        let outer = Rational::from(&a[j + 2] * binomial(n, j as u64)) * 12u32;
        for i in 0..=j {
            let t = Rational::from(&outer * binomial(j as u64, i as u64));
            if i % 2 == 0 {
                c[nn - j + i] += t;
            } else {
                c[nn - j + i] -= t;
            }
        }
    }
    Ok(FamilyOutput {
        spec: FamilySpec::Reimer { n, m: 1 },
        poly: ExactPoly::from_coeffs(c),
        expected_mean: Some(q(n, 2)),
        expected_variance: Some(q(n * (4 * n + 11), 60)),
        expected_m4_identity: None,
        claims_root_unitary: true,
        dropped_shift: 0,
    })
}

/// `R_n(1) = (n+2)!/12`, the normalizing constant of the unnormalized
/// Reimer polynomial.
pub fn reimer_total(n: u64) -> Rational {
    q(factorial(n + 2), 12)
}

/// Gegenbauer weights `C(alpha+j-1, j) C(alpha+n-j-1, n-j) / C(2 alpha+n-1, n)`
/// with generalized binomials; `alpha = 1/2` is the Chung–Feller law.
pub fn gen_chung_feller_gegenbauer(n: u64, alpha: &Rational) -> Result<FamilyOutput> {
    require(
        n >= 1 && alpha.cmp0() == Ordering::Greater,
        "gegenbauer: n >= 1, alpha > 0",
    )?;
    let nn = n as usize;
    let mb: Vec<Rational> = (0..=nn)
        .map(|j| specfun::multiset_binomial(alpha, j))
        .collect();
    let den = specfun::multiset_binomial(&Rational::from(alpha * 2u32), nn);
    let coeffs: Vec<Rational> = (0..=nn)
        .map(|j| Rational::from(&mb[j] * &mb[nn - j]) / &den)
        .collect();
    Ok(FamilyOutput {
        spec: FamilySpec::Gegenbauer {
            n,
            alpha: alpha.clone(),
        },
        poly: ExactPoly::from_coeffs(coeffs),
        expected_mean: Some(q(n, 2)),
        expected_variance: None,
        expected_m4_identity: None,
        claims_root_unitary: true,
        dropped_shift: 0,
    })
}

/// `(-1)^n sum_j C(2n, 2j) E_{2j} E_{2n-2j} z^j`.
pub fn gen_euler_cosh(n: u64) -> Result<FamilyOutput> {
    require(n >= 1, "euler_cosh: n >= 1")?;
    let nn = n as usize;
    let e = specfun::euler(nn);
    let coeffs: Vec<Integer> = (0..=nn)
        .map(|j| {
            let c = Integer::from(&e[j] * &e[nn - j]) * binomial(2 * n, 2 * j as u64);
            if n % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    Ok(FamilyOutput {
        spec: FamilySpec::EulerCosh { n },
        poly: ExactPoly::from_integer_vec(coeffs),
        expected_mean: Some(q(n, 2)),
        expected_variance: None,
        expected_m4_identity: None,
        claims_root_unitary: true,
        dropped_shift: 0,
    })
}

/// `pi_l = sum_j p_j j^l`.
fn mixture_power(p: &[Rational], l: u32) -> Rational {
    p.iter()
        .enumerate()
        .map(|(j, pj)| Rational::from(pj * Integer::from(j).pow(l)))
        .sum()
}

/// `P(Y_n = k) = sum_j p_j C(k, j) C(n-1-k, r-1-j) / C(n, r)` for
/// `k = 0..n-1`. Root-unitarity is not claimed.
pub fn gen_hypergeom_mixture(n: u64, r: u64, p: &[Rational]) -> Result<FamilyOutput> {
    let spec = FamilySpec::HypergeomMixture {
        n,
        r,
        p: p.to_vec(),
    };
    spec.validate()?;
    let den = binomial(n, r);
    let coeffs: Vec<Rational> = (0..n)
        .map(|k| {
            let mut acc = Rational::new();
            for (j, pj) in p.iter().enumerate() {
                let j = j as u64;
                if pj.cmp0() == Ordering::Equal || j > k || r - 1 - j > n - 1 - k {
                    continue;
                }
                acc += Rational::from(pj * (binomial(k, j) * binomial(n - 1 - k, r - 1 - j)));
            }
            acc / &den
        })
        .collect();
    let pi2 = mixture_power(p, 2);
    let (nq, rq) = (Rational::from(n), Rational::from(r));
    let r2 = Rational::from(&rq * &rq);
    let a2 = Rational::from(&pi2 * 4u32) - &r2 + Rational::from(&rq * 3u32);
    let a1 = (Rational::from(&pi2 * 6u32) - Rational::from(&r2 * 2u32)
        + Rational::from(&rq * 3u32)
        - 1u32)
        * 2u32;
    let a0 = Rational::from(&pi2 * 8u32) - Rational::from(&r2 * 3u32) + Rational::from(&rq * 3u32)
        - 2u32;
    let num = a2 * Rational::from(&nq * &nq) + a1 * &nq + a0;
    let variance = num / ((r + 1) * (r + 2) * 4);
    Ok(FamilyOutput {
        spec,
        poly: ExactPoly::from_coeffs(coeffs),
        expected_mean: Some(q(n - 1, 2)),
        expected_variance: Some(variance),
        expected_m4_identity: None,
        claims_root_unitary: false,
        dropped_shift: 0,
    })
}

/// Finite-`n` moments `E(Y_n^m)` of the hypergeometric mixture, from
/// `nu_{m,h} C(n+h, r+h) / C(n, r)` with Stirling numbers of both kinds.
pub fn hypergeom_mixture_moment(n: u64, r: u64, p: &[Rational], m: usize) -> Rational {
    let s2 = specfun::stirling_table(StirlingKind::Second, m + 1);
    let s1 = specfun::stirling_table(StirlingKind::FirstSignless, m + 1);
    let pis: Vec<Rational> = (0..=m as u32).map(|l| mixture_power(p, l)).collect();
    let den = binomial(n, r);
    let mut acc = Rational::new();
    for h in 0..=m {
        let inner: Rational = (0..=h)
            .map(|l| Rational::from(&pis[l] * &s1[h + 1][l + 1]))
            .sum();
        let mut nu = Rational::from(&inner * &s2[m + 1][h + 1]);
        if (m + h) % 2 == 1 {
            nu = -nu;
        }
        acc += nu * Rational::from((binomial(n + h as u64, r + h as u64), den.clone()));
    }
    acc
}

/// `m`-th moment of the limit law of `X_n / n`.
///
/// Turán–Fejér with fixed `k`: Beta with density `x^k (1-x)^k`. Reimer:
/// `12 sum_l C(m,l) (-1)^l A_{l+2}`. Gegenbauer: Beta(alpha, alpha)
/// (arcsine for Chung–Feller). Euler-cosh: uniform. Hypergeometric mixture:
/// `r!/(r+m)! sum_j p_j (j+1)...(j+m)`.
pub fn limit_moment_oracles(spec: &FamilySpec, m: usize) -> Result<Rational> {
    let mu = m as u64;
    match spec {
        FamilySpec::TuranFejer { k, .. } => Ok(q(
            factorial(k + mu) * factorial(2 * k + 1),
            factorial(*k) * factorial(2 * k + mu + 1),
        )),
        FamilySpec::Reimer { m: 1, .. } => {
            let a = specfun::cauchy(m + 2);
            let s: Rational = (0..=m)
                .map(|l| {
                    let t = Rational::from(&a[l + 2] * binomial(mu, l as u64));
                    if l % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum();
            Ok(s * 12u32)
        }
        FamilySpec::ChungFeller { .. } => {
            Ok(q(binomial(2 * mu, mu), Integer::from(4u32).pow(m as u32)))
        }
        FamilySpec::Gegenbauer { alpha, .. } => {
            Ok(specfun::rising(alpha, m) / specfun::rising(&Rational::from(alpha * 2u32), m))
        }
        FamilySpec::EulerCosh { .. } => Ok(q(1, mu + 1)),
        FamilySpec::HypergeomMixture { r, p, .. } => {
            let s: Rational = p
                .iter()
                .enumerate()
                .map(|(j, pj)| pj * specfun::rising(&Rational::from(j + 1), m))
                .sum();
            Ok(s * q(factorial(*r), factorial(r + mu)))
        }
        _ => Err(Error::NoKnownLimit(spec.name().to_string())),
    }
}

/// `E((X_n / n)^m)` for the law of `poly`, scaled by `n`.
pub fn scaled_moment(poly: &ExactPoly, n: u64, m: usize) -> Result<Rational> {
    let raw = crate::exactpoly::power_sums(poly, m)?;
    Ok(Rational::from(&raw[m] / Integer::from(n).pow(m as u32)))
}
