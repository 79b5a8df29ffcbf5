use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::time::Instant;

use serde::Serialize;
use unimoment::exactpoly::ExactPoly;
use unimoment::families::{self, FamilyOutput, FamilySpec, FAMILY_NAMES};
use unimoment::limitlaw::{self, classify, convergence_sweep, LimitLawDescriptor, SweepOptions};
use unimoment::moments::{cumulants_from_pmf, fourth_moment_gap, Distribution};
use unimoment::unitroots::{
    self, angle_power_sum_error, angle_power_sums, AngleOptions, AngleProfile, Jump, JumpFunction,
};
use unimoment::{Float, Rational};

use crate::args::{
    AnalyzeArgs, Format, GenArgs, InputArgs, LimitArgs, Overlay, PmfArgs, SweepArgs,
};
use crate::render::{decimal, decimal_exact, exact, exact_all, Real, CSV_DIGITS, SCHEMA};
use crate::{CliError, ErrorObject};

pub const PRECISION_ENV: &str = "UNIMOMENT_PRECISION_BITS";
const MIN_PRECISION: u32 = 64;
const MAX_PRECISION: u32 = 1 << 16;

/// What a command prints, plus an error to raise after printing (a failed
/// verification still produces its report).
pub struct Outcome {
    pub stdout: String,
    pub deferred: Option<CliError>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            deferred: None,
        }
    }
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: f64,
}

impl Timing {
    fn since(t: Instant) -> Self {
        Timing {
            // whole microseconds keep the field readable
            elapsed_ms: (t.elapsed().as_micros() as f64) / 1000.0,
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn resolve_precision(flag: Option<u32>) -> Result<u32, CliError> {
    let p = match flag {
        Some(p) => p,
        None => match std::env::var(PRECISION_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                usage(format!(
                    "{PRECISION_ENV} must be a positive integer, got `{v}`"
                ))
            })?,
            Err(_) => unitroots::DEFAULT_PRECISION_BITS,
        },
    };
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&p) {
        return Err(usage(format!(
            "precision must be between {MIN_PRECISION} and {MAX_PRECISION} bits, got {p}"
        )));
    }
    Ok(p)
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| usage(format!("`{}` is not a rational number", s.trim())))
}

fn parse_coeff_list(s: &str) -> Result<Vec<Rational>, CliError> {
    let parts: Vec<&str> = s.trim().split(',').collect();
    if parts.iter().all(|p| p.trim().is_empty()) {
        return Err(usage("empty coefficient list"));
    }
    parts.iter().map(|p| parse_rational(p)).collect()
}

/// `n=10,k=2` into a map.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut m = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("parameter `{part}` is not of the form key=value")))?;
        if m.insert(k.trim().to_string(), v.trim().to_string())
            .is_some()
        {
            return Err(usage(format!("parameter `{}` given twice", k.trim())));
        }
    }
    Ok(m)
}

fn family_spec(name: &str, params: &BTreeMap<String, String>) -> Result<FamilySpec, CliError> {
    FamilySpec::from_params(name, params).map_err(CliError::from)
}

fn read_file_coeffs(path: &std::path::Path) -> Result<Vec<Rational>, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("reading standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?
    };
    let t = text.trim();
    if t.starts_with('[') || t.starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(t).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let arr = match &v {
            serde_json::Value::Array(a) => a,
            serde_json::Value::Object(o) => match o.get("coeffs") {
                Some(serde_json::Value::Array(a)) => a,
                _ => {
                    return Err(usage(format!(
                        "{}: JSON object without a `coeffs` array",
                        path.display()
                    )))
                }
            },
            _ => unreachable!(),
        };
        arr.iter()
            .map(|x| match x {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => {
                    parse_rational(&n.to_string())
                }
                other => Err(usage(format!(
                    "coefficient {other} must be a rational string"
                ))),
            })
            .collect()
    } else {
        if t.lines().count() > 1 {
            return Err(usage(format!(
                "{}: expected a single comma-separated line",
                path.display()
            )));
        }
        parse_coeff_list(t)
    }
}

#[derive(Serialize, Clone)]
struct InputEcho {
    source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<BTreeMap<String, String>>,
    coeffs: Vec<String>,
}

struct Loaded {
    poly: ExactPoly,
    echo: InputEcho,
    family: Option<FamilyOutput>,
}

fn spec_params(spec: &FamilySpec) -> BTreeMap<String, String> {
    spec.params()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

fn load(input: &InputArgs) -> Result<Loaded, CliError> {
    if let Some(name) = &input.family {
        let params = parse_params(input.params.as_deref().unwrap_or(""))?;
        let out = family_spec(name, &params)?.generate()?;
        return Ok(Loaded {
            echo: InputEcho {
                source: "family",
                path: None,
                family: Some(name.clone()),
                params: Some(spec_params(&out.spec)),
                coeffs: exact_all(out.poly.coeffs()),
            },
            poly: out.poly.clone(),
            family: Some(out),
        });
    }
    let (coeffs, source, path) = match (&input.coeffs, &input.file) {
        (Some(c), _) => (parse_coeff_list(c)?, "coeffs", None),
        (None, Some(p)) => (read_file_coeffs(p)?, "file", Some(p.display().to_string())),
        (None, None) => return Err(usage("one of --coeffs, --file or --family is required")),
    };
    let poly = ExactPoly::from_coeffs(coeffs);
    Ok(Loaded {
        echo: InputEcho {
            source,
            path,
            family: None,
            params: None,
            coeffs: exact_all(poly.coeffs()),
        },
        poly,
        family: None,
    })
}

// ---------------------------------------------------------------- family

#[derive(Serialize)]
struct FamilyEntry {
    name: &'static str,
    params: &'static str,
}

pub fn family_list() -> Outcome {
    #[derive(Serialize)]
    struct List {
        schema: &'static str,
        families: Vec<FamilyEntry>,
    }
    Outcome::ok(json(&List {
        schema: SCHEMA,
        families: FAMILY_NAMES
            .iter()
            .map(|&(name, params)| FamilyEntry { name, params })
            .collect(),
    }))
}

#[derive(Serialize)]
struct Expected {
    mean: Option<String>,
    variance: Option<String>,
    m4: Option<String>,
}

fn expected(out: &FamilyOutput) -> Expected {
    Expected {
        mean: out.expected_mean.as_ref().map(exact),
        variance: out.expected_variance.as_ref().map(exact),
        m4: out.expected_m4_identity.as_ref().map(exact),
    }
}

/// Splits `--key value` / `--key=value` pairs; `--out` is the format.
fn gen_flags(rest: &[String]) -> Result<(BTreeMap<String, String>, Format), CliError> {
    let mut params = BTreeMap::new();
    let mut format = Format::Json;
    let mut it = rest.iter();
    while let Some(arg) = it.next() {
        let body = arg.strip_prefix("--").ok_or_else(|| {
            usage(format!(
                "unexpected argument `{arg}`; parameters are given as --key value"
            ))
        })?;
        let (key, value) = match body.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| usage(format!("`--{body}` needs a value")))?;
                (body.to_string(), v.clone())
            }
        };
        if key == "out" {
            format = match value.as_str() {
                "json" => Format::Json,
                "csv" => Format::Csv,
                _ => return Err(usage(format!("--out must be json or csv, got `{value}`"))),
            };
        } else if params.insert(key.clone(), value).is_some() {
            return Err(usage(format!("parameter `{key}` given twice")));
        }
    }
    Ok((params, format))
}

pub fn family_gen(a: &GenArgs) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let (params, format) = gen_flags(&a.rest)?;
    let out = family_spec(&a.name, &params)?.generate()?;
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "coefficient", "decimal"])
            .map_err(csv_err)?;
        for (k, c) in out.poly.coeffs().iter().enumerate() {
            w.write_record([k.to_string(), exact(c), decimal_exact(c, CSV_DIGITS)])
                .map_err(csv_err)?;
        }
        return Ok(Outcome::ok(csv_string(w)?));
    }
    #[derive(Serialize)]
    struct Gen {
        schema: &'static str,
        command: &'static str,
        family: &'static str,
        params: BTreeMap<String, String>,
        degree: Option<usize>,
        coeffs: Vec<String>,
        value_at_one: String,
        claims_root_unitary: bool,
        dropped_shift: u64,
        expected: Expected,
        timing: Timing,
    }
    Ok(Outcome::ok(json(&Gen {
        schema: SCHEMA,
        command: "family gen",
        family: out.spec.name(),
        params: spec_params(&out.spec),
        degree: out.poly.degree(),
        coeffs: exact_all(out.poly.coeffs()),
        value_at_one: exact(&out.poly.value_at_one()),
        claims_root_unitary: out.claims_root_unitary,
        dropped_shift: out.dropped_shift,
        expected: expected(&out),
        timing: Timing::since(t),
    })))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn write_sidecar(path: &std::path::Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::Output(format!("writing {}: {e}", path.display())))
}

// ---------------------------------------------------------------- roots

fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, e))
}

fn rounding(x: &Float) -> Float {
    let prec = x.prec();
    Float::with_val(prec, x.abs_ref()) * pow2(prec, 4 - prec as i32) + pow2(prec, 4 - prec as i32)
}

#[derive(Serialize)]
struct AngleRow {
    angle: Real,
    multiplicity: usize,
    at_pi: bool,
    source: String,
    residual: Real,
}

#[derive(Serialize)]
struct JumpRow {
    location: Real,
    mass: Real,
    pair_weight: String,
}

fn jump_row(j: &Jump, prec: u32) -> JumpRow {
    let w = Float::with_val(prec, &j.pair_weight);
    JumpRow {
        location: Real::new(&j.location, &Float::with_val(prec, &j.mass_error / &w)),
        mass: Real::new(&j.mass, &j.mass_error),
        pair_weight: exact(&j.pair_weight),
    }
}

#[derive(Serialize)]
struct IdentityRow {
    s1: Real,
    variance_discrepancy: Real,
    m4_from_angles: Real,
    m4_discrepancy: Real,
}

#[derive(Serialize)]
struct RootsReport {
    verdict: &'static str,
    claimed: bool,
    precision_bits: u32,
    /// Power of `z` divided out before the root check.
    valuation: usize,
    failure: Option<ErrorObject>,
    certificate: Option<String>,
    residual_bound: Option<Real>,
    modulus_deviation: Option<Real>,
    cyclotomic_factors: Vec<(u64, usize)>,
    angles: Vec<AngleRow>,
    identities: Option<IdentityRow>,
    jump_function: Vec<JumpRow>,
}

const VERIFIED: &str = "numerically verified";

fn source_name(s: &unitroots::AngleSource) -> String {
    match s {
        unitroots::AngleSource::Cyclotomic { order, index } => {
            format!("cyclotomic:{index}/{order}")
        }
        unitroots::AngleSource::Aberth => "aberth".into(),
    }
}

fn certificate_name(c: &unitroots::RootCertificate) -> String {
    match c {
        unitroots::RootCertificate::Cyclotomic => "cyclotomic".into(),
        unitroots::RootCertificate::SignChanges { cofactor_degree } => {
            format!("sign-changes:{cofactor_degree}")
        }
        unitroots::RootCertificate::ModulusOnly => "modulus-only".into(),
    }
}

fn identities(d: &Distribution, ap: &AngleProfile) -> Option<IdentityRow> {
    if !d.is_palindromic() || d.degree() % 2 == 1 {
        return None;
    }
    let prec = ap.precision_bits;
    let gap = fourth_moment_gap(d).ok()?;
    let (s1, s2) = (angle_power_sums(ap, 1), angle_power_sums(ap, 2));
    let (e1, e2) = (angle_power_sum_error(ap, 1), angle_power_sum_error(ap, 2));
    let s1sq = Float::with_val(prec, s1.square_ref());
    let var_f = Float::with_val(prec, &gap.variance);
    let m4a = Float::with_val(prec, 3u32) + Float::with_val(prec, var_f.recip_ref())
        - Float::with_val(prec, &s2 / &s1sq) * 3u32;
    // d(S2/S1^2) <= e2/S1^2 + 2 S2 e1/S1^3
    let m4e = (Float::with_val(prec, &e2 / &s1sq)
        + Float::with_val(prec, &s2 * &e1) * 2u32 / Float::with_val(prec, &s1sq * &s1))
        * 3u32
        + rounding(&m4a);
    let vd = Float::with_val(prec, &s1 - &gap.variance).abs();
    let md = Float::with_val(prec, &m4a - &gap.m4).abs();
    Some(IdentityRow {
        s1: Real::new(&s1, &e1),
        variance_discrepancy: Real::new(&vd, &e1),
        m4_from_angles: Real::new(&m4a, &m4e),
        m4_discrepancy: Real::new(&md, &m4e),
    })
}

/// Runs the root pipeline on `poly` with its `z^v` factor removed.
fn roots_report(
    d: &Distribution,
    poly: &ExactPoly,
    claimed: bool,
    prec: u32,
) -> (RootsReport, Option<AngleProfile>) {
    let (valuation, core) = poly.split_valuation();
    let mut rep = RootsReport {
        verdict: VERIFIED,
        claimed,
        precision_bits: prec,
        valuation,
        failure: None,
        certificate: None,
        residual_bound: None,
        modulus_deviation: None,
        cyclotomic_factors: Vec::new(),
        angles: Vec::new(),
        identities: None,
        jump_function: Vec::new(),
    };
    if core.degree() == Some(0) {
        rep.verdict = "not applicable";
        return (rep, None);
    }
    match unitroots::unit_angles_with(&core, &AngleOptions::with_precision(prec)) {
        Err(e) => {
            rep.verdict = match e {
                unimoment::Error::RootsOffCircle { .. } | unimoment::Error::DegenerateAtOne => {
                    "falsified"
                }
                _ => "inconclusive",
            };
            rep.failure = Some(ErrorObject::from_lib(&e));
            (rep, None)
        }
        Ok(ap) => {
            let ulp = pow2(prec, 4 - prec as i32);
            rep.certificate = Some(certificate_name(&ap.certificate));
            rep.residual_bound = Some(Real::new(&ap.residual_bound, &ulp));
            rep.modulus_deviation = Some(Real::new(&ap.modulus_deviation, &ulp));
            rep.cyclotomic_factors = ap
                .cyclotomic_factors
                .iter()
                .map(|f| (f.order, f.multiplicity))
                .collect();
            rep.angles = ap
                .angles
                .iter()
                .map(|a| AngleRow {
                    angle: Real::new(&a.angle, &a.error_bound),
                    multiplicity: a.multiplicity,
                    at_pi: a.at_pi,
                    source: source_name(&a.source),
                    residual: Real::new(&a.residual, &ulp),
                })
                .collect();
            if valuation == 0 {
                rep.identities = identities(d, &ap);
            }
            let jf = unitroots::jump_function(&ap);
            rep.jump_function = jf.jumps.iter().map(|j| jump_row(j, prec)).collect();
            (rep, Some(ap))
        }
    }
}

// ---------------------------------------------------------------- limit law

#[derive(Serialize)]
struct Evidence {
    variance: String,
    m4: String,
    gap_to_3: String,
    gap_to_1: String,
    standardized_moments: Vec<Real>,
    match_error: Option<Real>,
    top_jump: Option<Real>,
    q_residuals: Vec<Real>,
}

#[derive(Serialize)]
struct LimitLaw {
    verdict: String,
    matched_law: Option<String>,
    q: Option<Real>,
    q_list: Vec<Real>,
    resolved_jumps: Option<usize>,
    evidence: Evidence,
}

/// Resolved jumps, largest mass first.
fn ranked(jf: &JumpFunction) -> Vec<&Jump> {
    let floor = Float::with_val(jf.precision_bits, limitlaw::RESOLUTION_FLOOR);
    let mut v: Vec<&Jump> = jf.jumps.iter().filter(|j| j.mass >= floor).collect();
    v.sort_by(|a, b| {
        b.mass
            .partial_cmp(&a.mass)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    v
}

fn limit_law(desc: &LimitLawDescriptor, ap: Option<&AngleProfile>, k: usize) -> LimitLaw {
    let ev = &desc.evidence;
    let (q, q_list, resolved, top) = match ap {
        Some(ap) => {
            let jf = unitroots::jump_function(ap);
            let pp = limitlaw::extract_product_params(&jf, k);
            let r = ranked(&jf);
            let list: Vec<Real> = r
                .iter()
                .take(k)
                .map(|j| Real::new(&j.mass, &j.mass_error))
                .collect();
            let top = r.first().map(|j| Real::new(&j.mass, &j.mass_error));
            (
                Some(Real::new(&pp.q, &pp.q_error)),
                list,
                Some(pp.resolved),
                top,
            )
        }
        None => (None, Vec::new(), None, None),
    };
    LimitLaw {
        verdict: desc.verdict.to_string(),
        matched_law: ev.matched_law.as_ref().map(ToString::to_string),
        q,
        q_list,
        resolved_jumps: resolved,
        evidence: Evidence {
            variance: exact(&ev.variance),
            m4: exact(&ev.m4),
            gap_to_3: exact(&ev.gap_to_3),
            gap_to_1: exact(&ev.gap_to_1),
            standardized_moments: ev
                .standardized_moments
                .iter()
                .map(|&x| Real::from_f64(x, 16))
                .collect(),
            match_error: ev.match_error.map(|x| Real::from_f64(x, 32)),
            top_jump: top,
            q_residuals: ev
                .q_residuals
                .iter()
                .map(|&x| Real::from_f64(x, 16))
                .collect(),
        },
    }
}

// ---------------------------------------------------------------- analyze

#[derive(Serialize)]
struct FamilyCheck {
    name: &'static str,
    params: BTreeMap<String, String>,
    claims_root_unitary: bool,
    dropped_shift: u64,
    expected: Expected,
    closed_forms_match: bool,
}

#[derive(Serialize)]
struct SignRow {
    order: usize,
    value: String,
    holds: bool,
}

#[derive(Serialize)]
struct Analysis {
    schema: &'static str,
    command: &'static str,
    input: InputEcho,
    degree: usize,
    palindromic: bool,
    total: String,
    mean: String,
    variance: String,
    m4: Option<String>,
    gap_to_3: Option<String>,
    gap_to_1: Option<String>,
    m4_upper_bound: Option<String>,
    sandwich: Option<bool>,
    cumulants: Vec<String>,
    cumulant_signs: Option<Vec<SignRow>>,
    family: Option<FamilyCheck>,
    roots: Option<RootsReport>,
    limit_law: Option<LimitLaw>,
    timing: Timing,
}

pub fn analyze(a: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let prec = resolve_precision(a.precision)?;
    if a.cumulants == 0 {
        return Err(usage("--cumulants must be at least 1"));
    }
    let input = load(&a.input)?;
    let d = Distribution::new(&input.poly)?;
    let gap = fourth_moment_gap(&d).ok();
    let cumulants = cumulants_from_pmf(&d, a.cumulants);
    let signs = limitlaw::cumulant_sign_check(&d, a.cumulants.max(2))
        .ok()
        .map(|r| {
            r.rows
                .into_iter()
                .map(|c| SignRow {
                    order: c.order,
                    value: exact(&c.value),
                    holds: c.holds,
                })
                .collect()
        });
    let mut deferred = None;
    let family = input.family.as_ref().map(|out| {
        let (mean, var) = (d.mean(), d.variance());
        let ok = out.expected_mean.as_ref().is_none_or(|m| *m == mean)
            && out.expected_variance.as_ref().is_none_or(|v| *v == var)
            && out
                .expected_m4_identity
                .as_ref()
                .is_none_or(|m| gap.as_ref().is_some_and(|g| g.m4 == *m));
        if !ok {
            deferred = Some(CliError::Verification {
                kind: "ClosedFormMismatch",
                message: format!("{}: exact moments differ from the closed forms", out.spec),
            });
        }
        FamilyCheck {
            name: out.spec.name(),
            params: spec_params(&out.spec),
            claims_root_unitary: out.claims_root_unitary,
            dropped_shift: out.dropped_shift,
            expected: expected(out),
            closed_forms_match: ok,
        }
    });
    let claimed = input.family.as_ref().is_some_and(|f| f.claims_root_unitary);
    let (roots, ap) = if a.roots {
        let (r, ap) = roots_report(&d, &input.poly, claimed, prec);
        if claimed && r.verdict != VERIFIED && r.verdict != "not applicable" {
            let f = r.failure.clone().unwrap_or_else(|| ErrorObject {
                kind: "Verification".into(),
                message: "root-unitarity could not be verified".into(),
            });
            deferred.get_or_insert(CliError::Verification {
                kind: "RootUnitarityFailed",
                message: format!(
                    "{}: {}: {}",
                    input.echo.family.as_deref().unwrap_or("input"),
                    f.kind,
                    f.message
                ),
            });
        }
        (Some(r), ap)
    } else {
        (None, None)
    };
    let law = if gap.is_some() {
        classify(&d, ap.as_ref())
            .ok()
            .map(|c| limit_law(&c, ap.as_ref(), limitlaw::CLASSIFY_TOP_K))
    } else {
        None
    };
    let report = Analysis {
        schema: SCHEMA,
        command: "analyze",
        degree: d.degree(),
        palindromic: d.is_palindromic(),
        total: exact(d.total()),
        mean: exact(&d.mean()),
        variance: exact(&d.variance()),
        m4: gap.as_ref().map(|g| exact(&g.m4)),
        gap_to_3: gap.as_ref().map(|g| exact(&g.gap_to_3)),
        gap_to_1: gap.as_ref().map(|g| exact(&g.gap_to_1)),
        m4_upper_bound: gap.as_ref().map(|g| exact(&g.upper_bound)),
        sandwich: gap.as_ref().and_then(|g| g.sandwich),
        cumulants: exact_all(cumulants.values()),
        cumulant_signs: signs,
        family,
        roots,
        limit_law: law,
        input: input.echo,
        timing: Timing::since(t),
    };
    Ok(Outcome {
        stdout: json(&report),
        deferred,
    })
}

// ---------------------------------------------------------------- sweep

#[derive(Serialize)]
struct SweepJsonRow {
    spec: String,
    params: BTreeMap<String, String>,
    degree: Option<usize>,
    variance: Option<String>,
    m4: Option<String>,
    gap_to_3: Option<String>,
    gap_to_1: Option<String>,
    cumulant_condition: Option<String>,
    top_jump: Option<Real>,
    error: Option<ErrorObject>,
}

pub fn sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let prec = resolve_precision(a.precision)?;
    let schedule = a
        .schedule
        .split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|row| family_spec(&a.family, &parse_params(row)?))
        .collect::<Result<Vec<_>, _>>()?;
    let opts = SweepOptions {
        angles: a.angles,
        precision_bits: prec,
        ..SweepOptions::default()
    };
    let rows = convergence_sweep(&schedule, &opts)?;
    let json_rows: Vec<SweepJsonRow> = rows
        .iter()
        .map(|r| {
            let mut row = SweepJsonRow {
                spec: r.spec.to_string(),
                params: spec_params(&r.spec),
                degree: None,
                variance: None,
                m4: None,
                gap_to_3: None,
                gap_to_1: None,
                cumulant_condition: None,
                top_jump: None,
                error: None,
            };
            match &r.result {
                Ok(s) => {
                    row.degree = Some(s.degree);
                    row.variance = Some(exact(&s.variance));
                    row.m4 = Some(exact(&s.m4));
                    row.gap_to_3 = Some(exact(&s.gap_to_3));
                    row.gap_to_1 = Some(exact(&s.gap_to_1));
                    row.cumulant_condition = s.cumulant_condition.as_ref().map(exact);
                    row.top_jump = match (&s.top_jump, &s.top_jump_error) {
                        (Some(m), Some(e)) => Some(Real::new(m, e)),
                        _ => None,
                    };
                }
                Err(e) => row.error = Some(ErrorObject::from_lib(e)),
            }
            row
        })
        .collect();
    #[derive(Serialize)]
    struct Sweep<'a> {
        schema: &'static str,
        command: &'static str,
        family: &'a str,
        precision_bits: Option<u32>,
        rows: &'a [SweepJsonRow],
        timing: Timing,
    }
    let report = json(&Sweep {
        schema: SCHEMA,
        command: "sweep",
        family: &a.family,
        precision_bits: a.angles.then_some(prec),
        rows: &json_rows,
        timing: Timing::since(t),
    });
    if a.out == Format::Json {
        return Ok(Outcome::ok(report));
    }
    if let Some(p) = &a.sidecar {
        write_sidecar(p, &report)?;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "spec",
        "degree",
        "variance",
        "m4",
        "gap_to_3",
        "gap_to_1",
        "cumulant_condition",
        "top_jump",
        "top_jump_error",
        "error",
    ])
    .map_err(csv_err)?;
    for r in &rows {
        let rec: Vec<String> = match &r.result {
            Ok(s) => vec![
                r.spec.to_string(),
                s.degree.to_string(),
                decimal_exact(&s.variance, CSV_DIGITS),
                decimal_exact(&s.m4, CSV_DIGITS),
                decimal_exact(&s.gap_to_3, CSV_DIGITS),
                decimal_exact(&s.gap_to_1, CSV_DIGITS),
                s.cumulant_condition
                    .as_ref()
                    .map_or(String::new(), |c| decimal_exact(c, CSV_DIGITS)),
                s.top_jump
                    .as_ref()
                    .map_or(String::new(), |x| decimal(x, CSV_DIGITS)),
                s.top_jump_error
                    .as_ref()
                    .map_or(String::new(), |x| decimal(x, 3)),
                String::new(),
            ],
            Err(e) => {
                let mut v = vec![r.spec.to_string()];
                v.extend(std::iter::repeat_n(String::new(), 8));
                v.push(e.kind().to_string());
                v
            }
        };
        w.write_record(&rec).map_err(csv_err)?;
    }
    Ok(Outcome::ok(csv_string(w)?))
}

// ---------------------------------------------------------------- limit

#[derive(Serialize)]
struct MomentRow {
    m: usize,
    finite: String,
    limit: String,
}

#[derive(Serialize)]
struct ReferenceQ {
    law: String,
    values: Vec<Real>,
}

#[derive(Serialize)]
struct Limit {
    schema: &'static str,
    command: &'static str,
    input: InputEcho,
    degree: usize,
    precision_bits: u32,
    valuation: usize,
    limit_law: LimitLaw,
    top_jumps: Vec<JumpRow>,
    m4: String,
    m4_from_jumps: Real,
    reference_q: Option<ReferenceQ>,
    limit_moments: Vec<MomentRow>,
    timing: Timing,
}

fn reference_from_family(spec: &FamilySpec) -> Option<limitlaw::ReferenceLaw> {
    use limitlaw::ReferenceLaw as L;
    match spec {
        FamilySpec::TuranFejer { k, .. } if *k <= 8 => Some(L::BetaKK(*k as u32)),
        FamilySpec::ChungFeller { .. } => Some(L::Arcsine),
        FamilySpec::EulerCosh { .. } => Some(L::UniformCentered),
        FamilySpec::UniformSums { d } if d.len() == 1 => Some(L::UniformCentered),
        _ => None,
    }
}

pub fn limit(a: &LimitArgs) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let prec = resolve_precision(a.precision)?;
    if a.topk == 0 {
        return Err(usage("--topk must be at least 1"));
    }
    let input = load(&a.input)?;
    let d = Distribution::new(&input.poly)?;
    let (valuation, core) = input.poly.split_valuation();
    let claimed = input.family.as_ref().is_some_and(|f| f.claims_root_unitary);
    let ap =
        unitroots::unit_angles_with(&core, &AngleOptions::with_precision(prec)).map_err(|e| {
            if claimed && e.is_verification_failure() {
                CliError::Verification {
                    kind: "RootUnitarityFailed",
                    message: format!("{}: {e}", input.echo.family.as_deref().unwrap_or("input")),
                }
            } else {
                CliError::from(e)
            }
        })?;
    let desc = classify(&d, Some(&ap))?;
    let law = limit_law(&desc, Some(&ap), a.topk);
    let jf = unitroots::jump_function(&ap);
    let top_jumps = ranked(&jf)
        .into_iter()
        .take(a.topk)
        .map(|j| jump_row(j, prec))
        .collect();
    let m4j = limitlaw::fourth_moment_from_jumps(&jf, &d.variance());
    let m4j_err = {
        let s = jf.jumps.iter().fold(Float::new(prec), |acc, j| {
            // d(mass * location) <= 2 location * mass_error
            acc + Float::with_val(prec, &j.location * &j.mass_error) * 2u32
        });
        s * 3u32 + rounding(&m4j)
    };
    let reference = desc
        .evidence
        .matched_law
        .clone()
        .or_else(|| {
            input
                .family
                .as_ref()
                .and_then(|f| reference_from_family(&f.spec))
        })
        .and_then(|law| {
            law.q_sequence(a.topk, prec).map(|v| ReferenceQ {
                law: law.to_string(),
                values: v.iter().map(|x| Real::new(x, &rounding(x))).collect(),
            })
        });
    let mut limit_moments = Vec::new();
    if let Some(out) = &input.family {
        if let Some(n) = out.spec.scale() {
            for m in 1..=6 {
                let Ok(lim) = families::limit_moment_oracles(&out.spec, m) else {
                    break;
                };
                let fin = families::scaled_moment(&input.poly, n, m)?;
                limit_moments.push(MomentRow {
                    m,
                    finite: exact(&fin),
                    limit: exact(&lim),
                });
            }
        }
    }
    let report = Limit {
        schema: SCHEMA,
        command: "limit",
        degree: d.degree(),
        precision_bits: prec,
        valuation,
        limit_law: law,
        top_jumps,
        m4: exact(&desc.evidence.m4),
        m4_from_jumps: Real::new(&m4j, &m4j_err),
        reference_q: reference,
        limit_moments,
        input: input.echo,
        timing: Timing::since(t),
    };
    Ok(Outcome::ok(json(&report)))
}

// ---------------------------------------------------------------- pmf

#[derive(Serialize)]
struct PmfRow {
    k: usize,
    pmf: String,
    normal_density: Option<Real>,
}

/// Normal density with the law's mean and variance at the integers.
fn normal_density(d: &Distribution, prec: u32) -> Result<Vec<(Float, Float)>, CliError> {
    let var = d.variance();
    if var == 0 {
        return Err(unimoment::Error::ZeroVariance.into());
    }
    let wp = prec + 32;
    let mean = d.mean();
    let two_var = Float::with_val(wp, &var) * 2u32;
    let pi = Float::with_val(wp, 1u32).atan() * 4u32;
    let norm = Float::with_val(wp, &two_var * &pi).sqrt().recip();
    Ok((0..=d.degree())
        .map(|k| {
            let x = Float::with_val(wp, Rational::from(k) - &mean);
            let e = Float::with_val(wp, -Float::with_val(wp, x.square_ref()) / &two_var).exp();
            let v = Float::with_val(prec, e * &norm);
            let err = rounding(&v);
            (v, err)
        })
        .collect())
}

pub fn pmf(a: &PmfArgs) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let prec = resolve_precision(a.precision)?;
    let input = load(&a.input)?;
    let d = Distribution::new(&input.poly)?;
    let density = match a.overlay {
        Some(Overlay::Normal) => Some(normal_density(&d, prec)?),
        None => None,
    };
    let rows: Vec<PmfRow> = (0..=d.degree())
        .map(|k| PmfRow {
            k,
            pmf: exact(&d.prob(k)),
            normal_density: density.as_ref().map(|v| Real::new(&v[k].0, &v[k].1)),
        })
        .collect();
    #[derive(Serialize)]
    struct Pmf<'a> {
        schema: &'static str,
        command: &'static str,
        input: InputEcho,
        mean: String,
        variance: String,
        overlay: Option<&'static str>,
        rows: &'a [PmfRow],
        timing: Timing,
    }
    let report = json(&Pmf {
        schema: SCHEMA,
        command: "pmf",
        input: input.echo.clone(),
        mean: exact(&d.mean()),
        variance: exact(&d.variance()),
        overlay: a.overlay.map(|_| "normal"),
        rows: &rows,
        timing: Timing::since(t),
    });
    if a.out == Format::Json {
        return Ok(Outcome::ok(report));
    }
    if let Some(p) = &a.sidecar {
        write_sidecar(p, &report)?;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["k", "pmf"];
    if density.is_some() {
        header.push("normal_density");
    }
    w.write_record(&header).map_err(csv_err)?;
    for k in 0..=d.degree() {
        let mut rec = vec![k.to_string(), decimal_exact(&d.prob(k), CSV_DIGITS)];
        if let Some(v) = &density {
            rec.push(decimal(&v[k].0, CSV_DIGITS));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    Ok(Outcome::ok(csv_string(w)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse() {
        let m = parse_params("n=10, k=2").unwrap();
        assert_eq!(m["n"], "10");
        assert_eq!(m["k"], "2");
        assert!(parse_params("n").is_err());
        assert!(parse_params("n=1,n=2").is_err());
    }

    #[test]
    fn coefficient_lists() {
        let c = parse_coeff_list("1, 1/2 ,3").unwrap();
        assert_eq!(c[1], Rational::from((1, 2)));
        assert!(parse_coeff_list("1,x").is_err());
        assert!(parse_coeff_list(" ").is_err());
    }

    #[test]
    fn gen_flag_forms() {
        let args: Vec<String> = ["--n", "3", "--out=csv"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (p, f) = gen_flags(&args).unwrap();
        assert_eq!(p["n"], "3");
        assert_eq!(f, Format::Csv);
        assert!(gen_flags(&["3".to_string()]).is_err());
    }
}
