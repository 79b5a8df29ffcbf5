use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use unimoment::exactpoly::{expand_factored, ExactPoly};
use unimoment::families::{self, FamilySpec};
use unimoment::limitlaw::{
    self, classify, cumulant_condition, cumulant_sign_check, ReferenceLaw, Verdict,
};
use unimoment::moments::{
    self, cumulants_factored, cumulants_from_pmf, fourth_moment_gap, mgf_bound_check,
    odd_degree_lift, Distribution,
};
use unimoment::specfun::{binomial, factorial};
use unimoment::unitroots::{self, fourth_identity_check, jump_function};
use unimoment::{Float, Integer, Rational};

type Check = std::result::Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dist(p: &ExactPoly) -> Distribution {
    Distribution::new(p).unwrap()
}

fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, e))
}

/// Root-unitary family instances of every factored and analytic generator.
fn corpus() -> Vec<FamilySpec> {
    let mut v = Vec::new();
    for n in 1..=30 {
        v.push(FamilySpec::Inversions { n });
    }
    for n in 1..=6 {
        for m in 1..=6 {
            v.push(FamilySpec::Gaussian { n, m });
        }
    }
    for a in [
        vec![2, 2],
        vec![3, 2, 1],
        vec![4, 4],
        vec![5, 3, 3],
        vec![6, 2, 2, 2],
        vec![4, 4, 4, 4],
    ] {
        v.push(FamilySpec::Mahonian { a });
    }
    for (n, m) in [(3, 2), (5, 2), (6, 3), (8, 2), (9, 3), (10, 2)] {
        v.push(FamilySpec::QCatalan { n, m });
    }
    for d in [
        vec![3],
        vec![3, 5],
        vec![2, 2, 2, 2],
        vec![5, 7, 9],
        vec![11],
    ] {
        v.push(FamilySpec::UniformSums { d });
    }
    for a in [vec![1, 2, 3, 4], vec![1, 1, 2, 2], vec![2, 3, 5, 7, 9]] {
        v.push(FamilySpec::SignedRank { a });
    }
    for (n, r) in [(3, 2), (4, 2), (3, 3)] {
        v.push(FamilySpec::StirlingInversions { n, r });
    }
    v.push(FamilySpec::Bimodal {
        i: 3,
        k: 4,
        j: 2,
        l: 3,
    });
    v.push(FamilySpec::Bimodal {
        i: 1,
        k: 3,
        j: 3,
        l: 2,
    });
    for n in 2..=20 {
        v.push(FamilySpec::TuranFejer { n, k: n / 3 });
    }
    for n in 2..=12 {
        v.push(FamilySpec::Reimer { n, m: 1 });
    }
    for n in 1..=30 {
        v.push(FamilySpec::ChungFeller { n });
        v.push(FamilySpec::EulerCosh { n });
    }
    for (n, alpha) in [(6, q(3, 2)), (8, q(2, 1)), (10, q(1, 3))] {
        v.push(FamilySpec::Gegenbauer { n, alpha });
    }
    v
}

fn even_corpus() -> Vec<(FamilySpec, Distribution)> {
    corpus()
        .into_iter()
        .filter_map(|s| {
            let p = s.generate().unwrap().poly;
            match p.degree() {
                Some(d) if d > 0 && d % 2 == 0 => Some((s, dist(&p))),
                _ => None,
            }
        })
        .collect()
}

fn c01() -> Check {
    let c = even_corpus();
    ensure(c.len() >= 100, || format!("only {} instances", c.len()))?;
    for (s, d) in &c {
        ensure(d.mean() == q(d.degree() as i64 / 2, 1), || {
            format!("{s}: mean {}", d.mean())
        })?;
    }
    Ok(format!("{} even-degree instances", c.len()))
}

fn c02() -> Check {
    let c = even_corpus();
    for (s, d) in &c {
        let n = (d.degree() / 2) as i64;
        let v = d.variance();
        ensure(v >= q(n, 2) && v <= q(n * n, 1), || {
            format!("{s}: variance {v}")
        })?;
        let g = fourth_moment_gap(d).unwrap();
        ensure(g.m4 >= 1 && g.m4 <= g.upper_bound, || {
            format!("{s}: m4 {}", g.m4)
        })?;
    }
    Ok(format!("{} instances", c.len()))
}

fn c03() -> Check {
    let mut specs: Vec<FamilySpec> = (1..=20).map(|n| FamilySpec::Inversions { n }).collect();
    specs.extend([
        FamilySpec::Gaussian { n: 4, m: 5 },
        FamilySpec::Gaussian { n: 7, m: 3 },
        FamilySpec::Mahonian { a: vec![3, 3, 2] },
        FamilySpec::Mahonian { a: vec![5, 4] },
        FamilySpec::QCatalan { n: 7, m: 2 },
        FamilySpec::QCatalan { n: 6, m: 4 },
        FamilySpec::UniformSums { d: vec![4, 6, 9] },
        FamilySpec::SignedRank {
            a: (1..=8).collect(),
        },
        FamilySpec::StirlingInversions { n: 5, r: 2 },
        FamilySpec::Bimodal {
            i: 2,
            k: 5,
            j: 3,
            l: 2,
        },
    ]);
    for s in &specs {
        let fs = s.factored_spec().unwrap();
        let p = expand_factored(&fs).unwrap();
        let a = cumulants_from_pmf(&dist(&p), 8);
        let b = cumulants_factored(&fs, 8).unwrap();
        ensure(a == b, || format!("{s}: routes differ"))?;
        if let FamilySpec::Inversions { n } = s {
            let k2: Integer = (1..=*n).map(|j| Integer::from(j * j - 1)).sum();
            let k4: Integer = (1..=*n).map(|j| Integer::from(j * j * j * j - 1)).sum();
            ensure(*b.get(2) == Rational::from((k2, 12)), || {
                format!("{s}: kappa2")
            })?;
            ensure(*b.get(4) == -Rational::from((k4, 120)), || {
                format!("{s}: kappa4")
            })?;
        }
    }
    Ok(format!("{} specs through kappa8", specs.len()))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut x = p.clone();
            x.insert(i, n - 1);
            out.push(x);
        }
    }
    out
}

fn c04() -> Check {
    let mut counts = vec![0i64; 4];
    for p in permutations(3) {
        let inv = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        counts[inv] += 1;
    }
    let brute = dist(&ExactPoly::from_integers(&counts));
    let engine = dist(&FamilySpec::Inversions { n: 3 }.generate().unwrap().poly);
    for d in [&brute, &engine] {
        ensure(d.variance() == q(11, 12), || {
            format!("variance {}", d.variance())
        })?;
        let k = cumulants_from_pmf(d, 4);
        ensure(*k.get(4) == q(-19, 24), || format!("kappa4 {}", k.get(4)))?;
        let m4 = fourth_moment_gap(d).unwrap().m4;
        ensure(m4 == q(249, 121), || format!("m4 {m4}"))?;
    }
    let d = dist(&FamilySpec::Inversions { n: 200 }.generate().unwrap().poly);
    let g = fourth_moment_gap(&d).unwrap();
    let scaled = Rational::from(&g.gap_to_3 * 200u32) - q(54, 25);
    let err = scaled.to_f64().abs();
    ensure(err < 0.15, || format!("|n(3 - m4) - 54/25| = {err}"))?;
    Ok(format!("n=3 exact; n=200 deviation {err:.4}"))
}

fn c05() -> Check {
    let specs = [
        FamilySpec::Inversions { n: 5 },
        FamilySpec::Inversions { n: 8 },
        FamilySpec::Inversions { n: 12 },
        FamilySpec::Gaussian { n: 4, m: 4 },
        FamilySpec::Gaussian { n: 6, m: 2 },
        FamilySpec::Mahonian { a: vec![4, 4] },
        FamilySpec::QCatalan { n: 6, m: 2 },
        FamilySpec::UniformSums { d: vec![5, 7] },
        FamilySpec::UniformSums { d: vec![9] },
        FamilySpec::SignedRank {
            a: vec![1, 2, 3, 4, 5, 6, 7],
        },
        FamilySpec::Inversions { n: 4 },
        FamilySpec::TuranFejer { n: 10, k: 2 },
        FamilySpec::TuranFejer { n: 14, k: 6 },
        FamilySpec::TuranFejer { n: 20, k: 0 },
        FamilySpec::Reimer { n: 6, m: 1 },
        FamilySpec::Reimer { n: 10, m: 1 },
        FamilySpec::ChungFeller { n: 8 },
        FamilySpec::ChungFeller { n: 14 },
        FamilySpec::EulerCosh { n: 10 },
        FamilySpec::Gegenbauer {
            n: 12,
            alpha: q(3, 2),
        },
    ];
    let prec = 256;
    let (tv, tm) = (pow2(prec, -80), pow2(prec, -60));
    let mut worst = (0f64, 0f64);
    for s in &specs {
        let p = s.generate().unwrap().poly;
        let ap = unitroots::unit_angles(&p, prec).map_err(|e| format!("{s}: {e}"))?;
        let r = fourth_identity_check(&dist(&p), &ap, &tm).map_err(|e| format!("{s}: {e}"))?;
        ensure(r.variance_discrepancy < tv, || {
            format!("{s}: |S1 - var| = {}", r.variance_discrepancy.to_f64())
        })?;
        ensure(r.m4_discrepancy < tm, || {
            format!("{s}: m4 discrepancy {}", r.m4_discrepancy.to_f64())
        })?;
        worst.0 = worst.0.max(r.variance_discrepancy.to_f64());
        worst.1 = worst.1.max(r.m4_discrepancy.to_f64());
    }
    Ok(format!(
        "{} instances, max |S1-var| {:.1e}, max m4 {:.1e}",
        specs.len(),
        worst.0,
        worst.1
    ))
}

fn c06() -> Check {
    let mut count = 0;
    for n in 0..=30u64 {
        for k in 0..=n {
            let out = families::gen_turan_fejer(n, k).unwrap();
            let d = dist(&out.poly);
            ensure(d.mean() == (n - k, 2), || format!("({n},{k}) mean"))?;
            let var = Rational::from(((n - k) * (n + k + 2), 4 * (2 * k + 3)));
            ensure(d.variance() == var, || {
                format!("({n},{k}) variance {}", d.variance())
            })?;
            if k < n {
                let nn = Integer::from(3 * n * n + 6 * n + k * k + 4 * k + 6) * 2u32;
                let dd = Integer::from(n - k) * (n + k + 2) * (2 * k + 5);
                let want = Rational::from(3) - Rational::from((nn, dd));
                let m4 = fourth_moment_gap(&d).unwrap().m4;
                ensure(m4 == want, || format!("({n},{k}) m4 {m4} vs {want}"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} (n,k) pairs"))
}

fn c07() -> Check {
    for n in 0..=30u64 {
        let p = families::gen_turan_fejer(n, 0).unwrap().poly;
        ensure(
            p.coeffs().iter().all(|c| *c == Rational::from((1, n + 1))),
            || format!("k=0, n={n} not uniform"),
        )?;
    }
    let mut worst = 0f64;
    for l in 1..=6u64 {
        let p = families::gen_turan_fejer(2000, 2000 - l).unwrap().poly;
        for j in 0..=l {
            let b = Rational::from((binomial(l, j), Integer::from(1) << l as u32));
            let e = Rational::from(&p.coeff(j as usize) - &b).abs().to_f64();
            worst = worst.max(e);
        }
    }
    ensure(worst < 1e-3, || format!("max deviation {worst}"))?;
    Ok(format!(
        "uniform for k=0; binomial deviation {worst:.2e} at n=2000, l<=6"
    ))
}

/// Unnormalized weights `C(n,j) |int_j^{j+1} t(t-1)...(t-n-1) dt|`.
fn reimer_by_integration(n: usize) -> ExactPoly {
    let mut w = ExactPoly::one();
    for r in 0..=n + 1 {
        w = &w * &ExactPoly::from_coeffs([Rational::from(-(r as i64)), Rational::from(1)]);
    }
    let antider = ExactPoly::from_coeffs(
        std::iter::once(Rational::new()).chain(
            w.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| Rational::from(c / (i as u64 + 1))),
        ),
    );
    ExactPoly::from_coeffs((0..=n).map(|j| {
        let a = antider.eval(&Rational::from(j as u64));
        let b = antider.eval(&Rational::from(j as u64 + 1));
        Rational::from(&b - &a).abs() * binomial(n as u64, j as u64)
    }))
}

fn c08() -> Check {
    for n in 1..=15u64 {
        let out = families::gen_reimer(n).unwrap();
        let integral = reimer_by_integration(n as usize);
        ensure(
            integral.value_at_one() == Rational::from((factorial(n + 2), 12)),
            || format!("R_{n}(1)"),
        )?;
        ensure(integral.normalized().unwrap() == out.poly, || {
            format!("n={n}: PGF differs from the integral")
        })?;
        let d = dist(&out.poly);
        ensure(d.mean() == (n, 2), || format!("n={n} mean"))?;
        ensure(d.variance() == (n * (4 * n + 11), 60), || {
            format!("n={n} variance {}", d.variance())
        })?;
    }
    let p1 = families::gen_reimer(1).unwrap().poly.normalized().unwrap();
    ensure(p1 == ExactPoly::from_coeffs([q(1, 2), q(1, 2)]), || {
        "n=1 PGF".into()
    })?;
    let t = FamilySpec::Reimer { n: 0, m: 1 };
    for m in 1..=4 {
        let oracle = families::limit_moment_oracles(&t, m).unwrap();
        let errs: Vec<Rational> = [10u64, 20, 40]
            .iter()
            .map(|&n| {
                let got =
                    families::scaled_moment(&families::gen_reimer(n).unwrap().poly, n, m).unwrap();
                Rational::from(&got - &oracle).abs()
            })
            .collect();
        ensure(
            errs.windows(2)
                .all(|w| w[1] < w[0] || (w[0] == 0 && w[1] == 0)),
            || {
                format!(
                    "m={m} errors {:?}",
                    errs.iter().map(|e| e.to_f64()).collect::<Vec<_>>()
                )
            },
        )?;
    }
    Ok("n<=15 exact; scaled moments monotone for m<=4".into())
}

fn c09() -> Check {
    for n in 1..=20u64 {
        let p = FamilySpec::ChungFeller { n }.generate().unwrap().poly;
        for k in 0..=n {
            let want = Rational::from((
                binomial(2 * k, k) * binomial(2 * (n - k), n - k),
                Integer::from(1) << (2 * n) as u32,
            ));
            ensure(p.coeff(k as usize) == want, || format!("n={n}, k={k}"))?;
        }
    }
    for n in 1..=20u64 {
        let p = FamilySpec::Gegenbauer { n, alpha: q(1, 1) }
            .generate()
            .unwrap()
            .poly;
        ensure(
            p.coeffs().iter().all(|c| *c == Rational::from((1, n + 1))),
            || format!("alpha=1, n={n}"),
        )?;
    }
    let tol = pow2(256, -64);
    let mut worst = 0f64;
    for n in 1..=15u64 {
        let p = FamilySpec::ChungFeller { n }.generate().unwrap().poly;
        let ap = unitroots::unit_angles(&p, 256).map_err(|e| format!("n={n}: {e}"))?;
        ensure(ap.root_count() == n as usize, || {
            format!("n={n}: {} unit roots", ap.root_count())
        })?;
        ensure(ap.residual_bound < tol, || {
            format!("n={n}: residual {}", ap.residual_bound.to_f64())
        })?;
        worst = worst.max(ap.residual_bound.to_f64());
    }
    Ok(format!("exact PMFs; max residual {worst:.1e}"))
}

fn c10() -> Check {
    for n in 1..=50usize {
        let mut c = vec![0i64; 2 * n + 1];
        c[0] = 1;
        c[2 * n] = 1;
        let d = dist(&ExactPoly::from_integers(&c));
        ensure(fourth_moment_gap(&d).unwrap().m4 == 1, || {
            format!("n={n}: m4 != 1")
        })?;
        let v = classify(&d, None).unwrap().verdict;
        ensure(v == Verdict::Bernoulli, || format!("n={n}: {v}"))?;
    }
    Ok("n<=50".into())
}

fn c11() -> Check {
    let start = Instant::now();
    let p = FamilySpec::UniformSums { d: vec![4001] }
        .generate()
        .unwrap()
        .poly;
    let ap = unitroots::unit_angles(&p, 192).map_err(|e| e.to_string())?;
    let pp = limitlaw::extract_product_params(&jump_function(&ap), 5);
    let elapsed = start.elapsed();
    let want = ReferenceLaw::UniformCentered.q_sequence(5, 192).unwrap();
    let mut worst = 0f64;
    for (g, w) in pp.q_list.iter().zip(&want) {
        worst = worst.max((g.to_f64() / w.to_f64() - 1.0).abs());
    }
    ensure(pp.q_list.len() == 5 && worst < 0.01, || {
        format!("relative error {worst}")
    })?;
    ensure(elapsed.as_secs() < 300, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "max relative error {worst:.2e}, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn cc(s: FamilySpec) -> Rational {
    cumulant_condition(&s.factored_spec().unwrap()).unwrap()
}

fn strictly_decreasing(v: &[Rational]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn c12() -> Check {
    let g: Vec<Rational> = [4, 8, 16, 32]
        .iter()
        .map(|&n| cc(FamilySpec::Gaussian { n, m: n }))
        .collect();
    ensure(strictly_decreasing(&g), || "gaussian not decreasing".into())?;
    let m: Vec<Rational> = [4, 8, 16]
        .iter()
        .map(|&t| cc(FamilySpec::Mahonian { a: vec![t, t] }))
        .collect();
    ensure(strictly_decreasing(&m), || "mahonian not decreasing".into())?;
    let c: Vec<Rational> = [8, 16, 32]
        .iter()
        .map(|&n| cc(FamilySpec::QCatalan { n, m: 2 }))
        .collect();
    ensure(c[2] < (&c[1] / Rational::from((3, 2))), || {
        format!("q-catalan {} vs {}", c[2].to_f64(), c[1].to_f64())
    })?;
    Ok(format!(
        "gaussian {:.4}->{:.4}, mahonian {:.4}->{:.4}, q-catalan {:.4}/{:.4}/{:.4}",
        g[0].to_f64(),
        g[3].to_f64(),
        m[0].to_f64(),
        m[2].to_f64(),
        c[0].to_f64(),
        c[1].to_f64(),
        c[2].to_f64()
    ))
}

fn c13() -> Check {
    let median3 = vec![q(0, 1), q(1, 1), q(0, 1)];
    let ninther = vec![
        q(0, 1),
        q(0, 1),
        q(0, 1),
        q(3, 14),
        q(4, 7),
        q(3, 14),
        q(0, 1),
        q(0, 1),
        q(0, 1),
    ];
    let cases = [(3u64, median3.clone()), (4, vec![q(1, 4); 4]), (9, ninther)];
    let mut count = 0;
    for (r, p) in &cases {
        let pi2: Rational = p
            .iter()
            .enumerate()
            .map(|(j, pj)| Rational::from(pj * (j * j) as u64))
            .sum();
        let r = *r;
        let rr = Rational::from(r);
        for n in r + 1..=50 {
            let out = families::gen_hypergeom_mixture(n, r, p).unwrap();
            let d = dist(&out.poly);
            ensure(d.mean() == (n - 1, 2), || format!("r={r}, n={n}: mean"))?;
            let nq = Rational::from(n);
            let a2 = Rational::from(&pi2 * 4) - Rational::from(&rr * &rr) + Rational::from(&rr * 3);
            let a1 = (Rational::from(&pi2 * 6) - Rational::from(&rr * &rr) * 2
                + Rational::from(&rr * 3)
                - 1)
                * 2;
            let a0 = Rational::from(&pi2 * 8) - Rational::from(&rr * &rr) * 3
                + Rational::from(&rr * 3)
                - 2;
            let var = (a2 * Rational::from(&nq * &nq) + a1 * &nq + a0)
                / Rational::from(4 * (r + 1) * (r + 2));
            ensure(d.variance() == var, || {
                format!("r={r}, n={n}: variance {} vs {var}", d.variance())
            })?;
            let raw = d.raw_moments(4);
            for m in 1..=4 {
                ensure(
                    raw[m] == families::hypergeom_mixture_moment(n, r, p, m),
                    || format!("r={r}, n={n}: E Y^{m}"),
                )?;
            }
            count += 1;
        }
        let t = FamilySpec::HypergeomMixture {
            n: 0,
            r,
            p: p.clone(),
        };
        for m in 1..=4 {
            let oracle = families::limit_moment_oracles(&t, m).unwrap();
            let errs: Vec<Rational> = [20u64, 40, 80, 160]
                .iter()
                .map(|&n| {
                    let got = families::scaled_moment(
                        &families::gen_hypergeom_mixture(n, r, p).unwrap().poly,
                        n,
                        m,
                    )
                    .unwrap();
                    Rational::from(&got - &oracle).abs()
                })
                .collect();
            ensure(strictly_decreasing(&errs), || {
                format!("r={r}, m={m}: limit errors not decreasing")
            })?;
        }
    }
    let mut gaps = Vec::new();
    for n in [50u64, 100, 200] {
        let d = dist(
            &families::gen_hypergeom_mixture(n, 3, &median3)
                .unwrap()
                .poly,
        );
        let g = fourth_moment_gap(&d).unwrap().gap_to_3;
        ensure(g > q(1, 10), || {
            format!("median3 n={n}: gap {}", g.to_f64())
        })?;
        gaps.push(g.to_f64());
    }
    Ok(format!(
        "{count} exact instances; median-of-3 gaps {gaps:.3?}"
    ))
}

fn c14() -> Check {
    let mut polys = Vec::new();
    for n in (2..=30).filter(|n| (n * (n - 1) / 2) % 2 == 1) {
        polys.push(FamilySpec::Inversions { n }.generate().unwrap().poly);
    }
    for n in [1, 3, 5, 7, 9, 11] {
        polys.push(FamilySpec::ChungFeller { n }.generate().unwrap().poly);
        polys.push(FamilySpec::EulerCosh { n }.generate().unwrap().poly);
    }
    polys.push(
        FamilySpec::TuranFejer { n: 9, k: 2 }
            .generate()
            .unwrap()
            .poly,
    );
    polys.push(
        FamilySpec::UniformSums { d: vec![4, 5] }
            .generate()
            .unwrap()
            .poly,
    );
    ensure(polys.len() >= 20, || {
        format!("only {} instances", polys.len())
    })?;
    for p in &polys {
        let r = odd_degree_lift(p).map_err(|e| e.to_string())?;
        ensure(r.all_hold(), || {
            format!("degree {:?}: identity fails", p.degree())
        })?;
    }
    Ok(format!("{} odd-degree instances", polys.len()))
}

fn c15() -> Check {
    let mut specs = Vec::new();
    for n in [4, 9, 16] {
        specs.push(FamilySpec::TuranFejer { n, k: 1 });
        specs.push(FamilySpec::TuranFejer { n, k: n - 2 });
        specs.push(FamilySpec::ChungFeller { n });
        specs.push(FamilySpec::EulerCosh { n });
        specs.push(FamilySpec::Reimer { n, m: 1 });
        specs.push(FamilySpec::Gegenbauer { n, alpha: q(5, 2) });
        specs.push(FamilySpec::UniformSums { d: vec![n + 1] });
    }
    let mut checked = 0;
    for s in &specs {
        let p = s.generate().unwrap().poly;
        if p.degree().unwrap() % 2 == 1 {
            continue;
        }
        let r = cumulant_sign_check(&dist(&p), 8).map_err(|e| format!("{s}: {e}"))?;
        ensure(r.all_hold(), || {
            format!(
                "{s}: violations at {:?}",
                r.violations().map(|c| c.order).collect::<Vec<_>>()
            )
        })?;
        checked += 1;
    }
    for n in 1..=10usize {
        let mut c = vec![0i64; 2 * n + 1];
        c[0] = 1;
        c[2 * n] = 1;
        let r = cumulant_sign_check(&dist(&ExactPoly::from_integers(&c)), 8).unwrap();
        ensure(r.all_hold(), || format!("bernoulli n={n}"))?;
        checked += 1;
    }
    Ok(format!("{checked} instances through kappa8"))
}

fn c16() -> Check {
    let grid: Vec<Rational> = [
        (-2, 1),
        (-1, 1),
        (-1, 2),
        (-1, 4),
        (1, 8),
        (1, 4),
        (1, 2),
        (1, 1),
        (2, 1),
    ]
    .iter()
    .map(|&(a, b)| q(a, b))
    .collect();
    let specs = [
        FamilySpec::Inversions { n: 8 },
        FamilySpec::Gaussian { n: 4, m: 6 },
        FamilySpec::UniformSums { d: vec![5, 5] },
        FamilySpec::SignedRank {
            a: vec![1, 2, 3, 4, 6],
        },
        FamilySpec::TuranFejer { n: 12, k: 2 },
        FamilySpec::Reimer { n: 8, m: 1 },
        FamilySpec::ChungFeller { n: 10 },
        FamilySpec::EulerCosh { n: 6 },
        FamilySpec::Gegenbauer {
            n: 8,
            alpha: q(3, 2),
        },
        FamilySpec::QCatalan { n: 5, m: 3 },
    ];
    let mut min_margin = f64::INFINITY;
    for s in &specs {
        let d = dist(&s.generate().unwrap().poly);
        let r = mgf_bound_check(&d, &grid, moments::MGF_DEFAULT_PRECISION)
            .map_err(|e| format!("{s}: {e}"))?;
        ensure(r.all_hold(), || format!("{s}: bound fails"))?;
        for row in &r.rows {
            min_margin = min_margin.min(row.margin.to_f64());
        }
    }
    Ok(format!(
        "{} instances x {} points, min margin {min_margin:.3e}",
        specs.len(),
        grid.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Check); 16] = [
        ("C01", "mean identity", c01),
        ("C02", "variance bounds and fourth-moment sandwich", c02),
        ("C03", "dual-route cumulants", c03),
        ("C04", "inversions benchmark", c04),
        ("C05", "angle/coefficient reconciliation", c05),
        ("C06", "Turan-Fejer closed forms", c06),
        ("C07", "Turan-Fejer regimes", c07),
        ("C08", "Reimer", c08),
        ("C09", "Chung-Feller", c09),
        ("C10", "Bernoulli extremal", c10),
        ("C11", "jump-function limits", c11),
        ("C12", "cumulant condition trends", c12),
        ("C13", "hypergeometric mixtures", c13),
        ("C14", "odd-degree lift", c14),
        ("C15", "cumulant sign alternation", c15),
        ("C16", "MGF bound", c16),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, f) in criteria {
        let t = Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(f)) {
            Ok(r) => r,
            Err(e) => Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name}: {detail} ({secs:.2}s)"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {why} ({secs:.2}s)");
            }
        }
    }
    println!("{} of 16 criteria passed", 16 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
