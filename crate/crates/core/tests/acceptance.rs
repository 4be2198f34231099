//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tame_measure::bounds::{
    corollary_measure_bound, diagram_component_bound, khovanskii_fewnomial_bound, optm_bound,
    zell_bound,
};
use tame_measure::crofton::{estimate_curve_length, estimate_measure, EstimatorOptions};
use tame_measure::geom::{crofton_constant, Window};
use tame_measure::harness::{exact_curve_length_oracle, fit_power_law, run_scenario, RunConfig, Scenario};
use tame_measure::poly::{isolate_real_roots_exact, parse_expression, MultiPoly, UniPoly, VariableNames};
use tame_measure::sets::{Diagram, ParametricCurve, PfaffianFormat, SemiAlgebraicSet};

const SEED: u64 = 42;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn hypersurface(src: &str, m: usize) -> SemiAlgebraicSet {
    let p = parse_expression(src, &VariableNames::for_dim(m)).unwrap();
    SemiAlgebraicSet::hypersurface(MultiPoly::Exact(p)).unwrap()
}

fn opts() -> EstimatorOptions {
    EstimatorOptions::default()
}

fn c1_constants() -> Outcome {
    let c = crofton_constant(2, 1).unwrap();
    let (d, r) = (2.0, 1.0);
    let chain = c * d * 2.0 * r;
    let bound = corollary_measure_bound(2, 1, d, r).unwrap().value.unwrap();
    let ok = (c - PI / 2.0).abs() <= 1e-12 && (chain - PI * d * r).abs() <= 1e-12 && (bound - 2.0 * PI).abs() <= 1e-12;
    outcome(ok, format!("c(2,1) = {c:.15}, c·d·2r = {chain:.15}, corollary = {bound:.15}"))
}

fn c2_circle() -> Outcome {
    let w = Window::centered(2, 1.5).unwrap();
    let e = estimate_measure(&hypersurface("x^2+y^2-1", 2), &w, 20_000, SEED, &opts()).unwrap();
    let bound = corollary_measure_bound(2, 1, 2.0, 1.5).unwrap().value.unwrap();
    let tol = (0.02 * 2.0 * PI).max(3.0 * e.std_error);
    let ok = (e.value - 2.0 * PI).abs() <= tol && e.value <= bound && (bound - 3.0 * PI).abs() < 1e-12;
    outcome(ok, format!("value {:.6} ± {:.6}, target 2π, bound {bound:.6}", e.value, e.std_error))
}

fn c3_sphere() -> Outcome {
    let w = Window::centered(3, 1.0).unwrap();
    let e = estimate_measure(&hypersurface("x^2+y^2+z^2-1", 3), &w, 50_000, SEED, &opts()).unwrap();
    let bound = corollary_measure_bound(3, 2, 2.0, 1.0).unwrap().value.unwrap();
    let ok = (e.value - 4.0 * PI).abs() <= 0.03 * 4.0 * PI && e.value <= bound + 3.0 * e.std_error;
    outcome(
        ok,
        format!("value {:.12} ± {:.3e}, bound {bound:.12}, ambiguous {}", e.value, e.std_error, e.n_ambiguous),
    )
}

fn c4_segment() -> Outcome {
    let w = Window::centered(2, 1.0).unwrap();
    let e = estimate_measure(&hypersurface("y", 2), &w, 20_000, SEED, &opts()).unwrap();
    let ok = (e.value - 2.0).abs() <= 3.0 * e.std_error;
    outcome(ok, format!("value {:.6} ± {:.6}, target 2", e.value, e.std_error))
}

fn c5_curves() -> Outcome {
    let closed = (2.0 * 5f64.sqrt() + 2f64.asinh()) / 4.0;
    let mut ok = true;
    let mut detail = Vec::new();
    for doc in [r#"{"coords":["t","t^2"]}"#, r#"{"coords":["t","t^2","t^3"]}"#] {
        let c = ParametricCurve::from_json(doc).unwrap();
        let oracle = exact_curve_length_oracle(&c, 32).unwrap();
        let e = estimate_curve_length(&c, 20_000, SEED, &opts()).unwrap();
        ok &= !oracle.accuracy_flag;
        ok &= (e.value - oracle.value).abs() <= (0.02 * oracle.value).max(3.0 * e.std_error);
        if c.ambient_dim() == 2 {
            ok &= (oracle.value - closed).abs() <= 1e-9;
        }
        detail.push(format!("m={}: {:.5} ± {:.5} vs oracle {:.9}", c.ambient_dim(), e.value, e.std_error, oracle.value));
    }
    outcome(ok, detail.join("; "))
}

fn c6_bounds() -> Outcome {
    let f = PfaffianFormat::new(2, 1, 2, 3, 0, 1).unwrap();
    let got = [
        optm_bound(2, 3).unwrap().value,
        khovanskii_fewnomial_bound(2, 2).unwrap().value,
        khovanskii_fewnomial_bound(1, 1).unwrap().value,
        diagram_component_bound(&Diagram::new(2, vec![vec![2]]).unwrap()).value,
        zell_bound(&f, 0).value,
    ];
    let want = [10.0, 392.0, 2.0, 8.0, 66.0];
    let ok = got.iter().zip(want).all(|(g, w)| *g == Some(w));
    outcome(ok, format!("{got:?}"))
}

fn c7_hoelder() -> Outcome {
    // f(x) = 2x³: H¹(f⁻¹([0, y])) = (y/2)^{1/3}
    let pairs: Vec<(f64, f64)> = (1..=9)
        .map(|i| {
            let y = i as f64 / 10.0;
            (y, (y / 2.0).powf(1.0 / 3.0))
        })
        .collect();
    let fit = fit_power_law(&pairs).unwrap();
    let third = 1.0 / 3.0;
    let c = 2f64.powf(-third);
    let ok = (fit.alpha - third).abs() <= 0.05 * third && (fit.c - c).abs() <= 0.05 * c;
    outcome(ok, format!("alpha {:.12}, C {:.12}, residual {:.2e}", fit.alpha, fit.c, fit.residual))
}

fn c8_non_hoelder() -> Outcome {
    // direct evaluation of -1/ln y <= C y^α on y = e^{-t}
    let mut all = true;
    let mut worst_t: u32 = 0;
    for c in [1.0f64, 10.0, 100.0] {
        for j in 1..=10 {
            let alpha = j as f64 / 10.0;
            let hit = (1..=700u32).find(|&t| {
                let y = (-(t as f64)).exp();
                -1.0 / y.ln() > c * y.powf(alpha)
            });
            match hit {
                Some(t) => worst_t = worst_t.max(t),
                None => all = false,
            }
        }
    }
    let run = run_scenario(&RunConfig::new(Scenario::NonHoelderDemo, None, 0)).unwrap();
    outcome(
        all && run.report.passed,
        format!("every (C, α) violated by t <= {worst_t}; scenario passed = {}", run.report.passed),
    )
}

fn c9_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_tame-measure");
    let dir = tempfile::tempdir().unwrap();
    let mut mismatched = Vec::new();
    for s in Scenario::ALL {
        let mut outputs = Vec::new();
        for workers in [1, 2, 8] {
            let path = dir.path().join(format!("{}-{workers}.json", s.name()));
            let status = Command::new(bin)
                .args(["verify", "--scenario", s.name(), "--seed", "7", "--workers"])
                .arg(workers.to_string())
                .arg("--json")
                .arg(&path)
                .stderr(std::process::Stdio::null())
                .status()
                .unwrap();
            if status.code() == Some(2) {
                mismatched.push(format!("{}: input error", s.name()));
            }
            outputs.push(std::fs::read(&path).unwrap_or_default());
        }
        if outputs.iter().any(|o| o.is_empty() || *o != outputs[0]) {
            mismatched.push(s.name().to_string());
        }
    }
    outcome(
        mismatched.is_empty(),
        format!("{} scenarios x workers 1,2,8; differing: {mismatched:?}", Scenario::ALL.len()),
    )
}

// ---- independent Sturm-sequence oracle on dense rational coefficients ----

type Q = BigRational;

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[Q]) -> Vec<Q> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn remainder(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let lead = b.last().unwrap();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// `p / (x - a)` for a root `a`.
fn deflate(p: &[Q], a: &Q) -> Vec<Q> {
    let n = p.len() - 1;
    let mut q = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + carry * a;
        q[i] = carry.clone();
    }
    trim(q)
}

fn sign_variations(chain: &[Vec<Q>], x: &Q) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of `p` in the closed interval `[a, b]`.
fn sturm_count(p: &[Q], a: &Q, b: &Q) -> usize {
    let mut p = trim(p.to_vec());
    let mut on_ends = 0;
    for e in [a, b] {
        if p.len() > 1 && eval(&p, e).is_zero() {
            on_ends += 1;
            while p.len() > 1 && eval(&p, e).is_zero() {
                p = deflate(&p, e);
            }
        }
    }
    if p.len() <= 1 {
        return on_ends;
    }
    let mut chain = vec![p.clone(), derivative(&p)];
    loop {
        let n = chain.len();
        let r = remainder(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    sign_variations(&chain, a) - sign_variations(&chain, b) + on_ends
}

fn rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Q {
    Q::new(BigInt::from(rng.random_range(-num..=num)), BigInt::from(rng.random_range(1..=den)))
}

fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// A random nonzero polynomial of degree at most 8 and an interval, mixing
/// dense random coefficients, products of rational linear factors with
/// repeats and near-repeats, and endpoints placed on roots.
fn random_instance(rng: &mut ChaCha8Rng) -> (Vec<Q>, Q, Q) {
    let mut roots = Vec::new();
    let p = match rng.random_range(0..3) {
        0 => loop {
            let d = rng.random_range(0..=8);
            let p = trim((0..=d).map(|_| rational(rng, 10, 4)).collect());
            if !p.is_empty() {
                break p;
            }
        },
        kind => {
            let d = rng.random_range(1..=8);
            let mut p = vec![rational(rng, 5, 1).abs() + Q::one()];
            while p.len() <= d {
                let r = if !roots.is_empty() && rng.random_bool(0.3) {
                    let prev: &Q = &roots[rng.random_range(0..roots.len())];
                    if kind == 2 {
                        prev + Q::new(BigInt::one(), BigInt::from(1000))
                    } else {
                        prev.clone()
                    }
                } else {
                    rational(rng, 9, 3)
                };
                if p.len() + 2 <= d + 1 && rng.random_bool(0.2) {
                    // irreducible or real-rooted quadratic x² - c
                    let c = rational(rng, 6, 2);
                    p = mul(&p, &[-c, Q::zero(), Q::one()]);
                } else {
                    p = mul(&p, &[-r.clone(), Q::one()]);
                    roots.push(r);
                }
            }
            p
        }
    };
    let mut lo = rational(rng, 12, 3) - Q::from_integer(BigInt::from(1));
    let mut hi = lo.clone() + rational(rng, 12, 2).abs() + Q::new(BigInt::one(), BigInt::from(3));
    if !roots.is_empty() && rng.random_bool(0.25) {
        let r = roots[rng.random_range(0..roots.len())].clone();
        if rng.random_bool(0.5) {
            lo = r;
        } else {
            hi = r;
        }
        if lo >= hi {
            std::mem::swap(&mut lo, &mut hi);
            hi += Q::one();
        }
    }
    (p, lo, hi)
}

fn c10_sturm() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let eps = Q::new(BigInt::one(), BigInt::from(10u64.pow(10)));
    let mut mismatches = Vec::new();
    let mut total_roots = 0;
    for i in 0..500 {
        let (p, lo, hi) = random_instance(&mut rng);
        let expected = sturm_count(&p, &lo, &hi);
        let got = isolate_real_roots_exact(&UniPoly::new(p.clone()), &lo, &hi, &eps)
            .map(|v| v.len())
            .unwrap_or(usize::MAX);
        total_roots += expected;
        if got != expected {
            mismatches.push(format!("#{i}: isolation {got}, sturm {expected}"));
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("500 polynomials, {total_roots} roots in total; mismatches {mismatches:?}"),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("constants c(2,1) and the πdr chain", Duration::from_secs(1), c1_constants),
        ("circle length in r = 1.5", Duration::from_secs(10), c2_circle),
        ("sphere area in r = 1 (tight bound)", Duration::from_secs(60), c3_sphere),
        ("segment length in r = 1", Duration::from_secs(5), c4_segment),
        ("parametric curve lengths", Duration::MAX, c5_curves),
        ("bound table", Duration::MAX, c6_bounds),
        ("Hölder fit for 2x³", Duration::MAX, c7_hoelder),
        ("non-Hölder grid", Duration::MAX, c8_non_hoelder),
        ("determinism across 1/2/8 workers", Duration::MAX, c9_determinism),
        ("isolation vs Sturm on 500 polynomials", Duration::MAX, c10_sturm),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let passed = out.passed && in_time;
        failures += usize::from(!passed);
        let budget = if *limit == Duration::MAX {
            String::new()
        } else {
            format!(", limit {:.0} s", limit.as_secs_f64())
        };
        println!(
            "{} criterion {:>2}: {name} | {} | {:.2} s{budget}",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64(),
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
