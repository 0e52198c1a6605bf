//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line with its runtime. Run with
//!
//! ```text
//! cargo test -p costprophet --test acceptance -- --nocapture
//! ```

use std::time::Instant;

use costprophet::counterexamples::{equal_revenue_gap, naive_threshold_curve, non_iid_gap};
use costprophet::distributions::DistributionSpec;
use costprophet::monte_carlo::simulate_schedule;
use costprophet::prophet::{prophet_cost, prophet_cost_closed};
use costprophet::quadrature::QuadratureConfig;
use costprophet::single_threshold::single_threshold_curve;
use costprophet::special::{
    gamma, lambda_factor, lower_incomplete_gamma, upper_incomplete_gamma, SeriesConfig,
};
use costprophet::stopping::{expected_cost_sequence, optimal_schedule, ratio_curve};

const CFG: QuadratureConfig = QuadratureConfig {
    rel_tolerance: 1e-10,
    max_subdivisions: 60,
    tail_cutoff_mass: 1e-12,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Prints the criterion's verdict line and panics on any recorded failure.
fn finish(name: &str, budget_secs: f64, started: Instant, mut failures: Vec<String>) {
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed > budget_secs {
        failures.push(format!(
            "runtime {elapsed:.2}s exceeded the {budget_secs}s budget"
        ));
    }
    if failures.is_empty() {
        println!("[PASS] {name} ({elapsed:.2}s)");
    } else {
        println!("[FAIL] {name} ({elapsed:.2}s)");
        for f in &failures {
            println!("       - {f}");
        }
        panic!(
            "{name}: {} check(s) failed:\n{}",
            failures.len(),
            failures.join("\n")
        );
    }
}

#[test]
fn criterion_1_exponential_tight_constant() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let spec = DistributionSpec::exponential();
    let curve = ratio_curve(&spec, 1000, &CFG).unwrap();
    for w in curve.rows.windows(2) {
        if w[1].ratio < w[0].ratio - 1e-9 {
            failures.push(format!(
                "ratio decreased: R({}) = {:.12} < R({}) = {:.12}",
                w[1].n, w[1].ratio, w[0].n, w[0].ratio
            ));
            break;
        }
    }
    let r_final = curve.rows.last().unwrap().ratio;
    if !(1.98..=2.00).contains(&r_final) {
        failures.push(format!("R(1000) = {r_final} outside [1.98, 2.00]"));
    }

    finish(
        "criterion 1: exponential tight constant",
        5.0,
        started,
        failures,
    );
}

#[test]
fn criterion_2_lambda_tightness() {
    let started = Instant::now();
    let mut failures = Vec::new();

    if lambda_factor(0.5).unwrap() != 4.5 {
        failures.push(format!(
            "lambda(0.5) = {:?} is not exactly 4.5",
            lambda_factor(0.5)
        ));
    }
    for &d in &[0.5, 1.0, 2.0, 3.0] {
        let spec = DistributionSpec::weibull_hazard(1.0, d).unwrap();
        let r = ratio_curve(&spec, 1000, &CFG)
            .unwrap()
            .rows
            .last()
            .unwrap()
            .ratio;
        let lam = lambda_factor(d).unwrap();
        if r > lam {
            failures.push(format!("d={d}: R(1000) = {r} exceeds lambda = {lam}"));
        }
        if lam - r > 0.02 * lam {
            failures.push(format!(
                "d={d}: lambda - R(1000) = {:.5} exceeds 2% of lambda = {:.5}",
                lam - r,
                0.02 * lam
            ));
        }
    }

    finish(
        "criterion 2: lambda(d) tightness for H(x) = x^d",
        30.0,
        started,
        failures,
    );
}

#[test]
fn criterion_3_prophet_benchmark_exactness() {
    let started = Instant::now();
    let mut failures = Vec::new();

    for &a in &[0.5, 1.0, 2.0] {
        for &d in &[0.5, 1.0, 2.0, 3.0] {
            let spec = DistributionSpec::weibull_hazard(a, d).unwrap();
            for &n in &[1u64, 2, 10, 100] {
                let quad = prophet_cost(&spec, n, &CFG).unwrap();
                let closed = prophet_cost_closed(a, d, n).unwrap();
                let err = rel(quad, closed);
                if err > 1e-8 {
                    failures.push(format!(
                        "(a={a}, d={d}, n={n}): quadrature {quad} vs closed {closed}, rel {err:e}"
                    ));
                }
            }
        }
    }

    finish(
        "criterion 3: prophet benchmark exactness",
        5.0,
        started,
        failures,
    );
}

#[test]
fn criterion_4_single_threshold_scaling() {
    let started = Instant::now();
    let mut failures = Vec::new();

    for (spec, power, label) in [
        (DistributionSpec::exponential(), 1.0, "exponential"),
        (
            DistributionSpec::weibull_hazard(1.0, 2.0).unwrap(),
            2.0,
            "weibull_hazard(1,2)",
        ),
    ] {
        let reports = single_threshold_curve(&spec, &[1_000, 1_000_000], &CFG).unwrap();
        let blowup = reports[1].ratio / reports[0].ratio;
        // ln(10^6)/ln(10^3) = 2, taken to the 1/d power.
        let target = 2.0f64.powf(1.0 / power);
        if rel(blowup, target) > 0.15 {
            failures.push(format!(
                "{label}: ratio(1e6)/ratio(1e3) = {blowup:.4} not within 15% of {target:.4}"
            ));
        }
    }

    finish(
        "criterion 4: single-threshold (log n)^(1/d) scaling",
        10.0,
        started,
        failures,
    );
}

#[test]
fn criterion_5_monte_carlo_cross_validation() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let spec = DistributionSpec::exponential();
    let n = 10usize;
    let g10 = expected_cost_sequence(&spec, n, &CFG).unwrap()[n - 1];
    let schedule = optimal_schedule(&spec, n, &CFG).unwrap();
    let trials = 1_000_000u64;
    let mut cost_hits = 0;
    let mut prophet_hits = 0;
    for seed in 0..20u64 {
        let rep = simulate_schedule(&spec, &schedule, trials, seed).unwrap();
        if (rep.mean_cost - g10).abs() <= 3.0 * rep.std_error {
            cost_hits += 1;
        }
        if (rep.prophet_mean - 0.1).abs() <= 3.0 * rep.prophet_std_error {
            prophet_hits += 1;
        }
    }
    if cost_hits < 19 {
        failures.push(format!(
            "only {cost_hits}/20 seeds within 3 SE of G(10) = {g10}"
        ));
    }
    if prophet_hits < 19 {
        failures.push(format!(
            "only {prophet_hits}/20 seeds within 3 SE of beta_10 = 0.1"
        ));
    }

    finish(
        "criterion 5: Monte Carlo cross-validation",
        60.0,
        started,
        failures,
    );
}

#[test]
fn criterion_6_impossibility_reproductions() {
    let started = Instant::now();
    let mut failures = Vec::new();

    for &l in &[2.0, 10.0, 1e6] {
        let gap = non_iid_gap(l).unwrap();
        if gap.adversarial.ratio != l {
            failures.push(format!(
                "non_iid_gap({l}): adversarial ratio {} is not exactly L",
                gap.adversarial.ratio
            ));
        }
    }

    let mut prev = 0.0;
    for k in 1..=8 {
        let gap = equal_revenue_gap(10f64.powi(k)).unwrap();
        if gap.ratio <= prev {
            failures.push(format!(
                "equal-revenue ratio not strictly increasing at M = 1e{k}"
            ));
        }
        prev = gap.ratio;
        if k == 8 && (gap.prophet_cost - 2.0).abs() > 1e-6 {
            failures.push(format!(
                "prophet cost at M = 1e8 is {}, not 2 within 1e-6",
                gap.prophet_cost
            ));
        }
    }

    let naive = naive_threshold_curve(1.0, &[10, 10_000]).unwrap();
    let (r10, r10k) = (naive.points[0].report.ratio, naive.points[1].report.ratio);
    if r10k <= 100.0 * r10 {
        failures.push(format!(
            "naive threshold: R(1e4) = {r10k} not beyond 100x R(10) = {r10}"
        ));
    }

    finish(
        "criterion 6: impossibility reproductions",
        1.0,
        started,
        failures,
    );
}

#[test]
fn criterion_7_special_function_suite() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let cfg = SeriesConfig::default();

    // Recurrence Γ(x+1) = xΓ(x) on x = 0.1, 0.2, …, 10.
    for k in 1..=100 {
        let x = k as f64 / 10.0;
        let err = rel(gamma(x + 1.0).unwrap(), x * gamma(x).unwrap());
        if err > 1e-12 {
            failures.push(format!("recurrence at x={x}: rel err {err:e}"));
        }
    }

    // Partition γ(s,x) + Γ(s,x) = Γ(s) on s in {0.5, 1, 2, 3.7}, x in [0, 10].
    for &s in &[0.5, 1.0, 2.0, 3.7] {
        let whole = gamma(s).unwrap();
        for j in 0..=40 {
            let x = j as f64 * 0.25;
            let gap = (lower_incomplete_gamma(s, x, &cfg).unwrap()
                + upper_incomplete_gamma(s, x).unwrap()
                - whole)
                .abs();
            if gap > 1e-10 {
                failures.push(format!("partition at (s={s}, x={x}): |gap| = {gap:e}"));
            }
        }
    }

    // Stirling-style bound: Γ(a+b) <= sqrt(2π)(a/e)^a a^b on the stated grid.
    let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
    for &a in &[1.0, 2.0, 5.0] {
        for &b in &[-0.5, 0.0, 0.5, 1.0] {
            let lhs = gamma(a + b).unwrap();
            let rhs = sqrt_2pi * (a / std::f64::consts::E).powf(a) * a.powf(b);
            if lhs > rhs {
                failures.push(format!(
                    "Gamma(a+b) bound violated at (a={a}, b={b}): Gamma({}) = {lhs:.6} > {rhs:.6}",
                    a + b
                ));
            }
        }
    }

    // Small-x bound: γ(s,x) <= x^{s-1} e^{-x} / s for x <= 0.01.
    for &s in &[0.5, 1.0, 2.0] {
        for &x in &[1e-4, 1e-3, 5e-3, 1e-2] {
            let lhs = lower_incomplete_gamma(s, x, &cfg).unwrap();
            let rhs = x.powf(s - 1.0) * (-x).exp() / s;
            if lhs > rhs {
                failures.push(format!("small-x bound violated at (s={s}, x={x})"));
            }
        }
    }

    // Limit γ(s,x)/x^s → 1/s as x → 0, checked at x = 1e-6.
    for &s in &[0.5, 1.0, 2.0, 3.7] {
        let x = 1e-6;
        let ratio = lower_incomplete_gamma(s, x, &cfg).unwrap() / x.powf(s);
        if rel(ratio, 1.0 / s) > 1e-4 {
            failures.push(format!(
                "limit at s={s}: γ/x^s = {ratio}, expected ~{}",
                1.0 / s
            ));
        }
    }

    // λ monotone decreasing across d in [0.25, 8].
    let mut prev = f64::INFINITY;
    for j in 0..32 {
        let d = 0.25 + j as f64 * (8.0 - 0.25) / 31.0;
        let lam = lambda_factor(d).unwrap();
        if lam >= prev {
            failures.push(format!("lambda not strictly decreasing at d = {d}"));
        }
        prev = lam;
    }

    finish(
        "criterion 7: special-function suite",
        1.0,
        started,
        failures,
    );
}

#[test]
fn criterion_8_valuation_recovery() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let cases: [(DistributionSpec, f64, f64, (f64, f64)); 3] = [
        (DistributionSpec::exponential(), 1e-6, 1e-3, (1.0, 1.0)),
        (
            DistributionSpec::weibull_hazard(2.0, 3.0).unwrap(),
            1e-4,
            1e-2,
            (2.0, 3.0),
        ),
        (
            DistributionSpec::power_beta(0.5).unwrap(),
            1e-8,
            1e-5,
            (1.0, 0.5),
        ),
    ];
    for (spec, x_min, x_max, (a1, d1)) in cases {
        match spec.estimate_valuation(40, x_min, x_max) {
            Ok(head) => {
                if rel(head.a1(), a1) > 0.02 || rel(head.d1(), d1) > 0.02 {
                    failures.push(format!(
                        "{}: recovered ({}, {}) vs expected ({a1}, {d1})",
                        spec.name(),
                        head.a1(),
                        head.d1()
                    ));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", spec.name())),
        }
    }

    finish("criterion 8: valuation recovery", 1.0, started, failures);
}

#[test]
fn criterion_9_mhr_bridge() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let builtins = [
        DistributionSpec::exponential(),
        DistributionSpec::weibull_hazard(1.0, 2.0).unwrap(),
        DistributionSpec::weibull_hazard(1.0, 0.5).unwrap(),
        DistributionSpec::power_beta(0.5).unwrap(),
        DistributionSpec::power_beta(2.0).unwrap(),
        DistributionSpec::uniform(0.0, 1.0).unwrap(),
        DistributionSpec::equal_revenue(),
    ];
    for spec in &builtins {
        let x_hi = spec.quantile(1.0 - 1e-6).unwrap().min(spec.support_high());
        let mhr = spec.check_mhr(512, x_hi).unwrap().is_mhr;
        if !mhr {
            continue;
        }
        let head = spec.puiseux_head().expect("MHR built-ins carry heads");
        if head.d1() < 1.0 {
            failures.push(format!("{} is MHR but d1 = {} < 1", spec.name(), head.d1()));
        }
        let r = ratio_curve(spec, 1000, &CFG)
            .unwrap()
            .rows
            .last()
            .unwrap()
            .ratio;
        if r > 2.0 + 1e-6 {
            failures.push(format!("{} is MHR but R(1000) = {r} > 2", spec.name()));
        }
    }

    let dec = DistributionSpec::weibull_hazard(1.0, 0.5).unwrap();
    let check = dec.check_mhr(512, 5.0).unwrap();
    if check.is_mhr {
        failures.push("weibull_hazard(1, 0.5) misclassified as MHR".into());
    }
    let r = ratio_curve(&dec, 1000, &CFG)
        .unwrap()
        .rows
        .last()
        .unwrap()
        .ratio;
    if r <= 2.0 {
        failures.push(format!("weibull_hazard(1, 0.5): R(1000) = {r} not above 2"));
    }

    finish("criterion 9: MHR bridge", 60.0, started, failures);
}
