//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use polarsphere::dynamics::CompressionChain;
use polarsphere::experiments::{
    convergence_experiment, domination_check, fit_power_law, gamma_limit_check,
    hemisphere_limit_check, identity_for_axis, random_identity_triples, upper_bound_check,
    ConvergenceTable, DEFAULT_BURN_IN,
};
use polarsphere::laws::{
    orderstat_exact_tail, sample_orderstat_chain_final, sample_orderstat_direct_given_start,
    tau_integral_bound, tau_integral_term, tau_tail, OrderStatLaw, TailLaw, TauLaw,
};
use polarsphere::rng::{par_collect, trial_rng};
use polarsphere::sets::{
    cap_measure, cap_radius_from_measure, cap_symm_diff_measure, PolarizedSet, SetExpr,
};
use polarsphere::sphere::{
    chord_distance, geodesic_distance, sample_uniform_axis, sample_uniform_point,
};
use polarsphere::stats::{ks_statistic, ks_two_sample};
use polarsphere::{Cap, Dimension, SpherePoint};

const SEED: u64 = 20_240_611;

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

fn dim(d: usize) -> Dimension {
    Dimension::new(d).expect("d >= 1")
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

/// Polar distance after one compression of the point at polar angle `xi`.
fn one_step_distances(d: Dimension, xi: f64, draws: usize, seed: u64) -> Vec<f64> {
    let start = SpherePoint::at_polar_angle(d, xi);
    par_collect(seed, draws, |rng, _| {
        let mut chain = CompressionChain::new(start.clone());
        chain.step(rng).1
    })
}

fn circle_one_step_law() -> Outcome {
    let t = Instant::now();
    let draws = one_step_distances(dim(1), FRAC_PI_2, 100_000, SEED);
    // Tail 1 - β/π below ξ with the atom 1/2 at ξ.
    let law = TauLaw::new(dim(1), FRAC_PI_2).unwrap();
    let closed = |b: f64| 1.0 - b / PI;
    let formula_ok = (0..=50).all(|i| {
        let b = FRAC_PI_2 * i as f64 / 50.0;
        b >= FRAC_PI_2 || (law.tail(b) - closed(b)).abs() < 1e-15
    }) && law.atom() == 0.5;
    let ks = ks_statistic(&draws, &law).unwrap();
    let el = t.elapsed();
    outcome(
        formula_ok && ks < 0.01 && within(el, 5.0),
        format!("KS = {ks:.4} (< 0.01), {:.2} s (< 5 s)", el.as_secs_f64()),
    )
}

fn one_step_law_matches_geometry() -> Outcome {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for d in [2, 3] {
        for xi in [0.5, 1.5, 3.0] {
            let draws = one_step_distances(dim(d), xi, 100_000, SEED + d as u64);
            let ks = ks_statistic(&draws, &TauLaw::new(dim(d), xi).unwrap()).unwrap();
            worst = worst.max(ks);
            parts.push(format!("d{d}/{xi}: {ks:.4}"));
        }
    }
    let el = t.elapsed();
    outcome(
        worst < 0.02 && within(el, 60.0),
        format!(
            "max KS = {worst:.4} (< 0.02) [{}], {:.1} s (< 60 s)",
            parts.join(", "),
            el.as_secs_f64()
        ),
    )
}

fn hemisphere_tables() -> Vec<(usize, ConvergenceTable, Duration)> {
    (1..=3)
        .map(|d| {
            let t = Instant::now();
            let set: SetExpr = Cap::hemisphere(SpherePoint::at_polar_angle(dim(d), FRAC_PI_2)).into();
            let table =
                convergence_experiment(&set, dim(d), 200, 100_000, SEED, &Default::default())
                    .unwrap();
            (d, table, t.elapsed())
        })
        .collect()
}

fn upper_bound(tables: &[(usize, ConvergenceTable, Duration)]) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (d, table, el) in tables {
        let verdicts = upper_bound_check(table).unwrap();
        let ok = verdicts.iter().all(|v| v.passed) && within(*el, 120.0);
        passed &= ok;
        let worst_scaled = table
            .rows
            .iter()
            .skip(1)
            .map(|r| r.scaled)
            .fold(0.0, f64::max);
        parts.push(format!(
            "d{d}: max n*mean = {worst_scaled:.3} vs 2^d = {}, recursion {}, {:.1} s",
            1 << d,
            if verdicts[1].passed { "ok" } else { "violated" },
            el.as_secs_f64()
        ));
    }
    outcome(passed, parts.join("; "))
}

fn hemisphere_limit() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for d in 1..=3 {
        let n = if d == 3 { 300 } else { 200 };
        let t = Instant::now();
        let r = hemisphere_limit_check(dim(d), 0.2, n, 100_000, SEED, 0.1).unwrap();
        let el = t.elapsed();
        passed &= r.passed && within(el, 180.0);
        parts.push(format!(
            "d{d}: n*E = {:.4} +- {:.4} at n = {n} ({:.1}% off), {:.1} s",
            r.scaled,
            r.std_error,
            100.0 * r.relative_deviation,
            el.as_secs_f64()
        ));
    }
    outcome(passed, parts.join("; "))
}

fn gamma_limit() -> Outcome {
    let t = Instant::now();
    let mut passed = true;
    let mut parts = Vec::new();
    for d in 1..=2 {
        let r = gamma_limit_check(dim(d), 0.2, 500, 10_000, SEED, 0.05).unwrap();
        passed &= r.passed;
        parts.push(format!("d{d}: KS = {:.4}", r.statistic));
    }
    let el = t.elapsed();
    outcome(
        passed && within(el, 120.0),
        format!("{} (< 0.05), {:.1} s", parts.join(", "), el.as_secs_f64()),
    )
}

fn orderstat_trinity() -> Outcome {
    let t = Instant::now();
    let trials = 100_000;
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        for n in [5, 20, 100] {
            let law = OrderStatLaw::new(d, PI, 2.0, n).unwrap();
            let seed = SEED + (10 * d + n) as u64;
            let direct = par_collect(seed, trials, |rng, _| {
                sample_orderstat_direct_given_start(&law, rng)
            });
            let chain = par_collect(seed + 1, trials, |rng, _| {
                sample_orderstat_chain_final(&law, rng)
            });
            let a = ks_statistic(&direct, &law).unwrap();
            let b = ks_statistic(&chain, &law).unwrap();
            let c = ks_two_sample(&direct, &chain).unwrap();
            worst = worst.max(a).max(b).max(c);
        }
    }
    let el = t.elapsed();
    outcome(
        worst < 0.02 && within(el, 120.0),
        format!(
            "max pairwise KS = {worst:.4} (< 0.02) over 9 (d, n), {:.1} s",
            el.as_secs_f64()
        ),
    )
}

fn domination() -> Outcome {
    let t = Instant::now();
    let xi = 0.3;
    let ell = PI - xi * xi;
    let mut passed = true;
    let mut min_ell_max = PI;
    let mut parts = Vec::new();
    for d in 1..=3 {
        for n in [5, 20, 100] {
            let r = domination_check(dim(d), xi, ell, n, 100_000, SEED + n as u64).unwrap();
            passed &= r.passed;
            min_ell_max = min_ell_max.min(r.ell_max);
            if !r.passed {
                parts.push(format!("d{d} n{n} fails"));
            }
        }
    }
    outcome(
        passed,
        format!(
            "9 runs at ell = {ell:.4}{}; smallest passing-ell bound {min_ell_max:.4}, {:.1} s",
            if parts.is_empty() { String::new() } else { format!(" ({})", parts.join(", ")) },
            t.elapsed().as_secs_f64()
        ),
    )
}

fn polarization_identity() -> Outcome {
    let t = Instant::now();
    let mut failures = 0;
    let mut worst_z: f64 = 0.0;
    for k in 0..20 {
        let d = dim(1 + k % 3);
        let (a, b, u) = random_identity_triples(d, 1, SEED + k as u64).remove(0);
        let row = identity_for_axis(&a, &b, &u, 100_000, SEED + 100 + k as u64).unwrap();
        if !row.passed {
            failures += 1;
        }
        if row.difference_se > 0.0 {
            worst_z = worst_z.max(row.difference.abs() / row.difference_se);
        }
    }
    outcome(
        failures == 0,
        format!(
            "{failures} of 20 triples outside 4 sigma, largest |z| = {worst_z:.2}, {:.1} s",
            t.elapsed().as_secs_f64()
        ),
    )
}

fn property_suite() -> Outcome {
    let mut rng = trial_rng(SEED, 0);
    let mut failed = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failed.push(name.to_string());
        }
    };

    for d in 1..=4 {
        let d = dim(d);
        for _ in 0..2000 {
            let x = sample_uniform_point(d, &mut rng);
            let y = sample_uniform_point(d, &mut rng);
            let u = sample_uniform_axis(d, &mut rng);
            let back = u.reflect(&u.reflect(&x).unwrap()).unwrap();
            check("involution", chord_distance(&x, &back).unwrap() < 1e-12);
            let z = u.reflect(&x).unwrap();
            let norm = z.coords().iter().map(|c| c * c).sum::<f64>().sqrt();
            check("unit norm", (norm - 1.0).abs() < 1e-12);
            let g = geodesic_distance(&x, &y).unwrap();
            let c = chord_distance(&x, &y).unwrap();
            check("chord identity", (c - 2.0 * (g / 2.0).sin()).abs() < 1e-12);
        }
    }

    for d in 1..=4 {
        for xi in [0.3, 1.5, 3.0] {
            let law = TauLaw::new(dim(d), xi).unwrap();
            let mut prev = 1.0;
            for i in 0..=200 {
                let b = PI * i as f64 / 200.0;
                let tail = tau_tail(&law, b);
                check("tau tail monotone", tail <= prev + 1e-12);
                prev = tail;
                if b <= xi {
                    let bound = tau_integral_bound(dim(d), xi, b).unwrap();
                    check("integral bound", tau_integral_term(&law, b) <= bound + 1e-12);
                }
            }
        }
        let law = OrderStatLaw::new(d, PI, 2.0, 20).unwrap();
        let mut prev = 1.0;
        for i in 0..=200 {
            let tail = orderstat_exact_tail(&law, 2.0 * i as f64 / 200.0).unwrap();
            check("orderstat tail monotone", tail <= prev + 1e-14);
            prev = tail;
        }
    }

    for d in 1..=4 {
        for i in 1..40 {
            let r = PI * i as f64 / 40.0;
            let m = cap_measure(dim(d), r).unwrap();
            let back = cap_radius_from_measure(dim(d), m).unwrap();
            check("cap measure round trip", (back - r).abs() < 1e-10);
        }
    }

    // One polarization never increases m(A △ B): on each pair {x, σx}
    // the number of points in the symmetric difference cannot grow.
    for d in 1..=3 {
        let d = dim(d);
        for k in 0..10 {
            let (a, b, u) = random_identity_triples(d, 1, SEED + 500 + k).remove(0);
            let sa = PolarizedSet::with_history(a.clone(), vec![u.clone()]);
            let sb = PolarizedSet::with_history(b.clone(), vec![u.clone()]);
            for _ in 0..2000 {
                let x = sample_uniform_point(d, &mut rng);
                let xb = u.reflect(&x).unwrap();
                let before = (a.contains(&x) != b.contains(&x)) as u8
                    + (a.contains(&xb) != b.contains(&xb)) as u8;
                let after = (sa.contains(&x).unwrap() != sb.contains(&x).unwrap()) as u8
                    + (sa.contains(&xb).unwrap() != sb.contains(&xb).unwrap()) as u8;
                check("pairwise contraction", after <= before);
            }
        }
        // For a cap and its polar cap the contraction is exact along a path.
        let cap = Cap::new(sample_uniform_point(d, &mut rng), 1.1).unwrap();
        let mut chain = CompressionChain::new(cap.center().clone());
        let mut prev = cap_symm_diff_measure(d, 1.1, chain.distance()).unwrap();
        for _ in 0..200 {
            let s = chain.step(&mut rng).1;
            let cur = cap_symm_diff_measure(d, 1.1, s).unwrap();
            check("cap contraction", cur <= prev + 1e-12);
            prev = cur;
        }
    }

    failed.sort();
    failed.dedup();
    if failed.is_empty() {
        outcome(true, "all exact properties hold")
    } else {
        outcome(false, format!("violated: {}", failed.join(", ")))
    }
}

fn power_law(tables: &[(usize, ConvergenceTable, Duration)]) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (d, table, _) in tables {
        match fit_power_law(table, DEFAULT_BURN_IN) {
            Ok(fit) => {
                passed &= (0.9..=1.1).contains(&fit.p);
                parts.push(format!("d{d}: p = {:.3}, C = {:.3}", fit.p, fit.c));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("d{d}: {e}"));
            }
        }
    }
    outcome(passed, format!("{} (p in [0.9, 1.1])", parts.join(", ")))
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome, Duration)> = Vec::new();
    let mut run = |id: u32, name: &'static str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        println!(
            "{} {id:>2} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((id, name, o, el));
    };

    run(1, "circle reduction of the one-step law", &circle_one_step_law);
    run(2, "one-step law against geometric draws", &one_step_law_matches_geometry);
    let tables = hemisphere_tables();
    run(3, "2^d/n upper bound on hemisphere tables", &|| upper_bound(&tables));
    run(4, "n E[m] -> d for a hemisphere near the pole", &hemisphere_limit);
    run(5, "n delta_n -> pi Gamma(d) in distribution", &gamma_limit);
    run(6, "order-statistic direct, chain and exact tail agree", &orderstat_trinity);
    run(7, "compression chain dominates order statistics", &domination);
    run(8, "polarization intersection identity", &polarization_identity);
    run(9, "exact property suite", &property_suite);
    run(10, "fitted power-law exponent near 1", &|| power_law(&tables));

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.passed).map(|r| r.0).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {failed:?}");
        ExitCode::FAILURE
    }
}
