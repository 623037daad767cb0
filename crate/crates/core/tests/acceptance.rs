//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_8, PI};
use std::time::Instant;

use cmur_core::cmur::{
    conditional_bound, single_particle_bound, violation_report, SearchConfig, SingleParticleMethod,
};
use cmur_core::entropic::entropy_report;
use cmur_core::majorization::{combine, Combiner};
use cmur_core::qcore::{bloch_unit, psi_xi, rho_xi, ProjectiveMeasurement};
use cmur_core::steering::{
    carlson_rg, finite_setting_criterion, hemisphere_functional, region_scan, rho_xi_verdict, HemisphereSampler,
    RgMethod, Settings, EPSILON_ONE, NO_MEMORY_AVERAGE,
};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn closed_s1(theta: f64, xi: f64) -> f64 {
    (1.0 + (theta.cos().powi(2) + theta.sin().powi(2) * (2.0 * xi).sin().powi(2)).sqrt()) / 2.0
}

/// Angle between two axes, ignoring orientation.
fn axis_angle(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    (a.dot(b).abs() / (a.norm() * b.norm())).min(1.0).acos()
}

fn closed_form_agreement() -> Outcome {
    let cfg = SearchConfig::default();
    let (mut worst_value, mut worst_angle) = (0.0f64, 0.0f64);
    for &xi in &linspace(0.0, FRAC_PI_4, 20) {
        let rho = psi_xi(xi).map_err(|e| e.to_string())?;
        for &theta in &linspace(0.0, PI, 20) {
            let x = ProjectiveMeasurement::qubit(theta, 0.0).map_err(|e| e.to_string())?;
            let res = conditional_bound(&rho, &x, &cfg).map_err(|e| e.to_string())?;
            let s1 = closed_s1(theta, xi);
            for (got, want) in res.bound.components().iter().zip([s1, 1.0 - s1]) {
                worst_value = worst_value.max((got - want).abs());
            }
            // at ξ = 0 the state is a product and every partner axis is optimal
            if xi > 0.0 {
                let (t, p) = res.per_k[0].measurement.bloch_angles().ok_or("qubit search lost its angles")?;
                let s = (2.0 * xi).sin();
                let want = Vector3::new(s * theta.sin(), 0.0, theta.cos());
                worst_angle = worst_angle.max(axis_angle(&bloch_unit(t, p), &want));
            }
        }
    }
    let detail = format!("max |Δs| = {worst_value:.2e}, max axis error = {worst_angle:.2e} rad");
    if worst_value <= 1e-6 && worst_angle <= 1e-3 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn violation_outcomes() -> Outcome {
    let cfg = SearchConfig::default();
    let theta = FRAC_PI_3;
    let x = ProjectiveMeasurement::qubit(theta, 0.0).unwrap();
    let y = ProjectiveMeasurement::qubit(theta, PI).unwrap();
    let single = single_particle_bound(&x, &y, SingleParticleMethod::QubitClosedForm).map_err(|e| e.to_string())?.vec;
    let mut seen = Vec::new();
    let mut ok = true;
    for (xi, expect) in [(0.0, false), (PI / 16.0, true), (FRAC_PI_8, true), (FRAC_PI_4, true)] {
        let rho = psi_xi(xi).unwrap();
        let sx = conditional_bound(&rho, &x, &cfg).map_err(|e| e.to_string())?.bound;
        let sy = conditional_bound(&rho, &y, &cfg).map_err(|e| e.to_string())?.bound;
        let report = violation_report(&combine(&sx, &sy, Combiner::DirectSum), &single).map_err(|e| e.to_string())?;
        ok &= report.violated == expect;
        seen.push(format!("ξ={xi:.4}:{}", report.violated));
    }
    if ok {
        Ok(seen.join(" "))
    } else {
        Err(seen.join(" "))
    }
}

fn entropic_ordering() -> Outcome {
    let cfg = SearchConfig::default();
    let mut worst = 0.0f64;
    let mut tight_gap = 0.0f64;
    let mut negative_berta = 0;
    for xi in [0.0, FRAC_PI_8, FRAC_PI_4] {
        let rho = psi_xi(xi).unwrap();
        for &theta in &linspace(0.0, PI, 50) {
            let x = ProjectiveMeasurement::qubit(theta, 0.0).unwrap();
            let y = ProjectiveMeasurement::qubit(theta, PI).unwrap();
            let sx = conditional_bound(&rho, &x, &cfg).map_err(|e| e.to_string())?.bound;
            let sy = conditional_bound(&rho, &y, &cfg).map_err(|e| e.to_string())?.bound;
            let r = entropy_report(&rho, &x, &y, &sx, &sy).map_err(|e| e.to_string())?;
            worst = worst.max(r.cmur_lb - r.h_sum).max(r.berta_lb - r.cmur_lb);
            if xi == 0.0 {
                tight_gap = tight_gap.max((r.cmur_lb - r.h_sum).abs());
            }
            if xi == FRAC_PI_4 && r.berta_lb < 0.0 {
                negative_berta += 1;
            }
        }
    }
    let detail = format!(
        "worst ordering excess = {worst:.2e}, ξ=0 gap = {tight_gap:.2e}, negative berta_lb at ξ=π/4: {negative_berta}/50"
    );
    if worst <= 1e-9 && tight_gap <= 1e-9 && negative_berta > 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Smallest `p` where `fires` turns on, assuming it is monotone in `p` on `[0, 1]`.
fn bisect(fires: impl Fn(f64) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-8 {
        let mid = (lo + hi) / 2.0;
        if fires(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / 2.0
}

fn steering_thresholds() -> Outcome {
    let xi = FRAC_PI_4;
    let two = bisect(|p| finite_setting_criterion(xi, p, Settings::Two).unwrap());
    let three = bisect(|p| finite_setting_criterion(xi, p, Settings::Three).unwrap());
    let inf = bisect(|p| rho_xi_verdict(xi, p).unwrap().infinite_violated);
    let errs = [(two - 0.5f64.sqrt()).abs(), (three - (1.0f64 / 3.0).sqrt()).abs(), (inf - 0.5).abs()];

    let rows = region_scan(64, 64).map_err(|e| e.to_string())?;
    let nesting_ok = rows.len() == 4096 && rows.iter().all(|r| (!r.v_two || r.v_three) && (!r.v_three || r.v_inf));

    let werner_ok = (0..=1000).all(|i| {
        let p = i as f64 / 1000.0;
        rho_xi_verdict(xi, p).unwrap().infinite_violated == (p > 0.5)
    });
    let detail = format!(
        "flips at p = {two:.7}, {three:.7}, {inf:.7} (errors {:.1e}, {:.1e}, {:.1e}); nesting {}; werner {}",
        errs[0],
        errs[1],
        errs[2],
        if nesting_ok { "ok" } else { "broken" },
        if werner_ok { "ok" } else { "broken" },
    );
    if errs.iter().all(|&e| e <= 1e-6) && nesting_ok && werner_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rg_correctness() -> Outcome {
    let rg = |x, y, z, m| carlson_rg(x, y, z, m).unwrap();
    let e_unit = (rg(1.0, 1.0, 1.0, RgMethod::Duplication) - 1.0).abs();
    let e_half = (rg(0.0, 0.0, 1.0, RgMethod::Duplication) - 0.5).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut e_methods, mut e_homog) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (x, y, z): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        let d = rg(x, y, z, RgMethod::Duplication);
        e_methods = e_methods.max((d - rg(x, y, z, RgMethod::Quadrature)).abs());
        let lambda = 4.0 * (1.0 - rng.random::<f64>());
        e_homog = e_homog.max((rg(lambda * x, lambda * y, lambda * z, RgMethod::Duplication) - lambda.sqrt() * d).abs());
    }
    let detail = format!(
        "|R_G(1,1,1)-1| = {e_unit:.1e}, |R_G(0,0,1)-1/2| = {e_half:.1e}, duplication vs quadrature {e_methods:.1e}, homogeneity {e_homog:.1e}"
    );
    if e_unit <= 1e-10 && e_half <= 1e-10 && e_methods <= 1e-8 && e_homog <= 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn hemisphere_aggregate() -> Outcome {
    let rho = psi_xi(FRAC_PI_4).unwrap();
    let fib = hemisphere_functional(&rho, 100_000, HemisphereSampler::Fibonacci).map_err(|e| e.to_string())?;
    let uni = hemisphere_functional(&rho, 100_000, HemisphereSampler::Uniform { seed: 1 }).map_err(|e| e.to_string())?;
    let mut errs = vec![(fib.finite_sum_avg - 1.0).abs(), (uni.finite_sum_avg - 1.0).abs()];
    // states with unequal τ, where the sample mean has to track R_G
    for rho in [psi_xi(FRAC_PI_8).unwrap(), rho_xi(0.5, 0.7).unwrap()] {
        for sampler in [HemisphereSampler::Fibonacci, HemisphereSampler::Uniform { seed: 2 }] {
            let h = hemisphere_functional(&rho, 100_000, sampler).map_err(|e| e.to_string())?;
            errs.push((h.finite_sum_avg - h.analytic_avg).abs());
        }
    }
    let constant_ok = NO_MEMORY_AVERAGE == 0.75 && EPSILON_ONE / (2.0 * PI) == 0.75 && fib.no_memory_avg == 0.75;
    let detail = format!(
        "finite_sum_avg − 1: fibonacci {:.1e}, uniform {:.1e}; worst finite − analytic on other states {:.1e}; no-memory constant {}",
        errs[0],
        errs[1],
        errs[2..].iter().fold(0.0f64, |a, &b| a.max(b)),
        fib.no_memory_avg
    );
    if errs.iter().all(|&e| e <= 5e-3) && constant_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let runs = [
        ("partial order", common::check_partial_order(&mut rng, 10_000)),
        ("join", common::check_join(&mut rng, 1_000)),
        ("combiner monotonicity", common::check_combiner_monotonicity(&mut rng, 10_000)),
        ("conditioning", common::check_conditioning(&mut rng, 500)),
        ("matrix oracles", common::check_matrix_oracles(&mut rng, 1_000)),
        ("state invariants", common::check_qcore_invariants(&mut rng, 1_000)),
        ("bound soundness", common::check_bound_soundness(&mut rng, 100, 200)),
    ];
    let mut parts = Vec::new();
    let mut failed = Vec::new();
    for (name, r) in runs {
        match r {
            Ok(n) => parts.push(format!("{name} {n}")),
            Err(e) => failed.push(format!("{name}: {e}")),
        }
    }
    if failed.is_empty() {
        Ok(format!("cases: {}", parts.join(", ")))
    } else {
        Err(failed.join("; "))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("closed-form agreement", closed_form_agreement),
        ("quantum-limit violation", violation_outcomes),
        ("entropic ordering", entropic_ordering),
        ("steering thresholds", steering_thresholds),
        ("R_G correctness", rg_correctness),
        ("hemisphere aggregate", hemisphere_aggregate),
        ("property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failures += 1;
        }
        println!("criterion {} {name}: {tag} ({secs:.1} s) {detail}", i + 1);
    }
    println!("acceptance: {}/{} passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

