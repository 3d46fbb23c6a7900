//! One line per acceptance criterion. Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use gaugedist::polytope::DualPolytope;
use gaugedist::verify::{
    closed_form_suite, derivative_suite, duality_suite, example_setups, pinned_values_suite, projection_suite,
    ridge_suite, structural_suite, CheckResult, SuiteConfig, SuiteReport,
};

struct Line {
    passed: bool,
    detail: String,
}

fn summarize(reports: &[SuiteReport], names: &[&str]) -> Line {
    let mut passed = true;
    let mut parts = Vec::new();
    for r in reports {
        for c in r.checks.iter().filter(|c| names.is_empty() || names.contains(&c.name.as_str())) {
            if c.hard && !c.passed() {
                passed = false;
                parts.push(format!("{}:{} failed {}/{} worst {:.3e}", r.suite, c.name, c.failures, c.count, c.worst_residual));
            }
        }
    }
    let worst: Vec<&CheckResult> = reports
        .iter()
        .flat_map(|r| r.checks.iter())
        .filter(|c| c.hard && (names.is_empty() || names.contains(&c.name.as_str())))
        .collect();
    let total: usize = worst.iter().map(|c| c.count).sum();
    if passed {
        parts.push(format!("{total} checks"));
    }
    Line {
        passed,
        detail: parts.join("; "),
    }
}

fn print(id: usize, title: &str, line: &Line, started: Instant) {
    println!(
        "criterion {id} [{}] {title}: {} ({:.1}s)",
        if line.passed { "PASS" } else { "FAIL" },
        line.detail,
        started.elapsed().as_secs_f64()
    );
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut all_passed = true;
    let mut record = |id: usize, title: &str, line: Line, started: Instant| {
        all_passed &= line.passed;
        print(id, title, &line, started);
    };

    let t = Instant::now();
    let mut reports = Vec::new();
    let mut slowest: f64 = 0.0;
    for (name, problem) in example_setups() {
        let t = Instant::now();
        reports.push(closed_form_suite(name, &problem, &cfg).expect("closed-form suite"));
        slowest = slowest.max(t.elapsed().as_secs_f64());
    }
    let mut line = summarize(&reports, &["oracle-vs-closed-form", "region-predicate"]);
    let worst = reports
        .iter()
        .filter_map(|r| r.check("oracle-vs-closed-form"))
        .map(|c| c.worst_residual)
        .fold(0.0, f64::max);
    line.detail = format!("{}, worst |oracle - closed| {worst:.2e} <= 5e-7, slowest setup {slowest:.1}s", line.detail);
    record(1, "oracle matches closed forms on 101x101 grids", line, t);

    let t = Instant::now();
    let duality: Vec<SuiteReport> = [DualPolytope::cube(2), DualPolytope::cube(3), DualPolytope::regular_polygon(5, 1.0, 0.2).unwrap()]
        .iter()
        .map(|p| duality_suite(p, cfg.duality_samples, cfg.seed))
        .collect();
    record(2, "duality identities, 1e4 samples per identity", summarize(&duality, &[]), t);

    let t = Instant::now();
    let derivatives: Vec<SuiteReport> = example_setups()
        .iter()
        .map(|(name, problem)| derivative_suite(name, problem, &cfg).expect("derivative suite"))
        .collect();
    record(
        3,
        "gradient, Hessian and eikonal residual against finite differences",
        summarize(
            &derivatives,
            &["grad-vs-fd", "hessian-vs-fd", "hj-residual-fd", "eikonal-formula", "jacobian-vs-fd", "sample-coverage"],
        ),
        t,
    );

    let t = Instant::now();
    let pinned = pinned_values_suite(cfg.budget).expect("pinned values");
    record(4, "pinned values", summarize(std::slice::from_ref(&pinned), &[]), t);

    let t = Instant::now();
    let mut structural: Vec<SuiteReport> = example_setups()
        .iter()
        .map(|(name, problem)| structural_suite(name, problem, &cfg).expect("structural suite"))
        .collect();
    structural.extend(derivatives.iter().cloned());
    record(
        5,
        "touching ball, segment linearity, Hessian constancy on segments",
        summarize(
            &structural,
            &["touching-ball-escapes", "touching-ball-contacts", "segment-linearity", "segment-shares-closest", "segment-constancy"],
        ),
        t,
    );

    let t = Instant::now();
    let ridges = ridge_suite(cfg.budget).expect("ridge suite");
    let mut line = summarize(std::slice::from_ref(&ridges), &[]);
    let gap = |name: &str| ridges.check(name).map_or(f64::NAN, |c| c.worst_residual);
    line.detail += &format!(
        ", triangle slope gap {:.3} with -d_K outside, {:.1e} with the reflected gauge",
        gap("triangle-same-gauge-slope-gap"),
        gap("triangle-reflected-slope-gap")
    );
    record(6, "ridge phenomena", line, t);

    let t = Instant::now();
    let projection = projection_suite(100, cfg.budget, cfg.seed).expect("projection suite");
    record(7, "three-dimensional cube distance reduces to the planar formula", summarize(std::slice::from_ref(&projection), &[]), t);

    let others = summarize(&structural, &[]);
    println!(
        "supplementary [{}] remaining structural and derivative checks: {}",
        if others.passed { "PASS" } else { "FAIL" },
        others.detail
    );

    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
