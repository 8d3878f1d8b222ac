//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::Zero;
use palmcheck::axb::{run_axb_suite, AxbConfig};
use palmcheck::instance::{
    build, generate, mutate, standard, standard_len, ActionKind, GroupFamily, InstanceSpec, Limits, Mutation, OmegaKind,
    Profile,
};
use palmcheck::report::CheckReport;
use palmcheck::suite::{run_suite, Suite, SuiteOptions};

const EXACT_MIN_INSTANCES: usize = 60;
const EXACT_TIME_LIMIT: Duration = Duration::from_secs(60);
const MUTANTS_PER_KIND: usize = 10;
const AXB_TOLERANCE: f64 = 1e-8;
const AXB_DISCRIMINATION: f64 = 1e-2;
const AXB_HOMOMORPHISM: f64 = 1e-10;
const AXB_SAMPLES: usize = 1000;
const AXB_TIME_LIMIT: Duration = Duration::from_secs(30);

/// Checks every exact run must contain at least once across the suite.
const REQUIRED_CHECKS: &[&str] = &[
    "action.disintegration",
    "action.kernel_properties",
    "action.projection_transform",
    "action.delta_star_routes",
    "measure.orbit_representation",
    "palm.refined_campbell",
    "palm.transport_formula",
    "palm.exchange",
    "palm.exchange_points",
    "palm.exchange_group",
    "mecke.characterization",
    "mecke.forward",
    "mecke.converse",
    "palm.inversion",
    "transport.orbit_balance",
    "transport.detmtp_rep",
    "transport.countable_mtp",
    "transport.short_mtp",
    "transport.mtp_on_sets",
    "mtp.set_form",
    "mtp.weighted_form",
    "mtp.two_measures",
    "palm.quasi_explicit",
];

/// Checks that depend on the precondition a mutation breaks; none may pass.
fn dependents(kind: Mutation) -> &'static [&'static str] {
    match kind {
        Mutation::None => &[],
        Mutation::BreakJointInvariance => &["transport.mtp_on_sets", "transport.short_mtp"],
        Mutation::ScaleQ => &["mecke.forward", "mecke.converse", "palm.pair_disintegration"],
        Mutation::MoveMassOffsupport => &["mecke.characterization", "mecke.converse", "palm.pair_disintegration"],
        Mutation::BreakLastTStar => &["palm.transport_formula", "mtp.set_form", "mtp.weighted_form"],
    }
}

struct Outcome {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn exact_reports(spec: &InstanceSpec) -> Result<Vec<CheckReport>, String> {
    let file = generate(spec).map_err(|e| e.to_string())?;
    let inst = build(&file, &Limits::default()).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for suite in Suite::EXACT {
        out.extend(run_suite(&inst, suite, &SuiteOptions::default()).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn is_exact_zero(r: &CheckReport) -> bool {
    r.residual.as_exact().is_some_and(Zero::is_zero)
}

fn exact_suite() -> Outcome {
    let start = Instant::now();
    let count = standard_len().max(EXACT_MIN_INSTANCES);
    let mut checks = 0;
    let mut seen = std::collections::BTreeSet::new();
    let mut problems = Vec::new();
    for seed in 0..count as u64 {
        match exact_reports(&standard(seed)) {
            Ok(reports) => {
                for r in reports {
                    checks += 1;
                    if !(r.is_pass() && is_exact_zero(&r)) {
                        problems.push(format!("seed {seed}: {}", r.summary_line()));
                    }
                    seen.insert(r.check_name);
                }
            }
            Err(e) => problems.push(format!("seed {seed}: {e}")),
        }
    }
    let missing: Vec<_> = REQUIRED_CHECKS.iter().filter(|c| !seen.contains(**c)).collect();
    let elapsed = start.elapsed();
    let ok = problems.is_empty() && missing.is_empty() && count >= EXACT_MIN_INSTANCES && elapsed <= EXACT_TIME_LIMIT;
    let mut detail = format!(
        "{count} instances, {checks} checks, {} distinct, {} non-zero residuals, {:.1}s (limit {}s)",
        seen.len(),
        problems.len(),
        elapsed.as_secs_f64(),
        EXACT_TIME_LIMIT.as_secs()
    );
    if let Some(p) = problems.first() {
        detail.push_str(&format!("; first: {p}"));
    }
    if !missing.is_empty() {
        detail.push_str(&format!("; missing checks {missing:?}"));
    }
    Outcome { name: "exact_suite", ok, detail }
}

fn negative_suite() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for kind in Mutation::ALL {
        let mut mutants = 0;
        let mut failures = Vec::new();
        for seed in 0..standard_len() as u64 {
            let file = generate(&standard(seed)).expect("standard specs generate");
            let mutated = match mutate(&file, kind) {
                Ok(m) => m,
                Err(palmcheck::Error::MutationNotApplicable(_)) => continue,
                Err(e) => {
                    failures.push(format!("seed {seed}: {e}"));
                    continue;
                }
            };
            mutants += 1;
            let inst = build(&mutated, &Limits::default()).expect("mutants build");
            let mut reports = Vec::new();
            for suite in Suite::EXACT {
                reports.extend(run_suite(&inst, suite, &SuiteOptions::default()).expect("exact suites run"));
            }
            let find = |name: &str| reports.iter().find(|r| r.check_name == name);
            match kind.target() {
                None => {
                    if let Some(r) = reports.iter().find(|r| !r.is_pass()) {
                        failures.push(format!("seed {seed}: unmutated {}", r.summary_line()));
                    }
                }
                Some((target, status)) => {
                    match find(target) {
                        Some(r) if r.status == status && r.witness.as_ref().is_some_and(|w| !w.locator.is_empty()) => {}
                        Some(r) => failures.push(format!("seed {seed}: {}", r.summary_line())),
                        None => failures.push(format!("seed {seed}: {target} missing")),
                    }
                    for dep in dependents(kind) {
                        if let Some(r) = find(dep).filter(|r| r.is_pass()) {
                            failures.push(format!("seed {seed}: dependent {} passed", r.check_name));
                        }
                    }
                }
            }
        }
        let kind_ok = failures.is_empty() && mutants >= MUTANTS_PER_KIND;
        ok &= kind_ok;
        let mut line = format!("{}: {mutants} mutants, {} misses", kind.name(), failures.len());
        if let Some(f) = failures.first() {
            line.push_str(&format!(" ({f})"));
        }
        lines.push(line);
    }
    Outcome { name: "negative_suite", ok, detail: lines.join("; ") }
}

fn degenerate_regime() -> Outcome {
    let omegas = [OmegaKind::SelfSpace, OmegaKind::Point, OmegaKind::Group, OmegaKind::Product { marks: 3 }];
    let mut problems = Vec::new();
    let mut instances = 0;
    for degree in 1..=5 {
        for (i, omega) in omegas.iter().enumerate() {
            let spec = InstanceSpec {
                name: format!("trivial-{degree}-{i}"),
                seed: 1000 + (degree * 10 + i) as u64,
                group: GroupFamily::Trivial { degree },
                action: ActionKind::Natural,
                omega: *omega,
                profile: Profile::default(),
                checks: vec![Suite::All],
            };
            instances += 1;
            match exact_reports(&spec) {
                Ok(reports) => {
                    let reduction = reports.iter().find(|r| r.check_name == "palm.trivial_group_reduction");
                    if !reduction.is_some_and(CheckReport::is_pass) {
                        problems.push(format!("{}: reduction missing or failing", spec.name));
                    }
                    if let Some(r) = reports.iter().find(|r| !(r.is_pass() && is_exact_zero(r))) {
                        problems.push(format!("{}: {}", spec.name, r.summary_line()));
                    }
                }
                Err(e) => problems.push(format!("{}: {e}", spec.name)),
            }
        }
    }
    let mut detail = format!("{instances} trivial-group instances, {} problems", problems.len());
    if let Some(p) = problems.first() {
        detail.push_str(&format!("; first: {p}"));
    }
    Outcome { name: "degenerate_regime", ok: problems.is_empty(), detail }
}

fn axb_quadrature() -> Outcome {
    let start = Instant::now();
    let config = AxbConfig {
        order: 64,
        tolerance: AXB_TOLERANCE,
        discrimination: AXB_DISCRIMINATION,
        samples: AXB_SAMPLES,
        ..AxbConfig::default()
    };
    let reports = match run_axb_suite(&config) {
        Ok(r) => r,
        Err(e) => return Outcome { name: "axb_quadrature", ok: false, detail: e.to_string() },
    };
    let elapsed = start.elapsed();
    let expect: [(&str, f64, bool); 7] = [
        ("axb.modular", AXB_TOLERANCE, true),
        ("axb.modular_inverse", AXB_TOLERANCE, true),
        ("axb.modular_rejected_candidate", AXB_DISCRIMINATION, false),
        ("axb.exchange_group_unimodular", AXB_DISCRIMINATION, false),
        ("axb.skew_factorization", AXB_TOLERANCE, true),
        ("axb.exchange_group", AXB_TOLERANCE, true),
        ("axb.modular_homomorphism", AXB_HOMOMORPHISM, true),
    ];
    let mut ok = elapsed <= AXB_TIME_LIMIT && reports.iter().all(CheckReport::is_pass);
    let mut parts = Vec::new();
    for (name, bound, at_most) in expect {
        let Some(r) = reports.iter().find(|r| r.check_name == name) else {
            ok = false;
            parts.push(format!("{name} missing"));
            continue;
        };
        let res = r.residual.to_f64();
        let good = if at_most { res <= bound } else { res >= bound };
        ok &= good;
        parts.push(format!("{name}={res:.1e}{}{bound:.0e}", if at_most { "<=" } else { ">=" }));
    }
    parts.push(format!("{:.2}s (limit {}s)", elapsed.as_secs_f64(), AXB_TIME_LIMIT.as_secs()));
    Outcome { name: "axb_quadrature", ok, detail: parts.join(", ") }
}

fn determinism() -> Outcome {
    let mut problems = Vec::new();
    let seeds: Vec<u64> = (0..standard_len() as u64).step_by(7).chain([7, 1000]).collect();
    for &seed in &seeds {
        let run = || -> Result<(String, String), String> {
            let file = generate(&standard(seed)).map_err(|e| e.to_string())?;
            let inst = build(&file, &Limits::default()).map_err(|e| e.to_string())?;
            let reports = run_suite(&inst, Suite::All, &SuiteOptions::default()).map_err(|e| e.to_string())?;
            Ok((file.to_json(), serde_json::to_string(&reports).expect("reports serialize")))
        };
        match (run(), run()) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => problems.push(format!("seed {seed}: outputs differ")),
            (Err(e), _) | (_, Err(e)) => problems.push(format!("seed {seed}: {e}")),
        }
    }
    let detail = format!("{} seeds generated and checked twice, {} differences", seeds.len(), problems.len());
    Outcome { name: "determinism", ok: problems.is_empty(), detail }
}

fn main() -> ExitCode {
    let outcomes = [exact_suite(), negative_suite(), degenerate_regime(), axb_quadrature(), determinism()];
    for o in &outcomes {
        println!("{} {}: {}", if o.ok { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    if outcomes.iter().all(|o| o.ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
