//! Named check suites over a built instance.

use serde::{Deserialize, Serialize};

use crate::action::{
    check_delta_star, check_delta_tilde, check_disintegration, check_kernel_properties, check_phi_invariance,
    check_projection_transform,
};
use crate::axb::{run_axb_suite, AxbConfig};
use crate::error::{Error, Result};
use crate::group::check_haar_invariance;
use crate::instance::Instance;
use crate::measure::{check_cone_round_trip, find_symmetric_sets};
use crate::palm::{
    check_campbell_invariance, check_char_palm, check_exchange, check_exchange_group, check_exchange_points,
    check_inversion, check_mecke_converse, check_mecke_forward, check_mtp_set_form, check_mtp_two_measures,
    check_mtp_weighted, check_pair_disintegration, check_pair_invariance, check_palm_quasi, check_refined_campbell,
    check_transport_formula, check_trivial_group_reduction, palm_pair, MtpInput, PalmPair, TransportInput,
};
use crate::rational::int;
use crate::report::CheckReport;
use crate::transport::{
    check_countable_mtp, check_delta_star_identity, check_detmtp_rep, check_kernel_balance, check_mtp_on_sets,
    check_orbit_balance, check_short_mtp, check_weighted_kernels, DetKernel, InvariantBifunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Group, action, measure and deterministic transport identities.
    Deterministic,
    /// Campbell, inversion, transport and exchange formulas.
    Palm,
    /// Characterization and Mecke identities for the Palm pair.
    Mecke,
    /// Mass transport for random measures.
    Mtp,
    /// The ax+b quadrature checks (independent of the instance).
    Axb,
    All,
}

impl Suite {
    pub const EXACT: [Suite; 4] = [Suite::Deterministic, Suite::Palm, Suite::Mecke, Suite::Mtp];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Deterministic => "deterministic",
            Suite::Palm => "palm",
            Suite::Mecke => "mecke",
            Suite::Mtp => "mtp",
            Suite::Axb => "axb",
            Suite::All => "all",
        }
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Deterministic, Suite::Palm, Suite::Mecke, Suite::Mtp, Suite::Axb],
            s => vec![s],
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::Deterministic, Suite::Palm, Suite::Mecke, Suite::Mtp, Suite::Axb, Suite::All]
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInstance(format!("unknown suite {s:?}")))
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub axb: AxbConfig,
    /// How many symmetric sets the set-form checks run over.
    pub symmetric_sets: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { axb: AxbConfig::default(), symmetric_sets: 6 }
    }
}

/// One report for a family of cases: the first that does not pass, or the
/// first case annotated with the count.
fn combine(name: &str, reports: Vec<CheckReport>) -> CheckReport {
    let count = reports.len();
    let mut reports = reports.into_iter();
    let Some(first) = reports.next() else {
        return CheckReport::exact(name, int(0), int(0)).with_note("no cases");
    };
    if !first.is_pass() {
        return first.with_note(format!("case 1 of {count}"));
    }
    match reports.enumerate().find(|(_, r)| !r.is_pass()) {
        Some((i, r)) => r.with_note(format!("case {} of {count}", i + 2)),
        None => first.with_note(format!("{count} cases")),
    }
}

fn deterministic(inst: &Instance, opts: &SuiteOptions) -> Vec<CheckReport> {
    let a = &inst.action;
    let indicators = InvariantBifunction::orbit_indicators(a);
    let (mu, gamma, nu, delta) = DetKernel::disintegrate(&inst.m);
    let sets = find_symmetric_sets(a, opts.symmetric_sets);
    vec![
        check_haar_invariance(a.group()),
        check_disintegration(a),
        check_kernel_properties(a),
        check_projection_transform(a),
        check_phi_invariance(a, &inst.k),
        check_delta_star(a),
        check_delta_tilde(a, &inst.k),
        check_cone_round_trip(a, &inst.nu, &inst.k),
        combine("transport.orbit_balance", indicators.iter().map(|m| check_orbit_balance(a, m)).collect()),
        check_kernel_balance(a, &mu, &gamma, &nu, &delta),
        check_detmtp_rep(a, &mu, &gamma, &nu, &delta, &indicators),
        check_countable_mtp(a, &indicators),
        check_delta_star_identity(a, &inst.v, &inst.w),
        check_weighted_kernels(a, &mu, &gamma, &nu, &delta, &inst.v, &inst.w, &indicators),
        check_short_mtp(a, &inst.m, &inst.v, &inst.w),
        combine("transport.mtp_on_sets", sets.iter().map(|b| check_mtp_on_sets(a, &inst.m, b)).collect()),
    ]
}

/// The candidate pair when the instance supplies one, else the exact Palm pair.
pub fn palm_pair_of(inst: &Instance) -> PalmPair {
    inst.palm_candidate.clone().unwrap_or_else(|| palm_pair(&inst.flow, &inst.xi))
}

fn palm(inst: &Instance) -> Vec<CheckReport> {
    let (a, flow, xi) = (&inst.action, &inst.flow, &inst.xi);
    let pair = palm_pair_of(inst);
    let mut out = vec![
        check_pair_invariance(a, flow.flow(), &pair),
        check_pair_disintegration(flow, xi, &pair),
        check_campbell_invariance(a, flow, xi),
        check_refined_campbell(a, flow, xi, &pair),
        check_inversion(a, flow, xi, &pair),
        check_palm_quasi(a, flow, xi, &pair),
    ];
    if a.group().order() == 1 {
        out.push(check_trivial_group_reduction(a, flow, xi, &pair));
    }
    let q = &inst.quad;
    let (px, pe) = (palm_pair(flow, &q.xi), palm_pair(flow, &q.eta));
    let input = TransportInput { action: a, flow, xi: &q.xi, eta: &q.eta, pair_xi: &px, pair_eta: &pe };
    out.push(check_transport_formula(&input, &q.gamma, &q.delta));
    out.push(check_exchange(&input));
    out.push(check_exchange_points(&input));
    out.extend(check_exchange_group(&input));
    out
}

fn mecke(inst: &Instance) -> Vec<CheckReport> {
    let (a, omega, xi) = (&inst.action, inst.flow.flow(), &inst.xi);
    let pair = palm_pair_of(inst);
    vec![
        check_char_palm(&pair, xi),
        check_mecke_forward(a, omega, &pair, xi),
        check_mecke_converse(a, omega, &pair, xi),
    ]
}

fn mtp(inst: &Instance, opts: &SuiteOptions) -> Vec<CheckReport> {
    let (a, flow, q) = (&inst.action, &inst.flow, &inst.quad);
    let input = MtpInput { action: a, flow, xi: &q.xi, eta: &q.eta, gamma: &q.gamma, delta: &q.delta };
    let sets = find_symmetric_sets(a, opts.symmetric_sets);
    vec![
        combine("mtp.set_form", sets.iter().map(|b| check_mtp_set_form(&input, b, &inst.k)).collect()),
        check_mtp_weighted(&input, &inst.v, &inst.w),
        check_mtp_two_measures(a, flow, &q.xi, &q.eta, &inst.v, &inst.w),
    ]
}

/// Runs `suite` on `inst`. Reports carry the instance digest and seed and are
/// sorted by check name.
pub fn run_suite(inst: &Instance, suite: Suite, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for s in suite.expand() {
        match s {
            Suite::Deterministic => out.extend(deterministic(inst, opts)),
            Suite::Palm => out.extend(palm(inst)),
            Suite::Mecke => out.extend(mecke(inst)),
            Suite::Mtp => out.extend(mtp(inst, opts)),
            Suite::Axb => out.extend(run_axb_suite(&opts.axb)?),
            Suite::All => unreachable!("expanded above"),
        }
    }
    for r in &mut out {
        r.instance_digest = Some(inst.digest.clone());
        r.seed = Some(inst.file.seed);
    }
    out.sort_by(|x, y| x.check_name.cmp(&y.check_name));
    Ok(out)
}
