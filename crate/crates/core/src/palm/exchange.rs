//! The transport formula and the exchange formulas derived from it.

use num::Zero;

use super::{
    check_covariance, check_kernel_covariance, check_pair_disintegration, check_pair_invariance, gate_all, FlowSystem,
    PalmPair, RandomMeasure, RandomTransportKernel,
};
use crate::action::GroupAction;
use crate::measure::FiniteMeasure;
use crate::report::{Cells, CheckReport, Tally};

/// Two invariant random measures with their Palm pairs.
#[derive(Clone, Copy)]
pub struct TransportInput<'a> {
    pub action: &'a GroupAction,
    pub flow: &'a FlowSystem,
    pub xi: &'a RandomMeasure,
    pub eta: &'a RandomMeasure,
    pub pair_xi: &'a PalmPair,
    pub pair_eta: &'a PalmPair,
}

impl TransportInput<'_> {
    fn preconditions(&self) -> Vec<CheckReport> {
        let (a, f) = (self.action, self.flow);
        let tag = |r: CheckReport, which: &str| {
            let name = format!("{}[{which}]", r.check_name);
            r.renamed(name)
        };
        vec![
            f.check_stationarity(),
            tag(check_covariance(a, f.flow(), self.xi), "xi"),
            tag(check_covariance(a, f.flow(), self.eta), "eta"),
            tag(check_pair_invariance(a, f.flow(), self.pair_xi), "xi"),
            tag(check_pair_invariance(a, f.flow(), self.pair_eta), "eta"),
            tag(check_pair_disintegration(f, self.xi, self.pair_xi), "xi"),
            tag(check_pair_disintegration(f, self.eta, self.pair_eta), "eta"),
        ]
    }
}

/// `ξ(ω, ds) γ(ω, s, dt) = η(ω, dt) δ(ω, t, ds)` as measures on `S×S`, for
/// every `ω` with `P({ω}) > 0`. The witness names the first offending `ω`.
pub fn check_last_t_star(
    action: &GroupAction,
    flow: &FlowSystem,
    xi: &RandomMeasure,
    eta: &RandomMeasure,
    gamma: &RandomTransportKernel,
    delta: &RandomTransportKernel,
) -> CheckReport {
    let n = action.points();
    let mut t = Tally::new();
    for (w, _) in flow.p().support() {
        for s in 0..n {
            for u in 0..n {
                let l = xi.get(w, s) * gamma.at(w, s).get(u);
                let r = eta.get(w, u) * delta.at(w, u).get(s);
                t.compare(&[("omega", w), ("s", s), ("t", u)], &l, &r);
            }
        }
    }
    t.finish("palm.transport_balance")
}

/// Both sides of the transport formula over cells `Ω×G×O×O`. `lhs_kernel(ω, b)`
/// plays the role of `δ(ω, b, ·)` and `rhs_kernel(ω, b)` of `γ(ω, b, ·)`.
fn transport_sides<'k>(
    input: &TransportInput<'_>,
    lhs_kernel: impl Fn(usize, usize) -> &'k FiniteMeasure,
    rhs_kernel: impl Fn(usize, usize) -> &'k FiniteMeasure,
) -> (Cells<4>, Cells<4>) {
    let action = input.action;
    let group = action.group();
    let kappa = action.kappa();
    let reps = &action.orbits().representatives;
    let star_eta = input.pair_eta.nu_star(action);
    let star_xi = input.pair_xi.nu_star(action);
    let mut lhs = Cells::<4>::new();
    for &b in reps {
        let c = star_eta.get(b);
        if c.is_zero() {
            continue;
        }
        for (w, q) in input.pair_eta.q[b].support() {
            for (s, d) in lhs_kernel(w, b).support() {
                let bs = action.beta(s);
                let weight = &c * q * d * action.delta_star(s) * kappa.atom(bs);
                for &g in kappa.support(bs, s) {
                    lhs.add([input.flow.shift_back(g, w), group.inv(g), b, bs], weight.clone());
                }
            }
        }
    }
    let mut rhs = Cells::<4>::new();
    for &b in reps {
        let c = star_xi.get(b);
        if c.is_zero() {
            continue;
        }
        for (w, q) in input.pair_xi.q[b].support() {
            for (s, x) in rhs_kernel(w, b).support() {
                let bs = action.beta(s);
                let weight = &c * q * x * kappa.atom(bs);
                for &g in kappa.support(bs, s) {
                    rhs.add([w, g, bs, b], weight.clone());
                }
            }
        }
    }
    (lhs, rhs)
}

const CELL_LABELS: [&str; 4] = ["omega", "g", "b1", "b2"];

/// The transport formula for invariant kernels `γ, δ` from `Ω×S` to `S`
/// balancing `ξ` and `η` (checked first, `P`-a.e.).
pub fn check_transport_formula(
    input: &TransportInput<'_>,
    gamma: &RandomTransportKernel,
    delta: &RandomTransportKernel,
) -> CheckReport {
    const NAME: &str = "palm.transport_formula";
    let (a, f) = (input.action, input.flow);
    let mut pres = input.preconditions();
    pres.push(check_kernel_covariance(a, f.flow(), gamma).renamed("palm.kernel_covariance[gamma]"));
    pres.push(check_kernel_covariance(a, f.flow(), delta).renamed("palm.kernel_covariance[delta]"));
    pres.push(check_last_t_star(a, f, input.xi, input.eta, gamma, delta));
    if let Some(r) = gate_all(NAME, &pres) {
        return r;
    }
    let (lhs, rhs) = transport_sides(input, |w, b| delta.at(w, b), |w, b| gamma.at(w, b));
    CheckReport::from_cells(NAME, &lhs, &rhs, CELL_LABELS)
}

/// The exchange formula: the transport formula with `γ(ω, s, ·) = η(ω, ·)`
/// and `δ(ω, t, ·) = ξ(ω, ·)`, which balance automatically.
pub fn check_exchange(input: &TransportInput<'_>) -> CheckReport {
    const NAME: &str = "palm.exchange";
    if let Some(r) = gate_all(NAME, &input.preconditions()) {
        return r;
    }
    let (lhs, rhs) = transport_sides(input, |w, _| input.xi.at(w), |w, _| input.eta.at(w));
    CheckReport::from_cells(NAME, &lhs, &rhs, CELL_LABELS)
}

/// The exchange formula for test functions of `(ω, gb, β(s))`:
/// `∫ E_{Q_{η,b}} ∬ f(θ_g⁻¹, g⁻¹b, β(s)) Δ*(s) κ_{β(s),s}(dg) ξ(ds) ν*_η(db)
///  = ∫ E_{Q_{ξ,b}} ∫ f(θ_e, s, b) η(ds) ν*_ξ(db)`, cells `Ω×S×O`.
pub fn check_exchange_points(input: &TransportInput<'_>) -> CheckReport {
    const NAME: &str = "palm.exchange_points";
    if let Some(r) = gate_all(NAME, &input.preconditions()) {
        return r;
    }
    let action = input.action;
    let group = action.group();
    let kappa = action.kappa();
    let reps = &action.orbits().representatives;
    let star_eta = input.pair_eta.nu_star(action);
    let star_xi = input.pair_xi.nu_star(action);
    let mut lhs = Cells::<3>::new();
    let mut rhs = Cells::<3>::new();
    for &b in reps {
        let c = star_eta.get(b);
        if !c.is_zero() {
            for (w, q) in input.pair_eta.q[b].support() {
                for (s, x) in input.xi.at(w).support() {
                    let bs = action.beta(s);
                    let weight = &c * q * x * action.delta_star(s) * kappa.atom(bs);
                    for &g in kappa.support(bs, s) {
                        let gi = group.inv(g);
                        lhs.add([input.flow.shift_back(g, w), action.act(gi, b), bs], weight.clone());
                    }
                }
            }
        }
        let c = star_xi.get(b);
        if !c.is_zero() {
            for (w, q) in input.pair_xi.q[b].support() {
                for (s, y) in input.eta.at(w).support() {
                    rhs.add([w, s, b], &c * q * y);
                }
            }
        }
    }
    CheckReport::from_cells(NAME, &lhs, &rhs, ["omega", "s", "b"])
}

/// True when `S` is `G` itself under left multiplication (point `x` = element `x`).
pub fn is_regular_on_itself(action: &GroupAction) -> bool {
    let group = action.group();
    action.points() == group.order()
        && (0..group.order()).all(|g| (0..group.order()).all(|x| action.act(g, x) == group.mul(g, x)))
}

/// The exchange formula when `S = G`:
/// `E_{Q_η} ∫ f(θ_g⁻¹, g⁻¹) Δ(g⁻¹) ξ(dg) = E_{Q_ξ} ∫ f(θ_e, g) η(dg)`, where
/// `Q_ξ` is the Palm measure at `e` for the supporting measure `λ`
/// (`ν*({e}) Q_e` in terms of the computed pair). `None` if `S` is not `G`.
pub fn check_exchange_group(input: &TransportInput<'_>) -> Option<CheckReport> {
    const NAME: &str = "palm.exchange_group";
    let action = input.action;
    if !is_regular_on_itself(action) {
        return None;
    }
    if let Some(r) = gate_all(NAME, &input.preconditions()) {
        return Some(r);
    }
    let group = action.group();
    let e = group.identity_index();
    let c_eta = input.pair_eta.nu_star(action).get(e);
    let c_xi = input.pair_xi.nu_star(action).get(e);
    let mut lhs = Cells::<2>::new();
    let mut rhs = Cells::<2>::new();
    for (w, q) in input.pair_eta.q[e].support() {
        for (g, x) in input.xi.at(w).support() {
            let gi = group.inv(g);
            lhs.add([input.flow.shift_back(g, w), gi], &c_eta * q * x * group.modular(gi));
        }
    }
    for (w, q) in input.pair_xi.q[e].support() {
        for (g, y) in input.eta.at(w).support() {
            rhs.add([w, g], &c_xi * q * y);
        }
    }
    Some(CheckReport::from_cells(NAME, &lhs, &rhs, ["omega", "g"]))
}
