//! Refined Campbell theorem, its invariant-function form, the explicit Palm
//! kernel on finitely many orbits, and the trivial-group reduction.

use num::Zero;

use super::{
    campbell, check_covariance, check_pair_disintegration, check_pair_invariance, gate_all, product_orbit_ids,
    FlowSystem, PalmPair, RandomMeasure,
};
use crate::action::GroupAction;
use crate::rational::{int, Rational};
use crate::report::{Cells, CheckReport, Tally, Witness};

fn palm_preconditions(action: &GroupAction, flow: &FlowSystem, xi: &RandomMeasure, pair: &PalmPair) -> Vec<CheckReport> {
    vec![
        flow.check_stationarity(),
        check_covariance(action, flow.flow(), xi),
        check_pair_invariance(action, flow.flow(), pair),
        check_pair_disintegration(flow, xi, pair),
    ]
}

/// `E_P ∬ f(θ_g⁻¹, g, β(t)) κ_{β(t),t}(dg) ξ(dt) = ∫ E_{Q_b} ∫ f(θ_e, g, b) λ(dg) ν*(db)`
/// for every indicator `f` of a cell `(ω, g, b)` of `Ω×G×O`.
pub fn check_refined_campbell(action: &GroupAction, flow: &FlowSystem, xi: &RandomMeasure, pair: &PalmPair) -> CheckReport {
    const NAME: &str = "palm.refined_campbell";
    if let Some(r) = gate_all(NAME, &palm_preconditions(action, flow, xi, pair)) {
        return r;
    }
    let kappa = action.kappa();
    let mut lhs = Cells::<3>::new();
    for (w, p) in flow.p().support() {
        for (t, x) in xi.at(w).support() {
            let b = action.beta(t);
            let weight = p * x * kappa.atom(b);
            for &g in kappa.support(b, t) {
                lhs.add([flow.shift_back(g, w), g, b], weight.clone());
            }
        }
    }
    let star = pair.nu_star(action);
    let mut rhs = Cells::<3>::new();
    for &b in &action.orbits().representatives {
        let c = star.get(b);
        if c.is_zero() {
            continue;
        }
        for (w, q) in pair.q[b].support() {
            let weight = &c * q;
            for g in 0..action.group().order() {
                rhs.add([w, g, b], weight.clone());
            }
        }
    }
    CheckReport::from_cells(NAME, &lhs, &rhs, ["omega", "g", "b"])
}

/// `∫ E_{Q_b}[f(θ_e, b)] μ_b(v) ν*(db) = E_P ∫ f(θ_e, s) v(s) ξ(ds)` for
/// invariant `f`. Invariant `f` are spanned by the orbit indicators of the
/// diagonal action on `Ω×S` and `v` by point indicators, so cells are
/// `(orbit of (ω, s), x)` with `v = 1{x}`.
pub fn check_inversion(action: &GroupAction, flow: &FlowSystem, xi: &RandomMeasure, pair: &PalmPair) -> CheckReport {
    const NAME: &str = "palm.inversion";
    if let Some(r) = gate_all(NAME, &palm_preconditions(action, flow, xi, pair)) {
        return r;
    }
    let n = action.points();
    let ids = product_orbit_ids(action, flow.flow(), 1);
    let star = pair.nu_star(action);
    let mut lhs = Cells::<2>::new();
    for &b in &action.orbits().representatives {
        let c = star.get(b);
        if c.is_zero() {
            continue;
        }
        let mu = action.mu(b);
        for (w, q) in pair.q[b].support() {
            let o = ids[w * n + b];
            for (x, m) in mu.support() {
                lhs.add([o, x], &c * q * m);
            }
        }
    }
    let mut rhs = Cells::<2>::new();
    for (w, p) in flow.p().support() {
        for (s, x) in xi.at(w).support() {
            rhs.add([ids[w * n + s], s], p * x);
        }
    }
    CheckReport::from_cells(NAME, &lhs, &rhs, ["orbit", "x"])
}

/// The explicit Palm kernel on finitely many orbits,
/// `Q_b(A) = E_P ∬ 1_A(θ_g⁻¹) w_b(t) κ_{b,t}(dg) ξ_b(dt)` with
/// `w_b = 1_{Gb} / |G|` (so `∫ w_b dμ_b = 1`), compared with the Palm kernel
/// for the supporting measure `μ_b`, which is `ν*({b}) Q_b` in terms of
/// [`palm_pair`](super::palm_pair). Also checks the per-orbit Campbell form
/// `E_P ∬ f(θ_g⁻¹, g) κ_{b,t}(dg) ξ_b(dt) = E_{Q_b} ∫ f(θ_e, g) λ(dg)`.
/// Orbits where `ξ` has no mass are skipped and listed in the notes.
pub fn check_palm_quasi(action: &GroupAction, flow: &FlowSystem, xi: &RandomMeasure, pair: &PalmPair) -> CheckReport {
    const NAME: &str = "palm.quasi_explicit";
    if let Some(r) = gate_all(NAME, &palm_preconditions(action, flow, xi, pair)) {
        return r;
    }
    let group = action.group();
    let kappa = action.kappa();
    let star = pair.nu_star(action);
    let w_b = Rational::new(1.into(), group.order().into());
    let c = campbell(flow, xi);
    let mut skipped = Vec::new();
    let mut lhs = Cells::<4>::new();
    let mut rhs = Cells::<4>::new();
    for &b in &action.orbits().representatives {
        let orbit = action.orbits().members(b);
        let intensity: Rational = c.iter().flat_map(|row| orbit.iter().map(move |&t| &row[t])).sum();
        if intensity.is_zero() {
            skipped.push(b);
            continue;
        }
        let scale = star.get(b);
        for (w, row) in c.iter().enumerate() {
            for &t in orbit {
                let x = &row[t];
                if x.is_zero() {
                    continue;
                }
                let weight = x * kappa.atom(b);
                for &g in kappa.support(b, t) {
                    let moved = flow.shift_back(g, w);
                    lhs.add([0, b, moved, 0], &weight * &w_b);
                    lhs.add([1, b, moved, g], weight.clone());
                }
            }
        }
        for (w, q) in pair.q[b].support() {
            let weight = &scale * q;
            rhs.add([0, b, w, 0], weight.clone());
            for g in 0..group.order() {
                rhs.add([1, b, w, g], weight.clone());
            }
        }
    }
    let mut report = CheckReport::from_cells(NAME, &lhs, &rhs, ["form", "b", "omega", "g"]);
    for b in skipped {
        report = report.with_note(format!("orbit of {b} skipped: zero intensity"));
    }
    report
}

/// For `G = {e}`: `κ_{s,t} = 1{s=t} δ_e`, `ν* = ν`, and the refined Campbell
/// identity is the defining identity `C_ξ = ν ⊗ Q`.
pub fn check_trivial_group_reduction(
    action: &GroupAction,
    flow: &FlowSystem,
    xi: &RandomMeasure,
    pair: &PalmPair,
) -> CheckReport {
    const NAME: &str = "palm.trivial_group_reduction";
    if action.group().order() != 1 {
        return CheckReport::precondition_failed(
            NAME,
            Witness::new(&[("order", action.group().order())], "group is not trivial"),
        );
    }
    let kappa = action.kappa();
    let n = action.points();
    let mut t = Tally::new();
    for s in 0..n {
        for u in 0..n {
            let expected = if s == u { vec![(0, int(1))] } else { vec![] };
            let got = kappa.measure(s, u);
            if got != expected {
                t.violation(&[("s", s), ("t", u)], int(1), "kappa differs from 1{s=t} delta_e");
            }
        }
        t.compare(&[("s", s), ("form", 0)], &pair.nu_star(action).get(s), pair.nu.get(s));
    }
    let campbell_rep = check_refined_campbell(action, flow, xi, pair);
    let palm_rep = check_pair_disintegration(flow, xi, pair);
    for (i, r) in [campbell_rep, palm_rep].iter().enumerate() {
        if !r.is_pass() {
            t.violation(&[("form", i + 1)], r.residual.as_exact().cloned().unwrap_or_else(|| int(1)), &r.check_name);
        }
    }
    t.finish(NAME)
}
