//! The mass-transport principle for invariant random measures and kernels.
//!
//! Invariant test functions `h` on `Ω×S×S` are spanned by the orbit
//! indicators of the diagonal action, so both sides are compared as measures
//! on the set of those orbits.

use num::{Signed, Zero};

use super::{
    check_covariance, check_kernel_covariance, check_last_t_star, gate_all, product_orbit_ids, FlowSystem,
    RandomMeasure, RandomTransportKernel,
};
use crate::action::GroupAction;
use crate::measure::{check_balance, symmetric_set_violation};
use crate::rational::Rational;
use crate::report::{Cells, CheckReport, Witness};

/// `ξ, η` with kernels `γ, δ` balancing them.
#[derive(Clone, Copy)]
pub struct MtpInput<'a> {
    pub action: &'a GroupAction,
    pub flow: &'a FlowSystem,
    pub xi: &'a RandomMeasure,
    pub eta: &'a RandomMeasure,
    pub gamma: &'a RandomTransportKernel,
    pub delta: &'a RandomTransportKernel,
}

impl MtpInput<'_> {
    fn preconditions(&self) -> Vec<CheckReport> {
        let (a, f) = (self.action, self.flow);
        vec![
            f.check_stationarity(),
            check_covariance(a, f.flow(), self.xi).renamed("palm.random_measure_covariance[xi]"),
            check_covariance(a, f.flow(), self.eta).renamed("palm.random_measure_covariance[eta]"),
            check_kernel_covariance(a, f.flow(), self.gamma).renamed("palm.kernel_covariance[gamma]"),
            check_kernel_covariance(a, f.flow(), self.delta).renamed("palm.kernel_covariance[delta]"),
            check_last_t_star(a, f, self.xi, self.eta, self.gamma, self.delta),
        ]
    }

    /// Cells `orbit of (ω, s, t)` filled by `P ξ(ω, ds) γ(ω, s, dt) weight(s, t)`
    /// and `P η(ω, dt) δ(ω, t, ds) weight(s, t)`.
    fn sides(
        &self,
        forward: impl Fn(usize, usize) -> Rational,
        backward: impl Fn(usize, usize) -> Rational,
    ) -> (Cells<1>, Cells<1>) {
        let n = self.action.points();
        let ids = product_orbit_ids(self.action, self.flow.flow(), 2);
        let id = |w: usize, s: usize, t: usize| ids[(w * n + s) * n + t];
        let mut lhs = Cells::<1>::new();
        let mut rhs = Cells::<1>::new();
        for (w, p) in self.flow.p().support() {
            for (s, x) in self.xi.at(w).support() {
                for (t, y) in self.gamma.at(w, s).support() {
                    let f = forward(s, t);
                    if !f.is_zero() {
                        lhs.add([id(w, s, t)], p * x * y * f);
                    }
                }
            }
            for (t, x) in self.eta.at(w).support() {
                for (s, y) in self.delta.at(w, t).support() {
                    let f = backward(s, t);
                    if !f.is_zero() {
                        rhs.add([id(w, s, t)], p * x * y * f);
                    }
                }
            }
        }
        (lhs, rhs)
    }
}

/// `E ∬ h Δ̃(s, t) 1_B(s) ξ(ds) γ(s, dt) = E ∬ h 1_B(t) η(dt) δ(t, ds)` for a
/// symmetric set `B` and invariant `h`; `Δ̃` is built from `k`.
pub fn check_mtp_set_form(input: &MtpInput<'_>, set: &[usize], k: &[Rational]) -> CheckReport {
    const NAME: &str = "mtp.set_form";
    let action = input.action;
    if let Err((b, c)) = symmetric_set_violation(action, set) {
        return CheckReport::precondition_failed(NAME, Witness::new(&[("b1", b), ("b2", c)], "B is not symmetric"));
    }
    if let Some(r) = gate_all(NAME, &input.preconditions()) {
        return r;
    }
    let mut in_set = vec![false; action.points()];
    for &s in set {
        in_set[s] = true;
    }
    let tilde = action.delta_tilde(k);
    let indicator = |s: usize| if in_set[s] { Rational::from_integer(1.into()) } else { Rational::zero() };
    let (lhs, rhs) = input.sides(|s, t| &tilde[s][t] * indicator(s), |_, t| indicator(t));
    CheckReport::from_cells(NAME, &lhs, &rhs, ["orbit"])
}

fn weight_gate(name: &str, action: &GroupAction, v: &[Rational], w: &[Rational]) -> Option<CheckReport> {
    if let Some(s) = (0..action.points()).find(|&s| !action.mu_integral(s, v).is_positive()) {
        return Some(CheckReport::precondition_failed(name, Witness::new(&[("s", s)], "mu_s(v) is not positive")));
    }
    if let Some(s) = w.iter().position(Rational::is_negative) {
        return Some(CheckReport::precondition_failed(name, Witness::new(&[("s", s)], "w is negative")));
    }
    CheckReport::gate(name, &check_balance(action, v, w))
}

/// `E ∬ h Δ_v(s, t) w(s) ξ(ds) γ(s, dt) = E ∬ h w(t) η(dt) δ(t, ds)` for
/// weights `(v, w)` whose orbit ratios `μ_b w / μ_b v` agree.
pub fn check_mtp_weighted(input: &MtpInput<'_>, v: &[Rational], w: &[Rational]) -> CheckReport {
    const NAME: &str = "mtp.weighted_form";
    let action = input.action;
    if let Some(r) = weight_gate(NAME, action, v, w) {
        return r;
    }
    if let Some(r) = gate_all(NAME, &input.preconditions()) {
        return r;
    }
    let dv = action.delta_v(v);
    let (lhs, rhs) = input.sides(|s, t| &dv[s][t] * &w[s], |_, t| w[t].clone());
    CheckReport::from_cells(NAME, &lhs, &rhs, ["orbit"])
}

/// The weighted form with `γ(s, ·) = η` and `δ(t, ·) = ξ`:
/// `E ∬ h Δ_v(s, t) w(s) ξ(ds) η(dt) = E ∬ h w(t) ξ(ds) η(dt)`.
pub fn check_mtp_two_measures(
    action: &GroupAction,
    flow: &FlowSystem,
    xi: &RandomMeasure,
    eta: &RandomMeasure,
    v: &[Rational],
    w: &[Rational],
) -> CheckReport {
    const NAME: &str = "mtp.two_measures";
    if let Some(r) = weight_gate(NAME, action, v, w) {
        return r;
    }
    let pres = [
        flow.check_stationarity(),
        check_covariance(action, flow.flow(), xi).renamed("palm.random_measure_covariance[xi]"),
        check_covariance(action, flow.flow(), eta).renamed("palm.random_measure_covariance[eta]"),
    ];
    if let Some(r) = gate_all(NAME, &pres) {
        return r;
    }
    let gamma = RandomTransportKernel::from_random_measure(eta, action.points());
    let delta = RandomTransportKernel::from_random_measure(xi, action.points());
    let input = MtpInput { action, flow, xi, eta, gamma: &gamma, delta: &delta };
    let dv = action.delta_v(v);
    let (lhs, rhs) = input.sides(|s, t| &dv[s][t] * &w[s], |_, t| w[t].clone());
    CheckReport::from_cells(NAME, &lhs, &rhs, ["orbit"])
}
