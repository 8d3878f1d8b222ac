//! Deterministic mass transport on a finite `G`-set: orbit balance, weighted
//! transport kernels, and the short forms of the mass-transport principle.

use num::{Signed, Zero};

use crate::action::GroupAction;
use crate::error::{Error, Result};
use crate::measure::{check_balance, is_invariant, is_jointly_invariant, orbit_weights, symmetric_set_violation};
use crate::measure::{FiniteMeasure, PairMeasure};
use crate::rational::{int, Rational};
use crate::report::{Cells, CheckReport, Tally, Witness};

/// A kernel on `S`: `γ(s, ·)` for each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetKernel {
    rows: Vec<FiniteMeasure>,
}

impl DetKernel {
    pub fn new(rows: Vec<FiniteMeasure>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMeasure("kernel rows must be measures on the same set".into()));
        }
        Ok(DetKernel { rows })
    }

    /// `γ(s, ·) = m` for every `s`.
    pub fn constant(m: &FiniteMeasure) -> Self {
        DetKernel { rows: vec![m.clone(); m.len()] }
    }

    /// Conditional kernels of `M`: `γ(s, {t}) = M({(s,t)}) / M({s}×S)` (zero
    /// rows where the marginal vanishes), and the same for the second marginal.
    pub fn disintegrate(m: &PairMeasure) -> (FiniteMeasure, DetKernel, FiniteMeasure, DetKernel) {
        let n = m.points();
        let (first, second) = (m.first_marginal(), m.second_marginal());
        let mut gamma = vec![FiniteMeasure::zero(n); n];
        let mut delta = vec![FiniteMeasure::zero(n); n];
        for (s, t, x) in m.support() {
            gamma[s].set(t, x / first.get(s));
            delta[t].set(s, x / second.get(t));
        }
        (first, DetKernel { rows: gamma }, second, DetKernel { rows: delta })
    }

    pub fn at(&self, s: usize) -> &FiniteMeasure {
        &self.rows[s]
    }

    pub fn at_mut(&mut self, s: usize) -> &mut FiniteMeasure {
        &mut self.rows[s]
    }

    pub fn points(&self) -> usize {
        self.rows.len()
    }

    /// `γ(gs, {gt}) = γ(s, {t})` on generators.
    pub fn check_invariance(&self, action: &GroupAction) -> CheckReport {
        let mut t = Tally::new();
        for &g in action.group().generator_indices() {
            for s in 0..action.points() {
                for u in 0..action.points() {
                    t.compare(&[("g", g), ("s", s), ("t", u)], self.rows[action.act(g, s)].get(action.act(g, u)), self.rows[s].get(u));
                }
            }
        }
        t.finish("transport.kernel_invariance")
    }
}

/// A nonnegative function `m` on `S×S`, meant to satisfy `m(gs, gt) = m(s, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantBifunction {
    values: Vec<Vec<Rational>>,
}

impl InvariantBifunction {
    pub fn new(values: Vec<Vec<Rational>>) -> Result<Self> {
        let n = values.len();
        if values.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMeasure("bifunction table must be square".into()));
        }
        if values.iter().flatten().any(Signed::is_negative) {
            return Err(Error::InvalidMeasure("bifunction values must be nonnegative".into()));
        }
        Ok(InvariantBifunction { values })
    }

    /// The indicator of the diagonal orbit of `(s, t)`.
    pub fn orbit_indicator(action: &GroupAction, s: usize, t: usize) -> Self {
        let n = action.points();
        let mut values = vec![vec![Rational::zero(); n]; n];
        for (a, b) in action.diagonal_orbit(s, t) {
            values[a][b] = int(1);
        }
        InvariantBifunction { values }
    }

    /// Indicators of all diagonal orbits, which span the invariant functions.
    pub fn orbit_indicators(action: &GroupAction) -> Vec<Self> {
        let (ids, count) = action.diagonal_orbit_ids();
        let n = action.points();
        (0..count)
            .map(|k| InvariantBifunction {
                values: (0..n).map(|s| (0..n).map(|t| if ids[s][t] == k { int(1) } else { int(0) }).collect()).collect(),
            })
            .collect()
    }

    pub fn get(&self, s: usize, t: usize) -> &Rational {
        &self.values[s][t]
    }

    pub fn check_invariance(&self, action: &GroupAction) -> CheckReport {
        let mut t = Tally::new();
        for &g in action.group().generator_indices() {
            for s in 0..action.points() {
                for u in 0..action.points() {
                    t.compare(&[("g", g), ("s", s), ("t", u)], self.get(action.act(g, s), action.act(g, u)), self.get(s, u));
                }
            }
        }
        t.finish("transport.bifunction_invariance")
    }
}

fn gate_all(name: &str, pres: &[CheckReport]) -> Option<CheckReport> {
    pres.iter().find_map(|p| CheckReport::gate(name, p))
}

fn gate_bifunctions(name: &str, action: &GroupAction, ms: &[InvariantBifunction]) -> Option<CheckReport> {
    ms.iter().enumerate().find_map(|(i, m)| {
        CheckReport::gate(name, &m.check_invariance(action)).map(|r| r.with_note(format!("bifunction {i} is not invariant")))
    })
}

/// `Σ_s m(b, s) Δ*(s) μ_{b'}({s}) = Σ_s m(s, b') μ_b({s})` for every pair of
/// representatives `(b, b')`.
pub fn check_orbit_balance(action: &GroupAction, m: &InvariantBifunction) -> CheckReport {
    const NAME: &str = "transport.orbit_balance";
    if let Some(r) = gate_bifunctions(NAME, action, std::slice::from_ref(m)) {
        return r;
    }
    let reps = &action.orbits().representatives;
    let mut lhs = Cells::<2>::new();
    let mut rhs = Cells::<2>::new();
    for &b in reps {
        let mu_b = action.mu(b);
        for &c in reps {
            let mu_c = action.mu(c);
            for (s, x) in mu_c.support() {
                lhs.add([b, c], m.get(b, s) * action.delta_star(s) * x);
            }
            for (s, x) in mu_b.support() {
                rhs.add([b, c], m.get(s, c) * x);
            }
        }
    }
    CheckReport::from_cells(NAME, &lhs, &rhs, ["b1", "b2"])
}

/// `μ(ds) γ(s, dt) = ν(dt) δ(t, ds)` as measures on `S×S`, with `μ, ν`
/// invariant measures and `γ, δ` invariant kernels.
pub fn check_kernel_balance(
    action: &GroupAction,
    mu: &FiniteMeasure,
    gamma: &DetKernel,
    nu: &FiniteMeasure,
    delta: &DetKernel,
) -> CheckReport {
    const NAME: &str = "transport.kernel_balance";
    let pres = [
        is_invariant(action, mu).renamed("measure.invariance[mu]"),
        is_invariant(action, nu).renamed("measure.invariance[nu]"),
        gamma.check_invariance(action).renamed("transport.kernel_invariance[gamma]"),
        delta.check_invariance(action).renamed("transport.kernel_invariance[delta]"),
    ];
    if let Some(r) = gate_all(NAME, &pres) {
        return r;
    }
    let mut lhs = Cells::<2>::new();
    let mut rhs = Cells::<2>::new();
    for (s, x) in mu.support() {
        for (t, y) in gamma.at(s).support() {
            lhs.add([s, t], x * y);
        }
    }
    for (t, x) in nu.support() {
        for (s, y) in delta.at(t).support() {
            rhs.add([s, t], x * y);
        }
    }
    CheckReport::from_cells(NAME, &lhs, &rhs, ["s", "t"])
}

/// `∬ m(b, t) Δ*(t) γ(b, dt) μ*(db) = ∬ m(s, b) δ(b, ds) ν*(db)` for each
/// `m` in `ms` (cell = index into `ms`), given the kernel balance.
pub fn check_detmtp_rep(
    action: &GroupAction,
    mu: &FiniteMeasure,
    gamma: &DetKernel,
    nu: &FiniteMeasure,
    delta: &DetKernel,
    ms: &[InvariantBifunction],
) -> CheckReport {
    const NAME: &str = "transport.detmtp_rep";
    if let Some(r) = CheckReport::gate(NAME, &check_kernel_balance(action, mu, gamma, nu, delta)) {
        return r;
    }
    if let Some(r) = gate_bifunctions(NAME, action, ms) {
        return r;
    }
    let k = action.properness_witness();
    let (mu_star, nu_star) = (orbit_weights(action, mu, &k), orbit_weights(action, nu, &k));
    let mut lhs = Cells::<1>::new();
    let mut rhs = Cells::<1>::new();
    for (i, m) in ms.iter().enumerate() {
        for &b in &action.orbits().representatives {
            let (cm, cn) = (mu_star.get(b), nu_star.get(b));
            for (t, y) in gamma.at(b).support() {
                lhs.add([i], m.get(b, t) * action.delta_star(t) * y * &cm);
            }
            for (s, y) in delta.at(b).support() {
                rhs.add([i], m.get(s, b) * y * &cn);
            }
        }
    }
    CheckReport::from_cells(NAME, &lhs, &rhs, ["m"])
}

/// Summing with `μ = ν = Σ_b μ_b` and constant kernels: for each `m`,
/// form 0 `Σ_b Σ_s m(b, s) |G_{s,s}| = Σ_b Σ_s |G_{β(s),β(s)}| m(s, b)` and
/// form 1 `Σ_b |G_{b,b}|⁻¹ Σ_s m(b, s) = Σ_b |G_{b,b}|⁻¹ Σ_s m(s, b)`.
pub fn check_countable_mtp(action: &GroupAction, ms: &[InvariantBifunction]) -> CheckReport {
    const NAME: &str = "transport.countable_mtp";
    if let Some(r) = gate_bifunctions(NAME, action, ms) {
        return r;
    }
    let stab = |s: usize| int(action.stabilizer_order(s) as i64);
    let mut lhs = Cells::<2>::new();
    let mut rhs = Cells::<2>::new();
    for (i, m) in ms.iter().enumerate() {
        for &b in &action.orbits().representatives {
            let inv = Rational::new(1.into(), action.stabilizer_order(b).into());
            for s in 0..action.points() {
                lhs.add([0, i], m.get(b, s) * stab(s));
                rhs.add([0, i], stab(action.beta(s)) * m.get(s, b));
                lhs.add([1, i], m.get(b, s) * &inv);
                rhs.add([1, i], m.get(s, b) * &inv);
            }
        }
    }
    CheckReport::from_cells(NAME, &lhs, &rhs, ["form", "m"])
}

fn weight_gate(name: &str, action: &GroupAction, v: &[Rational], w: &[Rational]) -> Option<CheckReport> {
    for (label, f) in [("v", v), ("w", w)] {
        if let Some(s) = (0..action.points()).find(|&s| !action.mu_integral(s, f).is_positive()) {
            let detail = format!("mu_s({label}) is not positive");
            return Some(CheckReport::precondition_failed(name, Witness::new(&[("s", s)], detail)));
        }
    }
    CheckReport::gate(name, &check_balance(action, v, w))
}

/// `Δ*(s) = Δ_v(b, s) μ_b(w) / μ_{β(s)}(w)` for every representative `b`
/// and point `s`, for a balanced pair `(v, w)`.
pub fn check_delta_star_identity(action: &GroupAction, v: &[Rational], w: &[Rational]) -> CheckReport {
    const NAME: &str = "transport.delta_star_identity";
    if let Some(r) = weight_gate(NAME, action, v, w) {
        return r;
    }
    let dv = action.delta_v(v);
    let mut t = Tally::new();
    for &b in &action.orbits().representatives {
        let mu_b_w = action.mu_integral(b, w);
        for s in 0..action.points() {
            let rhs = &dv[b][s] * &mu_b_w / action.mu_integral(action.beta(s), w);
            t.compare(&[("b", b), ("s", s)], &action.delta_star(s), &rhs);
        }
    }
    t.finish(NAME)
}

/// `∬ Δ_v(s, t) w(s) m(s, t) γ(s, dt) μ(ds) = ∬ w(t) m(s, t) δ(t, ds) ν(dt)`
/// for each `m` in `ms`, given the kernel balance and a balanced `(v, w)`.
#[allow(clippy::too_many_arguments)]
pub fn check_weighted_kernels(
    action: &GroupAction,
    mu: &FiniteMeasure,
    gamma: &DetKernel,
    nu: &FiniteMeasure,
    delta: &DetKernel,
    v: &[Rational],
    w: &[Rational],
    ms: &[InvariantBifunction],
) -> CheckReport {
    const NAME: &str = "transport.weighted_kernels";
    if let Some(r) = weight_gate(NAME, action, v, w) {
        return r;
    }
    if let Some(r) = CheckReport::gate(NAME, &check_kernel_balance(action, mu, gamma, nu, delta)) {
        return r;
    }
    if let Some(r) = gate_bifunctions(NAME, action, ms) {
        return r;
    }
    let dv = action.delta_v(v);
    let mut lhs = Cells::<1>::new();
    let mut rhs = Cells::<1>::new();
    for (i, m) in ms.iter().enumerate() {
        for (s, x) in mu.support() {
            for (t, y) in gamma.at(s).support() {
                lhs.add([i], &dv[s][t] * &w[s] * m.get(s, t) * y * x);
            }
        }
        for (t, x) in nu.support() {
            for (s, y) in delta.at(t).support() {
                rhs.add([i], &w[t] * m.get(s, t) * y * x);
            }
        }
    }
    CheckReport::from_cells(NAME, &lhs, &rhs, ["m"])
}

/// Both sides of `∫ f(s, t) M(d(s, t))` split by diagonal orbit.
fn orbit_sides(
    action: &GroupAction,
    m: &PairMeasure,
    lhs_weight: impl Fn(usize, usize) -> Rational,
    rhs_weight: impl Fn(usize, usize) -> Rational,
) -> (Cells<1>, Cells<1>) {
    let (ids, _) = action.diagonal_orbit_ids();
    let mut lhs = Cells::<1>::new();
    let mut rhs = Cells::<1>::new();
    for (s, t, x) in m.support() {
        lhs.add([ids[s][t]], lhs_weight(s, t) * x);
        rhs.add([ids[s][t]], rhs_weight(s, t) * x);
    }
    (lhs, rhs)
}

/// `∫ Δ_v(s, t) w(s) M(d(s, t)) = ∫ w(t) M(d(s, t))` for a jointly invariant
/// `M`, checked on each diagonal orbit separately.
pub fn check_short_mtp(action: &GroupAction, m: &PairMeasure, v: &[Rational], w: &[Rational]) -> CheckReport {
    const NAME: &str = "transport.short_mtp";
    let joint = is_jointly_invariant(action, m);
    if let Some(r) = weight_gate(NAME, action, v, w) {
        return r;
    }
    let dv = action.delta_v(v);
    let (lhs, rhs) = orbit_sides(action, m, |s, t| &dv[s][t] * &w[s], |_, t| w[t].clone());
    let full = CheckReport::from_cells(NAME, &lhs, &rhs, ["orbit"]);
    match CheckReport::gate(NAME, &joint) {
        Some(r) => r.with_note(format!("identity evaluated regardless: {}", full.summary_line())),
        None => full,
    }
}

/// `Σ Δ̃(s, t) 1_B(s) M = Σ 1_B(t) M` for a jointly invariant `M` and a
/// symmetric `B`, on each diagonal orbit (form 0). Here `Δ̃` comes from
/// `k ≡ 1`. For a transitive action, form 1 uses `Δ̃(s, t) = Δ(g)` with
/// `gs = t`, which holds for any nonempty `B`.
pub fn check_mtp_on_sets(action: &GroupAction, m: &PairMeasure, set: &[usize]) -> CheckReport {
    const NAME: &str = "transport.mtp_on_sets";
    if let Err((b, c)) = symmetric_set_violation(action, set) {
        return CheckReport::precondition_failed(NAME, Witness::new(&[("b1", b), ("b2", c)], "B is not symmetric"));
    }
    let joint = is_jointly_invariant(action, m);
    let mut in_set = vec![false; action.points()];
    for &s in set {
        in_set[s] = true;
    }
    let indicator = |s: usize| if in_set[s] { int(1) } else { int(0) };
    let tilde = action.delta_tilde(&action.properness_witness());
    let (lhs, rhs) = orbit_sides(action, m, |s, t| &tilde[s][t] * indicator(s), |_, t| indicator(t));
    let mut left = Cells::<2>::new();
    let mut right = Cells::<2>::new();
    for (k, x) in lhs.0 {
        left.add([0, k[0]], x);
    }
    for (k, x) in rhs.0 {
        right.add([0, k[0]], x);
    }
    if action.orbits().is_transitive() {
        let group = action.group();
        let modular = |s: usize, t: usize| group.modular(action.transporter(s, t).expect("transitive"));
        let (lhs, rhs) = orbit_sides(action, m, |s, t| modular(s, t) * indicator(s), |_, t| indicator(t));
        for (k, x) in lhs.0 {
            left.add([1, k[0]], x);
        }
        for (k, x) in rhs.0 {
            right.add([1, k[0]], x);
        }
    }
    let full = CheckReport::from_cells(NAME, &left, &right, ["form", "orbit"]);
    match CheckReport::gate(NAME, &joint) {
        Some(r) => r.with_note(format!("identity evaluated regardless: {}", full.summary_line())),
        None => full,
    }
}

#[cfg(test)]
mod tests;
