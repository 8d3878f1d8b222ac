//! Mecke-type characterizations of Palm pairs and the reconstruction of `P`.

use num::Zero;

use super::{check_covariance, check_pair_invariance, gate_all, null_set_mass, palm_pair, FlowSystem, PalmPair, RandomMeasure};
use crate::action::GroupAction;
use crate::error::{Error, Result};
use crate::measure::{is_invariant, FiniteMeasure};
use crate::report::{Cells, CheckReport, Tally, Witness};

/// Characterization of `(ν, Q)` as the Palm pair of `ξ` under some `P`:
/// (b) `Q_s({ξ = 0}) = 0` for `ν({s}) > 0`, and the symmetry
/// `∫ E_{Q_s}[f(s, t) ξ(dt)] ν(ds) = ∫ E_{Q_t}[f(s, t) ξ(ds)] ν(dt)` on cells
/// `(ω, s, t)`.
pub fn check_char_palm(pair: &PalmPair, xi: &RandomMeasure) -> CheckReport {
    const NAME: &str = "mecke.characterization";
    if let Some((s, w, mass)) = null_set_mass(pair, xi) {
        let mut t = Tally::new();
        t.violation(&[("s", s), ("omega", w)], mass, "Q_s charges the null set of xi");
        return t.finish(NAME);
    }
    let mut lhs = Cells::<3>::new();
    let mut rhs = Cells::<3>::new();
    for (s, n) in pair.nu.support() {
        for (w, q) in pair.q[s].support() {
            for (t, x) in xi.at(w).support() {
                let weight = n * q * x;
                lhs.add([w, s, t], weight.clone());
                rhs.add([w, t, s], weight);
            }
        }
    }
    CheckReport::from_cells(NAME, &lhs, &rhs, ["omega", "s", "t"])
}

/// `P({ω}) = Σ_s ν({s}) Q_s({ω}) / ξ(ω, S)` where `ξ(ω) ≠ 0`, and `0` elsewhere.
pub fn reconstruct_p(pair: &PalmPair, xi: &RandomMeasure) -> Result<FiniteMeasure> {
    let omega = xi.omega_size();
    if pair.q.len() != pair.nu.len() || pair.q.iter().any(|q| q.len() != omega) {
        return Err(Error::InvalidMeasure("candidate pair does not match the random measure".into()));
    }
    let mut p = FiniteMeasure::zero(omega);
    for (s, n) in pair.nu.support() {
        for (w, q) in pair.q[s].support() {
            let total = xi.at(w).total();
            if !total.is_zero() {
                p.add(w, &(n * q / total));
            }
        }
    }
    Ok(p)
}

fn mecke_sides(action: &GroupAction, omega: &GroupAction, pair: &PalmPair, xi: &RandomMeasure) -> (Cells<3>, Cells<3>) {
    let group = action.group();
    let kappa = action.kappa();
    let star = pair.nu_star(action);
    let mut lhs = Cells::<3>::new();
    let mut rhs = Cells::<3>::new();
    for &b in &action.orbits().representatives {
        let c = star.get(b);
        if c.is_zero() {
            continue;
        }
        for (w, q) in pair.q[b].support() {
            for (s, x) in xi.at(w).support() {
                let bs = action.beta(s);
                let weight = &c * q * x * action.delta_star(s) * kappa.atom(bs);
                for &g in kappa.support(bs, s) {
                    let gi = group.inv(g);
                    lhs.add([omega.act(gi, w), action.act(gi, b), bs], weight.clone());
                }
                rhs.add([w, s, b], &c * q * x);
            }
        }
    }
    (lhs, rhs)
}

/// `∫ E_{Q_b} ∬ f(θ_g⁻¹, g⁻¹b, β(s)) Δ*(s) κ_{β(s),s}(dg) ξ(ds) ν*(db)
///  = ∫ E_{Q_b} ∫ f(θ_e, s, b) ξ(ds) ν*(db)` on cells `Ω×S×O`, for an
/// invariant candidate `(ν, Q)` and an invariant `ξ`.
pub fn check_mecke_forward(action: &GroupAction, omega: &GroupAction, pair: &PalmPair, xi: &RandomMeasure) -> CheckReport {
    const NAME: &str = "mecke.forward";
    let pres = [check_pair_invariance(action, omega, pair), check_covariance(action, omega, xi)];
    if let Some(r) = gate_all(NAME, &pres) {
        return r;
    }
    let (lhs, rhs) = mecke_sides(action, omega, pair, xi);
    CheckReport::from_cells(NAME, &lhs, &rhs, ["omega", "s", "b"])
}

/// The converse: when the candidate satisfies (b) and the forward identity,
/// the reconstructed `P` is invariant and the Palm pair of `ξ` under it is
/// `(ν, Q)`, compared as `ν ⊗ Q` on `Ω×S`.
pub fn check_mecke_converse(action: &GroupAction, omega: &GroupAction, pair: &PalmPair, xi: &RandomMeasure) -> CheckReport {
    const NAME: &str = "mecke.converse";
    if let Some((s, w, _)) = null_set_mass(pair, xi) {
        return CheckReport::precondition_failed(
            NAME,
            Witness::new(&[("s", s), ("omega", w)], "Q_s charges the null set of xi"),
        );
    }
    if let Some(r) = CheckReport::gate(NAME, &check_mecke_forward(action, omega, pair, xi)) {
        return r;
    }
    let p = match reconstruct_p(pair, xi) {
        Ok(p) => p,
        Err(e) => return CheckReport::precondition_failed(NAME, Witness::new(&[], e.to_string())),
    };
    let invariance = is_invariant(omega, &p);
    if !invariance.is_pass() {
        return invariance.renamed(NAME).with_note("reconstructed P is not invariant");
    }
    let flow = FlowSystem::new(omega.clone(), p).expect("invariance checked above");
    let rebuilt = palm_pair(&flow, xi);
    let (got, want) = (rebuilt.joint(), pair.joint());
    let mut t = Tally::new();
    for (w, row) in got.iter().enumerate() {
        for (s, x) in row.iter().enumerate() {
            t.compare(&[("omega", w), ("s", s)], x, &want[w][s]);
        }
    }
    t.finish(NAME)
}
