//! Mutations that break exactly one precondition of an instance.

use num::Zero;
use serde::{Deserialize, Serialize};

use super::{build, format_entries, format_vec, InstanceFile, Limits, PalmCandidate};
use crate::error::{Error, Result};
use crate::palm::{check_mecke_forward, palm_pair, PalmPair};
use crate::rational::{format_rational, int};
use crate::report::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    /// No change.
    None,
    /// Moves half the mass of one atom of the deterministic pair measure
    /// within its row, so that it is no longer jointly invariant.
    BreakJointInvariance,
    /// Doubles the Palm kernel `Q` on one `S`-orbit, keeping `ν`.
    ScaleQ,
    /// Gives `Q_s` mass on an `ω` with `ξ(ω) = 0`.
    MoveMassOffsupport,
    /// Adds covariant mass to `γ` so that `ξγ ≠ ηδ`.
    BreakLastTStar,
}

impl Mutation {
    pub const ALL: [Mutation; 5] = [
        Mutation::None,
        Mutation::BreakJointInvariance,
        Mutation::ScaleQ,
        Mutation::MoveMassOffsupport,
        Mutation::BreakLastTStar,
    ];

    /// The check that must stop passing, and the status it must report.
    pub fn target(self) -> Option<(&'static str, Status)> {
        match self {
            Mutation::None => None,
            Mutation::BreakJointInvariance => Some(("transport.mtp_on_sets", Status::PreconditionFailed)),
            Mutation::ScaleQ => Some(("mecke.forward", Status::Fail)),
            Mutation::MoveMassOffsupport => Some(("mecke.characterization", Status::Fail)),
            Mutation::BreakLastTStar => Some(("palm.transport_formula", Status::PreconditionFailed)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mutation::None => "none",
            Mutation::BreakJointInvariance => "break_joint_invariance",
            Mutation::ScaleQ => "scale_Q",
            Mutation::MoveMassOffsupport => "move_mass_offsupport",
            Mutation::BreakLastTStar => "break_lastTstar",
        }
    }
}

impl std::str::FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInstance(format!("unknown mutation {s:?}")))
    }
}

fn not_applicable(kind: Mutation, why: &str) -> Error {
    Error::MutationNotApplicable(format!("{}: {why}", kind.name()))
}

fn candidate(pair: &PalmPair) -> PalmCandidate {
    PalmCandidate { nu: format_vec(pair.nu.weights()), q: pair.q.iter().map(|q| format_vec(q.weights())).collect() }
}

/// Returns a copy of `file` with one precondition broken. Fails with
/// [`Error::MutationNotApplicable`] when the instance has nothing to break
/// (for example a transitive action for `scale_Q`).
pub fn mutate(file: &InstanceFile, kind: Mutation) -> Result<InstanceFile> {
    if kind == Mutation::None {
        return Ok(file.clone());
    }
    let inst = build(file, &Limits::default())?;
    let action = &inst.action;
    let group = action.group();
    let n = action.points();
    let mut out = file.clone();
    out.mutation = Some(kind);
    out.name = format!("{}+{}", file.name, kind.name());

    match kind {
        Mutation::None => unreachable!(),
        Mutation::BreakJointInvariance => {
            let (s, t, x) = inst
                .m
                .support()
                .find(|&(s, t, _)| action.diagonal_orbit(s, t).len() > 1 && n > 1)
                .map(|(s, t, x)| (s, t, x.clone()))
                .ok_or_else(|| not_applicable(kind, "every atom is fixed by the group"))?;
            let u = if t != s { s } else { (s + 1) % n };
            let mut m = inst.m.clone();
            let half = x / int(2);
            m.add(s, t, &-half.clone());
            m.add(s, u, &half);
            out.transports.m = format_entries(&m);
        }
        Mutation::ScaleQ => {
            let base = inst.palm_candidate.clone().unwrap_or_else(|| palm_pair(&inst.flow, &inst.xi));
            // Scaling is undetectable when the result is the Palm pair of
            // another invariant P; keep the first orbit where it is not.
            let scaled = action
                .orbits()
                .representatives
                .iter()
                .filter(|&&b| !base.nu.get(b).is_zero())
                .map(|&b| {
                    let mut pair = base.clone();
                    for &s in action.orbits().members(b) {
                        pair.q[s] = pair.q[s].scaled(&int(2));
                    }
                    pair
                })
                .find(|pair| check_mecke_forward(action, inst.flow.flow(), pair, &inst.xi).status == Status::Fail)
                .ok_or_else(|| not_applicable(kind, "scaling Q on any single orbit is again a Palm pair"))?;
            out.random_measures.palm_candidate = Some(candidate(&scaled));
        }
        Mutation::MoveMassOffsupport => {
            let mut pair = inst.palm_candidate.clone().unwrap_or_else(|| palm_pair(&inst.flow, &inst.xi));
            let s = pair.nu.support().next().map(|(s, _)| s).ok_or_else(|| not_applicable(kind, "nu is zero"))?;
            let w = (0..inst.flow.size())
                .find(|&w| inst.xi.at(w).is_zero())
                .ok_or_else(|| not_applicable(kind, "xi has no null sample"))?;
            let flow = inst.flow.flow();
            // Summing over the group keeps (ν, Q) invariant.
            for g in 0..group.order() {
                pair.q[action.act(g, s)].add(flow.act(g, w), &int(1));
            }
            out.random_measures.palm_candidate = Some(candidate(&pair));
        }
        Mutation::BreakLastTStar => {
            let (xi, flow) = (&inst.quad.xi, inst.flow.flow());
            let (w, s) = inst
                .flow
                .p()
                .support()
                .flat_map(|(w, _)| xi.at(w).support().map(move |(s, _)| (w, s)))
                .next()
                .ok_or_else(|| not_applicable(kind, "the disintegrated xi vanishes P-a.e."))?;
            let target = (s + 1) % n;
            let mut gamma = inst.quad.gamma.clone();
            for g in 0..group.order() {
                gamma.at_mut(flow.act(g, w), action.act(g, s)).add(action.act(g, target), &int(1));
            }
            let table = (0..inst.flow.size())
                .map(|w| (0..n).map(|s| gamma.at(w, s).weights().iter().map(format_rational).collect()).collect())
                .collect();
            out.transports.gamma = Some(table);
        }
    }
    Ok(out)
}
