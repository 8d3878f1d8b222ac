//! Instance files: a self-contained JSON description of a group action, a
//! flow system, deterministic and random measures, and transports.
//!
//! All rationals are strings (`"3"`, `"-1/2"`). Random measures may be given
//! by their values at `Ω`-orbit representatives (extended equivariantly when
//! the instance is built) or as full tables.

mod generate;
mod mutate;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use generate::{generate, rational_weight, standard, standard_len, ActionKind, GroupFamily, InstanceSpec, OmegaKind, Profile};
pub use mutate::{mutate, Mutation};

use crate::action::GroupAction;
use crate::error::{Error, Result};
use crate::group::{Perm, PermGroup};
use crate::measure::{FiniteMeasure, PairMeasure};
use crate::palm::{
    disintegrate_random_pair_measure, extend_equivariant, extend_equivariant_pairs, FlowSystem, PalmPair,
    RandomMeasure, RandomPairMeasure, RandomTransportKernel, TransportQuadruple,
};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::suite::Suite;

/// Resource caps applied when an instance is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_group_order: usize,
    pub max_points: usize,
    pub max_omega: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_group_order: 48, max_points: 24, max_omega: 24 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation: Option<Mutation>,
    pub group: GroupSection,
    pub action: ActionSection,
    pub omega: OmegaSection,
    pub measures: MeasuresSection,
    pub random_measures: RandomMeasuresSection,
    pub transports: TransportsSection,
    pub checks: Vec<Suite>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub label: String,
    pub degree: usize,
    /// Generators as image arrays.
    pub generators: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionSection {
    Natural,
    Regular,
    /// Left cosets of the subgroup generated by these permutations.
    Coset { subgroup: Vec<Vec<usize>> },
    Union { parts: Vec<ActionSection> },
    /// `table[g][s]` for `g` in group element order.
    Table { points: usize, table: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OmegaSpace {
    Point,
    /// `Ω = S` with the same action.
    #[serde(rename = "self")]
    SelfSpace,
    /// `Ω = G` with left multiplication.
    Group,
    /// `Ω = S × {0..marks}`, the group acting on the first factor.
    Product { marks: usize },
    Table { points: usize, table: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaSection {
    pub space: OmegaSpace,
    /// The invariant measure `P` on `Ω`.
    pub p: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasuresSection {
    /// Positive properness witness.
    pub k: Vec<String>,
    /// An invariant measure on `S`.
    pub nu: Vec<String>,
    /// Positive `v` and nonnegative `w` with `μ_s v = μ_s w`.
    pub v: Vec<String>,
    pub w: Vec<String>,
}

/// `(s, t, weight)`.
pub type Entry = (usize, usize, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepMeasure {
    pub omega: usize,
    pub weights: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepPair {
    pub omega: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RandomMeasureField {
    Representatives { reps: Vec<RepMeasure> },
    /// `values[ω][s]`.
    Table { values: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RandomPairField {
    Representatives { reps: Vec<RepPair> },
    /// `values[ω]` lists the atoms of the pair measure at `ω`.
    Table { values: Vec<Vec<Entry>> },
}

/// An explicit candidate `(ν, Q)` replacing the Palm pair computed from `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PalmCandidate {
    pub nu: Vec<String>,
    /// `q[s][ω]`.
    pub q: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomMeasuresSection {
    pub xi: RandomMeasureField,
    /// A random pair measure; disintegrated into `ξ', η, γ, δ` for the
    /// transport and mass-transport checks.
    pub pair: RandomPairField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub palm_candidate: Option<PalmCandidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportsSection {
    /// A deterministic pair measure on `S×S`.
    pub m: Vec<Entry>,
    /// Replaces the disintegrated `γ`, as `gamma[ω][s][t]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Vec<Vec<String>>>>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    /// First 16 hex digits of the SHA-256 of the compact JSON encoding.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("instance serializes");
        hex::encode(&Sha256::digest(&bytes)[..8])
    }
}

/// A built instance: every section parsed and materialized.
#[derive(Debug, Clone)]
pub struct Instance {
    pub file: InstanceFile,
    pub digest: String,
    pub action: GroupAction,
    pub flow: FlowSystem,
    pub k: Vec<Rational>,
    pub nu: FiniteMeasure,
    pub v: Vec<Rational>,
    pub w: Vec<Rational>,
    pub xi: RandomMeasure,
    pub pair_measure: RandomPairMeasure,
    pub quad: TransportQuadruple,
    pub m: PairMeasure,
    pub palm_candidate: Option<PalmPair>,
}

fn cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}

fn parse_vec(what: &str, raw: &[String], len: usize) -> Result<Vec<Rational>> {
    if raw.len() != len {
        return Err(Error::InvalidInstance(format!("{what} has {} entries, expected {len}", raw.len())));
    }
    raw.iter().map(|s| parse_rational(s)).collect()
}

fn parse_measure(what: &str, raw: &[String], len: usize) -> Result<FiniteMeasure> {
    FiniteMeasure::from_weights(parse_vec(what, raw, len)?)
        .map_err(|e| Error::InvalidInstance(format!("{what}: {e}")))
}

fn parse_entries(what: &str, n: usize, raw: &[Entry]) -> Result<PairMeasure> {
    let entries = raw
        .iter()
        .map(|(s, t, x)| Ok((*s, *t, parse_rational(x)?)))
        .collect::<Result<Vec<_>>>()?;
    PairMeasure::from_entries(n, &entries).map_err(|e| Error::InvalidInstance(format!("{what}: {e}")))
}

pub(crate) fn format_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub(crate) fn format_entries(m: &PairMeasure) -> Vec<Entry> {
    m.support().map(|(s, t, x)| (s, t, format_rational(x))).collect()
}

fn element_of(group: &PermGroup, images: &[usize]) -> Result<usize> {
    let p = Perm::new(images.to_vec())?;
    group
        .index_of(&p)
        .ok_or_else(|| Error::InvalidAction(format!("{images:?} is not an element of {}", group.label())))
}

fn build_action(group: &Arc<PermGroup>, section: &ActionSection) -> Result<GroupAction> {
    match section {
        ActionSection::Natural => Ok(GroupAction::natural(group.clone())),
        ActionSection::Regular => Ok(GroupAction::regular(group.clone())),
        ActionSection::Coset { subgroup } => {
            let gens = subgroup.iter().map(|g| element_of(group, g)).collect::<Result<Vec<_>>>()?;
            Ok(GroupAction::coset(group.clone(), &gens))
        }
        ActionSection::Union { parts } => {
            let parts = parts.iter().map(|p| build_action(group, p)).collect::<Result<Vec<_>>>()?;
            GroupAction::disjoint_union(&parts)
        }
        ActionSection::Table { points, table } => GroupAction::from_table(group.clone(), *points, table),
    }
}

fn build_omega(group: &Arc<PermGroup>, action: &GroupAction, space: &OmegaSpace) -> Result<GroupAction> {
    match space {
        OmegaSpace::Point => GroupAction::from_table(group.clone(), 1, &vec![vec![0]; group.order()]),
        OmegaSpace::SelfSpace => Ok(action.clone()),
        OmegaSpace::Group => Ok(GroupAction::regular(group.clone())),
        OmegaSpace::Product { marks } => {
            if *marks == 0 {
                return Err(Error::InvalidInstance("product omega needs at least one mark".into()));
            }
            GroupAction::disjoint_union(&vec![action.clone(); *marks])
        }
        OmegaSpace::Table { points, table } => GroupAction::from_table(group.clone(), *points, table),
    }
}

/// Parses and materializes every section, enforcing `limits`.
pub fn build(file: &InstanceFile, limits: &Limits) -> Result<Instance> {
    let g = &file.group;
    let gens = g.generators.iter().map(|p| Perm::new(p.clone())).collect::<Result<Vec<_>>>()?;
    if let Some(p) = gens.iter().find(|p| p.degree() != g.degree) {
        return Err(Error::DegreeMismatch { left: p.degree(), right: g.degree });
    }
    let group = Arc::new(PermGroup::enumerate(g.degree, gens, limits.max_group_order)?.with_label(g.label.clone()));

    // Sizes are checked before building tables whose cost grows with them.
    let action = build_action(&group, &file.action)?;
    let n = action.points();
    cap("points", n, limits.max_points)?;
    let omega = build_omega(&group, &action, &file.omega.space)?;
    let om = omega.points();
    cap("omega", om, limits.max_omega)?;

    let p = parse_measure("omega.p", &file.omega.p, om)?;
    let flow = FlowSystem::new(omega, p)?;

    let ms = &file.measures;
    let k = parse_vec("measures.k", &ms.k, n)?;
    let v = parse_vec("measures.v", &ms.v, n)?;
    let w = parse_vec("measures.w", &ms.w, n)?;
    let zero = Rational::from_integer(0.into());
    if k.iter().chain(&v).any(|x| *x <= zero) {
        return Err(Error::InvalidMeasure("measures.k and measures.v must be positive".into()));
    }
    if w.iter().any(|x| *x < zero) {
        return Err(Error::InvalidMeasure("measures.w must be nonnegative".into()));
    }
    let nu = parse_measure("measures.nu", &ms.nu, n)?;

    let rm = &file.random_measures;
    let xi = match &rm.xi {
        RandomMeasureField::Representatives { reps } => {
            let reps = reps
                .iter()
                .map(|r| Ok((r.omega, parse_measure("random_measures.xi", &r.weights, n)?)))
                .collect::<Result<Vec<_>>>()?;
            extend_equivariant(&action, flow.flow(), &reps)?
        }
        RandomMeasureField::Table { values } => {
            if values.len() != om {
                return Err(Error::InvalidInstance(format!("random_measures.xi has {} rows, expected {om}", values.len())));
            }
            RandomMeasure::new(values.iter().map(|row| parse_measure("random_measures.xi", row, n)).collect::<Result<_>>()?)?
        }
    };
    let pair_measure = match &rm.pair {
        RandomPairField::Representatives { reps } => {
            let reps = reps
                .iter()
                .map(|r| Ok((r.omega, parse_entries("random_measures.pair", n, &r.entries)?)))
                .collect::<Result<Vec<_>>>()?;
            extend_equivariant_pairs(&action, flow.flow(), &reps)?
        }
        RandomPairField::Table { values } => {
            if values.len() != om {
                return Err(Error::InvalidInstance(format!("random_measures.pair has {} rows, expected {om}", values.len())));
            }
            RandomPairMeasure::new(values.iter().map(|e| parse_entries("random_measures.pair", n, e)).collect::<Result<_>>()?)
        }
    };
    let palm_candidate = match &rm.palm_candidate {
        None => None,
        Some(c) => {
            if c.q.len() != n {
                return Err(Error::InvalidInstance(format!("palm_candidate.q has {} rows, expected {n}", c.q.len())));
            }
            let nu = parse_measure("palm_candidate.nu", &c.nu, n)?;
            let q = c.q.iter().map(|row| parse_measure("palm_candidate.q", row, om)).collect::<Result<_>>()?;
            Some(PalmPair { nu, q })
        }
    };

    let mut quad = disintegrate_random_pair_measure(&pair_measure);
    if let Some(gamma) = &file.transports.gamma {
        if gamma.len() != om || gamma.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInstance("transports.gamma must be indexed [omega][s][t]".into()));
        }
        let rows = gamma
            .iter()
            .map(|per_s| per_s.iter().map(|row| parse_measure("transports.gamma", row, n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        quad.gamma = RandomTransportKernel::new(rows);
    }
    let m = parse_entries("transports.m", n, &file.transports.m)?;

    Ok(Instance {
        file: file.clone(),
        digest: file.digest(),
        action,
        flow,
        k,
        nu,
        v,
        w,
        xi,
        pair_measure,
        quad,
        m,
        palm_candidate,
    })
}
