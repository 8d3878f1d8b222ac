//! Seeded generation of instance files, and the standard table of specs.

use std::sync::Arc;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::{
    build_action, cap, format_entries, format_vec, ActionSection, GroupSection, InstanceFile, Limits, MeasuresSection,
    OmegaSection, OmegaSpace, RandomMeasureField, RandomMeasuresSection, RandomPairField, RepMeasure, RepPair,
    TransportsSection,
};
use crate::action::GroupAction;
use crate::error::Result;
use crate::group::PermGroup;
use crate::measure::jointly_invariant_from_template;
use crate::rational::{format_rational, Rational};
use crate::suite::Suite;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupFamily {
    Trivial { degree: usize },
    Cyclic { n: usize },
    Dihedral { n: usize },
    Symmetric { n: usize },
    Alternating4,
    Quaternion,
    /// `C2 × C2` on four points.
    Klein4,
    Product { left: Box<GroupFamily>, right: Box<GroupFamily> },
}

impl GroupFamily {
    pub fn build(&self) -> PermGroup {
        match self {
            GroupFamily::Trivial { degree } => PermGroup::trivial(*degree),
            GroupFamily::Cyclic { n } => PermGroup::cyclic(*n),
            GroupFamily::Dihedral { n } => PermGroup::dihedral(*n),
            GroupFamily::Symmetric { n } => PermGroup::symmetric(*n),
            GroupFamily::Alternating4 => PermGroup::alternating(4),
            GroupFamily::Quaternion => PermGroup::quaternion(),
            GroupFamily::Klein4 => PermGroup::direct_product(&PermGroup::cyclic(2), &PermGroup::cyclic(2)),
            GroupFamily::Product { left, right } => PermGroup::direct_product(&left.build(), &right.build()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionKind {
    Natural,
    Regular,
    /// Cosets of the subgroup generated by these words; a word is a list of
    /// indices into the group's generators, multiplied left to right.
    Coset { subgroup: Vec<Vec<usize>> },
    Union { parts: Vec<ActionKind> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OmegaKind {
    Point,
    #[serde(rename = "self")]
    SelfSpace,
    Group,
    Product { marks: usize },
}

/// How the random weights are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    /// Percentage of weights drawn as zero.
    pub sparsity: u32,
    /// Make `ξ` vanish on the last `Ω`-orbit when there are several.
    pub null_orbit: bool,
    /// Template pairs for the deterministic pair measure.
    pub pair_templates: usize,
}

impl Default for Profile {
    fn default() -> Self {
        Profile { sparsity: 30, null_orbit: false, pair_templates: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub name: String,
    pub seed: u64,
    pub group: GroupFamily,
    pub action: ActionKind,
    pub omega: OmegaKind,
    #[serde(default)]
    pub profile: Profile,
    #[serde(default = "default_checks")]
    pub checks: Vec<Suite>,
}

fn default_checks() -> Vec<Suite> {
    vec![Suite::All]
}

/// `n/d` with `n ∈ 1..=8`, `d ∈ 1..=16`, or zero with probability
/// `sparsity` percent.
pub fn rational_weight(rng: &mut Xoshiro256PlusPlus, sparsity: u32) -> Rational {
    if sparsity > 0 && rng.gen_range(0..100) < sparsity {
        return Rational::zero();
    }
    let n: i64 = rng.gen_range(1..=8);
    let d: i64 = rng.gen_range(1..=16);
    Rational::new(n.into(), d.into())
}

fn positive(rng: &mut Xoshiro256PlusPlus) -> Rational {
    rational_weight(rng, 0)
}

fn word_element(group: &PermGroup, word: &[usize]) -> usize {
    let gens = group.generator_indices();
    word.iter().fold(group.identity_index(), |acc, &i| group.mul(acc, gens[i % gens.len()]))
}

fn resolve_action(group: &PermGroup, kind: &ActionKind) -> ActionSection {
    match kind {
        ActionKind::Natural => ActionSection::Natural,
        ActionKind::Regular => ActionSection::Regular,
        ActionKind::Coset { subgroup } => ActionSection::Coset {
            subgroup: subgroup.iter().map(|w| group.element(word_element(group, w)).images().to_vec()).collect(),
        },
        ActionKind::Union { parts } => ActionSection::Union { parts: parts.iter().map(|p| resolve_action(group, p)).collect() },
    }
}

/// Builds an instance file from a spec. Pure: the same spec always gives the
/// same file.
pub fn generate(spec: &InstanceSpec) -> Result<InstanceFile> {
    generate_with(spec, &Limits::default())
}

pub(crate) fn generate_with(spec: &InstanceSpec, limits: &Limits) -> Result<InstanceFile> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(spec.seed);
    let group = spec.group.build();
    cap("group order", group.order(), limits.max_group_order)?;
    let group = Arc::new(group);
    let action_section = resolve_action(&group, &spec.action);
    let action = build_action(&group, &action_section)?;
    let n = action.points();
    cap("points", n, limits.max_points)?;
    let (space, omega) = match spec.omega {
        OmegaKind::Point => {
            (OmegaSpace::Point, GroupAction::from_table(group.clone(), 1, &vec![vec![0]; group.order()])?)
        }
        OmegaKind::SelfSpace => (OmegaSpace::SelfSpace, action.clone()),
        OmegaKind::Group => (OmegaSpace::Group, GroupAction::regular(group.clone())),
        OmegaKind::Product { marks } => {
            (OmegaSpace::Product { marks }, GroupAction::disjoint_union(&vec![action.clone(); marks.max(1)])?)
        }
    };
    cap("omega", omega.points(), limits.max_omega)?;
    let profile = spec.profile;

    // P: positive and constant on Ω-orbits, normalized.
    let orbit_p: Vec<Rational> = omega.orbits().representatives.iter().map(|_| positive(&mut rng)).collect();
    let mut p: Vec<Rational> = (0..omega.points()).map(|w| orbit_p[omega.orbits().orbit_id[w]].clone()).collect();
    let total: Rational = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= &total);

    let k: Vec<Rational> = (0..n).map(|_| positive(&mut rng)).collect();
    let orbit_nu: Vec<Rational> =
        action.orbits().representatives.iter().map(|_| rational_weight(&mut rng, profile.sparsity)).collect();
    let nu: Vec<Rational> = (0..n).map(|s| orbit_nu[action.orbits().orbit_id[s]].clone()).collect();
    let v: Vec<Rational> = (0..n).map(|_| positive(&mut rng)).collect();
    let raw_w: Vec<Rational> = (0..n).map(|_| positive(&mut rng)).collect();
    let w: Vec<Rational> = (0..n)
        .map(|s| {
            let b = action.beta(s);
            &raw_w[s] * action.mu_integral(b, &v) / action.mu_integral(b, &raw_w)
        })
        .collect();

    let omega_reps = &omega.orbits().representatives;
    let null_rep = (profile.null_orbit && omega_reps.len() > 1).then(|| *omega_reps.last().expect("nonempty"));
    let mut xi_weights: Vec<Vec<Rational>> = omega_reps
        .iter()
        .map(|&r| {
            (0..n)
                .map(|_| if Some(r) == null_rep { Rational::zero() } else { rational_weight(&mut rng, profile.sparsity) })
                .collect()
        })
        .collect();
    if xi_weights.iter().flatten().all(Zero::is_zero) {
        xi_weights[0][0] = Rational::from_integer(1.into());
    }
    let xi_reps: Vec<RepMeasure> =
        omega_reps.iter().zip(&xi_weights).map(|(&r, w)| RepMeasure { omega: r, weights: format_vec(w) }).collect();

    let pair_reps: Vec<RepPair> = omega_reps
        .iter()
        .map(|&r| {
            let count = rng.gen_range(1..=n.min(6));
            let mut entries: Vec<(usize, usize, String)> = (0..count)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), format_rational(&positive(&mut rng))))
                .collect();
            entries.sort();
            entries.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
            RepPair { omega: r, entries }
        })
        .collect();

    let template: Vec<(usize, usize, Rational)> = (0..profile.pair_templates.max(1))
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), positive(&mut rng)))
        .collect();
    let m = jointly_invariant_from_template(&action, &template)?;

    Ok(InstanceFile {
        name: spec.name.clone(),
        seed: spec.seed,
        mutation: None,
        group: GroupSection {
            label: group.label().to_string(),
            degree: group.degree(),
            generators: group.generators().iter().map(|g| g.images().to_vec()).collect(),
        },
        action: action_section,
        omega: OmegaSection { space, p: format_vec(&p) },
        measures: MeasuresSection { k: format_vec(&k), nu: format_vec(&nu), v: format_vec(&v), w: format_vec(&w) },
        random_measures: RandomMeasuresSection {
            xi: RandomMeasureField::Representatives { reps: xi_reps },
            pair: RandomPairField::Representatives { reps: pair_reps },
            palm_candidate: None,
        },
        transports: TransportsSection { m: format_entries(&m), gamma: None },
        checks: spec.checks.clone(),
    })
}

fn cyclic(n: usize) -> GroupFamily {
    GroupFamily::Cyclic { n }
}

fn dihedral(n: usize) -> GroupFamily {
    GroupFamily::Dihedral { n }
}

fn coset(words: &[&[usize]]) -> ActionKind {
    ActionKind::Coset { subgroup: words.iter().map(|w| w.to_vec()).collect() }
}

fn union(parts: Vec<ActionKind>) -> ActionKind {
    ActionKind::Union { parts }
}

type Row = (GroupFamily, ActionKind, OmegaKind, Profile);

/// The standard table. Seeds index it modulo its length.
fn table() -> Vec<Row> {
    use ActionKind::{Natural, Regular};
    use OmegaKind::{Group, Point, Product, SelfSpace};
    let dense = Profile { sparsity: 0, ..Profile::default() };
    let sparse = Profile::default();
    let null = Profile { null_orbit: true, ..Profile::default() };
    let omegas = [SelfSpace, Point, Group, Product { marks: 2 }];

    let mut rows: Vec<Row> = vec![
        (cyclic(3), Natural, SelfSpace, dense),
        // rotation r and reflection s: G/⟨s⟩ ⊔ G/⟨r²⟩
        (dihedral(4), union(vec![coset(&[&[1]]), coset(&[&[0, 0]])]), SelfSpace, sparse),
        (GroupFamily::Trivial { degree: 3 }, Natural, SelfSpace, sparse),
    ];
    for n in 2..=12 {
        let omega = omegas[n % omegas.len()];
        let profile = if matches!(omega, Product { .. }) { null } else { sparse };
        rows.push((cyclic(n), Natural, omega, profile));
    }
    for n in 3..=6 {
        rows.push((dihedral(n), Natural, SelfSpace, sparse));
        rows.push((dihedral(n), coset(&[&[1]]), Group, dense));
        rows.push((dihedral(n), union(vec![Natural, coset(&[&[0]])]), SelfSpace, null));
        rows.push((dihedral(n), Natural, Product { marks: 2 }, null));
    }
    let s3 = GroupFamily::Symmetric { n: 3 };
    let s4 = GroupFamily::Symmetric { n: 4 };
    rows.extend([
        (s3.clone(), Natural, Point, sparse),
        (s3.clone(), Regular, SelfSpace, sparse),
        (s3.clone(), union(vec![Natural, coset(&[&[0]]), coset(&[&[1]])]), SelfSpace, null),
        (s3.clone(), coset(&[&[0]]), Product { marks: 3 }, null),
        (s4.clone(), Natural, SelfSpace, sparse),
        (s4.clone(), Natural, Group, dense),
        (s4.clone(), coset(&[&[0]]), Point, sparse),
        (s4.clone(), union(vec![Natural, coset(&[&[1]])]), SelfSpace, null),
        (GroupFamily::Alternating4, Natural, SelfSpace, sparse),
        (GroupFamily::Alternating4, Natural, Group, dense),
        (GroupFamily::Alternating4, coset(&[&[0]]), Product { marks: 2 }, null),
        (GroupFamily::Alternating4, union(vec![Natural, coset(&[&[0, 1]])]), SelfSpace, null),
        (GroupFamily::Klein4, Natural, SelfSpace, null),
        (GroupFamily::Klein4, Regular, Group, dense),
        (GroupFamily::Klein4, union(vec![coset(&[&[0]]), coset(&[&[1]]), coset(&[&[0, 1]])]), SelfSpace, null),
        (GroupFamily::Quaternion, Natural, SelfSpace, sparse),
        (GroupFamily::Quaternion, coset(&[&[0]]), Group, dense),
        (GroupFamily::Quaternion, union(vec![Natural, coset(&[&[0, 0]])]), SelfSpace, null),
        (GroupFamily::Quaternion, coset(&[&[0, 0]]), Product { marks: 2 }, null),
    ]);
    let c2c3 = GroupFamily::Product { left: Box::new(cyclic(2)), right: Box::new(cyclic(3)) };
    rows.extend([
        (c2c3.clone(), Natural, SelfSpace, null),
        (c2c3, Regular, Point, sparse),
        (GroupFamily::Product { left: Box::new(cyclic(3)), right: Box::new(cyclic(3)) }, Natural, Group, sparse),
        (GroupFamily::Trivial { degree: 4 }, Natural, Point, dense),
        (GroupFamily::Trivial { degree: 2 }, Natural, Product { marks: 3 }, null),
    ]);
    for n in [4, 5, 6, 8] {
        rows.push((cyclic(n), union(vec![Natural, coset(&[&[0, 0]])]), SelfSpace, null));
    }
    for n in [6, 8, 12] {
        rows.push((cyclic(n), union(vec![coset(&[&[0, 0]]), coset(&[&[0, 0, 0]]), Natural]), Point, sparse));
    }
    rows.extend([
        (cyclic(10), Regular, SelfSpace, sparse),
        (dihedral(3), Regular, Group, dense),
        (GroupFamily::Symmetric { n: 3 }, Natural, Group, dense),
        (cyclic(5), union(vec![Natural, Natural]), Product { marks: 2 }, null),
        (cyclic(7), union(vec![Natural, Regular]), SelfSpace, null),
    ]);
    rows.push((dihedral(4), Regular, SelfSpace, sparse));
    rows.push((dihedral(5), union(vec![coset(&[&[1]]), coset(&[&[0]])]), Product { marks: 2 }, null));
    rows
}

pub fn standard_len() -> usize {
    table().len()
}

/// The standard spec for `seed`: row `seed mod len` of the table, with the
/// seed driving every random weight.
pub fn standard(seed: u64) -> InstanceSpec {
    let rows = table();
    let (group, action, omega, profile) = rows[(seed % rows.len() as u64) as usize].clone();
    InstanceSpec {
        name: format!("standard-{seed}"),
        seed,
        group,
        action,
        omega,
        profile,
        checks: default_checks(),
    }
}
