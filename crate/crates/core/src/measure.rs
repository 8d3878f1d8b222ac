//! Exact measures on `S` and `S×S`, invariance tests, the orbit (cone)
//! representation of invariant measures, and symmetric sets.

use std::collections::BTreeMap;

use itertools::Itertools;
use num::{Signed, Zero};

use crate::action::GroupAction;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::report::{CheckReport, Tally, Witness};

/// Nonnegative rational weights on the points `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMeasure {
    weights: Vec<Rational>,
}

impl FiniteMeasure {
    pub fn zero(n: usize) -> Self {
        FiniteMeasure { weights: vec![Rational::zero(); n] }
    }

    pub fn dirac(n: usize, s: usize) -> Self {
        let mut m = FiniteMeasure::zero(n);
        m.weights[s] = int(1);
        m
    }

    pub fn from_weights(weights: Vec<Rational>) -> Result<Self> {
        if let Some((s, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidMeasure(format!("negative weight {w} at point {s}")));
        }
        Ok(FiniteMeasure { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, s: usize) -> &Rational {
        &self.weights[s]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Adds `w` to the mass of `{s}`. Callers keep weights nonnegative.
    pub fn add(&mut self, s: usize, w: &Rational) {
        self.weights[s] += w;
    }

    pub fn set(&mut self, s: usize, w: Rational) {
        self.weights[s] = w;
    }

    /// Nonzero atoms in point order.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Zero::is_zero)
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |a, w| a + w)
    }

    /// `∫ f dμ`.
    pub fn integrate(&self, f: &[Rational]) -> Rational {
        self.support().fold(Rational::zero(), |a, (s, w)| a + w * &f[s])
    }

    /// `μ(B)`.
    pub fn mass_of(&self, set: &[usize]) -> Rational {
        set.iter().fold(Rational::zero(), |a, &s| a + &self.weights[s])
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        FiniteMeasure { weights: self.weights.iter().map(|w| w * c).collect() }
    }

    pub fn plus(&self, other: &FiniteMeasure) -> Self {
        FiniteMeasure { weights: self.weights.iter().zip(&other.weights).map(|(a, b)| a + b).collect() }
    }
}

/// Nonnegative rational weights on `S×S`, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMeasure {
    n: usize,
    weights: Vec<Rational>,
}

impl PairMeasure {
    pub fn zero(n: usize) -> Self {
        PairMeasure { n, weights: vec![Rational::zero(); n * n] }
    }

    pub fn from_entries(n: usize, entries: &[(usize, usize, Rational)]) -> Result<Self> {
        let mut m = PairMeasure::zero(n);
        for (s, t, w) in entries {
            if *s >= n || *t >= n {
                return Err(Error::InvalidMeasure(format!("pair ({s},{t}) outside 0..{n}")));
            }
            if w.is_negative() {
                return Err(Error::InvalidMeasure(format!("negative weight {w} at ({s},{t})")));
            }
            m.add(*s, *t, w);
        }
        Ok(m)
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: usize, t: usize) -> &Rational {
        &self.weights[s * self.n + t]
    }

    pub fn add(&mut self, s: usize, t: usize, w: &Rational) {
        self.weights[s * self.n + t] += w;
    }

    pub fn set(&mut self, s: usize, t: usize, w: Rational) {
        self.weights[s * self.n + t] = w;
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        let n = self.n;
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(move |(i, w)| (i / n, i % n, w))
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Zero::is_zero)
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |a, w| a + w)
    }

    /// `M(· × S)`.
    pub fn first_marginal(&self) -> FiniteMeasure {
        let mut m = FiniteMeasure::zero(self.n);
        for (s, _, w) in self.support() {
            m.add(s, w);
        }
        m
    }

    /// `M(S × ·)`.
    pub fn second_marginal(&self) -> FiniteMeasure {
        let mut m = FiniteMeasure::zero(self.n);
        for (_, t, w) in self.support() {
            m.add(t, w);
        }
        m
    }

    pub fn product(a: &FiniteMeasure, b: &FiniteMeasure) -> Self {
        let mut m = PairMeasure::zero(a.len());
        for (s, x) in a.support() {
            for (t, y) in b.support() {
                m.set(s, t, x * y);
            }
        }
        m
    }
}

/// Weights on orbit representatives: the `ν*` of an invariant `ν`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrbitMeasure {
    pub weights: BTreeMap<usize, Rational>,
}

impl OrbitMeasure {
    pub fn get(&self, b: usize) -> Rational {
        self.weights.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.weights.values().all(Zero::is_zero)
    }
}

/// `ν∘θ_g = ν` on every generator, which is `ν({gs}) = ν({s})`.
pub fn is_invariant(action: &GroupAction, nu: &FiniteMeasure) -> CheckReport {
    let mut t = Tally::new();
    for &g in action.group().generator_indices() {
        for s in 0..action.points() {
            t.compare(&[("g", g), ("s", s)], nu.get(action.act(g, s)), nu.get(s));
        }
    }
    t.finish("measure.invariance")
}

/// `M∘(θ_g×θ_g) = M` on every generator.
pub fn is_jointly_invariant(action: &GroupAction, m: &PairMeasure) -> CheckReport {
    let mut t = Tally::new();
    for &g in action.group().generator_indices() {
        for s in 0..action.points() {
            for u in 0..action.points() {
                t.compare(
                    &[("g", g), ("s", s), ("t", u)],
                    m.get(action.act(g, s), action.act(g, u)),
                    m.get(s, u),
                );
            }
        }
    }
    t.finish("measure.joint_invariance")
}

/// `ν*({b}) = Σ_{β(s)=b} k(s) ν({s}) / μ_b(k)`, so that `ν = Σ_b ν*({b}) μ_b`.
pub fn invariant_cone_decompose(
    action: &GroupAction,
    nu: &FiniteMeasure,
    k: &[Rational],
) -> Result<OrbitMeasure> {
    let rep = is_invariant(action, nu);
    if !rep.is_pass() {
        return Err(Error::NotInvariant(rep.summary_line()));
    }
    Ok(orbit_weights(action, nu, k))
}

/// The decomposition formula without the invariance gate. For a non-invariant
/// `ν` the result does not compose back to `ν`.
pub fn orbit_weights(action: &GroupAction, nu: &FiniteMeasure, k: &[Rational]) -> OrbitMeasure {
    let orbits = action.orbits();
    let mut w = OrbitMeasure::default();
    for &b in &orbits.representatives {
        let mass: Rational = orbits
            .members(b)
            .iter()
            .fold(Rational::zero(), |a, &s| a + &k[s] * nu.get(s));
        w.weights.insert(b, mass / action.mu_integral(b, k));
    }
    w
}

/// `Σ_b w({b}) μ_b`.
pub fn invariant_cone_compose(action: &GroupAction, w: &OrbitMeasure) -> FiniteMeasure {
    let mut nu = FiniteMeasure::zero(action.points());
    for (&b, c) in &w.weights {
        if c.is_zero() {
            continue;
        }
        for (t, m) in action.mu(b).support() {
            nu.add(t, &(m * c));
        }
    }
    nu
}

/// Verifies both round trips of the orbit representation for an invariant `ν`:
/// compose(decompose(ν)) = ν and decompose(compose(ν*)) = ν*. Also checks
/// the kernel form `ν = ∫ φ_s k(s) ν(ds)`.
pub fn check_cone_round_trip(action: &GroupAction, nu: &FiniteMeasure, k: &[Rational]) -> CheckReport {
    const NAME: &str = "measure.orbit_representation";
    let star = match invariant_cone_decompose(action, nu, k) {
        Ok(w) => w,
        Err(e) => return CheckReport::precondition_failed(NAME, Witness::new(&[], e.to_string())),
    };
    let mut t = Tally::new();
    let back = invariant_cone_compose(action, &star);
    for s in 0..action.points() {
        t.compare(&[("form", 0), ("s", s)], back.get(s), nu.get(s));
    }
    let again = orbit_weights(action, &back, k);
    for &b in &action.orbits().representatives {
        t.compare(&[("form", 1), ("b", b)], &again.get(b), &star.get(b));
    }
    let mut via_phi = FiniteMeasure::zero(action.points());
    for (s, w) in nu.support() {
        let c = &k[s] * w;
        for (u, p) in action.phi(s, k).support() {
            via_phi.add(u, &(p * &c));
        }
    }
    for s in 0..action.points() {
        t.compare(&[("form", 2), ("s", s)], via_phi.get(s), nu.get(s));
    }
    t.finish(NAME)
}

/// Assigns weight `w` to every pair in the diagonal orbit of each template
/// pair `(s, t)`. Templates in the same diagonal orbit add up.
pub fn jointly_invariant_from_template(
    action: &GroupAction,
    template: &[(usize, usize, Rational)],
) -> Result<PairMeasure> {
    let n = action.points();
    let mut m = PairMeasure::zero(n);
    for (s, t, w) in template {
        if *s >= n || *t >= n {
            return Err(Error::InvalidMeasure(format!("template pair ({s},{t}) outside 0..{n}")));
        }
        if w.is_negative() {
            return Err(Error::InvalidMeasure(format!("negative template weight {w}")));
        }
        for (a, b) in action.diagonal_orbit(*s, *t) {
            m.add(a, b, w);
        }
    }
    Ok(m)
}

/// For each orbit, `μ_b(B) = |B ∩ Gb| · |G_{b,b}|`.
pub fn orbit_masses(action: &GroupAction, set: &[usize]) -> Vec<(usize, Rational)> {
    let orbits = action.orbits();
    let mut counts = vec![0usize; orbits.representatives.len()];
    for &s in set {
        counts[orbits.orbit_id[s]] += 1;
    }
    orbits
        .representatives
        .iter()
        .zip(counts)
        .map(|(&b, c)| (b, int((c * action.stabilizer_order(b)) as i64)))
        .collect()
}

/// `Ok(())` if `B` is symmetric; otherwise the first offending orbit pair
/// `(b, b')` with `μ_b(B) ≠ μ_{b'}(B)` (or `(b, b)` when `μ_b(B) = 0`).
pub fn symmetric_set_violation(action: &GroupAction, set: &[usize]) -> std::result::Result<(), (usize, usize)> {
    let masses = orbit_masses(action, set);
    let (b0, m0) = &masses[0];
    if m0.is_zero() {
        return Err((*b0, *b0));
    }
    for (b, m) in &masses[1..] {
        if m != m0 {
            return Err((*b0, *b));
        }
    }
    Ok(())
}

pub fn is_symmetric_set(action: &GroupAction, set: &[usize]) -> bool {
    !action.orbits().representatives.is_empty() && symmetric_set_violation(action, set).is_ok()
}

/// Symmetric sets by increasing size, at most `max_results` of them.
///
/// Rather than scanning subsets of `S`, this chooses a common orbit mass `K`
/// and then the per-orbit counts `c_b = K / |G_{b,b}|`, which must be
/// integers in `1..=|Gb|`. Within one `K` the subsets are listed as the
/// lexicographic product of per-orbit combinations.
pub fn find_symmetric_sets(action: &GroupAction, max_results: usize) -> Vec<Vec<usize>> {
    let orbits = action.orbits();
    let reps = &orbits.representatives;
    let mut out = Vec::new();
    if reps.is_empty() || max_results == 0 {
        return out;
    }
    let order = action.group().order();
    for mass in 1..=order {
        let mut counts = Vec::with_capacity(reps.len());
        for &b in reps {
            let z = action.stabilizer_order(b);
            if mass % z != 0 || mass / z > orbits.members(b).len() {
                break;
            }
            counts.push(mass / z);
        }
        if counts.len() != reps.len() {
            continue;
        }
        let per_orbit = reps
            .iter()
            .zip(&counts)
            .map(|(&b, &c)| orbits.members(b).iter().copied().combinations(c).collect::<Vec<_>>());
        for choice in per_orbit.multi_cartesian_product() {
            let mut set: Vec<usize> = choice.into_iter().flatten().collect();
            set.sort_unstable();
            out.push(set);
            if out.len() >= max_results {
                return out;
            }
        }
    }
    out
}

/// `μ_b(w) / μ_b(v)` is the same for every representative `b`.
pub fn check_balance(action: &GroupAction, v: &[Rational], w: &[Rational]) -> CheckReport {
    const NAME: &str = "measure.balance";
    let reps = &action.orbits().representatives;
    let mut ratios = Vec::with_capacity(reps.len());
    for &b in reps {
        let mv = action.mu_integral(b, v);
        if !mv.is_positive() {
            return CheckReport::precondition_failed(NAME, Witness::new(&[("b", b)], "mu_b(v) is not positive"));
        }
        ratios.push((b, action.mu_integral(b, w) / mv));
    }
    let mut t = Tally::new();
    if let Some((_, r0)) = ratios.first() {
        for (b, r) in &ratios {
            t.compare(&[("b", *b)], r, r0);
        }
    }
    t.finish(NAME)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Perm, PermGroup};
    use crate::rational::frac;
    use std::sync::Arc;

    fn c2_on_three() -> GroupAction {
        let g = PermGroup::enumerate(3, vec![Perm::new(vec![1, 0, 2]).unwrap()], 100).unwrap();
        GroupAction::natural(Arc::new(g))
    }

    fn c3() -> GroupAction {
        GroupAction::natural(Arc::new(PermGroup::cyclic(3)))
    }

    fn ones(n: usize) -> Vec<Rational> {
        vec![int(1); n]
    }

    #[test]
    fn projection_measures_and_zero_are_invariant() {
        let a = c2_on_three();
        for s in 0..3 {
            assert!(is_invariant(&a, &a.mu(s)).is_pass());
        }
        assert!(is_invariant(&a, &FiniteMeasure::zero(3)).is_pass());
    }

    #[test]
    fn dirac_is_not_invariant_under_c3() {
        let a = c3();
        let r = is_invariant(&a, &FiniteMeasure::dirac(3, 0));
        assert!(!r.is_pass());
        assert_eq!(r.witness.unwrap().locator["g"], a.group().generator_indices()[0]);
    }

    #[test]
    fn joint_invariance_examples() {
        let a = c3();
        let orbit = jointly_invariant_from_template(&a, &[(0, 1, int(1))]).unwrap();
        for (s, t) in [(0, 1), (1, 2), (2, 0)] {
            assert_eq!(orbit.get(s, t), &int(1));
        }
        assert_eq!(orbit.total(), int(3));
        assert!(is_jointly_invariant(&a, &orbit).is_pass());
        let single = PairMeasure::from_entries(3, &[(0, 1, int(1))]).unwrap();
        assert!(!is_jointly_invariant(&a, &single).is_pass());
        let mb = a.mu(0);
        assert!(is_jointly_invariant(&a, &PairMeasure::product(&mb, &mb)).is_pass());
        assert!(jointly_invariant_from_template(&a, &[]).unwrap().is_zero());

        let s3 = GroupAction::natural(Arc::new(PermGroup::symmetric(3)));
        let diag = jointly_invariant_from_template(&s3, &[(0, 0, int(1))]).unwrap();
        assert_eq!(diag.total(), int(3));
        assert!((0..3).all(|s| diag.get(s, s) == &int(1)));
    }

    #[test]
    fn cone_decomposition_examples() {
        let a = c2_on_three();
        let k = ones(3);
        let star = invariant_cone_decompose(&a, &a.mu(0), &k).unwrap();
        assert_eq!(star.get(0), int(1));
        assert_eq!(star.get(2), int(0));
        let sum = a.mu(0).plus(&a.mu(2));
        let star = invariant_cone_decompose(&a, &sum, &k).unwrap();
        assert_eq!((star.get(0), star.get(2)), (int(1), int(1)));
        assert!(invariant_cone_decompose(&a, &FiniteMeasure::zero(3), &k).unwrap().is_zero());
        assert!(matches!(
            invariant_cone_decompose(&a, &FiniteMeasure::dirac(3, 0), &k),
            Err(Error::NotInvariant(_))
        ));
        assert_eq!(invariant_cone_compose(&a, &star), sum);
    }

    #[test]
    fn decomposition_does_not_depend_on_k() {
        let a = c2_on_three();
        let nu = a.mu(0).scaled(&frac(3, 2)).plus(&a.mu(2).scaled(&frac(1, 4)));
        let k1 = ones(3);
        let k2 = vec![int(5), frac(1, 3), int(2)];
        assert_eq!(
            invariant_cone_decompose(&a, &nu, &k1).unwrap(),
            invariant_cone_decompose(&a, &nu, &k2).unwrap()
        );
        assert!(check_cone_round_trip(&a, &nu, &k2).is_pass());
    }

    #[test]
    fn symmetric_set_examples() {
        let a = c2_on_three();
        assert!(!is_symmetric_set(&a, &[0, 2]));
        assert!(is_symmetric_set(&a, &[0, 1, 2]));
        assert!(!is_symmetric_set(&a, &[]));
        assert_eq!(find_symmetric_sets(&a, 10), vec![vec![0, 1, 2]]);

        let t = c3();
        assert!(is_symmetric_set(&t, &[0]));
        let all = find_symmetric_sets(&t, 100);
        assert_eq!(all.len(), 7);
        assert_eq!(all[0], vec![0]);
        assert!(all.windows(2).all(|w| w[0].len() <= w[1].len()));
    }

    #[test]
    fn symmetric_search_matches_brute_force() {
        let g = Arc::new(PermGroup::dihedral(4));
        let h1 = vec![g.index_of(&Perm::new(vec![0, 3, 2, 1]).unwrap()).unwrap()];
        let a = GroupAction::disjoint_union(&[
            GroupAction::coset(g.clone(), &h1),
            GroupAction::coset(g.clone(), &[]),
        ])
        .unwrap();
        let n = a.points();
        assert!(n <= 16);
        let mut brute = Vec::new();
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if is_symmetric_set(&a, &set) {
                brute.push(set);
            }
        }
        let mut found = find_symmetric_sets(&a, usize::MAX);
        brute.sort();
        found.sort();
        assert_eq!(found, brute);
    }

    #[test]
    fn balance_examples() {
        let a = c2_on_three();
        let v = ones(3);
        assert!(check_balance(&a, &v, &v).is_pass());
        let w = vec![int(0), int(0), int(1)];
        assert!(!check_balance(&a, &v, &w).is_pass());
        let t = c3();
        assert!(check_balance(&t, &v, &[int(7), int(0), frac(1, 2)]).is_pass());
    }
}
