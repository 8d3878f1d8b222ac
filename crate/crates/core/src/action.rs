//! Finite group actions: orbits, stabilizer cosets, the projection measures
//! `μ_s`, the disintegration kernel `κ`, and the transfer functions `Δ*`, `Δ̃`.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::measure::FiniteMeasure;
use crate::rational::{int, Rational};
use crate::report::{Cells, CheckReport, Tally};

/// Orbit partition with minimum-index representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    /// Orbit number of each point; orbits are numbered by their representative.
    pub orbit_id: Vec<usize>,
    /// The representatives, increasing. `representatives[i]` is the least point of orbit `i`.
    pub representatives: Vec<usize>,
    /// `beta[s]` is the representative of the orbit of `s`.
    pub beta: Vec<usize>,
    orbit_members: Vec<Vec<usize>>,
}

impl OrbitDecomposition {
    /// Points of the orbit containing `s`, increasing.
    pub fn members(&self, s: usize) -> &[usize] {
        &self.orbit_members[self.orbit_id[s]]
    }

    pub fn count(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_transitive(&self) -> bool {
        self.representatives.len() == 1
    }
}

/// An action of a [`PermGroup`] on the points `0..n`, stored as a table.
pub struct GroupAction {
    group: Arc<PermGroup>,
    points: usize,
    table: Vec<u32>,
    orbits: OrbitDecomposition,
    stabilizer_orders: Vec<usize>,
    cosets: Vec<OnceLock<Vec<Vec<usize>>>>,
    mu: Vec<OnceLock<FiniteMeasure>>,
}

impl std::fmt::Debug for GroupAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupAction")
            .field("group", &self.group)
            .field("points", &self.points)
            .field("orbits", &self.orbits.count())
            .finish()
    }
}

impl Clone for GroupAction {
    fn clone(&self) -> Self {
        GroupAction::build(self.group.clone(), self.points, self.table.clone())
    }
}

impl GroupAction {
    /// Validates an explicit table `table[g][s] = g·s`. The identity row must
    /// be the identity and `(ax)·s = a·(x·s)` must hold for every generator
    /// `a`; together these give the action law for all pairs.
    pub fn from_table(group: Arc<PermGroup>, points: usize, table: &[Vec<usize>]) -> Result<Self> {
        if table.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "table has {} rows, group has {} elements",
                table.len(),
                group.order()
            )));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != points {
                return Err(Error::InvalidAction(format!("row {g} has length {}, expected {points}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= points) {
                return Err(Error::InvalidAction(format!("row {g} maps to point {bad} outside 0..{points}")));
            }
        }
        if let Some(s) = (0..points).find(|&s| table[0][s] != s) {
            return Err(Error::InvalidAction(format!("identity moves point {s}")));
        }
        for &a in group.generator_indices() {
            for x in 0..group.order() {
                let ax = group.mul(a, x);
                for s in 0..points {
                    if table[ax][s] != table[a][table[x][s]] {
                        return Err(Error::InvalidAction(format!(
                            "action law fails for generator {a}, element {x}, point {s}"
                        )));
                    }
                }
            }
        }
        let flat = table.iter().flatten().map(|&t| t as u32).collect();
        Ok(GroupAction::build(group, points, flat))
    }

    /// The permutation action on `0..degree`.
    pub fn natural(group: Arc<PermGroup>) -> Self {
        let n = group.degree();
        let flat = group.elements().iter().flat_map(|p| p.images().iter().map(|&i| i as u32)).collect();
        GroupAction::build(group, n, flat)
    }

    /// Left multiplication on the left cosets `xH` of the subgroup generated
    /// by `subgroup_generators` (element indices). Cosets are numbered by
    /// their least element index.
    pub fn coset(group: Arc<PermGroup>, subgroup_generators: &[usize]) -> Self {
        let h = group.subgroup(subgroup_generators);
        let order = group.order();
        let mut coset_of = vec![usize::MAX; order];
        let mut reps = Vec::new();
        for x in 0..order {
            if coset_of[x] == usize::MAX {
                for &y in &h {
                    coset_of[group.mul(x, y)] = reps.len();
                }
                reps.push(x);
            }
        }
        let mut flat = Vec::with_capacity(order * reps.len());
        for g in 0..order {
            for &x in &reps {
                flat.push(coset_of[group.mul(g, x)] as u32);
            }
        }
        let n = reps.len();
        GroupAction::build(group, n, flat)
    }

    /// `G` acting on itself by left multiplication; point `x` is element `x`.
    pub fn regular(group: Arc<PermGroup>) -> Self {
        GroupAction::coset(group, &[])
    }

    /// Disjoint union of actions of one group; points are concatenated in order.
    pub fn disjoint_union(parts: &[GroupAction]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidAction("empty disjoint union".into()))?;
        let group = first.group.clone();
        if parts.iter().any(|p| *p.group != *group) {
            return Err(Error::InvalidAction("disjoint union of actions of different groups".into()));
        }
        let points: usize = parts.iter().map(|p| p.points).sum();
        let mut flat = Vec::with_capacity(group.order() * points);
        for g in 0..group.order() {
            let mut offset = 0;
            for p in parts {
                flat.extend((0..p.points).map(|s| (p.act(g, s) + offset) as u32));
                offset += p.points;
            }
        }
        Ok(GroupAction::build(group, points, flat))
    }

    fn build(group: Arc<PermGroup>, points: usize, table: Vec<u32>) -> Self {
        let mut orbit_id = vec![usize::MAX; points];
        let mut representatives = Vec::new();
        let mut orbit_members = Vec::new();
        for s in 0..points {
            if orbit_id[s] != usize::MAX {
                continue;
            }
            let id = representatives.len();
            orbit_id[s] = id;
            let mut members = vec![s];
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for &a in group.generator_indices() {
                    let y = table[a * points + x] as usize;
                    if orbit_id[y] == usize::MAX {
                        orbit_id[y] = id;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            representatives.push(s);
            orbit_members.push(members);
        }
        let beta = orbit_id.iter().map(|&o| representatives[o]).collect();
        let stabilizer_orders = orbit_id.iter().map(|&o| group.order() / orbit_members[o].len()).collect();
        GroupAction {
            group,
            points,
            table,
            orbits: OrbitDecomposition { orbit_id, representatives, beta, orbit_members },
            stabilizer_orders,
            cosets: (0..points).map(|_| OnceLock::new()).collect(),
            mu: (0..points).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// `g·s` for element index `g`.
    pub fn act(&self, g: usize, s: usize) -> usize {
        self.table[g * self.points + s] as usize
    }

    /// The table as rows, `table()[g][s] = g·s`.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.group.order()).map(|g| (0..self.points).map(|s| self.act(g, s)).collect()).collect()
    }

    pub fn orbits(&self) -> &OrbitDecomposition {
        &self.orbits
    }

    pub fn beta(&self, s: usize) -> usize {
        self.orbits.beta[s]
    }

    /// `|G_{s,s}|`.
    pub fn stabilizer_order(&self, s: usize) -> usize {
        self.stabilizer_orders[s]
    }

    /// `G_{s,t} = {g : gs = t}`, increasing; empty iff `t ∉ Gs`.
    pub fn stabilizer_coset(&self, s: usize, t: usize) -> &[usize] {
        let by_target = self.cosets[s].get_or_init(|| {
            let mut v = vec![Vec::new(); self.points];
            for g in 0..self.group.order() {
                v[self.act(g, s)].push(g);
            }
            v
        });
        &by_target[t]
    }

    /// Some element of `G_{s,t}`, if any.
    pub fn transporter(&self, s: usize, t: usize) -> Option<usize> {
        self.stabilizer_coset(s, t).first().copied()
    }

    /// `μ_s = λ∘π_s⁻¹`, the image of counting measure under `g ↦ gs`.
    pub fn mu(&self, s: usize) -> FiniteMeasure {
        self.mu_ref(s).clone()
    }

    fn mu_ref(&self, s: usize) -> &FiniteMeasure {
        self.mu[s].get_or_init(|| {
            let mut m = FiniteMeasure::zero(self.points);
            let one = Rational::one();
            for g in 0..self.group.order() {
                m.add(self.act(g, s), &one);
            }
            m
        })
    }

    /// `μ_s(f)`.
    pub fn mu_integral(&self, s: usize, f: &[Rational]) -> Rational {
        self.mu_ref(s).integrate(f)
    }

    /// The default properness witness `k ≡ 1`. Any strictly positive `k`
    /// works on a finite set.
    pub fn properness_witness(&self) -> Vec<Rational> {
        vec![Rational::one(); self.points]
    }

    /// `φ_s = μ_s / μ_s(k)`.
    pub fn phi(&self, s: usize, k: &[Rational]) -> FiniteMeasure {
        let c = self.mu_integral(s, k);
        self.mu_ref(s).scaled(&(Rational::one() / c))
    }

    /// The kernel `κ`.
    ///
    /// In a finite action, the disintegration identity applied to
    /// `f = 1{(t, h)}` reads `1{hs = t} = |G_{s,s}| κ_{s,t}({h})`, so on orbits
    /// `κ_{s,t}` must be uniform on `G_{s,t}`. Off the orbit of `s` it is the
    /// zero measure.
    pub fn kappa(&self) -> PointKernel<'_> {
        PointKernel { action: self }
    }

    /// `Δ*(s) = |G_{s,s}| / |G_{β(s),β(s)}|`.
    pub fn delta_star(&self, s: usize) -> Rational {
        Rational::new(self.stabilizer_order(s).into(), self.stabilizer_order(self.beta(s)).into())
    }

    /// The three expressions for `Δ*(s)`: `Δ(g_s⁻¹)` with `g_s ∈ G_{β(s),s}`,
    /// the stabilizer order ratio, and `|G_{s,s}β(s)| / |G_{β(s),β(s)}s|`.
    pub fn delta_star_routes(&self, s: usize) -> [Rational; 3] {
        let b = self.beta(s);
        let g = self.transporter(b, s).expect("s lies in the orbit of its representative");
        let via_modular = self.group.modular(self.group.inv(g));
        let stab_orbit_size = |x: usize, y: usize| -> usize {
            self.stabilizer_coset(x, x).iter().map(|&h| self.act(h, y)).collect::<BTreeSet<_>>().len()
        };
        let via_orbits = Rational::new(stab_orbit_size(s, b).into(), stab_orbit_size(b, s).into());
        [via_modular, self.delta_star(s), via_orbits]
    }

    /// `Δ̃(s,t) = (μ_t k / μ_{β(t)} k)(μ_{β(s)} k / μ_s k)` as a table `[s][t]`.
    pub fn delta_tilde(&self, k: &[Rational]) -> Vec<Vec<Rational>> {
        let muk: Vec<Rational> = (0..self.points).map(|s| self.mu_integral(s, k)).collect();
        let star: Vec<Rational> = (0..self.points).map(|s| &muk[s] / &muk[self.beta(s)]).collect();
        (0..self.points).map(|s| (0..self.points).map(|t| &star[t] / &star[s]).collect()).collect()
    }

    /// `Δ_v(s,t) = μ_t v / μ_s v` as a table `[s][t]`.
    pub fn delta_v(&self, v: &[Rational]) -> Vec<Vec<Rational>> {
        let muv: Vec<Rational> = (0..self.points).map(|s| self.mu_integral(s, v)).collect();
        (0..self.points).map(|s| (0..self.points).map(|t| &muv[t] / &muv[s]).collect()).collect()
    }

    /// The weight `v(s) = k(s) / μ_{β(s)} k` for which `Δ_v = Δ̃`.
    pub fn orbit_normalized(&self, k: &[Rational]) -> Vec<Rational> {
        (0..self.points).map(|s| &k[s] / self.mu_integral(self.beta(s), k)).collect()
    }

    /// All pairs `(gs, gt)`, sorted and without repeats.
    pub fn diagonal_orbit(&self, s: usize, t: usize) -> Vec<(usize, usize)> {
        let set: BTreeSet<(usize, usize)> =
            (0..self.group.order()).map(|g| (self.act(g, s), self.act(g, t))).collect();
        set.into_iter().collect()
    }

    /// Diagonal orbits of `S×S` as an id per pair (`ids[s][t]`) plus the count.
    pub fn diagonal_orbit_ids(&self) -> (Vec<Vec<usize>>, usize) {
        let n = self.points;
        let mut ids = vec![vec![usize::MAX; n]; n];
        let mut count = 0;
        for s in 0..n {
            for t in 0..n {
                if ids[s][t] == usize::MAX {
                    for (a, b) in self.diagonal_orbit(s, t) {
                        ids[a][b] = count;
                    }
                    count += 1;
                }
            }
        }
        (ids, count)
    }
}

/// View of the disintegration kernel `κ_{s,t}`, a measure on element indices.
#[derive(Clone, Copy)]
pub struct PointKernel<'a> {
    action: &'a GroupAction,
}

impl<'a> PointKernel<'a> {
    /// Elements carrying mass in `κ_{s,t}` (that is, `G_{s,t}`).
    pub fn support(&self, s: usize, t: usize) -> &'a [usize] {
        self.action.stabilizer_coset(s, t)
    }

    /// The common atom weight of `κ_{s,t}`: `1/|G_{s,s}|`.
    pub fn atom(&self, s: usize) -> Rational {
        Rational::new(1.into(), self.action.stabilizer_order(s).into())
    }

    pub fn weight(&self, s: usize, t: usize, g: usize) -> Rational {
        if self.action.act(g, s) == t {
            self.atom(s)
        } else {
            Rational::zero()
        }
    }

    /// `κ_{s,t}` as `(element, weight)` pairs.
    pub fn measure(&self, s: usize, t: usize) -> Vec<(usize, Rational)> {
        let w = self.atom(s);
        self.support(s, t).iter().map(|&g| (g, w.clone())).collect()
    }
}

/// `Σ_g f(gs, g) = Σ_t μ_s({t}) Σ_g κ_{s,t}({g}) f(t, g)` for every `s` and
/// every indicator `f = 1{(t, g)}`. Cells are `(s, t, g)`.
pub fn check_disintegration(action: &GroupAction) -> CheckReport {
    let kappa = action.kappa();
    let mut lhs = Cells::<3>::new();
    let mut rhs = Cells::<3>::new();
    for s in 0..action.points() {
        for g in 0..action.group().order() {
            lhs.add([s, action.act(g, s), g], int(1));
        }
        let mu = action.mu(s);
        for (t, m) in mu.support() {
            for (g, w) in kappa.measure(s, t) {
                rhs.add([s, t, g], m * w);
            }
        }
    }
    CheckReport::from_cells("action.disintegration", &lhs, &rhs, ["s", "t", "g"])
}

/// Kernel properties: (i) `κ_{s,gt}({h}) = κ_{s,t}({g⁻¹h})`, (ii) `κ_{s,t}`
/// is carried by `G_{s,t}`, (iii) `κ_{s,t}` has mass 1 on the orbit and 0 off it.
pub fn check_kernel_properties(action: &GroupAction) -> CheckReport {
    let group = action.group();
    let kappa = action.kappa();
    let n = action.points();
    let mut t = Tally::new();
    for s in 0..n {
        let orbit = action.orbits().members(s);
        for u in 0..n {
            let measure = kappa.measure(s, u);
            let mass = measure.iter().fold(Rational::zero(), |a, (_, w)| a + w);
            let expected = if orbit.contains(&u) { int(1) } else { int(0) };
            t.compare(&[("property", 3), ("s", s), ("t", u)], &mass, &expected);
            for (g, w) in &measure {
                if action.act(*g, s) != u {
                    t.violation(&[("property", 2), ("s", s), ("t", u), ("g", *g)], w.clone(), "mass outside G_{s,t}");
                }
            }
            if measure.is_empty() {
                continue;
            }
            for g in 0..group.order() {
                let gu = action.act(g, u);
                // (κ_{s,u} pushed forward by h ↦ gh) against κ_{s,gu}
                for (h, w) in &measure {
                    let gh = group.mul(g, *h);
                    t.compare(&[("property", 1), ("s", s), ("t", u), ("g", g), ("h", gh)], &kappa.weight(s, gu, gh), w);
                }
            }
        }
    }
    t.finish("action.kernel_properties")
}

/// `μ_{gs} = Δ(g⁻¹) μ_s` for all `g, s`, cells `(g, s, t)`.
pub fn check_projection_transform(action: &GroupAction) -> CheckReport {
    let group = action.group();
    let mut lhs = Cells::<3>::new();
    let mut rhs = Cells::<3>::new();
    for g in 0..group.order() {
        let d = group.modular(group.inv(g));
        for s in 0..action.points() {
            for (t, w) in action.mu(action.act(g, s)).support() {
                lhs.add([g, s, t], w.clone());
            }
            for (t, w) in action.mu(s).support() {
                rhs.add([g, s, t], w * &d);
            }
        }
    }
    CheckReport::from_cells("action.projection_transform", &lhs, &rhs, ["g", "s", "t"])
}

/// `φ_{gs} = φ_s` for all generators `g` and points `s`, and `φ_s(k) = 1`.
pub fn check_phi_invariance(action: &GroupAction, k: &[Rational]) -> CheckReport {
    let mut t = Tally::new();
    for s in 0..action.points() {
        let phi = action.phi(s, k);
        t.compare(&[("s", s)], &phi.integrate(k), &int(1));
        for &g in action.group().generator_indices() {
            let moved = action.phi(action.act(g, s), k);
            for u in 0..action.points() {
                t.compare(&[("g", g), ("s", s), ("t", u)], moved.get(u), phi.get(u));
            }
        }
    }
    t.finish("action.phi_invariance")
}

/// The three expressions for `Δ*` agree at every point.
pub fn check_delta_star(action: &GroupAction) -> CheckReport {
    let mut t = Tally::new();
    for s in 0..action.points() {
        let [a, b, c] = action.delta_star_routes(s);
        t.compare(&[("s", s), ("route", 1)], &b, &a);
        t.compare(&[("s", s), ("route", 2)], &c, &a);
    }
    t.finish("action.delta_star_routes")
}

/// Structural facts about `Δ̃`: `Δ̃(s, gs) = Δ(g⁻¹)`, `Δ̃(s,s) = 1`,
/// `Δ̃(s,t) Δ̃(t,s) = 1`, and `Δ̃ = Δ_v` for `v = k / μ_β k`.
pub fn check_delta_tilde(action: &GroupAction, k: &[Rational]) -> CheckReport {
    let group = action.group();
    let dt = action.delta_tilde(k);
    let dv = action.delta_v(&action.orbit_normalized(k));
    let one = int(1);
    let mut t = Tally::new();
    for s in 0..action.points() {
        t.compare(&[("s", s), ("t", s), ("form", 0)], &dt[s][s], &one);
        for g in 0..group.order() {
            let gs = action.act(g, s);
            t.compare(&[("s", s), ("g", g), ("form", 1)], &dt[s][gs], &group.modular(group.inv(g)));
        }
        for u in 0..action.points() {
            t.compare(&[("s", s), ("t", u), ("form", 2)], &(&dt[s][u] * &dt[u][s]), &one);
            t.compare(&[("s", s), ("t", u), ("form", 3)], &dt[s][u], &dv[s][u]);
        }
    }
    t.finish("action.delta_tilde")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Perm;

    fn c2_on_three() -> GroupAction {
        let g = PermGroup::enumerate(3, vec![Perm::new(vec![1, 0, 2]).unwrap()], 100).unwrap();
        GroupAction::natural(Arc::new(g))
    }

    #[test]
    fn orbit_examples() {
        let trivial = GroupAction::natural(Arc::new(PermGroup::trivial(3)));
        assert_eq!(trivial.orbits().representatives, vec![0, 1, 2]);
        assert_eq!(trivial.orbits().beta, vec![0, 1, 2]);

        let c3 = GroupAction::natural(Arc::new(PermGroup::cyclic(3)));
        assert_eq!(c3.orbits().beta, vec![0, 0, 0]);
        assert!(c3.orbits().is_transitive());

        let c2 = c2_on_three();
        assert_eq!(c2.orbits().representatives, vec![0, 2]);
        assert_eq!(c2.beta(1), 0);
        assert_eq!(c2.beta(2), 2);
        assert_eq!(c2.orbits().members(1), &[0, 1]);
    }

    #[test]
    fn coset_examples() {
        let trivial = GroupAction::natural(Arc::new(PermGroup::trivial(3)));
        assert_eq!(trivial.stabilizer_coset(1, 1), &[0]);
        let s3 = GroupAction::natural(Arc::new(PermGroup::symmetric(3)));
        let coset = s3.stabilizer_coset(0, 1);
        assert_eq!(coset.len(), 2);
        assert!(coset.iter().all(|&g| s3.act(g, 0) == 1));
        assert!(c2_on_three().stabilizer_coset(2, 0).is_empty());
    }

    #[test]
    fn mu_examples() {
        let trivial = GroupAction::natural(Arc::new(PermGroup::trivial(3)));
        assert_eq!(trivial.mu(1), FiniteMeasure::dirac(3, 1));
        let s3 = GroupAction::natural(Arc::new(PermGroup::symmetric(3)));
        assert!((0..3).all(|t| s3.mu(0).get(t) == &int(2)));
        let c2 = c2_on_three();
        assert_eq!(c2.mu(2), FiniteMeasure::dirac(3, 2).scaled(&int(2)));
        assert_eq!(c2.mu(0).total(), int(2));
    }

    #[test]
    fn phi_examples() {
        let c2 = c2_on_three();
        let k = c2.properness_witness();
        assert_eq!(c2.mu_integral(0, &k), int(2));
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(c2.phi(0, &k).weights(), &[half.clone(), half, int(0)]);
        assert_eq!(c2.phi(2, &k), FiniteMeasure::dirac(3, 2));
        let s3 = GroupAction::natural(Arc::new(PermGroup::symmetric(3)));
        let third = Rational::new(1.into(), 3.into());
        assert!(s3.phi(0, &k).weights().iter().all(|w| *w == third));
    }

    #[test]
    fn kappa_examples() {
        let trivial = GroupAction::natural(Arc::new(PermGroup::trivial(3)));
        let k = trivial.kappa();
        for s in 0..3 {
            for t in 0..3 {
                let expected = if s == t { vec![(0, int(1))] } else { vec![] };
                assert_eq!(k.measure(s, t), expected);
            }
        }
        // C5 on itself: κ_{s,t} is the point mass at t·s⁻¹
        let g = Arc::new(PermGroup::cyclic(5));
        let reg = GroupAction::regular(g.clone());
        for s in 0..5 {
            for t in 0..5 {
                assert_eq!(reg.kappa().measure(s, t), vec![(g.mul(t, g.inv(s)), int(1))]);
            }
        }
        let s3 = GroupAction::natural(Arc::new(PermGroup::symmetric(3)));
        let m = s3.kappa().measure(0, 1);
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|(_, w)| *w == Rational::new(1.into(), 2.into())));
    }

    #[test]
    fn delta_functions_are_trivial_for_finite_groups() {
        let c2 = c2_on_three();
        for s in 0..3 {
            assert_eq!(c2.delta_star_routes(s), [int(1), int(1), int(1)]);
        }
        let k = vec![int(3), Rational::new(1.into(), 2.into()), int(7)];
        let dt = c2.delta_tilde(&k);
        assert!(dt.iter().flatten().all(|x| *x == int(1)));
        assert!(check_delta_tilde(&c2, &k).is_pass());
    }

    #[test]
    fn structural_checks_pass() {
        let g = Arc::new(PermGroup::dihedral(4));
        let h = vec![g.generator_indices()[1]];
        let a = GroupAction::disjoint_union(&[GroupAction::natural(g.clone()), GroupAction::coset(g.clone(), &h)])
            .unwrap();
        let k: Vec<Rational> = (0..a.points()).map(|s| int(s as i64 + 1)).collect();
        for r in [
            check_disintegration(&a),
            check_kernel_properties(&a),
            check_projection_transform(&a),
            check_phi_invariance(&a, &k),
            check_delta_star(&a),
            check_delta_tilde(&a, &k),
        ] {
            assert!(r.is_pass(), "{}", r.summary_line());
        }
    }

    #[test]
    fn from_table_rejects_bad_tables() {
        let g = Arc::new(PermGroup::cyclic(3));
        let good = GroupAction::natural(g.clone()).table();
        assert!(GroupAction::from_table(g.clone(), 3, &good).is_ok());
        let mut bad = good.clone();
        bad[1].swap(0, 1);
        assert!(matches!(GroupAction::from_table(g.clone(), 3, &bad), Err(Error::InvalidAction(_))));
        let mut bad_id = good;
        bad_id[0] = vec![1, 2, 0];
        assert!(GroupAction::from_table(g, 3, &bad_id).is_err());
    }

    #[test]
    fn coset_action_sizes() {
        let g = Arc::new(PermGroup::symmetric(4));
        let h = g.generator_indices()[0..1].to_vec();
        let a = GroupAction::coset(g, &h);
        assert_eq!(a.points(), 12);
        assert!(a.orbits().is_transitive());
        assert_eq!(a.stabilizer_order(5), 2);
    }
}
