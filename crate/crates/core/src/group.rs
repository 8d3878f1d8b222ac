//! Finite permutation groups, fully enumerated, with counting Haar measure.
//!
//! Composition convention: `compose(g, h)` is "first `h`, then `g`", i.e.
//! `compose(g, h).image(i) == g.image(h.image(i))`. With this convention the
//! natural action `g·i = g.image(i)` satisfies `g·(h·i) = (gh)·i`, and every
//! other module relies on it.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::report::{Cells, CheckReport};

/// Default cap on the order of an enumerated group (the order of A8).
pub const DEFAULT_GROUP_CAP: usize = 20160;

/// Groups up to this order get a precomputed multiplication table.
const MUL_TABLE_MAX: usize = 1024;

/// A permutation of `{0..n-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection of 0..{n}")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n).collect() }
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &i) in c.iter().enumerate() {
                let j = c[(k + 1) % c.len()];
                if i >= n || j >= n {
                    return Err(Error::InvalidPermutation(format!("cycle {c:?} exceeds degree {n}")));
                }
                images[i] = j;
            }
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// "First `h`, then `self`".
    pub fn compose(&self, h: &Perm) -> Result<Perm> {
        if self.degree() != h.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: h.degree() });
        }
        Ok(Perm { images: h.images.iter().map(|&i| self.images[i]).collect() })
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Perm { images: inv }
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Perm::new(v)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.images
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

pub fn compose(g: &Perm, h: &Perm) -> Result<Perm> {
    g.compose(h)
}

pub fn inverse(g: &Perm) -> Perm {
    g.inverse()
}

/// A finite permutation group with all elements enumerated.
///
/// Element 0 is always the identity. Element order is breadth-first from the
/// identity, left-multiplying by the generators in input order, so indices are
/// stable across runs.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    inverses: Vec<usize>,
    generator_indices: Vec<usize>,
    mul_table: Option<Vec<u32>>,
    label: String,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("label", &self.label)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .finish()
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

pub fn enumerate_group(degree: usize, generators: Vec<Perm>) -> Result<PermGroup> {
    PermGroup::enumerate(degree, generators, DEFAULT_GROUP_CAP)
}

impl PermGroup {
    /// Breadth-first closure of `generators`; fails once more than `cap`
    /// elements have been found.
    pub fn enumerate(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { left: degree, right: g.degree() });
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for a in &generators {
                let y = a.compose(&elements[x])?;
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        let inverses = elements.iter().map(|g| index[&g.inverse()]).collect();
        let generator_indices = generators.iter().map(|g| index[g]).collect();
        let mut group = PermGroup {
            degree,
            generators,
            elements,
            index,
            inverses,
            generator_indices,
            mul_table: None,
            label: String::new(),
        };
        if group.order() <= MUL_TABLE_MAX {
            let n = group.order();
            let mut table = Vec::with_capacity(n * n);
            for g in 0..n {
                for h in 0..n {
                    table.push(group.mul_slow(g, h) as u32);
                }
            }
            group.mul_table = Some(table);
        }
        Ok(group)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Element indices of the generators, in input order.
    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, g: usize) -> &Perm {
        &self.elements[g]
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// Index of `g h` ("first h, then g").
    pub fn mul(&self, g: usize, h: usize) -> usize {
        match &self.mul_table {
            Some(t) => t[g * self.order() + h] as usize,
            None => self.mul_slow(g, h),
        }
    }

    fn mul_slow(&self, g: usize, h: usize) -> usize {
        let p = self.elements[g].compose(&self.elements[h]).expect("equal degrees");
        self.index[&p]
    }

    /// Indices of the elements of the subgroup generated by `gens` (sorted).
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &a in gens {
                let y = self.mul(a, x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&g| seen[g]).collect()
    }

    /// The modular function, computed from counting measure via the right
    /// translation identity with `f = 1_{e}`:
    /// `Δ(h⁻¹) = Σ_g 1{gh = e} / Σ_g 1{g = e}`.
    pub fn modular(&self, h: usize) -> Rational {
        let hinv = self.inv(h);
        let right = (0..self.order()).filter(|&g| self.mul(g, hinv) == 0).count();
        int(right as i64)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|g| (0..self.order()).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    // -- standard families ------------------------------------------------

    pub fn trivial(degree: usize) -> Self {
        PermGroup::enumerate(degree, vec![], 1).expect("trivial group").with_label("1")
    }

    pub fn cyclic(n: usize) -> Self {
        let gen = Perm::new((0..n).map(|i| (i + 1) % n).collect()).expect("rotation");
        PermGroup::enumerate(n, vec![gen], DEFAULT_GROUP_CAP)
            .expect("cyclic group")
            .with_label(format!("C{n}"))
    }

    /// Symmetries of the `n`-gon, order `2n`.
    pub fn dihedral(n: usize) -> Self {
        let rot = Perm::new((0..n).map(|i| (i + 1) % n).collect()).expect("rotation");
        let refl = Perm::new((0..n).map(|i| (n - i) % n).collect()).expect("reflection");
        PermGroup::enumerate(n, vec![rot, refl], DEFAULT_GROUP_CAP)
            .expect("dihedral group")
            .with_label(format!("D{n}"))
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[&[0, 1]]).expect("transposition"));
            gens.push(Perm::new((0..n).map(|i| (i + 1) % n).collect()).expect("cycle"));
        }
        PermGroup::enumerate(n, gens, DEFAULT_GROUP_CAP)
            .expect("symmetric group")
            .with_label(format!("S{n}"))
    }

    /// Generated by the 3-cycles `(0 1 i)`.
    pub fn alternating(n: usize) -> Self {
        let gens = (2..n)
            .map(|i| Perm::from_cycles(n, &[&[0, 1, i]]).expect("3-cycle"))
            .collect();
        PermGroup::enumerate(n, gens, DEFAULT_GROUP_CAP)
            .expect("alternating group")
            .with_label(format!("A{n}"))
    }

    /// The quaternion group acting on itself by left multiplication.
    /// Points: 1, i, j, k, -1, -i, -j, -k.
    pub fn quaternion() -> Self {
        let left_i = Perm::new(vec![1, 4, 3, 6, 5, 0, 7, 2]).expect("left mult by i");
        let left_j = Perm::new(vec![2, 7, 4, 1, 6, 3, 0, 5]).expect("left mult by j");
        PermGroup::enumerate(8, vec![left_i, left_j], DEFAULT_GROUP_CAP)
            .expect("quaternion group")
            .with_label("Q8")
    }

    /// `A × B` acting on the disjoint union of the two point sets.
    pub fn direct_product(a: &PermGroup, b: &PermGroup) -> Self {
        let (na, nb) = (a.degree(), b.degree());
        let mut gens = Vec::new();
        for g in a.generators() {
            let mut im: Vec<usize> = g.images().to_vec();
            im.extend(na..na + nb);
            gens.push(Perm::new(im).expect("left factor"));
        }
        for g in b.generators() {
            let mut im: Vec<usize> = (0..na).collect();
            im.extend(g.images().iter().map(|&i| i + na));
            gens.push(Perm::new(im).expect("right factor"));
        }
        PermGroup::enumerate(na + nb, gens, DEFAULT_GROUP_CAP)
            .expect("direct product")
            .with_label(format!("{}x{}", a.label(), b.label()))
    }
}

/// Verifies left invariance of counting measure and the right-translation
/// identity `Σ_g f(gh) = Δ(h⁻¹) Σ_g f(g)`, for every `h` and every indicator
/// `f = 1_{x}`. Cells are `(side, h, x)` with side 0 = left, 1 = right.
pub fn check_haar_invariance(group: &PermGroup) -> CheckReport {
    let n = group.order();
    let mut lhs = Cells::<3>::new();
    let mut rhs = Cells::<3>::new();
    for h in 0..n {
        let delta_hinv = group.modular(group.inv(h));
        for g in 0..n {
            // Σ_g 1{hg = x} and Σ_g 1{gh = x}
            lhs.add([0, h, group.mul(h, g)], int(1));
            lhs.add([1, h, group.mul(g, h)], int(1));
            // Σ_g 1{g = x}, scaled by Δ(h⁻¹) on the right side
            rhs.add([0, h, g], int(1));
            rhs.add([1, h, g], delta_hinv.clone());
        }
    }
    let mut report = CheckReport::from_cells("group.haar_invariance", &lhs, &rhs, ["side", "h", "x"]);
    let non_unit = (0..n).filter(|&g| group.modular(g) != int(1)).count();
    if non_unit > 0 {
        report = report.with_note(format!("{non_unit} elements with modular value != 1"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Perm {
        Perm::new(v.to_vec()).unwrap()
    }

    #[test]
    fn empty_generating_set_gives_trivial_group() {
        let g = enumerate_group(3, vec![]).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn three_cycle_generates_c3() {
        let g = enumerate_group(3, vec![p(&[1, 2, 0])]).unwrap();
        assert_eq!(g.order(), 3);
        // BFS order: e, a, a²
        assert_eq!(g.element(1), &p(&[1, 2, 0]));
        assert_eq!(g.element(2), &p(&[2, 0, 1]));
    }

    #[test]
    fn transposition_and_cycle_generate_s3() {
        let g = enumerate_group(3, vec![p(&[1, 0, 2]), p(&[1, 2, 0])]).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn compose_and_inverse_conventions() {
        let e = Perm::identity(3);
        let g = p(&[1, 2, 0]);
        assert_eq!(compose(&e, &g).unwrap(), g);
        assert_eq!(inverse(&g), p(&[2, 0, 1]));
        assert!(compose(&p(&[1, 0, 2]), &p(&[1, 0, 2])).unwrap().is_identity());
        // first h then g
        let h = p(&[1, 0, 2]);
        let gh = compose(&g, &h).unwrap();
        for i in 0..3 {
            assert_eq!(gh.image(i), g.image(h.image(i)));
        }
    }

    #[test]
    fn degree_mismatch_and_invalid_perm() {
        assert!(matches!(
            compose(&Perm::identity(2), &Perm::identity(3)),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(matches!(Perm::new(vec![0, 0, 1]), Err(Error::InvalidPermutation(_))));
        assert!(matches!(Perm::new(vec![0, 3]), Err(Error::InvalidPermutation(_))));
        assert!(enumerate_group(3, vec![Perm::identity(2)]).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let s5 = PermGroup::symmetric(5);
        let r = PermGroup::enumerate(5, s5.generators().to_vec(), 100);
        assert_eq!(r.unwrap_err(), Error::GroupTooLarge { cap: 100 });
    }

    #[test]
    fn family_orders() {
        assert_eq!(PermGroup::cyclic(7).order(), 7);
        assert_eq!(PermGroup::dihedral(5).order(), 10);
        assert_eq!(PermGroup::symmetric(4).order(), 24);
        assert_eq!(PermGroup::alternating(4).order(), 12);
        let q8 = PermGroup::quaternion();
        assert_eq!(q8.order(), 8);
        assert!(!q8.is_abelian());
        // a single involution: -1
        let involutions = (1..8).filter(|&g| q8.mul(g, g) == 0).count();
        assert_eq!(involutions, 1);
        let klein = PermGroup::direct_product(&PermGroup::cyclic(2), &PermGroup::cyclic(2));
        assert_eq!(klein.order(), 4);
        assert!((1..4).all(|g| klein.mul(g, g) == 0));
    }

    #[test]
    fn mul_and_inverse_tables_agree_with_perms() {
        let g = PermGroup::dihedral(4);
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            for b in 0..g.order() {
                let p = g.element(a).compose(g.element(b)).unwrap();
                assert_eq!(g.index_of(&p), Some(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let gens = vec![p(&[1, 0, 2, 3]), p(&[1, 2, 3, 0])];
        let a = enumerate_group(4, gens.clone()).unwrap();
        let b = enumerate_group(4, gens).unwrap();
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn haar_invariance_on_small_groups() {
        for g in [PermGroup::trivial(2), PermGroup::symmetric(3), PermGroup::cyclic(4)] {
            let r = check_haar_invariance(&g);
            assert!(r.is_pass(), "{}", r.summary_line());
            assert!(r.notes.is_empty());
            for h in 0..g.order() {
                assert_eq!(g.modular(h), int(1));
            }
        }
    }

    #[test]
    fn perm_serializes_as_array() {
        let js = serde_json::to_string(&p(&[2, 0, 1])).unwrap();
        assert_eq!(js, "[2,0,1]");
        assert!(serde_json::from_str::<Perm>("[0,0]").is_err());
    }
}
