use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::group::{Perm, PermGroup};
use crate::measure::{find_symmetric_sets, jointly_invariant_from_template};
use crate::report::Status;

fn c3() -> GroupAction {
    GroupAction::natural(Arc::new(PermGroup::cyclic(3)))
}

/// `C2` swapping 0 and 1 and fixing 2: orbits `{0,1}` and `{2}`.
fn c2_on_three() -> GroupAction {
    let g = PermGroup::enumerate(3, vec![Perm::new(vec![1, 0, 2]).unwrap()], 10).unwrap();
    GroupAction::natural(Arc::new(g))
}

fn d4_two_orbits() -> GroupAction {
    let group = Arc::new(PermGroup::dihedral(4));
    let natural = GroupAction::natural(group.clone());
    let reflection = group.generator_indices()[1];
    let coset = GroupAction::coset(group, &[reflection]);
    GroupAction::disjoint_union(&[natural, coset]).unwrap()
}

fn ones(n: usize) -> Vec<Rational> {
    vec![int(1); n]
}

fn table(n: usize, f: impl Fn(usize, usize) -> i64) -> InvariantBifunction {
    InvariantBifunction::new((0..n).map(|s| (0..n).map(|t| int(f(s, t))).collect()).collect()).unwrap()
}

fn assert_pass(r: &CheckReport) {
    assert!(r.is_pass(), "{}", r.summary_line());
}

fn sides(r: &CheckReport) -> (Rational, Rational) {
    (r.lhs.as_exact().unwrap().clone(), r.rhs.as_exact().unwrap().clone())
}

#[test]
fn orbit_balance_constant_function_on_a_transitive_action() {
    let a = c3();
    let r = check_orbit_balance(&a, &table(3, |_, _| 1));
    assert_pass(&r);
    assert_eq!(sides(&r), (int(3), int(3)));
}

#[test]
fn orbit_balance_for_the_successor_transport() {
    let a = c3();
    let r = check_orbit_balance(&a, &table(3, |s, t| i64::from(t == (s + 1) % 3)));
    assert_pass(&r);
    assert_eq!(sides(&r), (int(1), int(1)));
}

#[test]
fn orbit_balance_matches_group_sums_on_two_orbits() {
    let a = c2_on_three();
    let m = InvariantBifunction::orbit_indicator(&a, 0, 2);
    assert_pass(&check_orbit_balance(&a, &m));
    // For a finite group both sides are Σ_g m(b, g b') = Σ_g m(g b, b').
    for &b in &a.orbits().representatives {
        for &c in &a.orbits().representatives {
            let left: Rational = (0..2).map(|g| m.get(b, a.act(g, c)).clone()).sum();
            let right: Rational = (0..2).map(|g| m.get(a.act(g, b), c).clone()).sum();
            assert_eq!(left, right);
        }
    }
}

#[test]
fn non_invariant_bifunction_is_rejected() {
    let a = c3();
    let r = check_orbit_balance(&a, &table(3, |s, t| i64::from(s == 0 && t == 1)));
    assert_eq!(r.status, Status::PreconditionFailed);
}

#[test]
fn kernel_balance_of_product_kernels_and_perturbation() {
    let a = d4_two_orbits();
    let mu = a.mu(0);
    let nu = a.mu(4).plus(&a.mu(0));
    let gamma = DetKernel::constant(&nu);
    let delta = DetKernel::constant(&mu);
    assert_pass(&check_kernel_balance(&a, &mu, &gamma, &nu, &delta));
    let mut broken = delta.clone();
    for s in 0..a.points() {
        broken.at_mut(s).add(0, &int(1));
        broken.at_mut(s).add(1, &int(1));
        broken.at_mut(s).add(2, &int(1));
        broken.at_mut(s).add(3, &int(1));
    }
    assert_pass(&broken.check_invariance(&a));
    assert_eq!(check_kernel_balance(&a, &mu, &gamma, &nu, &broken).status, Status::Fail);
}

#[test]
fn detmtp_constant_kernels_on_a_transitive_action() {
    let a = c3();
    let mu = a.mu(0);
    let k = DetKernel::constant(&mu);
    let r = check_detmtp_rep(&a, &mu, &k, &mu, &k, &[table(3, |_, _| 1)]);
    assert_pass(&r);
    assert_eq!(sides(&r), (mu.total(), mu.total()));
    let succ = table(3, |s, t| i64::from(t == (s + 1) % 3));
    assert_pass(&check_detmtp_rep(&a, &mu, &k, &mu, &k, &[succ]));
}

#[test]
fn countable_mtp_examples() {
    let a = c2_on_three();
    let m = InvariantBifunction::orbit_indicator(&a, 0, 2);
    let r = check_countable_mtp(&a, &[m]);
    assert_pass(&r);
    // form 0: 2 = 2, form 1: 1 + 0 = 0 + 1/2 + 1/2.
    assert_eq!(sides(&r), (int(3), int(3)));

    let s3 = GroupAction::natural(Arc::new(PermGroup::symmetric(3)));
    let r = check_countable_mtp(&s3, &[table(3, |s, t| i64::from(s != t))]);
    assert_pass(&r);
    // form 0: 2·2 on each side; form 1: 2/2 on each side.
    assert_eq!(sides(&r), (int(5), int(5)));
}

#[test]
fn short_mtp_examples() {
    let a = c3();
    let m = jointly_invariant_from_template(&a, &[(0, 1, int(1))]).unwrap();
    let r = check_short_mtp(&a, &m, &ones(3), &ones(3));
    assert_pass(&r);
    assert_eq!(sides(&r), (int(3), int(3)));
    let diag = jointly_invariant_from_template(&a, &[(0, 0, int(2))]).unwrap();
    assert_pass(&check_short_mtp(&a, &diag, &ones(3), &ones(3)));
}

#[test]
fn mtp_on_sets_examples() {
    let a = c3();
    let m = jointly_invariant_from_template(&a, &[(0, 1, int(1))]).unwrap();
    let r = check_mtp_on_sets(&a, &m, &[0]);
    assert_pass(&r);
    // one unit out of and into {0} for each of the two forms
    assert_eq!(sides(&r), (int(2), int(2)));
    let full = check_mtp_on_sets(&a, &m, &[0, 1, 2]);
    assert_eq!(sides(&full), (m.total() * int(2), m.total() * int(2)));

    let b = d4_two_orbits();
    let cross = jointly_invariant_from_template(&b, &[(0, 5, int(1)), (4, 2, int(3))]).unwrap();
    let all: Vec<usize> = (0..b.points()).collect();
    assert_pass(&check_mtp_on_sets(&b, &cross, &all));
    let r = check_mtp_on_sets(&b, &cross, &[0]);
    assert_eq!(r.status, Status::PreconditionFailed);
    assert!(r.witness.unwrap().locator.contains_key("b1"));
}

#[test]
fn breaking_joint_invariance_is_detected() {
    let a = d4_two_orbits();
    let mut m = jointly_invariant_from_template(&a, &[(0, 4, int(1))]).unwrap();
    m.add(0, 4, &crate::rational::frac(-1, 2));
    m.add(0, 0, &crate::rational::frac(1, 2));
    let sets = find_symmetric_sets(&a, 20);
    assert!(sets.iter().all(|b| check_mtp_on_sets(&a, &m, b).status == Status::PreconditionFailed));
    assert_eq!(check_short_mtp(&a, &m, &ones(8), &ones(8)).status, Status::PreconditionFailed);
}

#[test]
fn finite_groups_have_trivial_modular_ratios_within_orbits() {
    let a = d4_two_orbits();
    let v: Vec<Rational> = (0..a.points()).map(|s| int(s as i64 + 1)).collect();
    let tilde = a.delta_tilde(&v);
    let dv = a.delta_v(&v);
    for s in 0..a.points() {
        for t in 0..a.points() {
            if a.beta(s) == a.beta(t) {
                assert_eq!(tilde[s][t], int(1));
                assert_eq!(dv[s][t], int(1));
            }
        }
    }
}

fn random_template(a: &GroupAction, raw: &[(usize, usize, i64)]) -> PairMeasure {
    let n = a.points();
    let t: Vec<_> = raw.iter().map(|&(s, u, w)| (s % n, u % n, int(w))).collect();
    jointly_invariant_from_template(a, &t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn deterministic_identities_hold_for_jointly_invariant_measures(
        raw in prop::collection::vec((0usize..8, 0usize..8, 1i64..5), 1..5),
        v_raw in prop::collection::vec(1i64..6, 8),
        w_raw in prop::collection::vec(0i64..6, 8),
    ) {
        let a = d4_two_orbits();
        let m = random_template(&a, &raw);
        let v: Vec<Rational> = v_raw.iter().map(|&x| int(x)).collect();
        // Rescale w per orbit so that μ_b w / μ_b v = 1.
        let w: Vec<Rational> = (0..8)
            .map(|s| {
                let b = a.beta(s);
                let raw_w: Vec<Rational> = w_raw.iter().map(|&x| int(x + 1)).collect();
                &raw_w[s] * a.mu_integral(b, &v) / a.mu_integral(b, &raw_w)
            })
            .collect();
        assert_pass(&check_short_mtp(&a, &m, &v, &w));
        assert_pass(&check_delta_star_identity(&a, &v, &w));
        let (mu, gamma, nu, delta) = DetKernel::disintegrate(&m);
        assert_pass(&check_kernel_balance(&a, &mu, &gamma, &nu, &delta));
        let ms = InvariantBifunction::orbit_indicators(&a);
        assert_pass(&check_detmtp_rep(&a, &mu, &gamma, &nu, &delta, &ms));
        assert_pass(&check_weighted_kernels(&a, &mu, &gamma, &nu, &delta, &v, &w, &ms));
        assert_pass(&check_countable_mtp(&a, &ms));
        for m_ind in &ms {
            assert_pass(&check_orbit_balance(&a, m_ind));
        }
        for set in find_symmetric_sets(&a, 10) {
            assert_pass(&check_mtp_on_sets(&a, &m, &set));
        }
    }
}
