use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;
use polyball::components::{self, canonical_sign, Basis, ComponentSet, Verdict};
use polyball::polytope::{self, BallPolytope};
use polyball::ratlin::{rat, RatVec};
use polyball::{opspace, spaces};

fn v(x: &[(i64, i64)]) -> RatVec {
    RatVec::new(x.iter().map(|&(n, d)| rat(n, d)).collect())
}

fn iv(x: &[i64]) -> RatVec {
    RatVec::from_ints(x)
}

fn canon(list: &[RatVec]) -> BTreeSet<RatVec> {
    list.iter().map(canonical_sign).collect()
}

fn y2_closure() -> ComponentSet {
    ComponentSet::new(vec![
        iv(&[7, -5]),
        iv(&[-5, 6]),
        iv(&[0, 1]),
        v(&[(1, 2), (3, 2)]),
        v(&[(2, 3), (5, 3)]),
        iv(&[1, 2]),
    ])
    .unwrap()
}

fn y3() -> Basis {
    Basis::from_rows(vec![
        v(&[(3, 1), (0, 1), (1, 1), (5, 2)]),
        v(&[(2, 1), (5, 1), (0, 1), (4, 1)]),
        v(&[(1, 1), (1, 1), (5, 1), (7, 2)]),
    ])
    .unwrap()
}

#[test]
fn y2_closure_model() {
    let report = components::star_satisfiers(&y2_closure()).unwrap();
    let strict = canon(&report.strict_representatives());
    assert_eq!(strict, canon(&[iv(&[7, -5]), iv(&[-5, 6]), iv(&[1, 2])]));
    // The closure model has no weak-only classes: weak and strict coincide.
    assert_eq!(report.weak_count, 3);
    let ball = BallPolytope::from_components(y2_closure()).unwrap();
    assert_eq!(polytope::facet_count(&polytope::facet_classes(&ball).unwrap()), 6);
    assert_eq!(polytope::enumerate_vertices(&ball).len(), 6);
}

#[test]
fn y3_strict_classes_and_pairs() {
    let report = components::star_satisfiers(&components::components_of(&y3())).unwrap();
    assert_eq!(
        canon(&report.strict_representatives()),
        canon(&[iv(&[3, 2, 1]), iv(&[0, 5, 1]), iv(&[1, 0, 5]), v(&[(5, 2), (4, 1), (7, 2)])])
    );
    assert!(!spaces::decide_isometric_to_linfm(&y3()).unwrap());
    let rows = y3().vectors().rows().to_vec();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let pair = Basis::from_rows(vec![rows[i].clone(), rows[j].clone()]).unwrap();
        let r = components::star_satisfiers(&components::components_of(&pair)).unwrap().strict_count;
        assert_eq!(r, 3, "pair ({i},{j})");
    }
}

#[test]
fn weak_vs_strict_divergence() {
    let basis = Basis::from_ints(&[&[1, 1, 1], &[0, 1, -1]]).unwrap();
    let cs = components::components_of(&basis);
    assert_eq!(cs.components(), &[iv(&[1, 0]), iv(&[1, 1]), iv(&[1, -1])]);
    let report = components::star_satisfiers(&cs).unwrap();
    let c = report.classes.iter().find(|c| c.class.representative == iv(&[1, 0])).unwrap();
    assert_eq!(c.verdict, Verdict::WeakOnly);
    assert!(c.certificate.as_ref().unwrap().margin.is_zero());
    let weak = components::weak_star_satisfiers(&cs).unwrap();
    assert_eq!(weak.weak_count, 3);
}

#[test]
fn lastex_direct_sum_products() {
    let a = Basis::from_ints(&[&[1, 0, 1, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]]).unwrap();
    let va = polytope::enumerate_vertices(&polytope::unit_ball_hrep(&a));
    assert_eq!(va.len(), 12);
    let sum = spaces::direct_sum_power(&a, 2).unwrap();
    let vsum = polytope::enumerate_vertices(&polytope::unit_ball_hrep(&sum));
    let product = spaces::direct_sum_extremes(&[va.clone(), va], true);
    assert_eq!(product.count, BigUint::from(144u32));
    assert_eq!(product.vertices.unwrap(), vsum.betas());
}

#[test]
fn opspace_matches_direct_sum_enumeration() {
    let ext = opspace::validate_extreme_set(vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[1, 1])]).unwrap();
    let w = opspace::operator_space_basis(&ext);
    for n in 1..=2 {
        let rep = opspace::analyze_operator_space(&ext, n).unwrap();
        let sum = spaces::direct_sum_power(&w, n).unwrap();
        let count = polytope::enumerate_vertices(&polytope::unit_ball_hrep(&sum)).len();
        assert_eq!(rep.extreme_contractions, BigUint::from(count));
    }
}
