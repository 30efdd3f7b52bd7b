//! The simplex kernel against brute-force vertex enumeration of small bounded LPs.

use itertools::Itertools;
use num_traits::Zero;
use polyball::lp::{self, LinConstraint, LpOutcome};
use polyball::ratlin::{int, rat, RatMat, RatVec, Rational};
use proptest::prelude::*;

/// Maximum of `objective` over the vertices of a bounded polyhedron, found by solving
/// every `d`-subset of constraints as equalities. `None` when no vertex is feasible.
fn brute_force_max(objective: &RatVec, constraints: &[LinConstraint]) -> Option<Rational> {
    let d = objective.dim();
    (0..constraints.len())
        .combinations(d)
        .filter_map(|subset| {
            let m = RatMat::from_rows(subset.iter().map(|&i| constraints[i].normal.clone()).collect()).ok()?;
            let b = RatVec::new(subset.iter().map(|&i| constraints[i].bound.clone()).collect());
            m.solve_square(&b).ok().flatten()
        })
        .filter(|x| constraints.iter().all(|c| c.is_satisfied_by(x)))
        .map(|x| objective.dot(&x))
        .max()
}

fn boxed(d: usize, half_width: i64) -> Vec<LinConstraint> {
    (0..d)
        .flat_map(|j| {
            let e = RatVec::unit(d, j);
            [LinConstraint::new(e.clone(), int(half_width)), LinConstraint::new(-&e, int(half_width))]
        })
        .collect()
}

fn constraint_strategy(d: usize) -> impl Strategy<Value = LinConstraint> {
    (prop::collection::vec(-3i64..=3, d), -3i64..=5)
        .prop_map(|(normal, bound)| LinConstraint::new(RatVec::from_ints(&normal), int(bound)))
}

fn lp_strategy() -> impl Strategy<Value = (RatVec, Vec<LinConstraint>)> {
    (1usize..=3).prop_flat_map(|d| {
        (
            prop::collection::vec(-3i64..=3, d).prop_map(|c| RatVec::from_ints(&c)),
            prop::collection::vec(constraint_strategy(d), 0..6),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplex_matches_vertex_enumeration((objective, extra) in lp_strategy()) {
        let mut cons = boxed(objective.dim(), 4);
        cons.extend(extra);
        let out = lp::lp_optimize(&objective, &cons).unwrap();
        match (brute_force_max(&objective, &cons), &out) {
            (Some(best), LpOutcome::Optimal { value, point }) => {
                prop_assert_eq!(&best, value);
                prop_assert!(cons.iter().all(|c| c.is_satisfied_by(point)));
                prop_assert_eq!(&objective.dot(point), value);
            }
            (None, LpOutcome::Infeasible) => {}
            (expected, got) => prop_assert!(false, "oracle {:?} vs simplex {:?}", expected, got),
        }
    }
}

#[test]
fn beale_cycling_example_terminates() {
    // Cycles under the textbook largest-coefficient rule; Bland's rule must finish.
    let x = |e: &[(i64, i64)]| RatVec::new(e.iter().map(|&(n, d)| rat(n, d)).collect());
    let mut cons = vec![
        LinConstraint::new(x(&[(1, 4), (-8, 1), (-1, 1), (9, 1)]), int(0)),
        LinConstraint::new(x(&[(1, 2), (-12, 1), (-1, 2), (3, 1)]), int(0)),
        LinConstraint::new(x(&[(0, 1), (0, 1), (1, 1), (0, 1)]), int(1)),
    ];
    for j in 0..4 {
        cons.push(LinConstraint::new(-&RatVec::unit(4, j), Rational::zero()));
    }
    let objective = x(&[(3, 4), (-20, 1), (1, 2), (-6, 1)]);
    let out = lp::lp_optimize(&objective, &cons).unwrap();
    assert_eq!(out.value(), Some(&rat(5, 4)));
}

/// Margin LP for target (5/2, 5/2) against (3,2), (2,3), solved by enumeration.
#[test]
fn midpoint_margin_is_zero_by_enumeration() {
    let lift = |a: i64, b: i64, den: i64, t: i64| RatVec::new(vec![rat(a, den), rat(b, den), int(t)]);
    let mut cons = vec![
        LinConstraint::new(lift(5, 5, 2, 0), int(1)),
        LinConstraint::new(lift(-5, -5, 2, 0), int(-1)),
        LinConstraint::new(RatVec::from_ints(&[0, 0, -1]), int(0)),
        LinConstraint::new(RatVec::from_ints(&[0, 0, 1]), int(1)),
    ];
    for (a, b) in [(3, 2), (2, 3)] {
        cons.push(LinConstraint::new(lift(a, b, 1, 1), int(1)));
        cons.push(LinConstraint::new(lift(-a, -b, 1, 1), int(1)));
    }
    let t_axis = RatVec::unit(3, 2);
    assert_eq!(brute_force_max(&t_axis, &cons), Some(int(0)));
    let cert = lp::strict_margin(
        &RatVec::new(vec![rat(5, 2), rat(5, 2)]),
        &[RatVec::from_ints(&[3, 2]), RatVec::from_ints(&[2, 3])],
    )
    .unwrap()
    .unwrap();
    assert!(cert.margin.is_zero());
}

/// (0,1) = 5/16·(1,2) + 1/16·(−5,6) with weight 6/16 < 1, so no functional can
/// reach 1 on it while staying within 1 on the others.
#[test]
fn interior_point_not_weak() {
    let combo = RatVec::from_ints(&[1, 2]).scale(&rat(5, 16)).add(&RatVec::from_ints(&[-5, 6]).scale(&rat(1, 16)));
    assert_eq!(combo, RatVec::from_ints(&[0, 1]));
    assert!(rat(5, 16) + rat(1, 16) < int(1));
    let others = [RatVec::from_ints(&[1, 2]), RatVec::from_ints(&[-5, 6]), RatVec::from_ints(&[7, -5])];
    assert_eq!(lp::weak_feasible(&RatVec::from_ints(&[0, 1]), &others).unwrap(), None);
}
