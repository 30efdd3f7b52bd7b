//! Exact rational linear programming.
//!
//! Problems are `max ⟨c, x⟩` over free variables `x ∈ ℚᵈ` subject to `⟨aᵢ, x⟩ ≤ bᵢ`.
//! Equalities are written as a pair of opposite inequalities. The solver is a dense
//! two-phase primal simplex with Bland's rule on the split `x = x⁺ − x⁻`, so it
//! always terminates and returns a basic optimal solution.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratlin::{RatVec, Rational};

/// `⟨normal, x⟩ ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LinConstraint {
    pub normal: RatVec,
    #[serde(with = "crate::ratlin::rational_string")]
    pub bound: Rational,
}

impl LinConstraint {
    pub fn new(normal: RatVec, bound: Rational) -> Self {
        Self { normal, bound }
    }

    /// `bound − ⟨normal, x⟩`; non-negative iff `x` satisfies the constraint.
    pub fn slack(&self, x: &RatVec) -> Rational {
        &self.bound - self.normal.dot(x)
    }

    pub fn is_satisfied_by(&self, x: &RatVec) -> bool {
        !self.slack(x).is_negative()
    }

    /// The pair encoding `⟨normal, x⟩ = value`.
    pub fn equality(normal: &RatVec, value: &Rational) -> [LinConstraint; 2] {
        [LinConstraint::new(normal.clone(), value.clone()), LinConstraint::new(-normal, -value)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: RatVec },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&RatVec> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
    /// Reduced costs of the current objective, kept in step with the rows by `pivot`.
    reduced: Vec<Rational>,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for e in self.rows[r].iter_mut() {
            *e *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (e, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *e -= &f * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        if !self.reduced.is_empty() {
            eliminate(&mut self.reduced);
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · y` over the current feasible basis. Columns for which
    /// `allowed` is false never enter. Returns false when unbounded.
    fn maximize(&mut self, cost: &[Rational], allowed: impl Fn(usize) -> bool) -> bool {
        let mut reduced: Vec<Rational> = cost.iter().map(|c| -c).chain([Rational::zero()]).collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if cost[b].is_zero() {
                continue;
            }
            for (e, a) in reduced.iter_mut().zip(row) {
                if !a.is_zero() {
                    *e += &cost[b] * a;
                }
            }
        }
        self.reduced = reduced;
        let result = loop {
            // Bland: lowest-index improving column enters. Basic columns have zero reduced cost.
            let Some(j) = (0..self.ncols).find(|&j| allowed(j) && self.reduced[j].is_negative()) else {
                break true;
            };

            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leaving {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((r, _)) = leaving else { break false };
            self.pivot(r, j);
        };
        self.reduced.clear();
        result
    }

    fn objective_value(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().enumerate().fold(Rational::zero(), |acc, (i, &b)| acc + &cost[b] * self.rhs(i))
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            y[b] = self.rhs(i).clone();
        }
        y
    }
}

/// Maximizes `⟨objective, x⟩` subject to `constraints`.
pub fn lp_optimize(objective: &RatVec, constraints: &[LinConstraint]) -> Result<LpOutcome> {
    let d = objective.dim();
    if let Some((i, c)) = constraints.iter().enumerate().find(|(_, c)| c.normal.dim() != d) {
        return Err(Error::Dimension(format!("constraint {i} has dim {}, objective has dim {d}", c.normal.dim())));
    }
    let k = constraints.len();
    let n_struct = 2 * d + k;
    let negative_rows: Vec<usize> = (0..k).filter(|&i| constraints[i].bound.is_negative()).collect();
    let ncols = n_struct + negative_rows.len();

    let mut rows = Vec::with_capacity(k);
    let mut basis = Vec::with_capacity(k);
    let mut next_artificial = n_struct;
    for (i, c) in constraints.iter().enumerate() {
        let flip = c.bound.is_negative();
        let sign = |v: &Rational| if flip { -v } else { v.clone() };
        let mut row = vec![Rational::zero(); ncols + 1];
        for (j, a) in c.normal.iter().enumerate() {
            row[j] = sign(a);
            row[d + j] = -sign(a);
        }
        row[2 * d + i] = sign(&Rational::one());
        row[ncols] = sign(&c.bound);
        if flip {
            row[next_artificial] = Rational::one();
            basis.push(next_artificial);
            next_artificial += 1;
        } else {
            basis.push(2 * d + i);
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, ncols, reduced: Vec::new() };

    if !negative_rows.is_empty() {
        let mut phase1 = vec![Rational::zero(); ncols];
        for c in phase1.iter_mut().skip(n_struct) {
            *c = -Rational::one();
        }
        tab.maximize(&phase1, |_| true);
        if tab.objective_value(&phase1).is_negative() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-valued artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= n_struct {
                match (0..n_struct).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![Rational::zero(); ncols];
    for (j, c) in objective.iter().enumerate() {
        cost[j] = c.clone();
        cost[d + j] = -c;
    }
    if !tab.maximize(&cost, |j| j < n_struct) {
        return Ok(LpOutcome::Unbounded);
    }
    let y = tab.column_values();
    let point = RatVec::new((0..d).map(|j| &y[j] - &y[d + j]).collect());
    let value = objective.dot(&point);
    Ok(LpOutcome::Optimal { value, point })
}

/// Some point satisfying all constraints, or `None` when the system is infeasible.
pub fn feasible_point(dim: usize, constraints: &[LinConstraint]) -> Result<Option<RatVec>> {
    Ok(lp_optimize(&RatVec::zeros(dim), constraints)?.point().cloned())
}

/// A coefficient vector `beta` with `⟨beta, target⟩ = 1` and `|⟨beta, c⟩| ≤ 1 − margin`
/// for every competitor `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarCertificate {
    pub beta: RatVec,
    #[serde(with = "crate::ratlin::rational_string")]
    pub margin: Rational,
}

impl StarCertificate {
    /// Re-checks the certificate against `target` and `others` by substitution.
    pub fn holds_for(&self, target: &RatVec, others: &[RatVec]) -> bool {
        if self.beta.dot(target) != Rational::one() {
            return false;
        }
        let cap = Rational::one() - &self.margin;
        others.iter().all(|c| self.beta.dot(c).abs() <= cap)
    }
}

fn check_target(target: &RatVec, others: &[RatVec]) -> Result<()> {
    if target.is_zero() {
        return Err(Error::ZeroComponent);
    }
    if let Some(c) = others.iter().find(|c| c.dim() != target.dim()) {
        return Err(Error::Dimension(format!("competitor {c} has dim {}, target has dim {}", c.dim(), target.dim())));
    }
    Ok(())
}

/// Largest `t ∈ [0, 1]` such that some `beta` has `⟨beta, target⟩ = 1` and
/// `|⟨beta, c⟩| ≤ 1 − t` for all `c` in `others`.
///
/// `None` means no such `beta` exists even with `t = 0` (the target is not weakly
/// dominant). With no competitors the margin is capped at 1.
pub fn strict_margin(target: &RatVec, others: &[RatVec]) -> Result<Option<StarCertificate>> {
    check_target(target, others)?;
    let m = target.dim();
    let lift = |v: &RatVec, t: i64| {
        let mut e = v.entries().to_vec();
        e.push(Rational::from_integer(t.into()));
        RatVec::new(e)
    };
    let one = Rational::one();
    let mut cons: Vec<LinConstraint> = LinConstraint::equality(&lift(target, 0), &one).into();
    for c in others {
        cons.push(LinConstraint::new(lift(c, 1), one.clone()));
        cons.push(LinConstraint::new(lift(&-c, 1), one.clone()));
    }
    let t_axis = RatVec::unit(m + 1, m);
    cons.push(LinConstraint::new(-&t_axis, Rational::zero()));
    cons.push(LinConstraint::new(t_axis.clone(), one));
    match lp_optimize(&t_axis, &cons)? {
        LpOutcome::Optimal { value, point } => {
            let beta = RatVec::new(point.entries()[..m].to_vec());
            Ok(Some(StarCertificate { beta, margin: value }))
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Inconsistency("margin LP unbounded despite t ≤ 1".into())),
    }
}

/// Feasibility of `⟨beta, target⟩ = 1`, `|⟨beta, c⟩| ≤ 1` for all `c` in `others`.
///
/// The returned certificate has margin 0, or margin 1 when there are no competitors.
pub fn weak_feasible(target: &RatVec, others: &[RatVec]) -> Result<Option<StarCertificate>> {
    check_target(target, others)?;
    let one = Rational::one();
    let mut cons: Vec<LinConstraint> = LinConstraint::equality(target, &one).into();
    for c in others {
        cons.push(LinConstraint::new(c.clone(), one.clone()));
        cons.push(LinConstraint::new(-c, one.clone()));
    }
    let margin = if others.is_empty() { one } else { Rational::zero() };
    Ok(feasible_point(target.dim(), &cons)?.map(|beta| StarCertificate { beta, margin }))
}

/// Result of maximizing a constraint's normal over all the other constraints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Redundancy {
    pub irredundant: bool,
    /// `None` when the maximum is unbounded.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub optimum: Option<Rational>,
    /// A point satisfying every other constraint. For an irredundant constraint it
    /// violates the tested one.
    pub witness: RatVec,
}

fn serialize_opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Decides whether constraint `index` can be dropped without changing the polyhedron.
pub fn redundancy_check(index: usize, constraints: &[LinConstraint]) -> Result<Redundancy> {
    let Some(tested) = constraints.get(index) else {
        return Err(Error::Input(format!("constraint index {index} out of range ({})", constraints.len())));
    };
    let mut rest: Vec<LinConstraint> =
        constraints.iter().enumerate().filter(|&(i, _)| i != index).map(|(_, c)| c.clone()).collect();
    match lp_optimize(&tested.normal, &rest)? {
        LpOutcome::Optimal { value, point } => {
            Ok(Redundancy { irredundant: value > tested.bound, optimum: Some(value), witness: point })
        }
        LpOutcome::Infeasible => Err(Error::Input("constraint system without the tested row is infeasible".into())),
        LpOutcome::Unbounded => {
            rest.push(LinConstraint::new(tested.normal.clone(), &tested.bound + Rational::one()));
            let witness = lp_optimize(&tested.normal, &rest)?
                .point()
                .cloned()
                .ok_or_else(|| Error::Inconsistency("capped redundancy LP has no optimum".into()))?;
            Ok(Redundancy { irredundant: true, optimum: None, witness })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{int, rat};

    fn c(normal: &[i64], bound: i64) -> LinConstraint {
        LinConstraint::new(RatVec::from_ints(normal), int(bound))
    }

    fn v(x: &[(i64, i64)]) -> RatVec {
        RatVec::new(x.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn one_dimensional_optimum() {
        let out = lp_optimize(&RatVec::from_ints(&[1]), &[c(&[1], 1), c(&[-1], 0)]).unwrap();
        assert_eq!(out, LpOutcome::Optimal { value: int(1), point: RatVec::from_ints(&[1]) });
    }

    #[test]
    fn contradictory_bounds_infeasible() {
        let out = lp_optimize(&RatVec::from_ints(&[1]), &[c(&[1], -1), c(&[-1], -2)]).unwrap();
        assert_eq!(out, LpOutcome::Infeasible);
    }

    #[test]
    fn box_corner() {
        let cons = [c(&[1, 0], 1), c(&[0, 1], 1), c(&[-1, 0], 1), c(&[0, -1], 1)];
        let out = lp_optimize(&RatVec::from_ints(&[1, 1]), &cons).unwrap();
        assert_eq!(out, LpOutcome::Optimal { value: int(2), point: RatVec::from_ints(&[1, 1]) });
    }

    #[test]
    fn empty_constraints() {
        assert_eq!(lp_optimize(&RatVec::from_ints(&[1, 0]), &[]).unwrap(), LpOutcome::Unbounded);
        assert_eq!(
            lp_optimize(&RatVec::from_ints(&[0, 0]), &[]).unwrap(),
            LpOutcome::Optimal { value: int(0), point: RatVec::from_ints(&[0, 0]) }
        );
    }

    #[test]
    fn unbounded_direction() {
        let out = lp_optimize(&RatVec::from_ints(&[1, 1]), &[c(&[1, -1], 1), c(&[-1, 0], 0)]).unwrap();
        assert_eq!(out, LpOutcome::Unbounded);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(lp_optimize(&RatVec::from_ints(&[1, 1]), &[c(&[1], 1)]), Err(Error::Dimension(_))));
    }

    #[test]
    fn degenerate_equalities_with_redundant_rows() {
        // x + y = 1 written twice, plus x - y = 0.
        let mut cons = Vec::new();
        cons.extend(LinConstraint::equality(&RatVec::from_ints(&[1, 1]), &int(1)));
        cons.extend(LinConstraint::equality(&RatVec::from_ints(&[2, 2]), &int(2)));
        cons.extend(LinConstraint::equality(&RatVec::from_ints(&[1, -1]), &int(0)));
        let out = lp_optimize(&RatVec::from_ints(&[1, 0]), &cons).unwrap();
        assert_eq!(out.point(), Some(&v(&[(1, 2), (1, 2)])));
    }

    #[test]
    fn strict_margin_positive_for_extreme_component() {
        let cert = strict_margin(&RatVec::from_ints(&[3, 2]), &[v(&[(5, 2), (5, 2)]), RatVec::from_ints(&[2, 3])])
            .unwrap()
            .unwrap();
        assert!(cert.margin.is_positive());
        assert!(cert.holds_for(&RatVec::from_ints(&[3, 2]), &[v(&[(5, 2), (5, 2)]), RatVec::from_ints(&[2, 3])]));
    }

    #[test]
    fn strict_margin_zero_for_midpoint() {
        let target = v(&[(5, 2), (5, 2)]);
        let others = [RatVec::from_ints(&[3, 2]), RatVec::from_ints(&[2, 3])];
        let cert = strict_margin(&target, &others).unwrap().unwrap();
        assert_eq!(cert.margin, int(0));
        assert!(cert.holds_for(&target, &others));
    }

    #[test]
    fn strict_margin_without_competitors() {
        let cert = strict_margin(&RatVec::from_ints(&[1, 0]), &[]).unwrap().unwrap();
        assert_eq!(cert.margin, int(1));
        assert_eq!(cert.beta, RatVec::from_ints(&[1, 0]));
    }

    #[test]
    fn zero_target_rejected() {
        assert_eq!(strict_margin(&RatVec::zeros(2), &[]), Err(Error::ZeroComponent));
        assert_eq!(weak_feasible(&RatVec::zeros(2), &[]), Err(Error::ZeroComponent));
    }

    #[test]
    fn weak_feasible_on_line_model() {
        let target = RatVec::from_ints(&[1, 1]);
        let others = [v(&[(3, 2), (1, 2)]), v(&[(5, 4), (3, 4)]), v(&[(9, 8), (7, 8)]), v(&[(17, 16), (15, 16)])];
        let cert = weak_feasible(&target, &others).unwrap().unwrap();
        assert_eq!(cert.margin, int(0));
        assert!(cert.holds_for(&target, &others));
    }

    #[test]
    fn weak_infeasible_inside_hull() {
        let others = [RatVec::from_ints(&[1, 2]), RatVec::from_ints(&[-5, 6]), RatVec::from_ints(&[7, -5])];
        assert_eq!(weak_feasible(&RatVec::from_ints(&[0, 1]), &others).unwrap(), None);
        assert_eq!(strict_margin(&RatVec::from_ints(&[0, 1]), &others).unwrap(), None);
    }

    #[test]
    fn weak_without_competitors() {
        let cert = weak_feasible(&RatVec::from_ints(&[1, 0]), &[]).unwrap().unwrap();
        assert_eq!(cert.margin, int(1));
    }

    fn pair(x: &RatVec) -> [LinConstraint; 2] {
        [LinConstraint::new(x.clone(), int(1)), LinConstraint::new(-x, int(1))]
    }

    fn pairs(xs: &[RatVec]) -> Vec<LinConstraint> {
        xs.iter().flat_map(pair).collect()
    }

    #[test]
    fn square_constraints_all_irredundant() {
        let cons = pairs(&[RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])]);
        for i in 0..cons.len() {
            let r = redundancy_check(i, &cons).unwrap();
            assert!(r.irredundant);
            assert!(!cons[i].is_satisfied_by(&r.witness));
        }
    }

    #[test]
    fn midpoint_constraint_redundant() {
        let cons = pairs(&[RatVec::from_ints(&[3, 2]), v(&[(5, 2), (5, 2)]), RatVec::from_ints(&[2, 3])]);
        let flags: Vec<bool> = (0..cons.len()).map(|i| redundancy_check(i, &cons).unwrap().irredundant).collect();
        assert_eq!(flags, [true, true, false, false, true, true]);
    }

    #[test]
    fn hexagon_constraints_irredundant() {
        let cons = pairs(&[RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1]), RatVec::from_ints(&[1, 1])]);
        assert!((0..6).all(|i| redundancy_check(i, &cons).unwrap().irredundant));
    }

    #[test]
    fn unbounded_redundancy_has_witness() {
        // Dropping x ≤ 1 from {x ≤ 1, -x ≤ 1} leaves x unbounded above.
        let cons = [c(&[1], 1), c(&[-1], 1)];
        let r = redundancy_check(0, &cons).unwrap();
        assert!(r.irredundant);
        assert_eq!(r.optimum, None);
        assert_eq!(r.witness, RatVec::from_ints(&[2]));
    }
}
