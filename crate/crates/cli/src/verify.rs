//! Cross-module oracle checks reported as PASS/FAIL rows.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use polyball::components::{self, Basis};
use polyball::opspace::{self, ExtremeSet};
use polyball::polytope;
use polyball::ratlin::rat;
use polyball::spaces;
use polyball::RatVec;

use crate::problem::{Problem, Subject};

pub const DEFAULT_SEED: u64 = 0x5eed_ba5e;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub subject: String,
    pub invariant: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifySection {
    pub checks: Vec<CheckRow>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifySection {
    pub fn new(checks: Vec<CheckRow>) -> Self {
        let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
        VerifySection { passed: checks.len() - failed, failed, checks }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Outcome of one invariant: `Ok(detail)` or `Err(reason)`.
type Outcome = std::result::Result<String, String>;

pub const INVARIANTS: [&str; 9] = [
    "facets_eq_twice_strict",
    "vertices_three_routes",
    "weak_count_ge_m",
    "direct_sum_vertex_product",
    "direct_sum_strict_doubles",
    "facet_interior_witness",
    "weak_routes_agree",
    "embedding_preserves_norm",
    "operator_space_direct_sum",
];

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn strict_count(b: &Basis) -> Result<usize, String> {
    Ok(components::star_satisfiers(&components::components_of(b)).map_err(err)?.strict_count)
}

fn vertex_count(b: &Basis) -> usize {
    polytope::enumerate_vertices(&polytope::unit_ball_hrep(b)).len()
}

fn facets_eq_twice_strict(a: &Basis) -> Outcome {
    let ball = polytope::unit_ball_hrep(a);
    let facets = polytope::facet_count(&polytope::facet_classes(&ball).map_err(err)?);
    let r = strict_count(a)?;
    if facets == 2 * r {
        Ok(format!("facets {facets} = 2 x {r}"))
    } else {
        Err(format!("facets {facets}, strict classes {r}"))
    }
}

fn vertices_three_routes(a: &Basis) -> Outcome {
    let ball = polytope::unit_ball_hrep(a);
    let enumerated = polytope::enumerate_vertices(&ball).beta_set();
    let stars = polytope::star_constants(&ball).map_err(err)?;
    let mut by_rank = BTreeSet::new();
    let mut by_lp = BTreeSet::new();
    for s in &stars {
        if polytope::is_extreme(&ball, &s.beta).map_err(err)? {
            by_rank.insert(s.beta.clone());
        }
        if polytope::is_maximal_star_constant(&ball, &s.beta).map_err(err)? {
            by_lp.insert(s.beta.clone());
        }
    }
    if enumerated == by_rank && enumerated == by_lp {
        Ok(format!("{} vertices from {} star constants", enumerated.len(), stars.len()))
    } else {
        Err(format!("enumeration {}, rank criterion {}, LP extension {}", enumerated.len(), by_rank.len(), by_lp.len()))
    }
}

fn weak_count_ge_m(a: &Basis) -> Outcome {
    let weak = components::star_satisfiers(&components::components_of(a)).map_err(err)?.weak_count;
    if weak >= a.m() {
        Ok(format!("{weak} >= {}", a.m()))
    } else {
        Err(format!("{weak} < {}", a.m()))
    }
}

fn direct_sum_vertex_product(a: &Basis, b: &Basis) -> Outcome {
    let sum = spaces::direct_sum_basis(&[a.clone(), b.clone()]).map_err(err)?;
    let (va, vb, vs) = (vertex_count(a), vertex_count(b), vertex_count(&sum));
    if vs == va * vb {
        Ok(format!("{vs} = {va} x {vb}"))
    } else {
        Err(format!("{vs} != {va} x {vb}"))
    }
}

fn direct_sum_strict_doubles(a: &Basis) -> Outcome {
    let doubled = spaces::direct_sum_power(a, 2).map_err(err)?;
    let (r, r2) = (strict_count(a)?, strict_count(&doubled)?);
    if r2 == 2 * r {
        Ok(format!("{r2} = 2 x {r}"))
    } else {
        Err(format!("{r2} != 2 x {r}"))
    }
}

fn facet_interior_witness(a: &Basis) -> Outcome {
    let ball = polytope::unit_ball_hrep(a);
    let facets = polytope::facet_classes(&ball).map_err(err)?;
    let missing: Vec<String> = facets
        .iter()
        .filter(|f| f.facet && f.interior_witness(&ball).is_none())
        .map(|f| f.class.representative.to_string())
        .collect();
    if missing.is_empty() {
        Ok(format!("{} facet classes", facets.iter().filter(|f| f.facet).count()))
    } else {
        Err(format!("no witness for {}", missing.join(", ")))
    }
}

fn weak_routes_agree(a: &Basis) -> Outcome {
    let cs = components::components_of(a);
    let margin: BTreeSet<RatVec> =
        components::star_satisfiers(&cs).map_err(err)?.weak_representatives().into_iter().collect();
    let feasibility: BTreeSet<RatVec> =
        components::weak_star_satisfiers(&cs).map_err(err)?.weak_representatives().into_iter().collect();
    if margin == feasibility {
        Ok(format!("{} weak classes", margin.len()))
    } else {
        Err(format!("margin route {}, feasibility route {}", margin.len(), feasibility.len()))
    }
}

fn embedding_preserves_norm(a: &Basis) -> Outcome {
    let map = spaces::embed_into_linf(a).map_err(err)?;
    Ok(format!("into l_inf^{}, {} points checked", map.target_dim(), map.checked_points))
}

fn operator_space_direct_sum(ext: &ExtremeSet) -> Outcome {
    let w = opspace::operator_space_basis(ext);
    let mut parts = Vec::new();
    for n in 1..=2 {
        let rep = opspace::analyze_operator_space(ext, n).map_err(err)?;
        let direct = vertex_count(&spaces::direct_sum_power(&w, n).map_err(err)?);
        if rep.extreme_contractions != BigUint::from(direct) {
            return Err(format!("n = {n}: formula {} vs direct sum {direct}", rep.extreme_contractions));
        }
        parts.push(format!("n={n}: {direct}"));
    }
    Ok(parts.join(", "))
}

fn row(subject: &str, invariant: &'static str, outcome: Outcome) -> CheckRow {
    let (status, detail) = match outcome {
        Ok(d) => (Status::Pass, d),
        Err(d) => (Status::Fail, d),
    };
    CheckRow { subject: subject.to_string(), invariant, status, detail }
}

/// All basis invariants, with `partner` as the second direct summand.
fn basis_checks(a: &Basis, partner: &Basis) -> Vec<(&'static str, Outcome)> {
    vec![
        ("facets_eq_twice_strict", facets_eq_twice_strict(a)),
        ("vertices_three_routes", vertices_three_routes(a)),
        ("weak_count_ge_m", weak_count_ge_m(a)),
        ("direct_sum_vertex_product", direct_sum_vertex_product(a, partner)),
        ("direct_sum_strict_doubles", direct_sum_strict_doubles(a)),
        ("facet_interior_witness", facet_interior_witness(a)),
        ("weak_routes_agree", weak_routes_agree(a)),
        ("embedding_preserves_norm", embedding_preserves_norm(a)),
    ]
}

/// Checks on one problem, summing its basis with itself.
pub fn check_problem(name: &str, problem: &Problem) -> crate::error::CliResult<Vec<CheckRow>> {
    let a = problem.basis()?;
    let mut rows: Vec<CheckRow> = basis_checks(&a, &a).into_iter().map(|(inv, out)| row(name, inv, out)).collect();
    if let Subject::Operator { ext, .. } = &problem.subject {
        rows.push(row(name, "operator_space_direct_sum", operator_space_direct_sum(ext)));
    }
    Ok(rows)
}

/// A random basis with `m ≤ 3`, `n ≤ 6` and entries `p/q`, `|p| ≤ 4`, `q ≤ 3`.
pub fn random_basis(rng: &mut impl Rng) -> Basis {
    loop {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(m..=6);
        let rows: Vec<RatVec> = (0..m)
            .map(|_| RatVec::new((0..n).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect()))
            .collect();
        if let Ok(b) = Basis::from_rows(rows) {
            return b;
        }
    }
}

pub fn random_bases(count: usize, seed: u64) -> Vec<Basis> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_basis(&mut rng)).collect()
}

/// Runs every basis invariant on `count` seeded random bases, pairing basis `i` with
/// basis `i + 1` for direct sums. One row per invariant.
pub fn check_random(count: usize, seed: u64) -> Vec<CheckRow> {
    if count == 0 {
        return Vec::new();
    }
    let bases = random_bases(count, seed);
    let results: Vec<Vec<(&'static str, Outcome)>> =
        (0..count).into_par_iter().map(|i| basis_checks(&bases[i], &bases[(i + 1) % count])).collect();
    let subject = format!("random[{count}, seed={seed:#x}]");
    INVARIANTS[..8]
        .iter()
        .enumerate()
        .map(|(k, &inv)| {
            let failures: Vec<String> = results
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r[k].1.as_ref().err().map(|e| format!("basis {i}: {e}")))
                .collect();
            let outcome = match failures.first() {
                None => Ok(format!("{count}/{count} bases")),
                Some(first) => Err(format!("{} failures; first {first}", failures.len())),
            };
            row(&subject, inv, outcome)
        })
        .collect()
}
