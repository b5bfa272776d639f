//! Independent brute-force reference solvers and front metrics, used by
//! tests, the acceptance suite and benchmark summaries.
//!
//! Everything here deliberately avoids the solver code paths it is used to
//! check: ranks come from iterative peeling instead of domination-count
//! bookkeeping, fronts from exhaustive enumeration instead of search.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{constrained_dominates, dominates, DecisionVector, Individual, ProblemDef};
use crate::scalar::{cmp_scalar, Scalar};

/// Non-dominated ranks by iterative peeling with a plain O(N^2 * p) double
/// loop per layer. Oracle counterpart of `nsga2::fast_nondominated_sort`.
pub fn brute_force_ranks<S: Scalar>(members: &[Individual<S>]) -> Vec<usize> {
    let n = members.len();
    let mut rank = vec![usize::MAX; n];
    let mut assigned = 0usize;
    let mut layer = 0usize;
    while assigned < n {
        let mut this_layer = Vec::new();
        for i in 0..n {
            if rank[i] != usize::MAX {
                continue;
            }
            let beaten = (0..n).any(|j| {
                j != i && rank[j] == usize::MAX && constrained_dominates(&members[j], &members[i])
            });
            if !beaten {
                this_layer.push(i);
            }
        }
        for &i in &this_layer {
            rank[i] = layer;
        }
        assigned += this_layer.len();
        layer += 1;
    }
    rank
}

/// Exact hypervolume of a 2-objective front (minimization) against a
/// reference point, by the sweep algorithm. Points outside the reference
/// box contribute nothing.
pub fn hypervolume_2d<S: Scalar>(points: &[(S, S)], reference: (S, S)) -> S {
    let mut pts: Vec<(S, S)> = points
        .iter()
        .copied()
        .filter(|&(f1, f2)| f1 < reference.0 && f2 < reference.1)
        .collect();
    pts.sort_by(|a, b| cmp_scalar(a.0, b.0).then(cmp_scalar(a.1, b.1)));
    let mut hv = S::zero();
    let mut best_f2 = reference.1;
    for (f1, f2) in pts {
        if f2 < best_f2 {
            hv += (reference.0 - f1) * (best_f2 - f2);
            best_f2 = f2;
        }
    }
    hv
}

/// Objective pairs of a front, for hypervolume computation.
pub fn front_points<S: Scalar>(front: &[Individual<S>]) -> Vec<(S, S)> {
    front
        .iter()
        .map(|m| {
            assert_eq!(m.f.len(), 2, "front_points requires 2 objectives");
            (m.f[0], m.f[1])
        })
        .collect()
}

/// Shared hypervolume reference point: componentwise max over the compared
/// point sets, scaled by 1.1.
pub fn reference_point_2d<S: Scalar>(sets: &[&[(S, S)]]) -> (S, S) {
    let mut r = (S::neg_infinity(), S::neg_infinity());
    for set in sets {
        for &(f1, f2) in *set {
            r.0 = r.0.max(f1);
            r.1 = r.1.max(f2);
        }
    }
    let scale = S::of(1.1);
    (r.0 * scale, r.1 * scale)
}

/// Removes dominated members and collapses duplicate objective vectors
/// (first representative wins). Inputs are assumed feasible.
pub fn nondominated_filter<S: Scalar>(mut members: Vec<Individual<S>>) -> Vec<Individual<S>> {
    let mut keep: Vec<Individual<S>> = Vec::new();
    for m in members.drain(..) {
        if keep.iter().any(|k| k.f == m.f || dominates(&k.f, &m.f)) {
            continue;
        }
        keep.retain(|k| !dominates(&m.f, &k.f));
        keep.push(m);
    }
    keep
}

/// A problem small enough for exhaustive integer enumeration: at most 3
/// integer-like variables of total cardinality <= 200 and at most 2
/// continuous variables.
pub struct ToyMinlp<S> {
    pub name: &'static str,
    pub problem: ProblemDef<S>,
}

fn check_bounds<S: Scalar>(problem: &ProblemDef<S>) -> Result<(Vec<usize>, Vec<usize>)> {
    let int_idx = problem.int_var_indices();
    let cont_idx: Vec<usize> = (0..problem.n_vars())
        .filter(|i| !int_idx.contains(i))
        .collect();
    if int_idx.len() > 3 {
        return Err(Error::OracleBounds {
            reason: format!("{} integer variables, limit 3", int_idx.len()),
        });
    }
    let cardinality: i64 = int_idx
        .iter()
        .map(|&i| {
            let (lo, hi) = problem.specs[i].int_bounds().unwrap();
            hi - lo + 1
        })
        .product();
    if cardinality > 200 {
        return Err(Error::OracleBounds {
            reason: format!("integer cardinality {cardinality}, limit 200"),
        });
    }
    if cont_idx.len() > 2 {
        return Err(Error::OracleBounds {
            reason: format!("{} continuous variables, limit 2", cont_idx.len()),
        });
    }
    Ok((int_idx, cont_idx))
}

fn int_combos<S: Scalar>(problem: &ProblemDef<S>, int_idx: &[usize]) -> Vec<Vec<i64>> {
    let mut combos = vec![Vec::new()];
    for &i in int_idx {
        let (lo, hi) = problem.specs[i].int_bounds().unwrap();
        let mut next = Vec::with_capacity(combos.len() * (hi - lo + 1) as usize);
        for combo in &combos {
            for v in lo..=hi {
                let mut c = combo.clone();
                c.push(v);
                next.push(c);
            }
        }
        combos = next;
    }
    combos
}

fn grid_positions(lo: f64, hi: f64, density: usize) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    (0..density)
        .map(|k| lo + (hi - lo) * k as f64 / (density - 1) as f64)
        .collect()
}

/// Exhaustive reference front: enumerates every integer combination, grids
/// the continuous box at `grid_density` points per dimension, runs one local
/// refinement pass at 10x density around the provisional front members, and
/// returns the non-dominated feasible set.
pub fn brute_force_front<S: Scalar>(
    problem: &ProblemDef<S>,
    grid_density: usize,
) -> Result<Vec<Individual<S>>> {
    assert!(grid_density >= 2, "grid_density must be at least 2");
    let (int_idx, cont_idx) = check_bounds(problem)?;
    let combos = int_combos(problem, &int_idx);

    let cont_bounds: Vec<(f64, f64)> = cont_idx
        .iter()
        .map(|&i| {
            let (lo, hi) = problem.specs[i].real_bounds();
            (lo.as_f64(), hi.as_f64())
        })
        .collect();

    let build = |combo: &[i64], cont: &[f64]| -> DecisionVector<S> {
        let mut x = vec![S::zero(); problem.n_vars()];
        for (k, &i) in int_idx.iter().enumerate() {
            x[i] = S::of(combo[k] as f64);
        }
        for (k, &i) in cont_idx.iter().enumerate() {
            x[i] = S::of(cont[k]);
        }
        DecisionVector(x)
    };

    let grid_for = |bounds: &[(f64, f64)], density: usize| -> Vec<Vec<f64>> {
        match bounds.len() {
            0 => vec![vec![]],
            1 => grid_positions(bounds[0].0, bounds[0].1, density)
                .into_iter()
                .map(|v| vec![v])
                .collect(),
            2 => {
                let xs = grid_positions(bounds[0].0, bounds[0].1, density);
                let ys = grid_positions(bounds[1].0, bounds[1].1, density);
                let mut out = Vec::with_capacity(xs.len() * ys.len());
                for &x in &xs {
                    for &y in &ys {
                        out.push(vec![x, y]);
                    }
                }
                out
            }
            _ => unreachable!("bounded to 2 continuous dims"),
        }
    };

    let base_grid = grid_for(&cont_bounds, grid_density);
    let feasible: Vec<Individual<S>> = combos
        .par_iter()
        .map(|combo| {
            let mut kept = Vec::new();
            for cont in &base_grid {
                let ind = problem
                    .evaluate(build(combo, cont))
                    .expect("oracle evaluation failed");
                if ind.is_feasible() {
                    kept.push(ind);
                }
            }
            kept
        })
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });

    let provisional = nondominated_filter(feasible.clone());
    if cont_idx.is_empty() {
        return Ok(provisional);
    }

    // refinement: 10x finer local grid spanning one coarse cell on each side
    let mut pool = feasible;
    for member in &provisional {
        let combo: Vec<i64> = int_idx
            .iter()
            .map(|&i| member.x[i].as_f64().round() as i64)
            .collect();
        let local: Vec<(f64, f64)> = cont_idx
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let (lo, hi) = cont_bounds[k];
                let step = (hi - lo) / (grid_density - 1) as f64;
                let center = member.x[i].as_f64();
                ((center - step).max(lo), (center + step).min(hi))
            })
            .collect();
        for cont in grid_for(&local, 21) {
            let ind = problem
                .evaluate(build(&combo, &cont))
                .expect("oracle evaluation failed");
            if ind.is_feasible() {
                pool.push(ind);
            }
        }
    }
    Ok(nondominated_filter(pool))
}

// ---------------------------------------------------------------------------
// Toy instances
// ---------------------------------------------------------------------------

use crate::model::VariableSpec;

/// Five points (y, 4-y) reachable by matching x to y; unconstrained.
pub fn toy_stair<S: Scalar>() -> ToyMinlp<S> {
    let problem = ProblemDef::new(
        vec![
            VariableSpec::integer("y", 0, 4),
            VariableSpec::continuous("x", S::zero(), S::of(4.0)),
        ],
        2,
        0,
        S::of(1e-6),
        |x: &DecisionVector<S>| {
            let (y, v) = (x[0], x[1]);
            let d = (v - y) * (v - y);
            Ok((vec![d + y, d + (S::of(4.0) - y)], vec![]))
        },
    );
    ToyMinlp {
        name: "stair",
        problem,
    }
}

/// Two integers with a coupling constraint y1 + y2 >= 4 and a continuous
/// trade-off slot.
pub fn toy_band<S: Scalar>() -> ToyMinlp<S> {
    let problem = ProblemDef::new(
        vec![
            VariableSpec::integer("y1", 0, 5),
            VariableSpec::integer("y2", 0, 5),
            VariableSpec::continuous("x", S::zero(), S::one()),
        ],
        2,
        1,
        S::of(1e-6),
        |x: &DecisionVector<S>| {
            let (y1, y2, v) = (x[0], x[1], x[2]);
            let c = S::of(4.0) - (y1 + y2);
            Ok((vec![y1 + v, y2 + S::one() - v], vec![c]))
        },
    );
    ToyMinlp {
        name: "band",
        problem,
    }
}

/// Feasible only in a single integer pocket (7, 3) with a continuous window
/// around x = 0.5. The integer part of the constraint is flat, so only
/// enumeration (not gradient-following) can find the pocket.
pub fn toy_pocket<S: Scalar>(window: f64) -> ToyMinlp<S> {
    let problem = ProblemDef::new(
        vec![
            VariableSpec::integer("y1", 0, 13),
            VariableSpec::integer("y2", 0, 13),
            VariableSpec::continuous("x", S::zero(), S::one()),
        ],
        2,
        2,
        S::of(1e-9),
        move |x: &DecisionVector<S>| {
            let (y1, y2, v) = (x[0], x[1], x[2]);
            let in_pocket = y1 == S::of(7.0) && y2 == S::of(3.0);
            let c1 = if in_pocket { -S::one() } else { S::one() };
            let c2 = (v - S::half()).abs() - S::of(window);
            Ok((vec![v + y1, (S::one() - v) + y2], vec![c1, c2]))
        },
    );
    ToyMinlp {
        name: "pocket",
        problem,
    }
}

/// Pure-integer ladder: f = (y, 10 - y); every point is non-dominated.
pub fn toy_ladder<S: Scalar>() -> ToyMinlp<S> {
    let problem = ProblemDef::new(
        vec![VariableSpec::integer("y", 0, 10)],
        2,
        0,
        S::of(1e-6),
        |x: &DecisionVector<S>| {
            let y = x[0];
            Ok((vec![y, S::of(10.0) - y], vec![]))
        },
    );
    ToyMinlp {
        name: "ladder",
        problem,
    }
}

/// Two integers, two continuous slots, two constraints
/// (y1 + y2 <= 10, y2 >= 3).
pub fn toy_ridge<S: Scalar>() -> ToyMinlp<S> {
    let problem = ProblemDef::new(
        vec![
            VariableSpec::integer("y1", 1, 8),
            VariableSpec::integer("y2", 1, 8),
            VariableSpec::continuous("x1", S::zero(), S::one()),
            VariableSpec::continuous("x2", S::zero(), S::one()),
        ],
        2,
        2,
        S::of(1e-6),
        |x: &DecisionVector<S>| {
            let (y1, y2, a, b) = (x[0], x[1], x[2], x[3]);
            let hump = (b - S::half()) * (b - S::half()) * S::of(4.0);
            let f1 = y1 + a * a + hump;
            let f2 = S::of(9.0) - y1 + (S::one() - a) * (S::one() - a)
                + S::of(0.3) * (y2 - S::of(3.0))
                + hump;
            let c1 = (y1 + y2) - S::of(10.0);
            let c2 = S::of(3.0) - y2;
            Ok((vec![f1, f2], vec![c1, c2]))
        },
    );
    ToyMinlp {
        name: "ridge",
        problem,
    }
}

/// Contradictory constraint: nothing is ever feasible.
pub fn toy_all_infeasible<S: Scalar>() -> ToyMinlp<S> {
    let problem = ProblemDef::new(
        vec![
            VariableSpec::integer("y", 0, 3),
            VariableSpec::continuous("x", S::zero(), S::one()),
        ],
        2,
        1,
        S::of(1e-6),
        |x: &DecisionVector<S>| {
            let (y, v) = (x[0], x[1]);
            Ok((vec![y + v, S::one() - v], vec![S::one()]))
        },
    );
    ToyMinlp {
        name: "all-infeasible",
        problem,
    }
}

/// The enumerable instances used by the acceptance suite.
pub fn toy_suite<S: Scalar>() -> Vec<ToyMinlp<S>> {
    vec![
        toy_stair(),
        toy_band(),
        toy_pocket(0.05),
        toy_ladder(),
        toy_ridge(),
    ]
}
