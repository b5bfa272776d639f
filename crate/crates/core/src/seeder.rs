//! Feasibility seeding: run a modified branch-and-bound until feasible
//! individuals appear, then start a standalone NSGA-II from them.
//!
//! The tree modifications relative to the plain solver are (1) infeasible
//! non-leaf nodes are branched instead of fathomed and (2) the whole tree
//! stops as soon as a node's front holds enough feasible individuals.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::derive_seed;
use crate::error::Result;
use crate::mcbb::{run_tree, BnbPolicy};
use crate::model::{DecisionVector, Individual, ProblemDef};
use crate::nsga2::{evolve, rng_from_seed, seed_population, GAParams};
use crate::scalar::Scalar;

/// Stream salt for the harvest phase RNG, so the subsequent GA sees exactly
/// the stream a plain run would.
const HARVEST_STREAM: u64 = 0x48AF_7E57;

/// Harvest policy.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeederPolicy {
    /// Stop as soon as a node's front holds this many feasible individuals.
    pub min_feasible: usize,
    /// Branch infeasible nodes (root included) instead of fathoming them.
    pub continue_on_infeasible_root: bool,
    /// Inherit populations between parent and child nodes during harvest.
    pub use_legacy: bool,
    pub max_nodes: usize,
    pub time_cap_s: f64,
    pub inner_generations: usize,
}

impl Default for SeederPolicy {
    fn default() -> Self {
        Self {
            min_feasible: 1,
            continue_on_infeasible_root: true,
            use_legacy: true,
            max_nodes: 10_000,
            time_cap_s: 1800.0,
            inner_generations: 50,
        }
    }
}

/// What the harvest phase did, serialized into run reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeedReport {
    pub seed_count: usize,
    pub harvest_nodes: usize,
    pub harvest_truncated: bool,
    pub harvest_wall_s: f64,
    pub ga_wall_s: f64,
    /// True when no seeds were found and the GA started from scratch.
    pub random_fallback: bool,
}

struct Harvest<S> {
    seeds: Vec<DecisionVector<S>>,
    nodes: usize,
    truncated: bool,
}

fn harvest<S: Scalar>(
    problem: &ProblemDef<S>,
    params: &GAParams,
    policy: &SeederPolicy,
) -> Result<Harvest<S>> {
    assert!(policy.min_feasible >= 1, "min_feasible must be at least 1");
    let bnb = BnbPolicy {
        legacy: policy.use_legacy,
        branch_infeasible: policy.continue_on_infeasible_root,
        stop_min_feasible: Some(policy.min_feasible),
        max_nodes: policy.max_nodes,
        time_cap_s: policy.time_cap_s,
        inner_generations: policy.inner_generations,
        leaf_generations: Some(policy.inner_generations),
    };
    let harvest_params = GAParams {
        rng_seed: derive_seed(params.rng_seed, HARVEST_STREAM),
        ..params.clone()
    };
    let outcome = run_tree(problem, &harvest_params, &bnb)?;
    if !outcome.stopped_on_feasible {
        // budget exhausted without reaching the stop rule
        return Ok(Harvest {
            seeds: Vec::new(),
            nodes: outcome.nodes_solved,
            truncated: outcome.truncated,
        });
    }
    let mut seeds: Vec<DecisionVector<S>> = Vec::new();
    for m in &outcome.harvest {
        assert!(
            m.violation == S::zero(),
            "harvested individual must be feasible"
        );
        m.x.validate(&problem.specs)
            .expect("harvested individual must satisfy the root domains");
        if !seeds.contains(&m.x) {
            seeds.push(m.x.clone());
        }
    }
    Ok(Harvest {
        seeds,
        nodes: outcome.nodes_solved,
        truncated: outcome.truncated,
    })
}

/// Runs the modified tree and returns every feasible decision vector found
/// (deduplicated), or an empty list on budget exhaustion.
pub fn find_feasible<S: Scalar>(
    problem: &ProblemDef<S>,
    params: &GAParams,
    policy: &SeederPolicy,
) -> Result<Vec<DecisionVector<S>>> {
    Ok(harvest(problem, params, policy)?.seeds)
}

/// The full pipeline: harvest seeds, inject them into the initial population
/// and run the standalone GA. With no seeds this degrades to a plain
/// random-start run with the same RNG stream (reported, not an error).
pub fn seeded_solve<S: Scalar>(
    problem: &ProblemDef<S>,
    params: &GAParams,
    policy: &SeederPolicy,
) -> Result<(Vec<Individual<S>>, SeedReport)> {
    let t0 = Instant::now();
    let harvest = harvest(problem, params, policy)?;
    let harvest_wall_s = t0.elapsed().as_secs_f64();

    // cap to keep room for random diversity in the fill
    let mut seeds = harvest.seeds;
    seeds.truncate(params.pop_size / 2);

    let t1 = Instant::now();
    let mut rng = rng_from_seed(params.rng_seed);
    let initial = seed_population(problem, params.pop_size, &seeds, &mut rng)?;
    let (_, front) = evolve(problem, params, initial)?;
    let ga_wall_s = t1.elapsed().as_secs_f64();

    let report = SeedReport {
        seed_count: seeds.len(),
        harvest_nodes: harvest.nodes,
        harvest_truncated: harvest.truncated,
        harvest_wall_s,
        ga_wall_s,
        random_fallback: seeds.is_empty(),
    };
    Ok((front, report))
}
