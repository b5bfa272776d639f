//! Multi-criteria branch and bound over the integer/categorical domain.
//!
//! Each node restricts the integer-like variables to a box, gets bounded by
//! a full NSGA-II run, and is then fathomed (by infeasibility or because an
//! incumbent point dominates its ideal point), stored as a solved leaf, or
//! split into two children. With the legacy feature enabled, children
//! inherit the parent's final population, rebounded into their domains, as
//! their initial population.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{dominates, Individual, ProblemDef};
use crate::nsga2::{
    evaluate_batch, evolve_observed, rng_from_seed, seed_population, EvolveObserver, GAParams,
    NoopObserver, Population,
};
use crate::oracle::nondominated_filter;
use crate::scalar::Scalar;

/// Index range of one integer/categorical variable inside a node.
/// `var` indexes the problem's spec list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntDomain {
    pub var: usize,
    pub lo: i64,
    pub hi: i64,
}

impl IntDomain {
    pub fn cardinality(&self) -> i64 {
        self.hi - self.lo + 1
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeStatus {
    Open,
    FathomedInfeasible,
    FathomedOptimality,
    Branched,
    Leaf,
}

/// A branch-and-bound subproblem.
#[derive(Clone, Debug)]
pub struct Node<S> {
    pub id: usize,
    pub parent_id: Option<usize>,
    pub depth: usize,
    pub int_domains: Vec<IntDomain>,
    pub status: NodeStatus,
    /// Population inherited from the parent (pre-rebound).
    pub legacy_pop: Option<Population<S>>,
    /// Final population after this node was solved; the children's legacy.
    pub final_pop: Option<Population<S>>,
    pub front: Option<Vec<Individual<S>>>,
    pub ideal: Option<Vec<S>>,
}

impl<S: Scalar> Node<S> {
    /// Root node spanning the full integer/categorical domain.
    pub fn root(problem: &ProblemDef<S>) -> Self {
        let int_domains = problem
            .int_var_indices()
            .into_iter()
            .map(|var| {
                let (lo, hi) = problem.specs[var].int_bounds().unwrap();
                IntDomain { var, lo, hi }
            })
            .collect();
        Self {
            id: 0,
            parent_id: None,
            depth: 0,
            int_domains,
            status: NodeStatus::Open,
            legacy_pop: None,
            final_pop: None,
            front: None,
            ideal: None,
        }
    }

    /// A node is a leaf when every integer variable is fixed.
    pub fn is_leaf_domain(&self) -> bool {
        self.int_domains.iter().all(IntDomain::is_singleton)
    }

    /// The node's subproblem: the base problem with integer domains narrowed.
    pub fn restricted_problem(&self, problem: &ProblemDef<S>) -> ProblemDef<S> {
        let restrictions: Vec<(usize, i64, i64)> = self
            .int_domains
            .iter()
            .map(|d| (d.var, d.lo, d.hi))
            .collect();
        problem.restricted(&restrictions)
    }
}

/// Global upper-bound archive: every solved node's front, keyed by node id.
/// Queries are answered from an incrementally maintained reduced front;
/// the raw entries are kept for audit.
#[derive(Clone, Debug, Default)]
pub struct IncumbentList<S> {
    entries: Vec<(usize, Vec<Individual<S>>)>,
    reduced: Vec<Individual<S>>,
}

impl<S: Scalar> IncumbentList<S> {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
            reduced: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Vec<Individual<S>>)] {
        &self.entries
    }

    /// Appends a node front. Every member must be feasible.
    pub fn merge(&mut self, node_id: usize, front: Vec<Individual<S>>) -> Result<()> {
        for (index, m) in front.iter().enumerate() {
            if !m.is_feasible() {
                return Err(Error::InfeasibleMerge {
                    index,
                    violation: m.violation.as_f64(),
                });
            }
        }
        let mut pool = std::mem::take(&mut self.reduced);
        pool.extend(front.iter().cloned());
        self.reduced = nondominated_filter(pool);
        self.entries.push((node_id, front));
        Ok(())
    }

    /// The overall front: union of stored fronts with dominated members
    /// removed and duplicate objective vectors collapsed.
    pub fn extract_front(&self) -> Vec<Individual<S>> {
        self.reduced.clone()
    }
}

/// Componentwise minimum of a front's objectives — the node's lower bound.
pub fn ideal_point<S: Scalar>(front: &[Individual<S>]) -> Result<Vec<S>> {
    if front.is_empty() {
        return Err(Error::EmptyFront);
    }
    let p = front[0].f.len();
    let mut ideal = vec![S::infinity(); p];
    for m in front {
        for (k, &v) in m.f.iter().enumerate() {
            ideal[k] = ideal[k].min(v);
        }
    }
    Ok(ideal)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FathomOutcome {
    Optimality,
    Keep,
}

/// Fathom-by-optimality test: prune when some incumbent member dominates
/// the node's ideal point.
pub fn fathom_check<S: Scalar>(
    node_ideal: &[S],
    incumbent: &IncumbentList<S>,
) -> FathomOutcome {
    if incumbent
        .extract_front()
        .iter()
        .any(|m| dominates(&m.f, node_ideal))
    {
        FathomOutcome::Optimality
    } else {
        FathomOutcome::Keep
    }
}

/// Splits the node on the non-singleton variable with the largest domain
/// (ties to the lowest variable index) at the midpoint. Children inherit the
/// parent's final population as their legacy. Panics on leaves.
pub fn branch<S: Scalar>(node: &Node<S>, child_ids: (usize, usize)) -> (Node<S>, Node<S>) {
    let pick = node
        .int_domains
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_singleton())
        .max_by(|(ia, a), (ib, b)| {
            a.cardinality()
                .cmp(&b.cardinality())
                .then(ib.cmp(ia)) // prefer the lower index on ties
        })
        .map(|(i, _)| i)
        .expect("branch called on a leaf node");
    let dom = node.int_domains[pick];
    let mid = (dom.lo + dom.hi).div_euclid(2);

    let make = |id: usize, lo: i64, hi: i64| {
        let mut domains = node.int_domains.clone();
        domains[pick] = IntDomain {
            var: dom.var,
            lo,
            hi,
        };
        Node {
            id,
            parent_id: Some(node.id),
            depth: node.depth + 1,
            int_domains: domains,
            status: NodeStatus::Open,
            legacy_pop: node.final_pop.clone(),
            final_pop: None,
            front: None,
            ideal: None,
        }
    };
    (
        make(child_ids.0, dom.lo, mid),
        make(child_ids.1, mid + 1, dom.hi),
    )
}

/// Clamps inherited individuals into the child's integer domains and
/// re-evaluates them. Continuous slots are untouched.
pub fn rebound_population<S: Scalar>(
    pop: &Population<S>,
    child_domains: &[IntDomain],
    problem: &ProblemDef<S>,
) -> Result<Population<S>> {
    let xs = pop
        .members
        .iter()
        .map(|m| {
            let mut x = m.x.clone();
            for d in child_domains {
                let v = x.0[d.var];
                let lo = S::of(d.lo as f64);
                let hi = S::of(d.hi as f64);
                x.0[d.var] = v.max(lo).min(hi);
            }
            x
        })
        .collect();
    let members = evaluate_batch(problem, xs)?;
    Ok(Population {
        members,
        generation: 0,
    })
}

/// Appends `front` to the incumbent archive (spec-named wrapper).
pub fn merge_incumbent<S: Scalar>(
    incumbent: &mut IncumbentList<S>,
    node_id: usize,
    front: Vec<Individual<S>>,
) -> Result<()> {
    incumbent.merge(node_id, front)
}

/// Reduces the incumbent archive to the overall front (spec-named wrapper).
pub fn extract_front<S: Scalar>(incumbent: &IncumbentList<S>) -> Vec<Individual<S>> {
    incumbent.extract_front()
}

/// Solves one node: builds its restricted problem, initializes NSGA-II from
/// the rebounded legacy population (or at random), runs the GA and stores
/// front, ideal point and final population on the node. Returns whether the
/// node found any feasible point.
pub fn solve_node<S: Scalar>(
    node: &mut Node<S>,
    problem: &ProblemDef<S>,
    params: &GAParams,
) -> Result<bool> {
    solve_node_observed(node, problem, params, &mut NoopObserver)
}

pub fn solve_node_observed<S: Scalar>(
    node: &mut Node<S>,
    problem: &ProblemDef<S>,
    params: &GAParams,
    observer: &mut dyn EvolveObserver<S>,
) -> Result<bool> {
    assert_eq!(node.status, NodeStatus::Open, "solve_node requires an Open node");
    let sub = node.restricted_problem(problem);
    let initial = match node.legacy_pop.take() {
        Some(pop) => rebound_population(&pop, &node.int_domains, &sub)?,
        None => {
            let mut rng = rng_from_seed(params.rng_seed);
            seed_population(&sub, params.pop_size, &[], &mut rng)?
        }
    };
    let (final_pop, front) = evolve_observed(&sub, params, initial, observer)?;
    let feasible = !front.is_empty();
    node.ideal = if feasible {
        Some(ideal_point(&front)?)
    } else {
        None
    };
    node.front = Some(front);
    node.final_pop = Some(final_pop);
    Ok(feasible)
}

/// Search policy and budgets for [`run_tree`].
#[derive(Clone, Debug, Serialize)]
pub struct BnbPolicy {
    /// Children inherit the parent's final population.
    pub legacy: bool,
    /// Branch infeasible non-leaf nodes instead of fathoming them
    /// (the seeding application's modified rule).
    pub branch_infeasible: bool,
    /// Stop the whole tree as soon as a node's front holds at least this
    /// many feasible individuals.
    pub stop_min_feasible: Option<usize>,
    /// Maximum number of solved nodes.
    pub max_nodes: usize,
    /// Wall-clock cap for the whole tree, seconds.
    pub time_cap_s: f64,
    /// GA generations per inner node.
    pub inner_generations: usize,
    /// GA generations per leaf node; defaults to the standalone budget.
    pub leaf_generations: Option<usize>,
}

impl Default for BnbPolicy {
    fn default() -> Self {
        Self {
            legacy: true,
            branch_infeasible: false,
            stop_min_feasible: None,
            max_nodes: 10_000,
            time_cap_s: 1800.0,
            inner_generations: 50,
            leaf_generations: None,
        }
    }
}

/// One line of the tree log.
#[derive(Clone, Debug, Serialize)]
pub struct NodeRecord<S> {
    pub id: usize,
    pub parent_id: Option<usize>,
    pub depth: usize,
    pub status: NodeStatus,
    pub int_domains: Vec<IntDomain>,
    /// Variable split when branched, with the child ranges.
    pub branch_var: Option<usize>,
    pub branch_split: Option<((i64, i64), (i64, i64))>,
    pub ideal: Option<Vec<S>>,
    pub front_size: usize,
    pub wall_s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeLog<S> {
    pub records: Vec<NodeRecord<S>>,
}

impl<S> Default for TreeLog<S> {
    fn default() -> Self {
        Self {
            records: Vec::new(),
        }
    }
}

impl<S: Scalar> TreeLog<S> {
    /// Line-delimited JSON, one record per node.
    pub fn to_ndjson(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("node record serializes"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn count(&self, status: NodeStatus) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }
}

/// Result of a tree run.
#[derive(Clone, Debug)]
pub struct TreeOutcome<S> {
    /// Overall Pareto front (dominance-reduced incumbent archive).
    pub front: Vec<Individual<S>>,
    pub log: TreeLog<S>,
    pub incumbent: IncumbentList<S>,
    /// True when the node or time budget ran out before the worklist emptied.
    pub truncated: bool,
    /// True when `stop_min_feasible` fired.
    pub stopped_on_feasible: bool,
    /// Feasible members of the stopping node's final population.
    pub harvest: Vec<Individual<S>>,
    pub nodes_solved: usize,
}

/// Runs the branch-and-bound tree depth-first and returns the reduced
/// incumbent front plus a structured log of every solved node.
pub fn run_tree<S: Scalar>(
    problem: &ProblemDef<S>,
    params: &GAParams,
    policy: &BnbPolicy,
) -> Result<TreeOutcome<S>> {
    run_tree_observed(problem, params, policy, &mut NoopObserver)
}

/// [`run_tree`] with observer hooks (forwarded to every node's GA).
pub fn run_tree_observed<S: Scalar>(
    problem: &ProblemDef<S>,
    params: &GAParams,
    policy: &BnbPolicy,
    observer: &mut dyn EvolveObserver<S>,
) -> Result<TreeOutcome<S>> {
    let start = Instant::now();
    let mut master_rng = rng_from_seed(params.rng_seed);
    let mut next_id = 1usize;
    let mut stack = vec![Node::root(problem)];
    let mut incumbent = IncumbentList::new();
    let mut log = TreeLog::default();
    let mut truncated = false;
    let mut stopped_on_feasible = false;
    let mut harvest = Vec::new();
    let mut nodes_solved = 0usize;

    while let Some(mut node) = stack.pop() {
        if nodes_solved >= policy.max_nodes
            || start.elapsed().as_secs_f64() > policy.time_cap_s
            || observer.should_stop()
        {
            truncated = true;
            break;
        }
        let node_seed = master_rng.gen::<u64>();
        let is_leaf = node.is_leaf_domain();
        let node_params = GAParams {
            max_generations: if is_leaf {
                policy.leaf_generations.unwrap_or(params.max_generations)
            } else {
                policy.inner_generations
            },
            rng_seed: node_seed,
            ..params.clone()
        };
        let t0 = Instant::now();
        let feasible = solve_node_observed(&mut node, problem, &node_params, observer)?;
        let wall_s = t0.elapsed().as_secs_f64();
        nodes_solved += 1;

        let mut branch_var = None;
        let mut branch_split = None;
        let mut stop_now = false;
        if feasible {
            let front = node.front.clone().unwrap_or_default();
            let ideal = node.ideal.clone().expect("feasible node has an ideal point");
            let stops = policy
                .stop_min_feasible
                .is_some_and(|min| front.len() >= min);
            if stops {
                incumbent.merge(node.id, front)?;
                harvest = node
                    .final_pop
                    .as_ref()
                    .map(|p| {
                        p.members
                            .iter()
                            .filter(|m| m.is_feasible())
                            .cloned()
                            .collect()
                    })
                    .unwrap_or_default();
                stopped_on_feasible = true;
                stop_now = true;
            } else if fathom_check(&ideal, &incumbent) == FathomOutcome::Optimality {
                node.status = NodeStatus::FathomedOptimality;
            } else {
                incumbent.merge(node.id, front)?;
                if is_leaf {
                    node.status = NodeStatus::Leaf;
                } else {
                    let (var, split) = push_children(&mut node, policy.legacy, &mut next_id, &mut stack);
                    branch_var = Some(var);
                    branch_split = Some(split);
                }
            }
        } else if policy.branch_infeasible && !is_leaf {
            let (var, split) = push_children(&mut node, policy.legacy, &mut next_id, &mut stack);
            branch_var = Some(var);
            branch_split = Some(split);
        } else {
            node.status = NodeStatus::FathomedInfeasible;
        }

        log.records.push(NodeRecord {
            id: node.id,
            parent_id: node.parent_id,
            depth: node.depth,
            status: node.status,
            int_domains: node.int_domains.clone(),
            branch_var,
            branch_split,
            ideal: node.ideal.clone(),
            front_size: front_size(&node),
            wall_s,
        });
        if stop_now {
            break;
        }
    }

    Ok(TreeOutcome {
        front: incumbent.extract_front(),
        log,
        incumbent,
        truncated,
        stopped_on_feasible,
        harvest,
        nodes_solved,
    })
}

fn front_size<S: Scalar>(node: &Node<S>) -> usize {
    node.front.as_ref().map(Vec::len).unwrap_or(0)
}

fn diff_domain<S: Scalar>(child: &Node<S>, parent: &Node<S>) -> IntDomain {
    child
        .int_domains
        .iter()
        .zip(&parent.int_domains)
        .find(|(c, p)| c != p)
        .map(|(c, _)| *c)
        .expect("branched child differs from parent in one domain")
}

/// Branches `node`, pushes the children (low half first, so DFS pops the
/// high half next) and reports the split for the log.
fn push_children<S: Scalar>(
    node: &mut Node<S>,
    legacy: bool,
    next_id: &mut usize,
    stack: &mut Vec<Node<S>>,
) -> (usize, ((i64, i64), (i64, i64))) {
    if !legacy {
        node.final_pop = None;
    }
    let (a, b) = branch(node, (*next_id, *next_id + 1));
    *next_id += 2;
    let da = diff_domain(&a, node);
    let db = diff_domain(&b, node);
    node.status = NodeStatus::Branched;
    stack.push(a);
    stack.push(b);
    (da.var, ((da.lo, da.hi), (db.lo, db.hi)))
}
