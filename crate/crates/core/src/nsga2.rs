//! Constrained NSGA-II: fast non-dominated sorting, crowding distance,
//! simulated binary crossover, polynomial mutation and a (mu + lambda)
//! generational loop with feasibility-first selection.
//!
//! The engine is used standalone and as the bounding solver inside every
//! branch-and-bound node. All randomness flows from `GAParams::rng_seed`
//! through a counter-based RNG, so runs are reproducible bit-for-bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{constrained_dominates, DecisionVector, Individual, ProblemDef, VariableSpec};
use crate::scalar::{cmp_scalar, Scalar};

/// GA parameters. Defaults follow the reference setup: population 200,
/// 500 generations, crossover 0.8, mutation 0.9, eta_c 100, eta_m 10.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GAParams {
    pub pop_size: usize,
    pub max_generations: usize,
    pub p_crossover: f64,
    /// Per-individual mutation probability, spread across slots
    /// (each slot mutates with probability `p_mutation / n_vars`).
    pub p_mutation: f64,
    pub eta_c: f64,
    pub eta_m: f64,
    pub rng_seed: u64,
}

impl Default for GAParams {
    fn default() -> Self {
        Self {
            pop_size: 200,
            max_generations: 500,
            p_crossover: 0.8,
            p_mutation: 0.9,
            eta_c: 100.0,
            eta_m: 10.0,
            rng_seed: 1,
        }
    }
}

impl GAParams {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 || self.pop_size % 2 != 0 {
            return Err(Error::Params(format!(
                "pop_size must be even and >= 4, got {}",
                self.pop_size
            )));
        }
        for (name, p) in [("p_crossover", self.p_crossover), ("p_mutation", self.p_mutation)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Params(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if self.eta_c <= 0.0 || self.eta_m <= 0.0 {
            return Err(Error::Params("eta_c and eta_m must be positive".into()));
        }
        Ok(())
    }
}

/// A fixed-size population of evaluated individuals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Population<S> {
    pub members: Vec<Individual<S>>,
    pub generation: usize,
}

impl<S: Scalar> Population<S> {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Feasible members of the first non-dominated front. Ranks must be
    /// assigned (the engine keeps them current).
    pub fn feasible_front(&self) -> Vec<Individual<S>> {
        self.members
            .iter()
            .filter(|m| m.rank == Some(0) && m.is_feasible())
            .cloned()
            .collect()
    }
}

/// The RNG used throughout the solvers.
pub type GaRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GaRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random vector over the variable domains.
pub fn random_vector<S: Scalar, R: Rng>(specs: &[VariableSpec<S>], rng: &mut R) -> DecisionVector<S> {
    DecisionVector(specs.iter().map(|s| s.sample(rng)).collect())
}

/// Evaluates a batch of vectors in parallel, preserving order.
pub fn evaluate_batch<S: Scalar>(
    problem: &ProblemDef<S>,
    xs: Vec<DecisionVector<S>>,
) -> Result<Vec<Individual<S>>> {
    xs.into_par_iter().map(|x| problem.evaluate(x)).collect()
}

/// Builds the initial population: every seed verbatim plus uniform random
/// fill, all evaluated. Seeds outside the problem domain are rejected with
/// their index.
pub fn seed_population<S: Scalar>(
    problem: &ProblemDef<S>,
    pop_size: usize,
    seeds: &[DecisionVector<S>],
    rng: &mut GaRng,
) -> Result<Population<S>> {
    if seeds.len() > pop_size {
        return Err(Error::Params(format!(
            "{} seeds exceed population size {}",
            seeds.len(),
            pop_size
        )));
    }
    let mut xs = Vec::with_capacity(pop_size);
    for (index, seed) in seeds.iter().enumerate() {
        seed.validate(&problem.specs)
            .map_err(|e| Error::SeedRejected {
                index,
                reason: e.to_string(),
            })?;
        xs.push(seed.clone());
    }
    while xs.len() < pop_size {
        xs.push(random_vector(&problem.specs, rng));
    }
    let members = evaluate_batch(problem, xs)?;
    Ok(Population {
        members,
        generation: 0,
    })
}

/// Fast non-dominated sort under constrained dominance. Returns the fronts
/// as index lists and stores each member's rank.
pub fn fast_nondominated_sort<S: Scalar>(members: &mut [Individual<S>]) -> Vec<Vec<usize>> {
    let n = members.len();
    if n == 0 {
        return Vec::new();
    }
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    let mut current: Vec<usize> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if constrained_dominates(&members[i], &members[j]) {
                dominated[i].push(j);
            } else if constrained_dominates(&members[j], &members[i]) {
                count[i] += 1;
            }
        }
        if count[i] == 0 {
            members[i].rank = Some(0);
            current.push(i);
        }
    }
    let mut fronts = Vec::new();
    let mut rank = 0usize;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated[p] {
                count[q] -= 1;
                if count[q] == 0 {
                    members[q].rank = Some(rank + 1);
                    next.push(q);
                }
            }
        }
        fronts.push(std::mem::take(&mut current));
        current = next;
        rank += 1;
    }
    fronts
}

fn crowding_by_indices<S: Scalar>(members: &[Individual<S>], idxs: &[usize]) -> Vec<S> {
    let l = idxs.len();
    let mut dist = vec![S::zero(); l];
    if l == 0 {
        return dist;
    }
    if l <= 2 {
        return vec![S::infinity(); l];
    }
    let p = members[idxs[0]].f.len();
    // position of each front slot after sorting by objective m
    let mut order: Vec<usize> = (0..l).collect();
    for m in 0..p {
        order.sort_by(|&a, &b| {
            cmp_scalar(members[idxs[a]].f[m], members[idxs[b]].f[m]).then(a.cmp(&b))
        });
        let f_min = members[idxs[order[0]]].f[m];
        let f_max = members[idxs[order[l - 1]]].f[m];
        dist[order[0]] = S::infinity();
        dist[order[l - 1]] = S::infinity();
        if f_max == f_min {
            continue;
        }
        let range = f_max - f_min;
        for k in 1..l - 1 {
            let gap = members[idxs[order[k + 1]]].f[m] - members[idxs[order[k - 1]]].f[m];
            dist[order[k]] += gap / range;
        }
    }
    dist
}

/// Crowding distance of a mutually non-dominated front: endpoints get
/// infinity, interior points accumulate the normalized neighbour gap per
/// objective. Objectives with zero range contribute nothing.
pub fn crowding_distance<S: Scalar>(front: &[Individual<S>]) -> Vec<S> {
    let idxs: Vec<usize> = (0..front.len()).collect();
    crowding_by_indices(front, &idxs)
}

fn slot_bounds<S: Scalar>(spec: &VariableSpec<S>) -> (S, S) {
    spec.real_bounds()
}

/// Simulated binary crossover. Continuous slots follow the SBX spread
/// distribution with index `eta_c`; integer and categorical slots apply the
/// same arithmetic and are then rounded to the nearest in-domain value.
/// With probability `1 - p_crossover` the parents are returned unchanged.
pub fn sbx_crossover<S: Scalar>(
    p1: &DecisionVector<S>,
    p2: &DecisionVector<S>,
    specs: &[VariableSpec<S>],
    params: &GAParams,
    rng: &mut GaRng,
) -> (DecisionVector<S>, DecisionVector<S>) {
    assert_eq!(p1.len(), specs.len());
    assert_eq!(p2.len(), specs.len());
    if rng.gen::<f64>() >= params.p_crossover {
        return (p1.clone(), p2.clone());
    }
    let exp = 1.0 / (params.eta_c + 1.0);
    let mut c1 = Vec::with_capacity(specs.len());
    let mut c2 = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        let (a, b) = (p1[i], p2[i]);
        let u = rng.gen::<f64>();
        let beta = if u <= 0.5 {
            (2.0 * u).powf(exp)
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(exp)
        };
        let beta = S::of(beta);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let mean = (lo + hi) * S::half();
        let spread = (hi - lo) * S::half();
        let (q1, q2) = (mean - beta * spread, mean + beta * spread);
        // keep child/parent pairing stable
        let (q1, q2) = if a <= b { (q1, q2) } else { (q2, q1) };
        c1.push(spec.project(q1));
        c2.push(spec.project(q2));
    }
    (DecisionVector(c1), DecisionVector(c2))
}

/// Polynomial mutation with index `eta_m`. Each slot mutates independently
/// with probability `p_mutation / n_vars`; integer and categorical slots use
/// the same real-valued perturbation and are rounded back into the domain.
pub fn polynomial_mutation<S: Scalar>(
    x: &DecisionVector<S>,
    specs: &[VariableSpec<S>],
    params: &GAParams,
    rng: &mut GaRng,
) -> DecisionVector<S> {
    assert_eq!(x.len(), specs.len());
    let per_slot = params.p_mutation / specs.len().max(1) as f64;
    let exp = 1.0 / (params.eta_m + 1.0);
    let mut out = x.0.clone();
    for (i, spec) in specs.iter().enumerate() {
        if rng.gen::<f64>() >= per_slot {
            continue;
        }
        let (lo, hi) = slot_bounds(spec);
        if hi <= lo {
            continue; // singleton domain
        }
        let range = hi - lo;
        let v = out[i];
        let d1 = ((v - lo) / range).as_f64();
        let d2 = ((hi - v) / range).as_f64();
        let u = rng.gen::<f64>();
        let dq = if u < 0.5 {
            let xy = 1.0 - d1;
            let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(params.eta_m + 1.0);
            val.powf(exp) - 1.0
        } else {
            let xy = 1.0 - d2;
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(params.eta_m + 1.0);
            1.0 - val.powf(exp)
        };
        out[i] = spec.project(v + S::of(dq) * range);
    }
    DecisionVector(out)
}

/// Binary tournament winner by (rank, crowding); exact ties are settled by
/// a coin flip from the run's RNG.
fn tournament<S: Scalar>(members: &[Individual<S>], a: usize, b: usize, rng: &mut GaRng) -> usize {
    let ra = members[a].rank.expect("rank not assigned");
    let rb = members[b].rank.expect("rank not assigned");
    if ra != rb {
        return if ra < rb { a } else { b };
    }
    let ca = members[a].crowding.unwrap_or_else(S::zero);
    let cb = members[b].crowding.unwrap_or_else(S::zero);
    match cmp_scalar(ca, cb) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if rng.gen::<bool>() {
                a
            } else {
                b
            }
        }
    }
}

fn assign_rank_and_crowding<S: Scalar>(members: &mut [Individual<S>]) -> Vec<Vec<usize>> {
    let fronts = fast_nondominated_sort(members);
    for front in &fronts {
        let dist = crowding_by_indices(members, front);
        for (&idx, d) in front.iter().zip(dist) {
            members[idx].crowding = Some(d);
        }
    }
    fronts
}

/// (mu + lambda) environmental selection: whole fronts first, the last
/// partial front truncated by descending crowding.
fn environmental_select<S: Scalar>(
    mut combined: Vec<Individual<S>>,
    pop_size: usize,
) -> Vec<Individual<S>> {
    let fronts = assign_rank_and_crowding(&mut combined);
    let mut chosen: Vec<usize> = Vec::with_capacity(pop_size);
    for front in fronts {
        if chosen.len() + front.len() <= pop_size {
            chosen.extend(front);
            if chosen.len() == pop_size {
                break;
            }
        } else {
            let mut rest = front;
            rest.sort_by(|&a, &b| {
                cmp_scalar(
                    combined[b].crowding.unwrap_or_else(S::zero),
                    combined[a].crowding.unwrap_or_else(S::zero),
                )
                .then(a.cmp(&b))
            });
            rest.truncate(pop_size - chosen.len());
            chosen.extend(rest);
            break;
        }
    }
    let mut flags = vec![false; combined.len()];
    for &i in &chosen {
        flags[i] = true;
    }
    let mut out = Vec::with_capacity(pop_size);
    for (i, m) in combined.into_iter().enumerate() {
        if flags[i] {
            out.push(m);
        }
    }
    out
}

/// Hooks into the generational loop. `on_evaluated` sees every evaluated
/// individual exactly once (initial population included); `should_stop`
/// is polled between generations for budget or cancellation checks.
pub trait EvolveObserver<S: Scalar> {
    fn on_evaluated(&mut self, _batch: &[Individual<S>]) {}
    fn on_generation(&mut self, _pop: &Population<S>) {}
    fn should_stop(&mut self) -> bool {
        false
    }
}

/// Observer that does nothing.
pub struct NoopObserver;

impl<S: Scalar> EvolveObserver<S> for NoopObserver {}

/// Runs the full generational loop and returns the final population together
/// with its feasible first front (empty when no feasible point was found).
pub fn evolve<S: Scalar>(
    problem: &ProblemDef<S>,
    params: &GAParams,
    initial: Population<S>,
) -> Result<(Population<S>, Vec<Individual<S>>)> {
    evolve_observed(problem, params, initial, &mut NoopObserver)
}

/// [`evolve`] with observer hooks.
pub fn evolve_observed<S: Scalar>(
    problem: &ProblemDef<S>,
    params: &GAParams,
    initial: Population<S>,
    observer: &mut dyn EvolveObserver<S>,
) -> Result<(Population<S>, Vec<Individual<S>>)> {
    params.validate()?;
    assert_eq!(
        initial.size(),
        params.pop_size,
        "initial population size must equal pop_size"
    );
    let mut rng = rng_from_seed(params.rng_seed);
    let mut pop = initial;
    observer.on_evaluated(&pop.members);
    assign_rank_and_crowding(&mut pop.members);

    for gen in 0..params.max_generations {
        if observer.should_stop() {
            break;
        }
        let mut offspring_x = Vec::with_capacity(params.pop_size);
        while offspring_x.len() < params.pop_size {
            let (i1, i2) = (
                rng.gen_range(0..pop.members.len()),
                rng.gen_range(0..pop.members.len()),
            );
            let (j1, j2) = (
                rng.gen_range(0..pop.members.len()),
                rng.gen_range(0..pop.members.len()),
            );
            let pa = tournament(&pop.members, i1, i2, &mut rng);
            let pb = tournament(&pop.members, j1, j2, &mut rng);
            let (c1, c2) = sbx_crossover(
                &pop.members[pa].x,
                &pop.members[pb].x,
                &problem.specs,
                params,
                &mut rng,
            );
            let c1 = polynomial_mutation(&c1, &problem.specs, params, &mut rng);
            let c2 = polynomial_mutation(&c2, &problem.specs, params, &mut rng);
            offspring_x.push(c1);
            if offspring_x.len() < params.pop_size {
                offspring_x.push(c2);
            }
        }
        let offspring = evaluate_batch(problem, offspring_x)?;
        observer.on_evaluated(&offspring);
        let mut combined = pop.members;
        combined.extend(offspring);
        pop = Population {
            members: environmental_select(combined, params.pop_size),
            generation: gen + 1,
        };
        observer.on_generation(&pop);
    }

    assign_rank_and_crowding(&mut pop.members);
    let front = pop.feasible_front();
    Ok((pop, front))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::violation;
    use crate::oracle;

    fn unconstrained(f: Vec<f64>) -> Individual<f64> {
        Individual {
            x: DecisionVector(vec![]),
            f,
            c: vec![],
            violation: 0.0,
            rank: None,
            crowding: None,
        }
    }

    #[test]
    fn sort_example_three_points() {
        let mut pop = vec![
            unconstrained(vec![1.0, 1.0]),
            unconstrained(vec![2.0, 2.0]),
            unconstrained(vec![0.0, 3.0]),
        ];
        let fronts = fast_nondominated_sort(&mut pop);
        assert_eq!(fronts, vec![vec![0, 2], vec![1]]);
        assert_eq!(pop[0].rank, Some(0));
        assert_eq!(pop[1].rank, Some(1));
        assert_eq!(pop[2].rank, Some(0));
    }

    #[test]
    fn sort_single_individual() {
        let mut pop = vec![unconstrained(vec![3.0, 4.0])];
        let fronts = fast_nondominated_sort(&mut pop);
        assert_eq!(fronts, vec![vec![0]]);
    }

    #[test]
    fn sort_empty_population() {
        let mut pop: Vec<Individual<f64>> = vec![];
        assert!(fast_nondominated_sort(&mut pop).is_empty());
    }

    #[test]
    fn sort_matches_bruteforce_oracle_on_random_pops() {
        let mut rng = rng_from_seed(7);
        for _ in 0..25 {
            let n = rng.gen_range(1..=30);
            let mut pop: Vec<Individual<f64>> = (0..n)
                .map(|_| {
                    let mut ind = unconstrained(vec![rng.gen::<f64>(), rng.gen::<f64>()]);
                    if rng.gen::<bool>() {
                        ind.c = vec![rng.gen::<f64>() - 0.5];
                        ind.violation = violation(&ind.c, 0.0);
                    }
                    ind
                })
                .collect();
            let expected = oracle::brute_force_ranks(&pop);
            fast_nondominated_sort(&mut pop);
            let got: Vec<usize> = pop.iter().map(|m| m.rank.unwrap()).collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn sort_front_zero_is_mutually_nondominated() {
        let mut rng = rng_from_seed(11);
        let mut pop: Vec<Individual<f64>> = (0..40)
            .map(|_| unconstrained(vec![rng.gen(), rng.gen()]))
            .collect();
        let fronts = fast_nondominated_sort(&mut pop);
        let total: usize = fronts.iter().map(|f| f.len()).sum();
        assert_eq!(total, pop.len(), "fronts must partition the population");
        for &i in &fronts[0] {
            for &j in &fronts[0] {
                if i != j {
                    assert!(!constrained_dominates(&pop[i], &pop[j]));
                }
            }
        }
    }

    #[test]
    fn crowding_front_of_two_is_infinite() {
        let front = vec![unconstrained(vec![0.0, 1.0]), unconstrained(vec![1.0, 0.0])];
        let d = crowding_distance(&front);
        assert!(d.iter().all(|v| v.is_infinite()));
    }

    #[test]
    fn crowding_three_collinear_equally_spaced() {
        let front = vec![
            unconstrained(vec![0.0, 2.0]),
            unconstrained(vec![1.0, 1.0]),
            unconstrained(vec![2.0, 0.0]),
        ];
        let d = crowding_distance(&front);
        assert!(d[0].is_infinite());
        assert!(d[2].is_infinite());
        assert_eq!(d[1], 2.0); // half-range + half-range per objective
    }

    #[test]
    fn crowding_is_permutation_invariant() {
        let mut rng = rng_from_seed(3);
        // mutually non-dominated: f2 strictly decreasing in f1
        let mut pts: Vec<f64> = (0..20).map(|_| rng.gen()).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let front: Vec<Individual<f64>> = pts
            .iter()
            .map(|&x| unconstrained(vec![x, 1.0 - x]))
            .collect();
        let base = crowding_distance(&front);
        let mut shuffled: Vec<usize> = (0..front.len()).collect();
        shuffled.reverse();
        let rev_front: Vec<Individual<f64>> = shuffled.iter().map(|&i| front[i].clone()).collect();
        let rev = crowding_distance(&rev_front);
        for (k, &i) in shuffled.iter().enumerate() {
            if base[i].is_finite() {
                assert!((rev[k] - base[i]).abs() < 1e-12);
            } else {
                assert!(rev[k].is_infinite());
            }
        }
    }

    fn two_var_specs() -> Vec<VariableSpec<f64>> {
        vec![
            VariableSpec::continuous("x", 0.0, 1.0),
            VariableSpec::integer("z", 14, 30),
        ]
    }

    #[test]
    fn sbx_identical_parents_yield_identical_children() {
        let specs = two_var_specs();
        let params = GAParams {
            p_crossover: 1.0,
            ..Default::default()
        };
        let mut rng = rng_from_seed(5);
        let p = DecisionVector(vec![0.25, 20.0]);
        for _ in 0..100 {
            let (a, b) = sbx_crossover(&p, &p, &specs, &params, &mut rng);
            assert_eq!(a, p);
            assert_eq!(b, p);
        }
    }

    #[test]
    fn sbx_children_always_in_bounds() {
        let specs = two_var_specs();
        let params = GAParams {
            p_crossover: 1.0,
            eta_c: 2.0,
            ..Default::default()
        };
        let mut rng = rng_from_seed(9);
        let p1 = DecisionVector(vec![0.0, 14.0]);
        let p2 = DecisionVector(vec![1.0, 30.0]);
        for _ in 0..2000 {
            let (a, b) = sbx_crossover(&p1, &p2, &specs, &params, &mut rng);
            for child in [&a, &b] {
                assert!(child.validate(&specs).is_ok(), "child {child:?} out of domain");
            }
        }
    }

    #[test]
    fn sbx_child_mean_is_parent_midpoint() {
        let specs = vec![VariableSpec::continuous("x", 0.0, 1.0)];
        let params = GAParams {
            p_crossover: 1.0,
            eta_c: 20.0,
            ..Default::default()
        };
        let mut rng = rng_from_seed(13);
        let p1 = DecisionVector(vec![0.3]);
        let p2 = DecisionVector(vec![0.7]);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let (a, b) = sbx_crossover(&p1, &p2, &specs, &params, &mut rng);
            sum += a[0] + b[0];
        }
        let mean = sum / (2 * n) as f64;
        assert!((mean - 0.5).abs() < 0.005, "mean {mean} drifts from midpoint");
    }

    #[test]
    fn mutation_zero_probability_is_identity() {
        let specs = two_var_specs();
        let params = GAParams {
            p_mutation: 0.0,
            ..Default::default()
        };
        let mut rng = rng_from_seed(21);
        let x = DecisionVector(vec![0.5, 17.0]);
        for _ in 0..50 {
            assert_eq!(polynomial_mutation(&x, &specs, &params, &mut rng), x);
        }
    }

    #[test]
    fn mutation_respects_bounds_from_lower_corner() {
        let specs = two_var_specs();
        let params = GAParams {
            p_mutation: 1.0,
            eta_m: 5.0,
            ..Default::default()
        };
        let mut rng = rng_from_seed(23);
        let x = DecisionVector(vec![0.0, 14.0]);
        for _ in 0..2000 {
            let y = polynomial_mutation(&x, &specs, &params, &mut rng);
            assert!(y.validate(&specs).is_ok());
        }
    }

    #[test]
    fn mutation_integer_domain_never_escapes() {
        let specs = vec![VariableSpec::<f64>::integer("z", 14, 30)];
        let params = GAParams {
            p_mutation: 1.0,
            eta_m: 10.0,
            ..Default::default()
        };
        let mut rng = rng_from_seed(29);
        let mut x = DecisionVector(vec![22.0]);
        for _ in 0..10_000 {
            x = polynomial_mutation(&x, &specs, &params, &mut rng);
            let v = x[0];
            assert!(v.fract() == 0.0 && (14.0..=30.0).contains(&v));
        }
    }

    fn sphere_pair_problem() -> ProblemDef<f64> {
        ProblemDef::new(
            vec![VariableSpec::continuous("x", -10.0, 10.0)],
            2,
            0,
            1e-6,
            |x: &DecisionVector<f64>| {
                let v = x[0];
                Ok((vec![v * v, (v - 2.0) * (v - 2.0)], vec![]))
            },
        )
    }

    #[test]
    fn evolve_sphere_pair_covers_analytic_front() {
        let problem = sphere_pair_problem();
        let params = GAParams {
            pop_size: 200,
            max_generations: 100,
            eta_c: 15.0,
            eta_m: 20.0,
            rng_seed: 42,
            ..Default::default()
        };
        let mut rng = rng_from_seed(params.rng_seed);
        let initial = seed_population(&problem, params.pop_size, &[], &mut rng).unwrap();
        let (_, front) = evolve(&problem, &params, initial).unwrap();
        assert!(!front.is_empty());
        for m in &front {
            assert!((-0.05..=2.05).contains(&m.x[0]), "front member off the Pareto set");
        }
        let reference = (5.0, 5.0);
        let got: Vec<(f64, f64)> = front.iter().map(|m| (m.f[0], m.f[1])).collect();
        let analytic: Vec<(f64, f64)> = (0..=10_000)
            .map(|i| {
                let x = 2.0 * i as f64 / 10_000.0;
                (x * x, (x - 2.0) * (x - 2.0))
            })
            .collect();
        let hv = oracle::hypervolume_2d(&got, reference);
        let hv_true = oracle::hypervolume_2d(&analytic, reference);
        assert!(
            hv >= 0.99 * hv_true,
            "hypervolume {hv} below 99% of analytic {hv_true}"
        );
    }

    #[test]
    fn evolve_keeps_sole_feasible_point() {
        // feasible only at x = 0.37 (within tolerance)
        let problem = ProblemDef::new(
            vec![VariableSpec::continuous("x", 0.0, 1.0)],
            2,
            2,
            1e-9,
            |x: &DecisionVector<f64>| {
                let v = x[0];
                Ok((vec![v, 1.0 - v], vec![v - 0.37, 0.37 - v]))
            },
        );
        let params = GAParams {
            pop_size: 20,
            max_generations: 10,
            rng_seed: 5,
            ..Default::default()
        };
        let mut rng = rng_from_seed(params.rng_seed);
        let seeds = vec![DecisionVector(vec![0.37])];
        let initial = seed_population(&problem, params.pop_size, &seeds, &mut rng).unwrap();
        let (final_pop, front) = evolve(&problem, &params, initial).unwrap();
        assert!(final_pop.members.iter().any(|m| m.x[0] == 0.37));
        assert!(front.iter().all(|m| m.is_feasible()));
        assert!(!front.is_empty());
    }

    #[test]
    fn evolve_is_deterministic_per_seed() {
        let problem = sphere_pair_problem();
        let params = GAParams {
            pop_size: 40,
            max_generations: 20,
            rng_seed: 77,
            ..Default::default()
        };
        let run = || {
            let mut rng = rng_from_seed(params.rng_seed);
            let initial = seed_population(&problem, params.pop_size, &[], &mut rng).unwrap();
            let (_, front) = evolve(&problem, &params, initial).unwrap();
            front
                .iter()
                .map(|m| (m.x[0].to_bits(), m.f[0].to_bits(), m.f[1].to_bits()))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn seed_population_contracts() {
        let problem = sphere_pair_problem();
        let mut rng = rng_from_seed(1);
        let pop = seed_population(&problem, 10, &[], &mut rng).unwrap();
        assert_eq!(pop.size(), 10);

        let seeds: Vec<DecisionVector<f64>> =
            (0..4).map(|i| DecisionVector(vec![i as f64])).collect();
        let pop = seed_population(&problem, 4, &seeds, &mut rng).unwrap();
        let xs: Vec<f64> = pop.members.iter().map(|m| m.x[0]).collect();
        assert_eq!(xs, vec![0.0, 1.0, 2.0, 3.0]);

        let bad = vec![DecisionVector(vec![99.0])];
        match seed_population(&problem, 4, &bad, &mut rng) {
            Err(Error::SeedRejected { index, .. }) => assert_eq!(index, 0),
            other => panic!("expected SeedRejected, got {other:?}"),
        }
    }

    #[test]
    fn elitism_front_never_regresses() {
        // every member of generation g's feasible front must be weakly
        // dominated by some member of generation g+1's combined
        // parent+child front
        fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
            a.iter().zip(b).all(|(x, y)| x <= y)
        }
        fn feasible_front_objs(members: &[Individual<f64>]) -> Vec<Vec<f64>> {
            let mut members = members.to_vec();
            let fronts = fast_nondominated_sort(&mut members);
            fronts[0]
                .iter()
                .filter(|&&i| members[i].is_feasible())
                .map(|&i| members[i].f.clone())
                .collect()
        }
        #[derive(Default)]
        struct FrontTracker {
            last_pop: Vec<Individual<f64>>,
            previous_front: Vec<Vec<f64>>,
        }
        impl EvolveObserver<f64> for FrontTracker {
            fn on_evaluated(&mut self, batch: &[Individual<f64>]) {
                if self.last_pop.is_empty() {
                    return; // initial population, no parents yet
                }
                let mut combined = self.last_pop.clone();
                combined.extend_from_slice(batch);
                let combined_front = feasible_front_objs(&combined);
                for old in &self.previous_front {
                    assert!(
                        combined_front.iter().any(|new| weakly_dominates(new, old)),
                        "front member {old:?} regressed"
                    );
                }
            }
            fn on_generation(&mut self, pop: &Population<f64>) {
                self.last_pop = pop.members.clone();
                self.previous_front = feasible_front_objs(&pop.members);
            }
        }
        let problem = sphere_pair_problem();
        let params = GAParams {
            pop_size: 30,
            max_generations: 15,
            rng_seed: 3,
            ..Default::default()
        };
        let mut rng = rng_from_seed(params.rng_seed);
        let initial = seed_population(&problem, params.pop_size, &[], &mut rng).unwrap();
        let mut tracker = FrontTracker::default();
        evolve_observed(&problem, &params, initial, &mut tracker).unwrap();
    }
}
