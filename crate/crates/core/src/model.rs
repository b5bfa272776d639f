//! Mixed-variable multi-objective constrained problems and the dominance
//! relations the solvers build on.
//!
//! Objectives are always minimized. Constraints are satisfied when
//! `c_j <= 0`; an individual's violation aggregates the positive parts.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Domain of a single decision variable.
///
/// Categorical variables are encoded as catalog indices and carry their
/// current index range so branch-and-bound can narrow them like integers;
/// only an evaluator maps index to physical value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum VarKind<S> {
    Continuous { lo: S, hi: S },
    Integer { lo: i64, hi: i64 },
    Categorical { values: Vec<S>, lo: i64, hi: i64 },
}

/// A named decision variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariableSpec<S> {
    pub name: String,
    pub kind: VarKind<S>,
}

impl<S: Scalar> VariableSpec<S> {
    pub fn continuous(name: impl Into<String>, lo: S, hi: S) -> Self {
        assert!(lo <= hi, "continuous variable requires lo <= hi");
        Self {
            name: name.into(),
            kind: VarKind::Continuous { lo, hi },
        }
    }

    pub fn integer(name: impl Into<String>, lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "integer variable requires lo <= hi");
        Self {
            name: name.into(),
            kind: VarKind::Integer { lo, hi },
        }
    }

    pub fn categorical(name: impl Into<String>, values: Vec<S>) -> Self {
        assert!(!values.is_empty(), "categorical variable requires values");
        assert!(
            values.windows(2).all(|w| w[0] < w[1]),
            "categorical values must be strictly increasing"
        );
        let hi = values.len() as i64 - 1;
        Self {
            name: name.into(),
            kind: VarKind::Categorical { values, lo: 0, hi },
        }
    }

    pub fn is_integer_like(&self) -> bool {
        !matches!(self.kind, VarKind::Continuous { .. })
    }

    /// Integer index bounds for integer/categorical variables.
    pub fn int_bounds(&self) -> Option<(i64, i64)> {
        match &self.kind {
            VarKind::Continuous { .. } => None,
            VarKind::Integer { lo, hi } => Some((*lo, *hi)),
            VarKind::Categorical { lo, hi, .. } => Some((*lo, *hi)),
        }
    }

    /// Bounds of the slot in value space (index space for categoricals).
    pub fn real_bounds(&self) -> (S, S) {
        match &self.kind {
            VarKind::Continuous { lo, hi } => (*lo, *hi),
            VarKind::Integer { lo, hi } => (S::of(*lo as f64), S::of(*hi as f64)),
            VarKind::Categorical { lo, hi, .. } => (S::of(*lo as f64), S::of(*hi as f64)),
        }
    }

    /// Same variable with a narrowed integer/categorical range.
    /// Panics when called on a continuous variable or with an invalid range.
    pub fn restrict_int(&self, lo: i64, hi: i64) -> Self {
        let (root_lo, root_hi) = self
            .int_bounds()
            .expect("restrict_int on continuous variable");
        assert!(
            root_lo <= lo && lo <= hi && hi <= root_hi,
            "restriction [{lo}, {hi}] outside [{root_lo}, {root_hi}]"
        );
        let kind = match &self.kind {
            VarKind::Integer { .. } => VarKind::Integer { lo, hi },
            VarKind::Categorical { values, .. } => VarKind::Categorical {
                values: values.clone(),
                lo,
                hi,
            },
            VarKind::Continuous { .. } => unreachable!(),
        };
        Self {
            name: self.name.clone(),
            kind,
        }
    }

    /// Whether `value` is a member of the domain (exact integrality for
    /// integer-like slots).
    pub fn contains(&self, value: S) -> bool {
        match &self.kind {
            VarKind::Continuous { lo, hi } => *lo <= value && value <= *hi,
            _ => {
                let (lo, hi) = self.int_bounds().unwrap();
                value.fract() == S::zero()
                    && value >= S::of(lo as f64)
                    && value <= S::of(hi as f64)
            }
        }
    }

    /// Uniform sample from the domain.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> S {
        match &self.kind {
            VarKind::Continuous { lo, hi } => {
                let u = rng.gen::<f64>();
                *lo + (*hi - *lo) * S::of(u)
            }
            _ => {
                let (lo, hi) = self.int_bounds().unwrap();
                S::of(rng.gen_range(lo..=hi) as f64)
            }
        }
    }

    /// Projects an arbitrary real onto the domain: clamp for continuous
    /// slots, round half-away-from-zero then clamp for integer-like slots.
    pub fn project(&self, value: S) -> S {
        match &self.kind {
            VarKind::Continuous { lo, hi } => value.max(*lo).min(*hi),
            _ => {
                let (lo, hi) = self.int_bounds().unwrap();
                let rounded = value.round();
                rounded.max(S::of(lo as f64)).min(S::of(hi as f64))
            }
        }
    }
}

/// A point in the search space, one slot per [`VariableSpec`] in spec order.
/// Categorical slots hold the catalog index as an integer-valued real.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionVector<S>(pub Vec<S>);

impl<S: Scalar> DecisionVector<S> {
    pub fn values(&self) -> &[S] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks length and per-slot domain membership.
    pub fn validate(&self, specs: &[VariableSpec<S>]) -> Result<()> {
        if self.0.len() != specs.len() {
            return Err(Error::VectorLength {
                got: self.0.len(),
                expected: specs.len(),
            });
        }
        for (i, (v, spec)) in self.0.iter().zip(specs).enumerate() {
            if !spec.contains(*v) {
                return Err(Error::OutOfDomain {
                    index: i,
                    name: spec.name.clone(),
                    value: v.as_f64(),
                });
            }
        }
        Ok(())
    }
}

impl<S> std::ops::Index<usize> for DecisionVector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

/// Aggregated constraint violation: `sum_j max(0, c_j - tol)`.
/// Zero exactly when every constraint is within tolerance.
pub fn violation<S: Scalar>(c: &[S], tol: S) -> S {
    c.iter()
        .map(|&cj| (cj - tol).max(S::zero()))
        .fold(S::zero(), |acc, v| acc + v)
}

/// Standard Pareto dominance for minimization: `a` dominates `b` iff it is
/// no worse in every objective and strictly better in at least one.
pub fn dominates<S: Scalar>(a: &[S], b: &[S]) -> bool {
    assert_eq!(a.len(), b.len(), "objective vectors differ in length");
    let mut strict = false;
    for (&ai, &bi) in a.iter().zip(b) {
        if ai > bi {
            return false;
        }
        if ai < bi {
            strict = true;
        }
    }
    strict
}

/// An evaluated member of a population.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Individual<S> {
    pub x: DecisionVector<S>,
    /// Objective values (length `p`).
    pub f: Vec<S>,
    /// Constraint values (length `m`), feasible iff all `<= 0` within tolerance.
    pub c: Vec<S>,
    pub violation: S,
    pub rank: Option<usize>,
    pub crowding: Option<S>,
}

impl<S: Scalar> Individual<S> {
    pub fn is_feasible(&self) -> bool {
        self.violation == S::zero()
    }
}

/// Deb's feasibility-first comparison: feasible beats infeasible, lower
/// violation beats higher, objectives decide between feasible pairs.
pub fn constrained_dominates<S: Scalar>(a: &Individual<S>, b: &Individual<S>) -> bool {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => a.violation < b.violation,
        (true, true) => dominates(&a.f, &b.f),
    }
}

type Evaluator<S> = dyn Fn(&DecisionVector<S>) -> std::result::Result<(Vec<S>, Vec<S>), String>
    + Send
    + Sync;

/// A problem instance: variable specs, objective/constraint counts and a
/// pure evaluator. The evaluator must be deterministic and thread-safe.
#[derive(Clone)]
pub struct ProblemDef<S> {
    pub specs: Vec<VariableSpec<S>>,
    pub objectives: usize,
    pub constraints: usize,
    /// Feasibility tolerance applied per constraint when aggregating violation.
    pub feas_tol: S,
    evaluator: Arc<Evaluator<S>>,
}

impl<S: Scalar> ProblemDef<S> {
    pub fn new<F>(
        specs: Vec<VariableSpec<S>>,
        objectives: usize,
        constraints: usize,
        feas_tol: S,
        evaluator: F,
    ) -> Self
    where
        F: Fn(&DecisionVector<S>) -> std::result::Result<(Vec<S>, Vec<S>), String>
            + Send
            + Sync
            + 'static,
    {
        Self {
            specs,
            objectives,
            constraints,
            feas_tol,
            evaluator: Arc::new(evaluator),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.specs.len()
    }

    /// Indices of integer and categorical variables, in spec order.
    pub fn int_var_indices(&self) -> Vec<usize> {
        self.specs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_integer_like())
            .map(|(i, _)| i)
            .collect()
    }

    /// Evaluates a decision vector into an [`Individual`].
    pub fn evaluate(&self, x: DecisionVector<S>) -> Result<Individual<S>> {
        let (f, c) = (self.evaluator)(&x).map_err(|message| Error::Evaluation {
            message,
            vector: x.0.iter().map(|v| v.as_f64()).collect(),
        })?;
        assert_eq!(f.len(), self.objectives, "evaluator returned wrong |f|");
        assert_eq!(c.len(), self.constraints, "evaluator returned wrong |c|");
        let violation = violation(&c, self.feas_tol);
        Ok(Individual {
            x,
            f,
            c,
            violation,
            rank: None,
            crowding: None,
        })
    }

    /// Same problem with integer/categorical domains narrowed.
    /// `restrictions` are `(spec index, lo, hi)` triples.
    pub fn restricted(&self, restrictions: &[(usize, i64, i64)]) -> Self {
        let mut specs = self.specs.clone();
        for &(var, lo, hi) in restrictions {
            specs[var] = specs[var].restrict_int(lo, hi);
        }
        Self {
            specs,
            objectives: self.objectives,
            constraints: self.constraints,
            feas_tol: self.feas_tol,
            evaluator: Arc::clone(&self.evaluator),
        }
    }
}

impl<S: Scalar> fmt::Debug for ProblemDef<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDef")
            .field("n_vars", &self.specs.len())
            .field("objectives", &self.objectives)
            .field("constraints", &self.constraints)
            .field("feas_tol", &self.feas_tol)
            .finish()
    }
}
