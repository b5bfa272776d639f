//! Hybrid multi-criteria branch-and-bound / NSGA-II solver for mixed-integer
//! multi-objective problems, plus the three-stage gear reducer benchmark it
//! was built around.
//!
//! The pieces compose bottom-up:
//!
//! - [`model`] — mixed-variable problem definitions and dominance relations;
//! - [`nsga2`] — a constrained NSGA-II engine (SBX, polynomial mutation,
//!   feasibility-first selection), used standalone and as the bounding
//!   solver inside every tree node;
//! - [`mcbb`] — the multi-criteria branch-and-bound tree with the three
//!   fathoming rules and population inheritance ("legacy") between parent
//!   and child nodes;
//! - [`seeder`] — the harvest-then-solve pipeline: run a modified tree until
//!   feasible individuals appear, then start a standalone NSGA-II from them;
//! - [`reducer3s`] — the three-stage reducer instance: 2 objectives,
//!   41 constraints, 3 catalog modules, 6 tooth counts, 11 continuous
//!   variables;
//! - [`oracle`] — brute-force reference solvers and hypervolume, used by
//!   tests and benchmark summaries.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the default precision used by the CLI and the shipped configs.

pub mod error;
pub mod mcbb;
pub mod model;
pub mod nsga2;
pub mod oracle;
pub mod reducer3s;
pub mod scalar;
pub mod seeder;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default scalar for the shipped binaries and configuration files.
pub type Real = f64;

pub type Problem = model::ProblemDef<Real>;
pub type Point = model::DecisionVector<Real>;
pub type Member = model::Individual<Real>;
pub type Pop = nsga2::Population<Real>;

/// SplitMix64 step; used to derive independent RNG streams from one seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
