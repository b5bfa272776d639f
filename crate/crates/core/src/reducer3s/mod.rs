//! The three-stage reducer benchmark: 2 objectives (component volume and
//! reduction-ratio gap), 41 constraints, 3 categorical variables (module
//! catalog indices), 6 integers (tooth counts) and 11 continuous variables
//! (3 facewidths, 3 profile shifts, 4 shaft radii, 1 orientation angle).
//!
//! Variable order in the decision vector:
//!
//! | index | variable            | kind        | domain            |
//! |-------|---------------------|-------------|-------------------|
//! | 0     | m1 (catalog index)  | categorical | 41 modules        |
//! | 1     | z1_1 pinion teeth   | integer     | 14..=30           |
//! | 2     | z2_1 wheel teeth    | integer     | 14..=150          |
//! | 3..5  | m2, z1_2, z2_2      | as above    |                   |
//! | 6..8  | m3, z1_3, z2_3      | as above    |                   |
//! | 9..11 | b1..b3 facewidth    | continuous  | bounds.b, mm      |
//! | 12..14| x1_1..x1_3 shift    | continuous  | bounds.x1         |
//! | 15..18| r_a0..r_a3 radius   | continuous  | bounds.r_a, mm    |
//! | 19    | xi1 orientation     | continuous  | bounds.xi1, rad   |

pub mod config;
pub mod geometry;
pub mod stress;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::model::{DecisionVector, ProblemDef, VariableSpec};
use crate::scalar::Scalar;

pub use config::{default_module_catalog, Casing, FactorTable, ReducerConfig, VarBounds};
pub use geometry::{
    center_distance, closure_analysis, closure_geometry, transverse_contact_ratio,
    ClosureAnalysis, ClosureInfeasible, ClosureSolution,
};
pub use stress::{
    bending_stress, contact_stress, geometric_constraints, input_torque, permissible_bending,
    permissible_contact, shaft_constraints, shaft_torques, stage_power_constraints, stage_state,
    StageState,
};

pub const N_STAGES: usize = 3;
pub const N_VARS: usize = 20;
pub const N_OBJECTIVES: usize = 2;
pub const N_CONSTRAINTS: usize = 41;

pub const Z1_MIN: i64 = 14;
pub const Z1_MAX: i64 = 30;
pub const Z2_MIN: i64 = 14;
pub const Z2_MAX: i64 = 150;

/// One gear stage of a decoded decision vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageVars<S> {
    pub module_index: usize,
    /// Physical normal module from the catalog, mm.
    pub module: S,
    pub z1: i64,
    pub z2: i64,
    /// Facewidth, mm.
    pub b: S,
    /// Pinion profile shift coefficient (wheel gets the opposite sign).
    pub x1: S,
}

/// Decoded view of a reducer decision vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducerVariables<S> {
    pub stages: [StageVars<S>; N_STAGES],
    /// Input shaft plus the three stage output shafts, mm.
    pub shaft_radii: [S; 4],
    /// Orientation of the first stage center line, rad.
    pub xi1: S,
}

/// Variable specifications of the reducer search space.
pub fn specs<S: Scalar>(cfg: &ReducerConfig<S>) -> Vec<VariableSpec<S>> {
    let mut out = Vec::with_capacity(N_VARS);
    for s in 1..=N_STAGES {
        out.push(VariableSpec::categorical(
            format!("m{s}"),
            cfg.module_catalog.clone(),
        ));
        out.push(VariableSpec::integer(format!("z1_{s}"), Z1_MIN, Z1_MAX));
        out.push(VariableSpec::integer(format!("z2_{s}"), Z2_MIN, Z2_MAX));
    }
    for s in 1..=N_STAGES {
        out.push(VariableSpec::continuous(
            format!("b{s}"),
            cfg.bounds.b.0,
            cfg.bounds.b.1,
        ));
    }
    for s in 1..=N_STAGES {
        out.push(VariableSpec::continuous(
            format!("x1_{s}"),
            cfg.bounds.x1.0,
            cfg.bounds.x1.1,
        ));
    }
    for s in 0..4 {
        out.push(VariableSpec::continuous(
            format!("r_a{s}"),
            cfg.bounds.r_a.0,
            cfg.bounds.r_a.1,
        ));
    }
    out.push(VariableSpec::continuous(
        "xi1",
        cfg.bounds.xi1.0,
        cfg.bounds.xi1.1,
    ));
    out
}

/// Decodes a decision vector (categorical slots hold catalog indices).
pub fn decode<S: Scalar>(x: &DecisionVector<S>, cfg: &ReducerConfig<S>) -> ReducerVariables<S> {
    assert_eq!(x.len(), N_VARS, "reducer vector has 20 slots");
    let int_at = |i: usize| x[i].as_f64().round() as i64;
    let stage = |k: usize| {
        let module_index = int_at(3 * k) as usize;
        StageVars {
            module_index,
            module: cfg.module_catalog[module_index],
            z1: int_at(3 * k + 1),
            z2: int_at(3 * k + 2),
            b: x[9 + k],
            x1: x[12 + k],
        }
    };
    ReducerVariables {
        stages: [stage(0), stage(1), stage(2)],
        shaft_radii: [x[15], x[16], x[17], x[18]],
        xi1: x[19],
    }
}

/// Inverse of [`decode`].
pub fn encode<S: Scalar>(v: &ReducerVariables<S>) -> DecisionVector<S> {
    let mut x = Vec::with_capacity(N_VARS);
    for st in &v.stages {
        x.push(S::of(st.module_index as f64));
        x.push(S::of(st.z1 as f64));
        x.push(S::of(st.z2 as f64));
    }
    for st in &v.stages {
        x.push(st.b);
    }
    for st in &v.stages {
        x.push(st.x1);
    }
    x.extend_from_slice(&v.shaft_radii);
    x.push(v.xi1);
    DecisionVector(x)
}

/// Total volume of shafts and gear blanks (Eq.-level arithmetic):
/// `pi (sum l_a,s r_a,s^2 + sum b_s m_s^2/2 (z1^2 + z2^2))`, mm^3.
pub fn volume_objective<S: Scalar>(v: &ReducerVariables<S>, cfg: &ReducerConfig<S>) -> S {
    let shafts: S = (0..4)
        .map(|s| cfg.shaft_lengths[s] * v.shaft_radii[s] * v.shaft_radii[s])
        .sum();
    let gears: S = v
        .stages
        .iter()
        .map(|st| {
            st.b * st.module * st.module * S::half()
                * S::of((st.z1 * st.z1 + st.z2 * st.z2) as f64)
        })
        .sum();
    S::PI() * (shafts + gears)
}

/// Relative gap between the target ratio and the achieved tooth-count
/// ratio: `|u_bar - prod z2/z1| / u_bar`. Computed in exact rational
/// arithmetic so the result is exactly zero iff the tooth-ratio product
/// equals `u_bar` as a rational number.
pub fn ratio_objective<S: Scalar>(v: &ReducerVariables<S>, cfg: &ReducerConfig<S>) -> S {
    let mut num: u64 = 1;
    let mut den: u64 = 1;
    for st in &v.stages {
        num *= st.z2 as u64;
        den *= st.z1 as u64;
    }
    let achieved = BigRational::new(BigInt::from(num), BigInt::from(den));
    let target = BigRational::from_float(cfg.u_bar.as_f64()).expect("u_bar is finite");
    if achieved == target {
        return S::zero();
    }
    let rel = (&target - &achieved).abs() / &target;
    S::of(rel.to_f64().expect("ratio gap fits in f64"))
}

/// Tip radius of the largest gear mounted on each of the four shafts.
fn shaft_stack_radii<S: Scalar>(v: &ReducerVariables<S>, cfg: &ReducerConfig<S>) -> [S; 4] {
    let tp = |s: usize| geometry::tip_radius_pinion(&v.stages[s], cfg);
    let tw = |s: usize| geometry::tip_radius_wheel(&v.stages[s], cfg);
    [
        tp(0),
        tw(0).max(tp(1)),
        tw(1).max(tp(2)),
        tw(2),
    ]
}

/// One documented constraint slot.
#[derive(Clone, Copy, Debug)]
pub struct ConstraintInfo {
    pub index: usize,
    pub name: &'static str,
    pub block: &'static str,
    pub description: &'static str,
}

/// The stable 41-entry constraint layout. Golden-tested; printed by the
/// CLI `schema` subcommand.
pub fn constraint_index_map() -> Vec<ConstraintInfo> {
    let mut map = Vec::with_capacity(N_CONSTRAINTS);
    let mut push = |name: &'static str, block: &'static str, description: &'static str| {
        let index = map.len();
        map.push(ConstraintInfo {
            index,
            name,
            block,
            description,
        });
    };
    push("s1_bend", "power", "1 - min(sigma_FP/sigma_F) over pinion and wheel, stage 1");
    push("s1_contact", "power", "1 - min((sigma_HP/sigma_H)^2) over pinion and wheel, stage 1");
    push("s2_bend", "power", "1 - min(sigma_FP/sigma_F), stage 2");
    push("s2_contact", "power", "1 - min((sigma_HP/sigma_H)^2), stage 2");
    push("s3_bend", "power", "1 - min(sigma_FP/sigma_F), stage 3");
    push("s3_contact", "power", "1 - min((sigma_HP/sigma_H)^2), stage 3");
    push("s1_eps", "geometry", "1.3 - eps_alpha, stage 1");
    push("s1_bmin", "geometry", "0.1 d2 - b (mm), stage 1");
    push("s1_bmax", "geometry", "b - d1 (mm), stage 1");
    push("s1_shift", "geometry", "0.1812 - x1, stage 1");
    push("s2_eps", "geometry", "1.3 - eps_alpha, stage 2");
    push("s2_bmin", "geometry", "0.1 d2 - b (mm), stage 2");
    push("s2_bmax", "geometry", "b - d1 (mm), stage 2");
    push("s2_shift", "geometry", "0.1812 - x1, stage 2");
    push("s3_eps", "geometry", "1.3 - eps_alpha, stage 3");
    push("s3_bmin", "geometry", "0.1 d2 - b (mm), stage 3");
    push("s3_bmax", "geometry", "b - d1 (mm), stage 3");
    push("s3_shift", "geometry", "0.1812 - x1, stage 3");
    push("closure_reach", "fitting", "(|O_out - O1| - (a2 + a3)) / o1o3");
    push("closure_gap", "fitting", "(|a2 - a3| - |O_out - O1|) / o1o3");
    push("shaft0_x_lo", "fitting", "input shaft stack past the casing -x wall, / half_width");
    push("shaft0_x_hi", "fitting", "input shaft stack past the casing +x wall, / half_width");
    push("shaft0_y_lo", "fitting", "input shaft stack past the casing -y wall, / half_height");
    push("shaft0_y_hi", "fitting", "input shaft stack past the casing +y wall, / half_height");
    push("shaft1_x_lo", "fitting", "shaft 1 stack past the casing -x wall, / half_width");
    push("shaft1_x_hi", "fitting", "shaft 1 stack past the casing +x wall, / half_width");
    push("shaft1_y_lo", "fitting", "shaft 1 stack past the casing -y wall, / half_height");
    push("shaft1_y_hi", "fitting", "shaft 1 stack past the casing +y wall, / half_height");
    push("shaft2_x_lo", "fitting", "shaft 2 stack past the casing -x wall, / half_width");
    push("shaft2_x_hi", "fitting", "shaft 2 stack past the casing +x wall, / half_width");
    push("shaft2_y_lo", "fitting", "shaft 2 stack past the casing -y wall, / half_height");
    push("shaft2_y_hi", "fitting", "shaft 2 stack past the casing +y wall, / half_height");
    push("shaft3_x_lo", "fitting", "output shaft stack past the casing -x wall, / half_width");
    push("shaft3_x_hi", "fitting", "output shaft stack past the casing +x wall, / half_width");
    push("shaft3_y_lo", "fitting", "output shaft stack past the casing -y wall, / half_height");
    push("shaft3_y_hi", "fitting", "output shaft stack past the casing +y wall, / half_height");
    push("tau0", "shafts", "tau_0 / tau_max - 1 (input shaft shear)");
    push("tau1", "shafts", "tau_1 / tau_max - 1");
    push("tau2", "shafts", "tau_2 / tau_max - 1");
    push("tau3", "shafts", "tau_3 / tau_max - 1");
    push("theta", "shafts", "theta / theta_max - 1 (total twist angle)");
    assert_eq!(map.len(), N_CONSTRAINTS);
    map
}

/// Number of integer/categorical combinations of the search space.
pub fn combinatorial_size<S: Scalar>(cfg: &ReducerConfig<S>) -> u128 {
    specs(cfg)
        .iter()
        .filter_map(|s| s.int_bounds())
        .map(|(lo, hi)| (hi - lo + 1) as u128)
        .product()
}

/// Evaluates objectives and the 41-entry constraint vector.
pub fn evaluate<S: Scalar>(
    v: &ReducerVariables<S>,
    cfg: &ReducerConfig<S>,
) -> (Vec<S>, Vec<S>) {
    let f = vec![volume_objective(v, cfg), ratio_objective(v, cfg)];
    let mut c = Vec::with_capacity(N_CONSTRAINTS);

    // power block (6)
    let states: Vec<StageState<S>> = (0..N_STAGES).map(|s| stage_state(v, cfg, s)).collect();
    for st in &states {
        let (c_bend, c_contact) = stage_power_constraints(st, cfg);
        c.push(c_bend);
        c.push(c_contact);
    }

    // geometric block (12)
    for st in &states {
        let (c_eps, c_bmin, c_bmax, c_shift) = geometric_constraints(st, cfg);
        c.push(c_eps);
        c.push(c_bmin);
        c.push(c_bmax);
        c.push(c_shift);
    }

    // fitting block (18): closure margins + casing walls per shaft stack
    let analysis = closure_analysis(v, cfg);
    c.push(analysis.reach_margin);
    c.push(analysis.gap_margin);
    let centers = [
        [S::zero(), S::zero()],
        analysis.o1,
        analysis.chosen_o2,
        analysis.o3,
    ];
    let radii = shaft_stack_radii(v, cfg);
    let cx = cfg.o1o3 * S::half();
    let (w, h) = (cfg.casing.half_width, cfg.casing.half_height);
    for (center, radius) in centers.iter().zip(radii) {
        c.push(((cx - w) - (center[0] - radius)) / w);
        c.push(((center[0] + radius) - (cx + w)) / w);
        c.push(((-h) - (center[1] - radius)) / h);
        c.push(((center[1] + radius) - h) / h);
    }

    // shaft block (5)
    let (c_tau, c_theta) = shaft_constraints(v, cfg);
    c.extend_from_slice(&c_tau);
    c.push(c_theta);

    debug_assert_eq!(c.len(), N_CONSTRAINTS);
    (f, c)
}

/// Builds the complete problem definition for an instance.
pub fn assemble<S: Scalar>(cfg: &ReducerConfig<S>) -> ProblemDef<S> {
    let cfg = cfg.clone();
    let variable_specs = specs(&cfg);
    let feas_tol = cfg.feas_tol;
    ProblemDef::new(
        variable_specs,
        N_OBJECTIVES,
        N_CONSTRAINTS,
        feas_tol,
        move |x: &DecisionVector<S>| {
            let v = decode(x, &cfg);
            Ok(evaluate(&v, &cfg))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsga2::{random_vector, rng_from_seed};
    use num_traits::One;
    use rand::Rng;

    fn zeroed_vars() -> ReducerVariables<f64> {
        let st = StageVars {
            module_index: 0,
            module: 1.0,
            z1: 10,
            z2: 10,
            b: 0.0,
            x1: 0.2,
        };
        ReducerVariables {
            stages: [st, st, st],
            shaft_radii: [1.0, 1.0, 1.0, 1.0],
            xi1: 0.0,
        }
    }

    #[test]
    fn volume_shaft_only_case() {
        let mut cfg = ReducerConfig::<f64>::default();
        cfg.shaft_lengths = [1.0; 4];
        let v = zeroed_vars();
        let f1 = volume_objective(&v, &cfg);
        assert!((f1 - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn volume_single_stage_case() {
        let mut cfg = ReducerConfig::<f64>::default();
        cfg.shaft_lengths = [0.0; 4];
        let mut v = zeroed_vars();
        v.shaft_radii = [0.0; 4];
        v.stages[0].b = 2.0;
        let f1 = volume_objective(&v, &cfg);
        // pi * 2 * (1/2) * (100 + 100) = 200 pi
        assert!((f1 - 200.0 * std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn volume_matches_high_precision_recomputation() {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let cfg = ReducerConfig::<f64>::default();
        let problem_specs = specs(&cfg);
        let mut rng = rng_from_seed(71);
        for _ in 0..500 {
            let x = random_vector(&problem_specs, &mut rng);
            let v = decode(&x, &cfg);
            let f1 = volume_objective(&v, &cfg);

            let rat = |v: f64| BigRational::from_float(v).unwrap();
            let mut inner = BigRational::from_integer(BigInt::from(0));
            for s in 0..4 {
                inner += rat(cfg.shaft_lengths[s]) * rat(v.shaft_radii[s]) * rat(v.shaft_radii[s]);
            }
            for st in &v.stages {
                inner += rat(st.b)
                    * rat(st.module)
                    * rat(st.module)
                    * BigRational::new(BigInt::from(st.z1 * st.z1 + st.z2 * st.z2), BigInt::from(2));
            }
            let oracle = std::f64::consts::PI * inner.to_f64().unwrap();
            assert!(
                (f1 - oracle).abs() <= 1e-12 * oracle.abs(),
                "volume {f1} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn ratio_exact_match_is_exactly_zero() {
        let mut cfg = ReducerConfig::<f64>::default();
        cfg.u_bar = 10.0;
        let mut v = zeroed_vars();
        // 2 * 2 * 2.5 = 10
        let teeth = [(14, 28), (15, 30), (14, 35)];
        for (k, (z1, z2)) in teeth.iter().enumerate() {
            v.stages[k].z1 = *z1;
            v.stages[k].z2 = *z2;
        }
        assert_eq!(ratio_objective(&v, &cfg), 0.0);
    }

    #[test]
    fn ratio_simple_gap() {
        let mut cfg = ReducerConfig::<f64>::default();
        cfg.u_bar = 10.0;
        let mut v = zeroed_vars();
        // 3 * 3 * 1 = 9
        let teeth = [(14, 42), (15, 45), (20, 20)];
        for (k, (z1, z2)) in teeth.iter().enumerate() {
            v.stages[k].z1 = *z1;
            v.stages[k].z2 = *z2;
        }
        assert!((ratio_objective(&v, &cfg) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn ratio_zero_iff_exact_rational_equality() {
        // independent oracle: u128 cross-multiplication against the exact
        // binary expansion of u_bar
        fn oracle_is_exact(z: &[(i64, i64); 3], u_bar: f64) -> bool {
            let num: u128 = z.iter().map(|p| p.1 as u128).product();
            let den: u128 = z.iter().map(|p| p.0 as u128).product();
            // u_bar = mant * 2^exp exactly
            let bits = u_bar.to_bits();
            let raw_exp = ((bits >> 52) & 0x7ff) as i64;
            let raw_mant = bits & ((1u64 << 52) - 1);
            let (mant, exp) = if raw_exp == 0 {
                (raw_mant as u128, -1074i64)
            } else {
                ((raw_mant | (1 << 52)) as u128, raw_exp - 1075)
            };
            // compare num/den with mant*2^exp via cross multiplication
            if exp >= 0 {
                num == den.checked_mul(mant << exp as u32).unwrap_or(u128::MAX)
            } else {
                let shift = (-exp) as u32;
                if shift > 90 {
                    // num * 2^shift overflows only if num huge; num <= 150^3 < 2^22
                    // and shift <= 1074 is unreachable for u_bar in (1, 1000)
                    return false;
                }
                (num << shift) == den.wrapping_mul(mant)
            }
        }
        let mut cfg = ReducerConfig::<f64>::default();
        let mut rng = rng_from_seed(73);
        let mut zeros = 0;
        for trial in 0..20_000 {
            let mut v = zeroed_vars();
            let mut teeth = [(0i64, 0i64); 3];
            if trial % 5 == 0 {
                // constructed exact case: 2 * 2 * 4 = 16 with random pinions
                cfg.u_bar = 16.0;
                let z = [
                    (rng.gen_range(14..=30), 2),
                    (rng.gen_range(14..=30), 2),
                    (rng.gen_range(14..=30), 4),
                ];
                for (k, (z1, mult)) in z.iter().enumerate() {
                    teeth[k] = (*z1, z1 * mult);
                }
            } else {
                cfg.u_bar = if trial % 3 == 0 {
                    16.0
                } else {
                    rng.gen_range(1.5..40.0)
                };
                for t in &mut teeth {
                    *t = (rng.gen_range(14..=30), rng.gen_range(14..=150));
                }
            }
            for (k, (z1, z2)) in teeth.iter().enumerate() {
                v.stages[k].z1 = *z1;
                v.stages[k].z2 = *z2;
            }
            let f2 = ratio_objective(&v, &cfg);
            let exact = oracle_is_exact(&teeth, cfg.u_bar);
            assert_eq!(f2 == 0.0, exact, "teeth {teeth:?} target {}", cfg.u_bar);
            if exact {
                zeros += 1;
            }
        }
        assert!(zeros > 100, "test must exercise the exact branch, got {zeros}");
    }

    #[test]
    fn decode_encode_roundtrip() {
        let cfg = ReducerConfig::<f64>::default();
        let problem_specs = specs(&cfg);
        let mut rng = rng_from_seed(79);
        for _ in 0..2000 {
            let x = random_vector(&problem_specs, &mut rng);
            let v = decode(&x, &cfg);
            let back = encode(&v);
            assert_eq!(x, back);
        }
    }

    #[test]
    fn evaluation_contract_sizes() {
        let cfg = ReducerConfig::<f64>::default();
        let problem = assemble(&cfg);
        assert_eq!(problem.n_vars(), N_VARS);
        let mut rng = rng_from_seed(83);
        for _ in 0..200 {
            let x = random_vector(&problem.specs, &mut rng);
            let ind = problem.evaluate(x).unwrap();
            assert_eq!(ind.f.len(), 2);
            assert_eq!(ind.c.len(), 41);
            assert!(ind.f[0] >= 0.0, "volume is non-negative");
            assert!(ind.f[1] >= 0.0, "ratio gap is non-negative");
        }
    }

    #[test]
    fn combinatorial_size_is_the_published_product() {
        let cfg = ReducerConfig::<f64>::default();
        let size = combinatorial_size(&cfg);
        let expected: u128 = {
            let modules = 41u128.pow(3);
            let pinions = 17u128.pow(3);
            let wheels = 137u128.pow(3);
            modules * pinions * wheels
        };
        assert_eq!(size, expected);
        let approx = size as f64;
        assert!((approx / 8.7e14 - 1.0).abs() < 0.01, "size {approx:e}");
    }

    #[test]
    fn constraint_map_is_stable() {
        let map = constraint_index_map();
        assert_eq!(map.len(), 41);
        let names: Vec<&str> = map.iter().map(|c| c.name).collect();
        assert_eq!(names[0], "s1_bend");
        assert_eq!(names[5], "s3_contact");
        assert_eq!(names[6], "s1_eps");
        assert_eq!(names[17], "s3_shift");
        assert_eq!(names[18], "closure_reach");
        assert_eq!(names[19], "closure_gap");
        assert_eq!(names[20], "shaft0_x_lo");
        assert_eq!(names[35], "shaft3_y_hi");
        assert_eq!(names[36], "tau0");
        assert_eq!(names[40], "theta");
        for (i, info) in map.iter().enumerate() {
            assert_eq!(info.index, i);
        }
    }

    /// A relaxed instance where a hand-built vector is feasible, so single
    /// constraints can be violated in isolation.
    fn relaxed_config() -> ReducerConfig<f64> {
        ReducerConfig::<f64> {
            tau_max: 1e6,
            theta_max: 1e6,
            casing: Casing {
                half_width: 1e5,
                half_height: 1e5,
            },
            o1o3: 300.0,
            sigma_f_lim: 1e9,
            sigma_h_lim: 1e9,
            bounds: VarBounds {
                b: (1.0, 400.0),
                ..Default::default()
            },
            ..Default::default()
        }
    }

    fn relaxed_feasible_vars() -> ReducerVariables<f64> {
        let st = StageVars {
            module_index: 14, // 4.0 mm
            module: 4.0,
            z1: 20,
            z2: 50,
            b: 60.0,
            x1: 0.3,
        };
        ReducerVariables {
            stages: [st, st, st],
            shaft_radii: [30.0, 35.0, 40.0, 45.0],
            xi1: 0.3,
        }
    }

    #[test]
    fn facewidth_violation_is_isolated() {
        let cfg = relaxed_config();
        let v = relaxed_feasible_vars();
        let (_, c) = evaluate(&v, &cfg);
        let violated: Vec<usize> = (0..41).filter(|&i| c[i] > cfg.feas_tol).collect();
        assert!(violated.is_empty(), "baseline must be feasible, got {violated:?}");

        let mut thin = v.clone();
        thin.stages[0].b = 5.0; // below 0.1 * d2 for stage 1
        let (_, c) = evaluate(&thin, &cfg);
        let violated: Vec<usize> = (0..41).filter(|&i| c[i] > cfg.feas_tol).collect();
        let map = constraint_index_map();
        assert_eq!(violated.len(), 1, "only one constraint should trip");
        assert_eq!(map[violated[0]].name, "s1_bmin");

        let mut wide = v.clone();
        wide.stages[1].b = 200.0; // above d1 for stage 2
        let (_, c) = evaluate(&wide, &cfg);
        let violated: Vec<usize> = (0..41).filter(|&i| c[i] > cfg.feas_tol).collect();
        assert_eq!(violated.len(), 1);
        assert_eq!(map[violated[0]].name, "s2_bmax");
    }

    #[test]
    fn volume_grows_with_any_shaft_radius() {
        let cfg = ReducerConfig::<f64>::default();
        let mut rng = rng_from_seed(89);
        let problem_specs = specs(&cfg);
        for _ in 0..200 {
            let x = random_vector(&problem_specs, &mut rng);
            let v = decode(&x, &cfg);
            let f1 = volume_objective(&v, &cfg);
            for s in 0..4 {
                let mut grown = v.clone();
                grown.shaft_radii[s] *= 1.05;
                assert!(volume_objective(&grown, &cfg) > f1);
            }
        }
    }

    #[test]
    fn generic_scalar_instantiates_at_f32() {
        let cfg = ReducerConfig::<f32>::default();
        let problem = assemble(&cfg);
        let mut rng = rng_from_seed(97);
        let x = random_vector(&problem.specs, &mut rng);
        let ind = problem.evaluate(x).unwrap();
        assert_eq!(ind.f.len(), 2);
        assert_eq!(ind.c.len(), 41);
        let one = f32::one();
        assert!(one.is_finite());
    }
}
