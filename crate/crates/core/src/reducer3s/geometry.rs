//! Closure geometry and involute gear geometry for the reducer.
//!
//! Frame convention: the input shaft center sits at the origin, the required
//! output shaft center at `(o1o3, 0)`. Stage 1 places the first intermediate
//! shaft at `O1 = a1 (cos xi1, sin xi1)`; stages 2 and 3 must then close the
//! chain onto the output center, which is possible exactly when the triangle
//! inequalities hold for `(a2, a3, |O_out - O1|)`.

use std::fmt;

use crate::scalar::Scalar;

use super::config::ReducerConfig;
use super::{ReducerVariables, StageVars};

/// Stage center distance `a_s = m_n (z1 + z2) / (2 cos beta)`, mm.
pub fn center_distance<S: Scalar>(stage: &StageVars<S>, cfg: &ReducerConfig<S>) -> S {
    stage.module * S::of((stage.z1 + stage.z2) as f64) / (S::two() * cfg.beta.cos())
}

/// Transverse module `m_t = m_n / cos beta`.
pub fn transverse_module<S: Scalar>(stage: &StageVars<S>, cfg: &ReducerConfig<S>) -> S {
    stage.module / cfg.beta.cos()
}

/// Pinion tip radius with profile shift `x1` (wheel shift is `-x1`).
pub fn tip_radius_pinion<S: Scalar>(stage: &StageVars<S>, cfg: &ReducerConfig<S>) -> S {
    let m_t = transverse_module(stage, cfg);
    m_t * S::of(stage.z1 as f64) * S::half() + stage.module * (S::one() + stage.x1)
}

/// Wheel tip radius with profile shift `-x1`.
pub fn tip_radius_wheel<S: Scalar>(stage: &StageVars<S>, cfg: &ReducerConfig<S>) -> S {
    let m_t = transverse_module(stage, cfg);
    m_t * S::of(stage.z2 as f64) * S::half() + stage.module * (S::one() - stage.x1)
}

/// Transverse contact ratio of a helical stage under the zero-sum profile
/// shift convention. `None` when a tip circle falls below its base circle
/// (undefined involute geometry).
pub fn transverse_contact_ratio<S: Scalar>(
    stage: &StageVars<S>,
    cfg: &ReducerConfig<S>,
) -> Option<S> {
    let m_t = transverse_module(stage, cfg);
    let alpha_t = (cfg.alpha_n.tan() / cfg.beta.cos()).atan();
    let r1 = m_t * S::of(stage.z1 as f64) * S::half();
    let r2 = m_t * S::of(stage.z2 as f64) * S::half();
    let rb1 = r1 * alpha_t.cos();
    let rb2 = r2 * alpha_t.cos();
    let ra1 = tip_radius_pinion(stage, cfg);
    let ra2 = tip_radius_wheel(stage, cfg);
    if ra1 < rb1 || ra2 < rb2 {
        return None;
    }
    let a = r1 + r2;
    let length = (ra1 * ra1 - rb1 * rb1).sqrt() + (ra2 * ra2 - rb2 * rb2).sqrt()
        - a * alpha_t.sin();
    let base_pitch = S::PI() * m_t * alpha_t.cos();
    Some(length / base_pitch)
}

/// Successful closure: the triangle angle at `O1` plus the stage-2/3
/// orientation angles and the chosen second intermediate shaft center.
#[derive(Clone, Debug)]
pub struct ClosureSolution<S> {
    pub alpha1: S,
    pub xi2: S,
    pub xi3: S,
    pub o2: [S; 2],
}

/// Closure failure with the violated margin, usable as a constraint value.
#[derive(Clone, Debug)]
pub struct ClosureInfeasible<S> {
    pub margin: S,
    pub reason: &'static str,
}

impl<S: Scalar> fmt::Display for ClosureInfeasible<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "closure infeasible ({}): margin {}", self.reason, self.margin)
    }
}

/// Everything the constraint assembly needs from the closure construction,
/// margins included, with a casing-evaluable `O2` even on failure (the
/// triangle angle is clamped so downstream terms stay finite).
#[derive(Clone, Debug)]
pub struct ClosureAnalysis<S> {
    /// Stage center distances a_1..a_3, mm.
    pub a: [S; 3],
    pub o1: [S; 2],
    pub o3: [S; 2],
    /// Distance from O1 to the required output center.
    pub d: S,
    /// `(d - (a2 + a3)) / o1o3`, <= 0 when the chain can reach.
    pub reach_margin: S,
    /// `(|a2 - a3| - d) / o1o3`, <= 0 when the chain is not too long.
    pub gap_margin: S,
    pub chosen_o2: [S; 2],
    pub solution: Option<ClosureSolution<S>>,
}

fn rotate<S: Scalar>(v: [S; 2], angle: S) -> [S; 2] {
    let (sin, cos) = angle.sin_cos();
    [v[0] * cos - v[1] * sin, v[0] * sin + v[1] * cos]
}

fn fits_casing<S: Scalar>(center: [S; 2], radius: S, cfg: &ReducerConfig<S>) -> bool {
    let cx = cfg.o1o3 * S::half();
    center[0] - radius >= cx - cfg.casing.half_width
        && center[0] + radius <= cx + cfg.casing.half_width
        && center[1] - radius >= -cfg.casing.half_height
        && center[1] + radius <= cfg.casing.half_height
}

/// Full closure construction. `o2_radius` is the tip radius of the largest
/// gear mounted on the second intermediate shaft, used for the casing-based
/// preference between the two circle intersections.
pub fn closure_analysis<S: Scalar>(
    v: &ReducerVariables<S>,
    cfg: &ReducerConfig<S>,
) -> ClosureAnalysis<S> {
    let a = [
        center_distance(&v.stages[0], cfg),
        center_distance(&v.stages[1], cfg),
        center_distance(&v.stages[2], cfg),
    ];
    let o1 = [a[0] * v.xi1.cos(), a[0] * v.xi1.sin()];
    let o3 = [cfg.o1o3, S::zero()];
    let dx = o3[0] - o1[0];
    let dy = o3[1] - o1[1];
    let d = (dx * dx + dy * dy).sqrt();
    let scale = cfg.o1o3;
    let reach_margin = (d - (a[1] + a[2])) / scale;
    let gap_margin = ((a[1] - a[2]).abs() - d) / scale;

    let tiny = S::of(1e-12);
    let degenerate = d <= tiny || a[1] <= tiny;
    let (unit, cos_alpha1) = if degenerate {
        ([S::one(), S::zero()], S::one())
    } else {
        let raw = (a[1] * a[1] - a[2] * a[2] + d * d) / (S::two() * a[1] * d);
        ([dx / d, dy / d], raw.max(-S::one()).min(S::one()))
    };
    let alpha1 = cos_alpha1.acos();

    // the two circle intersections; the lower one is preferred for
    // lubrication when it fits the casing
    let cand_a = {
        let dir = rotate(unit, alpha1);
        [o1[0] + a[1] * dir[0], o1[1] + a[1] * dir[1]]
    };
    let cand_b = {
        let dir = rotate(unit, -alpha1);
        [o1[0] + a[1] * dir[0], o1[1] + a[1] * dir[1]]
    };
    let (low, high) = if cand_a[1] <= cand_b[1] {
        (cand_a, cand_b)
    } else {
        (cand_b, cand_a)
    };
    let o2_radius = tip_radius_wheel(&v.stages[1], cfg)
        .max(tip_radius_pinion(&v.stages[2], cfg));
    let chosen_o2 = if fits_casing(low, o2_radius, cfg) || !fits_casing(high, o2_radius, cfg) {
        low
    } else {
        high
    };

    let feasible = !degenerate && reach_margin <= S::zero() && gap_margin <= S::zero();
    let solution = feasible.then(|| {
        let xi2 = (chosen_o2[1] - o1[1]).atan2(chosen_o2[0] - o1[0]);
        let xi3 = (o3[1] - chosen_o2[1]).atan2(o3[0] - chosen_o2[0]);
        ClosureSolution {
            alpha1,
            xi2,
            xi3,
            o2: chosen_o2,
        }
    });

    ClosureAnalysis {
        a,
        o1,
        o3,
        d,
        reach_margin,
        gap_margin,
        chosen_o2,
        solution,
    }
}

/// Closure construction as a fallible operation: the angles and the chosen
/// `O2` on success, the violated margin otherwise.
pub fn closure_geometry<S: Scalar>(
    v: &ReducerVariables<S>,
    cfg: &ReducerConfig<S>,
) -> std::result::Result<ClosureSolution<S>, ClosureInfeasible<S>> {
    let analysis = closure_analysis(v, cfg);
    if let Some(solution) = analysis.solution {
        return Ok(solution);
    }
    let tiny = S::of(1e-12);
    if analysis.d <= tiny {
        Err(ClosureInfeasible {
            margin: analysis.gap_margin,
            reason: "degenerate geometry: O1 coincides with the output center",
        })
    } else if analysis.a[1] <= tiny {
        Err(ClosureInfeasible {
            margin: analysis.reach_margin,
            reason: "degenerate geometry: stage 2 center distance is zero",
        })
    } else if analysis.reach_margin > S::zero() {
        Err(ClosureInfeasible {
            margin: analysis.reach_margin,
            reason: "chain too short to reach the output center",
        })
    } else {
        Err(ClosureInfeasible {
            margin: analysis.gap_margin,
            reason: "chain too long for the output center",
        })
    }
}
