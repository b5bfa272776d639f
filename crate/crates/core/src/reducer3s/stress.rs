//! Stress chains and the mechanical constraints of the reducer: tooth
//! bending and contact stresses against their permissible values, shaft
//! shear and the total twist angle.
//!
//! Conventions: torques in N mm, lengths in mm, stresses in MPa. Every
//! constraint is returned in `c <= 0` form, dimensionless where the
//! quantity has a natural limit to normalize by.

use crate::scalar::Scalar;

use super::config::ReducerConfig;
use super::geometry::{transverse_contact_ratio, transverse_module};
use super::{ReducerVariables, StageVars};

/// Satisfied-by-convention sentinel for constraints whose load vanishes.
pub fn neg_sentinel<S: Scalar>() -> S {
    S::of(-1.0e6)
}

/// Large violation for undefined geometry (e.g. tip circle below base circle).
pub fn large_violation<S: Scalar>() -> S {
    S::of(1.0e3)
}

/// Input shaft torque `C_e = P_t / omega` in N mm.
pub fn input_torque<S: Scalar>(cfg: &ReducerConfig<S>) -> S {
    let omega = S::two() * S::PI() * cfg.n_e / S::of(60.0);
    cfg.p_t / omega * S::of(1000.0)
}

/// Torque on shaft `s` (0 = input): `C_s = C_e * prod_{i<=s} z2_i / z1_i`.
pub fn shaft_torques<S: Scalar>(v: &ReducerVariables<S>, cfg: &ReducerConfig<S>) -> [S; 4] {
    let c_e = input_torque(cfg);
    let mut torques = [c_e; 4];
    let mut acc = c_e;
    for (s, stage) in v.stages.iter().enumerate() {
        acc = acc * S::of(stage.z2 as f64) / S::of(stage.z1 as f64);
        torques[s + 1] = acc;
    }
    torques
}

/// Per-stage loading state for the stress chains.
#[derive(Clone, Copy, Debug)]
pub struct StageState<S> {
    pub m_n: S,
    pub d1: S,
    pub d2: S,
    /// Stage ratio z2 / z1.
    pub u: S,
    pub b: S,
    pub x1: S,
    /// Tangential load `F_t = 2 C / d1`, N.
    pub f_t: S,
    pub z1: i64,
    pub z2: i64,
}

/// Builds the loading state of stage `s` (0-based) from the decoded
/// variables and the torque chain.
pub fn stage_state<S: Scalar>(
    v: &ReducerVariables<S>,
    cfg: &ReducerConfig<S>,
    s: usize,
) -> StageState<S> {
    let stage = &v.stages[s];
    let torques = shaft_torques(v, cfg);
    let m_t = transverse_module(stage, cfg);
    let d1 = m_t * S::of(stage.z1 as f64);
    let d2 = m_t * S::of(stage.z2 as f64);
    StageState {
        m_n: stage.module,
        d1,
        d2,
        u: S::of(stage.z2 as f64) / S::of(stage.z1 as f64),
        b: stage.b,
        x1: stage.x1,
        f_t: S::two() * torques[s] / d1,
        z1: stage.z1,
        z2: stage.z2,
    }
}

/// Tooth-root bending stress for pinion and wheel:
/// `sigma_F = F_t / (b m_n) * (Y_F Y_S Y_beta Y_B Y_DT) * (K_A K_V K_Falpha K_Fbeta)`.
pub fn bending_stress<S: Scalar>(st: &StageState<S>, cfg: &ReducerConfig<S>) -> (S, S) {
    assert!(st.b > S::zero(), "facewidth must be positive");
    assert!(st.m_n > S::zero(), "module must be positive");
    let f = &cfg.factors;
    let base = st.f_t / (st.b * st.m_n);
    let k = f.k_a * f.k_v * f.k_f_alpha * f.k_f_beta;
    let y_pinion = f.y_f * f.y_s * f.y_beta * f.y_b * f.y_dt;
    let y_wheel = f.y_f_wheel.unwrap_or(f.y_f)
        * f.y_s_wheel.unwrap_or(f.y_s)
        * f.y_beta
        * f.y_b
        * f.y_dt;
    (base * y_pinion * k, base * y_wheel * k)
}

/// Permissible bending stress
/// `sigma_FP = sigma_FLim / S_Fmin * (Y_ST Y_NT Y_deltaRelT Y_RrelT Y_X)`.
pub fn permissible_bending<S: Scalar>(cfg: &ReducerConfig<S>) -> S {
    let f = &cfg.factors;
    cfg.sigma_f_lim / cfg.s_f_min * (f.y_st * f.y_nt * f.y_delta_rel_t * f.y_r_rel_t * f.y_x)
}

/// Flank contact stress for pinion and wheel:
/// `sigma_H = Z_BD * (Z_H Z_E Z_eps Z_beta) * sqrt(F_t/(b d1) * (u+1)/u)
///          * sqrt(K_A K_V K_Halpha K_Hbeta)`.
pub fn contact_stress<S: Scalar>(st: &StageState<S>, cfg: &ReducerConfig<S>) -> (S, S) {
    assert!(st.b > S::zero(), "facewidth must be positive");
    assert!(st.d1 > S::zero(), "pitch diameter must be positive");
    assert!(st.u > S::zero(), "stage ratio must be positive");
    let f = &cfg.factors;
    let sigma_h0 = (f.z_h * f.z_e * f.z_eps * f.z_beta)
        * (st.f_t / (st.b * st.d1) * (st.u + S::one()) / st.u).sqrt();
    let k = (f.k_a * f.k_v * f.k_h_alpha * f.k_h_beta).sqrt();
    (
        f.z_bd * sigma_h0 * k,
        f.z_bd_wheel.unwrap_or(f.z_bd) * sigma_h0 * k,
    )
}

/// Permissible contact stress
/// `sigma_HP = sigma_HLim / S_Hmin * (Z_NT Z_L Z_V Z_R Z_W Z_X)`.
pub fn permissible_contact<S: Scalar>(cfg: &ReducerConfig<S>) -> S {
    let f = &cfg.factors;
    cfg.sigma_h_lim / cfg.s_h_min * (f.z_nt * f.z_l * f.z_v * f.z_r * f.z_w * f.z_x)
}

/// Power-carrying conditions of one stage, in `c <= 0` form:
/// `c_bend = 1 - min(sigma_FP / sigma_F)` over pinion and wheel, and
/// `c_contact = 1 - min((sigma_HP / sigma_H)^2)`. Zero stress (no load)
/// satisfies the condition by convention.
pub fn stage_power_constraints<S: Scalar>(st: &StageState<S>, cfg: &ReducerConfig<S>) -> (S, S) {
    let (sf1, sf2) = bending_stress(st, cfg);
    let sfp = permissible_bending(cfg);
    let worst_f = sf1.max(sf2);
    let c_bend = if worst_f <= S::zero() {
        neg_sentinel()
    } else {
        S::one() - sfp / worst_f
    };

    let (sh1, sh2) = contact_stress(st, cfg);
    let shp = permissible_contact(cfg);
    let worst_h = sh1.max(sh2);
    let c_contact = if worst_h <= S::zero() {
        neg_sentinel()
    } else {
        let ratio = shp / worst_h;
        S::one() - ratio * ratio
    };
    (c_bend, c_contact)
}

/// Geometric conditions of one stage, in `c <= 0` form:
/// contact ratio >= 1.3, facewidth within `0.1 d2 <= b <= d1`, and the
/// undercut bound on the profile shift `x1 >= 0.1812`.
pub fn geometric_constraints<S: Scalar>(
    st: &StageState<S>,
    cfg: &ReducerConfig<S>,
) -> (S, S, S, S) {
    let stage = StageVars {
        module_index: 0,
        module: st.m_n,
        z1: st.z1,
        z2: st.z2,
        b: st.b,
        x1: st.x1,
    };
    let c_eps = match transverse_contact_ratio(&stage, cfg) {
        Some(eps) => S::of(1.3) - eps,
        None => large_violation(),
    };
    let c_bmin = S::of(0.1) * st.d2 - st.b;
    let c_bmax = st.b - st.d1;
    let c_shift = S::of(0.1812) - st.x1;
    (c_eps, c_bmin, c_bmax, c_shift)
}

/// Shaft shear and twist, in `c <= 0` form:
/// `tau_s / tau_max - 1` for the input shaft and the three stage output
/// shafts, and `theta / theta_max - 1` for the accumulated twist angle.
pub fn shaft_constraints<S: Scalar>(
    v: &ReducerVariables<S>,
    cfg: &ReducerConfig<S>,
) -> ([S; 4], S) {
    let torques = shaft_torques(v, cfg);
    let mut c_tau = [S::zero(); 4];
    let mut theta = S::zero();
    for s in 0..4 {
        let r = v.shaft_radii[s];
        assert!(r > S::zero(), "shaft radius must be positive");
        let tau = S::two() * torques[s] / (S::PI() * r.powi(3));
        c_tau[s] = tau / cfg.tau_max - S::one();
        let r_pow = r.powi(cfg.twist_exponent as i32);
        theta += S::two() * torques[s] * cfg.shaft_lengths[s] / (cfg.shear_modulus * S::PI() * r_pow);
    }
    (c_tau, theta / cfg.theta_max - S::one())
}
