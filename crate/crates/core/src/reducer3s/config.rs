//! Instance configuration for the three-stage reducer.
//!
//! Every standards-dependent factor is a plain configurable constant; the
//! shipped defaults keep them at 1.0 so the constraint set is fixed and
//! auditable. The default physical data below is instance data chosen for
//! this artifact, not values from any external source.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Multiplicative factor table for the stress chains. `*_wheel` overrides
/// apply the wheel-side value where pinion and wheel differ; unset means
/// "same as pinion".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    default = "FactorTable::unity",
    bound(deserialize = "S: crate::scalar::Scalar")
)]
pub struct FactorTable<S> {
    pub k_a: S,
    pub k_v: S,
    pub k_f_alpha: S,
    pub k_f_beta: S,
    pub k_h_alpha: S,
    pub k_h_beta: S,
    pub y_f: S,
    pub y_s: S,
    pub y_beta: S,
    pub y_b: S,
    pub y_dt: S,
    pub y_st: S,
    pub y_nt: S,
    pub y_delta_rel_t: S,
    pub y_r_rel_t: S,
    pub y_x: S,
    pub z_h: S,
    pub z_e: S,
    pub z_eps: S,
    pub z_beta: S,
    pub z_bd: S,
    pub z_nt: S,
    pub z_l: S,
    pub z_v: S,
    pub z_r: S,
    pub z_w: S,
    pub z_x: S,
    pub y_f_wheel: Option<S>,
    pub y_s_wheel: Option<S>,
    pub z_bd_wheel: Option<S>,
}

impl<S: Scalar> FactorTable<S> {
    pub fn unity() -> Self {
        let one = S::one();
        Self {
            k_a: one,
            k_v: one,
            k_f_alpha: one,
            k_f_beta: one,
            k_h_alpha: one,
            k_h_beta: one,
            y_f: one,
            y_s: one,
            y_beta: one,
            y_b: one,
            y_dt: one,
            y_st: one,
            y_nt: one,
            y_delta_rel_t: one,
            y_r_rel_t: one,
            y_x: one,
            z_h: one,
            z_e: one,
            z_eps: one,
            z_beta: one,
            z_bd: one,
            z_nt: one,
            z_l: one,
            z_v: one,
            z_r: one,
            z_w: one,
            z_x: one,
            y_f_wheel: None,
            y_s_wheel: None,
            z_bd_wheel: None,
        }
    }

    /// Harder preset: application factor 1.25 and the steel elasticity
    /// factor in sqrt(MPa); everything else stays at 1.0.
    pub fn realistic() -> Self {
        Self {
            k_a: S::of(1.25),
            z_e: S::of(189.8),
            ..Self::unity()
        }
    }

    pub fn values(&self) -> Vec<(&'static str, S)> {
        vec![
            ("k_a", self.k_a),
            ("k_v", self.k_v),
            ("k_f_alpha", self.k_f_alpha),
            ("k_f_beta", self.k_f_beta),
            ("k_h_alpha", self.k_h_alpha),
            ("k_h_beta", self.k_h_beta),
            ("y_f", self.y_f),
            ("y_s", self.y_s),
            ("y_beta", self.y_beta),
            ("y_b", self.y_b),
            ("y_dt", self.y_dt),
            ("y_st", self.y_st),
            ("y_nt", self.y_nt),
            ("y_delta_rel_t", self.y_delta_rel_t),
            ("y_r_rel_t", self.y_r_rel_t),
            ("y_x", self.y_x),
            ("z_h", self.z_h),
            ("z_e", self.z_e),
            ("z_eps", self.z_eps),
            ("z_beta", self.z_beta),
            ("z_bd", self.z_bd),
            ("z_nt", self.z_nt),
            ("z_l", self.z_l),
            ("z_v", self.z_v),
            ("z_r", self.z_r),
            ("z_w", self.z_w),
            ("z_x", self.z_x),
        ]
    }
}

impl<S: Scalar> Default for FactorTable<S> {
    fn default() -> Self {
        Self::unity()
    }
}

/// Casing box half-dimensions, mm. The box is centered midway between the
/// input and the required output shaft centers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Casing<S> {
    pub half_width: S,
    pub half_height: S,
}

/// Search-space bounds for the continuous variables.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarBounds<S> {
    /// Facewidth, mm.
    pub b: (S, S),
    /// Pinion profile shift coefficient.
    pub x1: (S, S),
    /// Shaft radii, mm.
    pub r_a: (S, S),
    /// First-stage orientation angle, rad.
    pub xi1: (S, S),
}

impl<S: Scalar> Default for VarBounds<S> {
    fn default() -> Self {
        Self {
            b: (S::of(10.0), S::of(120.0)),
            x1: (S::zero(), S::of(0.8)),
            r_a: (S::of(10.0), S::of(70.0)),
            xi1: (S::of(-std::f64::consts::FRAC_PI_2), S::of(std::f64::consts::FRAC_PI_2)),
        }
    }
}

/// All fixed data of a reducer instance. Distances in mm, angles in rad,
/// power in W, speeds in rev/min, stresses and moduli in MPa.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "S: crate::scalar::Scalar"))]
pub struct ReducerConfig<S> {
    /// Power to transmit, W.
    pub p_t: S,
    /// Input shaft speed, rev/min.
    pub n_e: S,
    /// Target total reduction ratio, > 1.
    pub u_bar: S,
    /// Required input-to-output shaft center distance, mm.
    pub o1o3: S,
    pub casing: Casing<S>,
    /// Normal pressure angle, rad.
    pub alpha_n: S,
    /// Helix angle, rad.
    pub beta: S,
    /// Allowable shaft shear stress, MPa.
    pub tau_max: S,
    /// Maximum total twist angle, rad.
    pub theta_max: S,
    /// Shear modulus, MPa.
    pub shear_modulus: S,
    /// Exponent of the shaft radius in the twist formula (3 or 4).
    #[serde(default = "default_twist_exponent")]
    pub twist_exponent: u32,
    /// Bending stress number, MPa.
    pub sigma_f_lim: S,
    /// Contact stress number, MPa.
    pub sigma_h_lim: S,
    pub s_f_min: S,
    pub s_h_min: S,
    #[serde(default)]
    pub factors: FactorTable<S>,
    /// Normal module catalog, mm; exactly 41 strictly increasing entries.
    pub module_catalog: Vec<S>,
    /// Shaft lengths l_a,0..3, mm (casing-derived constants).
    pub shaft_lengths: [S; 4],
    #[serde(default)]
    pub bounds: VarBounds<S>,
    #[serde(default = "default_feas_tol")]
    pub feas_tol: S,
}

fn default_twist_exponent() -> u32 {
    3
}

fn default_feas_tol<S: Scalar>() -> S {
    S::of(1e-6)
}

/// The 41-entry module catalog shipped with the reference instance: the
/// ISO R-series preferred normal modules from 1.0 to 10 mm, densified with
/// the second-choice values to reach the required count.
pub fn default_module_catalog<S: Scalar>() -> Vec<S> {
    [
        1.0, 1.125, 1.25, 1.375, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, //
        3.0, 3.25, 3.5, 3.75, 4.0, 4.25, 4.5, 4.75, 5.0, 5.25, //
        5.5, 5.75, 6.0, 6.25, 6.5, 7.0, 7.25, 7.5, 7.75, 8.0, //
        8.25, 8.5, 8.75, 9.0, 9.25, 9.5, 9.75, 10.0, 10.5, 11.0, 12.0,
    ]
    .iter()
    .map(|&v| S::of(v))
    .collect()
}

impl<S: Scalar> Default for ReducerConfig<S> {
    /// The reference instance. Physical data are artifact-chosen instance
    /// values (50 kW, 1500 rev/min, ratio 16, 20 deg normal pressure angle,
    /// 15 deg helix), not ground truth from any publication.
    fn default() -> Self {
        Self {
            p_t: S::of(50_000.0),
            n_e: S::of(1500.0),
            u_bar: S::of(16.0),
            o1o3: S::of(400.0),
            casing: Casing {
                half_width: S::of(340.0),
                half_height: S::of(180.0),
            },
            alpha_n: S::of(20f64.to_radians()),
            beta: S::of(15f64.to_radians()),
            tau_max: S::of(50.0),
            theta_max: S::of(0.08),
            shear_modulus: S::of(80_000.0),
            twist_exponent: 3,
            sigma_f_lim: S::of(400.0),
            sigma_h_lim: S::of(1200.0),
            s_f_min: S::of(1.25),
            s_h_min: S::of(1.0),
            factors: FactorTable::unity(),
            module_catalog: default_module_catalog(),
            shaft_lengths: [S::of(60.0), S::of(80.0), S::of(80.0), S::of(60.0)],
            bounds: VarBounds::default(),
            feas_tol: S::of(1e-6),
        }
    }
}

impl<S: Scalar> ReducerConfig<S> {
    pub fn validate(&self) -> Result<()> {
        if self.u_bar <= S::one() {
            return Err(Error::Config(format!("u_bar must exceed 1, got {}", self.u_bar)));
        }
        if self.module_catalog.len() != 41 {
            return Err(Error::Config(format!(
                "module catalog needs exactly 41 entries, got {}",
                self.module_catalog.len()
            )));
        }
        if !self.module_catalog.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config(
                "module catalog must be strictly increasing".into(),
            ));
        }
        for (name, v) in self.factors.values() {
            if v <= S::zero() {
                return Err(Error::Config(format!("factor {name} must be positive, got {v}")));
            }
        }
        if !matches!(self.twist_exponent, 3 | 4) {
            return Err(Error::Config(format!(
                "twist_exponent must be 3 or 4, got {}",
                self.twist_exponent
            )));
        }
        for (name, v) in [
            ("p_t", self.p_t),
            ("n_e", self.n_e),
            ("o1o3", self.o1o3),
            ("tau_max", self.tau_max),
            ("theta_max", self.theta_max),
            ("shear_modulus", self.shear_modulus),
            ("sigma_f_lim", self.sigma_f_lim),
            ("sigma_h_lim", self.sigma_h_lim),
            ("s_f_min", self.s_f_min),
            ("s_h_min", self.s_h_min),
        ] {
            if v <= S::zero() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, (lo, hi)) in [
            ("b", self.bounds.b),
            ("x1", self.bounds.x1),
            ("r_a", self.bounds.r_a),
            ("xi1", self.bounds.xi1),
        ] {
            if lo > hi {
                return Err(Error::Config(format!("bounds for {name} are inverted")));
            }
        }
        if self.bounds.b.0 <= S::zero() || self.bounds.r_a.0 <= S::zero() {
            return Err(Error::Config(
                "facewidth and shaft radius lower bounds must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        ReducerConfig::<f64>::default().validate().unwrap();
        let realistic = ReducerConfig::<f64> {
            factors: FactorTable::realistic(),
            ..Default::default()
        };
        realistic.validate().unwrap();
    }

    #[test]
    fn catalog_has_41_increasing_entries() {
        let catalog: Vec<f64> = default_module_catalog();
        assert_eq!(catalog.len(), 41);
        assert!(catalog.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(catalog[0], 1.0);
    }

    #[test]
    fn toml_roundtrip_preserves_config() {
        let cfg = ReducerConfig::<f64>::default();
        let text = cfg.to_toml_string();
        let back = ReducerConfig::<f64>::from_toml_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = ReducerConfig::<f64>::default();
        cfg.u_bar = 0.5;
        assert!(cfg.validate().is_err());

        let mut cfg = ReducerConfig::<f64>::default();
        cfg.module_catalog.pop();
        assert!(cfg.validate().is_err());

        let mut cfg = ReducerConfig::<f64>::default();
        cfg.factors.z_e = 0.0;
        assert!(cfg.validate().is_err());

        let mut cfg = ReducerConfig::<f64>::default();
        cfg.twist_exponent = 5;
        assert!(cfg.validate().is_err());
    }
}
