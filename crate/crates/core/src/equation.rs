//! An equation instance: the potential plus the branch and domain constants.

use crate::error::{Result, WkbError};
use crate::transform::PotentialTriple;
use crate::types::Sign;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Which decay condition on phi and psi is being certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionKind {
    /// |phi|, |psi| <= c / (1 + |xi|^{1+rho})
    Cond1,
    /// |phi| <= c / (1 + |xi|^{1/2+rho}); |phi'|, |psi| <= c / (1 + |xi|^{1+rho})
    Cond2,
}

#[derive(Debug, Clone)]
pub struct EquationSpec {
    pub pot: PotentialTriple,
    pub sign: Sign,
    pub condition: ConditionKind,
    pub rho: f64,
    /// Clearance of the working domain from the boundary of the xi-region.
    pub d: f64,
    pub epsilon: f64,
    /// Fitted condition constant, once certified.
    pub c: Option<f64>,
}

impl EquationSpec {
    pub fn new(pot: PotentialTriple, sign: Sign, condition: ConditionKind, rho: f64, d: f64, epsilon: f64) -> Result<Self> {
        if !(rho > 0.0) || !(d > 0.0) || !(epsilon >= 0.0) {
            return Err(WkbError::Invalid(format!("need rho > 0, d > 0, epsilon >= 0 (got {rho}, {d}, {epsilon})")));
        }
        Ok(EquationSpec { pot, sign, condition, rho, d, epsilon, c: None })
    }

    pub fn with_sign(&self, sign: Sign) -> Self {
        EquationSpec { sign, ..self.clone() }
    }

    pub fn phi_vanishes(&self) -> bool {
        self.pot.phi_vanishes
    }
}

/// Half-stadium `{xi0 + dir x + w : x >= 0, |w| < delta}` around a ray, with
/// `d` its clearance from the excluded points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayDomain {
    pub anchor: C64,
    pub sign: Sign,
    /// Distance from the ray to the nearest excluded point.
    pub clearance: f64,
    pub epsilon: f64,
    pub d: f64,
    pub delta: f64,
}

/// Share of `clearance - epsilon` given to d; the rest is the stadium radius.
pub const D_SHARE: f64 = 0.9;

/// Default epsilon as a fraction of the clearance.
pub const EPSILON_SHARE: f64 = 0.05;

/// Distance from `p` to the half-line leaving `anchor` in direction `dir`.
pub fn half_line_distance(anchor: C64, dir: f64, p: C64) -> f64 {
    let t = ((p.re - anchor.re) * dir).max(0.0);
    (p - (anchor + dir * t)).norm()
}

impl RayDomain {
    /// The domain around the ray of `sign` from `anchor`, avoiding the `excluded` points.
    pub fn new(anchor: C64, sign: Sign, excluded: &[C64], epsilon: Option<f64>) -> Result<Self> {
        let dir = sign.ray_dir();
        let clearance = excluded.iter().map(|&p| half_line_distance(anchor, dir, p)).fold(f64::INFINITY, f64::min);
        let epsilon = epsilon.unwrap_or(EPSILON_SHARE * clearance.min(1.0));
        if !(clearance > epsilon) || !(epsilon >= 0.0) {
            return Err(WkbError::Domain(format!("ray from {anchor} passes within epsilon = {epsilon} of an excluded point")));
        }
        let room = clearance - epsilon;
        Ok(RayDomain { anchor, sign, clearance, epsilon, d: D_SHARE * room, delta: (1.0 - D_SHARE) * room })
    }

    pub fn contains(&self, xi: C64) -> bool {
        half_line_distance(self.anchor, self.sign.ray_dir(), xi) < self.delta
    }
}
