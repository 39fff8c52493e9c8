//! The radial equation of the rotating harmonic oscillator,
//! `w'' = (u^2 (z-1)^2/4 - u (lambda + 1/2) + ell (ell+1)/z^2) w`.

use super::{build_setup, correction, inverse_power_jet, inverse_power_taylor, ray_points, EtaValue, Method};
use crate::bounds::BoundSetup;
use crate::coeffs::{oscillator_a1, oscillator_table, CoeffTable, RayContext, RayOptions};
use crate::equation::{ConditionKind, EquationSpec, RayDomain};
use crate::error::{Result, WkbError};
use crate::transform::{compute_xi, JetFn, PotentialTriple, XiPoint};
use crate::types::Sign;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// `f0 = (z-1)^2/4`, `f1 = -(lambda + 1/2)`, `f2 = ell (ell+1)/z^2`, `z0 = 1`.
pub fn potential(lambda: C64, ell: u32) -> PotentialTriple {
    let zero = C64::new(0.0, 0.0);
    let f0: JetFn = Arc::new(move |z: C64| {
        let w = z - 1.0;
        [w * w * 0.25, w * 0.5, C64::new(0.5, 0.0), zero, zero]
    });
    let m = lambda + 0.5;
    let f1: JetFn = Arc::new(move |_| [-m, zero, zero, zero, zero]);
    let l = (ell * (ell + 1)) as f64;
    let f2: JetFn = Arc::new(move |z| inverse_power_jet(C64::new(l, 0.0), 2, z));
    PotentialTriple {
        name: format!("oscillator(lambda = {lambda}, ell = {ell})"),
        f0,
        f1,
        f2,
        z0: C64::new(1.0, 0.0),
        sqrt_f0_ref: Some(Arc::new(|z: C64| (z - 1.0) * 0.5)),
        in_domain: Arc::new(|z: C64| {
            z.re.is_finite() && z.im.is_finite() && z.norm() > 1e-12 && (z - 1.0).norm() > 1e-12
        }),
        cuts: "(-inf, 1]".into(),
        f0_floor: 1e-28,
        phi_vanishes: m.norm() == 0.0,
        taylor: Some(Arc::new(move |z, order| {
            let mut f0 = vec![zero; order + 1];
            let mut f1 = vec![zero; order + 1];
            f0[0] = (z - 1.0) * (z - 1.0) * 0.25;
            if order >= 1 {
                f0[1] = (z - 1.0) * 0.5;
            }
            if order >= 2 {
                f0[2] = C64::new(0.25, 0.0);
            }
            f1[0] = -m;
            [f0, f1, inverse_power_taylor(C64::new(l, 0.0), 2, z, order)]
        })),
    }
}

/// The image of z = 1, excluded from the xi-domain.
pub const EXCLUDED: [C64; 1] = [C64 { re: 0.0, im: 0.0 }];

/// Default number of coefficients generated along a ray.
pub const RAY_TERMS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorInstance {
    pub u: C64,
    pub lambda: C64,
    pub ell: u32,
    pub z: C64,
    pub point: XiPoint,
}

/// `(z-1)^2 / 4`.
pub fn xi_closed_form(z: C64) -> C64 {
    (z - 1.0) * (z - 1.0) * 0.25
}

impl OscillatorInstance {
    pub fn new(u: C64, lambda: C64, ell: u32, z: C64) -> Result<Self> {
        if !(u.re > 0.0) {
            return Err(WkbError::Invalid(format!("need Re u > 0 (u = {u})")));
        }
        let point = compute_xi(&potential(lambda, ell), z, None)?;
        Ok(OscillatorInstance { u, lambda, ell, z, point })
    }

    pub fn domain(&self, sign: Sign) -> Result<RayDomain> {
        RayDomain::new(self.point.xi, sign, &EXCLUDED, None)
    }

    /// `((z-1)/2)^{-+(lambda+1/2) - 1/2} exp(+-u (z-1)^2/4)`.
    pub fn leading(&self, sign: Sign) -> C64 {
        let sg = sign.sg();
        let half = (self.z - 1.0) * 0.5;
        half.powc(-(self.lambda + 0.5) * sg - 0.5) * (self.u * xi_closed_form(self.z) * sg).exp()
    }

    /// The ray context anchored at the instance's point.
    pub fn ray(&self, sign: Sign, n_max: usize) -> Result<RayContext> {
        ray_context(self.lambda, self.ell, &self.point, sign, n_max)
    }
}

/// A ray context for the oscillator able to carry `n_max` coefficients.
pub fn ray_context(lambda: C64, ell: u32, anchor: &XiPoint, sign: Sign, n_max: usize) -> Result<RayContext> {
    let opts = RayOptions { order: n_max + 1, ..RayOptions::default() };
    RayContext::new(&potential(lambda, ell), anchor, sign, opts)
}

/// The correction `mu^+-` at the instance by the chosen method.
pub fn oscillator_correction(inst: &OscillatorInstance, method: Method, sign: Sign) -> Result<EtaValue> {
    if let Method::Asymptotic(n @ 1..=2) = method {
        let mu = if n == 2 { oscillator_a1(inst.lambda, inst.ell, inst.z, sign)? / inst.u } else { C64::new(0.0, 0.0) };
        return Ok(EtaValue { value: mu, err_estimate: f64::NAN });
    }
    let dom = inst.domain(sign)?;
    let n_max = match method {
        Method::Asymptotic(n) => n.max(2) - 1,
        _ => RAY_TERMS,
    };
    let ctx = inst.ray(sign, n_max)?;
    let table = oscillator_table(&ctx, inst.lambda, inst.ell, n_max)?;
    correction(&table, C64::new(0.0, 0.0), inst.point.xi, inst.u, method, dom.d)
}

/// `w^+-` at the instance by the chosen method.
pub fn oscillator_solution(inst: &OscillatorInstance, method: Method, sign: Sign) -> Result<C64> {
    Ok(inst.leading(sign) * (oscillator_correction(inst, method, sign)?.value + 1.0))
}

/// Inputs of the remainder bound at `z`, sampled on the ray only.
pub fn bound_setup(lambda: C64, ell: u32, z: C64, sign: Sign, n_max: usize) -> Result<(BoundSetup, CoeffTable)> {
    let pot = potential(lambda, ell);
    let anchor = compute_xi(&pot, z, None)?;
    let dom = RayDomain::new(anchor.xi, sign, &EXCLUDED, None)?;
    let eq = EquationSpec::new(pot.clone(), sign, ConditionKind::Cond2, 0.5, dom.d, dom.epsilon)?;
    let ctx = ray_context(lambda, ell, &anchor, sign, n_max)?;
    let table = oscillator_table(&ctx, lambda, ell, n_max)?;
    let scale = anchor.xi.norm().max(1.0);
    let points = ray_points(&pot, &anchor, &dom, 50.0 * scale)?;
    let far = ray_points(&pot, &anchor, &dom, 1e4 * scale)?;
    let dir = sign.ray_dir();
    let setup = build_setup(&eq, &dom, &anchor, points, &far, |pt| {
        let s = C64::new(((pt.xi - anchor.xi) * dir).re, 0.0);
        Ok((0..n_max).map(|k| table.value_over_factorial(k + 1, s, k)).collect())
    })?;
    Ok((setup, table))
}
