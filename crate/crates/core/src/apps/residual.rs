//! Relative residual of an assembled solution in the original ODE
//! `w'' = (u^2 f0 + u f1 + f2) w`.
//!
//! The solution is `w = E (1 + mu)` with `E'/E = -f0'/(4 f0) +- (u f0^{1/2} + f1 / (2 f0^{1/2}))`;
//! the logarithmic derivative of E is differentiated exactly and mu by
//! Richardson-extrapolated central differences.

use super::{bessel, oscillator, Method};
use crate::error::Result;
use crate::transform::{PotentialTriple, XiPoint};
use crate::types::Sign;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Default finite-difference step in z.
pub const FD_STEP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub z: C64,
    pub sign: Sign,
    /// `|w''/w - q| / |u^2 f0|`.
    pub relative: f64,
}

/// Residual at `pt` given the correction `mu` as a function of z.
pub fn ode_residual(pot: &PotentialTriple, u: C64, sign: Sign, pt: &XiPoint, mu: &dyn Fn(C64) -> Result<C64>, h: f64) -> Result<f64> {
    let z = pt.z;
    let sg = sign.sg();
    let f0 = (pot.f0)(z);
    let f1 = (pot.f1)(z);
    let f2 = (pot.f2)(z);
    let r = pt.sqrt_f0;
    let r1 = f0[1] / (r * 2.0);
    let l = -f0[1] / (f0[0] * 4.0) + (u * r + f1[0] / (r * 2.0)) * sg;
    let l1 = -(f0[2] / f0[0] - f0[1] * f0[1] / (f0[0] * f0[0])) / 4.0
        + (u * r1 + (f1[1] / r - f1[0] * r1 / (r * r)) / 2.0) * sg;

    let m0 = mu(z)?;
    let mut d1 = [C64::new(0.0, 0.0); 2];
    let mut d2 = [C64::new(0.0, 0.0); 2];
    for (k, step) in [h, h / 2.0].into_iter().enumerate() {
        let mp = mu(z + step)?;
        let mm = mu(z - step)?;
        d1[k] = (mp - mm) / (2.0 * step);
        d2[k] = (mp - m0 * 2.0 + mm) / (step * step);
    }
    let mu1 = (d1[1] * 4.0 - d1[0]) / 3.0;
    let mu2 = (d2[1] * 4.0 - d2[0]) / 3.0;
    let one_mu = m0 + 1.0;
    let wpp = l1 + l * l + l * mu1 * 2.0 / one_mu + mu2 / one_mu;
    let q = u * u * f0[0] + u * f1[0] + f2[0];
    Ok((wpp - q).norm() / (u * u * f0[0]).norm())
}

/// Residuals of `w^+-` for the Bessel equation at the given z.
pub fn bessel_residuals(nu: C64, kappa: C64, zs: &[C64], sign: Sign, method: Method) -> Result<Vec<Residual>> {
    let pot = bessel::potential(kappa);
    zs.iter()
        .map(|&z| {
            let inst = bessel::BesselInstance::new(nu, kappa, z)?;
            let mu = |zz: C64| -> Result<C64> {
                let i = bessel::BesselInstance::new(nu, kappa, zz)?;
                Ok(bessel::eta(&i, sign, method)?.value)
            };
            let relative = ode_residual(&pot, nu, sign, &inst.point, &mu, FD_STEP)?;
            Ok(Residual { z, sign, relative })
        })
        .collect()
}

/// Residuals of `w^+-` for the oscillator equation; every stencil point
/// carries its own ray.
pub fn oscillator_residuals(u: C64, lambda: C64, ell: u32, zs: &[C64], sign: Sign, method: Method) -> Result<Vec<Residual>> {
    let pot = oscillator::potential(lambda, ell);
    zs.iter()
        .map(|&z| {
            let inst = oscillator::OscillatorInstance::new(u, lambda, ell, z)?;
            let mu = |zz: C64| -> Result<C64> {
                let i = oscillator::OscillatorInstance::new(u, lambda, ell, zz)?;
                Ok(oscillator::oscillator_correction(&i, method, sign)?.value)
            };
            let relative = ode_residual(&pot, u, sign, &inst.point, &mu, FD_STEP)?;
            Ok(Residual { z, sign, relative })
        })
        .collect()
}
