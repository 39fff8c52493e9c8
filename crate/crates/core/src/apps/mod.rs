//! The two built-in applications and their end-to-end checks.

pub mod bessel;
pub mod oracle;
pub mod oscillator;
pub mod residual;

use crate::error::{Result, WkbError};
use crate::transform::PotentialTriple;
use num_complex::Complex64 as C64;

/// A built-in potential by name: `"bessel"` (kappa) or `"oscillator"`
/// (lambda, ell).
pub fn builtin_potential(name: &str, kappa: C64, lambda: C64, ell: u32) -> Result<PotentialTriple> {
    match name {
        "bessel" => Ok(bessel::potential(kappa)),
        "oscillator" => Ok(oscillator::potential(lambda, ell)),
        other => Err(WkbError::Invalid(format!("unknown application '{other}'"))),
    }
}

/// Jet of `a z^{-m}`.
pub(crate) fn inverse_power_jet(a: C64, m: i32, z: C64) -> [C64; 5] {
    let mut out = [C64::new(0.0, 0.0); 5];
    let mut coef = a;
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = coef * z.powi(-m - k as i32);
        coef *= -(m as f64 + k as f64);
    }
    out
}

/// Taylor coefficients of `a z^{-m}` about `z`.
pub(crate) fn inverse_power_taylor(a: C64, m: i32, z: C64, order: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(order + 1);
    let mut coef = a * z.powi(-m);
    for k in 0..=order {
        out.push(coef);
        coef *= -(m as f64 + k as f64) / ((k + 1) as f64) / z;
    }
    out
}

use crate::bounds::{certify_conditions, condition_samples, constants_from_cert, v_weight, BorelPoint, BoundSetup};
use crate::equation::{EquationSpec, RayDomain};
use crate::numerics::cheb::{ChebGrid, SemiInfiniteMap};
use crate::transform::{trace_direction, trace_ray_mapped, XiPoint};
use crate::borel::{borel_series, BorelSummation, SumOptions};
use crate::coeffs::CoeffTable;
use crate::factorial::{b_from_a, default_omega, eval_factorial_series, FactorialSeriesExpansion, StirlingTable};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Angles and radius fractions of the cloud sampled around a ray anchor.
pub const CLOUD_ANGLES: usize = 16;
pub const CLOUD_RADII: [f64; 4] = [0.25, 0.5, 0.75, 0.95];

/// 64 points within the stadium radius of the anchor.
pub fn cloud_points(pot: &PotentialTriple, anchor: &XiPoint, dom: &RayDomain) -> Result<Vec<XiPoint>> {
    let dists: Vec<f64> = CLOUD_RADII.iter().map(|f| f * dom.delta).collect();
    let mut out = Vec::with_capacity(CLOUD_ANGLES * dists.len());
    for a in 0..CLOUD_ANGLES {
        let theta = 2.0 * std::f64::consts::PI * a as f64 / CLOUD_ANGLES as f64;
        out.extend(trace_direction(pot, anchor, theta, &dists)?.into_iter().filter(|p| dom.contains(p.xi)));
    }
    Ok(out)
}

/// Points on the ray at geometrically growing distances up to `s_max`.
pub fn ray_points(pot: &PotentialTriple, anchor: &XiPoint, dom: &RayDomain, s_max: f64) -> Result<Vec<XiPoint>> {
    let mut dists = Vec::new();
    let mut s = 0.01 * dom.d.max(1e-3);
    while s < s_max {
        dists.push(s);
        s *= 1.5;
    }
    dists.push(s_max);
    let theta = if dom.sign.ray_dir() > 0.0 { 0.0 } else { std::f64::consts::PI };
    let mut out = vec![*anchor];
    out.extend(trace_direction(pot, anchor, theta, &dists)?);
    Ok(out)
}

/// V at sigma = 1 from the anchor along the ray.
pub fn v_at_unit_sigma(eq: &EquationSpec, anchor: &XiPoint) -> Result<f64> {
    let map = SemiInfiniteMap { scale: (0.5 * anchor.xi.norm()).max(0.25) };
    let mut n = 128;
    loop {
        let grid = ChebGrid::new(n);
        let ray = trace_ray_mapped(&eq.pot, anchor, eq.sign, &grid.x, map)?;
        match v_weight(eq, &ray, 1.0) {
            Err(WkbError::Truncation(_)) if n < 1024 => n *= 2,
            other => return other,
        }
    }
}

/// Certifies the condition on the sampled points and assembles the bound
/// inputs; `coeffs` gives `A_{n+1}/n!` at a point.
pub fn build_setup<F>(eq: &EquationSpec, dom: &RayDomain, anchor: &XiPoint, points: Vec<XiPoint>, far: &[XiPoint], coeffs: F) -> Result<BoundSetup>
where
    F: Fn(&XiPoint) -> Result<Vec<C64>> + Sync,
{
    let mut cond_pts = points.clone();
    cond_pts.extend_from_slice(far);
    let cert = certify_conditions(eq, &condition_samples(&eq.pot, &cond_pts)?)?;
    let chain = constants_from_cert(&cert);
    let v1 = v_at_unit_sigma(eq, anchor)?;
    let borel: Vec<BorelPoint> = points
        .par_iter()
        .map(|p| {
            Ok(BorelPoint { xi: p.xi, weight: eq.sign.weight(p.xi.re, eq.rho), coeffs: coeffs(p)? })
        })
        .collect::<Result<_>>()?;
    Ok(BoundSetup {
        sign: eq.sign,
        xi: anchor.xi,
        d: dom.d,
        weight: eq.sign.weight(anchor.xi.re, eq.rho),
        v1,
        cert,
        chain,
        points: borel,
    })
}

/// How the correction series is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// The first N-1 terms of the asymptotic series.
    Asymptotic(usize),
    Borel,
    Factorial,
}

/// The correction with the error estimate of the method (NaN for the plain series).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaValue {
    pub value: C64,
    pub err_estimate: f64,
}

/// `sum_{k=1}^{N-1} A_k / u^k`.
pub fn asymptotic_sum(table: &CoeffTable, at: C64, u: C64, n: usize) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    let mut upow = C64::new(1.0, 0.0);
    for k in 1..n.min(table.len()) {
        upow /= u;
        acc += table.value(k, at) * upow;
    }
    acc
}

/// The correction from a table by any method; the factorial series takes
/// its B_n from the A_n by the Stirling transform.
pub fn correction(table: &CoeffTable, at: C64, xi: C64, u: C64, method: Method, d: f64) -> Result<EtaValue> {
    let avail = table.order();
    match method {
        Method::Asymptotic(n) => {
            if n == 0 || n - 1 > avail {
                return Err(WkbError::Invalid(format!("asymptotic order {n} needs {} coefficients, {avail} available", n.max(1) - 1)));
            }
            Ok(EtaValue { value: asymptotic_sum(table, at, u, n), err_estimate: f64::NAN })
        }
        Method::Borel => {
            let series = borel_series(table, at, xi, avail)?;
            let s = BorelSummation::compute(&series, u, &SumOptions { d, ..SumOptions::default() })?;
            Ok(EtaValue { value: s.value, err_estimate: s.err_estimate })
        }
        Method::Factorial => {
            let a: Vec<C64> = (1..=avail).map(|k| table.value(k, at)).collect();
            let omega = default_omega(d);
            let b = b_from_a(&a, omega, &StirlingTable::new(avail))?;
            let exp = FactorialSeriesExpansion::new(omega, table.sign, b, xi, d)?;
            let v = eval_factorial_series(&exp, u, avail, None)?;
            let prev = eval_factorial_series(&exp, u, avail - 1, None)?;
            Ok(EtaValue { value: v.value, err_estimate: (v.value - prev.value).norm() })
        }
    }
}
