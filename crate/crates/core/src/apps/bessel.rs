//! Bessel and Hankel functions of large order from the WKB machinery.
//!
//! `w'' = (nu^2 (z^{-2} - 1) + 2 nu kappa z^{-2} + (4 kappa^2 - 1)/(4 z^2)) w`
//! has the solutions `z^{1/2} H_{nu+kappa}(nu z)`.

use super::{asymptotic_sum, build_setup, EtaValue, Method, cloud_points, inverse_power_jet, inverse_power_taylor, ray_points};
use crate::borel::{borel_series, BorelSummation, SumOptions};
use crate::bounds::BoundSetup;
use crate::coeffs::{bessel_table, TABLE_BITS};
use crate::equation::{ConditionKind, EquationSpec, RayDomain};
use crate::error::{Result, WkbError};
use crate::factorial::{b_recursive_poly, default_omega, eval_factorial_series, FactorialSeriesExpansion};
use crate::numerics::bigfixed::BigFixedC;
use crate::poly::eval_fixed_big;
use crate::transform::{compute_xi, JetFn, PotentialTriple, XiPoint};
use crate::types::Sign;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// The Bessel potential with parameter kappa; `f0 = z^{-2} - 1`, `z0 = 1`.
pub fn potential(kappa: C64) -> PotentialTriple {
    let f0: JetFn = Arc::new(|z| {
        let mut j = inverse_power_jet(C64::new(1.0, 0.0), 2, z);
        j[0] -= 1.0;
        j
    });
    let f1: JetFn = Arc::new(move |z| inverse_power_jet(kappa * 2.0, 2, z));
    let c2 = (kappa * kappa * 4.0 - 1.0) / 4.0;
    let f2: JetFn = Arc::new(move |z| inverse_power_jet(c2, 2, z));
    PotentialTriple {
        name: format!("bessel(kappa = {kappa})"),
        f0,
        f1,
        f2,
        z0: C64::new(1.0, 0.0),
        sqrt_f0_ref: Some(Arc::new(reference_sqrt)),
        in_domain: Arc::new(|z: C64| {
            z.re.is_finite() && z.im.is_finite() && z.norm() > 1e-12 && !(z.im == 0.0 && z.re.abs() <= 1.0)
        }),
        cuts: "[-1, 1]".into(),
        f0_floor: 1e-14,
        phi_vanishes: kappa.norm() == 0.0,
        taylor: Some(Arc::new(move |z, order| {
            let base = inverse_power_taylor(C64::new(1.0, 0.0), 2, z, order);
            let mut f0 = base.clone();
            f0[0] -= 1.0;
            [f0, base.iter().map(|b| b * kappa * 2.0).collect(), base.iter().map(|b| b * c2).collect()]
        })),
    }
}

/// `i (z - 1)^{1/2} (z + 1)^{1/2} / z`, cut along [-1, 1].
pub fn reference_sqrt(z: C64) -> C64 {
    C64::new(0.0, 1.0) * (z - 1.0).sqrt() * (z + 1.0).sqrt() / z
}

/// `xi(z) = i ((z^2 - 1)^{1/2} - arcsec z)` for the reference branch.
pub fn xi_closed_form(z: C64) -> C64 {
    let r = (z - 1.0).sqrt() * (z + 1.0).sqrt();
    let i = C64::new(0.0, 1.0);
    // arcsec z = -i log((1 + i r) / z)
    let asec = -i * ((C64::new(1.0, 0.0) + i * r) / z).ln();
    i * (r - asec)
}

/// The variable of the coefficient polynomials, `p = 1/(z f0^{1/2})`.
pub fn p_of(pt: &XiPoint) -> C64 {
    (pt.z * pt.sqrt_f0).inv()
}

/// Points excluded from the xi-domain: the images of z = 1 and z = -1.
pub const EXCLUDED: [C64; 2] = [C64 { re: 0.0, im: 0.0 }, C64 { re: 0.0, im: -std::f64::consts::PI }];

/// Number of Borel coefficients used by the summation methods.
pub const BOREL_TERMS: usize = 40;

/// Number of factorial-series terms.
pub const FACTORIAL_TERMS: usize = 40;

/// Number of Borel coefficients sampled for the constant C.
pub const C_TERMS: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HankelKind {
    H1,
    H2,
}

impl HankelKind {
    pub fn sign(self) -> Sign {
        match self {
            HankelKind::H1 => Sign::Plus,
            HankelKind::H2 => Sign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselInstance {
    pub nu: C64,
    pub kappa: C64,
    pub z: C64,
    pub point: XiPoint,
    pub p: C64,
}

impl BesselInstance {
    pub fn new(nu: C64, kappa: C64, z: C64) -> Result<Self> {
        if !(nu.re > 0.0) {
            return Err(WkbError::Invalid(format!("need Re nu > 0 (nu = {nu})")));
        }
        let point = compute_xi(&potential(kappa), z, None)?;
        Ok(BesselInstance { nu, kappa, z, point, p: p_of(&point) })
    }

    pub fn domain(&self, sign: Sign) -> Result<RayDomain> {
        RayDomain::new(self.point.xi, sign, &EXCLUDED, None)
    }

    /// `-i ((p-1)/(p+1))^{+-kappa/2} z^{1/2} e^{+-nu xi} / (z^2-1)^{1/4}`.
    pub fn leading(&self, sign: Sign) -> C64 {
        let sg = sign.sg();
        let z = self.z;
        let pp = self.p;
        let ratio = if self.kappa.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            ((pp - 1.0) / (pp + 1.0)).powc(self.kappa * (0.5 * sg))
        };
        let root = ((z - 1.0).sqrt() * (z + 1.0).sqrt()).sqrt();
        -I * ratio * z.sqrt() * (self.nu * self.point.xi * sg).exp() / root
    }

    /// `e^{(pi/2 -+ pi/4) i} (2/(pi nu z))^{1/2}` taking w to the Hankel function.
    pub fn hankel_factor(&self, kind: HankelKind) -> C64 {
        let ph = match kind {
            HankelKind::H1 => std::f64::consts::FRAC_PI_4,
            HankelKind::H2 => 3.0 * std::f64::consts::FRAC_PI_4,
        };
        C64::from_polar(1.0, ph) * (C64::new(2.0, 0.0) / (std::f64::consts::PI * self.nu * self.z)).sqrt()
    }

    /// The exact correction implied by an independent value of the Hankel function.
    pub fn eta_from_hankel(&self, kind: HankelKind, h: C64) -> C64 {
        h / (self.hankel_factor(kind) * self.leading(kind.sign())) - 1.0
    }
}

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// The correction `eta` of the branch by the chosen method.
pub fn eta(inst: &BesselInstance, sign: Sign, method: Method) -> Result<EtaValue> {
    let u = inst.nu;
    match method {
        Method::Asymptotic(n) => {
            if n == 0 {
                return Err(WkbError::Invalid("asymptotic order must be at least 1".into()));
            }
            let table = bessel_table(inst.kappa, sign, n.max(2) - 1);
            Ok(EtaValue { value: asymptotic_sum(&table, inst.p, u, n), err_estimate: f64::NAN })
        }
        Method::Borel => {
            let dom = inst.domain(sign)?;
            let table = bessel_table(inst.kappa, sign, BOREL_TERMS);
            let series = borel_series(&table, inst.p, inst.point.xi, BOREL_TERMS)?;
            let opts = SumOptions { d: dom.d, ..SumOptions::default() };
            let s = BorelSummation::compute(&series, u, &opts)?;
            Ok(EtaValue { value: s.value, err_estimate: s.err_estimate })
        }
        Method::Factorial => {
            let dom = inst.domain(sign)?;
            let exp = factorial_expansion(inst, sign, dom.d, FACTORIAL_TERMS)?;
            let v = eval_factorial_series(&exp, u, FACTORIAL_TERMS, None)?;
            let prev = eval_factorial_series(&exp, u, FACTORIAL_TERMS - 1, None)?;
            Ok(EtaValue { value: v.value, err_estimate: (v.value - prev.value).norm() })
        }
    }
}

/// B_1..B_N at the instance, omega from the domain constant.
pub fn factorial_expansion(inst: &BesselInstance, sign: Sign, d: f64, n: usize) -> Result<FactorialSeriesExpansion> {
    let omega = default_omega(d);
    let polys = b_recursive_poly(inst.kappa, omega, sign, n, TABLE_BITS);
    let at = BigFixedC::from_c64(inst.p, TABLE_BITS);
    let b = polys.iter().map(|c| eval_fixed_big(c, &at).to_c64()).collect();
    FactorialSeriesExpansion::new(omega, sign, b, inst.point.xi, d)
}

/// `w^+-(nu, z)`.
pub fn w_value(inst: &BesselInstance, sign: Sign, method: Method) -> Result<C64> {
    Ok(inst.leading(sign) * (eta(inst, sign, method)?.value + 1.0))
}

/// `H^(1)` or `H^(2)` of order `nu + kappa` at `nu z`.
pub fn hankel_wkb(inst: &BesselInstance, method: Method, kind: HankelKind) -> Result<C64> {
    Ok(inst.hankel_factor(kind) * w_value(inst, kind.sign(), method)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselJY {
    pub j: C64,
    pub y: C64,
}

/// J and Y of order `nu + kappa` at `nu z` from both WKB solutions.
pub fn bessel_jy_wkb(inst: &BesselInstance, method: Method) -> Result<BesselJY> {
    let wp = w_value(inst, Sign::Plus, method)?;
    let wm = w_value(inst, Sign::Minus, method)?;
    let den = (std::f64::consts::PI * inst.nu * inst.z * 2.0).sqrt();
    let e = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    Ok(BesselJY { j: (e * wp - e.conj() * wm) / den, y: (e.conj() * wp - e * wm) / den })
}

/// Inputs of the remainder bound at the instance's point for one branch.
pub fn bound_setup(kappa: C64, z: C64, sign: Sign) -> Result<BoundSetup> {
    let pot = potential(kappa);
    let anchor = compute_xi(&pot, z, None)?;
    let dom = RayDomain::new(anchor.xi, sign, &EXCLUDED, None)?;
    let eq = EquationSpec::new(pot.clone(), sign, ConditionKind::Cond1, 1.0, dom.d, dom.epsilon)?;
    let scale = anchor.xi.norm().max(1.0);
    let mut points = ray_points(&pot, &anchor, &dom, 50.0 * scale)?;
    points.extend(cloud_points(&pot, &anchor, &dom)?);
    let far = ray_points(&pot, &anchor, &dom, 1e4 * scale)?;
    let table = bessel_table(kappa, sign, C_TERMS);
    build_setup(&eq, &dom, &anchor, points, &far, |pt| {
        let p = p_of(pt);
        Ok((0..C_TERMS).map(|k| table.value_over_factorial(k + 1, p, k)).collect())
    })
}
