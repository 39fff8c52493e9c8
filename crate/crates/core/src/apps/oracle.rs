//! Independent reference values of Bessel and Hankel functions.
//!
//! Hankel functions come from `H^(1,2)_mu(x) = +-(1/(pi i)) int e^{x sinh w - mu w} dw`
//! taken along the steepest-descent path through the relevant saddle, with
//! the trapezoidal rule in the path parameter. The power series of J in
//! fixed point serves as a cross-check.

use crate::error::{Result, WkbError};
use crate::numerics::bigfixed::BigFixedC;
use crate::numerics::gamma::ln_gamma_c;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselValues {
    pub j: C64,
    pub y: C64,
    pub h1: C64,
    pub h2: C64,
}

/// Largest relative disagreement between the step-h and step-2h rules
/// tolerated before reporting lost precision.
pub const ORACLE_TOL: f64 = 1e-9;

/// Path parameter at which the end valleys are classified when the
/// integration range is not conclusive.
const VALLEY_TAU: f64 = 40.0;

fn coshm1(d: C64) -> C64 {
    if d.norm() < 1.0 {
        let d2 = d * d;
        let mut term = d2 * 0.5;
        let mut acc = term;
        for k in 1..20 {
            term *= d2 / ((2 * k + 1) as f64 * (2 * k + 2) as f64);
            acc += term;
        }
        acc
    } else {
        d.cosh() - 1.0
    }
}

fn sinhm(d: C64) -> C64 {
    if d.norm() < 1.0 {
        let d2 = d * d;
        let mut term = d * d2 / 6.0;
        let mut acc = term;
        for k in 2..20 {
            term *= d2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            acc += term;
        }
        acc
    } else {
        d.sinh() - d
    }
}

struct Saddle {
    x: C64,
    mu: C64,
    w: C64,
    sh: C64,
    ch: C64,
}

impl Saddle {
    /// `g(w_s + d) - g(w_s)` for `g(w) = x sinh w - mu w`, free of cancellation near the saddle.
    fn dg(&self, d: C64) -> C64 {
        self.x * (self.sh * coshm1(d) + self.ch * sinhm(d)) + (self.x * self.ch - self.mu) * d
    }

    /// `g'(w_s + d)`.
    fn dg1(&self, d: C64) -> C64 {
        self.x * (self.ch * coshm1(d) + self.sh * d.sinh()) + (self.x * self.ch - self.mu)
    }
}

/// Points of the path `g(w) = g(w_s) - tau^2` for `tau = 0, h, 2h, ...` (or
/// negative steps), as offsets from the saddle.
fn trace(s: &Saddle, a: C64, h: f64, steps: usize) -> Result<Vec<C64>> {
    let mut out = vec![C64::new(0.0, 0.0)];
    for k in 1..=steps {
        let tau = h * k as f64;
        let guess = match out.len() {
            1 => a * tau,
            2 => out[1] * 2.0 - out[0],
            n => out[n - 1] * 3.0 - out[n - 2] * 3.0 + out[n - 3],
        };
        let mut d = if k == 1 { a * tau } else { guess };
        let mut ok = false;
        for _ in 0..60 {
            let f = s.dg(d) + tau * tau;
            let fp = s.dg1(d);
            if fp.norm() == 0.0 {
                break;
            }
            let step = f / fp;
            d -= step;
            if step.norm() <= 1e-15 * (1.0 + d.norm()) {
                ok = true;
                break;
            }
        }
        if !ok || !d.re.is_finite() {
            return Err(WkbError::PrecisionLoss(format!("steepest-descent path lost at tau = {tau}")));
        }
        out.push(d);
    }
    Ok(out)
}

/// `H^(kind)_mu(x)` for `Re x > 0`, `kind` 1 or 2.
pub fn hankel(kind: u8, mu: C64, x: C64) -> Result<C64> {
    if !(x.re > 0.0) {
        return Err(WkbError::Domain(format!("the contour integral needs Re x > 0 (x = {x})")));
    }
    let sg = match kind {
        1 => 1.0,
        2 => -1.0,
        _ => return Err(WkbError::Invalid(format!("Hankel kind {kind}"))),
    };
    let beta = (mu / x).acos();
    let w = I * beta * sg;
    let s = Saddle { x, mu, w, sh: w.sinh(), ch: mu / x };
    let g2 = x * s.sh;
    if g2.norm() < 1e-8 {
        return Err(WkbError::PrecisionLoss("coalescing saddles".into()));
    }
    let mut a = (C64::new(-2.0, 0.0) / g2).sqrt();
    if a.re < 0.0 {
        a = -a;
    }
    let h = 0.02f64;
    let tmax = 6.6;
    let steps = (tmax / h).ceil() as usize;
    let fwd = trace(&s, a, h, steps)?;
    let bwd = trace(&s, a, -h, steps)?;
    let deriv = |d: C64, tau: f64| if tau == 0.0 { a } else { C64::new(-2.0 * tau, 0.0) / s.dg1(d) };

    // The path must run from the valley at -inf to the one at +inf + i pi sg.
    let ax = x.arg();
    let valleys = |lo: C64, hi: C64| {
        let orient = if hi.re > lo.re { 1.0 } else { -1.0 };
        let (left, right) = if orient > 0.0 { (lo, hi) } else { (hi, lo) };
        let decays_left = (ax - left.im).cos() > 0.0 && left.re < s.w.re;
        let decays_right = (ax + right.im).cos() < 0.0 && right.re > s.w.re;
        let im_ok = left.im.abs() < PI && (right.im - sg * PI).abs() < PI;
        (orient, decays_left && decays_right && im_ok, left, right)
    };
    let (orient, mut ok, mut left, mut right) = valleys(bwd[steps] + w, fwd[steps] + w);
    if !ok {
        let far = (VALLEY_TAU / h).ceil() as usize;
        let f = trace(&s, a, h, far)?;
        let b = trace(&s, a, -h, far)?;
        let (o, far_ok, l, r) = valleys(b[far] + w, f[far] + w);
        ok = far_ok && o == orient;
        left = l;
        right = r;
    }
    if !ok {
        return Err(WkbError::PrecisionLoss(format!("steepest-descent path from {left} to {right} ends in the wrong valleys")));
    }

    let mut sum_h = C64::new(0.0, 0.0);
    let mut sum_2h = C64::new(0.0, 0.0);
    for k in 0..=steps {
        let tau = h * k as f64;
        let wt = (-tau * tau).exp();
        let mut v = deriv(fwd[k], tau) * wt;
        if k > 0 {
            v += deriv(bwd[k], -tau) * wt;
        }
        sum_h += v;
        if k % 2 == 0 {
            sum_2h += v;
        }
    }
    let int_h = sum_h * h * orient;
    let int_2h = sum_2h * (2.0 * h) * orient;
    if (int_h - int_2h).norm() > ORACLE_TOL * int_h.norm() {
        return Err(WkbError::PrecisionLoss(format!(
            "trapezoid rules disagree by {:.2e}",
            (int_h - int_2h).norm() / int_h.norm()
        )));
    }
    let gs = x * s.sh - mu * w;
    Ok(gs.exp() * int_h * sg / (PI * I))
}

/// J, Y, H1 and H2 of order `mu` at `x`.
pub fn oracle_bessel(mu: C64, x: C64) -> Result<BesselValues> {
    if x.norm() > 500.0 || mu.re.abs() > 200.0 {
        return Err(WkbError::Domain(format!("oracle range exceeded (mu = {mu}, x = {x})")));
    }
    let h1 = hankel(1, mu, x)?;
    let h2 = hankel(2, mu, x)?;
    Ok(BesselValues { j: (h1 + h2) * 0.5, y: (h1 - h2) / (I * 2.0), h1, h2 })
}

/// `J_mu(x)` from its power series summed in fixed point.
pub fn bessel_j_series(mu: C64, x: C64) -> Result<C64> {
    if x.norm() > 500.0 {
        return Err(WkbError::Domain(format!("series range exceeded (x = {x})")));
    }
    let bits = 128 + (2.0 * x.norm() * std::f64::consts::LOG2_E) as u32;
    let xb = BigFixedC::from_c64(x, bits);
    let q = xb.mul(&xb).scale_i64(-1).div_i64(4);
    let mub = BigFixedC::from_c64(mu, bits);
    let one = BigFixedC::from_c64(C64::new(1.0, 0.0), bits);
    let mut term = one.clone();
    let mut acc = one;
    let mut k = 1usize;
    let mut small = 0;
    while small < 3 {
        let den = (&mub + &BigFixedC::from_c64(C64::new(k as f64, 0.0), bits)).scale_i64(k as i64);
        term = term.mul(&q).div(&den);
        acc = &acc + &term;
        let mag = term.norm_log2();
        small = if mag < acc.norm_log2() - 64.0 - 20.0 && k as f64 > x.norm() { small + 1 } else { 0 };
        k += 1;
        if k > 100_000 {
            return Err(WkbError::PrecisionLoss("power series did not converge".into()));
        }
    }
    let lead = (mu * (x / 2.0).ln() - ln_gamma_c(mu + 1.0)).exp();
    Ok(lead * acc.to_c64())
}
