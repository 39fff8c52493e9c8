//! Factorial-series form of the WKB corrections: the coefficients B_n by
//! the Stirling transform of the A_n and by their own recursion, series
//! evaluation with stable denominators, and the explicit tail bound.

use crate::coeffs::{rational_kappa, RayContext};
use crate::error::{Result, WkbError};
use crate::numerics::bigfixed::BigFixedC;
use crate::numerics::gamma::ln_gamma;
use crate::poly::{bessel_step_fixed, bessel_step_q, BiPolyQ, PolyQ};
use crate::types::Sign;
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Stirling numbers of the first kind (signed), `s(n, k)` for `k <= n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    pub n_max: usize,
    pub s: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(n_max: usize) -> Self {
        let mut s: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for n in 0..n_max {
            let prev = &s[n];
            let row: Vec<BigInt> = (0..=n + 1)
                .map(|k| {
                    let left = if k >= 1 { prev.get(k - 1).cloned().unwrap_or_default() } else { BigInt::zero() };
                    let right = prev.get(k).cloned().unwrap_or_default();
                    left - right * BigInt::from(n)
                })
                .collect();
            s.push(row);
        }
        StirlingTable { n_max, s }
    }

    pub fn get(&self, n: usize, k: usize) -> &BigInt {
        &self.s[n][k]
    }
}

pub fn stirling(n_max: usize) -> StirlingTable {
    StirlingTable::new(n_max)
}

fn check_len(len: usize, s: &StirlingTable) -> Result<()> {
    if len == 0 || len - 1 > s.n_max {
        return Err(WkbError::Invalid(format!("Stirling table of order {} cannot transform {len} coefficients", s.n_max)));
    }
    Ok(())
}

/// `B_{n+1} = sum_{k=0}^{n} (-omega)^{n-k} s(n,k) A_{k+1}` from `a = [A_1, A_2, ...]`.
pub fn b_from_a(a: &[C64], omega: f64, s: &StirlingTable) -> Result<Vec<C64>> {
    check_len(a.len(), s)?;
    Ok((0..a.len())
        .map(|n| {
            (0..=n)
                .map(|k| a[k] * (s.get(n, k).to_f64().unwrap_or(f64::NAN) * (-omega).powi((n - k) as i32)))
                .sum()
        })
        .collect())
}

/// [`b_from_a`] in fixed point.
pub fn b_from_a_fixed(a: &[BigFixedC], omega: &BigFixedC, s: &StirlingTable) -> Result<Vec<BigFixedC>> {
    check_len(a.len(), s)?;
    let bits = omega.bits;
    let neg = omega.scale_i64(-1);
    let mut pow = vec![BigFixedC::from_rational(&BigRational::one(), bits)];
    for k in 1..a.len() {
        pow.push(pow[k - 1].mul(&neg));
    }
    Ok((0..a.len())
        .map(|n| {
            let mut acc = BigFixedC::zero(bits);
            for k in 1..=n {
                let sk = s.get(n, k);
                if sk.is_zero() {
                    continue;
                }
                let term = pow[n - k].mul(&a[k]);
                acc = &acc + &BigFixedC { re: term.re * sk, im: term.im * sk, bits };
            }
            if n == 0 {
                acc = a[0].clone();
            }
            acc
        })
        .collect())
}

/// [`b_from_a`] on exact polynomials, keeping omega symbolic.
pub fn b_from_a_symbolic(a: &[PolyQ], s: &StirlingTable) -> Result<Vec<BiPolyQ>> {
    check_len(a.len(), s)?;
    Ok((0..a.len())
        .map(|n| {
            let mut acc = BiPolyQ::default();
            for k in 0..=n {
                let sign = if (n - k) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let coef = BigRational::from_integer(s.get(n, k) * sign);
                acc = acc.add(&BiPolyQ::from_p(a[k].clone()).mul_omega_pow(&coef, n - k));
            }
            acc
        })
        .collect())
}

/// B_1..B_N of the Bessel application by their recursion, exact in p and omega.
pub fn b_recursive_symbolic(kappa: &BigRational, n_max: usize) -> Vec<BiPolyQ> {
    let a1 = bessel_step_q(&PolyQ::one(), kappa);
    let mut out = vec![BiPolyQ::from_p(a1)];
    for n in 1..n_max {
        let prev = &out[n - 1];
        let shifted = prev.mul_omega_pow(&BigRational::from_integer(BigInt::from(n as i64 - 1)), 1);
        out.push(prev.map_p(|t| bessel_step_q(t, kappa)).add(&shifted));
    }
    out
}

/// B_1..B_N of the Bessel application as fixed-point polynomials in p for
/// the given branch.
pub fn b_recursive_poly(kappa: C64, omega: f64, sign: Sign, n_max: usize, bits: u32) -> Vec<Vec<BigFixedC>> {
    let kap = match rational_kappa(kappa) {
        Some(r) => BigFixedC::from_rational(&r, bits),
        None => BigFixedC::from_c64(kappa, bits),
    };
    let one = BigFixedC::from_rational(&BigRational::one(), bits);
    let lin = (&one - &kap.mul(&kap).scale_i64(4)).div_i64(8);
    let om = BigFixedC::from_c64(C64::new(omega, 0.0), bits);
    let mut out: Vec<Vec<BigFixedC>> = Vec::with_capacity(n_max);
    if n_max == 0 {
        return out;
    }
    out.push(bessel_step_fixed(&[one], &kap, &lin));
    for n in 1..n_max {
        let prev = &out[n - 1];
        let mut next = bessel_step_fixed(prev, &kap, &lin);
        let shift = om.scale_i64(n as i64 - 1);
        for (slot, c) in next.iter_mut().zip(prev) {
            *slot = &*slot + &shift.mul(c);
        }
        out.push(next);
    }
    if sign == Sign::Minus {
        for poly in out.iter_mut() {
            for (k, c) in poly.iter_mut().enumerate() {
                if k % 2 == 1 {
                    *c = c.scale_i64(-1);
                }
            }
        }
    }
    out
}

/// B_1..B_N on a ray by their recursion (values at the nodes).
pub fn b_recursive_ray(ctx: &RayContext, omega: f64, n_max: usize) -> Result<Vec<Vec<C64>>> {
    crate::coeffs::b_recursive_ray(ctx, omega, n_max)
}

/// Coefficients of the factorial series at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorialSeriesExpansion {
    pub omega: f64,
    pub sign: Sign,
    /// `b[n] = B_{n+1}`.
    pub b: Vec<C64>,
    pub xi: C64,
    pub d: f64,
}

impl FactorialSeriesExpansion {
    pub fn new(omega: f64, sign: Sign, b: Vec<C64>, xi: C64, d: f64) -> Result<Self> {
        if !(omega > 0.0) || !(d > 0.0) {
            return Err(WkbError::Invalid(format!("need omega > 0 and d > 0 (got {omega}, {d})")));
        }
        Ok(FactorialSeriesExpansion { omega, sign, b, xi, d })
    }

    /// Whether omega exceeds pi/(4d), so that r = pi/(4 omega) < d.
    pub fn omega_admissible(&self) -> bool {
        self.omega > std::f64::consts::PI / (4.0 * self.d)
    }

    /// The radius paired with omega in the tail bound.
    pub fn r(&self) -> f64 {
        std::f64::consts::PI / (4.0 * self.omega)
    }
}

/// Default omega for a domain constant: 1.25 pi / (4d).
pub fn default_omega(d: f64) -> f64 {
    1.25 * std::f64::consts::PI / (4.0 * d)
}

/// Default sigma: min(omega/2, Re u/2).
pub fn default_sigma(omega: f64, u: C64) -> f64 {
    (0.5 * omega).min(0.5 * u.re)
}

/// `ln(u (u + omega) ... (u + n omega))` for n = 0..N-1.
pub fn ln_denominators(u: C64, omega: f64, n: usize) -> Vec<C64> {
    let mut acc = C64::new(0.0, 0.0);
    (0..n)
        .map(|k| {
            acc += (u + omega * k as f64).ln();
            acc
        })
        .collect()
}

/// Constants entering the tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailInputs {
    /// C at r = pi/(4 omega).
    pub c: f64,
    pub v: f64,
    pub weight: f64,
    pub sigma: f64,
}

/// `(C / 2^{sigma/omega}) Gamma(Re u/omega - 1) / (omega - sigma) e^V / weight (N + 1/2)^{1 - Re u/omega}`.
pub fn tail_bound(omega: f64, u: C64, n: usize, t: &TailInputs) -> Result<f64> {
    if !(u.re > omega && omega > t.sigma && t.sigma > 0.0) {
        return Err(WkbError::ParameterOrder(format!(
            "need Re u > omega > sigma > 0 (u = {u}, omega = {omega}, sigma = {})",
            t.sigma
        )));
    }
    if t.c == 0.0 {
        return Ok(0.0);
    }
    let a = u.re / omega;
    let ln = t.c.ln() - (t.sigma / omega) * std::f64::consts::LN_2 + ln_gamma(a - 1.0) - (omega - t.sigma).ln() + t.v
        - t.weight.ln()
        + (1.0 - a) * (n as f64 + 0.5).ln();
    Ok(ln.exp())
}

/// A partial sum of the factorial series with its tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorialValue {
    pub value: C64,
    /// NaN when not certified.
    pub tail_bound: f64,
    pub certified: bool,
}

/// `sum_{n=0}^{N-1} B_{n+1} / (u (u + omega) ... (u + n omega))`, with the
/// tail bound when `tail` is given and `Re u > omega > sigma`.
pub fn eval_factorial_series(exp: &FactorialSeriesExpansion, u: C64, n: usize, tail: Option<&TailInputs>) -> Result<FactorialValue> {
    if n > exp.b.len() {
        return Err(WkbError::Invalid(format!("{n} terms requested, {} coefficients available", exp.b.len())));
    }
    if !(u.re > 0.0) {
        return Err(WkbError::ParameterOrder(format!("factorial series needs Re u > 0 (u = {u})")));
    }
    let dens = ln_denominators(u, exp.omega, n);
    let value = exp.b[..n].iter().zip(&dens).map(|(b, ld)| b * (-ld).exp()).sum();
    let (tail_bound, certified) = match tail {
        Some(t) => match tail_bound(exp.omega, u, n, t) {
            Ok(b) => (b, true),
            Err(WkbError::ParameterOrder(_)) => (f64::NAN, false),
            Err(e) => return Err(e),
        },
        None => (f64::NAN, false),
    };
    Ok(FactorialValue { value, tail_bound, certified })
}
