//! Dense univariate polynomials: exact over the rationals, and over the
//! complex numbers for parameters that are not rational.

use crate::numerics::bigfixed::BigFixedC;
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Working precision (fractional bits) for fixed-point evaluation.
pub const FIXED_BITS: u32 = 192;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().bits() as i64;
        let d = x.denom().bits() as i64;
        if n - d > 1000 {
            if x.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        } else {
            0.0
        }
    })
}

/// The simplest rational within `1e-14` (relative) of `x` whose denominator
/// does not exceed `max_den`, if any.
pub fn rational_from_f64(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x.abs();
    for _ in 0..40 {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let approx = h1 as f64 / k1 as f64;
        if (approx - x.abs()).abs() <= 1e-14 * x.abs().max(1.0) {
            let sign = if x < 0.0 { -1 } else { 1 };
            return Some(BigRational::new(BigInt::from(sign * h1), BigInt::from(k1)));
        }
        let frac = r - a;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Polynomial with exact rational coefficients, index = degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyQ {
    pub c: Vec<BigRational>,
}

impl PolyQ {
    pub fn zero() -> Self {
        PolyQ { c: Vec::new() }
    }

    pub fn one() -> Self {
        PolyQ { c: vec![BigRational::one()] }
    }

    pub fn from_coeffs(c: Vec<BigRational>) -> Self {
        let mut p = PolyQ { c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.c.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &PolyQ) -> PolyQ {
        let n = self.c.len().max(o.c.len());
        PolyQ::from_coeffs((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &PolyQ) -> PolyQ {
        let n = self.c.len().max(o.c.len());
        PolyQ::from_coeffs((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn scale(&self, s: &BigRational) -> PolyQ {
        PolyQ::from_coeffs(self.c.iter().map(|x| x * s).collect())
    }

    pub fn mul(&self, o: &PolyQ) -> PolyQ {
        if self.is_zero() || o.is_zero() {
            return PolyQ::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        PolyQ::from_coeffs(c)
    }

    /// `p(x) -> p(-x)`
    pub fn reflect(&self) -> PolyQ {
        PolyQ::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .map(|(k, x)| if k % 2 == 1 { -x.clone() } else { x.clone() })
                .collect(),
        )
    }

    pub fn derivative(&self) -> PolyQ {
        PolyQ::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, x)| x * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval_q(&self, x: &BigRational) -> BigRational {
        self.c.iter().rev().fold(BigRational::zero(), |acc, ck| acc * x + ck)
    }

    pub fn to_c64(&self) -> Vec<C64> {
        self.c.iter().map(|x| C64::new(rational_to_f64(x), 0.0)).collect()
    }

    pub fn to_fixed(&self, bits: u32) -> Vec<BigInt> {
        self.c
            .iter()
            .map(|x| (x.numer().clone() << bits as usize) / x.denom())
            .collect()
    }

    /// Evaluate in fixed point; immune to the cancellation between large
    /// coefficients that plain f64 Horner suffers.
    pub fn eval(&self, p: C64) -> C64 {
        eval_fixed(&self.to_fixed(FIXED_BITS), p, FIXED_BITS)
    }
}

/// Horner evaluation of real fixed-point coefficients at a complex point.
pub fn eval_fixed(coeffs: &[BigInt], p: C64, bits: u32) -> C64 {
    let x = BigFixedC::from_c64(p, bits);
    let mut acc = BigFixedC::zero(bits);
    for ck in coeffs.iter().rev() {
        acc = acc.mul(&x);
        acc.re += ck;
    }
    acc.to_c64()
}

/// Evaluate `sum_k coeffs[k] p^k` with complex coefficients in fixed point.
pub fn eval_fixed_complex(coeffs: &[C64], p: C64, bits: u32) -> C64 {
    let x = BigFixedC::from_c64(p, bits);
    let mut acc = BigFixedC::zero(bits);
    for ck in coeffs.iter().rev() {
        acc = &acc.mul(&x) + &BigFixedC::from_c64(*ck, bits);
    }
    acc.to_c64()
}

/// One step of the Bessel recursion in p:
/// `-k p^2 A + 1/2 p^2 (1 - p^2) A' + 1/8 int_0^p (1 - 4k^2 + 8k t - 5t^2) A dt`.
pub fn bessel_step_q(a: &PolyQ, kappa: &BigRational) -> PolyQ {
    let n = a.c.len();
    let mut out = vec![BigRational::zero(); n + 3];
    let half = q(1, 2);
    let eighth = q(1, 8);
    let lin = (BigRational::one() - kappa * kappa * BigInt::from(4)) * &eighth;
    let kap = kappa.clone();
    for (k, ak) in a.c.iter().enumerate() {
        if ak.is_zero() {
            continue;
        }
        let kk = BigInt::from(k as i64);
        out[k + 2] -= &kap * ak;
        if k > 0 {
            let t = ak * &kk * &half;
            out[k + 1] += &t;
            out[k + 3] -= t;
        }
        out[k + 1] += &lin * ak / BigInt::from(k as i64 + 1);
        if !kap.is_zero() {
            out[k + 2] += &kap * ak / BigInt::from(k as i64 + 2);
        }
        out[k + 3] -= ak * BigInt::from(5) * &eighth / BigInt::from(k as i64 + 3);
    }
    PolyQ::from_coeffs(out)
}

/// The complex-coefficient version of [`bessel_step_q`].
pub fn bessel_step_c(a: &[C64], kappa: C64) -> Vec<C64> {
    let n = a.len();
    let mut out = vec![C64::new(0.0, 0.0); n + 3];
    let lin = (C64::new(1.0, 0.0) - kappa * kappa * 4.0) / 8.0;
    for (k, &ak) in a.iter().enumerate() {
        let kf = k as f64;
        out[k + 2] -= kappa * ak;
        out[k + 1] += ak * (0.5 * kf);
        out[k + 3] -= ak * (0.5 * kf);
        out[k + 1] += lin * ak / (kf + 1.0);
        out[k + 2] += kappa * ak / (kf + 2.0);
        out[k + 3] -= ak * (5.0 / 8.0) / (kf + 3.0);
    }
    while out.last().is_some_and(|x| x.norm() == 0.0) {
        out.pop();
    }
    out
}

/// A_0..A_{n_max} of the Bessel application (plus branch) for rational kappa.
pub fn bessel_table_q(kappa: &BigRational, n_max: usize) -> Vec<PolyQ> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(PolyQ::one());
    for n in 0..n_max {
        let next = bessel_step_q(&out[n], kappa);
        out.push(next);
    }
    out
}

/// Polynomial in `omega` whose coefficients are polynomials in `p`:
/// `sum_j terms[j](p) omega^j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPolyQ {
    pub terms: Vec<PolyQ>,
}

impl BiPolyQ {
    pub fn from_p(p: PolyQ) -> Self {
        let mut b = BiPolyQ { terms: vec![p] };
        b.trim();
        b
    }

    fn trim(&mut self) {
        while self.terms.last().is_some_and(|t| t.is_zero()) {
            self.terms.pop();
        }
    }

    pub fn omega_degree(&self) -> Option<usize> {
        self.terms.len().checked_sub(1)
    }

    pub fn add(&self, o: &BiPolyQ) -> BiPolyQ {
        let n = self.terms.len().max(o.terms.len());
        let z = PolyQ::zero();
        let mut b = BiPolyQ {
            terms: (0..n)
                .map(|j| self.terms.get(j).unwrap_or(&z).add(o.terms.get(j).unwrap_or(&z)))
                .collect(),
        };
        b.trim();
        b
    }

    /// Multiply by `s * omega^k`.
    pub fn mul_omega_pow(&self, s: &BigRational, k: usize) -> BiPolyQ {
        let mut terms = vec![PolyQ::zero(); k];
        terms.extend(self.terms.iter().map(|t| t.scale(s)));
        let mut b = BiPolyQ { terms };
        b.trim();
        b
    }

    pub fn map_p(&self, f: impl Fn(&PolyQ) -> PolyQ) -> BiPolyQ {
        let mut b = BiPolyQ { terms: self.terms.iter().map(f).collect() };
        b.trim();
        b
    }

    /// Substitute a rational omega.
    pub fn at_omega(&self, omega: &BigRational) -> PolyQ {
        let mut acc = PolyQ::zero();
        for t in self.terms.iter().rev() {
            acc = acc.scale(omega).add(t);
        }
        acc
    }
}

/// Variable in which a [`PolyC`] is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarTag {
    P,
    InvZm1,
    Xi,
    T,
}

/// Complex polynomial with an optional exact rational shadow.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyC {
    pub coeffs: Vec<C64>,
    pub exact: Option<Vec<BigRational>>,
    pub var: VarTag,
}

impl PolyC {
    pub fn from_exact(p: &PolyQ, var: VarTag) -> Self {
        PolyC { coeffs: p.to_c64(), exact: Some(p.c.clone()), var }
    }

    pub fn from_complex(mut coeffs: Vec<C64>, var: VarTag) -> Self {
        while coeffs.last().is_some_and(|x| x.norm() == 0.0) {
            coeffs.pop();
        }
        PolyC { coeffs, exact: None, var }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: C64) -> C64 {
        match &self.exact {
            Some(e) => PolyQ { c: e.clone() }.eval(x),
            None => eval_fixed_complex(&self.coeffs, x, FIXED_BITS),
        }
    }
}

/// [`bessel_step_q`] in complex fixed point; rounding stays at the level of
/// `2^-bits` times the growth of the recursion itself.
pub fn bessel_step_fixed(a: &[BigFixedC], kappa: &BigFixedC, lin: &BigFixedC) -> Vec<BigFixedC> {
    let bits = kappa.bits;
    let n = a.len();
    let mut out = vec![BigFixedC::zero(bits); n + 3];
    for (k, ak) in a.iter().enumerate() {
        let ki = k as i64;
        let ka = kappa.mul(ak);
        out[k + 2] = &out[k + 2] - &ka;
        out[k + 2] = &out[k + 2] + &ka.div_i64(ki + 2);
        if k > 0 {
            let half_k = ak.scale_i64(ki).div_i64(2);
            out[k + 1] = &out[k + 1] + &half_k;
            out[k + 3] = &out[k + 3] - &half_k;
        }
        out[k + 1] = &out[k + 1] + &lin.mul(ak).div_i64(ki + 1);
        out[k + 3] = &out[k + 3] - &ak.scale_i64(5).div_i64(8 * (ki + 3));
    }
    out
}

/// Fixed-point coefficients of A_0..A_{n_max} (plus branch) for any kappa.
pub fn bessel_table_fixed(kappa: C64, n_max: usize, bits: u32) -> Vec<Vec<BigFixedC>> {
    let kap = match (rational_from_f64(kappa.re, 1000), kappa.im == 0.0) {
        (Some(r), true) => BigFixedC::from_rational(&r, bits),
        _ => BigFixedC::from_c64(kappa, bits),
    };
    let one = BigFixedC::from_rational(&BigRational::one(), bits);
    let lin = (&one - &kap.mul(&kap).scale_i64(4)).div_i64(8);
    let mut out: Vec<Vec<BigFixedC>> = Vec::with_capacity(n_max + 1);
    out.push(vec![one]);
    for n in 0..n_max {
        let next = bessel_step_fixed(&out[n], &kap, &lin);
        out.push(next);
    }
    out
}

/// Horner evaluation of complex fixed-point coefficients.
pub fn eval_fixed_c(coeffs: &[BigFixedC], p: C64, bits: u32) -> C64 {
    eval_fixed_big(coeffs, &BigFixedC::from_c64(p, bits)).to_c64()
}

/// Horner evaluation kept in fixed point.
pub fn eval_fixed_big(coeffs: &[BigFixedC], x: &BigFixedC) -> BigFixedC {
    let mut acc = BigFixedC::zero(x.bits);
    for ck in coeffs.iter().rev() {
        acc = &acc.mul(x) + ck;
    }
    acc
}
