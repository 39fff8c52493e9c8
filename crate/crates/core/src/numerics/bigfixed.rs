//! Complex fixed-point numbers backed by big integers, used where an
//! alternating sum cancels far more digits than f64 carries.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::ops::{Add, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct BigFixedC {
    pub re: BigInt,
    pub im: BigInt,
    pub bits: u32,
}

fn ldexp(m: f64, e: i64) -> f64 {
    let mut v = m;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

fn real_from_f64(x: f64, bits: u32) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    let (mant, exp, sign) = num_traits::float::FloatCore::integer_decode(x);
    let mut v = BigInt::from(mant);
    let shift = exp as i64 + bits as i64;
    if shift >= 0 {
        v <<= shift as usize;
    } else {
        v >>= (-shift) as usize;
    }
    if sign < 0 {
        -v
    } else {
        v
    }
}

fn real_to_f64(v: &BigInt, bits: u32) -> f64 {
    let nbits = v.bits() as i64;
    if nbits <= 1000 {
        return ldexp(v.to_f64().unwrap_or(0.0), -(bits as i64));
    }
    let drop = nbits - 64;
    let top: BigInt = v >> drop as usize;
    ldexp(top.to_f64().unwrap_or(0.0), drop - bits as i64)
}

impl BigFixedC {
    pub fn zero(bits: u32) -> Self {
        BigFixedC { re: BigInt::zero(), im: BigInt::zero(), bits }
    }

    pub fn from_c64(z: C64, bits: u32) -> Self {
        BigFixedC { re: real_from_f64(z.re, bits), im: real_from_f64(z.im, bits), bits }
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        let num: BigInt = q.numer().clone() << bits as usize;
        BigFixedC { re: num / q.denom(), im: BigInt::zero(), bits }
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(real_to_f64(&self.re, self.bits), real_to_f64(&self.im, self.bits))
    }

    pub fn mul(&self, o: &BigFixedC) -> BigFixedC {
        let b = self.bits as usize;
        let re = (&self.re * &o.re - &self.im * &o.im) >> b;
        let im = (&self.re * &o.im + &self.im * &o.re) >> b;
        BigFixedC { re, im, bits: self.bits }
    }

    pub fn div(&self, o: &BigFixedC) -> BigFixedC {
        let b = self.bits as usize;
        let den = &o.re * &o.re + &o.im * &o.im;
        assert!(den.sign() != Sign::NoSign, "division by zero");
        let nre = (&self.re * &o.re + &self.im * &o.im) << b;
        let nim = (&self.im * &o.re - &self.re * &o.im) << b;
        BigFixedC { re: nre / &den, im: nim / &den, bits: self.bits }
    }

    pub fn scale_i64(&self, k: i64) -> BigFixedC {
        BigFixedC { re: &self.re * k, im: &self.im * k, bits: self.bits }
    }

    pub fn div_i64(&self, k: i64) -> BigFixedC {
        BigFixedC { re: &self.re / k, im: &self.im / k, bits: self.bits }
    }

    /// `(m, e)` with `self = m * 2^e` and |m| well inside the f64 range.
    pub fn to_c64_exp(&self) -> (C64, i64) {
        let e = (self.norm_log2() as i64 - 900).max(0);
        if e == 0 {
            return (self.to_c64(), 0);
        }
        let m = BigFixedC { re: &self.re >> e as usize, im: &self.im >> e as usize, bits: self.bits };
        (m.to_c64(), e)
    }

    pub fn norm_log2(&self) -> f64 {
        let m = self.re.bits().max(self.im.bits()) as f64;
        m - self.bits as f64
    }
}

impl<'a> Add<&'a BigFixedC> for &'a BigFixedC {
    type Output = BigFixedC;
    fn add(self, o: &BigFixedC) -> BigFixedC {
        BigFixedC { re: &self.re + &o.re, im: &self.im + &o.im, bits: self.bits }
    }
}

impl<'a> Sub<&'a BigFixedC> for &'a BigFixedC {
    type Output = BigFixedC;
    fn sub(self, o: &BigFixedC) -> BigFixedC {
        BigFixedC { re: &self.re - &o.re, im: &self.im - &o.im, bits: self.bits }
    }
}
