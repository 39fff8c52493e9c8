//! Truncated power series with complex coefficients, all of the same length.

use num_complex::Complex64 as C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let m = a.len().min(b.len());
    (0..m).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}

pub fn scale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|x| x * s).collect()
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn recip(a: &[C64]) -> Vec<C64> {
    let m = a.len();
    let inv0 = a[0].inv();
    let mut b = vec![ZERO; m];
    b[0] = inv0;
    for k in 1..m {
        let s: C64 = (1..=k).map(|i| a[i] * b[k - i]).sum();
        b[k] = -s * inv0;
    }
    b
}

pub fn div(a: &[C64], b: &[C64]) -> Vec<C64> {
    mul(a, &recip(b))
}

/// Square root whose constant term is `root0` (a square root of `a[0]`).
pub fn sqrt(a: &[C64], root0: C64) -> Vec<C64> {
    let m = a.len();
    let mut b = vec![ZERO; m];
    b[0] = root0;
    for k in 1..m {
        let s: C64 = (1..k).map(|i| b[i] * b[k - i]).sum();
        b[k] = (a[k] - s) / (root0 * 2.0);
    }
    b
}

/// Derivative; the last coefficient is lost and set to zero.
pub fn deriv(a: &[C64]) -> Vec<C64> {
    let m = a.len();
    let mut b = vec![ZERO; m];
    for k in 0..m.saturating_sub(1) {
        b[k] = a[k + 1] * (k + 1) as f64;
    }
    b
}

/// `f(h(t))` for `h(0) = 0`.
pub fn compose(f: &[C64], h: &[C64]) -> Vec<C64> {
    let m = f.len().min(h.len());
    let mut r = vec![ZERO; m];
    for k in (0..m).rev() {
        r = mul(&r, h);
        r[0] += f[k];
    }
    r
}

/// Solution of `h' = g(h)`, `h(0) = 0`, as a series in t: the inverse of
/// `t(h) = int_0^h dw / g(w)` by Lagrange inversion.
pub fn solve_autonomous(g: &[C64]) -> Vec<C64> {
    let m = g.len();
    // w / t(w) = 1 / (sum_k r_k w^k / (k+1)) with r = 1/g
    let r = recip(g);
    let t_over_w: Vec<C64> = r.iter().enumerate().map(|(k, v)| v / (k + 1) as f64).collect();
    let phi = recip(&t_over_w);
    let mut h = vec![ZERO; m];
    let mut power = vec![ZERO; m];
    power[0] = C64::new(1.0, 0.0);
    for k in 1..m {
        power = mul(&power, &phi);
        h[k] = power[k - 1] / k as f64;
    }
    h
}

/// `k! a_k`, the derivatives at the expansion point.
pub fn to_derivatives(a: &[C64]) -> Vec<C64> {
    let mut f = 1.0;
    a.iter()
        .enumerate()
        .map(|(k, x)| {
            if k > 0 {
                f *= k as f64;
            }
            x * f
        })
        .collect()
}

/// Taylor coefficients of `f` at `z` from `m` samples on a circle of radius `r`.
pub fn taylor_on_circle<F: Fn(C64) -> C64>(f: F, z: C64, r: f64, order: usize, m: usize) -> Vec<C64> {
    let vals: Vec<C64> = (0..m)
        .map(|l| f(z + C64::from_polar(r, 2.0 * std::f64::consts::PI * l as f64 / m as f64)))
        .collect();
    (0..=order)
        .map(|k| {
            let s: C64 = vals
                .iter()
                .enumerate()
                .map(|(l, v)| v * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * (k * l) as f64 / m as f64))
                .sum();
            s / (m as f64 * r.powi(k as i32))
        })
        .collect()
}
