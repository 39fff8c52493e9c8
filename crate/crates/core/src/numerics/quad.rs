//! Gauss–Legendre rules and panel-adaptive integration of complex integrands.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

fn panel<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> C64 {
    let (x, w) = gl20();
    let h = 0.5 * (b - a);
    let m = 0.5 * (b + a);
    let mut s = C64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(w) {
        s += f(m + h * xi) * *wi;
    }
    s * h
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: C64,
    pub err: f64,
    pub panels: usize,
}

/// Adaptive bisection with 20-point panels; a panel is accepted when it
/// agrees with the sum over its halves to `abs_tol + rel_tol |I|`.
pub fn adaptive<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> QuadResult {
    let whole = panel(&f, a, b);
    let mut stack = vec![(a, b, whole, 0usize)];
    let mut value = C64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut panels = 0;
    let scale = whole.norm().max(1e-300);
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(&f, lo, mid);
        let right = panel(&f, mid, hi);
        let refined = left + right;
        let diff = (refined - est).norm();
        let tol = (abs_tol + rel_tol * scale) * (hi - lo) / (b - a);
        if diff <= tol || depth > 48 {
            value += refined;
            err += diff;
            panels += 1;
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    QuadResult { value, err, panels }
}
