//! Chebyshev–Lobatto grids on [-1, 1] in ascending order, and the
//! semi-infinite map used to represent functions along rays.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Ascending Chebyshev–Lobatto grid with cached cosine table.
#[derive(Debug, Clone)]
pub struct ChebGrid {
    pub n: usize,
    pub x: Vec<f64>,
    cos_table: Vec<f64>,
}

impl ChebGrid {
    /// `n` intervals, `n + 1` nodes `x_j = -cos(pi j / n)`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "grid needs at least two intervals");
        let x = (0..=n).map(|j| -(PI * j as f64 / n as f64).cos()).collect();
        let cos_table = (0..2 * n).map(|m| (PI * m as f64 / n as f64).cos()).collect();
        ChebGrid { n, x, cos_table }
    }

    fn cos_jk(&self, j: usize, k: usize) -> f64 {
        self.cos_table[(j * k) % (2 * self.n)]
    }

    /// Coefficients `a_k` with `f(x) = sum a_k T_k(x)`.
    pub fn coeffs(&self, f: &[C64]) -> Vec<C64> {
        let n = self.n;
        assert_eq!(f.len(), n + 1);
        let mut a = vec![C64::new(0.0, 0.0); n + 1];
        for (k, ak) in a.iter_mut().enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for (j, fj) in f.iter().enumerate() {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                s += fj * (w * self.cos_jk(j, k));
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            *ak = s * (2.0 * sign / n as f64);
        }
        a[0] *= 0.5;
        a[n] *= 0.5;
        a
    }

    /// Nodal values from coefficients.
    pub fn values(&self, a: &[C64]) -> Vec<C64> {
        let n = self.n;
        (0..=n)
            .map(|j| {
                let mut s = C64::new(0.0, 0.0);
                for (k, ak) in a.iter().enumerate().take(n + 1) {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    s += ak * (sign * self.cos_jk(j, k));
                }
                s
            })
            .collect()
    }

    pub fn diff(&self, f: &[C64]) -> Vec<C64> {
        self.values(&cheb_diff_coeffs(&self.coeffs(f)))
    }

    /// `g(x_j) = int_{x_j}^{1} f(x) dx`.
    pub fn tail_integral(&self, f: &[C64]) -> Vec<C64> {
        let big = cheb_integral_coeffs(&self.coeffs(f));
        let total: C64 = big.iter().sum();
        let mut vals = self.values(&big[..=self.n]);
        // the top coefficient T_{n+1} is evaluated explicitly
        let top = big[self.n + 1];
        for (j, v) in vals.iter_mut().enumerate() {
            let t = ((self.n + 1) as f64 * (PI - PI * j as f64 / self.n as f64)).cos();
            *v += top * t;
        }
        vals.into_iter().map(|v| total - v).collect()
    }

    /// Clenshaw–Curtis total integral over [-1, 1].
    pub fn integral(&self, f: &[C64]) -> C64 {
        self.tail_integral(f)[0]
    }
}

pub fn cheb_diff_coeffs(a: &[C64]) -> Vec<C64> {
    let n = a.len() - 1;
    let mut b = vec![C64::new(0.0, 0.0); n + 1];
    if n == 0 {
        return b;
    }
    b[n - 1] = a[n] * (2.0 * n as f64);
    for k in (1..n).rev() {
        let next = if k < n { b[k + 1] } else { C64::new(0.0, 0.0) };
        b[k - 1] = next + a[k] * (2.0 * k as f64);
    }
    b[0] *= 0.5;
    b
}

/// Antiderivative coefficients (length `n + 2`), constant term zero.
pub fn cheb_integral_coeffs(a: &[C64]) -> Vec<C64> {
    let n = a.len() - 1;
    let get = |k: usize| if k <= n { a[k] } else { C64::new(0.0, 0.0) };
    let mut b = vec![C64::new(0.0, 0.0); n + 2];
    for (k, bk) in b.iter_mut().enumerate().skip(1) {
        let lower = if k == 1 { get(0) * 2.0 } else { get(k - 1) };
        *bk = (lower - get(k + 1)) / (2.0 * k as f64);
    }
    b
}

/// Clenshaw evaluation of `sum a_k T_k(x)`.
pub fn cheb_eval(a: &[C64], x: f64) -> C64 {
    let mut b1 = C64::new(0.0, 0.0);
    let mut b2 = C64::new(0.0, 0.0);
    for ak in a.iter().skip(1).rev() {
        let b0 = ak + b1 * (2.0 * x) - b2;
        b2 = b1;
        b1 = b0;
    }
    a[0] + b1 * x - b2
}

/// Relative size of the last few coefficients.
pub fn tail_ratio(a: &[C64]) -> f64 {
    let max = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    let m = a.len();
    let tail = a[m.saturating_sub(4)..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    tail / max
}

/// `s(x) = 2a(1+x)/(1-x)^2` maps [-1, 1) onto [0, inf).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SemiInfiniteMap {
    pub scale: f64,
}

impl SemiInfiniteMap {
    pub fn s_of_x(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return f64::INFINITY;
        }
        2.0 * self.scale * (1.0 + x) / ((1.0 - x) * (1.0 - x))
    }

    pub fn x_of_s(&self, s: f64) -> f64 {
        if !s.is_finite() {
            return 1.0;
        }
        let a = self.scale;
        let y = 4.0 * a / (a + (a * a + 4.0 * a * s).sqrt());
        1.0 - y
    }

    pub fn ds_dx(&self, x: f64) -> f64 {
        2.0 * self.scale * (3.0 + x) / (1.0 - x).powi(3)
    }

    pub fn dx_ds(&self, x: f64) -> f64 {
        (1.0 - x).powi(3) / (2.0 * self.scale * (3.0 + x))
    }
}
