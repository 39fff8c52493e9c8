//! Borel summation of the WKB corrections: the Borel series at a point,
//! Padé continuation, the truncated Laplace integral, and the fixed-point
//! iteration of the integral equation for the Borel transform.

use crate::bounds::v_profile;
use crate::coeffs::{CoeffTable, RayContext};
use crate::error::{Result, WkbError};
use crate::numerics::cheb::{cheb_eval, ChebGrid};
use crate::numerics::quad;
use crate::numerics::roots::{horner, poly_roots};
use crate::types::Sign;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::json;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Taylor coefficients `c_n = A_{n+1}(xi) / n!` of the Borel transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorelSeries {
    pub coeffs: Vec<C64>,
    pub xi: C64,
    pub sign: Sign,
    /// `|c_{N-2} / c_{N-1}|`, infinite for a series that ends in zeros.
    pub radius_estimate: f64,
}

impl BorelSeries {
    pub fn new(coeffs: Vec<C64>, xi: C64, sign: Sign) -> Self {
        let n = coeffs.len();
        let radius_estimate = if n >= 2 && coeffs[n - 1].norm() > 0.0 {
            coeffs[n - 2].norm() / coeffs[n - 1].norm()
        } else {
            f64::INFINITY
        };
        BorelSeries { coeffs, xi, sign, radius_estimate }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Partial sum at `t`.
    pub fn eval(&self, t: C64) -> C64 {
        horner(&self.coeffs, t)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }
}

/// The Borel series at `at` (p for polynomial tables, arclength for ray
/// tables) with `n` terms; `xi` is recorded with it.
pub fn borel_series(table: &CoeffTable, at: C64, xi: C64, n: usize) -> Result<BorelSeries> {
    if table.len() < n + 1 {
        return Err(WkbError::Invalid(format!("table holds {} orders, {} needed", table.order(), n)));
    }
    let coeffs: Vec<C64> = (0..n).map(|k| table.value_over_factorial(k + 1, at, k)).collect();
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(WkbError::Domain(format!("coefficients are not finite at {at}")));
    }
    Ok(BorelSeries::new(coeffs, xi, table.sign))
}

/// `P(t/scale) / Q(t/scale)` with `Q(0) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PadeApproximant {
    pub l: usize,
    pub m: usize,
    pub num: Vec<C64>,
    pub den: Vec<C64>,
    pub scale: f64,
}

impl PadeApproximant {
    pub fn eval(&self, t: C64) -> C64 {
        let x = t / self.scale;
        horner(&self.num, x) / horner(&self.den, x)
    }

    /// Zeros of the denominator in the t-plane.
    pub fn poles(&self) -> Vec<C64> {
        poly_roots(&self.den).into_iter().map(|r| r * self.scale).collect()
    }

    /// Numerator and denominator coefficients in powers of t.
    pub fn unscaled(&self) -> (Vec<C64>, Vec<C64>) {
        let f = |c: &[C64]| -> Vec<C64> { c.iter().enumerate().map(|(k, v)| v / self.scale.powi(k as i32)).collect() };
        (f(&self.num), f(&self.den))
    }
}

/// Relative singular-value threshold below which the Padé system counts as singular.
pub const PADE_RANK_TOL: f64 = 1e-13;

/// The [L/M] Padé approximant of the series.
pub fn pade(series: &BorelSeries, l: usize, m: usize) -> Result<PadeApproximant> {
    let n = series.len();
    if l + m + 1 > n {
        return Err(WkbError::Invalid(format!("[{l}/{m}] needs {} coefficients, have {n}", l + m + 1)));
    }
    let scale = if series.radius_estimate.is_finite() && series.radius_estimate > 0.0 {
        series.radius_estimate.clamp(1e-6, 1e6)
    } else {
        1.0
    };
    let c: Vec<C64> = series.coeffs.iter().enumerate().map(|(k, v)| v * scale.powi(k as i32)).collect();
    let mut den = vec![ZERO; m + 1];
    den[0] = C64::new(1.0, 0.0);
    if series.is_zero() {
        return Ok(PadeApproximant { l, m, num: vec![ZERO; l + 1], den, scale });
    }
    let at = |k: isize| if k < 0 { ZERO } else { c[k as usize] };
    if m > 0 {
        let a = DMatrix::from_fn(m, m, |i, j| at(l as isize + i as isize - j as isize));
        let b = DVector::from_fn(m, |i, _| -c[l + i + 1]);
        let sv = a.clone().singular_values();
        let smax = sv.max();
        let smin = sv.min();
        if !(smax > 0.0) || smin / smax < PADE_RANK_TOL {
            return Err(WkbError::DegeneratePade { l, m });
        }
        let q = a.lu().solve(&b).ok_or(WkbError::DegeneratePade { l, m })?;
        for j in 0..m {
            den[j + 1] = q[j];
        }
    }
    let num = (0..=l)
        .map(|k| (0..=k.min(m)).map(|j| den[j] * c[k - j]).sum())
        .collect();
    Ok(PadeApproximant { l, m, num, den, scale })
}

/// Upper end of the Laplace integral: `max(4d, (38 + ln(1 + bound_scale)) / Re u)`.
pub fn truncation_point(d: f64, bound_scale: f64, u: C64) -> f64 {
    (4.0 * d).max((38.0 + (1.0 + bound_scale.abs()).ln()) / u.re)
}

/// Distance below which a denominator zero counts as lying on the contour.
pub const POLE_CLEARANCE: f64 = 1e-3;

/// `int_0^T e^{-u t} R(t) dt` and its quadrature error estimate.
pub fn laplace_eval(pade: &PadeApproximant, u: C64, t_max: f64) -> Result<(C64, f64)> {
    if !(u.re > 0.0) {
        return Err(WkbError::ParameterOrder(format!("Laplace integral needs Re u > 0 (u = {u})")));
    }
    for r in pade.poles() {
        let t = r.re.clamp(0.0, t_max);
        if (r - t).norm() < POLE_CLEARANCE {
            return Err(WkbError::PoleOnContour(format!("{r}")));
        }
    }
    let q = quad::adaptive(|t| (-u * t).exp() * pade.eval(C64::new(t, 0.0)), 0.0, t_max, 1e-15, 1e-14);
    Ok((q.value, q.err))
}

/// Configuration of a Borel–Padé–Laplace summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumOptions {
    /// Padé degrees; the diagonal `floor((N-1)/2)` when absent.
    pub l: Option<usize>,
    pub m: Option<usize>,
    /// Domain constant d, used for the truncation point.
    pub d: f64,
    /// Size of the Borel transform on the contour, used for the truncation point.
    pub bound_scale: f64,
    /// Step down to smaller diagonal degrees when a Padé system is singular
    /// or its denominator vanishes near the contour.
    pub auto_fallback: bool,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions { l: None, m: None, d: 0.5, bound_scale: 1.0, auto_fallback: true }
    }
}

/// An evaluated Borel–Padé–Laplace sum of the correction at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorelSummation {
    pub series: BorelSeries,
    pub u: C64,
    pub pade_l: usize,
    pub pade_m: usize,
    /// Degrees first requested, before any fallback.
    pub requested: (usize, usize),
    pub t_max: f64,
    pub quad_err: f64,
    pub value: C64,
    /// The [L-1/M-1] value the estimate compares against, when available.
    pub previous: Option<C64>,
    pub err_estimate: f64,
}

impl BorelSummation {
    pub fn compute(series: &BorelSeries, u: C64, opts: &SumOptions) -> Result<Self> {
        let n = series.len();
        if n == 0 {
            return Err(WkbError::Invalid("empty Borel series".into()));
        }
        let diag = (n - 1) / 2;
        let l = opts.l.unwrap_or(diag);
        let m = opts.m.unwrap_or(diag);
        let t_max = truncation_point(opts.d, opts.bound_scale, u);
        let attempt = |l: usize, m: usize| -> Result<(C64, f64)> { laplace_eval(&pade(series, l, m)?, u, t_max) };

        let mut first: Option<(usize, usize, C64, f64)> = None;
        let mut k = 0;
        while k <= l.min(m) {
            match attempt(l - k, m - k) {
                Ok((v, e)) => {
                    first = Some((l - k, m - k, v, e));
                    break;
                }
                Err(err @ (WkbError::DegeneratePade { .. } | WkbError::PoleOnContour(_))) => {
                    if !opts.auto_fallback {
                        return Err(err);
                    }
                }
                Err(err) => return Err(err),
            }
            k += 1;
        }
        let (pl, pm, value, quad_err) = first.ok_or(WkbError::DegeneratePade { l, m })?;
        let mut previous = None;
        let mut j = 1;
        while j <= pl.min(pm) {
            if let Ok((v, _)) = attempt(pl - j, pm - j) {
                previous = Some(v);
                break;
            }
            j += 1;
        }
        let diff = previous.map_or(0.0, |p| (value - p).norm());
        Ok(BorelSummation {
            series: series.clone(),
            u,
            pade_l: pl,
            pade_m: pm,
            requested: (l, m),
            t_max,
            quad_err,
            value,
            previous,
            err_estimate: diff.max(quad_err),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let num = |x: f64| format!("{x:.17e}");
        json!({
            "sign": self.series.sign,
            "xi": [num(self.series.xi.re), num(self.series.xi.im)],
            "u": [num(self.u.re), num(self.u.im)],
            "n_terms": self.series.len(),
            "pade_l": self.pade_l,
            "pade_m": self.pade_m,
            "requested_l": self.requested.0,
            "requested_m": self.requested.1,
            "t_max": num(self.t_max),
            "radius_estimate": num(self.series.radius_estimate),
            "value": [num(self.value.re), num(self.value.im)],
            "err_estimate": num(self.err_estimate),
            "quad_err": num(self.quad_err),
        })
    }
}

/// Grid and norm parameters of the fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionGrid {
    /// Uniform points in x on `[0, x_max]`.
    pub nx: usize,
    /// Chebyshev nodes along the ray, including the point at infinity.
    pub ns: usize,
    pub x_max: f64,
    /// Exponent of the weighted norm.
    pub sigma: f64,
    pub rho: f64,
}

impl Default for ContractionGrid {
    fn default() -> Self {
        ContractionGrid { nx: 48, ns: 48, x_max: 2.0, sigma: 1.0, rho: 1.0 }
    }
}

/// Outcome of the fixed-point iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    /// Weighted sup norms of successive differences.
    pub deltas: Vec<f64>,
    /// `deltas[k+1] / deltas[k]` while both are above the rounding floor.
    pub ratios: Vec<f64>,
    /// Largest ratio from the second one on.
    pub max_ratio: f64,
    pub x: Vec<f64>,
    pub s: Vec<f64>,
    /// Final iterate, `values[i][j]` at `(x[i], s[j])`.
    pub values: Vec<Vec<C64>>,
    /// `(t, iterate at the anchor, Taylor sum)` for the first few x.
    pub taylor_check: Vec<(f64, C64, C64)>,
}

/// Relative size of successive differences treated as rounding noise.
pub const NOISE_FLOOR: f64 = 1e-10;

/// Iterate `F <- G(xi + x/2) + L F` on the ray of `ctx` (minus branch);
/// `seed(s)` is G at arclength `s` and `series`, when given, the Borel
/// series at the anchor for comparison at small t.
pub fn contraction_check(
    ctx: &RayContext,
    grid: &ContractionGrid,
    iterations: usize,
    seed: &dyn Fn(f64) -> C64,
    series: Option<&BorelSeries>,
) -> Result<ContractionReport> {
    if ctx.sign != Sign::Minus {
        return Err(WkbError::Invalid("the integral equation is set up on the minus branch".into()));
    }
    if grid.nx < 2 || grid.ns < 3 || grid.nx > 64 || grid.ns > 64 || !(2..=20).contains(&iterations) {
        return Err(WkbError::Invalid("need 2 <= nx, ns <= 64 and 2 <= iterations <= 20".into()));
    }
    let map = ctx.map;
    let cgrid = ChebGrid::new(grid.ns - 1);
    let ns = grid.ns;
    let inf = ns - 1;
    let s: Vec<f64> = cgrid.x.iter().map(|&x| if x < 1.0 { map.s_of_x(x) } else { f64::INFINITY }).collect();
    let dsdx: Vec<f64> = cgrid.x.iter().map(|&x| if x < 1.0 { map.ds_dx(x) } else { 0.0 }).collect();
    let h = grid.x_max / (grid.nx - 1) as f64;
    let xs: Vec<f64> = (0..grid.nx).map(|i| i as f64 * h).collect();

    let phi_c = ctx.grid.coeffs(&ctx.phi);
    let qt: Vec<C64> = (0..ctx.len())
        .map(|j| -ctx.phi[j] * ctx.phi[j] * 0.25 - ctx.phi_xi[j] * 0.5 + ctx.psi[j])
        .collect();
    let qt_c = ctx.grid.coeffs(&qt);
    let at = |c: &[C64], sv: f64| cheb_eval(c, map.x_of_s(sv));
    let v = v_profile(ctx, grid.sigma);
    let v_c = ctx.grid.coeffs(&v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
    let norm_w: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| {
            (0..ns)
                .map(|j| {
                    if j == inf {
                        return 0.0;
                    }
                    let xi = ctx.path.xi_at(s[j]);
                    let vj = at(&v_c, s[j]).re;
                    Sign::Minus.weight(xi.re, grid.rho) * (-vj - grid.sigma * x).exp()
                })
                .collect()
        })
        .collect();
    let norm = |f: &[Vec<C64>]| -> f64 {
        f.iter()
            .zip(&norm_w)
            .flat_map(|(row, w)| row.iter().zip(w).map(|(a, b)| a.norm() * b))
            .fold(0.0, f64::max)
    };

    let g: Vec<Vec<C64>> = xs
        .iter()
        .map(|&x| (0..ns).map(|j| if j == inf { ZERO } else { seed(s[j] + 0.5 * x) }).collect())
        .collect();
    let trap = |i: usize, k: usize| if k == 0 || k == i { 0.5 * h } else { h };

    let apply = |f: &[Vec<C64>]| -> Vec<Vec<C64>> {
        // Chebyshev data of each row and of its tail integral against Q.
        let rows: Vec<(Vec<C64>, Vec<C64>)> = f
            .iter()
            .map(|row| {
                let hc = cgrid.coeffs(row);
                let integrand: Vec<C64> = (0..ns).map(|j| if j == inf { ZERO } else { at(&qt_c, s[j]) * row[j] * dsdx[j] }).collect();
                let tail = cgrid.tail_integral(&integrand);
                (hc, cgrid.coeffs(&tail))
            })
            .collect();
        (0..grid.nx)
            .map(|i| {
                (0..ns)
                    .map(|j| {
                        if j == inf || i == 0 {
                            return ZERO;
                        }
                        let mut acc = ZERO;
                        for k in 0..=i {
                            let sv = s[j] + 0.5 * (xs[i] - xs[k]);
                            let (hc, ic) = &rows[k];
                            let local = -at(&phi_c, sv) * at(hc, sv) * 0.5 + at(ic, sv) * 0.5;
                            acc += local * trap(i, k);
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    };

    let mut f = g.clone();
    let mut deltas = Vec::with_capacity(iterations);
    let mut ratios = Vec::new();
    let mut increases = 0;
    let mut floor_hit = false;
    for _ in 0..iterations {
        let lf = apply(&f);
        let next: Vec<Vec<C64>> = g.iter().zip(&lf).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        let diff: Vec<Vec<C64>> = next.iter().zip(&f).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        let delta = norm(&diff);
        let scale = norm(&next);
        f = next;
        if delta <= NOISE_FLOOR * scale {
            floor_hit = true;
        }
        if let Some(&prev) = deltas.last() {
            if !floor_hit {
                let r = delta / prev;
                ratios.push(r);
                increases = if r >= 1.0 { increases + 1 } else { 0 };
                if increases >= 3 {
                    return Err(WkbError::GridTooCoarse(format!("successive differences grew three times (last ratio {r:.3})")));
                }
            }
        }
        deltas.push(delta);
        if floor_hit {
            break;
        }
    }
    let max_ratio = ratios.iter().skip(1).copied().fold(0.0, f64::max);
    let taylor_check = match series {
        Some(b) => (1..grid.nx.min(4)).map(|i| (xs[i], f[i][0], b.eval(C64::new(xs[i], 0.0)))).collect(),
        None => Vec::new(),
    };
    Ok(ContractionReport { deltas, ratios, max_ratio, x: xs, s, values: f, taylor_check })
}
