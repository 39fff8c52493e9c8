//! WKB coefficients A_n: exact polynomials for the Bessel application,
//! and a Chebyshev collocation backend on semi-infinite rays for general
//! potentials (direct recursion, and the exponential form with E_n, F_n).

use crate::error::{Result, WkbError};
use crate::numerics::bigfixed::BigFixedC;
use crate::numerics::cheb::{cheb_eval, tail_ratio, ChebGrid, SemiInfiniteMap};
use crate::poly::{bessel_table_fixed, bessel_table_q, eval_fixed_big, eval_fixed_c, rational_from_f64, PolyC, PolyQ, VarTag};
use crate::numerics::series;
use crate::transform::{local_coeffs, local_series, trace_ray_mapped, LocalSeries, PotentialTriple, RayPath, XiPoint};
use rayon::prelude::*;
use crate::types::Sign;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;
use std::sync::Arc;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Fractional bits of the fixed-point Bessel tables.
pub const TABLE_BITS: u32 = 320;

/// Largest order for which exact rational polynomials are attached.
pub const EXACT_ORDER_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    BesselPoly,
    Oscillator,
    Collocation,
}

/// Discretisation parameters of a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayOptions {
    /// Initial number of Chebyshev intervals.
    pub n: usize,
    pub n_max: usize,
    /// Scale of the map from [-1, 1) to [0, inf); chosen from the anchor when absent.
    pub scale: Option<f64>,
    /// Required relative size of the trailing coefficients of phi, psi.
    pub tail_tol: f64,
    /// Order of the local expansions kept at every node; bounds the number
    /// of coefficients that can be generated.
    pub order: usize,
}

impl Default for RayOptions {
    fn default() -> Self {
        RayOptions { n: 128, n_max: 1024, scale: None, tail_tol: 1e-12, order: 16 }
    }
}

/// A local expansion in powers of `s - s_j` at every node.
pub type NodeSeries = Vec<Vec<C64>>;

/// A ray together with phi, psi and their local expansions on its
/// Chebyshev nodes.
///
/// Node `j` sits at `x_j` (ascending); `x_0 = -1` is the anchor and
/// `x_n = 1` the point at infinity, where every function is taken as 0.
/// Derivatives along the ray are carried exactly by the local expansions;
/// the Chebyshev representation is only used for the tail integrals.
#[derive(Debug, Clone)]
pub struct RayContext {
    pub sign: Sign,
    pub path: Arc<RayPath>,
    pub grid: ChebGrid,
    pub map: SemiInfiniteMap,
    pub s: Vec<f64>,
    pub ds_dx: Vec<f64>,
    pub phi: Vec<C64>,
    pub phi_xi: Vec<C64>,
    pub psi: Vec<C64>,
    pub phi_vanishes: bool,
    pub order: usize,
    /// phi in powers of `s - s_j`.
    pub phi_ser: NodeSeries,
    /// `1/4 phi^2 -+ 1/2 phi' - psi` in powers of `s - s_j`.
    pub q_ser: NodeSeries,
    /// `-1/4 phi' -+ 1/8 phi^2 +- 1/2 psi` in powers of `s - s_j`.
    pub f1_ser: NodeSeries,
}

fn to_s_variable(a: &[C64], dir: f64) -> Vec<C64> {
    let mut f = 1.0;
    a.iter()
        .map(|c| {
            let v = c * f;
            f *= dir;
            v
        })
        .collect()
}

impl RayContext {
    pub fn new(pot: &PotentialTriple, anchor: &XiPoint, sign: Sign, opts: RayOptions) -> Result<Self> {
        let scale = opts.scale.unwrap_or_else(|| (0.5 * anchor.xi.norm()).max(0.25));
        let map = SemiInfiniteMap { scale };
        let mut n = opts.n;
        loop {
            let ctx = Self::build(pot, anchor, sign, n, map, opts.order)?;
            let worst = [&ctx.phi, &ctx.phi_xi, &ctx.psi]
                .iter()
                .map(|f| tail_ratio(&ctx.grid.coeffs(f)))
                .fold(0.0, f64::max);
            if worst < opts.tail_tol || 2 * n > opts.n_max {
                return Ok(ctx);
            }
            n *= 2;
        }
    }

    fn build(pot: &PotentialTriple, anchor: &XiPoint, sign: Sign, n: usize, map: SemiInfiniteMap, order: usize) -> Result<Self> {
        let grid = ChebGrid::new(n);
        let path = trace_ray_mapped(pot, anchor, sign, &grid.x, map)?;
        let sg = sign.sg();
        let dir = sign.ray_dir();
        let m = order + 1;
        let zeros = vec![ZERO; m];
        let mut phi_ser = vec![zeros.clone(); n + 1];
        let mut q_ser = vec![zeros.clone(); n + 1];
        let mut f1_ser = vec![zeros; n + 1];
        let series: Vec<Result<LocalSeries>> = path
            .samples
            .par_iter()
            .map(|pt| local_series(pot, pt.z, pt.sqrt_f0, order + 1))
            .collect();
        for (j, ls) in series.into_iter().enumerate() {
            let ls = ls?;
            let phi = &ls.phi[..=order + 1];
            let dphi = series::deriv(phi);
            let phi2 = series::mul(phi, phi);
            let q: Vec<C64> = (0..m).map(|k| phi2[k] * 0.25 - dphi[k] * (0.5 * sg) - ls.psi[k]).collect();
            let f1: Vec<C64> = (0..m).map(|k| -dphi[k] * 0.25 - phi2[k] * (sg / 8.0) + ls.psi[k] * (0.5 * sg)).collect();
            phi_ser[j] = to_s_variable(&phi[..m], dir);
            q_ser[j] = to_s_variable(&q, dir);
            f1_ser[j] = to_s_variable(&f1, dir);
        }
        let phi: Vec<C64> = phi_ser.iter().map(|v| v[0]).collect();
        let phi_xi: Vec<C64> = phi_ser.iter().map(|v| v[1] * dir).collect();
        let mut psi = vec![ZERO; n + 1];
        for (j, pt) in path.samples.iter().enumerate() {
            psi[j] = local_coeffs(pot, pt.z, pt.sqrt_f0)?.psi;
        }
        let s: Vec<f64> = grid.x.iter().map(|&x| map.s_of_x(x)).collect();
        let ds_dx = grid.x.iter().map(|&x| if x < 1.0 { map.ds_dx(x) } else { f64::INFINITY }).collect();
        Ok(RayContext {
            sign,
            path: Arc::new(path),
            grid,
            map,
            s,
            ds_dx,
            phi,
            phi_xi,
            psi,
            phi_vanishes: pot.phi_vanishes,
            order,
            phi_ser,
            q_ser,
            f1_ser,
        })
    }

    /// Number of nodes, including the point at infinity.
    pub fn len(&self) -> usize {
        self.grid.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sg(&self) -> f64 {
        self.sign.sg()
    }

    /// xi at node `j` (infinite at the last node).
    pub fn xi(&self, j: usize) -> C64 {
        self.path.xi_at(self.s[j])
    }

    /// `T[g](s) = int_s^inf g ds'` from node values.
    pub fn tail(&self, g: &[C64]) -> Vec<C64> {
        let h: Vec<C64> = g
            .iter()
            .zip(&self.ds_dx)
            .map(|(v, &w)| if w.is_finite() { v * w } else { ZERO })
            .collect();
        self.grid.tail_integral(&h)
    }

    /// Local expansions of `T[g]`: the tail integral, then `-g` integrated.
    fn tail_series(&self, g: &NodeSeries) -> NodeSeries {
        let vals: Vec<C64> = g.iter().map(|v| v[0]).collect();
        let t = self.tail(&vals);
        g.iter()
            .zip(t)
            .map(|(gj, tj)| {
                let mut out = vec![ZERO; gj.len()];
                out[0] = tj;
                for k in 1..gj.len() {
                    out[k] = -gj[k - 1] / k as f64;
                }
                out
            })
            .collect()
    }

    /// One step `((n-1) omega - phi/2) f -+ f'/2 -+ 1/2 int (...) f` with
    /// `shift = (n-1) omega`; the expansions lose one order.
    pub fn arec_step(&self, f: &NodeSeries, shift: C64) -> NodeSeries {
        let m = f[0].len() - 1;
        let qf: NodeSeries = f.iter().zip(&self.q_ser).map(|(a, q)| series::mul(&a[..m], &q[..m])).collect();
        let t = self.tail_series(&qf);
        let mut out: NodeSeries = (0..self.len())
            .map(|j| {
                let a = &f[j];
                let pa = series::mul(&self.phi_ser[j][..m], &a[..m]);
                let da = series::deriv(a);
                (0..m).map(|k| shift * a[k] - pa[k] * 0.5 + da[k] * 0.5 - t[j][k] * 0.5).collect()
            })
            .collect();
        out[self.grid.n] = vec![ZERO; m];
        out
    }

    /// The constant 1 as node expansions of full order.
    pub fn one(&self) -> NodeSeries {
        let mut one = vec![ZERO; self.order + 1];
        one[0] = C64::new(1.0, 0.0);
        vec![one; self.len()]
    }

    pub fn function(&self, ser: &NodeSeries) -> RayFunction {
        let values: Vec<C64> = ser.iter().map(|v| v[0]).collect();
        let dir = self.sign.ray_dir();
        let deriv_xi = ser.iter().map(|v| v.get(1).map_or(ZERO, |d| d * dir)).collect();
        let cheb = self.grid.coeffs(&values);
        RayFunction { path: self.path.clone(), map: self.map, values, deriv_xi, cheb }
    }
}

/// A function on a ray, stored by its node values and Chebyshev coefficients.
#[derive(Debug, Clone)]
pub struct RayFunction {
    pub path: Arc<RayPath>,
    pub map: SemiInfiniteMap,
    /// Values on all nodes, the last being the limit at infinity.
    pub values: Vec<C64>,
    /// d/dxi on all nodes.
    pub deriv_xi: Vec<C64>,
    pub cheb: Vec<C64>,
}

impl RayFunction {
    /// Value at arclength `s` from the anchor.
    pub fn eval_s(&self, s: f64) -> C64 {
        cheb_eval(&self.cheb, self.map.x_of_s(s))
    }

    /// |f(last finite sample)| / max |f|.
    pub fn far_end_ratio(&self) -> f64 {
        let m = self.values.len();
        let max = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        self.values[m - 2].norm() / max
    }

    /// Largest mismatch between the Chebyshev interpolant and the stored values.
    pub fn interpolation_error(&self) -> f64 {
        let n = self.values.len() - 1;
        let x = ChebGrid::new(n).x;
        self.values
            .iter()
            .zip(&x)
            .map(|(v, &xj)| (cheb_eval(&self.cheb, xj) - v).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub enum CoeffEntry {
    Poly(PolyC),
    Ray(RayFunction),
}

/// A_0..A_N in one representation.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    pub sign: Sign,
    pub backend: Backend,
    pub params: BTreeMap<String, String>,
    pub entries: Vec<CoeffEntry>,
    /// Fixed-point coefficients in p, used for evaluation of the Bessel tables.
    fixed: Option<Arc<Vec<Vec<BigFixedC>>>>,
}

fn check_far_end(f: &RayFunction, n: usize) -> Result<()> {
    let r = f.far_end_ratio();
    if r > 1e-6 {
        return Err(WkbError::Truncation(format!("coefficient {n} keeps {r:.3e} of its size at the far end")));
    }
    Ok(())
}

impl CoeffTable {
    /// Number of stored orders (N + 1).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A_n at `at`: the value of p for polynomial tables, the arclength `s`
    /// (real part) for ray tables.
    pub fn value(&self, n: usize, at: C64) -> C64 {
        if let Some(f) = &self.fixed {
            return eval_fixed_c(&f[n], at, TABLE_BITS);
        }
        match &self.entries[n] {
            CoeffEntry::Poly(p) => p.eval(at),
            CoeffEntry::Ray(_) if n == 0 => C64::new(1.0, 0.0),
            CoeffEntry::Ray(r) => r.eval_s(at.re),
        }
    }

    /// A_n(at) / k!, without overflow for large tables.
    pub fn value_over_factorial(&self, n: usize, at: C64, k: usize) -> C64 {
        let lf = crate::numerics::gamma::ln_factorial(k);
        if let Some(f) = &self.fixed {
            let (m, e) = eval_fixed_big(&f[n], &BigFixedC::from_c64(at, TABLE_BITS)).to_c64_exp();
            return m * (e as f64 * std::f64::consts::LN_2 - lf).exp();
        }
        self.value(n, at) * (-lf).exp()
    }

    /// Fixed-point coefficients of A_n in p, for polynomial tables.
    pub fn fixed_coeffs(&self, n: usize) -> Option<&[BigFixedC]> {
        self.fixed.as_ref().map(|f| f[n].as_slice())
    }

    /// A_0..A_{n_max} at `at`.
    pub fn values(&self, n_max: usize, at: C64) -> Vec<C64> {
        (0..=n_max).map(|n| self.value(n, at)).collect()
    }

    /// d A_n / d xi at `at` (see [`CoeffTable::value`]).
    pub fn xi_derivative(&self, n: usize, at: C64) -> C64 {
        match &self.entries[n] {
            CoeffEntry::Poly(_) => {
                let d = self.poly_derivative_coeffs(n);
                let dp_dxi = -at * at * (C64::new(1.0, 0.0) - at * at);
                eval_fixed_c(&d, at, TABLE_BITS) * dp_dxi
            }
            CoeffEntry::Ray(r) => {
                let grid = ChebGrid::new(r.values.len() - 1);
                cheb_eval(&grid.coeffs(&r.deriv_xi), r.map.x_of_s(at.re))
            }
        }
    }

    fn poly_derivative_coeffs(&self, n: usize) -> Vec<BigFixedC> {
        let coeffs: Vec<BigFixedC> = match &self.fixed {
            Some(f) => f[n].clone(),
            None => match &self.entries[n] {
                CoeffEntry::Poly(p) => p.coeffs.iter().map(|c| BigFixedC::from_c64(*c, TABLE_BITS)).collect(),
                CoeffEntry::Ray(_) => unreachable!(),
            },
        };
        coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale_i64(k as i64)).collect()
    }

    /// Largest order stored.
    pub fn order(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pair = |c: &C64| json!([format!("{:.17e}", c.re), format!("{:.17e}", c.im)]);
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| match e {
                CoeffEntry::Poly(p) => {
                    let mut v = json!({
                        "kind": "poly",
                        "var": p.var,
                        "coeffs": p.coeffs.iter().map(pair).collect::<Vec<_>>(),
                    });
                    if let Some(ex) = &p.exact {
                        v["exact"] = json!(ex.iter().map(|q| q.to_string()).collect::<Vec<_>>());
                    }
                    v
                }
                CoeffEntry::Ray(r) => json!({
                    "kind": "ray",
                    "xs": r.path.s.iter().map(|s| format!("{s:.17e}")).collect::<Vec<_>>(),
                    "values": r.values[..r.values.len() - 1].iter().map(pair).collect::<Vec<_>>(),
                }),
            })
            .collect();
        json!({
            "sign": self.sign,
            "backend": self.backend,
            "params": self.params,
            "entries": entries,
        })
    }
}

/// Exact rational form of a real kappa, when it is a simple fraction.
pub fn rational_kappa(kappa: C64) -> Option<num_rational::BigRational> {
    if kappa.im != 0.0 {
        return None;
    }
    rational_from_f64(kappa.re, 1000)
}

/// A_n in the variable p for the Bessel application; the minus branch is
/// the reflection p -> -p of the plus branch.
pub fn bessel_coeff_p(n: usize, kappa: C64, sign: Sign) -> PolyC {
    match rational_kappa(kappa) {
        Some(k) => {
            let a = bessel_table_q(&k, n).pop().unwrap_or_else(PolyQ::one);
            let a = if sign == Sign::Minus { a.reflect() } else { a };
            PolyC::from_exact(&a, VarTag::P)
        }
        None => {
            let t = bessel_table_fixed(kappa, n, TABLE_BITS);
            let sg: f64 = if sign == Sign::Minus { -1.0 } else { 1.0 };
            let coeffs = t[n]
                .iter()
                .enumerate()
                .map(|(k, c)| c.to_c64() * sg.powi(k as i32))
                .collect();
            PolyC::from_complex(coeffs, VarTag::P)
        }
    }
}

/// The Bessel table A_0..A_{n_max}: exact polynomials up to
/// [`EXACT_ORDER_LIMIT`] for rational kappa, fixed-point beyond.
pub fn bessel_table(kappa: C64, sign: Sign, n_max: usize) -> CoeffTable {
    let mut fixed = bessel_table_fixed(kappa, n_max, TABLE_BITS);
    if sign == Sign::Minus {
        for poly in fixed.iter_mut() {
            for (k, c) in poly.iter_mut().enumerate() {
                if k % 2 == 1 {
                    *c = c.scale_i64(-1);
                }
            }
        }
    }
    let exact = rational_kappa(kappa).map(|k| bessel_table_q(&k, n_max.min(EXACT_ORDER_LIMIT)));
    let entries = fixed
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let e = exact.as_ref().and_then(|t| t.get(n));
            match e {
                Some(q) => {
                    let q = if sign == Sign::Minus { q.reflect() } else { q.clone() };
                    CoeffEntry::Poly(PolyC::from_exact(&q, VarTag::P))
                }
                None => CoeffEntry::Poly(PolyC::from_complex(c.iter().map(|v| v.to_c64()).collect(), VarTag::P)),
            }
        })
        .collect();
    let mut params = BTreeMap::new();
    params.insert("kappa".into(), format!("{kappa}"));
    CoeffTable { sign, backend: Backend::BesselPoly, params, entries, fixed: Some(Arc::new(fixed)) }
}

fn ray_table(ctx: &RayContext, backend: Backend, params: BTreeMap<String, String>, seq: &[NodeSeries]) -> Result<CoeffTable> {
    let mut entries = Vec::with_capacity(seq.len());
    for (n, v) in seq.iter().enumerate() {
        let f = ctx.function(v);
        if n > 0 {
            check_far_end(&f, n)?;
        }
        entries.push(CoeffEntry::Ray(f));
    }
    Ok(CoeffTable { sign: ctx.sign, backend, params, entries, fixed: None })
}

fn check_order(ctx: &RayContext, n_max: usize) -> Result<()> {
    if n_max + 1 > ctx.order {
        return Err(WkbError::Invalid(format!("order {n_max} needs expansions of order {} (have {})", n_max + 1, ctx.order)));
    }
    Ok(())
}

/// Node expansions of A_0..A_N by the direct recursion on the ray;
/// `seed_a1` replaces the values (not the derivatives) of A_1.
pub fn arec_series(ctx: &RayContext, n_max: usize, seed_a1: Option<&[C64]>) -> Result<Vec<NodeSeries>> {
    check_order(ctx, n_max)?;
    let mut seq = vec![ctx.one()];
    for n in 0..n_max {
        let mut next = ctx.arec_step(&seq[n], ZERO);
        if let (Some(a1), 0) = (seed_a1, n) {
            for (ser, v) in next.iter_mut().zip(a1) {
                ser[0] = *v;
            }
        }
        seq.push(next);
    }
    Ok(seq)
}

/// Node values of A_0..A_N by the direct recursion.
pub fn arec_values(ctx: &RayContext, n_max: usize) -> Result<Vec<Vec<C64>>> {
    Ok(arec_series(ctx, n_max, None)?.iter().map(|a| a.iter().map(|v| v[0]).collect()).collect())
}

/// A_0..A_N by collocation of the direct recursion.
pub fn coeffs_collocation(ctx: &RayContext, n_max: usize) -> Result<CoeffTable> {
    ray_table(ctx, Backend::Collocation, BTreeMap::new(), &arec_series(ctx, n_max, None)?)
}

/// Node expansions of E_1..E_N and F_1..F_N of the exponential form
/// `exp(sum E_n u^{-n})`.
pub fn appendix_a_series(ctx: &RayContext, n_max: usize) -> Result<(Vec<NodeSeries>, Vec<NodeSeries>)> {
    check_order(ctx, n_max)?;
    let sg = ctx.sg();
    let mut f: Vec<NodeSeries> = Vec::with_capacity(n_max);
    if n_max == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    f.push(ctx.f1_ser.clone());
    for n in 1..n_max {
        let m = f[n - 1][0].len() - 1;
        let mut next: NodeSeries = (0..ctx.len())
            .map(|j| {
                let a = &f[n - 1][j];
                let pa = series::mul(&ctx.phi_ser[j][..m], &a[..m]);
                let da = series::deriv(a);
                (0..m).map(|k| -pa[k] * 0.5 + da[k] * 0.5).collect::<Vec<C64>>()
            })
            .collect();
        for k in 1..n {
            for (j, slot) in next.iter_mut().enumerate() {
                let prod = series::mul(&f[k - 1][j][..m], &f[n - k - 1][j][..m]);
                for (v, p) in slot.iter_mut().zip(prod) {
                    *v -= p * (0.5 * sg);
                }
            }
        }
        let last = ctx.grid.n;
        next[last] = vec![ZERO; m];
        f.push(next);
    }
    let e = f
        .iter()
        .map(|fi| {
            ctx.tail_series(fi)
                .into_iter()
                .map(|v| v.into_iter().map(|c| c * sg).collect())
                .collect()
        })
        .collect();
    Ok((e, f))
}

/// E and F tables (entries 1..N; entry 0 is zero).
pub fn coeffs_appendix_a(ctx: &RayContext, n_max: usize) -> Result<(CoeffTable, CoeffTable)> {
    let (e, f) = appendix_a_series(ctx, n_max)?;
    let zero = vec![vec![ZERO; 2]; ctx.len()];
    let mut es = vec![zero.clone()];
    es.extend(e);
    let mut fs = vec![zero];
    fs.extend(f);
    let mut pe = BTreeMap::new();
    pe.insert("quantity".into(), "E".into());
    let mut pf = BTreeMap::new();
    pf.insert("quantity".into(), "F".into());
    Ok((
        ray_table(ctx, Backend::Collocation, pe, &es)?,
        ray_table(ctx, Backend::Collocation, pf, &fs)?,
    ))
}

/// A_1..A_N from E_1..E_N: `A_n = E_n + (1/n) sum_{k=1}^{n-1} k E_k A_{n-k}`.
pub fn exp_to_series(e: &[C64], n_max: usize) -> Vec<C64> {
    let mut a: Vec<C64> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut v = e.get(n - 1).copied().unwrap_or(ZERO);
        let mut acc = ZERO;
        for k in 1..n {
            acc += e.get(k - 1).copied().unwrap_or(ZERO) * a[n - k - 1] * k as f64;
        }
        v += acc / n as f64;
        a.push(v);
    }
    a
}

/// Node values of A_0..A_N from the exponential form.
pub fn appendix_a_values(ctx: &RayContext, n_max: usize) -> Result<Vec<Vec<C64>>> {
    let (e, _) = appendix_a_series(ctx, n_max)?;
    let m = ctx.len();
    let mut out = vec![vec![C64::new(1.0, 0.0); m]];
    out.extend((0..n_max).map(|_| vec![ZERO; m]));
    for j in 0..m {
        let ej: Vec<C64> = e.iter().map(|v| v[j][0]).collect();
        for (n, a) in exp_to_series(&ej, n_max).into_iter().enumerate() {
            out[n + 1][j] = a;
        }
    }
    Ok(out)
}

/// Closed form of A_1 for the rotating oscillator.
pub fn oscillator_a1(lambda: C64, ell: u32, z: C64, sign: Sign) -> Result<C64> {
    if z.norm() < 1e-14 || (z - 1.0).norm() < 1e-14 {
        return Err(WkbError::Domain(format!("oscillator coefficient at z = {z}")));
    }
    if z.im == 0.0 && z.re <= 1.0 && z.re >= 0.0 {
        return Err(WkbError::Domain(format!("z = {z} lies on the logarithm's cut")));
    }
    let sg = sign.sg();
    let m = lambda + 0.5;
    let l = (ell * (ell + 1)) as f64;
    let zm1 = z - 1.0;
    let first = (m * sg + 0.375 + m * m * 0.5) / (zm1 * zm1);
    let second = (C64::new(1.0, 0.0) - z.inv()).ln() + z.inv();
    Ok(first * sg + second * (l * sg))
}

/// Oscillator table: A_1 values from the closed form, the rest by collocation.
pub fn oscillator_table(ctx: &RayContext, lambda: C64, ell: u32, n_max: usize) -> Result<CoeffTable> {
    let mut a1 = vec![ZERO; ctx.len()];
    for (j, pt) in ctx.path.samples.iter().enumerate() {
        a1[j] = oscillator_a1(lambda, ell, pt.z, ctx.sign)?;
    }
    let seq = arec_series(ctx, n_max, Some(&a1))?;
    let mut params = BTreeMap::new();
    params.insert("lambda".into(), format!("{lambda}"));
    params.insert("ell".into(), ell.to_string());
    ray_table(ctx, Backend::Oscillator, params, &seq)
}

/// Node values of B_1..B_N by the recursion with the extra `(n-1) omega`
/// term, seeded by A_1.
pub fn b_recursive_ray(ctx: &RayContext, omega: f64, n_max: usize) -> Result<Vec<Vec<C64>>> {
    check_order(ctx, n_max)?;
    let mut cur = ctx.arec_step(&ctx.one(), ZERO);
    let mut out = vec![cur.iter().map(|v| v[0]).collect::<Vec<C64>>()];
    for n in 1..n_max {
        let shift = C64::new((n as f64 - 1.0) * omega, 0.0);
        cur = ctx.arec_step(&cur, shift);
        out.push(cur.iter().map(|v| v[0]).collect());
    }
    Ok(out)
}
