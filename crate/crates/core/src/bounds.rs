//! Explicit constants and error bounds: certification of the decay
//! conditions, the constant chain c1, c2, c3, C_n(d), the exponent V, the
//! constant C of the Borel transform, the remainder bound of the truncated
//! expansion and the Gevrey bound on the coefficients.

use crate::coeffs::{CoeffTable, RayContext};
use crate::equation::{ConditionKind, EquationSpec};
use crate::error::{Result, WkbError};
use crate::numerics::cheb::ChebGrid;
use crate::numerics::gamma::{ln_factorial, ln_gamma};
use crate::numerics::roots::horner;
use crate::transform::{local_coeffs, PotentialTriple, RayPath, XiPoint};
use crate::types::Sign;
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// Safety factor applied to the sampled condition constant.
pub const SAFETY: f64 = 1.1;

/// phi, phi' and psi at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionSample {
    pub xi: C64,
    pub phi: C64,
    pub phi_xi: C64,
    pub psi: C64,
}

/// Samples at the given points of the z-plane.
pub fn condition_samples(pot: &PotentialTriple, points: &[XiPoint]) -> Result<Vec<ConditionSample>> {
    points
        .iter()
        .map(|pt| {
            let lc = local_coeffs(pot, pt.z, pt.sqrt_f0)?;
            Ok(ConditionSample { xi: pt.xi, phi: lc.phi, phi_xi: lc.phi_xi, psi: lc.psi })
        })
        .collect()
}

/// A fitted constant for one of the decay conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCert {
    pub which: ConditionKind,
    pub c: f64,
    pub rho: f64,
    pub d: f64,
    pub epsilon: f64,
    pub n_samples: usize,
    /// Sample attaining the sup, and the sup before the safety factor.
    pub worst_xi: C64,
    pub worst_ratio: f64,
    /// Log-log slope of the ratios over the farthest quarter of the samples.
    pub far_slope: f64,
}

fn condition_ratio(kind: ConditionKind, rho: f64, s: &ConditionSample) -> f64 {
    let a = s.xi.norm();
    let strong = 1.0 + a.powf(1.0 + rho);
    match kind {
        ConditionKind::Cond1 => (s.phi.norm() * strong).max(s.psi.norm() * strong),
        ConditionKind::Cond2 => (s.phi.norm() * (1.0 + a.powf(0.5 + rho)))
            .max(s.phi_xi.norm() * strong)
            .max(s.psi.norm() * strong),
    }
}

/// The smallest c for which the samples satisfy the condition of `eq`,
/// times [`SAFETY`].
pub fn certify_conditions(eq: &EquationSpec, samples: &[ConditionSample]) -> Result<ConditionCert> {
    if samples.is_empty() {
        return Err(WkbError::Invalid("no samples to certify".into()));
    }
    let ratios: Vec<f64> = samples.iter().map(|s| condition_ratio(eq.condition, eq.rho, s)).collect();
    if ratios.iter().any(|r| !r.is_finite()) {
        return Err(WkbError::ConditionViolated("non-finite coefficient on a sample".into()));
    }
    let (iw, &worst) = ratios
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&a, &b| samples[a].xi.norm().total_cmp(&samples[b].xi.norm()));
    let far = &order[order.len() - order.len() / 4..];
    let far_slope = log_slope(far.iter().map(|&i| (samples[i].xi.norm(), ratios[i])));
    if far.len() >= 4 && far_slope > 0.25 && far.contains(&iw) {
        return Err(WkbError::ConditionViolated(format!("ratio grows like |xi|^{far_slope:.2} at the far samples")));
    }
    Ok(ConditionCert {
        which: eq.condition,
        c: (SAFETY * worst).max(1e-12),
        rho: eq.rho,
        d: eq.d,
        epsilon: eq.epsilon,
        n_samples: samples.len(),
        worst_xi: samples[iw].xi,
        worst_ratio: worst,
        far_slope,
    })
}

fn log_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<(f64, f64)> = points.filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        0.0
    }
}

/// c1, c2, c3 and C_1(d).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsChain {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c1d: f64,
    pub d: f64,
}

pub fn constants_chain(c: f64, rho: f64, d: f64) -> ConstantsChain {
    let mc = c.max(c * c);
    let c1 = mc * (1.0 + d).powf(rho);
    let c2 = 4.0 * mc * (1.0 + rho) * (1.0 + (1.0 + d).powf(1.0 + rho)) / rho;
    let c3 = 1.0 + 1.75 * c2;
    let c1d = 1.0 + 0.5 * c1 + 1.25 * c1 * d;
    ConstantsChain { c1, c2, c3, c1d, d }
}

pub fn constants_from_cert(cert: &ConditionCert) -> ConstantsChain {
    constants_chain(cert.c, cert.rho, cert.d)
}

impl ConstantsChain {
    /// ln of the factor taking C_n to C_{n+1}.
    pub fn ln_step(&self, n: usize) -> f64 {
        let n = n as f64;
        let d = self.d;
        (1.0 + self.c2 / (2.0 * n) + (self.c1 + 2.25 * self.c2) * d / n + 1.75 * self.c1 * d * d / (n * n)).ln()
    }

    /// Exponent of n in the closed-form majorant.
    pub fn growth_exponent(&self) -> f64 {
        self.c2 / 2.0 + (self.c1 + 2.25 * self.c2) * self.d
    }

    /// ln of `C_1(d) exp(gamma a + 7 pi^2 c1 d^2 / 24) n^a`.
    pub fn ln_majorant(&self, n: usize) -> f64 {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        let a = self.growth_exponent();
        let pi2 = std::f64::consts::PI.powi(2);
        self.c1d.ln() + EULER_GAMMA * a + 7.0 * pi2 * self.c1 * self.d * self.d / 24.0 + a * (n as f64).ln()
    }
}

/// ln C_1(d) .. ln C_N(d) and the matching majorant values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CnSequence {
    pub ln_c: Vec<f64>,
    pub ln_majorant: Vec<f64>,
}

impl CnSequence {
    /// ln C_n(d), n >= 1.
    pub fn ln(&self, n: usize) -> f64 {
        self.ln_c[n - 1]
    }

    pub fn values(&self) -> Vec<f64> {
        self.ln_c.iter().map(|v| v.exp()).collect()
    }
}

pub fn c_n_sequence(chain: &ConstantsChain, n_max: usize) -> CnSequence {
    let mut ln_c = Vec::with_capacity(n_max);
    let mut cur = chain.c1d.ln();
    for n in 1..=n_max {
        ln_c.push(cur);
        cur += chain.ln_step(n);
    }
    let ln_majorant = (1..=n_max).map(|n| chain.ln_majorant(n)).collect();
    CnSequence { ln_c, ln_majorant }
}

/// ln of `c3 sum_{n>=0} C_{n+1}(d) (r/d)^n`.
pub fn ln_c_upper(chain: &ConstantsChain, r: f64) -> Result<f64> {
    let d = chain.d;
    if !(r > 0.0 && r < d) {
        return Err(WkbError::ParameterOrder(format!("need 0 < r < d (r = {r}, d = {d})")));
    }
    let q = (r / d).ln();
    let mut ln_cn = chain.c1d.ln();
    let mut acc = f64::NEG_INFINITY;
    for n in 0..10_000_000usize {
        let term = ln_cn + n as f64 * q;
        acc = log_add(acc, term);
        if n > 10 && term < acc - 40.0 && chain.ln_step(n + 1) + q < 0.0 {
            return Ok(chain.c3.ln() + acc);
        }
        ln_cn += chain.ln_step(n + 1);
    }
    Err(WkbError::TailNotNegligible("analytic bound on C did not converge".into()))
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// The integrand of V at one point, before the factor `6/sigma` (or
/// `1/sigma` when phi vanishes identically).
pub fn v_density(sign: Sign, phi_vanishes: bool, phi: C64, phi_xi: C64, psi: C64) -> f64 {
    if phi_vanishes {
        psi.norm()
    } else {
        0.25 * (phi * phi).norm() + (phi_xi * 0.5 + psi * sign.sg()).norm()
    }
}

fn v_prefactor(phi_vanishes: bool, sigma: f64) -> f64 {
    if phi_vanishes {
        1.0 / sigma
    } else {
        6.0 / sigma
    }
}

/// V(sigma, xi) at every node of the ray context.
pub fn v_profile(ctx: &RayContext, sigma: f64) -> Vec<f64> {
    let g: Vec<C64> = (0..ctx.len())
        .map(|j| C64::new(v_density(ctx.sign, ctx.phi_vanishes, ctx.phi[j], ctx.phi_xi[j], ctx.psi[j]), 0.0))
        .collect();
    let k = v_prefactor(ctx.phi_vanishes, sigma);
    ctx.tail(&g).iter().map(|v| v.re * k).collect()
}

/// V(sigma, xi) at the anchor of a ray sampled on a semi-infinite Chebyshev grid.
pub fn v_weight(eq: &EquationSpec, ray: &RayPath, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(WkbError::Invalid(format!("sigma must be positive (got {sigma})")));
    }
    let map = ray.map.ok_or_else(|| WkbError::Invalid("V needs a ray on a semi-infinite grid".into()))?;
    let grid = ChebGrid::new(ray.samples.len());
    let mut h = Vec::with_capacity(grid.n + 1);
    for (pt, &x) in ray.samples.iter().zip(&grid.x) {
        let lc = local_coeffs(&eq.pot, pt.z, pt.sqrt_f0)?;
        h.push(C64::new(v_density(ray.sign, eq.phi_vanishes(), lc.phi, lc.phi_xi, lc.psi) * map.ds_dx(x), 0.0));
    }
    h.push(C64::new(0.0, 0.0));
    let coeffs = grid.coeffs(&h);
    if crate::numerics::cheb::tail_ratio(&coeffs) > 1e-6 {
        return Err(WkbError::Truncation("V integrand is not resolved on the ray grid".into()));
    }
    Ok(grid.integral(&h).re * v_prefactor(eq.phi_vanishes(), sigma))
}

/// Borel coefficients `c_n = A_{n+1}/n!` at one point together with its weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorelPoint {
    pub xi: C64,
    pub weight: f64,
    pub coeffs: Vec<C64>,
}

/// The sampled constant C and the point attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledC {
    pub c: f64,
    pub worst_xi: C64,
    /// Largest relative size of the last retained terms over all points.
    pub tail: f64,
}

/// Number of angles sampled on the circle |t| = 2r.
pub const C_ANGLES: usize = 32;

/// Largest relative size of the last terms accepted as a negligible tail.
pub const TAIL_TOL: f64 = 1e-10;

/// `2 sup weight |sum_n c_n t^n|` over |t| = 2r and the given points.
pub fn c_sampled(points: &[BorelPoint], r: f64) -> Result<SampledC> {
    let rad = 2.0 * r;
    let mut best = SampledC { c: 0.0, worst_xi: C64::new(0.0, 0.0), tail: 0.0 };
    for p in points {
        let mags: Vec<f64> = p.coeffs.iter().enumerate().map(|(n, c)| c.norm() * rad.powi(n as i32)).collect();
        let total: f64 = mags.iter().sum();
        if total > 0.0 {
            let k = mags.len();
            let last = mags[k.saturating_sub(3)..].iter().fold(0.0f64, |a, &b| a.max(b)) / total;
            best.tail = best.tail.max(last);
            if last > TAIL_TOL {
                return Err(WkbError::TailNotNegligible(format!(
                    "terms at |t| = {rad:.3} keep {last:.2e} of the sum at xi = {}",
                    p.xi
                )));
            }
        }
        for a in 0..C_ANGLES {
            let t = C64::from_polar(rad, 2.0 * std::f64::consts::PI * a as f64 / C_ANGLES as f64);
            let v = 2.0 * p.weight * horner(&p.coeffs, t).norm();
            if v > best.c {
                best.c = v;
                best.worst_xi = p.xi;
            }
        }
    }
    Ok(best)
}

/// Inputs of the remainder bound of the truncated expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderInputs {
    pub c: f64,
    pub v: f64,
    pub weight: f64,
    pub r: f64,
    pub sigma: f64,
    pub n: usize,
    pub u: C64,
}

/// `C (2r/N + 1/(Re u - sigma)) e^V / weight * N! / (2r|u|)^N`.
pub fn remainder_bound(inp: &RemainderInputs) -> Result<f64> {
    if !(inp.u.re > inp.sigma) || !(inp.sigma > 0.0) {
        return Err(WkbError::ParameterOrder(format!("need Re u > sigma > 0 (u = {}, sigma = {})", inp.u, inp.sigma)));
    }
    if inp.n == 0 || !(inp.r > 0.0) {
        return Err(WkbError::Invalid("need N >= 1 and r > 0".into()));
    }
    if inp.c == 0.0 {
        return Ok(0.0);
    }
    let n = inp.n as f64;
    let ln = inp.c.ln() + (2.0 * inp.r / n + 1.0 / (inp.u.re - inp.sigma)).ln() + inp.v - inp.weight.ln()
        + ln_factorial(inp.n)
        - n * (2.0 * inp.r * inp.u.norm()).ln();
    Ok(ln.exp())
}

/// The sigma in (0, Re u) minimising the remainder bound when V = v1/sigma.
pub fn best_sigma(v1: f64, r: f64, n: usize, u: C64) -> f64 {
    let f = |s: f64| (2.0 * r / n as f64 + 1.0 / (u.re - s)).ln() + v1 / s;
    let (mut a, mut b) = (1e-9 * u.re, u.re * (1.0 - 1e-9));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if f(x1) < f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    0.5 * (a + b)
}

/// A point at which the coefficient bound is checked: the table argument
/// (p or arclength), the xi it corresponds to, and its weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevreyPoint {
    pub at: C64,
    pub xi: C64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GevreyReport {
    /// Largest `|d^m A_n| / bound` over all checks.
    pub max_slack: f64,
    pub worst: (usize, usize, C64),
    pub checks: usize,
}

/// Check `|d^m A_n / d xi^m| <= c3 C_n(d) 2^{-n} (n+m-1)! / (d^{n+m-1} weight)`
/// for `1 <= n <= n_max`, `m` in {0, 1}.
pub fn gevrey_bound_check(
    table: &CoeffTable,
    points: &[GevreyPoint],
    chain: &ConstantsChain,
    n_max: usize,
) -> Result<GevreyReport> {
    let cn = c_n_sequence(chain, n_max);
    let d = chain.d;
    let mut rep = GevreyReport { max_slack: 0.0, worst: (0, 0, C64::new(0.0, 0.0)), checks: 0 };
    for n in 1..=n_max.min(table.order()) {
        for m in 0..2usize {
            let nm = (n + m) as f64;
            let ln_rhs_base = chain.c3.ln() + cn.ln(n) - n as f64 * std::f64::consts::LN_2 + ln_gamma(nm) - (nm - 1.0) * d.ln();
            for pt in points {
                let lhs = if m == 0 { table.value(n, pt.at) } else { table.xi_derivative(n, pt.at) }.norm();
                let rhs = (ln_rhs_base - pt.weight.ln()).exp();
                let slack = lhs / rhs;
                rep.checks += 1;
                if slack > rep.max_slack {
                    rep.max_slack = slack;
                    rep.worst = (n, m, pt.xi);
                }
            }
        }
    }
    if rep.max_slack > 1.0 {
        let (n, m, xi) = rep.worst;
        return Err(WkbError::BoundViolated(format!("n = {n}, m = {m}, xi = {xi} (ratio {:.3})", rep.max_slack)));
    }
    Ok(rep)
}

/// `sum_j C(m,j) j! (n+m-j-1)!` and `(n+m)!/n`.
pub fn lemma3_identity(n: u32, m: u32) -> (BigInt, BigInt) {
    let fact = |k: u32| -> BigInt { (1..=k).fold(BigInt::one(), |acc, i| acc * i) };
    let binom = |m: u32, j: u32| -> BigInt { fact(m) / (fact(j) * fact(m - j)) };
    let lhs = (0..=m).map(|j| binom(m, j) * fact(j) * fact(n + m - j - 1)).sum();
    let rhs = fact(n + m) / BigInt::from(n);
    (lhs, rhs)
}

/// All quantities of a remainder bound at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub sign: Sign,
    pub xi: C64,
    pub u: C64,
    pub n: usize,
    pub sigma: f64,
    pub r: f64,
    pub d: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "C_upper")]
    pub c_upper: f64,
    pub ln_c_upper: f64,
    pub bound: f64,
    pub true_remainder: Option<f64>,
    pub weight: f64,
}

impl BoundReport {
    pub fn holds(&self) -> Option<bool> {
        self.true_remainder.map(|t| t <= self.bound)
    }
}

/// Radii tried for the remainder bound, as fractions of d.
pub const R_FRACTIONS: [f64; 5] = [0.3, 0.45, 0.6, 0.75, 0.9];

/// Everything the remainder bound needs at one point, apart from u and N.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundSetup {
    pub sign: Sign,
    pub xi: C64,
    pub d: f64,
    pub weight: f64,
    /// V at sigma = 1; V(sigma) = v1 / sigma.
    pub v1: f64,
    pub cert: ConditionCert,
    pub chain: ConstantsChain,
    /// Points sampling the domain, the evaluation point first.
    pub points: Vec<BorelPoint>,
}

impl BoundSetup {
    pub fn c_at(&self, r: f64) -> Result<SampledC> {
        if !(r > 0.0 && r < self.d) {
            return Err(WkbError::ParameterOrder(format!("need 0 < r < d (r = {r}, d = {})", self.d)));
        }
        c_sampled(&self.points, r)
    }

    /// The remainder bound for N terms at u, at the given radius or the best
    /// of [`R_FRACTIONS`].
    pub fn report(&self, u: C64, n: usize, r: Option<f64>, true_remainder: Option<f64>) -> Result<BoundReport> {
        if !(u.re > 0.0) {
            return Err(WkbError::ParameterOrder(format!("need Re u > 0 (u = {u})")));
        }
        let radii: Vec<f64> = match r {
            Some(r) => vec![r],
            None => R_FRACTIONS.iter().map(|f| f * self.d).collect(),
        };
        let mut best: Option<BoundReport> = None;
        let mut last_err = None;
        for r in radii {
            let c = match self.c_at(r) {
                Ok(c) => c.c,
                Err(e) => {
                    last_err = Some(e);
                    continue;
                }
            };
            let sigma = best_sigma(self.v1, r, n, u);
            let v = self.v1 / sigma;
            let bound = remainder_bound(&RemainderInputs { c, v, weight: self.weight, r, sigma, n, u })?;
            if best.as_ref().is_none_or(|b| bound < b.bound) {
                let ln_cu = ln_c_upper(&self.chain, r)?;
                best = Some(BoundReport {
                    sign: self.sign,
                    xi: self.xi,
                    u,
                    n,
                    sigma,
                    r,
                    d: self.d,
                    v,
                    c,
                    c_upper: ln_cu.exp(),
                    ln_c_upper: ln_cu,
                    bound,
                    true_remainder,
                    weight: self.weight,
                });
            }
        }
        best.ok_or_else(|| last_err.unwrap_or_else(|| WkbError::Invalid("no radius available".into())))
    }
}
