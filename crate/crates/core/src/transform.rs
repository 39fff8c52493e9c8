//! Liouville transformation: the map z -> xi, the coefficients phi and psi of
//! the transformed equation, and z-space pre-images of horizontal xi-rays.

use crate::error::{Result, WkbError};
use crate::numerics::cheb::SemiInfiniteMap;
use crate::numerics::quad;
use crate::numerics::rk;
use crate::numerics::series;
use crate::types::Sign;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

/// Value and first four derivatives at a point.
pub type Jet = [C64; 5];
pub type JetFn = Arc<dyn Fn(C64) -> Jet + Send + Sync>;
pub type BranchFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;
pub type DomainFn = Arc<dyn Fn(C64) -> bool + Send + Sync>;
/// Taylor coefficients of f0, f1, f2 at a point, up to the given order.
pub type TaylorFn = Arc<dyn Fn(C64, usize) -> [Vec<C64>; 3] + Send + Sync>;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// The coefficients f0, f1, f2 of `w'' = (u^2 f0 + u f1 + f2) w`.
#[derive(Clone)]
pub struct PotentialTriple {
    pub name: String,
    pub f0: JetFn,
    pub f1: JetFn,
    pub f2: JetFn,
    pub z0: C64,
    /// Selects the branch of f0^{1/2} at the end point of a xi integral.
    pub sqrt_f0_ref: Option<BranchFn>,
    pub in_domain: DomainFn,
    pub cuts: String,
    pub f0_floor: f64,
    /// Set when f1 vanishes identically, so phi == 0.
    pub phi_vanishes: bool,
    /// Exact Taylor expansions; sampled on a small circle when absent.
    pub taylor: Option<TaylorFn>,
}

impl fmt::Debug for PotentialTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialTriple")
            .field("name", &self.name)
            .field("z0", &self.z0)
            .field("cuts", &self.cuts)
            .finish()
    }
}

impl PotentialTriple {
    /// `f0 = 1`, `f1 = f2 = 0`: no perturbation at all.
    pub fn constant() -> Self {
        let one: JetFn = Arc::new(|_| [C64::new(1.0, 0.0), ZERO, ZERO, ZERO, ZERO]);
        let zero: JetFn = Arc::new(|_| [ZERO; 5]);
        PotentialTriple {
            name: "constant".into(),
            f0: one,
            f1: zero.clone(),
            f2: zero,
            z0: ZERO,
            sqrt_f0_ref: Some(Arc::new(|_| C64::new(1.0, 0.0))),
            in_domain: Arc::new(|z: C64| z.re.is_finite() && z.im.is_finite()),
            cuts: "none".into(),
            f0_floor: 1e-300,
            phi_vanishes: true,
            taylor: Some(Arc::new(|_, order| {
                let mut f0 = vec![ZERO; order + 1];
                f0[0] = C64::new(1.0, 0.0);
                [f0, vec![ZERO; order + 1], vec![ZERO; order + 1]]
            })),
        }
    }

    pub fn check_domain(&self, z: C64) -> Result<()> {
        if (self.in_domain)(z) {
            Ok(())
        } else {
            Err(WkbError::Domain(format!("z = {z} ({}; cuts: {})", self.name, self.cuts)))
        }
    }

    /// f0 at `z`, failing when it is below the floor.
    pub fn f0_value(&self, z: C64) -> Result<C64> {
        let f = (self.f0)(z)[0];
        if !(f.norm() > self.f0_floor) {
            return Err(WkbError::SingularityHit(format!("{z}")));
        }
        Ok(f)
    }

    /// The branch of f0^{1/2} designated at `z`.
    pub fn reference_sqrt(&self, z: C64) -> C64 {
        match &self.sqrt_f0_ref {
            Some(b) => b(z),
            None => (self.f0)(z)[0].sqrt(),
        }
    }

    /// Taylor coefficients of f0, f1, f2 at `z`.
    pub fn taylor_at(&self, z: C64, order: usize) -> [Vec<C64>; 3] {
        if let Some(t) = &self.taylor {
            return t(z, order);
        }
        let r = 0.05 * (1.0 + z.norm());
        let m = (2 * order + 32).next_power_of_two();
        [&self.f0, &self.f1, &self.f2].map(|f| series::taylor_on_circle(|w| f(w)[0], z, r, order, m))
    }

    /// Largest relative disagreement between each jet entry and a
    /// fourth-order central difference of the entry below it.
    pub fn jet_self_test(&self, points: &[C64]) -> f64 {
        let mut worst = 0.0f64;
        for &z in points {
            let h = 1e-3 * (1.0 + z.norm());
            for f in [&self.f0, &self.f1, &self.f2] {
                let at = |dz: f64| f(z + h * dz);
                let (p2, p1, m1, m2) = (at(2.0), at(1.0), at(-1.0), at(-2.0));
                let centre = f(z);
                for k in 1..5 {
                    let fd = (-p2[k - 1] + p1[k - 1] * 8.0 - m1[k - 1] * 8.0 + m2[k - 1]) / (12.0 * h);
                    let scale = centre[k].norm().max(centre[k - 1].norm()).max(1e-300);
                    worst = worst.max((fd - centre[k]).norm() / scale);
                }
            }
        }
        worst
    }
}

/// A point of the z-plane together with its image in the xi-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiPoint {
    pub z: C64,
    pub xi: C64,
    pub sqrt_f0: C64,
    /// f0^{-1/4}
    pub weight: C64,
}

impl XiPoint {
    fn new(z: C64, xi: C64, sqrt_f0: C64) -> Self {
        let weight = if sqrt_f0.norm() == 0.0 {
            C64::new(f64::INFINITY, 0.0)
        } else {
            sqrt_f0.sqrt().inv()
        };
        XiPoint { z, xi, sqrt_f0, weight }
    }
}

/// phi, its xi-derivative, and psi at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalCoeffs {
    pub phi: C64,
    pub phi_xi: C64,
    pub psi: C64,
}

/// phi = f1/f0 and psi = f2/f0 + (4 f0 f0'' - 5 f0'^2) / (16 f0^3).
pub fn phi_psi_at(pot: &PotentialTriple, pt: &XiPoint) -> Result<(C64, C64)> {
    let l = local_coeffs(pot, pt.z, pt.sqrt_f0)?;
    Ok((l.phi, l.psi))
}

pub fn local_coeffs(pot: &PotentialTriple, z: C64, sqrt_f0: C64) -> Result<LocalCoeffs> {
    pot.check_domain(z)?;
    let a = (pot.f0)(z);
    if !(a[0].norm() > pot.f0_floor) {
        return Err(WkbError::SingularityHit(format!("{z}")));
    }
    let b = (pot.f1)(z);
    let c = (pot.f2)(z);
    let f0 = a[0];
    let phi = b[0] / f0;
    let dphi_dz = (b[1] * f0 - b[0] * a[1]) / (f0 * f0);
    let psi = c[0] / f0 + (f0 * a[2] * 4.0 - a[1] * a[1] * 5.0) / (f0 * f0 * f0 * 16.0);
    Ok(LocalCoeffs { phi, phi_xi: dphi_dz / sqrt_f0, psi })
}

/// Taylor coefficients of phi and psi in powers of `xi - xi(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSeries {
    pub phi: Vec<C64>,
    pub psi: Vec<C64>,
}

/// Expansions of phi and psi about the point `z` (branch `sqrt_f0`) in the
/// variable xi, to the given order.
pub fn local_series(pot: &PotentialTriple, z: C64, sqrt_f0: C64, order: usize) -> Result<LocalSeries> {
    pot.check_domain(z)?;
    pot.f0_value(z)?;
    let [f0, f1, f2] = pot.taylor_at(z, order + 2);
    let d1 = series::deriv(&f0);
    let d2 = series::deriv(&d1);
    let m = order + 1;
    let (f0, f1, f2, d1, d2) = (&f0[..m], &f1[..m], &f2[..m], &d1[..m], &d2[..m]);
    let inv0 = series::recip(f0);
    let phi_h = series::mul(f1, &inv0);
    let inv3 = series::mul(&inv0, &series::mul(&inv0, &inv0));
    let num = series::sub(&series::scale(&series::mul(f0, d2), C64::new(4.0, 0.0)), &series::scale(&series::mul(d1, d1), C64::new(5.0, 0.0)));
    let psi_h = series::add(&series::mul(f2, &inv0), &series::scale(&series::mul(&num, &inv3), C64::new(1.0 / 16.0, 0.0)));
    let g = series::recip(&series::sqrt(f0, sqrt_f0));
    let h = series::solve_autonomous(&g);
    Ok(LocalSeries { phi: series::compose(&phi_h, &h), psi: series::compose(&psi_h, &h) })
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: C64,
    b: C64,
    squared: bool,
}

impl Segment {
    fn point(&self, v: f64) -> C64 {
        let g = if self.squared { v * v } else { v };
        self.a + (self.b - self.a) * g
    }

    fn dt_dv(&self, v: f64) -> C64 {
        let g = if self.squared { 2.0 * v } else { 1.0 };
        (self.b - self.a) * g
    }
}

const TABLE_INTERVALS: usize = 512;

/// f0^{1/2} tracked along one segment, tabulated on a uniform grid in v.
struct BranchTable {
    values: Vec<C64>,
}

fn nearest_root(f: C64, prev: C64) -> C64 {
    let r = f.sqrt();
    if (r - prev).norm() <= (r + prev).norm() {
        r
    } else {
        -r
    }
}

impl BranchTable {
    fn build(pot: &PotentialTriple, seg: &Segment, end_value: C64) -> Result<Self> {
        let m = TABLE_INTERVALS;
        let mut values = vec![ZERO; m + 1];
        values[m] = end_value;
        let mut prev = end_value;
        for j in (0..m).rev() {
            let v = j as f64 / m as f64;
            let f = (pot.f0)(seg.point(v))[0];
            if f.norm() <= pot.f0_floor {
                if j == 0 && seg.squared {
                    values[0] = ZERO;
                    break;
                }
                return Err(WkbError::BranchAmbiguity(format!("f0 vanishes near {}", seg.point(v))));
            }
            let r = f.sqrt();
            let (d1, d2) = ((r - prev).norm(), (r + prev).norm());
            if d1.min(d2) > 0.7 * d1.max(d2) {
                return Err(WkbError::BranchAmbiguity(format!("branch jump near {}", seg.point(v))));
            }
            prev = if d1 <= d2 { r } else { -r };
            values[j] = prev;
        }
        Ok(BranchTable { values })
    }

    fn at(&self, pot: &PotentialTriple, seg: &Segment, v: f64) -> C64 {
        let m = TABLE_INTERVALS;
        let mut j = (v * m as f64).round() as usize;
        j = j.min(m);
        if j == 0 && seg.squared {
            j = 1;
        }
        nearest_root((pot.f0)(seg.point(v))[0], self.values[j])
    }
}

/// xi(z) = int_{z0}^{z} f0^{1/2}(t) dt along the polyline z0 -> hint -> z.
pub fn compute_xi(pot: &PotentialTriple, z: C64, contour_hint: Option<&[C64]>) -> Result<XiPoint> {
    if z == pot.z0 {
        return Ok(XiPoint::new(z, ZERO, ZERO));
    }
    pot.check_domain(z)?;
    pot.f0_value(z)?;
    let end_sqrt = pot.reference_sqrt(z);
    let mut verts = vec![pot.z0];
    if let Some(h) = contour_hint {
        verts.extend_from_slice(h);
    }
    verts.push(z);
    verts.dedup();
    let z0_is_zero = (pot.f0)(pot.z0)[0].norm() <= 1e-8;
    let segments: Vec<Segment> = verts
        .windows(2)
        .enumerate()
        .map(|(k, w)| Segment { a: w[0], b: w[1], squared: k == 0 && z0_is_zero })
        .collect();

    let mut tables = Vec::with_capacity(segments.len());
    let mut carry = end_sqrt;
    for seg in segments.iter().rev() {
        let t = BranchTable::build(pot, seg, carry)?;
        carry = t.values[0];
        tables.push(t);
    }
    tables.reverse();

    let mut xi = ZERO;
    for (seg, tab) in segments.iter().zip(&tables) {
        let q = quad::adaptive(|v| tab.at(pot, seg, v) * seg.dt_dv(v), 0.0, 1.0, 1e-300, 1e-13);
        xi += q.value;
    }
    Ok(XiPoint::new(z, xi, end_sqrt))
}

/// Pre-image of a horizontal xi-ray, sampled at increasing arclength `s`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RayPath {
    pub sign: Sign,
    pub anchor: XiPoint,
    /// Arclength of each sample from the anchor (so xi = anchor.xi + dir * s).
    pub s: Vec<f64>,
    pub samples: Vec<XiPoint>,
    pub truncation_abscissa: f64,
    /// Present for rays sampled on a semi-infinite Chebyshev grid; the
    /// point at infinity is then implicit and not stored in `samples`.
    pub map: Option<SemiInfiniteMap>,
}

impl RayPath {
    /// +1 when Re xi increases along the ray.
    pub fn dir(&self) -> f64 {
        self.sign.ray_dir()
    }

    pub fn xi_at(&self, s: f64) -> C64 {
        self.anchor.xi + self.dir() * s
    }
}

/// Integrate dz/ds = dir / f0^{1/2}(z) through the ascending `s_targets`,
/// keeping f0^{1/2} continuous.
fn trace_points(pot: &PotentialTriple, start: &XiPoint, dir: f64, s_targets: &[f64]) -> Result<Vec<XiPoint>> {
    let last = Cell::new(start.sqrt_f0);
    let mut z = start.z;
    let mut s_prev = 0.0;
    let mut out = Vec::with_capacity(s_targets.len());
    for &s in s_targets {
        if s > s_prev {
            let g = |zz: C64, accepted: bool| -> Result<C64> {
                let f = pot.f0_value(zz)?;
                let r = nearest_root(f, last.get());
                if accepted {
                    last.set(r);
                }
                Ok(C64::new(dir, 0.0) / r)
            };
            z = rk::integrate_autonomous(g, z, &[s - s_prev], 1e-12)?[0];
            s_prev = s;
        }
        out.push(XiPoint::new(z, start.xi + dir * s, last.get()));
    }
    Ok(out)
}

/// Trace `n_samples` Chebyshev-spaced points over `[0, length]` of the ray
/// leaving `start` towards the recessive end of `sign`.
pub fn trace_ray(pot: &PotentialTriple, start: &XiPoint, sign: Sign, length: f64, n_samples: usize) -> Result<RayPath> {
    let dir = sign.ray_dir();
    if !(length > 1e-300) {
        return Ok(RayPath {
            sign,
            anchor: *start,
            s: vec![0.0],
            samples: vec![*start],
            truncation_abscissa: start.xi.re,
            map: None,
        });
    }
    if n_samples < 2 {
        return Err(WkbError::Invalid("a ray needs at least two samples".into()));
    }
    let m = n_samples - 1;
    let s: Vec<f64> = (0..=m)
        .map(|j| 0.5 * length * (1.0 - (std::f64::consts::PI * j as f64 / m as f64).cos()))
        .collect();
    let samples = trace_points(pot, start, dir, &s)?;
    Ok(RayPath { sign, anchor: *start, s, samples, truncation_abscissa: start.xi.re + dir * length, map: None })
}

/// Trace the ray at `s(x_j)` for the ascending Chebyshev nodes `x_j < 1`.
pub fn trace_ray_mapped(pot: &PotentialTriple, start: &XiPoint, sign: Sign, x_nodes: &[f64], map: SemiInfiniteMap) -> Result<RayPath> {
    let dir = sign.ray_dir();
    let s: Vec<f64> = x_nodes.iter().filter(|&&x| x < 1.0).map(|&x| map.s_of_x(x)).collect();
    let samples = trace_points(pot, start, dir, &s)?;
    let far = *s.last().unwrap_or(&0.0);
    Ok(RayPath { sign, anchor: *start, s, samples, truncation_abscissa: start.xi.re + dir * far, map: Some(map) })
}

/// Points reached from `start` by straight xi-segments in direction
/// `e^{i theta}`, at the given distances.
pub fn trace_direction(pot: &PotentialTriple, start: &XiPoint, theta: f64, distances: &[f64]) -> Result<Vec<XiPoint>> {
    let e = C64::from_polar(1.0, theta);
    let last = Cell::new(start.sqrt_f0);
    let mut z = start.z;
    let mut s_prev = 0.0;
    let mut out = Vec::with_capacity(distances.len());
    for &s in distances {
        if s > s_prev {
            let g = |zz: C64, accepted: bool| -> Result<C64> {
                let f = pot.f0_value(zz)?;
                let r = nearest_root(f, last.get());
                if accepted {
                    last.set(r);
                }
                Ok(e / r)
            };
            z = rk::integrate_autonomous(g, z, &[s - s_prev], 1e-12)?[0];
            s_prev = s;
        }
        out.push(XiPoint::new(z, start.xi + e * s, last.get()));
    }
    Ok(out)
}
