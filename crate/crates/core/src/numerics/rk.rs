//! Dormand–Prince 5(4) for the scalar complex ODE `dz/ds = g(z)`.

use crate::error::{Result, WkbError};
use num_complex::Complex64 as C64;

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate from `s = 0` through each of the ascending `targets`, returning
/// `z` at every target. `g` may keep internal state (e.g. branch tracking)
/// and is called with `accepted = true` once a step has been accepted.
pub fn integrate_autonomous<G>(mut g: G, z_start: C64, targets: &[f64], rtol: f64) -> Result<Vec<C64>>
where
    G: FnMut(C64, bool) -> Result<C64>,
{
    let mut out = Vec::with_capacity(targets.len());
    let mut s = 0.0;
    let mut z = z_start;
    let mut h = 1e-3 * (1.0 + z.norm());
    let mut steps = 0usize;
    for &target in targets {
        while s < target {
            steps += 1;
            if steps > 2_000_000 {
                return Err(WkbError::StepFailure("too many steps".into()));
            }
            let last = s + h >= target;
            let hh = if last { target - s } else { h };
            let mut k = [C64::new(0.0, 0.0); 7];
            k[0] = g(z, false)?;
            for i in 0..6 {
                let mut zi = z;
                for (j, kj) in k.iter().enumerate().take(i + 1) {
                    zi += kj * (hh * A[i][j]);
                }
                k[i + 1] = g(zi, false)?;
            }
            let mut z_new = z;
            for (j, kj) in k.iter().enumerate().take(6) {
                z_new += kj * (hh * A[5][j]);
            }
            let mut err = C64::new(0.0, 0.0);
            for (j, kj) in k.iter().enumerate() {
                err += kj * (hh * E[j]);
            }
            let scale = rtol * (1.0 + z.norm().max(z_new.norm()));
            let ratio = err.norm() / scale;
            if ratio <= 1.0 {
                s = if last { target } else { s + hh };
                z = z_new;
                g(z, true)?;
                let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).min(5.0) };
                if !last {
                    h = hh * grow;
                } else {
                    h = h.max(hh * grow);
                }
            } else {
                let shrink = (0.9 * ratio.powf(-0.25)).max(0.1);
                h = hh * shrink;
                if h < 1e-14 * (1.0 + s.abs()) {
                    return Err(WkbError::StepFailure(format!("step underflow at s = {s}")));
                }
            }
        }
        out.push(z);
    }
    Ok(out)
}
