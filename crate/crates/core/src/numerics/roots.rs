use num_complex::Complex64 as C64;

/// Evaluate `sum c_k t^k` and its derivative.
pub fn horner_with_derivative(c: &[C64], t: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for ck in c.iter().rev() {
        dp = dp * t + p;
        p = p * t + ck;
    }
    (p, dp)
}

pub fn horner(c: &[C64], t: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, ck| acc * t + ck)
}

/// All roots of `sum c_k t^k` by Aberth–Ehrlich iteration.
pub fn poly_roots(c: &[C64]) -> Vec<C64> {
    let mut deg = c.len();
    while deg > 0 && c[deg - 1].norm() == 0.0 {
        deg -= 1;
    }
    if deg <= 1 {
        return Vec::new();
    }
    let coeffs = &c[..deg];
    let n = deg - 1;
    let lead = coeffs[n];
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|a| (a / lead).norm())
            .fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (C64::new(1.0, 0.0) - ratio * s);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}
