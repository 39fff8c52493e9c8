use borel_wkb::apps::bessel::{self, bessel_jy_wkb, hankel_wkb, BesselInstance, HankelKind};
use borel_wkb::apps::oracle::{bessel_j_series, hankel, oracle_bessel};
use borel_wkb::apps::oscillator::{self, oscillator_correction, OscillatorInstance};
use borel_wkb::apps::residual::{bessel_residuals, oscillator_residuals};
use borel_wkb::apps::{builtin_potential, Method};
use borel_wkb::coeffs::{bessel_table, oscillator_a1};
use borel_wkb::{Sign, WkbError, C64};
use std::f64::consts::PI;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

/// `h^(1)_n(x)` by upward recurrence from its closed forms.
fn spherical_h1(n: usize, x: f64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let e = (i * x).exp();
    let mut h0 = -i * e / x;
    let mut h1 = -(c(x) + i) * e / (x * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = h1 * ((2 * k + 1) as f64 / x) - h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

fn half_integer_h1(n: usize, x: f64) -> C64 {
    spherical_h1(n, x) * (2.0 * x / PI).sqrt()
}

#[test]
fn oracle_half_order_closed_form() {
    let j = oracle_bessel(c(0.5), c(1.0)).unwrap().j;
    let want = (2.0 / PI).sqrt() * 1f64.sin();
    assert!(rel(j, c(want)) < 1e-14, "{j}");
}

#[test]
fn oracle_half_integer_orders() {
    for (n, x) in [(3, 5.0), (10, 20.0), (25, 30.0)] {
        let h = oracle_bessel(c(n as f64 + 0.5), c(x)).unwrap().h1;
        assert!(rel(h, half_integer_h1(n, x)) < 1e-12, "n = {n}");
    }
}

#[test]
fn oracle_wronskian() {
    for (nu, x) in [(10.0, 20.0), (3.3, 7.0), (40.0, 60.0), (20.0, 25.0)] {
        let v = oracle_bessel(c(nu), c(x)).unwrap();
        let lo = oracle_bessel(c(nu - 1.0), c(x)).unwrap();
        let hi = oracle_bessel(c(nu + 1.0), c(x)).unwrap();
        let jd = (lo.j - hi.j) / 2.0;
        let yd = (lo.y - hi.y) / 2.0;
        let w = v.j * yd - jd * v.y;
        assert!(rel(w, c(2.0 / (PI * x))) < 1e-12, "nu = {nu}, x = {x}");
    }
}

#[test]
fn oracle_agrees_with_power_series() {
    for (mu, x) in [(c(10.0), c(40.0)), (c(10.0), c(20.0)), (C64::from_polar(20.0, PI / 6.0), C64::from_polar(40.0, PI / 6.0))] {
        let a = oracle_bessel(mu, x).unwrap().j;
        let b = bessel_j_series(mu, x).unwrap();
        assert!(rel(a, b) < 1e-11, "mu = {mu}, x = {x}: {:e}", rel(a, b));
    }
}

#[test]
fn oracle_range_checks() {
    assert!(matches!(oracle_bessel(c(10.0), c(600.0)), Err(WkbError::Domain(_))));
    assert!(matches!(oracle_bessel(c(250.0), c(100.0)), Err(WkbError::Domain(_))));
    assert!(hankel(3, c(1.0), c(1.0)).is_err());
}

#[test]
fn hankel_from_five_terms() {
    let inst = BesselInstance::new(c(10.0), c(0.0), c(2.0)).unwrap();
    let truth = oracle_bessel(c(10.0), c(20.0)).unwrap().h2;
    let w = hankel_wkb(&inst, Method::Asymptotic(5), HankelKind::H2).unwrap();
    let err = rel(w, truth);
    let setup = bessel::bound_setup(c(0.0), c(2.0), Sign::Minus).unwrap();
    let bound = setup.report(c(10.0), 5, None, None).unwrap().bound;
    let s = bessel::eta(&inst, Sign::Minus, Method::Asymptotic(5)).unwrap().value;
    assert!(err <= bound / ((s + 1.0).norm() - bound), "{err:e} vs {bound:e}");
    assert!(err <= 1e-5, "{err:e}");
}

#[test]
fn hankel_of_half_integer_order() {
    let inst = BesselInstance::new(c(10.0), c(0.5), c(2.0)).unwrap();
    let truth = half_integer_h1(10, 20.0);
    for m in [Method::Borel, Method::Factorial] {
        let h = hankel_wkb(&inst, m, HankelKind::H1).unwrap();
        assert!(rel(h, truth) < 1e-6, "{m:?}: {:e}", rel(h, truth));
    }
}

#[test]
fn leading_factor_is_plain_at_zero_kappa() {
    let inst = BesselInstance::new(c(10.0), c(0.0), c(2.0)).unwrap();
    let z = c(2.0);
    let plain = -C64::new(0.0, 1.0) * z.sqrt() * (inst.point.xi * 10.0).exp() / (z * z - 1.0).powf(0.25);
    assert!(rel(inst.leading(Sign::Plus), plain) < 1e-14);
}

#[test]
fn j_and_y_combine_to_hankel() {
    let inst = BesselInstance::new(c(10.0), c(0.3), c(1.7)).unwrap();
    let jy = bessel_jy_wkb(&inst, Method::Borel).unwrap();
    let h1 = hankel_wkb(&inst, Method::Borel, HankelKind::H1).unwrap();
    assert!(rel(jy.j + C64::new(0.0, 1.0) * jy.y, h1) < 1e-14);
}

#[test]
fn j_and_y_match_reference() {
    let inst = BesselInstance::new(c(10.0), c(0.0), c(2.0)).unwrap();
    let jy = bessel_jy_wkb(&inst, Method::Borel).unwrap();
    let truth = oracle_bessel(c(10.0), c(20.0)).unwrap();
    assert!(rel(jy.j, truth.j) < 1e-6);
    assert!(rel(jy.y, truth.y) < 1e-6);
}

#[test]
fn real_arguments_give_real_values() {
    for z in [1.4, 2.0, 3.5] {
        let inst = BesselInstance::new(c(12.0), c(0.25), c(z)).unwrap();
        let jy = bessel_jy_wkb(&inst, Method::Borel).unwrap();
        assert!(jy.j.im.abs() <= 1e-8 * jy.j.norm());
        assert!(jy.y.im.abs() <= 1e-8 * jy.y.norm());
        let h1 = hankel_wkb(&inst, Method::Borel, HankelKind::H1).unwrap();
        let h2 = hankel_wkb(&inst, Method::Borel, HankelKind::H2).unwrap();
        assert!(rel(h1, h2.conj()) < 1e-8);
    }
}

#[test]
fn methods_agree() {
    let inst = BesselInstance::new(c(10.0), c(0.0), c(2.0)).unwrap();
    let table = bessel_table(c(0.0), Sign::Minus, 40);
    let n_opt = (1..40)
        .min_by(|&a, &b| {
            let t = |n: usize| table.value(n, inst.p).norm() / 10f64.powi(n as i32);
            t(a).total_cmp(&t(b))
        })
        .unwrap();
    let values: Vec<C64> = [Method::Asymptotic(n_opt + 1), Method::Borel, Method::Factorial]
        .iter()
        .map(|&m| hankel_wkb(&inst, m, HankelKind::H2).unwrap())
        .collect();
    for a in &values {
        for b in &values {
            assert!(rel(*a, *b) < 1e-7, "{:e}", rel(*a, *b));
        }
    }
}

#[test]
fn wronskian_of_wkb_solutions_is_constant() {
    let nu = 20.0;
    let w = |z: f64, s: Sign| bessel::w_value(&BesselInstance::new(c(nu), c(0.0), c(z)).unwrap(), s, Method::Borel).unwrap();
    let dw = |z: f64, s: Sign| {
        let h = 1e-3;
        let d1 = (w(z + h, s) - w(z - h, s)) / (2.0 * h);
        let d2 = (w(z + h / 2.0, s) - w(z - h / 2.0, s)) / h;
        (d2 * 4.0 - d1) / 3.0
    };
    let wr: Vec<C64> = (0..10)
        .map(|k| {
            let z = 1.3 + 0.3 * k as f64;
            w(z, Sign::Plus) * dw(z, Sign::Minus) - dw(z, Sign::Plus) * w(z, Sign::Minus)
        })
        .collect();
    for v in &wr {
        assert!(rel(*v, wr[0]) < 1e-7, "{v} vs {}", wr[0]);
    }
}

#[test]
fn bessel_residuals_are_small() {
    let zs = [c(1.5), c(2.5), C64::new(2.0, 0.4)];
    for sign in [Sign::Minus, Sign::Plus] {
        for r in bessel_residuals(c(30.0), c(0.5), &zs, sign, Method::Borel).unwrap() {
            assert!(r.relative < 1e-6, "{sign:?} z = {}: {:e}", r.z, r.relative);
        }
    }
}

#[test]
fn oscillator_first_correction_at_fifty() {
    let inst = OscillatorInstance::new(c(50.0), c(-0.5), 0, c(3.0)).unwrap();
    let w = oscillator::oscillator_solution(&inst, Method::Asymptotic(2), Sign::Plus).unwrap();
    let ratio = w / inst.leading(Sign::Plus);
    assert!((ratio - c(1.0 + 3.0 / (8.0 * 4.0 * 50.0))).norm() < 1e-15);
}

#[test]
fn oscillator_plus_branch_within_bound() {
    let z = C64::new(-1.0, 1.0).sqrt() * 2.0 + 1.0;
    let inst = OscillatorInstance::new(c(50.0), c(-0.5), 0, z).unwrap();
    let mu = oscillator_correction(&inst, Method::Borel, Sign::Plus).unwrap().value;
    let a1 = oscillator_a1(c(-0.5), 0, z, Sign::Plus).unwrap();
    let (setup, _) = oscillator::bound_setup(c(-0.5), 0, z, Sign::Plus, oscillator::RAY_TERMS).unwrap();
    let bound = setup.report(c(50.0), 2, Some(0.1 * setup.d), None).unwrap().bound;
    assert!((mu - a1 / 50.0).norm() <= bound);
}

#[test]
fn oscillator_correction_decays_outwards() {
    let mut last = f64::INFINITY;
    for z in [3.0, 5.0, 9.0, 17.0] {
        let inst = OscillatorInstance::new(c(50.0), c(0.0), 1, c(z)).unwrap();
        let mu = oscillator_correction(&inst, Method::Borel, Sign::Minus).unwrap().value.norm();
        assert!(mu < last, "z = {z}");
        last = mu;
    }
}

#[test]
fn oscillator_residuals_are_small() {
    let zs = [c(2.5), c(3.5)];
    for r in oscillator_residuals(c(50.0), c(0.0), 1, &zs, Sign::Minus, Method::Borel).unwrap() {
        assert!(r.relative < 1e-6, "z = {}: {:e}", r.z, r.relative);
    }
}

#[test]
fn builtin_potentials_by_name() {
    assert!(builtin_potential("bessel", c(0.5), c(0.0), 0).is_ok());
    assert!(builtin_potential("oscillator", c(0.0), c(0.5), 2).is_ok());
    assert!(builtin_potential("airy", c(0.0), c(0.0), 0).is_err());
}
