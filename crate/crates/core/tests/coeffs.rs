use borel_wkb::apps::{bessel, oscillator};
use borel_wkb::coeffs::{
    appendix_a_values, arec_values, bessel_coeff_p, bessel_table, coeffs_collocation, exp_to_series, oscillator_a1,
    oscillator_table, RayContext, RayOptions,
};
use borel_wkb::poly::{bessel_table_q, q, rational_to_f64, PolyQ};
use borel_wkb::transform::{compute_xi, PotentialTriple};
use borel_wkb::{CoeffEntry, Sign, C64};
use num_rational::BigRational;
use num_traits::Zero;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn exact(n: usize, kappa: f64) -> PolyQ {
    PolyQ::from_coeffs(bessel_coeff_p(n, c(kappa), Sign::Plus).exact.expect("rational kappa"))
}

fn poly(c: &[(usize, i64, i64)]) -> PolyQ {
    let deg = c.iter().map(|t| t.0).max().unwrap_or(0);
    let mut v = vec![BigRational::zero(); deg + 1];
    for &(k, n, d) in c {
        v[k] = q(n, d);
    }
    PolyQ::from_coeffs(v)
}

#[test]
fn first_coefficient_for_complex_kappa() {
    let kappa = C64::new(0.3, 0.2);
    let a1 = bessel_coeff_p(1, kappa, Sign::Plus);
    assert!(a1.exact.is_none());
    for p in [c(0.4), C64::new(0.2, 0.5)] {
        let want = (c(1.0) - kappa * kappa * 4.0) / 8.0 * p - kappa / 2.0 * p * p - p * p * p * (5.0 / 24.0);
        assert!((a1.eval(p) - want).norm() < 1e-15, "p = {p}");
    }
}

#[test]
fn second_and_third_coefficients_at_zero_kappa() {
    assert_eq!(exact(2, 0.0), poly(&[(2, 9, 128), (4, -77, 192), (6, 385, 1152)]));
    assert_eq!(exact(3, 0.0), poly(&[(3, 225, 3072), (5, -4563, 5120), (7, 17017, 9216), (9, -85085, 82944)]));
}

#[test]
fn zeroth_coefficient_is_one() {
    for kappa in [0.0, 0.5, 1.0 / 3.0] {
        assert_eq!(exact(0, kappa), PolyQ::one());
    }
    assert_eq!(bessel_coeff_p(0, C64::new(0.3, 0.2), Sign::Minus).eval(c(0.7)), c(1.0));
}

#[test]
fn coefficients_vanish_at_the_origin() {
    for t in bessel_table_q(&q(1, 3), 10).iter().skip(1) {
        assert!(t.coeff(0).is_zero());
    }
}

#[test]
fn minus_branch_is_the_reflection() {
    let kappa = c(0.25);
    for n in 1..=5 {
        let plus = bessel_coeff_p(n, kappa, Sign::Plus);
        let minus = bessel_coeff_p(n, kappa, Sign::Minus);
        for p in [c(0.3), C64::new(-0.1, 0.6)] {
            assert!((minus.eval(p) - plus.eval(-p)).norm() < 1e-14);
        }
    }
}

#[test]
fn fixed_point_table_matches_exact_polynomials() {
    let table = bessel_table(c(0.5), Sign::Plus, 12);
    let exact = bessel_table_q(&q(1, 2), 12);
    let p = q(3, 7);
    for n in 0..=12 {
        let want = rational_to_f64(&exact[n].eval_q(&p));
        let got = table.value(n, c(3.0 / 7.0));
        assert!((got - c(want)).norm() <= 1e-14 * want.abs().max(1e-3), "n = {n}");
    }
}

#[test]
fn oscillator_first_coefficient() {
    let plus = oscillator_a1(c(-0.5), 0, c(2.0), Sign::Plus).unwrap();
    let minus = oscillator_a1(c(-0.5), 0, c(2.0), Sign::Minus).unwrap();
    assert!((plus - c(0.375)).norm() < 1e-15);
    assert!((minus + c(0.375)).norm() < 1e-15);
    let far = oscillator_a1(c(0.3), 2, c(1e7), Sign::Minus).unwrap();
    assert!(far.norm() < 1e-12);
}

/// `exp(sum e_k x^k)` to order `n` by repeated series multiplication.
fn brute_exp(e: &[C64], n: usize) -> Vec<C64> {
    let mul = |a: &[C64], b: &[C64]| -> Vec<C64> {
        let mut out = vec![c(0.0); n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                out[i + j] += a[i] * b[j];
            }
        }
        out
    };
    let mut base = vec![c(0.0); n + 1];
    for (k, v) in e.iter().enumerate().take(n) {
        base[k + 1] = *v;
    }
    let mut power = vec![c(0.0); n + 1];
    power[0] = c(1.0);
    let mut sum = power.clone();
    let mut fact = 1.0;
    for k in 1..=n {
        power = mul(&power, &base);
        fact *= k as f64;
        for i in 0..=n {
            sum[i] += power[i] / fact;
        }
    }
    sum[1..].to_vec()
}

#[test]
fn exp_of_two_terms() {
    let a = exp_to_series(&[c(1.0), c(1.0)], 3);
    assert!((a[0] - c(1.0)).norm() < 1e-15);
    assert!((a[1] - c(1.5)).norm() < 1e-15);
    assert!((a[2] - c(7.0 / 6.0)).norm() < 1e-15);
}

#[test]
fn exp_of_one_term() {
    let e1 = C64::new(0.7, -0.2);
    let a = exp_to_series(&[e1], 6);
    let mut want = c(1.0);
    for (n, v) in a.iter().enumerate() {
        want = want * e1 / (n + 1) as f64;
        assert!((v - want).norm() < 1e-15);
    }
}

#[test]
fn exp_matches_brute_force() {
    let e = [C64::new(0.3, 0.1), C64::new(-0.7, 0.2), C64::new(0.5, 0.0), C64::new(0.1, -0.4), C64::new(0.2, 0.2)];
    let a = exp_to_series(&e, 5);
    let b = brute_exp(&e, 5);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).norm() < 1e-14);
    }
    assert!(exp_to_series(&[c(0.0); 4], 4).iter().all(|v| v.norm() == 0.0));
}

fn bessel_ray(kappa: f64, z: f64, sign: Sign) -> RayContext {
    let pot = bessel::potential(c(kappa));
    let anchor = compute_xi(&pot, c(z), None).unwrap();
    RayContext::new(&pot, &anchor, sign, RayOptions::default()).unwrap()
}

#[test]
fn collocation_matches_polynomials_on_both_rays() {
    for sign in [Sign::Minus, Sign::Plus] {
        let ctx = bessel_ray(0.5, 2.0, sign);
        let table = coeffs_collocation(&ctx, 6).unwrap();
        let poly = bessel_table(c(0.5), sign, 6);
        for (j, pt) in ctx.path.samples.iter().enumerate().step_by(7) {
            let p = bessel::p_of(pt);
            for n in 1..=6 {
                let want = poly.value(n, p);
                let got = table.value(n, c(ctx.path.s[j]));
                assert!((got - want).norm() < 1e-8 * want.norm().max(1e-3), "{sign:?} n = {n} j = {j}");
            }
        }
    }
}

#[test]
fn exponential_form_matches_direct_recursion() {
    let ctx = bessel_ray(1.0 / 3.0, 1.6, Sign::Minus);
    let a = arec_values(&ctx, 5).unwrap();
    let b = appendix_a_values(&ctx, 5).unwrap();
    for n in 0..=5 {
        for j in 0..ctx.len() - 1 {
            assert!((a[n][j] - b[n][j]).norm() < 1e-9 * a[n][j].norm().max(1e-3));
        }
    }
}

#[test]
fn ray_coefficients_decay_at_the_far_end() {
    let ctx = bessel_ray(0.0, 2.0, Sign::Minus);
    let table = coeffs_collocation(&ctx, 6).unwrap();
    for n in 1..=6 {
        if let CoeffEntry::Ray(f) = &table.entries[n] {
            assert!(f.far_end_ratio() <= 1e-6, "n = {n}");
        } else {
            panic!("expected a ray entry");
        }
    }
    assert!((table.value(0, c(0.3)) - c(1.0)).norm() == 0.0);
}

#[test]
fn no_perturbation_gives_zero_coefficients() {
    let pot = PotentialTriple::constant();
    let anchor = compute_xi(&pot, c(0.5), None).unwrap();
    let ctx = RayContext::new(&pot, &anchor, Sign::Minus, RayOptions::default()).unwrap();
    let table = coeffs_collocation(&ctx, 4).unwrap();
    let e = appendix_a_values(&ctx, 4).unwrap();
    for n in 1..=4 {
        assert!(table.value(n, c(0.7)).norm() == 0.0, "{}", table.value(n, c(0.7)));
        assert!(e[n].iter().all(|v| v.norm() == 0.0));
    }
}

#[test]
fn oscillator_table_agrees_with_closed_form() {
    let pot = oscillator::potential(c(0.2), 1);
    let anchor = compute_xi(&pot, c(3.0), None).unwrap();
    let ctx = oscillator::ray_context(c(0.2), 1, &anchor, Sign::Minus, 4).unwrap();
    let table = oscillator_table(&ctx, c(0.2), 1, 4).unwrap();
    let colloc = coeffs_collocation(&ctx, 4).unwrap();
    for (j, pt) in ctx.path.samples.iter().enumerate().step_by(5) {
        let s = c(ctx.path.s[j]);
        let want = oscillator_a1(c(0.2), 1, pt.z, Sign::Minus).unwrap();
        assert!((table.value(1, s) - want).norm() < 1e-9 * want.norm().max(1e-3));
        for n in 1..=4 {
            let a = table.value(n, s);
            assert!((colloc.value(n, s) - a).norm() < 1e-7 * a.norm().max(1e-3), "n = {n}");
        }
    }
}
