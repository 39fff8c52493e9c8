use borel_wkb::apps::bessel::{self, BesselInstance, HankelKind};
use borel_wkb::apps::{oscillator, Method};
use borel_wkb::borel::{borel_series, pade, BorelSeries, BorelSummation, SumOptions};
use borel_wkb::bounds::{lemma3_identity, ln_c_upper, remainder_bound, v_profile, v_weight, RemainderInputs};
use borel_wkb::coeffs::{bessel_table, RayContext, RayOptions};
use borel_wkb::equation::RayDomain;
use borel_wkb::factorial::{b_from_a, b_from_a_symbolic, b_recursive_symbolic, ln_denominators, tail_bound, StirlingTable, TailInputs};
use borel_wkb::poly::{bessel_table_q, q};
use borel_wkb::transform::{compute_xi, trace_ray};
use borel_wkb::{ConditionKind, EquationSpec, Sign, C64};
use num_traits::Zero;
use proptest::prelude::*;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn cplx(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn oscillator_xi_closed_form(r in 0.05f64..5.0, th in -3.1f64..3.1) {
        let z = C64::from_polar(r, th) + 1.0;
        let pot = oscillator::potential(c(0.0), 1);
        prop_assume!(pot.check_domain(z).is_ok());
        let pt = compute_xi(&pot, z, None).unwrap();
        let want = (z - 1.0) * (z - 1.0) / 4.0;
        prop_assert!((pt.xi - want).norm() <= 1e-12 * want.norm().max(1.0), "z = {}", z);
    }

    #[test]
    fn bessel_xi_closed_form(x in 0.2f64..5.0, y in -3.0f64..3.0) {
        let z = C64::new(x, y);
        prop_assume!(x > 1.1 || y.abs() > 0.3);
        let pot = bessel::potential(c(0.0));
        prop_assume!(pot.check_domain(z).is_ok());
        let pt = compute_xi(&pot, z, None).unwrap();
        let want = bessel::xi_closed_form(z);
        prop_assert!((pt.xi - want).norm() <= 1e-10 * want.norm().max(1.0), "z = {}: {} vs {}", z, pt.xi, want);
    }

    #[test]
    fn xi_is_path_independent(x in 1.2f64..5.0, y in -3.0f64..3.0, off in -0.4f64..0.4) {
        let z = C64::new(x, y);
        let pot = bessel::potential(c(0.0));
        let w = (z + 1.0) / 2.0 + C64::new(0.0, off) * (z - 1.0);
        prop_assume!(w.re > 1.05);
        let a = compute_xi(&pot, z, None).unwrap().xi;
        let b = compute_xi(&pot, z, Some(&[w])).unwrap().xi;
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
    }

    #[test]
    fn ray_samples_map_back(x in 1.3f64..4.0, y in -1.0f64..1.0, minus in any::<bool>()) {
        let pot = bessel::potential(c(0.0));
        let anchor = compute_xi(&pot, C64::new(x, y), None).unwrap();
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let path = trace_ray(&pot, &anchor, sign, 3.0, 7).unwrap();
        let mut hint = vec![anchor.z];
        for pt in &path.samples[1..] {
            let again = compute_xi(&pot, pt.z, Some(&hint)).unwrap();
            prop_assert!((again.xi - pt.xi).norm() <= 1e-8 * pt.xi.norm().max(1.0));
            hint.push(pt.z);
        }
    }

    #[test]
    fn bessel_polynomials_have_degree_3n(num in -6i64..7, den in 1i64..8) {
        let table = bessel_table_q(&q(num, den), 12);
        for (n, a) in table.iter().enumerate() {
            prop_assert_eq!(a.degree(), Some(3 * n));
            if n > 0 {
                prop_assert!(a.coeff(0).is_zero());
            }
        }
    }

    #[test]
    fn coefficients_grow_at_most_geometrically(x in 1.1f64..4.0) {
        let d = BesselInstance::new(c(10.0), c(0.0), c(x)).unwrap().domain(Sign::Minus).unwrap().d;
        let pot = bessel::potential(c(0.0));
        let anchor = compute_xi(&pot, c(x), None).unwrap();
        let path = trace_ray(&pot, &anchor, Sign::Minus, 20.0, 21).unwrap();
        let table = bessel_table(c(0.0), Sign::Minus, 13);
        let mut fact = 1.0;
        for n in 1..=12 {
            fact *= n as f64;
            let sup = path.samples.iter().map(|pt| table.value(n + 1, bessel::p_of(pt)).norm()).fold(0.0, f64::max);
            prop_assert!((sup / fact).powf(1.0 / n as f64) * 2.0 * d <= 3.0, "n = {}", n);
        }
    }

    #[test]
    fn pade_reproduces_rational_functions(
        num in prop::collection::vec(cplx(1.0), 1..4),
        den in prop::collection::vec(cplx(0.5), 1..4),
    ) {
        let l = num.len() - 1;
        let m = den.len();
        let mut d = vec![c(1.0)];
        d.extend(den);
        let n = l + m + 1;
        let mut s = vec![c(0.0); n];
        for k in 0..n {
            let mut v = if k <= l { num[k] } else { c(0.0) };
            for j in 1..=m.min(k) {
                v -= d[j] * s[k - j];
            }
            s[k] = v;
        }
        let p = pade(&BorelSeries::new(s, c(0.0), Sign::Minus), l, m);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        for t in [C64::new(0.1, 0.05), C64::new(-0.2, 0.1)] {
            let want = num.iter().rev().fold(c(0.0), |a, v| a * t + v) / d.iter().rev().fold(c(0.0), |a, v| a * t + v);
            prop_assert!(rel(p.eval(t), want) < 1e-8);
        }
    }

    #[test]
    fn neighbouring_pade_degrees_agree(x in 1.5f64..4.0, u in 20.0f64..60.0) {
        let inst = BesselInstance::new(c(u), c(0.0), c(x)).unwrap();
        let d = inst.domain(Sign::Minus).unwrap().d;
        let table = bessel_table(c(0.0), Sign::Minus, 16);
        let s = borel_series(&table, inst.p, inst.point.xi, 16).unwrap();
        let at = |k: usize| BorelSummation::compute(&s, c(u), &SumOptions { l: Some(k), m: Some(k), d, ..SumOptions::default() }).unwrap();
        let a = at(6);
        let b = at(7);
        prop_assert!((a.value - b.value).norm() <= 10.0 * a.err_estimate.max(1e-16));
    }

    #[test]
    fn stirling_recurrence(n in 1usize..60, k in 1usize..60) {
        prop_assume!(k <= n);
        let s = StirlingTable::new(n + 1);
        let want = s.get(n, k - 1) - s.get(n, k) * num_bigint::BigInt::from(n);
        prop_assert_eq!(s.get(n + 1, k), &want);
    }

    #[test]
    fn transform_is_linear(
        a in prop::collection::vec(cplx(1.0), 6),
        b in prop::collection::vec(cplx(1.0), 6),
        k in cplx(2.0),
        omega in 0.2f64..3.0,
    ) {
        let s = StirlingTable::new(6);
        let mix: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x + k * y).collect();
        let ba = b_from_a(&a, omega, &s).unwrap();
        let bb = b_from_a(&b, omega, &s).unwrap();
        let bm = b_from_a(&mix, omega, &s).unwrap();
        for n in 0..6 {
            let want = ba[n] + k * bb[n];
            prop_assert!((bm[n] - want).norm() <= 1e-10 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn symbolic_routes_agree(num in -5i64..6, den in 1i64..6) {
        let k = q(num, den);
        let alt = b_from_a_symbolic(&bessel_table_q(&k, 6)[1..], &StirlingTable::new(6)).unwrap();
        prop_assert_eq!(alt, b_recursive_symbolic(&k, 6));
    }

    #[test]
    fn tail_bound_decreases(cc in 0.1f64..5.0, v in 0.0f64..2.0, omega in 0.3f64..2.0, ratio in 1.1f64..20.0, n in 1usize..80) {
        let u = c(omega * ratio);
        let t = TailInputs { c: cc, v, weight: 1.0, sigma: omega / 2.0 };
        prop_assert!(tail_bound(omega, u, n + 1, &t).unwrap() < tail_bound(omega, u, n, &t).unwrap());
    }

    #[test]
    fn log_denominators_match_products(re in 0.5f64..100.0, im in -50.0f64..50.0, omega in 0.1f64..3.0) {
        let u = C64::new(re, im);
        let ln = ln_denominators(u, omega, 40);
        let mut prod = c(1.0);
        for (k, l) in ln.iter().enumerate() {
            prod *= u + omega * k as f64;
            prop_assert!((l.exp() - prod).norm() <= 1e-13 * prod.norm(), "n = {}", k);
        }
    }

    #[test]
    fn factorial_sum_identity_holds(n in 1u32..=20, m in 0u32..=20) {
        let (l, r) = lemma3_identity(n, m);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn remainder_bound_decreases_with_u(
        cc in 0.1f64..5.0, v in 0.0f64..2.0, r in 0.05f64..1.0, n in 1usize..10, th in -1.0f64..1.0, mag in 5.0f64..200.0,
    ) {
        let at = |m: f64| remainder_bound(&RemainderInputs { c: cc, v, weight: 1.0, r, sigma: r / 2.0, n, u: C64::from_polar(m, th) }).unwrap();
        prop_assert!(at(mag * 1.5) < at(mag));
    }

    #[test]
    fn remainder_bound_has_a_finite_optimum(cc in 0.1f64..5.0, r in 0.05f64..1.0, mag in 2.0f64..40.0) {
        let at = |n: usize| remainder_bound(&RemainderInputs { c: cc, v: 0.1, weight: 1.0, r, sigma: r / 2.0, n, u: c(mag) }).unwrap();
        let vals: Vec<f64> = (1..400).map(at).collect();
        let best = (0..vals.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
        prop_assert!(best + 1 < vals.len());
        prop_assert!(vals[vals.len() - 1] > vals[best]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn sampled_c_stays_below_the_analytic_bound(x in 1.4f64..4.0, frac in 0.1f64..0.9) {
        let setup = bessel::bound_setup(c(0.0), c(x), Sign::Minus).unwrap();
        let r = frac * setup.d;
        let sampled = setup.c_at(r);
        prop_assume!(sampled.is_ok());
        prop_assert!(sampled.unwrap().c <= ln_c_upper(&setup.chain, r).unwrap().exp());
    }

    #[test]
    fn v_decreases_along_the_ray_and_splits(x in 1.4f64..4.0, y in -0.5f64..0.5) {
        let pot = bessel::potential(c(0.0));
        let anchor = compute_xi(&pot, C64::new(x, y), None).unwrap();
        let ctx = RayContext::new(&pot, &anchor, Sign::Minus, RayOptions::default()).unwrap();
        let prof = v_profile(&ctx, 1.0);
        for w in prof.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-14);
        }
        let j = ctx.len() / 4;
        let mid = &ctx.path.samples[j];
        let dom = RayDomain::new(mid.xi, Sign::Minus, &bessel::EXCLUDED, None).unwrap();
        let eq = EquationSpec::new(pot.clone(), Sign::Minus, ConditionKind::Cond1, 1.0, dom.d, dom.epsilon).unwrap();
        let sub = RayContext::new(&pot, mid, Sign::Minus, RayOptions::default()).unwrap();
        let tail = v_weight(&eq, &sub.path, 1.0).unwrap();
        prop_assert!((tail - prof[j]).abs() <= 1e-8 * prof[0], "{} vs {}", tail, prof[j]);
    }

    #[test]
    fn hankel_conjugate_symmetry(nu in 5.0f64..30.0, kappa in 0.0f64..1.0, z in 1.3f64..4.0) {
        let inst = BesselInstance::new(c(nu), c(kappa), c(z)).unwrap();
        let h1 = bessel::hankel_wkb(&inst, Method::Borel, HankelKind::H1).unwrap();
        let h2 = bessel::hankel_wkb(&inst, Method::Borel, HankelKind::H2).unwrap();
        prop_assert!(rel(h1, h2.conj()) < 1e-8);
    }
}
