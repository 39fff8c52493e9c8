//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

use borel_wkb::apps::bessel::{self, BesselInstance, HankelKind};
use borel_wkb::apps::oracle::oracle_bessel;
use borel_wkb::apps::residual::{bessel_residuals, oscillator_residuals};
use borel_wkb::apps::{cloud_points, oscillator, ray_points, Method};
use borel_wkb::borel::{borel_series, contraction_check, ContractionGrid};
use borel_wkb::bounds::{gevrey_bound_check, lemma3_identity, ln_c_upper, BoundSetup, GevreyPoint};
use borel_wkb::coeffs::{appendix_a_values, arec_values, bessel_table, coeffs_collocation, RayContext, RayOptions};
use borel_wkb::equation::RayDomain;
use borel_wkb::factorial::{
    b_from_a, b_from_a_symbolic, b_recursive_ray, b_recursive_symbolic, default_sigma, eval_factorial_series, StirlingTable,
    TailInputs,
};
use borel_wkb::poly::{bessel_table_q, q, PolyQ};
use borel_wkb::transform::compute_xi;
use borel_wkb::coeffs::bessel_coeff_p;
use borel_wkb::{Sign, C64};
use num_rational::BigRational;
use std::time::Instant;

type Outcome = Result<String, String>;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// The published A_1, A_2, A_3 as functions of kappa.
fn table_polys(k: &BigRational) -> [Vec<BigRational>; 3] {
    let k2 = k * k;
    let k3 = &k2 * k;
    let k4 = &k2 * &k2;
    let k5 = &k4 * k;
    let k6 = &k3 * &k3;
    let r = |n: i64| BigRational::from_integer(n.into());
    let z = r(0);
    let a1 = vec![z.clone(), (r(1) - r(4) * &k2) / r(8), -k / r(2), -q(5, 24)];
    let a2 = vec![
        z.clone(),
        z.clone(),
        (r(9) - r(40) * &k2 + r(16) * &k4) / r(128),
        -(r(29) * k - r(20) * &k3) / r(48),
        -(r(77) - r(140) * &k2) / r(192),
        r(35) * k / r(48),
        q(385, 1152),
    ];
    let a3 = vec![
        z.clone(),
        z.clone(),
        z.clone(),
        (r(225) - r(1036) * &k2 + r(560) * &k4 - r(64) * &k6) / r(3072),
        -(r(751) * k - r(728) * &k3 + r(112) * &k5) / r(768),
        -(r(4563) - r(12040) * &k2 + r(2800) * &k4) / r(5120),
        (r(3619) * k - r(1540) * &k3) / r(1152),
        (r(17017) - r(20020) * &k2) / r(9216),
        -r(5005) * k / r(2304),
        -q(85085, 82944),
    ];
    [a1, a2, a3]
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for (num, den) in [(0, 1), (1, 2), (1, 3)] {
        let k = q(num, den);
        let expected = table_polys(&k);
        let kf = num as f64 / den as f64;
        for n in 1..=3 {
            let got = bessel_coeff_p(n, c(kf), Sign::Plus);
            let exact = got.exact.ok_or_else(|| format!("kappa = {num}/{den}: no exact coefficients"))?;
            let want = PolyQ::from_coeffs(expected[n - 1].clone());
            ensure(PolyQ::from_coeffs(exact) == want, || format!("A_{n} differs at kappa = {num}/{den}"))?;
            checked += 1;
        }
        ensure(bessel_coeff_p(0, c(kf), Sign::Plus).exact == Some(vec![q(1, 1)]), || "A_0 != 1".into())?;
    }
    Ok(format!("{checked} polynomials exact"))
}

struct Grid {
    z: f64,
    setup: BoundSetup,
}

fn grids() -> Result<Vec<Grid>, String> {
    [1.5, 2.0, 3.0]
        .iter()
        .map(|&z| Ok(Grid { z, setup: bessel::bound_setup(c(0.0), c(z), Sign::Minus).map_err(err)? }))
        .collect()
}

fn criterion_2(grids: &[Grid]) -> Outcome {
    let mut worst_slack = 0.0f64;
    let mut at_6_40 = 0.0f64;
    let mut cases = 0;
    for g in grids {
        for nu in [10.0, 20.0, 40.0] {
            let inst = BesselInstance::new(c(nu), c(0.0), c(g.z)).map_err(err)?;
            let truth = oracle_bessel(c(nu), c(nu * g.z)).map_err(err)?.h2;
            for n in 2..=8 {
                let h = bessel::hankel_wkb(&inst, Method::Asymptotic(n), HankelKind::H2).map_err(err)?;
                let rel = ((h - truth) / truth).norm();
                let s_n = bessel::eta(&inst, Sign::Minus, Method::Asymptotic(n)).map_err(err)?.value;
                let bound = g.setup.report(c(nu), n, None, None).map_err(err)?.bound;
                let room = (s_n + 1.0).norm() - bound;
                let rel_bound = if room > 0.0 { bound / room } else { f64::INFINITY };
                ensure(rel <= rel_bound, || format!("z = {}, nu = {nu}, N = {n}: {rel:.3e} > {rel_bound:.3e}", g.z))?;
                worst_slack = worst_slack.max(rel / rel_bound);
                if n == 6 && nu == 40.0 {
                    at_6_40 = at_6_40.max(rel);
                }
                cases += 1;
            }
        }
    }
    ensure(at_6_40 <= 1e-5, || format!("N = 6, nu = 40 error {at_6_40:.3e} > 1e-5"))?;
    Ok(format!("{cases} cases, max error/bound {worst_slack:.3}, N=6 nu=40 error {at_6_40:.2e}"))
}

fn criterion_3(grids: &[Grid]) -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for g in grids {
        for nu in [10.0, 20.0, 40.0] {
            for arg in [0.0, std::f64::consts::FRAC_PI_6, -std::f64::consts::FRAC_PI_6] {
                let u = C64::from_polar(nu, arg);
                let inst = BesselInstance::new(u, c(0.0), c(g.z)).map_err(err)?;
                let truth = inst.eta_from_hankel(HankelKind::H2, oracle_bessel(u, u * g.z).map_err(err)?.h2);
                for n in 2..=8 {
                    let s_n = bessel::eta(&inst, Sign::Minus, Method::Asymptotic(n)).map_err(err)?.value;
                    let rem = (truth - s_n).norm();
                    let rep = g.setup.report(u, n, None, Some(rem)).map_err(err)?;
                    ensure(rep.holds() == Some(true), || {
                        format!("z = {}, u = {u}, N = {n}: remainder {rem:.3e} > bound {:.3e}", g.z, rep.bound)
                    })?;
                    worst = worst.max(rem / rep.bound);
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases, max remainder/bound {worst:.3}"))
}

fn criterion_4() -> Outcome {
    let u = c(25.0);
    let points = [c(1.5), c(2.0), c(3.0), C64::new(2.0, 0.3), C64::new(2.0, -0.3), C64::new(1.8, 0.6)];
    let mut worst_agree = 0.0f64;
    let mut worst_slack = 0.0f64;
    for &z in &points {
        let inst = BesselInstance::new(u, c(0.0), z).map_err(err)?;
        let dom = inst.domain(Sign::Minus).map_err(err)?;
        let exp = bessel::factorial_expansion(&inst, Sign::Minus, dom.d, 80).map_err(err)?;
        let borel = bessel::eta(&inst, Sign::Minus, Method::Borel).map_err(err)?.value;
        let setup = bessel::bound_setup(c(0.0), z, Sign::Minus).map_err(err)?;
        let cc = setup.c_at(exp.r()).map_err(err)?.c;
        let sigma = default_sigma(exp.omega, u);
        let tail = TailInputs { c: cc, v: setup.v1 / sigma, weight: setup.weight, sigma };
        ensure(u.re > exp.omega, || format!("z = {z}: Re u <= omega"))?;
        let far = eval_factorial_series(&exp, u, 80, None).map_err(err)?.value;
        for n in [5, 10, 20, 30, 40] {
            let f = eval_factorial_series(&exp, u, n, Some(&tail)).map_err(err)?;
            ensure(f.certified, || format!("z = {z}, N = {n}: tail bound not certified"))?;
            let observed = (far - f.value).norm();
            ensure(observed <= f.tail_bound, || format!("z = {z}, N = {n}: truncation {observed:.3e} > tail {:.3e}", f.tail_bound))?;
            worst_slack = worst_slack.max(observed / f.tail_bound);
            if n == 40 {
                let rel = (f.value - borel).norm() / borel.norm();
                ensure(rel <= 1e-7, || format!("z = {z}: factorial vs Borel {rel:.3e}"))?;
                worst_agree = worst_agree.max(rel);
            }
        }
    }
    Ok(format!("6 points, max factorial/Borel difference {worst_agree:.2e}, max truncation/tail {worst_slack:.3}"))
}

fn criterion_5() -> Outcome {
    let kappa = c(0.5);
    let pot = bessel::potential(kappa);
    let anchor = compute_xi(&pot, c(2.0), None).map_err(err)?;
    let ctx = RayContext::new(&pot, &anchor, Sign::Minus, RayOptions::default()).map_err(err)?;
    let direct = arec_values(&ctx, 6).map_err(err)?;
    let alt = appendix_a_values(&ctx, 6).map_err(err)?;
    let table = bessel_table(kappa, Sign::Minus, 6);
    let mut worst = 0.0f64;
    for (j, pt) in ctx.path.samples.iter().enumerate() {
        let p = bessel::p_of(pt);
        for n in 1..=6 {
            let want = table.value(n, p);
            let scale = want.norm().max(1e-3);
            worst = worst.max((direct[n][j] - want).norm() / scale).max((alt[n][j] - want).norm() / scale);
        }
    }
    ensure(worst <= 1e-7, || format!("coefficient routes differ by {worst:.3e}"))?;

    let k = q(1, 2);
    let s = StirlingTable::new(8);
    let alt_b = b_from_a_symbolic(&bessel_table_q(&k, 8)[1..], &s).map_err(err)?;
    let rec_b = b_recursive_symbolic(&k, 8);
    ensure(alt_b == rec_b, || "B routes differ in exact arithmetic".into())?;

    let omega = 1.0;
    let colloc = coeffs_collocation(&ctx, 8).map_err(err)?;
    let rec = b_recursive_ray(&ctx, omega, 8).map_err(err)?;
    let mut worst_b = 0.0f64;
    for j in 0..ctx.len() - 1 {
        let a: Vec<C64> = (1..=8).map(|n| colloc.value(n, c(ctx.s[j]))).collect();
        let b = b_from_a(&a, omega, &s).map_err(err)?;
        for n in 0..8 {
            worst_b = worst_b.max((b[n] - rec[n][j]).norm() / b[n].norm().max(1e-3));
        }
    }
    ensure(worst_b <= 1e-7, || format!("B on the ray differs by {worst_b:.3e}"))?;

    for n in 1..=20u32 {
        for m in 0..=20u32 {
            let (l, r) = lemma3_identity(n, m);
            ensure(l == r, || format!("Lemma 3 fails at n = {n}, m = {m}"))?;
        }
    }
    Ok(format!("A routes {worst:.1e}, B exact, B ray {worst_b:.1e}, 420 identities"))
}

fn criterion_6() -> Outcome {
    let pot = bessel::potential(c(0.0));
    let anchor = compute_xi(&pot, c(2.0), None).map_err(err)?;
    let dom = RayDomain::new(anchor.xi, Sign::Minus, &bessel::EXCLUDED, None).map_err(err)?;
    let setup = bessel::bound_setup(c(0.0), c(2.0), Sign::Minus).map_err(err)?;
    let mut pts = ray_points(&pot, &anchor, &dom, 100.0).map_err(err)?;
    pts.extend(cloud_points(&pot, &anchor, &dom).map_err(err)?);
    let gp: Vec<GevreyPoint> = pts
        .iter()
        .map(|p| GevreyPoint { at: bessel::p_of(p), xi: p.xi, weight: Sign::Minus.weight(p.xi.re, 1.0) })
        .collect();
    let table = bessel_table(c(0.0), Sign::Minus, 10);
    let rep = gevrey_bound_check(&table, &gp, &setup.chain, 10).map_err(err)?;
    let r = 0.3 * setup.d;
    let cs = setup.c_at(r).map_err(err)?.c;
    let cu = ln_c_upper(&setup.chain, r).map_err(err)?.exp();
    ensure(cs <= cu, || format!("Bessel C {cs:.3e} > C_upper {cu:.3e}"))?;

    let (os, otable) = oscillator::bound_setup(c(0.0), 1, c(3.0), Sign::Minus, 15).map_err(err)?;
    let opot = oscillator::potential(c(0.0), 1);
    let oanchor = compute_xi(&opot, c(3.0), None).map_err(err)?;
    let odom = RayDomain::new(oanchor.xi, Sign::Minus, &oscillator::EXCLUDED, None).map_err(err)?;
    let ogp: Vec<GevreyPoint> = ray_points(&opot, &oanchor, &odom, 100.0)
        .map_err(err)?
        .iter()
        .map(|p| GevreyPoint { at: c((p.xi - oanchor.xi).re), xi: p.xi, weight: Sign::Minus.weight(p.xi.re, 0.5) })
        .collect();
    let orep = gevrey_bound_check(&otable, &ogp, &os.chain, 10).map_err(err)?;
    let orr = 0.2 * os.d;
    let ocs = os.c_at(orr).map_err(err)?.c;
    let ocu = ln_c_upper(&os.chain, orr).map_err(err)?.exp();
    ensure(ocs <= ocu, || format!("oscillator C {ocs:.3e} > C_upper {ocu:.3e}"))?;
    Ok(format!(
        "slack {:.2e} (Bessel, {} checks), {:.2e} (oscillator, {} checks); C/C_upper {:.1e}, {:.1e}",
        rep.max_slack,
        rep.checks,
        orep.max_slack,
        orep.checks,
        cs / cu,
        ocs / ocu
    ))
}

fn criterion_7() -> Outcome {
    let pot = bessel::potential(c(0.0));
    let anchor = compute_xi(&pot, c(2.0), None).map_err(err)?;
    let ctx = RayContext::new(&pot, &anchor, Sign::Minus, RayOptions::default()).map_err(err)?;
    let a1 = coeffs_collocation(&ctx, 2).map_err(err)?;
    let poly = bessel_table(c(0.0), Sign::Minus, 30);
    let series = borel_series(&poly, bessel::p_of(&anchor), anchor.xi, 30).map_err(err)?;
    let seed = |s: f64| a1.value(1, c(s));
    let grid = ContractionGrid { nx: 48, ns: 48, ..ContractionGrid::default() };
    let rep = contraction_check(&ctx, &grid, 12, &seed, Some(&series)).map_err(err)?;
    ensure(rep.ratios.len() >= 2, || "too few iterations above the rounding floor".into())?;
    ensure(rep.max_ratio <= 0.6, || format!("ratio {:.3} > 0.6", rep.max_ratio))?;
    let taylor = rep.taylor_check.iter().map(|(_, f, t)| (f - t).norm()).fold(0.0, f64::max);
    ensure(taylor <= 1e-4, || format!("small-t mismatch {taylor:.3e}"))?;
    Ok(format!("ratios {:?}, max {:.3}, small-t mismatch {taylor:.1e}", rep.ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>(), rep.max_ratio))
}

fn criterion_8() -> Outcome {
    let u = c(40.0);
    let bz: Vec<C64> = (0..10).map(|k| c(1.3 + 0.25 * k as f64)).collect();
    let mz: Vec<C64> = (0..10).map(|k| c(2.0 + 0.25 * k as f64)).collect();
    let pz: Vec<C64> = (0..10).map(|k| C64::new(-1.0 + 0.4 * k as f64, 1.0).sqrt() * 2.0 + 1.0).collect();
    let mut worst = 0.0f64;
    for sign in [Sign::Minus, Sign::Plus] {
        for r in bessel_residuals(u, c(0.0), &bz, sign, Method::Borel).map_err(err)? {
            worst = worst.max(r.relative);
            ensure(r.relative <= 1e-6, || format!("Bessel {sign} z = {}: {:.3e}", r.z, r.relative))?;
        }
        let zs = if sign == Sign::Minus { &mz } else { &pz };
        for r in oscillator_residuals(u, c(0.0), 1, zs, sign, Method::Borel).map_err(err)? {
            worst = worst.max(r.relative);
            ensure(r.relative <= 1e-6, || format!("oscillator {sign} z = {}: {:.3e}", r.z, r.relative))?;
        }
    }
    Ok(format!("40 points, max relative residual {worst:.2e}"))
}

fn main() {
    let mut failed = 0;
    let mut report = |id: usize, name: &str, limit: f64, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        let (ok, detail) = match out {
            Ok(d) if secs <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!("{} [{id}] {name} ({secs:.2} s / {limit:.1} s): {detail}", if ok { "PASS" } else { "FAIL" });
    };
    report(1, "golden polynomials", 1.0, &mut criterion_1);
    let t = Instant::now();
    let g = grids();
    let setup_secs = t.elapsed().as_secs_f64();
    match g {
        Ok(g) => {
            report(2, "Hankel reproduction", 30.0 - setup_secs, &mut || criterion_2(&g));
            report(3, "bound validity sweep", 60.0 - setup_secs, &mut || criterion_3(&g));
        }
        Err(e) => {
            report(2, "Hankel reproduction", 30.0, &mut || Err(e.clone()));
            report(3, "bound validity sweep", 60.0, &mut || Err(e.clone()));
        }
    }
    report(4, "factorial vs Borel", 30.0, &mut criterion_4);
    report(5, "route equalities", 20.0, &mut criterion_5);
    report(6, "Gevrey certificate", 30.0, &mut criterion_6);
    report(7, "contraction", 60.0, &mut criterion_7);
    report(8, "ODE residuals", 10.0, &mut criterion_8);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
