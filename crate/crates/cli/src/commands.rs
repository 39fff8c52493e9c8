//! The subcommands, each producing a table.

use crate::output::{num, re_im, Table};
use crate::{App, EquationArgs, Failure, Outcome, OutputArgs, SignArg};
use borel_wkb::apps::bessel::{self, BesselInstance, HankelKind};
use borel_wkb::apps::oracle::oracle_bessel;
use borel_wkb::apps::oscillator::{self, OscillatorInstance};
use borel_wkb::apps::residual::oscillator_residuals;
use borel_wkb::apps::Method;
use borel_wkb::borel::{borel_series, SumOptions};
use borel_wkb::bounds::BoundSetup;
use borel_wkb::coeffs::{bessel_table, oscillator_table, TABLE_BITS};
use borel_wkb::factorial::{b_from_a, b_recursive_poly, default_omega, default_sigma, eval_factorial_series, TailInputs};
use borel_wkb::numerics::bigfixed::BigFixedC;
use borel_wkb::poly::eval_fixed_big;
use borel_wkb::{BorelSummation, CoeffEntry, CoeffTable, FactorialSeriesExpansion, Sign, StirlingTable, WkbError, C64};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

type Run = Result<Outcome, Failure>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Config(msg()))
    }
}

fn check_u(u: C64) -> Result<(), Failure> {
    check(u.re > 0.0 && u.is_finite(), || format!("--u needs a positive real part (got {u})"))
}

fn eq_params(e: &EquationArgs) -> serde_json::Value {
    match e.app {
        App::Bessel => json!({ "app": "bessel", "kappa": re_im(e.kappa) }),
        App::Oscillator => json!({ "app": "oscillator", "lambda": re_im(e.lambda), "ell": e.ell }),
    }
}

fn cell_z(z: C64) -> Vec<String> {
    re_im(z).to_vec()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Var {
    /// Polynomials in p (Bessel only).
    P,
    /// Values at the points given by --z.
    Z,
}

#[derive(Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub eq: EquationArgs,
    /// Highest order n.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "p")]
    pub var: Var,
    /// Evaluation points for --var z (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub z: Vec<C64>,
    #[arg(long, value_enum, default_value = "plus")]
    pub sign: SignArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn oscillator_ray_table(e: &EquationArgs, z: C64, sign: Sign, n: usize) -> Result<(CoeffTable, C64), WkbError> {
    let anchor = borel_wkb::transform::compute_xi(&oscillator::potential(e.lambda, e.ell), z, None)?;
    let ctx = oscillator::ray_context(e.lambda, e.ell, &anchor, sign, n)?;
    Ok((oscillator_table(&ctx, e.lambda, e.ell, n)?, anchor.xi))
}

pub fn coeffs(a: &CoeffsArgs) -> Run {
    let sign: Sign = a.sign.into();
    let mut params = eq_params(&a.eq);
    params["n"] = json!(a.n);
    params["sign"] = json!(sign);
    match a.var {
        Var::P => {
            check(a.eq.app == App::Bessel, || "--var p is available for the Bessel application only".into())?;
            check(a.n <= 60, || format!("--n at most 60 for polynomial output (got {})", a.n))?;
            params["var"] = json!("p");
            let table = bessel_table(a.eq.kappa, sign, a.n);
            let mut t = Table::new("coeffs", params, &["n", "power", "re", "im", "exact"]);
            for (n, e) in table.entries.iter().enumerate() {
                if let CoeffEntry::Poly(p) = e {
                    for (k, c) in p.coeffs.iter().enumerate() {
                        let exact = p.exact.as_ref().map(|x| x[k].to_string()).unwrap_or_default();
                        t.push(vec![n.to_string(), k.to_string(), num(c.re), num(c.im), exact]);
                    }
                }
            }
            t.extra = Some(("table", table.to_json()));
            let summary = format!("coeffs: A_0..A_{} in p, {} rows", a.n, t.rows.len());
            Ok(Outcome { table: t, summary, violation: None })
        }
        Var::Z => {
            check(!a.z.is_empty(), || "--var z needs points via --z".into())?;
            check((1..=40).contains(&a.n), || format!("--n must lie in 1..=40 (got {})", a.n))?;
            params["var"] = json!("z");
            let rows: Vec<Vec<Vec<String>>> = a
                .z
                .par_iter()
                .map(|&z| -> Result<Vec<Vec<String>>, WkbError> {
                    let vals: Vec<C64> = match a.eq.app {
                        App::Bessel => {
                            let pt = borel_wkb::transform::compute_xi(&bessel::potential(a.eq.kappa), z, None)?;
                            let p = bessel::p_of(&pt);
                            let table = bessel_table(a.eq.kappa, sign, a.n);
                            (0..=a.n).map(|k| table.value(k, p)).collect()
                        }
                        App::Oscillator => {
                            let (table, _) = oscillator_ray_table(&a.eq, z, sign, a.n)?;
                            (0..=a.n).map(|k| table.value(k, C64::new(0.0, 0.0))).collect()
                        }
                    };
                    Ok(vals
                        .iter()
                        .enumerate()
                        .map(|(k, v)| [cell_z(z), vec![k.to_string(), num(v.re), num(v.im)]].concat())
                        .collect())
                })
                .collect::<Result<_, _>>()?;
            let mut t = Table::new("coeffs", params, &["z_re", "z_im", "n", "re", "im"]);
            rows.into_iter().flatten().for_each(|r| t.push(r));
            let summary = format!("coeffs: A_0..A_{} at {} points", a.n, a.z.len());
            Ok(Outcome { table: t, summary, violation: None })
        }
    }
}

#[derive(Args)]
pub struct SumArgs {
    #[command(flatten)]
    pub eq: EquationArgs,
    /// Points z (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub z: Vec<C64>,
    /// Large parameters u (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub u: Vec<C64>,
    /// Number of series terms.
    #[arg(long)]
    pub n: Option<usize>,
    /// Pade numerator degree.
    #[arg(long)]
    pub l: Option<usize>,
    /// Pade denominator degree.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_enum, default_value = "minus")]
    pub sign: SignArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn sum(a: &SumArgs) -> Run {
    let sign: Sign = a.sign.into();
    let n = a.n.unwrap_or(match a.eq.app {
        App::Bessel => bessel::BOREL_TERMS,
        App::Oscillator => oscillator::RAY_TERMS,
    });
    check((1..=60).contains(&n), || format!("--n must lie in 1..=60 (got {n})"))?;
    check(a.l.is_some() == a.m.is_some(), || "--l and --m go together".into())?;
    if let (Some(l), Some(m)) = (a.l, a.m) {
        check(l + m < n, || format!("--l + --m must be below --n (got {l} + {m}, n = {n})"))?;
    }
    for &u in &a.u {
        check_u(u)?;
    }
    let mut params = eq_params(&a.eq);
    params["n"] = json!(n);
    params["sign"] = json!(sign);
    params["l"] = json!(a.l);
    params["m"] = json!(a.m);

    let per_z: Vec<Vec<BorelSummation>> = a
        .z
        .par_iter()
        .map(|&z| -> Result<Vec<BorelSummation>, WkbError> {
            let (table, at, xi, d) = match a.eq.app {
                App::Bessel => {
                    let inst = BesselInstance::new(C64::new(1.0, 0.0), a.eq.kappa, z)?;
                    let d = inst.domain(sign)?.d;
                    (bessel_table(a.eq.kappa, sign, n), inst.p, inst.point.xi, d)
                }
                App::Oscillator => {
                    let (table, xi) = oscillator_ray_table(&a.eq, z, sign, n)?;
                    let d = borel_wkb::equation::RayDomain::new(xi, sign, &oscillator::EXCLUDED, None)?.d;
                    (table, C64::new(0.0, 0.0), xi, d)
                }
            };
            let series = borel_series(&table, at, xi, n)?;
            let opts = SumOptions { l: a.l, m: a.m, d, ..SumOptions::default() };
            a.u.iter().map(|&u| BorelSummation::compute(&series, u, &opts)).collect()
        })
        .collect::<Result<_, _>>()?;

    let mut t = Table::new(
        "sum",
        params,
        &["z_re", "z_im", "u_re", "u_im", "value_re", "value_im", "err_estimate", "pade_l", "pade_m", "t_max"],
    );
    let mut dumps = Vec::new();
    for (z, sums) in a.z.iter().zip(&per_z) {
        for s in sums {
            t.push(
                [
                    cell_z(*z),
                    cell_z(s.u),
                    cell_z(s.value),
                    vec![num(s.err_estimate), s.pade_l.to_string(), s.pade_m.to_string(), num(s.t_max)],
                ]
                .concat(),
            );
            dumps.push(s.to_json());
        }
    }
    t.extra = Some(("summations", json!(dumps)));
    let summary = format!("sum: {} values", t.rows.len());
    Ok(Outcome { table: t, summary, violation: None })
}

#[derive(Args)]
pub struct FactorialArgs {
    #[command(flatten)]
    pub eq: EquationArgs,
    #[arg(long)]
    pub z: C64,
    #[arg(long)]
    pub u: C64,
    /// Largest number of terms N.
    #[arg(long, default_value_t = 30)]
    pub n_max: usize,
    /// Factorial series parameter; 1.25 pi / (4d) when absent.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Tail parameter; min(omega, Re u) / 2 when absent.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, value_enum, default_value = "minus")]
    pub sign: SignArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn factorial(a: &FactorialArgs) -> Run {
    let sign: Sign = a.sign.into();
    check_u(a.u)?;
    check((1..=80).contains(&a.n_max), || format!("--n-max must lie in 1..=80 (got {})", a.n_max))?;
    if let Some(w) = a.omega {
        check(w > 0.0 && w.is_finite(), || format!("--omega must be positive (got {w})"))?;
    }
    if let Some(s) = a.sigma {
        check(s > 0.0 && s.is_finite(), || format!("--sigma must be positive (got {s})"))?;
    }

    let (exp, setup): (FactorialSeriesExpansion, BoundSetup) = match a.eq.app {
        App::Bessel => {
            let inst = BesselInstance::new(a.u, a.eq.kappa, a.z)?;
            let d = inst.domain(sign)?.d;
            let omega = a.omega.unwrap_or_else(|| default_omega(d));
            let polys = b_recursive_poly(a.eq.kappa, omega, sign, a.n_max, TABLE_BITS);
            let at = BigFixedC::from_c64(inst.p, TABLE_BITS);
            let b = polys.iter().map(|c| eval_fixed_big(c, &at).to_c64()).collect();
            let exp = FactorialSeriesExpansion::new(omega, sign, b, inst.point.xi, d)?;
            (exp, bessel::bound_setup(a.eq.kappa, a.z, sign)?)
        }
        App::Oscillator => {
            let (setup, table) = oscillator::bound_setup(a.eq.lambda, a.eq.ell, a.z, sign, a.n_max)?;
            let omega = a.omega.unwrap_or_else(|| default_omega(setup.d));
            let avals: Vec<C64> = (1..=a.n_max).map(|k| table.value(k, C64::new(0.0, 0.0))).collect();
            let b = b_from_a(&avals, omega, &StirlingTable::new(a.n_max))?;
            (FactorialSeriesExpansion::new(omega, sign, b, setup.xi, setup.d)?, setup)
        }
    };
    check(exp.omega_admissible(), || format!("--omega must exceed pi/(4d) = {:.6}", std::f64::consts::PI / (4.0 * exp.d)))?;
    let sigma = a.sigma.unwrap_or_else(|| default_sigma(exp.omega, a.u));
    let tail = match setup.c_at(exp.r()) {
        Ok(c) => Some(TailInputs { c: c.c, v: setup.v1 / sigma, weight: setup.weight, sigma }),
        Err(WkbError::TailNotNegligible(_)) => None,
        Err(e) => return Err(e.into()),
    };

    let mut params = eq_params(&a.eq);
    params["z"] = json!(re_im(a.z));
    params["u"] = json!(re_im(a.u));
    params["omega"] = json!(num(exp.omega));
    params["sigma"] = json!(num(sigma));
    params["d"] = json!(num(exp.d));
    params["sign"] = json!(sign);
    let mut t = Table::new("factorial", params, &["N", "partial_sum_re", "partial_sum_im", "tail_bound"]);
    let mut certified = 0;
    for n in 1..=a.n_max {
        let v = eval_factorial_series(&exp, a.u, n, tail.as_ref())?;
        certified += v.certified as usize;
        t.push(vec![n.to_string(), num(v.value.re), num(v.value.im), num(v.tail_bound)]);
    }
    let summary = format!("factorial: N = 1..{}, omega = {:.6}, {certified} certified tails", a.n_max, exp.omega);
    Ok(Outcome { table: t, summary, violation: None })
}

#[derive(Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub eq: EquationArgs,
    #[arg(long)]
    pub z: C64,
    #[arg(long)]
    pub u: C64,
    /// Largest truncation order N.
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    /// Radius r of the coefficient estimate; the best of a fixed set of fractions of d when absent.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, value_enum, default_value = "minus")]
    pub sign: SignArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn bounds(a: &BoundsArgs) -> Run {
    let sign: Sign = a.sign.into();
    check_u(a.u)?;
    check((1..=40).contains(&a.n_max), || format!("--n-max must lie in 1..=40 (got {})", a.n_max))?;
    if let Some(r) = a.r {
        check(r > 0.0, || format!("--r must be positive (got {r})"))?;
    }
    let mut rows = Vec::new();
    let mut violation = None;
    match a.eq.app {
        App::Bessel => {
            let setup = bessel::bound_setup(a.eq.kappa, a.z, sign)?;
            let inst = BesselInstance::new(a.u, a.eq.kappa, a.z)?;
            let kind = if sign == Sign::Minus { HankelKind::H2 } else { HankelKind::H1 };
            let truth = oracle_bessel(a.u + a.eq.kappa, a.u * a.z)
                .ok()
                .map(|v| inst.eta_from_hankel(kind, if kind == HankelKind::H2 { v.h2 } else { v.h1 }));
            for n in 1..=a.n_max {
                let rem = match truth {
                    Some(t) => Some((t - bessel::eta(&inst, sign, Method::Asymptotic(n))?.value).norm()),
                    None => None,
                };
                let rep = setup.report(a.u, n, a.r, rem)?;
                if rep.holds() == Some(false) && violation.is_none() {
                    violation = Some(format!("N = {n}: remainder {:e} > bound {:e}", rem.unwrap_or(f64::NAN), rep.bound));
                }
                rows.push(rep);
            }
        }
        App::Oscillator => {
            let (setup, _) = oscillator::bound_setup(a.eq.lambda, a.eq.ell, a.z, sign, oscillator::RAY_TERMS)?;
            for n in 1..=a.n_max {
                let rep = match setup.report(a.u, n, a.r, None) {
                    Err(WkbError::TailNotNegligible(_)) if a.r.is_none() => setup.report(a.u, n, Some(0.1 * setup.d), None)?,
                    other => other?,
                };
                rows.push(rep);
            }
        }
    }
    let mut params = eq_params(&a.eq);
    params["z"] = json!(re_im(a.z));
    params["u"] = json!(re_im(a.u));
    params["sign"] = json!(sign);
    let mut t = Table::new("bounds", params, &["N", "u_re", "u_im", "r", "sigma", "C", "C_upper", "V", "bound", "true_rem", "holds"]);
    for rep in &rows {
        t.push(
            [
                vec![rep.n.to_string()],
                cell_z(rep.u),
                vec![
                    num(rep.r),
                    num(rep.sigma),
                    num(rep.c),
                    num(rep.c_upper),
                    num(rep.v),
                    num(rep.bound),
                    rep.true_remainder.map(num).unwrap_or_default(),
                    rep.holds().map(|h| h.to_string()).unwrap_or_default(),
                ],
            ]
            .concat(),
        );
    }
    let checked = rows.iter().filter(|r| r.holds().is_some()).count();
    let summary = format!("bounds: N = 1..{}, {checked} rows checked against the reference", a.n_max);
    Ok(Outcome { table: t, summary, violation })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    H1,
    H2,
}

#[derive(Args)]
pub struct CompareArgs {
    #[arg(long, default_value = "0")]
    pub kappa: C64,
    /// Orders nu (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
    pub nu: Vec<f64>,
    /// Points z > 1 (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "1.5,2,3")]
    pub z: Vec<f64>,
    /// Truncation orders N (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6,7,8")]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value = "h2")]
    pub kind: KindArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn compare(a: &CompareArgs) -> Run {
    for &nu in &a.nu {
        check(nu > 0.0 && nu.is_finite(), || format!("--nu must be positive (got {nu})"))?;
    }
    for &z in &a.z {
        check(z > 1.0 && z.is_finite(), || format!("--z must exceed 1 (got {z})"))?;
    }
    for &n in &a.n {
        check((1..=40).contains(&n), || format!("--n must lie in 1..=40 (got {n})"))?;
    }
    check(!a.nu.is_empty() && !a.z.is_empty() && !a.n.is_empty(), || "empty grid".into())?;
    let kind = match a.kind {
        KindArg::H1 => HankelKind::H1,
        KindArg::H2 => HankelKind::H2,
    };
    let sign = kind.sign();
    let setups: Vec<BoundSetup> =
        a.z.par_iter().map(|&z| bessel::bound_setup(a.kappa, C64::new(z, 0.0), sign)).collect::<Result<_, _>>()?;
    let cases: Vec<(f64, usize)> = a.nu.iter().flat_map(|&nu| (0..a.z.len()).map(move |j| (nu, j))).collect();
    let rows: Vec<Vec<(Vec<String>, bool)>> = cases
        .par_iter()
        .map(|&(nu, j)| -> Result<_, WkbError> {
            let z = a.z[j];
            let u = C64::new(nu, 0.0);
            let inst = BesselInstance::new(u, a.kappa, C64::new(z, 0.0))?;
            let v = oracle_bessel(u + a.kappa, u * z)?;
            let truth = if kind == HankelKind::H2 { v.h2 } else { v.h1 };
            a.n.iter()
                .map(|&n| {
                    let h = bessel::hankel_wkb(&inst, Method::Asymptotic(n), kind)?;
                    let rel = ((h - truth) / truth).norm();
                    let s_n = bessel::eta(&inst, sign, Method::Asymptotic(n))?.value;
                    let bound = setups[j].report(u, n, None, None)?.bound;
                    let room = (s_n + 1.0).norm() - bound;
                    let rel_bound = if room > 0.0 { bound / room } else { f64::INFINITY };
                    let row = vec![num(nu), num(z), n.to_string(), num(h.re), num(h.im), num(truth.re), num(truth.im), num(rel), num(rel_bound)];
                    Ok((row, rel <= rel_bound))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;

    let params = json!({ "kappa": re_im(a.kappa), "kind": format!("{:?}", a.kind).to_lowercase() });
    let mut t = Table::new("bessel-compare", params, &["nu", "z", "N", "wkb_re", "wkb_im", "oracle_re", "oracle_im", "rel_err", "thm2_bound"]);
    let mut breaches = 0;
    let mut first = None;
    for (row, ok) in rows.into_iter().flatten() {
        if !ok {
            breaches += 1;
            first.get_or_insert_with(|| format!("nu = {}, z = {}, N = {}", row[0], row[1], row[2]));
        }
        t.push(row);
    }
    let summary = format!("bessel-compare: {} cases, {breaches} above the bound", t.rows.len());
    Ok(Outcome { table: t, summary, violation: first.map(|f| format!("{breaches} cases, first at {f}")) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Asymptotic,
    Borel,
    Factorial,
}

#[derive(Args)]
pub struct OscillatorArgs {
    #[arg(long, default_value = "0")]
    pub lambda: C64,
    #[arg(long, default_value_t = 0)]
    pub ell: u32,
    #[arg(long)]
    pub u: C64,
    /// Points z (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub z: Vec<C64>,
    #[arg(long, value_enum, default_value = "borel")]
    pub method: MethodArg,
    /// Truncation order N for --method asymptotic.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "minus")]
    pub sign: SignArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn oscillator(a: &OscillatorArgs) -> Run {
    let sign: Sign = a.sign.into();
    check_u(a.u)?;
    let method = match a.method {
        MethodArg::Asymptotic => {
            let n = a.n.ok_or_else(|| Failure::Config("--method asymptotic needs --n".into()))?;
            check((1..=20).contains(&n), || format!("--n must lie in 1..=20 (got {n})"))?;
            Method::Asymptotic(n)
        }
        MethodArg::Borel => Method::Borel,
        MethodArg::Factorial => Method::Factorial,
    };
    let rows: Vec<Vec<String>> = a
        .z
        .par_iter()
        .map(|&z| -> Result<Vec<String>, WkbError> {
            let inst = OscillatorInstance::new(a.u, a.lambda, a.ell, z)?;
            let mu = oscillator::oscillator_correction(&inst, method, sign)?;
            let w = inst.leading(sign) * (mu.value + 1.0);
            let res = oscillator_residuals(a.u, a.lambda, a.ell, &[z], sign, method)?[0].relative;
            Ok([cell_z(z), cell_z(mu.value), cell_z(w), vec![num(mu.err_estimate), num(res)]].concat())
        })
        .collect::<Result<_, _>>()?;
    let params = json!({
        "lambda": re_im(a.lambda),
        "ell": a.ell,
        "u": re_im(a.u),
        "method": format!("{method:?}").to_lowercase(),
        "sign": sign,
    });
    let mut t = Table::new("oscillator", params, &["z_re", "z_im", "mu_re", "mu_im", "w_re", "w_im", "err_estimate", "residual"]);
    let worst = rows.iter().map(|r| r[7].parse::<f64>().unwrap_or(f64::NAN)).fold(0.0, f64::max);
    rows.into_iter().for_each(|r| t.push(r));
    let summary = format!("oscillator: {} points, max relative residual {worst:.2e}", a.z.len());
    Ok(Outcome { table: t, summary, violation: None })
}
