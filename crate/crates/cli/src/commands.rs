use divsum_core::identities::{all_identity_specs, evaluate_identity, partial_sums as core_partial_sums, tail_bound};
use divsum_core::kernels::constraint_poly_at;
use divsum_core::mellin::{j_closed, j_quadrature, xi_approx_via_tail, xi_pair_direct, xi_pair_integral, LineIntegralSpec};
use divsum_core::precision::to_sig_string;
use divsum_core::recovery::{precision_policy, solve_divisors};
use divsum_core::{BigComplex, BigReal, Error, KernelSpec, PrecisionContext, Variant};

use crate::config::{parse_list, split_complex, Digits};
use crate::report::{verdict, Item, Report};
use crate::{
    CliError, KernelDumpArgs, MellinCheckArgs, PartialSumsArgs, RecoverArgs, Settings, VerifyArgs, XiCheckArgs,
};

const ERR_SIG: usize = 6;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn list(s: &str) -> Result<Vec<u64>, CliError> {
    parse_list(s).map_err(usage)
}

fn to_u32(v: Vec<u64>) -> Result<Vec<u32>, CliError> {
    v.into_iter().map(|x| u32::try_from(x).map_err(|_| usage(format!("{x} is too large")))).collect()
}

/// Digits for sums whose terms fall like e^{-2πn} down to n = trunc.
fn exp_sum_digits(trunc: u64) -> u32 {
    let d = (2.0 * std::f64::consts::PI * (trunc + 1) as f64 / std::f64::consts::LN_10).ceil() as u32;
    (d + 30).max(40)
}

fn real(prec: u32, s: &str) -> Result<BigReal, CliError> {
    let p = BigReal::parse(s.trim()).map_err(|_| usage(format!("not a number: {s:?}")))?;
    Ok(BigReal::with_val(prec, p))
}

fn complex(prec: u32, s: &str) -> Result<BigComplex, CliError> {
    let (re, im) = split_complex(s).map_err(usage)?;
    Ok(BigComplex::new(real(prec, &re)?, real(prec, &im)?))
}

pub fn fmt_complex(z: &BigComplex, sig: usize) -> String {
    let re = to_sig_string(&z.re, sig);
    let im = to_sig_string(&BigReal::with_val(z.prec(), z.im.abs_ref()), sig);
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{re}{sign}{im}i")
}

fn fmt_err(x: f64) -> String {
    format!("{x:.*e}", ERR_SIG - 1)
}

/// Run at fixed digits, or in auto mode confirm every value at 1.5× the digits.
fn with_digits<F>(digits: Option<Digits>, default: u32, run: F) -> Result<Report, CliError>
where
    F: Fn(u32) -> Result<Report, CliError>,
{
    match digits.unwrap_or(Digits::Fixed(default)) {
        Digits::Fixed(d) => {
            let mut r = run(d)?;
            r.param("digits", d);
            Ok(r)
        }
        Digits::Auto => {
            let mut d = default.max(PrecisionContext::MIN_DIGITS);
            for _ in 0..5 {
                let hi = d + d / 2 + 10;
                match run(d).and_then(|lo| run(hi).map(|h| (lo, h))) {
                    Ok((lo, mut h)) => {
                        let same = lo.items.iter().zip(&h.items).all(|(x, y)| x.value == y.value);
                        if same {
                            h.param("digits", "auto");
                            return Ok(h);
                        }
                    }
                    Err(CliError::Core(Error::PrecisionInsufficient(_))) => {}
                    Err(e) => return Err(e),
                }
                d *= 2;
            }
            Err(CliError::Core(Error::PrecisionInsufficient(format!(
                "values not confirmed at {d} digits"
            ))))
        }
    }
}

fn family(name: &str) -> Result<Variant, CliError> {
    Variant::parse(name).ok_or_else(|| usage(format!("unknown family {name:?}")))
}

fn indexed(v: Variant) -> bool {
    matches!(v, Variant::Constraint | Variant::ConstraintHypergeometric | Variant::NormalizedQ)
}

fn spec_for(v: Variant, a: u32, k: Option<u32>) -> Result<KernelSpec, CliError> {
    if v == Variant::BesselA0 {
        return Ok(KernelSpec::bessel_a0());
    }
    Ok(KernelSpec::new(a, if indexed(v) { Some(k.unwrap_or(0)) } else { None }, v)?)
}

pub fn verify(args: &VerifyArgs, s: &Settings) -> Result<Report, CliError> {
    let f = &s.file;
    let name = f.pick(args.family.clone(), "family")?.unwrap_or_else(|| "cor3".into());
    let trunc = f.pick(args.trunc, "trunc")?.unwrap_or(40);
    let a_flag = f.pick(args.a.clone(), "a")?;
    let k_flag = f.pick(args.k.clone(), "k")?;
    let specs = if name == "all" {
        all_identity_specs(6)
    } else {
        let v = family(&name)?;
        let a_default = match v {
            Variant::BesselA0 => "0",
            Variant::HigherHomogeneous | Variant::HigherInhomogeneous => "7,9,11",
            _ => "1,3,5",
        };
        let a_list = to_u32(list(a_flag.as_deref().unwrap_or(a_default))?)?;
        if k_flag.is_some() && !indexed(v) {
            return Err(usage(format!("family {name} takes no --k")));
        }
        let k_list = to_u32(list(k_flag.as_deref().unwrap_or("0"))?)?;
        let mut out = Vec::new();
        for &a in &a_list {
            if indexed(v) {
                for &k in &k_list {
                    out.push(spec_for(v, a, Some(k))?);
                }
            } else {
                out.push(spec_for(v, a, None)?);
            }
        }
        out
    };
    let sig = s.sig;
    with_digits(s.digits, exp_sum_digits(trunc), |d| {
        let ctx = PrecisionContext::new(d)?;
        let mut r = Report::new("verify", d);
        r.param("family", &name);
        r.param("trunc", trunc);
        r.param("sig", sig);
        for spec in &specs {
            let rep = evaluate_identity(spec, trunc, &ctx)?;
            let target = BigReal::with_val(ctx.prec(), &rep.target);
            r.items.push(Item {
                id: spec.id(),
                value: to_sig_string(&rep.value, sig),
                target: Some(to_sig_string(&target, sig)),
                abs_error: Some(to_sig_string(&rep.abs_error, ERR_SIG)),
                tail_bound: Some(to_sig_string(&rep.tail_bound, ERR_SIG)),
                verdict: verdict(rep.verdict.is_pass()),
            });
        }
        Ok(r)
    })
}

pub fn recover(args: &RecoverArgs, s: &Settings) -> Result<Report, CliError> {
    let f = &s.file;
    let a = f.pick(args.a, "a")?.unwrap_or(1);
    let n = f.pick(args.n, "N")?.unwrap_or(20);
    if n < 2 {
        return Err(usage("--N must be at least 2"));
    }
    let n_max = n + 1;
    let sig = s.sig;
    with_digits(s.digits, precision_policy(n_max).1, |d| {
        let ctx = PrecisionContext::new(d)?;
        let res = solve_divisors(a, n_max, &ctx)?;
        let mut r = Report::new("recover", d);
        r.param("a", a);
        r.param("N", n);
        r.param("sig", sig);
        r.param("max_residual", to_sig_string(&res.max_residual, ERR_SIG));
        r.param("correct_prefix", res.correct_prefix());
        let mut rows = Vec::new();
        for (i, nn) in res.ns().enumerate() {
            let approx = to_sig_string(&res.approx[i], sig);
            let oracle = BigReal::with_val(ctx.prec(), &res.oracle[i]);
            let err = BigReal::with_val(ctx.prec(), &res.approx[i] - &oracle).abs();
            let ok = res.matches[i];
            rows.push(vec![
                nn.to_string(),
                approx.clone(),
                res.rounded[i].to_string(),
                res.oracle[i].to_string(),
                ok.to_string(),
            ]);
            r.items.push(Item {
                id: format!("sigma_{a}({nn})"),
                value: approx,
                target: Some(res.oracle[i].to_string()),
                abs_error: Some(to_sig_string(&err, ERR_SIG)),
                tail_bound: None,
                verdict: verdict(ok),
            });
        }
        let header = ["n", "approx", "rounded", "oracle", "match"].map(String::from).to_vec();
        r.table = Some((header, rows));
        Ok(r)
    })
}

pub fn partial_sums(args: &PartialSumsArgs, s: &Settings) -> Result<Report, CliError> {
    let f = &s.file;
    let name = f.pick(args.family.clone(), "family")?.unwrap_or_else(|| "bessel0".into());
    let v = family(&name)?;
    let a = f.pick(args.a, "a")?.unwrap_or(1);
    let k = f.pick(args.k, "k")?;
    let spec = spec_for(v, a, k)?;
    let cutoffs = list(&f.pick(args.cutoffs.clone(), "cutoffs")?.unwrap_or_else(|| "10,40,70,100,130".into()))?;
    let top = *cutoffs.iter().max().unwrap_or(&1);
    let sig = s.sig;
    with_digits(s.digits, exp_sum_digits(top), |d| {
        let ctx = PrecisionContext::new(d)?;
        let t = core_partial_sums(&spec, &cutoffs, &ctx)?;
        let mut r = Report::new("partial-sums", d);
        r.param("family", &name);
        r.param("cutoffs", cutoffs.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
        r.param("sig", sig);
        for (c, v) in t.cutoffs.iter().zip(&t.values) {
            let mut it = Item::data(format!("{}/N={c}", spec.id()), to_sig_string(v, sig));
            it.tail_bound = Some(to_sig_string(&tail_bound(&spec, *c, &ctx)?, ERR_SIG));
            r.items.push(it);
        }
        Ok(r)
    })
}

fn trim_decimal(s: String) -> String {
    if s.contains('.') && !s.contains('e') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

pub fn kernel_dump(args: &KernelDumpArgs, s: &Settings) -> Result<Report, CliError> {
    let f = &s.file;
    let a = f.pick(args.a, "a")?.unwrap_or(1);
    let k = f.pick(args.k, "k")?.unwrap_or(30);
    let from = f.pick(args.from.clone(), "from")?.unwrap_or_else(|| "1".into());
    let to = f.pick(args.to.clone(), "to")?.unwrap_or_else(|| "40".into());
    let step = f.pick(args.step.clone(), "step")?.unwrap_or_else(|| "0.5".into());
    let (lo, hi, h) = (real(128, &from)?, real(128, &to)?, real(128, &step)?);
    if h <= 0 || hi < lo {
        return Err(usage("kernel-dump needs --step > 0 and --to >= --from"));
    }
    let count = (BigReal::with_val(128, &hi - &lo) / &h).to_f64();
    let count = (count + 1e-9).floor() as u64 + 1;
    if count > 1_000_000 {
        return Err(usage("kernel-dump grid exceeds 10^6 points"));
    }
    let sig = s.sig;
    with_digits(s.digits, 40, |d| {
        let ctx = PrecisionContext::new(d)?;
        let p = ctx.prec();
        let (lo, h) = (real(p, &from)?, real(p, &step)?);
        let mut r = Report::new("kernel-dump", d);
        r.param("a", a);
        r.param("k", k);
        r.param("from", &from);
        r.param("to", &to);
        r.param("step", &step);
        r.param("sig", sig);
        let mut rows = Vec::new();
        for i in 0..count {
            let x = BigReal::with_val(p, &lo + BigReal::with_val(p, &h * i));
            let w = BigReal::with_val(p, -&x).exp();
            let v = constraint_poly_at(a, k, &x, &ctx)? * w;
            let xs = trim_decimal(to_sig_string(&x, 20));
            let vs = to_sig_string(&v, sig);
            rows.push(vec![xs.clone(), vs.clone()]);
            r.items.push(Item::data(format!("x={xs}"), vs));
        }
        r.table = Some((vec!["x".into(), "value".into()], rows));
        Ok(r)
    })
}

/// Quadrature tolerance: well below the reported one, within what `digits` can resolve.
fn quad_tol(tol: f64, digits: u32) -> f64 {
    (tol * 1e-5).max(10f64.powf(-(digits as f64) + 2.0))
}

pub fn xi_check(args: &XiCheckArgs, s: &Settings) -> Result<Report, CliError> {
    let f = &s.file;
    let a_s = f.pick(args.a.clone(), "a")?.unwrap_or_else(|| "1".into());
    let s0_s = f.pick(args.s0.clone(), "s0")?.unwrap_or_else(|| "0.5+2i".into());
    let sigma = f.pick(args.sigma, "sigma")?;
    let trunc = f.pick(args.trunc, "trunc")?.unwrap_or(60);
    let tol = f.pick(args.tol, "tol")?.unwrap_or(1e-15);
    let n_flag = f.pick(args.n.clone(), "N")?;
    let fe_tol = 1e-12;
    let sig = s.sig;
    with_digits(s.digits, 40, |d| {
        let ctx = PrecisionContext::new(d)?;
        let p = ctx.prec();
        let a = complex(p, &a_s)?;
        let s0 = complex(p, &s0_s)?;
        let odd = a.as_integer().filter(|k| matches!(k, 1 | 3 | 5)).map(|k| k as u32);
        let ns = match (&n_flag, odd) {
            (Some(_), None) => return Err(usage("the functional-equation check needs a in {1,3,5}")),
            (Some(l), Some(_)) => list(l)?,
            (None, Some(_)) => vec![3],
            (None, None) => vec![],
        };
        let mut fe = Vec::new();
        if let Some(ai) = odd {
            let s1 = &BigComplex::from_int(p, ai as i64 + 1) - &s0;
            for &n in &ns {
                let x0 = xi_approx_via_tail(n as usize, ai, &s0, None, &ctx)?;
                let x1 = xi_approx_via_tail(n as usize, ai, &s1, None, &ctx)?;
                let defect = (&x0.value - &x1.value).abs().to_f64() / x0.value.abs().to_f64().max(1.0);
                fe.push(Item {
                    id: format!("fe/a={ai}/N={n}/s0={s0_s}"),
                    value: fmt_complex(&x0.value, sig),
                    target: Some(fmt_complex(&x1.value, sig)),
                    abs_error: Some(fmt_err(defect)),
                    tail_bound: Some(fmt_err(fe_tol)),
                    verdict: verdict(defect < fe_tol),
                });
            }
        }
        let spec = LineIntegralSpec { sigma, tol: quad_tol(tol, d), ..LineIntegralSpec::default() };
        let res = xi_pair_integral(&a, &s0, &spec, trunc, &ctx)?;
        let direct = xi_pair_direct(&a, &s0, &ctx)?;
        let diff = (&res.value - &direct).abs().to_f64();
        let mut r = Report::new("xi-check", d);
        r.param("a", &a_s);
        r.param("s0", &s0_s);
        r.param("sigma", res.quad.sigma);
        r.param("trunc", trunc);
        r.param("tol", fmt_err(tol));
        r.param("sig", sig);
        r.items.push(Item {
            id: format!("pair/a={a_s}/s0={s0_s}"),
            value: fmt_complex(&res.value, sig),
            target: Some(fmt_complex(&direct, sig)),
            abs_error: Some(fmt_err(diff)),
            tail_bound: Some(fmt_err(res.error())),
            verdict: verdict(diff < tol),
        });
        r.items.extend(fe);
        Ok(r)
    })
}

pub fn mellin_check(args: &MellinCheckArgs, s: &Settings) -> Result<Report, CliError> {
    let f = &s.file;
    let a_list = to_u32(list(&f.pick(args.a.clone(), "a")?.unwrap_or_else(|| "1,3,5".into()))?)?;
    let n_list = list(&f.pick(args.n.clone(), "n")?.unwrap_or_else(|| "1,2,5,20".into()))?;
    let s0_text = f.pick(args.s0.clone(), "s0")?.unwrap_or_else(|| "0,0.5+2i,-1+0.3i".into());
    let s0_list: Vec<String> = s0_text.split(',').map(|x| x.trim().to_owned()).filter(|x| !x.is_empty()).collect();
    let tol = f.pick(args.tol, "tol")?.unwrap_or(1e-20);
    let sig = s.sig;
    with_digits(s.digits, 40, |d| {
        let ctx = PrecisionContext::new(d)?;
        let spec = LineIntegralSpec::default().with_tol(quad_tol(tol, d));
        let mut r = Report::new("mellin-check", d);
        r.param("tol", fmt_err(tol));
        r.param("sig", sig);
        for &a in &a_list {
            for &n in &n_list {
                for z in &s0_list {
                    let s0 = complex(ctx.prec(), z)?;
                    let j = j_closed(a, n, &s0, &ctx)?;
                    let q = j_quadrature(a, n, &s0, &spec, &ctx)?;
                    let rel = (&q.value - &j).abs().to_f64() / j.abs().to_f64().max(f64::MIN_POSITIVE);
                    r.items.push(Item {
                        id: format!("J/a={a}/n={n}/s0={z}"),
                        value: fmt_complex(&q.value, sig),
                        target: Some(fmt_complex(&j, sig)),
                        abs_error: Some(fmt_err(rel)),
                        tail_bound: Some(fmt_err(q.error / j.abs().to_f64().max(f64::MIN_POSITIVE))),
                        verdict: verdict(rel < tol),
                    });
                }
            }
        }
        Ok(r)
    })
}
