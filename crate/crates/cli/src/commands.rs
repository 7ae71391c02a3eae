use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use fisher_modes::fisher::{fisher_matrix_with_tol, statistical_distance, FisherReport};
use fisher_modes::hydrogen::{appendix_fisher_check, AppendixCheck, HydrogenState};
use fisher_modes::modes::{
    beta_for_sigma, default_ball, kg_alpha_sq, make_free_mode, make_kg_mode, make_localized_mode, make_shell_mode,
    LocalizationConstraint, ModeFunction, ModeSpec,
};
use fisher_modes::schwarzschild::{solve_radial, RadialProblem};
use fisher_modes::{AngularIndex, Domain, Error, MetricSpec};
use serde_json::{json, Map, Value};

use crate::output::{csv_number, to_json, write_atomic};
use crate::{CliError, DistanceCmd, FamilyArg, Format, HydrogenCmd, ModeArgs, ModeCmd, Outcome, RadialCmd, VerifyCmd};

type CmdResult = Result<Outcome, CliError>;

fn num(v: f64) -> Value {
    // Non-finite values have no JSON number; the writer prints them as null.
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn metric_for(rs: f64) -> Result<MetricSpec, Error> {
    if rs == 0.0 {
        Ok(MetricSpec::minkowski())
    } else {
        MetricSpec::schwarzschild(rs)
    }
}

struct Built {
    mode: ModeFunction,
    sigma: Option<(f64, f64)>,
}

fn build_mode(a: &ModeArgs) -> Result<Built, CliError> {
    let idx = AngularIndex::new(a.ell, a.m)?;
    if a.mu.is_some() && a.family != FamilyArg::Free {
        return Err(CliError::Usage("--mu applies to the free family only".into()));
    }
    match a.family {
        FamilyArg::Free => {
            let n = a.n.unwrap_or(1);
            let dom = default_ball(idx, n, a.rbox)?;
            if let Some(mu) = a.mu {
                if a.eta.is_some() {
                    return Err(CliError::Usage("--mu fixes eta; drop --eta".into()));
                }
                let alpha_sq = kg_alpha_sq(mu, a.hbar, a.c);
                return Ok(Built { mode: make_kg_mode(idx, n, alpha_sq, dom)?, sigma: None });
            }
            let eta = a.eta.unwrap_or(0.0);
            // Without --alpha-sq any oscillatory request will do: the box fixes the value.
            let alpha_sq = a.alpha_sq.unwrap_or(1.0 - eta * eta);
            Ok(Built { mode: make_free_mode(ModeSpec::free(eta, idx, alpha_sq, n), dom)?, sigma: None })
        }
        FamilyArg::Localized => {
            let n = a.n.unwrap_or(0);
            let eta = a.eta.unwrap_or(0.0);
            let beta = match (a.beta, a.sigma) {
                (Some(b), _) => b,
                (None, Some(s)) => beta_for_sigma(s, a.ell, n)?,
                (None, None) => 1.0,
            };
            if !(beta > 0.0) {
                return Err(Error::InvalidParameter { name: "beta", reason: "localized modes need beta > 0" }.into());
            }
            let mut spec = ModeSpec::localized(eta, idx, beta, n);
            if let Some(req) = a.alpha_sq {
                spec.alpha_sq = req;
            }
            let sigma = a.sigma.unwrap_or(1.0 / beta.sqrt());
            let constraint = LocalizationConstraint::new(sigma)?;
            let mode = make_localized_mode(spec, constraint)?;
            let report = match a.sigma {
                Some(s) => Some((s, constraint.ratio(&mode)?)),
                None => None,
            };
            Ok(Built { mode, sigma: report })
        }
        FamilyArg::Shell => {
            let metric = MetricSpec::schwarzschild(a.rs)?;
            let r_in = a.rin.unwrap_or(1.5 * a.rs);
            let r_out = a.rout.unwrap_or(10.0 * a.rs);
            let eta = a.eta.unwrap_or(0.0);
            let mode = make_shell_mode(metric, eta, idx, r_in, r_out, a.n.unwrap_or(1), a.rel_tol)?;
            Ok(Built { mode, sigma: None })
        }
    }
}

fn quadrature_domain(a: &ModeArgs, base: &Domain) -> Result<Domain, Error> {
    let dom = Domain {
        n_r: a.n_r.unwrap_or(base.n_r),
        n_theta: a.n_theta.unwrap_or(base.n_theta),
        n_phi: a.n_phi.unwrap_or(base.n_phi),
        ..*base
    };
    dom.validate()?;
    Ok(dom)
}

fn metric_json(m: &MetricSpec) -> Value {
    json!({ "r_s": num(m.r_s()), "c": num(m.c()) })
}

fn mode_record(mode: &ModeFunction) -> Map<String, Value> {
    let s = mode.spec();
    let mut rec = Map::new();
    rec.insert("family".into(), json!(mode.family().name()));
    rec.insert("eta".into(), num(s.eta));
    rec.insert("ell".into(), json!(s.idx.ell()));
    rec.insert("m".into(), json!(s.idx.m()));
    rec.insert("alpha_sq".into(), num(s.alpha_sq));
    rec.insert("beta".into(), num(s.beta));
    rec.insert("n_radial".into(), json!(s.n_radial));
    rec.insert("norm".into(), num(s.norm));
    rec.insert("metric".into(), metric_json(mode.metric()));
    rec.insert("domain".into(), to_value(mode.domain()));
    rec
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn mode(cmd: &ModeCmd) -> CmdResult {
    if cmd.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let built = build_mode(&cmd.mode)?;
    let mode = &built.mode;
    let dom = mode.domain();
    let mut csv = String::from("r,R,dR_dr\n");
    let last = (cmd.samples - 1) as f64;
    for i in 0..cmd.samples {
        let t = i as f64 / last;
        let r = if i + 1 == cmd.samples { dom.r_max } else { dom.r_min + t * (dom.r_max - dom.r_min) };
        let (v, d) = mode.radial(r)?;
        let _ = writeln!(csv, "{},{},{}", csv_number(r), csv_number(v), csv_number(d));
    }
    let mut rec = mode_record(mode);
    if let Some((sigma, ratio)) = built.sigma {
        rec.insert("sigma_r".into(), num(sigma));
        rec.insert("sigma_ratio".into(), num(ratio));
    }
    write_atomic(&with_suffix(&cmd.out, "csv"), &csv)?;
    write_atomic(&with_suffix(&cmd.out, "json"), &to_json(&Value::Object(rec)))?;
    Ok(Outcome::Done)
}

fn report_json(report: &FisherReport, mode: &ModeFunction) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("mode".into(), Value::Object(mode_record(mode)));
    let full = to_value(report);
    for key in ["domain", "norm", "entries", "weighted", "expected", "residuals", "imag_parts", "tol"] {
        out.insert(key.into(), full[key].clone());
    }
    out.insert("max_off_diagonal".into(), num(report.max_off_diagonal()));
    out
}

const INTEGRALS: [&str; 3] = ["|d_r Psi|^2", "|d_theta Psi|^2", "|d_phi Psi|^2"];

fn appendix_rows(check: &AppendixCheck) -> Vec<Value> {
    (0..3)
        .map(|i| {
            json!({
                "integral": INTEGRALS[i],
                "reference": check.reference.map_or(Value::Null, |r| num(r[i])),
                "computed": num(check.lhs[i]),
                "multiplier_side": num(check.rhs[i]),
                "residual": num(check.residuals[i]),
                "reference_residual": check.reference_residuals.map_or(Value::Null, |r| num(r[i])),
            })
        })
        .collect()
}

fn hydrogen_state(nlm: &[i64], a: f64) -> Result<HydrogenState, CliError> {
    let n = u32::try_from(nlm[0]).map_err(|_| CliError::Usage("hydrogen N must be a positive integer".into()))?;
    let l = u32::try_from(nlm[1]).map_err(|_| CliError::Usage("hydrogen L must be >= 0".into()))?;
    let m = i32::try_from(nlm[2]).map_err(|_| CliError::Usage("hydrogen M out of range".into()))?;
    Ok(HydrogenState::new(n, AngularIndex::new(l, m)?, a)?)
}

pub fn verify(cmd: &VerifyCmd) -> CmdResult {
    if !(cmd.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let mut out;
    let pass;
    if let Some(nlm) = &cmd.hydrogen {
        let state = hydrogen_state(nlm, cmd.a)?;
        let mode = state.mode()?;
        let dom = quadrature_domain(&cmd.mode, &state.default_domain()?)?;
        let report = fisher_matrix_with_tol(&mode, &dom, cmd.tol)?;
        let check = appendix_fisher_check(&state, &dom)?;
        pass = report.pass() && check.pass(cmd.tol);
        out = report_json(&report, &mode);
        let mut h = Map::new();
        h.insert("rows".into(), Value::Array(appendix_rows(&check)));
        h.insert("metric_factor".into(), check.metric_factor.map_or(Value::Null, num));
        h.insert("pass".into(), json!(check.pass(cmd.tol)));
        out.insert("hydrogen".into(), Value::Object(h));
    } else {
        let built = build_mode(&cmd.mode)?;
        let dom = quadrature_domain(&cmd.mode, built.mode.domain())?;
        let report = fisher_matrix_with_tol(&built.mode, &dom, cmd.tol)?;
        pass = report.pass();
        out = report_json(&report, &built.mode);
    }
    out.insert("pass".into(), json!(pass));
    write_atomic(&cmd.out, &to_json(&Value::Object(out)))?;
    println!("pass={pass}");
    Ok(if pass { Outcome::Done } else { Outcome::CheckFailed })
}

pub fn radial(cmd: &RadialCmd) -> CmdResult {
    let metric = metric_for(cmd.rs)?;
    let r_start = match (cmd.rstart, cmd.near_horizon) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --rstart or --near-horizon".into())),
        (Some(r), None) => r,
        (None, Some(delta)) => cmd.rs * (1.0 + delta),
        (None, None) => return Err(CliError::Usage("--rstart or --near-horizon is required".into())),
    };
    let mut prob = RadialProblem {
        metric,
        eta_prime: cmd.eta,
        ell: cmd.ell,
        alpha_prime_sq: cmd.alpha_sq,
        r_start,
        r_end: cmd.rend,
        init_value: cmd.init_value,
        init_slope: cmd.init_slope,
    };
    prob.validate()?;
    if let Some(delta) = cmd.near_horizon {
        prob = prob.starting_near_horizon(delta)?;
    }
    let sol = solve_radial(&prob, cmd.rel_tol)?;
    let text = match cmd.format {
        Format::Csv => {
            let mut csv = format!(
                "# rs={} eta={} ell={} alpha_sq={} rstart={} rend={} init_value={} init_slope={} rel_tol={} rel_tol_used={}\n",
                csv_number(cmd.rs),
                csv_number(prob.eta_prime),
                prob.ell,
                csv_number(prob.alpha_prime_sq),
                csv_number(prob.r_start),
                csv_number(prob.r_end),
                csv_number(prob.init_value),
                csv_number(prob.init_slope),
                csv_number(cmd.rel_tol),
                csv_number(sol.rel_tol),
            );
            csv.push_str("r,R,dR_dr,residual\n");
            for i in 0..sol.grid.len() {
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    csv_number(sol.grid[i]),
                    csv_number(sol.values[i]),
                    csv_number(sol.slopes[i]),
                    csv_number(sol.residuals[i])
                );
            }
            csv
        }
        Format::Json => {
            let col = |v: &[f64]| Value::Array(v.iter().map(|x| num(*x)).collect());
            to_json(&json!({
                "problem": to_value(&prob),
                "rel_tol": num(cmd.rel_tol),
                "rel_tol_used": num(sol.rel_tol),
                "max_residual": num(sol.max_residual),
                "steps": sol.step_count(),
                "r": col(&sol.grid),
                "R": col(&sol.values),
                "dR_dr": col(&sol.slopes),
                "residual": col(&sol.residuals),
            }))
        }
    };
    write_atomic(&cmd.out, &text)?;
    println!("max_residual={:.16e}", sol.max_residual);
    Ok(Outcome::Done)
}

pub fn hydrogen(cmd: &HydrogenCmd) -> CmdResult {
    let state = hydrogen_state(&[i64::from(cmd.n), i64::from(cmd.ell), i64::from(cmd.m)], cmd.a)?;
    let check = appendix_fisher_check(&state, &state.default_domain()?)?;
    let pass = check.pass(cmd.tol);
    println!("integral,reference,computed,multiplier_side,residual");
    for i in 0..3 {
        let reference = check.reference.map_or(String::new(), |r| format!("{:.16e}", r[i]));
        println!(
            "{},{},{:.16e},{:.16e},{:.3e}",
            INTEGRALS[i], reference, check.lhs[i], check.rhs[i], check.residuals[i]
        );
    }
    if let Some(f) = check.metric_factor {
        println!("metric_factor={f:.16e}");
    }
    println!("pass={pass}");
    if let Some(path) = &cmd.out {
        let doc = json!({
            "state": { "n": cmd.n, "ell": cmd.ell, "m": cmd.m, "a": num(cmd.a) },
            "norm": num(check.norm),
            "rows": appendix_rows(&check),
            "metric_factor": check.metric_factor.map_or(Value::Null, num),
            "pass": pass,
        });
        write_atomic(path, &to_json(&doc))?;
    }
    Ok(if pass { Outcome::Done } else { Outcome::CheckFailed })
}

pub fn distance(cmd: &DistanceCmd) -> CmdResult {
    let d = statistical_distance(&cmd.a, &cmd.b)?;
    match cmd.format {
        Format::Csv => println!("{d:.16e}"),
        Format::Json => print!("{}", to_json(&json!({ "distance": num(d) }))),
    }
    Ok(Outcome::Done)
}
