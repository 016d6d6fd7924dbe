use std::path::Path;

use qguess::bounds::{bound_suite, entropy_pack, BoundInputs, Side};
use qguess::criteria::{check_no_measurement, equal_probability_pairs};
use qguess::geo_uniform::{check_theorem5, trine_spec};
use qguess::guesswork::{self as gw, conditional_guesswork, error_probability};
use qguess::io::{group_check_to_json, parse_group_check, parse_povm, EnsembleFile};
use qguess::repro::run_checks;
use qguess::sdp::{certify, recover_povm, solve_med, solve_mgd, SolverOptions};
use qguess::search::{search_general, search_qubit};
use qguess::{fixtures, Ensemble, HermitianOperator, Povm};

use crate::report::Recorder;
use crate::{BoundsArgs, CheckArgs, CliError, FixtureName, MinGuessworkArgs};

fn read(rec: &mut Recorder, path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    rec.input(&bytes);
    String::from_utf8(bytes).map_err(|_| CliError::input(format!("{}: not UTF-8", path.display())))
}

fn load(rec: &mut Recorder, path: &Path) -> Result<(Ensemble, Option<Povm>), CliError> {
    let text = read(rec, path)?;
    let file = EnsembleFile::parse(&text)?;
    let e = file.ensemble()?;
    let m = file.povm()?;
    Ok((e, m))
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn guesswork(file: &Path, povm: Option<&Path>) -> Result<Recorder, CliError> {
    let mut rec = Recorder::new("guesswork");
    let (e, embedded) = load(&mut rec, file)?;
    let m = match povm {
        Some(p) => Some(parse_povm(&read(&mut rec, p)?)?),
        None => embedded,
    };
    rec.real("n", e.len() as f64);
    rec.real("dim", e.dim() as f64);
    match m {
        None => {
            let prior = e.prior();
            let g = gw::guesswork(&prior);
            let p = error_probability(&prior);
            rec.real("guesswork", g);
            rec.real("error_probability", p);
            rec.line(format!("G(X)     = {g}"));
            rec.line(format!("P_err(X) = {p}"));
        }
        Some(m) => {
            let report = conditional_guesswork(&e, &m)?;
            rec.real("guesswork", report.guesswork);
            rec.real("error_probability", report.error_prob);
            rec.line(format!("G(X|Π)     = {}", report.guesswork));
            rec.line(format!("P_err(X|Π) = {}", report.error_prob));
            rec.line(format!("{:>7}  {:>12}  {:>12}  {:>12}  order", "outcome", "weight", "G(X_π)", "P_err(X_π)"));
            let mut rows = Vec::new();
            for (j, o) in report.per_outcome.iter().enumerate() {
                let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.9}"));
                let order = o.strategy.as_ref().map_or("-".to_string(), |s| s.to_string());
                rec.line(format!(
                    "{j:>7}  {:>12.9}  {:>12}  {:>12}  {order}",
                    o.weight,
                    fmt(o.posterior_guesswork),
                    fmt(o.posterior_error)
                ));
                rows.push(serde_json::json!({
                    "weight": o.weight,
                    "posterior_guesswork": o.posterior_guesswork,
                    "posterior_error": o.posterior_error,
                    "query_order": o.strategy.as_ref().map(|s| s.query_order()),
                }));
            }
            rec.value("per_outcome", rows);
        }
    }
    Ok(rec)
}

pub fn min_guesswork(args: &MinGuessworkArgs) -> Result<(Recorder, u8), CliError> {
    let mut rec = Recorder::new("min-guesswork");
    let (e, _) = load(&mut rec, &args.file)?;
    let sol = solve_mgd(&e, &SolverOptions::default())?;
    rec.real("g_opt", sol.objective);
    rec.real("duality_gap_estimate", sol.duality_gap_estimate);
    rec.real("iterations", sol.iterations as f64);
    rec.real("min_slack", sol.audit.min_slack());
    rec.flag("converged", sol.converged);
    rec.flag("audit_complete", sol.audit.is_complete());
    rec.line(format!("G_opt = {}", sol.objective));
    rec.line(format!("duality gap estimate = {:e}", sol.duality_gap_estimate));
    rec.line(format!(
        "feasibility audit: min slack eigenvalue {:e} ({})",
        sol.audit.min_slack(),
        if sol.audit.is_complete() { "all orderings" } else { "heuristic separation" }
    ));
    let mut code = 0;
    if !sol.converged {
        rec.note(format!("solver did not converge; {} is a lower bound on the minimum", sol.objective));
        code = 3;
    }

    let mut measurement = sol.dual_povm.clone();
    if args.recover {
        match recover_povm(&e, &sol) {
            Ok(m) => {
                let text = EnsembleFile::from_povm(&m).to_json();
                match &args.out {
                    Some(p) => {
                        write_out(p, &text)?;
                        rec.line(format!("recovered measurement ({} outcomes) written to {}", m.len(), p.display()));
                    }
                    None => {
                        rec.line(format!("recovered measurement ({} outcomes):", m.len()));
                        rec.line(text);
                    }
                }
                rec.real("recovered_outcomes", m.len() as f64);
                rec.real("recovered_guesswork", conditional_guesswork(&e, &m)?.guesswork);
                rec.value("recovered_povm", EnsembleFile::from_povm(&m));
                measurement = Some(m);
            }
            Err(err) => {
                rec.note(format!("recovery failed: {err}"));
                rec.flag("recovered", false);
                code = 3;
            }
        }
    }
    if args.certify || args.recover {
        match &measurement {
            Some(m) => {
                let cert = certify(&e, m)?;
                rec.value("certificate", cert.status.label());
                rec.real("certificate_worst_violation", cert.worst_violation);
                rec.real("certificate_hermiticity_residual", cert.hermiticity_residual);
                rec.line(format!(
                    "certificate: {} (worst slack {:e}, hermiticity residual {:e})",
                    cert.status.label(),
                    cert.worst_violation,
                    cert.hermiticity_residual
                ));
            }
            None => rec.note("no measurement available to certify"),
        }
    }
    if args.oracle {
        let found = if e.dim() == 2 {
            search_qubit(&e, args.resolution, args.seed)?
        } else {
            search_general(&e, args.restarts, args.seed)?
        };
        rec.real("oracle_value", found.best_value);
        rec.real("oracle_difference", found.best_value - sol.objective);
        rec.value("oracle_method", found.method.label());
        rec.line(format!(
            "oracle ({}): {} (difference {:e}, {} evaluations)",
            found.method.label(),
            found.best_value,
            found.best_value - sol.objective,
            found.evaluations
        ));
    }
    Ok((rec, code))
}

pub fn min_error(file: &Path) -> Result<(Recorder, u8), CliError> {
    let mut rec = Recorder::new("min-error");
    let (e, _) = load(&mut rec, file)?;
    let sol = solve_med(&e, &SolverOptions::default())?;
    rec.real("p_err_opt", sol.p_err);
    rec.real("duality_gap_estimate", sol.duality_gap_estimate);
    rec.real("iterations", sol.iterations as f64);
    rec.flag("converged", sol.converged);
    rec.line(format!("P_err_opt = {}", sol.p_err));
    rec.line(format!("duality gap estimate = {:e}", sol.duality_gap_estimate));
    if sol.converged {
        Ok((rec, 0))
    } else {
        rec.note(format!("solver did not converge; best value {}", sol.p_err));
        Ok((rec, 3))
    }
}

pub fn bounds(args: &BoundsArgs) -> Result<Recorder, CliError> {
    let mut rec = Recorder::new("bounds");
    let (e, embedded) = load(&mut rec, &args.file)?;
    let povm = match &args.povm {
        Some(p) => Some(parse_povm(&read(&mut rec, p)?)?),
        None => embedded,
    };
    let mut inputs = BoundInputs {
        p_err_opt: args.p_err_opt,
        g_opt: args.g_opt,
        p_inc: args.p_inc,
        povm,
        precondition_samples: args.samples,
        seed: args.seed,
    };
    if args.solve {
        let opts = SolverOptions::default();
        inputs.g_opt = Some(solve_mgd(&e, &opts)?.objective);
        inputs.p_err_opt = Some(solve_med(&e, &opts)?.p_err);
    }
    let pack = entropy_pack(&e)?;
    rec.real("shannon_entropy", pack.shannon_h);
    rec.real("von_neumann_entropy", pack.von_neumann_s);
    rec.real("holevo_chi", pack.holevo_chi);
    rec.real("subentropy", pack.subentropy_q);
    rec.real("lambda_lower", pack.lambda_lower);
    rec.line(format!(
        "H(X) = {:.9}  S = {:.9}  χ = {:.9}  Q = {:.9}  Λ = {:.9}",
        pack.shannon_h, pack.von_neumann_s, pack.holevo_chi, pack.subentropy_q, pack.lambda_lower
    ));
    if let Some(g) = inputs.g_opt {
        rec.line(format!("G_opt = {g}"));
    }
    let suite = bound_suite(&e, &inputs)?;
    rec.line(format!("{:<26} {:<6} {:<14} {:>14}  {:<12} {}", "bound", "side", "bounds", "value", "precondition", "holds"));
    for r in &suite {
        let side = match r.side {
            Side::Lower => "lower",
            Side::Upper => "upper",
        };
        let bounded = serde_json::to_value(r.bounds).expect("serializes");
        let holds = r.holds.map_or("-", |h| if h { "yes" } else { "NO" });
        rec.line(format!(
            "{:<26} {:<6} {:<14} {:>14.9}  {:<12} {}",
            r.name,
            side,
            bounded.as_str().unwrap_or(""),
            r.value,
            if r.precondition_met { "met" } else { "not met" },
            holds
        ));
        if !r.precondition_note.is_empty() {
            rec.line(format!("    {}", r.precondition_note));
        }
        rec.real(&format!("{}.value", r.name), r.value);
        rec.flag(&format!("{}.precondition_met", r.name), r.precondition_met);
        if let Some(h) = r.holds {
            rec.flag(&format!("{}.holds", r.name), h);
        }
    }
    Ok(rec)
}

pub fn check(args: &CheckArgs) -> Result<Recorder, CliError> {
    let mut rec = Recorder::new("check");
    let (e, _) = load(&mut rec, &args.file)?;
    if args.kind.no_measurement {
        let v = check_no_measurement(&e);
        rec.flag("no_measurement_holds", v.holds);
        rec.real("prior_guesswork", v.prior_guesswork);
        rec.value("witness", v.witness);
        rec.value("equal_probability_pairs", equal_probability_pairs(&e));
        if v.holds {
            rec.line(format!("no measurement beats the prior guesswork G(X) = {}", v.prior_guesswork));
        } else {
            let (i, j) = v.witness.expect("failed verdict has a witness");
            rec.line(format!(
                "criterion fails: p_{i} ≥ p_{j} but p_{j}ρ_{j} ⋠ p_{i}ρ_{i}; a measurement can beat G(X) = {}",
                v.prior_guesswork
            ));
        }
    }
    if let Some(spec_path) = &args.kind.theorem5 {
        let g = parse_group_check(&read(&mut rec, spec_path)?)?;
        let r = check_theorem5(&e, &g.spec, &g.pi0, &g.v)?;
        rec.flag("commutes", r.commutes);
        rec.flag("optimal", r.optimal);
        rec.flag("heuristic", r.heuristic);
        rec.real("rank_one_min", r.rank_one_min);
        rec.real("candidate_value", r.candidate_value);
        rec.real("povm_value", r.povm_value);
        if let Some(g) = r.g_opt {
            rec.real("g_opt", g);
        }
        rec.line(format!("V commutes with the group: {}", r.commutes));
        rec.line(format!("rank-one minimum of G(X_π): {}", r.rank_one_min));
        rec.line(format!("G(X_π) at Vπ_0V†: {}", r.candidate_value));
        rec.line(format!("G(X|VΠV†) = {}", r.povm_value));
        rec.line(if r.optimal {
            format!("sufficient conditions hold: G_opt = {}", r.povm_value)
        } else {
            "sufficient conditions do not hold".to_string()
        });
        if r.heuristic {
            rec.note("rank-one minimum found heuristically (dimension above two)");
        }
    }
    Ok(rec)
}

pub fn repro(samples: usize, seed: u64) -> Result<(Recorder, u8), CliError> {
    let mut rec = Recorder::new("repro-paper");
    let checks = run_checks(samples, seed)?;
    let mut failed = 0;
    for c in &checks {
        rec.line(format!(
            "{:<4} {:<40} expected {:<22} observed {:<22} tol {:e}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.expected,
            c.observed,
            c.tolerance
        ));
        rec.real(&format!("{}.observed", c.name), c.observed);
        rec.flag(&format!("{}.passed", c.name), c.passed);
        if !c.passed {
            failed += 1;
        }
    }
    rec.real("failed", failed as f64);
    rec.line(format!("{} checks, {failed} failed", checks.len()));
    Ok((rec, if failed == 0 { 0 } else { 4 }))
}

pub fn fixture(name: FixtureName, out: Option<&Path>) -> Result<Recorder, CliError> {
    let mut rec = Recorder::new("fixture");
    let text = match name {
        FixtureName::Trine => EnsembleFile::from_ensemble(&fixtures::trine(), Some(&fixtures::trine_pi_e())).to_json(),
        FixtureName::TrineOptimal => {
            EnsembleFile::from_ensemble(&fixtures::trine(), Some(&fixtures::trine_pi_g())).to_json()
        }
        FixtureName::TrineGroupCheck => {
            let spec = trine_spec();
            let v = spec.intertwiner.clone().expect("trine spec carries V");
            group_check_to_json(&spec, &HermitianOperator::diag(&[2.0 / 3.0, 0.0]), &v)
        }
        FixtureName::Remark2 => EnsembleFile::from_ensemble(&fixtures::remark2(), None).to_json(),
        FixtureName::DiagonalQubit => {
            EnsembleFile::from_ensemble(&fixtures::diagonal_qubit(30), Some(&fixtures::computational_basis(2))).to_json()
        }
        FixtureName::Helstrom => EnsembleFile::from_ensemble(&fixtures::helstrom_pair(), None).to_json(),
        FixtureName::Identical => EnsembleFile::from_ensemble(&fixtures::identical_default(), None).to_json(),
    };
    match out {
        Some(p) => {
            write_out(p, &text)?;
            rec.line(format!("wrote {}", p.display()));
        }
        None => rec.line(text.clone()),
    }
    rec.input(text.as_bytes());
    Ok(rec)
}
