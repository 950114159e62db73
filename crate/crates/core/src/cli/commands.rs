use num_complex::Complex64;
use serde_json::json;

use super::output::{Cell, Table};
use super::{CliError, ExpectationArgs, Outcome, PhaseArgs, RunConfig, SampleArgs};
use crate::algebra::{Rep, ModelSpec};
use crate::error::Error;
use crate::oracle::{expectation_direct, expectation_unified, verify_spectrum, Observable};
use crate::phase::{self, Phase, PhaseQuery};
use crate::solutions::{stated, solve, ClosedFormSolution};

type CmdResult = Result<Outcome, CliError>;

fn done(table: Table, failed: bool) -> CmdResult {
    Ok(Outcome { table, failed })
}

fn setup(cfg: &RunConfig) -> Result<(ModelSpec, crate::algebra::DeformationParams), CliError> {
    let params = cfg.params()?;
    let model = cfg.model_spec();
    model.validate(&params)?;
    Ok((model, params))
}

pub fn spectrum(cfg: &RunConfig) -> CmdResult {
    let (model, params) = setup(cfg)?;
    let rep = cfg.rep();
    let sol = solve(model, rep, params)?;
    let count = cfg.nmax + 1;
    let energies = sol.energies(count)?;
    let complex = energies.iter().any(|e| e.im != 0.0);

    let mut cols = vec!["n", "E_closed"];
    if complex {
        cols.push("E_imag");
    }
    let report = if cfg.oracle {
        cols.extend(["E_oracle", "rel_err", "err_estimate"]);
        Some(verify_spectrum(model, rep, params, count, cfg.grid)?)
    } else {
        None
    };
    let mut table = Table::new(&cols);
    let mut failed = false;
    for (n, e) in energies.iter().enumerate() {
        let mut row: Vec<Cell> = vec![n.into(), e.re.into()];
        if complex {
            row.push(e.im.into());
        }
        if let Some(r) = &report {
            let l = &r.levels[n];
            failed |= !(l.rel_err <= cfg.tol);
            row.extend([l.oracle.into(), l.rel_err.into(), l.error_estimate.into()]);
        }
        table.push(row);
    }
    table.meta.insert("physicality".into(), json!(sol.physicality));
    if let Some(r) = &report {
        table.meta.insert("grid_sizes".into(), json!(r.grid_sizes));
    }
    if cfg.check && report.is_none() {
        return Err(CliError::Usage("--check needs --oracle for spectrum".into()));
    }
    done(table, failed)
}

/// Sample points in the real parametrization of `rep`.
fn sample_points(sol: &ClosedFormSolution, a: &SampleArgs) -> Result<Vec<f64>, CliError> {
    if a.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let dom = sol.transform()?.p_domain;
    let scale = 10.0 / sol.params.tau_check().sqrt();
    let explicit = a.pmin.is_some() || a.pmax.is_some();
    let lo = a.pmin.unwrap_or(if dom.lo.is_finite() { dom.lo } else { -scale });
    let hi = a.pmax.unwrap_or(if dom.hi.is_finite() {
        dom.hi
    } else if dom.lo.is_finite() {
        dom.lo + 2.0 * scale
    } else {
        scale
    });
    if !(lo < hi) {
        return Err(CliError::Usage(format!("empty sample range [{lo}, {hi}]")));
    }
    if lo < dom.lo || hi > dom.hi {
        return Err(CliError::Usage(format!(
            "sample range [{lo}, {hi}] leaves the domain ({}, {})",
            dom.lo, dom.hi
        )));
    }
    let m = a.points;
    let h = (hi - lo) / m as f64;
    // a finite end that was not chosen by hand is a wall; stay off it
    let open = !explicit && (dom.lo.is_finite() || dom.hi.is_finite());
    Ok(if open {
        (0..m).map(|k| lo + (k as f64 + 0.5) * h).collect()
    } else {
        let h = (hi - lo) / (m - 1) as f64;
        (0..m).map(|k| if k == m - 1 { hi } else { lo + k as f64 * h }).collect()
    })
}

fn p_column(rep: Rep) -> &'static str {
    if rep.imaginary() {
        "p_im"
    } else {
        "p"
    }
}

pub fn wavefunction(cfg: &RunConfig, a: &SampleArgs) -> CmdResult {
    let (model, params) = setup(cfg)?;
    let rep = cfg.rep();
    let sol = solve(model, rep, params)?;
    let ts = sample_points(&sol, a)?;
    let psi = sol.wavefunction(a.n, &ts)?;
    let mut table = Table::new(&[p_column(rep), "re_psi", "im_psi", "rho"]);
    for (t, v) in ts.iter().zip(&psi) {
        table.push(vec![(*t).into(), v.re.into(), v.im.into(), sol.metric(*t)?.into()]);
    }
    table.meta.insert("n".into(), json!(a.n));
    table.meta.insert("energy".into(), json!(sol.energy(a.n)?.re));
    done(table, false)
}

pub fn metric(cfg: &RunConfig, a: &SampleArgs) -> CmdResult {
    let (model, params) = setup(cfg)?;
    let rep = cfg.rep();
    let sol = solve(model, rep, params)?;
    let ts = sample_points(&sol, a)?;
    let mut table = Table::new(&[p_column(rep), "rho", "rho_stated_re", "rho_stated_im", "ratio"]);
    for &t in &ts {
        let rho = sol.metric(t)?;
        let stated = stated::metric(model, rep, &params, t);
        let ratio = stated.filter(|_| rho > 0.0).map(|s| s.norm() / rho);
        table.push(vec![
            t.into(),
            rho.into(),
            stated.map(|s| s.re).into(),
            stated.map(|s| s.im).into(),
            ratio.into(),
        ]);
    }
    done(table, false)
}

const DEFAULT_WORDS: [&str; 5] = ["P", "P^2", "X", "X^2", "H"];

pub fn expectation(cfg: &RunConfig, a: &ExpectationArgs) -> CmdResult {
    let (model, params) = setup(cfg)?;
    let words: Vec<String> = if a.words.is_empty() {
        DEFAULT_WORDS.iter().map(|w| w.to_string()).collect()
    } else {
        a.words.clone()
    };
    let reps: Vec<Rep> = if cfg.rep_given { vec![cfg.rep()] } else { Rep::PHYSICAL.to_vec() };
    let mut table = Table::new(&["n", "word", "rep", "re", "im", "status"]);
    let mut failed = false;
    for n in 0..=cfg.nmax {
        for src in &words {
            let obs = Observable::parse(src, model, &params)?;
            let mut values: Vec<Complex64> = Vec::new();
            let mut engines: Vec<(String, crate::Result<Complex64>)> = reps
                .iter()
                .map(|&rep| (rep.label().to_string(), expectation_direct(model, rep, params, n, &obs)))
                .collect();
            engines.push(("unified".into(), expectation_unified(model, params, n, &obs)));
            for (label, r) in engines {
                match r {
                    Ok(v) => {
                        values.push(v);
                        table.push(vec![n.into(), src.as_str().into(), label.into(), v.re.into(), v.im.into(), "ok".into()]);
                    }
                    Err(Error::UnsupportedPair { .. }) => {}
                    Err(e @ (Error::NonIntegrable(_) | Error::NonPhysical)) => {
                        table.push(vec![n.into(), src.as_str().into(), label.into(), Cell::Empty, Cell::Empty, e.to_string().into()]);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            if let Some(first) = values.first() {
                let scale = first.norm().max(1.0);
                failed |= values.iter().any(|v| (v - first).norm() > cfg.tol * scale);
            }
        }
    }
    done(table, failed)
}

/// Point claims checked by `phase --check`: `(α, β, τ, expected phase)`.
pub const POINT_CLAIMS: [(f64, f64, f64, Phase); 4] = [
    (2.0, 0.1, 0.0, Phase::Unbroken),
    (2.0, 0.1, 0.5, Phase::Broken),
    (15.0, 0.1, 0.0, Phase::Broken),
    (15.0, 0.1, 0.5, Phase::Unbroken),
];

pub fn phase(cfg: &RunConfig, a: &PhaseArgs) -> CmdResult {
    let params = cfg.params()?;
    let taus = if a.taus.is_empty() { vec![cfg.tau] } else { a.taus.clone() };
    let query = PhaseQuery {
        params,
        alpha_range: (a.alpha_min, a.alpha_max, a.alpha_step),
        tau_list: taus,
    };
    let curves = phase::scan(&query)?;
    let mut table = Table::new(&["tau", "alpha", "beta_boundary", "branch"]);
    for c in &curves {
        for &(alpha, beta) in &c.points {
            table.push(vec![c.tau.into(), alpha.into(), beta.into(), c.branch.into()]);
        }
    }
    let summary: Vec<_> = curves
        .iter()
        .map(|c| {
            json!({
                "tau": c.tau,
                "branch": c.branch,
                "region_above": c.region_above,
                "region_below": c.region_below,
                "monotone": c.monotone,
                "no_root": c.no_root,
                "upper_branch_points": c.upper.len(),
            })
        })
        .collect();
    table.meta.insert("curves".into(), json!(summary));
    let mut failed = false;
    if cfg.check {
        let mut claims = Vec::new();
        for (alpha, beta, tau, want) in POINT_CLAIMS {
            let got = phase::classify(alpha, beta, &params.with_tau(tau));
            failed |= got != want;
            claims.push(json!({"alpha": alpha, "beta": beta, "tau": tau, "expected": want, "got": got}));
        }
        table.meta.insert("point_claims".into(), json!(claims));
    }
    done(table, failed)
}
