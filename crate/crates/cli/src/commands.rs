use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use std::fmt::Write as _;
use std::time::Instant;

use sdi_selftest::bounds::{
    biased_bound, jordan_form, meas_compat_bound_2, meas_compat_bound_n, prep_compat_bound_2,
    prep_compat_bound_n, qutrit_bound, rac2_value_for_observables, JordanForm,
};
use sdi_selftest::fidelity::{
    conjectured_curve_meas, evaluate_states_curve, linear_lower_bound, strategy_s2, strategy_s3,
    sweep_inequalities, upper_conjecture, AlignOptions, InequalityKind, C2, Q2, S_OPT,
};
use sdi_selftest::quantum::Field;
use sdi_selftest::scenario::{classical_optimum, witness_value, Strategy, Witness};
use sdi_selftest::sdp::{SwapOptions, SwapRelaxation};
use sdi_selftest::seesaw::{region_sweep, seesaw as run_seesaw, SeesawOptions, SweepOptions};
use sdi_selftest::{Error, Exec};

use crate::output::{num, Csv};
use crate::{
    BoundsArgs, ClassicalArgs, CliError, CurveArgs, FieldArg, IneqArg, Report, SdpArgs, SeesawArgs,
    SweepArgs, VerifyArgs, Which,
};

fn is_builtin(spec: &str) -> bool {
    spec.starts_with("builtin:") || !std::path::Path::new(spec).exists()
}

pub fn load_witness(spec: &str) -> Result<Witness, CliError> {
    if is_builtin(spec) {
        return Witness::builtin(spec).map_err(|e| CliError::Usage(e.to_string()));
    }
    Ok(Witness::from_json(&std::fs::read_to_string(spec)?)?)
}

fn load_strategy(spec: &str) -> Result<Strategy, CliError> {
    if is_builtin(spec) {
        return match spec.strip_prefix("builtin:").unwrap_or(spec) {
            "rac2" => Ok(Strategy::rac2_ideal()),
            "example2" => Ok(Strategy::example2_ideal()),
            "s2" => Ok(strategy_s2()),
            "s3" => Ok(strategy_s3()),
            other => Err(CliError::Usage(format!(
                "unknown builtin strategy `{other}`"
            ))),
        };
    }
    Ok(Strategy::from_json(&std::fs::read_to_string(spec)?)?)
}

/// Ideal strategy compared against in sweeps and swap bounds.
fn ideal_for(spec: &str) -> Result<(Witness, Strategy), CliError> {
    match spec.strip_prefix("builtin:").unwrap_or(spec) {
        "rac2" => Ok((Witness::rac(2)?, Strategy::rac2_ideal())),
        "example2" => Ok((Witness::example2(), Strategy::example2_ideal())),
        other => Err(CliError::Usage(format!(
            "`{other}` has no ideal strategy; use builtin:rac2 or builtin:example2"
        ))),
    }
}

fn kv(pairs: &[(&str, f64)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={}", num(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn bounds(a: &BoundsArgs) -> Result<Report, CliError> {
    let s = load_strategy(&a.strategy)?;
    let mut csv = Csv::new(&["bound", "value", "parameters"]);
    let binary = s.measurements().iter().all(|m| m.n_outcomes() == 2);
    if !binary {
        return Err(CliError::Usage("bounds need binary measurements".into()));
    }
    let obs = s.observables()?;
    if s.nx() == 4 && s.ny() == 2 {
        let w = Witness::rac(2)?;
        csv.row(vec![
            "rac2_value".into(),
            num(witness_value(&w, &s)?),
            String::new(),
        ]);
        let opt = rac2_value_for_observables(obs[0].op(), obs[1].op())?;
        csv.row(vec!["rac2_state_optimum".into(), num(opt), String::new()]);
        if s.dim() == 2 {
            let p = prep_compat_bound_2(s.states())?;
            csv.row(vec![
                "prep_compat_2".into(),
                num(p.bound),
                kv(&[("beta", p.beta), ("alpha", p.alpha)]),
            ]);
            let m = meas_compat_bound_2(&obs[0], &obs[1])?;
            csv.row(vec![
                "meas_compat_2".into(),
                num(m.bound),
                kv(&[
                    ("mu", m.mu),
                    ("nu", m.nu),
                    ("eta_plus", m.eta_plus),
                    ("eta_minus", m.eta_minus),
                ]),
            ]);
            if let Some(q) = a.q {
                let b = biased_bound(q, &obs[0], &obs[1])?;
                let value = witness_value(&Witness::biased_rac(q)?, &s)?;
                csv.row(vec!["biased_value".into(), num(value), kv(&[("q", q)])]);
                csv.row(vec![
                    "biased".into(),
                    num(b.bound),
                    kv(&[("q", q), ("beta", b.beta), ("alpha", b.alpha)]),
                ]);
            }
        }
        if s.dim() == 3 {
            let (value, params) = match jordan_form(&obs[0], &obs[1])? {
                JordanForm::Block { alpha, r, s } => (
                    qutrit_bound(alpha, r, s),
                    kv(&[("alpha", alpha), ("r", r as f64), ("s", s as f64)]),
                ),
                JordanForm::Commuting => (opt, "commuting".to_string()),
            };
            csv.row(vec!["qutrit".into(), num(value), params]);
        }
    }
    let n = s.ny();
    if s.dim() == 2 && n >= 2 && s.nx() == 1 << n && n <= 8 {
        let w = Witness::rac(n)?;
        csv.row(vec![
            format!("rac{n}_value"),
            num(witness_value(&w, &s)?),
            String::new(),
        ]);
        csv.row(vec![
            format!("prep_compat_{n}"),
            num(prep_compat_bound_n(s.states(), n)?),
            String::new(),
        ]);
        csv.row(vec![
            format!("meas_compat_{n}"),
            num(meas_compat_bound_n(&obs)?),
            String::new(),
        ]);
    }
    let text = csv.render();
    Ok(Report {
        stdout: text.clone(),
        files: vec![("bounds.csv".into(), text)],
        seed: None,
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    (0..n)
        .map(|k| {
            if k + 1 == n {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        })
        .collect()
}

pub fn curve(a: &CurveArgs, exec: Exec) -> Result<Report, CliError> {
    if a.points < 1 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    let align = AlignOptions {
        restarts: a.restarts.max(1),
        seed: a.seed,
        exec: Exec::Sequential,
    };
    let rows: Vec<Result<[f64; 3], Error>> = match a.which {
        Which::Lower => linspace(C2, Q2, a.points)
            .into_iter()
            .map(|x| Ok([x, x, linear_lower_bound(x)]))
            .collect(),
        Which::UpperConjecture => linspace(C2, Q2, a.points)
            .into_iter()
            .map(|x| Ok([x, x, upper_conjecture(x)]))
            .collect(),
        Which::States => {
            let grid = linspace(0.0, FRAC_PI_4, a.points);
            exec.map(grid.len(), |k| {
                evaluate_states_curve(grid[k], &align).map(|(x, f)| [grid[k], x, f])
            })
        }
        Which::Meas => {
            let grid = linspace(0.0, FRAC_PI_8, a.points);
            exec.map(grid.len(), |k| {
                conjectured_curve_meas(grid[k], &align).map(|(x, f)| [grid[k], x, f])
            })
        }
    };
    let mut csv = Csv::new(&["parameter", "A2", "F"]);
    for r in rows {
        let [p, x, f] = r?;
        csv.row(vec![num(p), num(x), num(f)]);
    }
    let text = csv.render();
    Ok(Report {
        stdout: text.clone(),
        files: vec![("curve.csv".into(), text)],
        seed: Some(a.seed),
    })
}

pub fn seesaw(a: &SeesawArgs, exec: Exec) -> Result<Report, CliError> {
    let w = load_witness(&a.witness)?;
    let opts = SeesawOptions {
        restarts: a.restarts,
        max_iters: a.max_iters,
        seed: a.seed,
        exec,
        ..Default::default()
    };
    let r = run_seesaw(&w, a.dim, &opts)?;
    if !r.converged {
        return Err(CliError::Lib(Error::NoConvergence(format!(
            "best restart did not converge in {} iterations",
            a.max_iters
        ))));
    }
    let mut csv = Csv::new(&["restart", "value"]);
    for (k, v) in r.restart_values.iter().enumerate() {
        csv.row(vec![k.to_string(), num(*v)]);
    }
    let doc = serde_json::to_string_pretty(&r.best_strategy.to_doc())?;
    Ok(Report {
        stdout: format!("{}\n", num(r.best_value)),
        files: vec![
            ("seesaw.csv".into(), csv.render()),
            ("seesaw_strategy.json".into(), doc),
        ],
        seed: Some(a.seed),
    })
}

pub fn sweep(a: &SweepArgs, exec: Exec) -> Result<Report, CliError> {
    let (w, ideal) = ideal_for(&a.witness)?;
    let opts = SweepOptions {
        samples: a.samples,
        seed: a.seed,
        restarts: a.restarts.max(1),
        exec,
    };
    let pts = region_sweep(&w, &ideal, &opts)?;
    let mut csv = Csv::new(&["A2", "F_states", "F_meas"]);
    let mut below = 0;
    for p in &pts {
        if w.nx() == 4 {
            let l = linear_lower_bound(p.a2);
            if p.f_states < l - 1e-7 || p.f_meas < l - 1e-7 {
                below += 1;
            }
        }
        csv.row(vec![num(p.a2), num(p.f_states), num(p.f_meas)]);
    }
    let mut stdout = format!("{} points written\n", pts.len());
    if w.nx() == 4 {
        let _ = writeln!(stdout, "points below the linear bound: {below}");
    }
    Ok(Report {
        stdout,
        files: vec![("sweep.csv".into(), csv.render())],
        seed: Some(a.seed),
    })
}

pub fn sdp_fidelity(a: &SdpArgs, exec: Exec) -> Result<Report, CliError> {
    let (w, ideal) = ideal_for(&a.witness)?;
    let mut opts = SwapOptions {
        seed: a.seed,
        field: match a.field {
            FieldArg::Complex => Field::Complex,
            FieldArg::Real => Field::Real,
        },
        trivial_observables: !a.no_trivial,
        ..Default::default()
    };
    opts.span.exec = exec;
    let thresholds = match a.grid {
        None => vec![a.a_star],
        Some(0) => return Err(CliError::Usage("--grid must be at least 1".into())),
        Some(n) => {
            let lo = sdi_selftest::scenario::classical_bound(&w, 2)?;
            if a.a_star < lo {
                return Err(CliError::Usage(format!(
                    "--a-star {} is below the classical bound {}",
                    a.a_star,
                    num(lo)
                )));
            }
            linspace(lo, a.a_star, n)
        }
    };
    let frame = sdi_selftest::sdp::swap_frame_states(&ideal)?;
    let rel = SwapRelaxation::build(&w, &frame, &opts)?;
    let solved = exec.map(thresholds.len(), |k| {
        let t = Instant::now();
        let b = rel.bound(thresholds[k], &opts.solver);
        (b, t.elapsed().as_millis())
    });
    let mut csv = Csv::new(&["A_star", "bound", "gap", "rank", "solve_ms"]);
    for (b, ms) in solved {
        let b = b?;
        csv.row(vec![
            num(b.a_star),
            num(b.fidelity),
            num(b.gap),
            rel.span_dim.to_string(),
            ms.to_string(),
        ]);
    }
    let text = csv.render();
    Ok(Report {
        stdout: text.clone(),
        files: vec![("sdp-fidelity.csv".into(), text)],
        seed: Some(a.seed),
    })
}

pub fn verify(a: &VerifyArgs, exec: Exec) -> Result<Report, CliError> {
    let s = if a.s == "auto" {
        S_OPT
    } else {
        a.s.parse()
            .map_err(|_| CliError::Usage(format!("--s `{}` is neither `auto` nor a number", a.s)))?
    };
    let kind = match a.ineq {
        IneqArg::Prep => InequalityKind::Preparations,
        IneqArg::Meas => InequalityKind::Measurements,
    };
    let summary = sweep_inequalities(kind, s, a.grid, exec)?;
    let mut csv = Csv::new(&["theta", "t", "min_residual"]);
    for r in &summary.rows {
        csv.row(vec![num(r.theta), num(r.coeffs.t), num(r.min_residual)]);
    }
    let passed = summary.passed(1e-9);
    let line = format!(
        "{} min_residual={} min_t={} argmin_theta={}\n",
        if passed { "PASS" } else { "FAIL" },
        num(summary.min_residual),
        num(summary.min_t),
        num(summary.argmin_t)
    );
    if !passed {
        return Err(CliError::Failed(line.trim_end().to_string()));
    }
    Ok(Report {
        stdout: line,
        files: vec![("verify.csv".into(), csv.render())],
        seed: None,
    })
}

pub fn classical(a: &ClassicalArgs, exec: Exec) -> Result<Report, CliError> {
    let w = load_witness(&a.witness)?;
    let opt = classical_optimum(&w, a.dim, exec)?;
    let mut csv = Csv::new(&["x", "message"]);
    for (x, m) in opt.encoding.iter().enumerate() {
        csv.row(vec![x.to_string(), m.to_string()]);
    }
    Ok(Report {
        stdout: format!("{}\n", num(opt.value)),
        files: vec![("classical.csv".into(), csv.render())],
        seed: None,
    })
}
