//! Subcommand drivers: each runs one experiment, writes its CSV/JSON
//! artifacts plus a manifest, and reports whether its configured checks
//! passed.

use std::path::{Path, PathBuf};

use serde_json::json;
use stablewalk::export;
use stablewalk::{aslt, correlation, exact_llt, Result};

use crate::config::Config;

pub struct Outcome {
    pub outputs: Vec<PathBuf>,
    pub summary: serde_json::Value,
    pub pass: bool,
}

pub fn density(cfg: &Config) -> Result<Outcome> {
    let law = cfg.build_law()?;
    let stable = cfg.build_stable(&law)?;
    let run = &cfg.run;
    let out = Path::new(&run.out);

    let mut rows = Vec::with_capacity(run.x_points);
    for i in 0..run.x_points {
        let x = run.x_min + (run.x_max - run.x_min) * i as f64 / (run.x_points - 1).max(1) as f64;
        rows.push((x, stable.density(x, run.tol.min(1e-6))?));
    }
    let density_path = export::write_file(out, "density.csv", &export::density_csv(&rows))?;

    let mut psi = Vec::with_capacity(run.t_points);
    for i in 1..=run.t_points {
        let t = std::f64::consts::PI * i as f64 / run.t_points as f64;
        psi.push((t, stable.char_fn(t)));
    }
    let charfn_path = export::write_file(out, "charfn.csv", &export::charfn_csv(&psi))?;

    let summary = json!({
        "alpha": stable.alpha(),
        "beta": stable.beta(),
        "c": stable.c(),
        "g_at_zero": stable.density(0.0, 1e-9)?,
    });
    Ok(Outcome {
        outputs: vec![density_path, charfn_path],
        summary,
        pass: true,
    })
}

pub fn exact_llt_cmd(cfg: &Config) -> Result<Outcome> {
    let law = cfg.build_law()?;
    let seq = cfg.build_norming(&law)?;
    let stable = cfg.build_stable(&law)?;
    let run = &cfg.run;
    let out = Path::new(&run.out);
    let sn_cfg = cfg.sn_config();

    let pmf = exact_llt::sn_pmf(&law, run.n, &sn_cfg)?;
    let pmf_path = export::write_file(out, "sn_pmf.csv", &export::snpmf_csv(&pmf))?;
    let sidecar_path = export::write_file(
        out,
        "sn_pmf.json",
        &export::snpmf_sidecar_json(&pmf, sn_cfg.tol),
    )?;

    let ratio = exact_llt::llt_ratio(&law, &stable, &seq, run.n, run.kappa, &sn_cfg)?;
    let pass = (ratio.ratio - 1.0).abs() <= run.ratio_tol;
    let summary = json!({
        "n": run.n,
        "kappa": run.kappa,
        "kappa_n": ratio.kappa_n,
        "scaled_prob": ratio.scaled_prob,
        "density": ratio.density,
        "ratio": ratio.ratio,
        "ratio_tol": run.ratio_tol,
        "err_bound": pmf.err_bound(),
        "entry_err": pmf.entry_err(),
    });
    Ok(Outcome {
        outputs: vec![pmf_path, sidecar_path],
        summary,
        pass,
    })
}

pub fn corr_check(cfg: &Config) -> Result<Outcome> {
    let law = cfg.build_law()?;
    let seq = cfg.build_norming(&law)?;
    let run = &cfg.run;
    let out = Path::new(&run.out);
    let sn_cfg = cfg.sn_config();
    let n = run.n;

    let gap = correlation::spectral_gap(&law, seq.epsilon())?;
    let m_grid: Vec<u64> = if run.m_grid.is_empty() {
        // geometric grid with ratio sqrt(2) across the validity range
        let mut g = Vec::new();
        let mut m = gap.x0 as f64;
        while 2.0 * m <= n as f64 {
            g.push(m.round() as u64);
            m *= std::f64::consts::SQRT_2;
        }
        g.dedup();
        g
    } else {
        run.m_grid.clone()
    };

    let mut rows = Vec::new();
    for &m in &m_grid {
        rows.push(correlation::corr_report(
            &law, &seq, m, n, run.kappa, &sn_cfg,
        )?);
    }
    let corr_path = export::write_file(out, "corr.csv", &export::corr_csv(&rows))?;

    let fit = correlation::exponent_fit(&law, &seq, n, &m_grid, run.kappa, &sn_cfg)?;
    let top = 63 - n.leading_zeros();
    let levels: Vec<u32> = [top.saturating_sub(2), top.saturating_sub(1), top]
        .iter()
        .copied()
        .filter(|&e| e >= 3)
        .collect();
    let scan = correlation::domination_scan(&law, &seq, run.kappa, &levels, &sn_cfg)?;
    let c_levels: Vec<f64> = scan.levels.iter().map(|l| l.1).collect();

    let rho_default = 1.0 / (2.0 * seq.alpha());
    let slope_ok = fit.slope >= rho_default - 0.1;
    // compare against the first grid level with any valid (m, n) pair
    let c_base = c_levels.iter().copied().find(|c| *c > 0.0);
    let c_ok = c_levels.iter().all(|c| c.is_finite())
        && c_base.is_none_or(|b| *c_levels.last().unwrap() <= 1.25 * b);
    let summary = json!({
        "n": n,
        "m_grid": m_grid,
        "slope": fit.slope,
        "rho_default": rho_default,
        "rms_residual": fit.rms_residual,
        "masked_points": fit.masked,
        "spectral_gap": gap.c_hat,
        "x0": gap.x0,
        "empirical_c_levels": c_levels,
        "slope_ok": slope_ok,
        "empirical_c_stable": c_ok,
    });
    Ok(Outcome {
        outputs: vec![corr_path],
        summary,
        pass: slope_ok && c_ok,
    })
}

pub fn aslt_cmd(cfg: &Config) -> Result<Outcome> {
    let law = cfg.build_law()?;
    let seq = cfg.build_norming(&law)?;
    let stable = cfg.build_stable(&law)?;
    let run = &cfg.run;
    let out = Path::new(&run.out);
    let sn_cfg = cfg.sn_config();

    let mut outputs = Vec::new();
    let manifest_runs = json!({
        "law": law.label(),
        "kappa": run.kappa,
        "seeds": run.seeds,
        "checkpoints": run.n_grid,
    });

    // per-seed rows always; the cross-seed study needs at least 8 seeds
    let mut runs_csv = String::from("seed,horizon,final_average,hits\n");
    let n_max = *run.n_grid.last().unwrap_or(&1000);
    for &seed in &run.seeds {
        let r = aslt::run_path(&law, &seq, run.kappa, n_max, seed, &run.n_grid)?;
        runs_csv.push_str(&format!(
            "{},{},{},{}\n",
            r.seed, r.horizon, r.final_average, r.hits
        ));
    }
    outputs.push(export::write_file(out, "runs.csv", &runs_csv)?);

    let (summary, pass) = if run.seeds.len() >= 8 {
        let rows = aslt::convergence_study(
            &law,
            &seq,
            &stable,
            run.kappa,
            &run.n_grid,
            &run.seeds,
            cfg.threads(),
            &sn_cfg,
        )?;
        outputs.push(export::write_file(out, "study.csv", &export::study_csv(&rows))?);
        let pass = rows.iter().all(|r| r.within_band);
        (
            json!({
                "manifest": manifest_runs,
                "bands": rows.iter().map(|r| json!({
                    "n": r.n,
                    "mean": r.mean,
                    "expected": r.expected,
                    "std_err": r.std_err,
                    "within_band": r.within_band,
                })).collect::<Vec<_>>(),
            }),
            pass,
        )
    } else {
        (json!({ "manifest": manifest_runs, "note": "fewer than 8 seeds: smoke run only" }), true)
    };

    Ok(Outcome {
        outputs,
        summary,
        pass,
    })
}

pub fn norming_cmd(cfg: &Config) -> Result<Outcome> {
    let law = cfg.build_law()?;
    let seq = cfg.build_norming(&law)?;
    let run = &cfg.run;
    let out = Path::new(&run.out);

    let mut rows = Vec::new();
    let mut n = seq.n_start().max(2);
    while n <= run.sum_b {
        rows.push(export::NormingRow {
            n,
            bn: seq.bn(n)?,
            l: seq.l_at(n)?,
            sup_h: seq.sup_h((n as f64).powf(1.0 + 1.0 / seq.alpha()))?,
            tilde_l: seq.tilde_l(n)?,
        });
        n *= 2;
    }
    let path = export::write_file(out, "norming.csv", &export::norming_csv(&rows))?;

    let a = seq.n_start().max(4);
    let full = seq.log_weight_sum_check(a, run.sum_b, run.gamma)?;
    let shorter = seq.log_weight_sum_check(a, (run.sum_b / 16).max(a + 1), run.gamma)?;
    let stable_c = full.fitted_c.is_finite() && full.fitted_c <= 1.25 * shorter.fitted_c;
    let summary = json!({
        "gamma": run.gamma,
        "window": [a, run.sum_b],
        "lhs_sum": full.lhs_sum,
        "rhs_gap": full.rhs_gap,
        "fitted_c": full.fitted_c,
        "fitted_c_shorter": shorter.fitted_c,
        "bounded": stable_c,
    });
    Ok(Outcome {
        outputs: vec![path],
        summary,
        pass: stable_c,
    })
}

