//! Plot-ready exports: comma-separated tables with a header row and JSON
//! sidecars.
//!
//! Floats print in shortest round-trip form with a `.` decimal separator,
//! so identical runs produce byte-identical files.

use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::aslt::StudyRow;
use crate::correlation::CorrReport;
use crate::error::Result;
use crate::exact_llt::SnPmf;

/// `(x, g(x))` columns. Negative quadrature noise is clamped here, at the
/// reporting layer only.
pub fn density_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("x,g\n");
    for (x, g) in rows {
        out.push_str(&format!("{},{}\n", x, g.max(0.0)));
    }
    out
}

/// `(t, Re ψ, Im ψ)` columns.
pub fn charfn_csv(rows: &[(f64, Complex64)]) -> String {
    let mut out = String::from("t,re_psi,im_psi\n");
    for (t, v) in rows {
        out.push_str(&format!("{},{},{}\n", t, v.re, v.im));
    }
    out
}

/// One row of the norming-sequence dump.
#[derive(Clone, Copy, Debug)]
pub struct NormingRow {
    pub n: u64,
    pub bn: f64,
    pub l: f64,
    pub sup_h: f64,
    pub tilde_l: f64,
}

pub fn norming_csv(rows: &[NormingRow]) -> String {
    let mut out = String::from("n,b_n,L,M,tilde_L\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n, r.bn, r.l, r.sup_h, r.tilde_l
        ));
    }
    out
}

/// `(k, mass)` columns over the window.
pub fn snpmf_csv(pmf: &SnPmf) -> String {
    let mut out = String::from("k,mass\n");
    for (k, m) in pmf.iter() {
        out.push_str(&format!("{},{}\n", k, m));
    }
    out
}

/// The certificate sidecar of an exported distribution.
pub fn snpmf_sidecar_json(pmf: &SnPmf, tol: f64) -> String {
    let (lo, hi) = pmf.window();
    serde_json::json!({
        "n": pmf.n(),
        "window": [lo, hi],
        "err_bound": pmf.err_bound(),
        "entry_err": pmf.entry_err(),
        "tol": tol,
    })
    .to_string()
}

pub fn corr_csv(rows: &[CorrReport]) -> String {
    let mut out = String::from(
        "m,n,lhs,lhs_err,bound_i,bound_ii,power_decay,ratio_i,ratio_ii,ratio_power_decay\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.m,
            r.n,
            r.lhs,
            r.lhs_err,
            r.bound_i,
            r.bound_ii,
            r.power_decay,
            r.lhs / r.bound_i,
            r.lhs / r.bound_ii,
            r.lhs / r.power_decay,
        ));
    }
    out
}

pub fn study_csv(rows: &[StudyRow]) -> String {
    let mut out = String::from("N,median_A,q25,q75,mean_A,std_err,expected_A,g_kappa\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n, r.median, r.q25, r.q75, r.mean, r.std_err, r.expected, r.g_kappa
        ));
    }
    out
}

/// Write `content` under `dir/name`, creating the directory as needed.
pub fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, content)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_llt::{sn_pmf, SnConfig};
    use crate::lattice::LatticeLaw;

    #[test]
    fn csv_floats_round_trip() {
        let rows = vec![(0.1, 0.39894228040143267), (2.5e-17, 1.0 / 3.0)];
        let text = density_csv(&rows);
        let mut lines = text.lines().skip(1);
        for (x, g) in rows {
            let line = lines.next().unwrap();
            let mut f = line.split(',');
            assert_eq!(f.next().unwrap().parse::<f64>().unwrap(), x);
            assert_eq!(f.next().unwrap().parse::<f64>().unwrap(), g);
        }
    }

    #[test]
    fn density_clamps_noise() {
        let text = density_csv(&[(0.0, -1e-14)]);
        assert!(text.lines().nth(1).unwrap().ends_with(",0"));
    }

    #[test]
    fn sidecar_has_certificates() {
        let pmf = sn_pmf(&LatticeLaw::lazy_walk(), 4, &SnConfig::default()).unwrap();
        let text = snpmf_sidecar_json(&pmf, 1e-6);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["n"], 4);
        assert!(v["err_bound"].as_f64().unwrap() >= 0.0);
    }
}
