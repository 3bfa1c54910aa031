//! Declarative experiment configuration: a TOML document with nested
//! sections, overridable by command-line flags. The effective configuration
//! is echoed into every run manifest so each output file can be reproduced.

use serde::{Deserialize, Serialize};
use stablewalk::norming::SlowlyVarying;
use stablewalk::{Error, LatticeLaw, NormingSeq, Result, StableParams};

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub law: LawSpec,
    pub norming: NormingSpec,
    pub stable: StableSpec,
    pub run: RunSpec,
}

/// Which step distribution to build.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LawSpec {
    /// lazy_walk | zipf_symmetric | zipf_skewed | log_sigma | geometric_tail
    pub builder: String,
    pub alpha: f64,
    /// symmetric tail constant (zipf_symmetric)
    pub c: f64,
    /// right/left tail constants (zipf_skewed)
    pub c1: f64,
    pub c2: f64,
    /// log exponent (log_sigma)
    pub sigma: f64,
}

impl Default for LawSpec {
    fn default() -> Self {
        LawSpec {
            builder: "lazy_walk".into(),
            alpha: 1.5,
            c: 0.25,
            c1: 0.25,
            c2: 0.25,
            sigma: 0.4,
        }
    }
}

/// Norming sequence: `auto` derives `h` from the law.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormingSpec {
    /// auto | constant | log_power
    pub h: String,
    /// value of the constant kind
    pub value: f64,
    /// exponent of the log-power kind
    pub sigma: f64,
    pub epsilon: Option<f64>,
    pub eta: Option<f64>,
    pub delta: Option<f64>,
}

impl Default for NormingSpec {
    fn default() -> Self {
        NormingSpec {
            h: "auto".into(),
            value: 1.0,
            sigma: 0.4,
            epsilon: None,
            eta: None,
            delta: None,
        }
    }
}

/// Limit-law parameters: `auto` derives them from the law's tail constants.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StableSpec {
    /// auto | explicit
    pub mode: String,
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
}

impl Default for StableSpec {
    fn default() -> Self {
        StableSpec {
            mode: "auto".into(),
            alpha: 2.0,
            beta: 0.0,
            c: 0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSpec {
    pub out: String,
    pub seeds: Vec<u64>,
    pub threads: usize,
    pub tol: f64,
    pub w_factor: f64,
    pub kappa: f64,
    /// main horizon (exact-llt, corr-check)
    pub n: u64,
    /// horizons of the averaging study
    pub n_grid: Vec<u64>,
    /// density grid
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    /// char-fn grid points over (0, pi]
    pub t_points: usize,
    /// corr m-grid; empty = dyadic between x0 and n/2
    pub m_grid: Vec<u64>,
    /// summability window exponent and end
    pub gamma: f64,
    pub sum_b: u64,
    /// pass threshold on |ratio - 1| for exact-llt
    pub ratio_tol: f64,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            out: "out".into(),
            seeds: (0..32).collect(),
            threads: 0,
            tol: 1e-6,
            w_factor: 40.0,
            kappa: 0.0,
            n: 4096,
            n_grid: vec![1_000, 10_000, 100_000],
            x_min: -4.0,
            x_max: 4.0,
            x_points: 401,
            t_points: 256,
            m_grid: vec![],
            gamma: 1.7,
            sum_b: 1 << 18,
            ratio_tol: 0.1,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Serde(format!("config: {e}")))
    }

    pub fn build_law(&self) -> Result<LatticeLaw> {
        let l = &self.law;
        match l.builder.as_str() {
            "lazy_walk" => Ok(LatticeLaw::lazy_walk()),
            "zipf_symmetric" => LatticeLaw::zipf_symmetric(l.alpha, l.c),
            "zipf_skewed" => LatticeLaw::zipf_skewed(l.alpha, l.c1, l.c2),
            "log_sigma" => LatticeLaw::log_sigma_family(l.alpha, l.sigma),
            "geometric_tail" => Ok(LatticeLaw::geometric_tail_counterexample()),
            other => Err(Error::InvalidParameter {
                name: "law.builder",
                reason: format!("unknown builder `{other}`"),
            }),
        }
    }

    pub fn build_norming(&self, law: &LatticeLaw) -> Result<NormingSeq> {
        let spec = &self.norming;
        let mut seq = match spec.h.as_str() {
            "auto" => law.natural_norming()?,
            "constant" => NormingSeq::new(law.alpha(), SlowlyVarying::constant(spec.value)?)?,
            "log_power" => NormingSeq::new(law.alpha(), SlowlyVarying::log_power(spec.sigma)?)?,
            other => {
                return Err(Error::InvalidParameter {
                    name: "norming.h",
                    reason: format!("unknown kind `{other}`"),
                })
            }
        };
        if let Some(e) = spec.epsilon {
            seq = seq.with_epsilon(e)?;
        }
        if let Some(e) = spec.eta {
            seq = seq.with_eta(e)?;
        }
        if let Some(d) = spec.delta {
            seq = seq.with_delta(d)?;
        }
        Ok(seq)
    }

    pub fn build_stable(&self, law: &LatticeLaw) -> Result<StableParams> {
        match self.stable.mode.as_str() {
            "auto" => {
                if law.alpha() == 2.0 {
                    Ok(StableParams::gaussian())
                } else {
                    StableParams::from_tails(law.alpha(), law.c1(), law.c2())
                }
            }
            "explicit" => StableParams::new(self.stable.alpha, self.stable.beta, self.stable.c),
            other => Err(Error::InvalidParameter {
                name: "stable.mode",
                reason: format!("unknown mode `{other}`"),
            }),
        }
    }

    pub fn sn_config(&self) -> stablewalk::SnConfig {
        stablewalk::SnConfig {
            tol: self.run.tol,
            w_factor: self.run.w_factor,
            max_window: 1 << 23,
        }
    }

    pub fn threads(&self) -> usize {
        if self.run.threads != 0 {
            return self.run.threads;
        }
        std::env::var("STABLE_LLT_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build() {
        let cfg = Config::default();
        let law = cfg.build_law().unwrap();
        assert_eq!(law.label(), "lazy_walk");
        let seq = cfg.build_norming(&law).unwrap();
        assert!((seq.bn(8).unwrap() - 2.0).abs() < 1e-12);
        cfg.build_stable(&law).unwrap();
    }

    #[test]
    fn toml_round_trip_and_unknown_fields() {
        let cfg = Config::from_toml(
            r#"
            [law]
            builder = "zipf_symmetric"
            alpha = 1.5
            c = 0.25

            [run]
            n = 128
            seeds = [1, 2, 3]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.law.builder, "zipf_symmetric");
        assert_eq!(cfg.run.n, 128);
        assert_eq!(cfg.run.seeds, vec![1, 2, 3]);
        // unknown keys are configuration mistakes, not silently ignored
        assert!(Config::from_toml("[law]\nbulider = \"x\"\n").is_err());
    }
}
