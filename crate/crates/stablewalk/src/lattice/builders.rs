//! Ready-made step distributions.
//!
//! All builders return span-1 laws that are exactly centered whenever
//! `alpha > 1`. Centering never subtracts a real constant (which would leave
//! the lattice); instead the head masses on `{-1, 0, 1}` are solved so the
//! mean vanishes in floating point.

use super::tail::TailDescriptor;
use super::{LatticeLaw, LawParts};
use crate::error::{Error, Result};
use crate::series;

/// Largest number of analytic sites materialized into the table per side.
const HEAD_CAP: u64 = 65_536;
/// Builders keep at least `1 - HEAD_MASS_GAP` of the mass in the table so
/// sampling almost never walks the analytic tail.
const HEAD_MASS_GAP: f64 = 1e-6;

impl LatticeLaw {
    /// The lazy simple walk: steps `-1, 0, 1` with probabilities
    /// `1/4, 1/2, 1/4`. Variance 1/2, normal domain of attraction.
    pub fn lazy_walk() -> LatticeLaw {
        LatticeLaw::from_parts(LawParts {
            table: vec![(-1, 0.25), (0, 0.5), (1, 0.25)],
            tail: TailDescriptor::None,
            alpha: 2.0,
            c1: 0.0,
            c2: 0.0,
            label: "lazy_walk".into(),
        })
        .expect("lazy walk is valid")
    }

    /// Symmetric power-tail law with `x^alpha P(X > x) -> c`.
    pub fn zipf_symmetric(alpha: f64, c: f64) -> Result<LatticeLaw> {
        if !(c > 0.0) {
            return Err(Error::param("c", "tail constant must be positive"));
        }
        build_power_law(alpha, c, c, 0.0, format!("zipf_symmetric(a={alpha},c={c})"))
    }

    /// Skewed power-tail law with right constant `c1` and left constant `c2`.
    pub fn zipf_skewed(alpha: f64, c1: f64, c2: f64) -> Result<LatticeLaw> {
        if !(c1 >= 0.0 && c2 >= 0.0 && c1 + c2 > 0.0) {
            return Err(Error::param("c1/c2", "need c1, c2 >= 0 with c1 + c2 > 0"));
        }
        build_power_law(
            alpha,
            c1,
            c2,
            0.0,
            format!("zipf_skewed(a={alpha},c1={c1},c2={c2})"),
        )
    }

    /// Symmetric law whose tail product grows like `log^sigma x`: mass at
    /// `±k` proportional to `ln^sigma(k)/k^{1+alpha}`.
    ///
    /// The tail normalization is chosen so the analytic part carries 30% of
    /// the mass; the resulting constants are `c1 = c2`, reported on the law.
    pub fn log_sigma_family(alpha: f64, sigma: f64) -> Result<LatticeLaw> {
        if !(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0 {
            return Err(Error::param("alpha", "must lie in (0,2] and differ from 1"));
        }
        let max_sigma = alpha / (1.0 + alpha);
        if !(sigma > 0.0 && sigma < max_sigma) {
            return Err(Error::param(
                "sigma",
                format!("must lie in (0, alpha/(1+alpha)) = (0, {max_sigma})"),
            ));
        }
        let s = 1.0 + alpha;
        let budget = 0.3;
        let unit = series::tail_sum(s, sigma, 2).value;
        let coef = budget / (2.0 * unit);
        let c = coef / alpha;
        build_power_law_with(
            alpha,
            c,
            c,
            sigma,
            2,
            format!("log_sigma(a={alpha},s={sigma})"),
        )
    }

    /// One-sided counterexample law: mass proportional to `1/(n^2 2^n)` on
    /// the positive integers, rebalanced on `{-1, 0}` to zero mean.
    ///
    /// Its right tail decays geometrically, so `x^2 P(X > x)` is **not**
    /// slowly varying, while the truncated second moment still converges:
    /// the pair of properties the tail-profile diagnostics look for.
    pub fn geometric_tail_counterexample() -> LatticeLaw {
        let weight = 0.4;
        // normalizer of the full series: 1 / Σ_{k>=1} 1/(k^2 2^k)
        let norm = 1.0 / series::geometric_over_square_tail(1).value;
        let coef = weight * norm;
        let cutoff = 50u64;

        let mut table = vec![];
        let mut head_mass = 0.0;
        let mut head_mean = 0.0;
        for k in 1..cutoff {
            let kf = k as f64;
            let m = coef * 0.5f64.powi(k as i32) / (kf * kf);
            table.push((k as i64, m));
            head_mass += m;
            head_mean += kf * m;
        }
        let tail = TailDescriptor::GeometricOverSquare { cutoff, coef };
        let tail_mass = tail.right_mass_from(2.0, cutoff);
        let tail_mean = tail.first_moment(2.0).expect("geometric tail mean");

        let minus = head_mean + tail_mean.value;
        let zero = 1.0 - head_mass - tail_mass.value - minus;
        table.push((-1, minus));
        table.push((0, zero));

        LatticeLaw::from_parts(LawParts {
            table,
            tail,
            alpha: 2.0,
            c1: 0.0,
            c2: 0.0,
            label: "geometric_tail_counterexample".into(),
        })
        .expect("counterexample law is valid")
    }

    /// Normalization constant of the geometric-over-square part, as
    /// documented by [`LatticeLaw::geometric_tail_counterexample`]: the law's tail
    /// coefficient divided by the mixing weight 0.4.
    pub fn counterexample_normalizer(&self) -> Option<f64> {
        match self.tail {
            TailDescriptor::GeometricOverSquare { coef, .. } => Some(coef / 0.4),
            _ => None,
        }
    }
}

fn build_power_law(alpha: f64, c1: f64, c2: f64, sigma: f64, label: String) -> Result<LatticeLaw> {
    if !(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0 {
        return Err(Error::param("alpha", "must lie in (0,2] and differ from 1"));
    }
    let s = 1.0 + alpha;
    let rc = c1 * alpha;
    let lc = c2 * alpha;
    // smallest start K0 >= 2 leaving room for the centering head
    let mut k0 = 2u64;
    loop {
        let t = rc * tail_mass(s, sigma, k0, rc > 0.0) + lc * tail_mass(s, sigma, k0, lc > 0.0);
        if t <= 0.9 {
            let feasible = if alpha > 1.0 {
                let mu = (rc - lc) * series::tail_sum(alpha, sigma, k0).value;
                mu.abs() <= 0.9 * (1.0 - t)
            } else {
                true
            };
            if feasible {
                break;
            }
        }
        k0 += k0.max(1) / 2 + 1;
        if k0 > 1 << 40 {
            return Err(Error::param(
                "c1/c2",
                "tail constants too large to embed in a probability law",
            ));
        }
    }
    build_power_law_with(alpha, c1, c2, sigma, k0, label)
}

fn tail_mass(s: f64, sigma: f64, from: u64, active: bool) -> f64 {
    if active {
        series::tail_sum(s, sigma, from).value
    } else {
        0.0
    }
}

/// Assemble a power-tail law with analytic range starting at `k0`.
fn build_power_law_with(
    alpha: f64,
    c1: f64,
    c2: f64,
    sigma: f64,
    k0: u64,
    label: String,
) -> Result<LatticeLaw> {
    let s = 1.0 + alpha;
    let rc = c1 * alpha;
    let lc = c2 * alpha;

    // table head end: analytic mass beyond it at most HEAD_MASS_GAP
    let mut k_head = k0;
    let beyond = |k: u64| (rc + lc) * series::tail_sum(s, sigma, k).value;
    if beyond(k0) > HEAD_MASS_GAP {
        let mut hi = k0.max(2);
        while beyond(hi) > HEAD_MASS_GAP && hi < HEAD_CAP {
            hi = (hi * 2).min(HEAD_CAP);
        }
        let mut lo = k0;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if beyond(mid) > HEAD_MASS_GAP {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        k_head = hi;
    }

    let mut table: Vec<(i64, f64)> = Vec::with_capacity(2 * (k_head - k0) as usize + 3);
    for k in k0..k_head {
        let f = series::log_power_term(s, sigma, k as f64);
        if rc > 0.0 {
            table.push((k as i64, rc * f));
        }
        if lc > 0.0 {
            table.push((-(k as i64), lc * f));
        }
    }
    let tail = TailDescriptor::PowerLaw {
        cutoff: k_head,
        sigma,
        right_coef: rc,
        left_coef: lc,
    };

    // mean of everything assembled so far, in the validator's decomposition
    let mut rest_mean = crate::series::kahan_sum(table.iter().map(|(k, m)| *k as f64 * m));
    if alpha > 1.0 {
        rest_mean += tail.first_moment(alpha).expect("alpha > 1").value;
    } else {
        rest_mean = 0.0;
    }
    let rest_mass = crate::series::kahan_sum(table.iter().map(|(_, m)| *m))
        + tail.right_mass_from(alpha, 0).value
        + tail.left_mass_from(alpha, 0).value;

    let free = 1.0 - rest_mass;
    if free < rest_mean.abs() || free <= 0.0 {
        return Err(Error::param(
            "c1/c2",
            "no room to center the head; tail constants too large",
        ));
    }
    let spread = 0.25 * (free - rest_mean.abs());
    let u_plus = (-rest_mean).max(0.0) + spread;
    let u_minus = rest_mean.max(0.0) + spread;
    let u_zero = free - u_plus - u_minus;

    let mut push = |site: i64, extra: f64| {
        if extra <= 0.0 {
            return;
        }
        if let Some(slot) = table.iter_mut().find(|(k, _)| *k == site) {
            slot.1 += extra;
        } else {
            table.push((site, extra));
        }
    };
    push(1, u_plus);
    push(-1, u_minus);
    push(0, u_zero);

    LatticeLaw::from_parts(LawParts {
        table,
        tail,
        alpha,
        c1,
        c2,
        label,
    })
}
