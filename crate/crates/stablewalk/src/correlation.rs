//! The correlation quantity `b_m b_n |P(S_m=κ_m, S_n=κ_n) - P(S_m=κ_m)
//! P(S_n=κ_n)|` and its upper bounds.
//!
//! Independent increments factor the joint probability through
//! `P(S_m=κ_m) P(S_{n-m}=κ_n-κ_m)`, so the left side reduces to exact
//! convolution queries. The bounds are reported as their bracketed
//! expressions with the nonconstructive constant set to 1; verification is
//! about shape (the decay exponent and the stability of the empirical
//! ratio), never absolute domination.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exact_llt::{sn_pmf, SnConfig};
use crate::lattice::LatticeLaw;
use crate::norming::NormingSeq;

/// One row of the correlation comparison.
#[derive(Clone, Copy, Debug)]
pub struct CorrReport {
    pub m: u64,
    pub n: u64,
    pub kappa: f64,
    pub lhs: f64,
    pub lhs_err: f64,
    pub bound_i: f64,
    pub bound_ii: f64,
    pub power_decay: f64,
}

/// Exact `b_m b_n |P(S_m=κ_m, S_n=κ_n) - P(S_m=κ_m) P(S_n=κ_n)|` with a
/// propagated certificate, via the independence identity.
pub fn joint_minus_product(
    law: &LatticeLaw,
    seq: &NormingSeq,
    m: u64,
    n: u64,
    kappa: f64,
    cfg: &SnConfig,
) -> Result<(f64, f64)> {
    if m >= n || m < 1 {
        return Err(Error::IndexRange(format!("need 1 <= m < n, got m={m}, n={n}")));
    }
    let km = seq.kappa_site(kappa, m)?;
    let kn = seq.kappa_site(kappa, n)?;
    let bm = seq.bn(m)?;
    let bn = seq.bn(n)?;

    let pm = sn_pmf(law, m, cfg)?;
    let pnm = sn_pmf(law, n - m, cfg)?;
    let pn = sn_pmf(law, n, cfg)?;

    let a = bm * pm.prob_at(km);
    let a_err = bm * pm.entry_err();
    let b = bn * (pnm.prob_at(kn - km) - pn.prob_at(kn)).abs();
    let b_err = bn * (pnm.entry_err() + pn.entry_err());

    let lhs = a * b;
    let err = a * b_err + b * a_err + a_err * b_err;
    Ok((lhs, err))
}

/// First upper bound: `(n/(n-m))^{1/alpha} L(n)/L(n-m) + 1`, constant 1.
pub fn bound_i(seq: &NormingSeq, m: u64, n: u64) -> Result<f64> {
    if m >= n || m < 1 {
        return Err(Error::IndexRange(format!("need 1 <= m < n, got m={m}, n={n}")));
    }
    let alpha = seq.alpha();
    let ratio = (n as f64 / (n - m) as f64).powf(1.0 / alpha);
    Ok(ratio * seq.l_at(n)? / seq.l_at(n - m)? + 1.0)
}

/// Refined upper bound with the spectral-gap exponential terms, the
/// running-sup term and the skew term, constant 1:
///
/// `L(n) { n^{1/alpha}(e^{-(n-m)c} + e^{-nc})
///        + (m/n)(1-m/n)^{-(1+1/alpha)} (1 + M(n^{1+1/alpha}))
///        + (m/n)^{eta/alpha} L(m)^eta (1-m/n)^{-(eta+1)/alpha} }`
pub fn bound_ii(
    law: &LatticeLaw,
    seq: &NormingSeq,
    m: u64,
    n: u64,
    eta: f64,
) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::param("eta", "must lie in (0, 1]"));
    }
    let alpha = seq.alpha();
    let eps = seq.epsilon();
    let validity = eps.powf(-alpha / (alpha + 1.0));
    if (n as f64) <= m as f64 + validity {
        return Err(Error::IndexRange(format!(
            "bound ii needs n > m + eps^(-alpha/(alpha+1)) = m + {validity:.2}"
        )));
    }
    let gap = spectral_gap(law, eps)?;
    let ln = seq.l_at(n)?;
    let r = m as f64 / n as f64;
    let exp_terms =
        (n as f64).powf(1.0 / alpha) * ((-((n - m) as f64) * gap.c_hat).exp() + (-(n as f64) * gap.c_hat).exp());
    let mid = r / (1.0 - r).powf(1.0 + 1.0 / alpha)
        * (1.0 + seq.sup_h((n as f64).powf(1.0 + 1.0 / alpha))?);
    let skew = r.powf(eta / alpha) * seq.l_at(m)?.powf(eta)
        / (1.0 - r).powf((eta + 1.0) / alpha);
    Ok(ln * (exp_terms + mid + skew))
}

/// Power-decay bound `tilde_L(n) (m/n)^rho`, constant 1, for `n >= 2m`.
pub fn power_decay_bound(seq: &NormingSeq, m: u64, n: u64) -> Result<f64> {
    if m < 1 || n < 2 * m {
        return Err(Error::IndexRange(format!(
            "power-decay bound needs n >= 2m, got m={m}, n={n}"
        )));
    }
    Ok(seq.tilde_l(n)? * (m as f64 / n as f64).powf(seq.rho()))
}

/// Spectral gap of a law: `c = -max log|φ(t)|` over `eps <= |t| <= pi`,
/// together with the first integer `x0` where `e^{c x} >= x^{2/alpha}`.
#[derive(Clone, Copy, Debug)]
pub struct SpectralGap {
    pub c_hat: f64,
    pub at_t: f64,
    pub x0: u64,
}

/// Grid scan of the modulus of the characteristic function, cached per law.
///
/// The neglected analytic tail is added to the modulus before taking logs,
/// so the returned gap is a certified lower bound on the true one.
pub fn spectral_gap(law: &LatticeLaw, epsilon: f64) -> Result<SpectralGap> {
    if !(epsilon > 0.0 && epsilon < core::f64::consts::PI) {
        return Err(Error::param("epsilon", "need 0 < epsilon < pi"));
    }
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), SpectralGap>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (law.content_id(), epsilon.to_bits());
    if let Some(hit) = cache.lock().expect("gap cache").get(&key) {
        return Ok(*hit);
    }

    let upper = |t: f64| {
        let (head, neglected) = law.char_fn_head(t);
        (head.norm() + neglected).min(1.0)
    };
    const GRID: usize = 10_000;
    let mut best_t = epsilon;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=GRID {
        let t = epsilon + (core::f64::consts::PI - epsilon) * i as f64 / GRID as f64;
        let v = upper(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    // local 3-point refinement around the grid maximum
    let mut step = (core::f64::consts::PI - epsilon) / GRID as f64;
    for _ in 0..40 {
        step *= 0.5;
        for t in [best_t - step, best_t + step] {
            if t >= epsilon && t <= core::f64::consts::PI {
                let v = upper(t);
                if v > best {
                    best = v;
                    best_t = t;
                }
            }
        }
    }
    let c_hat = -best.ln();
    if !(c_hat > 0.0) {
        return Err(Error::InvalidLaw(
            "no spectral gap: |φ| reaches 1 inside (0, 2π); span must be 1".into(),
        ));
    }

    // smallest x0 with e^{c x} >= x^{2/alpha} for every x >= x0: the map
    // x -> c x - (2/alpha) ln x is convex with a single upper crossing
    let alpha = law.alpha();
    let g = |x: f64| c_hat * x - (2.0 / alpha) * x.ln();
    let x_min = (2.0 / alpha) / c_hat;
    let x0 = if g(x_min) >= 0.0 {
        1
    } else {
        let mut hi = x_min.max(2.0);
        let mut guard = 0;
        while g(hi) < 0.0 {
            hi *= 2.0;
            guard += 1;
            if guard > 80 {
                return Err(Error::InvalidLaw("spectral gap too small to fit x0".into()));
            }
        }
        let mut lo = x_min.floor().max(1.0) as u64;
        let mut hi = hi.ceil() as u64;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if g(mid as f64) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let gap = SpectralGap {
        c_hat,
        at_t: best_t,
        x0,
    };
    cache.lock().expect("gap cache").insert(key, gap);
    Ok(gap)
}

/// Full report row at `(m, n)`.
pub fn corr_report(
    law: &LatticeLaw,
    seq: &NormingSeq,
    m: u64,
    n: u64,
    kappa: f64,
    cfg: &SnConfig,
) -> Result<CorrReport> {
    let (lhs, lhs_err) = joint_minus_product(law, seq, m, n, kappa, cfg)?;
    let b_i = bound_i(seq, m, n)?;
    let b_ii = bound_ii(law, seq, m, n, seq.eta()).unwrap_or(f64::NAN);
    let coro = if n >= 2 * m {
        power_decay_bound(seq, m, n)?
    } else {
        f64::NAN
    };
    Ok(CorrReport {
        m,
        n,
        kappa,
        lhs,
        lhs_err,
        bound_i: b_i,
        bound_ii: b_ii,
        power_decay: coro,
    })
}

/// Least-squares line through `(x, y)` points: `(slope, intercept, rms)`.
pub fn fit_log_slope(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, have: n });
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::TooFewPoints { need: 2, have: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut rss = 0.0;
    for (x, y) in points {
        let e = y - (intercept + slope * x);
        rss += e * e;
    }
    Ok((slope, intercept, (rss / nf).sqrt()))
}

/// Result of [`exponent_fit`].
#[derive(Clone, Debug)]
pub struct ExponentFit {
    /// slope of `log lhs` against `log(m/n)`
    pub slope: f64,
    pub intercept: f64,
    /// root-mean-square residual of the fit
    pub rms_residual: f64,
    /// `(m, lhs, certified error)` rows that entered the fit
    pub used: Vec<(u64, f64, f64)>,
    /// points dropped by the certificate mask `lhs > 10 err`
    pub masked: usize,
}

/// Fit the decay exponent of the correlation quantity in `m/n`.
///
/// Points must satisfy `n >= 2m` and `m >= x0`; rows whose value is not at
/// least ten times its certificate are masked out.
pub fn exponent_fit(
    law: &LatticeLaw,
    seq: &NormingSeq,
    n: u64,
    m_grid: &[u64],
    kappa: f64,
    cfg: &SnConfig,
) -> Result<ExponentFit> {
    let gap = spectral_gap(law, seq.epsilon())?;
    let mut pts = Vec::new();
    let mut used = Vec::new();
    let mut masked = 0usize;
    for &m in m_grid {
        if m < gap.x0 || n < 2 * m {
            return Err(Error::IndexRange(format!(
                "m={m} outside the validity range [x0={}, n/2={}]",
                gap.x0,
                n / 2
            )));
        }
        let (lhs, err) = joint_minus_product(law, seq, m, n, kappa, cfg)?;
        if lhs <= 10.0 * err || lhs <= 0.0 {
            masked += 1;
            continue;
        }
        pts.push(((m as f64 / n as f64).ln(), lhs.ln()));
        used.push((m, lhs, err));
    }
    if pts.len() < 4 {
        return Err(Error::TooFewPoints {
            need: 4,
            have: pts.len(),
        });
    }
    let (slope, intercept, rms) = fit_log_slope(&pts)?;
    Ok(ExponentFit {
        slope,
        intercept,
        rms_residual: rms,
        used,
        masked,
    })
}

/// Cumulative maxima of `lhs / power_decay_bound` over growing dyadic grids.
#[derive(Clone, Debug)]
pub struct DominationScan {
    /// `(n_cap, max ratio over all valid dyadic (m, n) with n <= n_cap)`
    pub levels: Vec<(u64, f64)>,
}

/// Empirical constant of the power-decay bound over dyadic `(m, n)` grids,
/// reported cumulatively at each requested grid extension.
pub fn domination_scan(
    law: &LatticeLaw,
    seq: &NormingSeq,
    kappa: f64,
    n_exponents: &[u32],
    cfg: &SnConfig,
) -> Result<DominationScan> {
    if n_exponents.is_empty() {
        return Err(Error::param("n_exponents", "need at least one grid level"));
    }
    let gap = spectral_gap(law, seq.epsilon())?;
    let mut levels = Vec::new();
    let mut running = 0.0f64;
    let mut prev_cap = 0u64;
    for &e in n_exponents {
        let n_cap = 1u64 << e;
        let mut n = 2u64.max(prev_cap * 2).max(4);
        // dyadic n values new to this extension
        while n <= n_cap {
            let mut m = 1u64;
            while 2 * m <= n {
                if m >= gap.x0 {
                    let (lhs, _err) = joint_minus_product(law, seq, m, n, kappa, cfg)?;
                    let bound = power_decay_bound(seq, m, n)?;
                    running = running.max(lhs / bound);
                }
                m *= 2;
            }
            n *= 2;
        }
        prev_cap = n_cap;
        levels.push((n_cap, running));
    }
    Ok(DominationScan { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norming::SlowlyVarying;

    fn lazy() -> (LatticeLaw, NormingSeq) {
        let law = LatticeLaw::lazy_walk();
        let seq = law.natural_norming().unwrap();
        (law, seq)
    }

    #[test]
    fn hand_enumerated_lazy_case() {
        let (law, seq) = lazy();
        let (lhs, err) = joint_minus_product(&law, &seq, 1, 2, 0.0, &SnConfig::default()).unwrap();
        // b_1 P(S_1=0) * b_2 |P(S_1=0) - P(S_2=0)| = b_1 b_2 (1/2)(1/8)
        let expect = (0.5f64).sqrt() * 1.0 / 16.0;
        assert!((lhs - expect).abs() <= err + 1e-15, "lhs {lhs} vs {expect}");
    }

    #[test]
    fn zero_factor_gives_zero() {
        let (law, seq) = lazy();
        // kappa = 3 puts kappa_1 = 2, unreachable in one step
        let (lhs, _) = joint_minus_product(&law, &seq, 1, 2, 3.0, &SnConfig::default()).unwrap();
        assert_eq!(lhs, 0.0);
    }

    #[test]
    fn independence_identity_against_path_enumeration() {
        // exact joint law by integer-weight path enumeration (weights 1,2,1
        // per step, denominator 4^n)
        let (law, seq) = lazy();
        let m = 3u64;
        let n = 7u64;
        let kappa = 0.0;
        let km = seq.kappa_site(kappa, m).unwrap();
        let kn = seq.kappa_site(kappa, n).unwrap();

        let steps = [(-1i64, 1u128), (0, 2), (1, 1)];
        let mut joint: u128 = 0;
        let mut marg_n: u128 = 0;
        // enumerate 3^n weighted paths, tracking visits of (S_m, S_n)
        #[allow(clippy::too_many_arguments)]
        fn walk(
            depth: u64,
            s: i64,
            w: u128,
            m: u64,
            n: u64,
            km: i64,
            kn: i64,
            sm_hit: bool,
            steps: &[(i64, u128); 3],
            joint: &mut u128,
            marg_n: &mut u128,
        ) {
            if depth == n {
                if sm_hit && s == kn {
                    *joint += w;
                }
                if s == kn {
                    *marg_n += w;
                }
                return;
            }
            for (d, wd) in steps {
                let s2 = s + d;
                let hit = if depth + 1 == m { s2 == km } else { sm_hit };
                walk(depth + 1, s2, w * wd, m, n, km, kn, hit, steps, joint, marg_n);
            }
        }
        // marginal at m over 3^m paths
        fn walk_m(
            depth: u64,
            s: i64,
            w: u128,
            m: u64,
            km: i64,
            steps: &[(i64, u128); 3],
            acc: &mut u128,
        ) {
            if depth == m {
                if s == km {
                    *acc += w;
                }
                return;
            }
            for (d, wd) in steps {
                walk_m(depth + 1, s + d, w * wd, m, km, steps, acc);
            }
        }
        let mut mm = 0u128;
        walk_m(0, 0, 1, m, km, &steps, &mut mm);
        walk(0, 0, 1, m, n, km, kn, false, &steps, &mut joint, &mut marg_n);
        let denom = 4f64.powi(n as i32);
        let p_joint = joint as f64 / denom;
        let p_m = mm as f64 / 4f64.powi(m as i32);
        let p_n = marg_n as f64 / denom;

        let bm = seq.bn(m).unwrap();
        let bn2 = seq.bn(n).unwrap();
        let exact = bm * bn2 * (p_joint - p_m * p_n).abs();
        let (lhs, _err) = joint_minus_product(&law, &seq, m, n, kappa, &SnConfig::default()).unwrap();
        // the engine is in exact dyadic arithmetic at these sizes
        assert!((lhs - exact).abs() < 1e-15, "{lhs} vs {exact}");
    }

    #[test]
    fn bound_i_plug_ins() {
        // L ≡ 1 at alpha = 2: m = n/2 gives sqrt(2) + 1
        let seq = NormingSeq::new(2.0, SlowlyVarying::constant(1.0).unwrap()).unwrap();
        let v = bound_i(&seq, 512, 1024).unwrap();
        assert!((v - (2f64.sqrt() + 1.0)).abs() < 1e-12);
        // m = 1, n large: tends to 2
        let v = bound_i(&seq, 1, 1 << 20).unwrap();
        assert!((v - 2.0).abs() < 1e-4);
        // solved norming path
        let seq = NormingSeq::new(1.5, SlowlyVarying::log_power(0.4).unwrap()).unwrap();
        let expect = (1024f64 / 768.0).powf(1.0 / 1.5) * seq.l_at(1024).unwrap()
            / seq.l_at(768).unwrap()
            + 1.0;
        assert!((bound_i(&seq, 256, 1024).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn bound_ii_structure() {
        let (law, seq) = lazy();
        let v = bound_ii(&law, &seq, 8, 64, 1.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
        // exponential terms negligible at this depth: the value is close to
        // the two polynomial terms
        let gap = spectral_gap(&law, seq.epsilon()).unwrap();
        assert!((-(56.0) * gap.c_hat).exp() < 1e-1);
        // m/n -> 0 with n fixed: bound shrinks toward 0
        let small = bound_ii(&law, &seq, 2, 1 << 14, 1.0).unwrap();
        let large = bound_ii(&law, &seq, 1 << 12, 1 << 14, 1.0).unwrap();
        assert!(small < large);
        assert!(small < 0.01);
        // validity range enforced
        assert!(bound_ii(&law, &seq, 8, 9, 1.0).is_err());
    }

    #[test]
    fn power_decay_plug_ins() {
        let seq = NormingSeq::new(2.0, SlowlyVarying::constant(0.5).unwrap()).unwrap();
        assert!((seq.rho() - 0.25).abs() < 1e-15);
        let n = 1024u64;
        let tl = seq.tilde_l(n).unwrap();
        let v = power_decay_bound(&seq, n / 4, n).unwrap();
        assert!((v - tl * 0.25f64.powf(0.25)).abs() < 1e-12);
        let v = power_decay_bound(&seq, n / 2, n).unwrap();
        assert!((v - tl * 0.5f64.powf(0.25)).abs() < 1e-12);
        assert!(power_decay_bound(&seq, n, n).is_err());
    }

    #[test]
    fn power_decay_with_log_norming() {
        let seq = NormingSeq::new(1.5, SlowlyVarying::log_power(0.4).unwrap()).unwrap();
        let v = power_decay_bound(&seq, 1 << 6, 1 << 12).unwrap();
        let expect = seq.tilde_l(1 << 12).unwrap() * (1f64 / 64.0).powf(seq.rho());
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn bounds_monotone_in_m_for_constant_l() {
        let (law, seq) = lazy();
        let n = 1u64 << 12;
        let mut prev = (0.0, 0.0, 0.0);
        for m in [64u64, 128, 256, 512, 1024, 2048] {
            let bi = bound_i(&seq, m, n).unwrap();
            let bii = bound_ii(&law, &seq, m, n, 1.0).unwrap();
            let co = power_decay_bound(&seq, m, n).unwrap();
            assert!(bi > 0.0 && bii > 0.0 && co > 0.0);
            assert!(bi >= prev.0 && bii >= prev.1 && co >= prev.2, "m={m}");
            prev = (bi, bii, co);
        }
    }

    #[test]
    fn spectral_gap_lazy_walk() {
        let (law, _) = lazy();
        let gap = spectral_gap(&law, 0.5).unwrap();
        // |phi| = 1/2 + cos(t)/2 is decreasing: max sits at t = 0.5
        let expect = -(0.5 + 0.5 * 0.5f64.cos()).ln();
        assert!((gap.c_hat - expect).abs() < 1e-6, "c = {}", gap.c_hat);
        assert!((gap.at_t - 0.5).abs() < 1e-3);
        assert_eq!(gap.x0, 67);
    }

    #[test]
    fn regression_self_test() {
        // synthetic lhs ∝ (m/n)^1
        let pts: Vec<(f64, f64)> = (1..20)
            .map(|i| {
                let x = (i as f64 / 64.0).ln();
                (x, 3.0 + x)
            })
            .collect();
        let (slope, intercept, rms) = fit_log_slope(&pts).unwrap();
        assert!((slope - 1.0).abs() < 1e-6);
        assert!((intercept - 3.0).abs() < 1e-6);
        assert!(rms < 1e-9);
    }

    #[test]
    fn exponent_fit_lazy_walk() {
        let (law, seq) = lazy();
        let n = 1u64 << 10;
        let grid: Vec<u64> = [128u64, 181, 256, 362, 512].into();
        let fit = exponent_fit(&law, &seq, n, &grid, 0.0, &SnConfig::default()).unwrap();
        assert!(fit.masked == 0);
        assert!(
            fit.slope >= seq.rho() - 0.1,
            "slope {} vs rho {}",
            fit.slope,
            seq.rho()
        );
        // the exact lazy-walk decay over this range follows
        // (1-r)^{-1/2} - 1 in r = m/n, whose dyadic log-slope sits near 1.3
        assert!((0.8..2.0).contains(&fit.slope), "slope {}", fit.slope);
    }

    #[test]
    fn exponent_fit_needs_enough_points() {
        let (law, seq) = lazy();
        let r = exponent_fit(&law, &seq, 1 << 10, &[128, 256], 0.0, &SnConfig::default());
        assert!(matches!(r, Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn exponent_fit_validity_range() {
        let (law, seq) = lazy();
        // m below x0 = 67
        let r = exponent_fit(&law, &seq, 1 << 10, &[32, 128, 256, 512], 0.0, &SnConfig::default());
        assert!(matches!(r, Err(Error::IndexRange(_))));
    }

    #[test]
    fn mirror_symmetry_of_lhs() {
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        let seq = law.natural_norming().unwrap();
        let mir = law.mirrored();
        let cfg = SnConfig::with_tol(1e-4);
        let (a, ea) = joint_minus_product(&law, &seq, 2, 6, 0.0, &cfg).unwrap();
        let (b, eb) = joint_minus_product(&mir, &seq, 2, 6, 0.0, &cfg).unwrap();
        assert!((a - b).abs() <= (ea + eb).max(1e-12), "{a} vs {b}");
    }

    #[test]
    fn domination_scan_is_stable() {
        let (law, seq) = lazy();
        let scan = domination_scan(&law, &seq, 0.0, &[8, 9, 10], &SnConfig::default()).unwrap();
        let c: Vec<f64> = scan.levels.iter().map(|l| l.1).collect();
        assert!(c.iter().all(|v| v.is_finite() && *v > 0.0));
        assert!(c[2] <= 1.25 * c[0], "blow-up across extensions: {c:?}");
    }
}
