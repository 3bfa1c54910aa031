//! Certified exact distributions of the partial sums `S_n`.
//!
//! The engine convolves the one-step law with itself by binary doubling
//! (dyadic powers are memoized and combined per set bit of `n`) or by an
//! incremental sweep that visits every `n` up to a horizon. Supports are
//! kept on finite windows; every truncation is accounted in two
//! certificates carried alongside the masses:
//!
//! * `err_bound`: a bound on the total variation `Σ_k |P(S_n=k) - q(k)|`
//!   accumulated through one-step pre-truncation, window clipping, clamped
//!   transform noise and roundoff;
//! * `entry_err`: a bound on `sup_k |P(S_n=k) - q(k)|`, which stays far
//!   below `err_bound` because clipped mass re-enters a single site only
//!   after convolving against a bounded density.
//!
//! The pmf is never renormalized; computed masses stay below the true ones
//! up to transform roundoff, so the certificates remain honest.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::lattice::LatticeLaw;
use crate::norming::NormingSeq;
use crate::stable::StableParams;

/// Tolerances and window policy for the convolution engine.
#[derive(Clone, Copy, Debug)]
pub struct SnConfig {
    /// target for the total-variation certificate
    pub tol: f64,
    /// window radius in units of `b_n`; doubled on certificate failure
    pub w_factor: f64,
    /// hard per-side window budget (sites)
    pub max_window: u64,
}

impl Default for SnConfig {
    fn default() -> Self {
        SnConfig {
            tol: 1e-6,
            w_factor: 40.0,
            max_window: 1 << 23,
        }
    }
}

impl SnConfig {
    pub fn with_tol(tol: f64) -> Self {
        SnConfig {
            tol,
            ..SnConfig::default()
        }
    }
}

/// The computed distribution of `S_n` on a finite window.
#[derive(Clone, Debug)]
pub struct SnPmf {
    n: u64,
    lo: i64,
    masses: Vec<f64>,
    err_bound: f64,
    entry_err: f64,
    sup: f64,
}

impl SnPmf {
    pub fn n(&self) -> u64 {
        self.n
    }
    /// Inclusive window `[lo, hi]`.
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.masses.len() as i64 - 1)
    }
    /// Total-variation certificate.
    pub fn err_bound(&self) -> f64 {
        self.err_bound
    }
    /// Per-entry certificate.
    pub fn entry_err(&self) -> f64 {
        self.entry_err
    }
    /// Largest computed mass.
    pub fn sup(&self) -> f64 {
        self.sup
    }
    pub fn total_mass(&self) -> f64 {
        crate::series::kahan_sum(self.masses.iter().copied())
    }
    /// Computed `P(S_n = k)`; zero outside the window.
    pub fn prob_at(&self, k: i64) -> f64 {
        let idx = k - self.lo;
        if idx < 0 || idx as usize >= self.masses.len() {
            0.0
        } else {
            self.masses[idx as usize]
        }
    }
    /// `(site, mass)` pairs across the window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .map(move |(i, &m)| (self.lo + i as i64, m))
    }

    fn refresh_sup(&mut self) {
        self.sup = self.masses.iter().copied().fold(0.0, f64::max);
    }
}

/// The one-step law materialized on a finite support, pre-truncated so that
/// `n_planned` convolutions keep the union-bound certificate below
/// `cfg.tol / 2`.
pub fn one_step_pmf(law: &LatticeLaw, cfg: &SnConfig, n_planned: u64) -> Result<SnPmf> {
    let drop_target = cfg.tol / (2.0 * n_planned.max(1) as f64);
    // total mass strictly beyond |x|, table suffix included
    let beyond = |x: u64| {
        let p = law.right_tail_prob(x as f64 + 0.5) + law.left_tail_prob(x as f64 + 0.5);
        p.value + p.bound
    };
    let mut reach: u64 = law
        .table()
        .iter()
        .map(|(k, _)| k.unsigned_abs())
        .max()
        .unwrap_or(1);
    if law.tail().cutoff().is_some() {
        let mut hi = reach.max(2);
        while beyond(hi) > drop_target {
            hi *= 2;
            if hi > cfg.max_window {
                return Err(Error::WindowTooLarge {
                    required: hi,
                    budget: cfg.max_window,
                });
            }
        }
        let mut lo = reach.max(2) / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if beyond(mid) > drop_target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        reach = hi;
    }

    let lo = -(reach as i64);
    let len = 2 * reach as usize + 1;
    let mut masses = vec![0.0; len];
    for k in lo..=(reach as i64) {
        masses[(k - lo) as usize] = law.pmf(k);
    }
    let dropped =
        law.right_tail_prob(reach as f64 + 0.5) + law.left_tail_prob(reach as f64 + 0.5);
    let entry_err = law.pmf(reach as i64 + 1).max(law.pmf(-(reach as i64) - 1));
    let mut pmf = SnPmf {
        n: 1,
        lo,
        masses,
        err_bound: dropped.value + dropped.bound,
        entry_err: entry_err + dropped.bound,
        sup: 0.0,
    };
    pmf.refresh_sup();
    Ok(pmf)
}

fn validate_tol(cfg: &SnConfig) -> Result<()> {
    if !(cfg.tol > 0.0 && cfg.tol <= 1e-3) {
        return Err(Error::param("tol", "certificate tolerance must lie in (0, 1e-3]"));
    }
    Ok(())
}

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

/// Convolve two windowed pmfs and clip the result to `[-target_w, target_w]`.
fn convolve(a: &SnPmf, b: &SnPmf, target_w: u64) -> SnPmf {
    let la = a.masses.len();
    let lb = b.masses.len();
    let out_lo = a.lo + b.lo;
    let out_len = la + lb - 1;
    let mut out;
    let entry_round;
    let tv_round;

    if la.min(lb) <= 64 || la * lb <= 1 << 16 {
        // direct convolution: nonnegative, no clamping needed
        out = vec![0.0; out_len];
        let (small, big, _flip) = if la <= lb { (a, b, false) } else { (b, a, true) };
        for (i, &ms) in small.masses.iter().enumerate() {
            if ms == 0.0 {
                continue;
            }
            for (j, &mb) in big.masses.iter().enumerate() {
                out[i + j] += ms * mb;
            }
        }
        entry_round = la.min(lb) as f64 * f64::EPSILON;
        tv_round = la.min(lb) as f64 * f64::EPSILON;
    } else {
        let fft_len = out_len.next_power_of_two();
        let mut fa: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); fft_len];
        let mut fb: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); fft_len];
        for (i, &m) in a.masses.iter().enumerate() {
            fa[i].re = m;
        }
        for (i, &m) in b.masses.iter().enumerate() {
            fb[i].re = m;
        }
        {
            let mut pl = planner().lock().expect("planner lock");
            let fwd = pl.plan_fft_forward(fft_len);
            fwd.process(&mut fa);
            fwd.process(&mut fb);
            for (x, y) in fa.iter_mut().zip(fb.iter()) {
                *x *= *y;
            }
            let inv = pl.plan_fft_inverse(fft_len);
            inv.process(&mut fa);
        }
        let scale = 1.0 / fft_len as f64;
        out = fa[..out_len].iter().map(|z| z.re * scale).collect();
        // per-entry transform roundoff: conservative length-based bound;
        // aggregate L1 roundoff via the L2 error of the transform pair
        entry_round = fft_len as f64 * f64::EPSILON;
        tv_round = (out_len as f64).sqrt()
            * 300.0
            * (fft_len as f64).log2()
            * f64::EPSILON;
    }

    // clamp transform noise, clip to the target window
    let mut clamped = 0.0;
    let mut dropped = 0.0;
    let mut max_dropped = 0.0f64;
    let w = target_w.min(1 << 62) as i64;
    let mut keep_lo = out_lo;
    let mut keep = Vec::new();
    for (i, v) in out.iter_mut().enumerate() {
        let site = out_lo + i as i64;
        if *v < 0.0 {
            clamped += -*v;
            *v = 0.0;
        }
        if site < -w || site > w {
            dropped += *v;
            max_dropped = max_dropped.max(*v);
        }
    }
    let start = (-w).saturating_sub(out_lo).clamp(0, out_len as i64) as usize;
    let end = (w.saturating_sub(out_lo).saturating_add(1)).clamp(0, out_len as i64) as usize;
    if start < end {
        keep_lo = out_lo + start as i64;
        keep.extend_from_slice(&out[start..end]);
    } else {
        keep.push(0.0);
    }

    // certificates: see the module docs for the recurrences
    let e_in = (a.err_bound * (b.sup + b.entry_err)).min(a.entry_err)
        + (b.err_bound * (a.sup + a.entry_err)).min(b.entry_err)
        + entry_round;
    let entry_err = e_in + max_dropped;
    let err_bound = a.err_bound + b.err_bound + dropped + clamped + tv_round;

    let mut r = SnPmf {
        n: a.n + b.n,
        lo: keep_lo,
        masses: keep,
        err_bound,
        entry_err,
        sup: 0.0,
    };
    r.refresh_sup();
    r
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct PowerKey {
    law: u64,
    j: u32,
    tol_bits: u64,
    wf_bits: u64,
    nclass: u32,
}

fn power_cache() -> &'static Mutex<HashMap<PowerKey, Arc<SnPmf>>> {
    static CACHE: OnceLock<Mutex<HashMap<PowerKey, Arc<SnPmf>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Window radius for the `S_m` stage.
fn stage_window(law: &LatticeLaw, seq: Option<&NormingSeq>, cfg: &SnConfig, m: u64, reach: u64) -> u64 {
    let scale = match seq {
        Some(s) => {
            let m_eff = m.max(s.n_start());
            s.bn(m_eff).unwrap_or((m as f64).powf(1.0 / law.alpha()))
        }
        None => (m as f64).powf(1.0 / law.alpha()),
    };
    let policy = (cfg.w_factor * scale).ceil() as u64;
    // never wider than the exact support, never narrower than one step
    policy.max(reach).min(m.saturating_mul(reach)).min(cfg.max_window)
}

fn run_doubling(law: &LatticeLaw, n: u64, cfg: &SnConfig) -> Result<SnPmf> {
    let seq = law.natural_norming().ok();
    let base = one_step_pmf(law, cfg, n)?;
    let reach = base.window().1.unsigned_abs();
    if n == 1 {
        return Ok(base);
    }

    let nclass = 64 - (n - 1).leading_zeros();
    let key_for = |j: u32| PowerKey {
        law: law.content_id(),
        j,
        tol_bits: cfg.tol.to_bits(),
        wf_bits: cfg.w_factor.to_bits(),
        nclass,
    };
    let fetch = |j: u32, cur: &Arc<SnPmf>| -> Arc<SnPmf> {
        if let Some(hit) = power_cache().lock().expect("cache lock").get(&key_for(j + 1)) {
            return hit.clone();
        }
        let next = Arc::new(convolve(
            cur,
            cur,
            stage_window(law, seq.as_ref(), cfg, 2 << j, reach),
        ));
        let mut cache = power_cache().lock().expect("cache lock");
        if cache.len() >= 64 {
            cache.clear();
        }
        cache.insert(key_for(j + 1), next.clone());
        next
    };

    // dyadic powers up to the top set bit, then one convolution per set bit
    let top = 63 - n.leading_zeros();
    let mut powers: Vec<Arc<SnPmf>> = Vec::with_capacity(top as usize + 1);
    let base = Arc::new(base);
    {
        let mut cache = power_cache().lock().expect("cache lock");
        cache.insert(key_for(0), base.clone());
    }
    powers.push(base);
    for j in 0..top {
        let next = fetch(j, &powers[j as usize]);
        powers.push(next);
    }

    let mut acc: Option<SnPmf> = None;
    let mut count = 0u64;
    for j in 0..=top {
        if n & (1 << j) != 0 {
            let p = &powers[j as usize];
            acc = Some(match acc {
                None => {
                    count = 1 << j;
                    (**p).clone()
                }
                Some(cur) => {
                    count += 1 << j;
                    convolve(&cur, p, stage_window(law, seq.as_ref(), cfg, count, reach))
                }
            });
        }
    }
    Ok(acc.expect("n >= 1 has set bits"))
}

/// Exact distribution of `S_n` with certified truncation accounting.
///
/// On certificate failure the window factor is doubled and the computation
/// restarted; the error reports the required window when the budget is hit.
pub fn sn_pmf(law: &LatticeLaw, n: u64, cfg: &SnConfig) -> Result<SnPmf> {
    if n < 1 {
        return Err(Error::param("n", "need n >= 1"));
    }
    validate_tol(cfg)?;
    let mut local = *cfg;
    for _ in 0..12 {
        let r = run_doubling(law, n, &local)?;
        if r.err_bound <= local.tol {
            return Ok(r);
        }
        local.w_factor *= 2.0;
    }
    let r = run_doubling(law, n, &local)?;
    Err(Error::CertificateFailure {
        bound: r.err_bound,
        tolerance: cfg.tol,
    })
}

/// Visit the distribution of `S_n` for every `n = 1..=n_max`.
///
/// One single-step convolution per `n`; the window grows with `b_n`. The
/// spectrum of the one-step law is reused across steps of equal transform
/// size.
pub fn sn_sweep(
    law: &LatticeLaw,
    n_max: u64,
    cfg: &SnConfig,
    mut visit: impl FnMut(u64, &SnPmf),
) -> Result<()> {
    if n_max < 1 {
        return Err(Error::param("n_max", "need n_max >= 1"));
    }
    validate_tol(cfg)?;
    let mut local = *cfg;
    'retry: for _ in 0..12 {
        let seq = law.natural_norming().ok();
        let base = one_step_pmf(law, &local, n_max)?;
        let reach = base.window().1.unsigned_abs();
        let mut acc = base.clone();
        let budget = local.tol;
        for n in 1..=n_max {
            if n > 1 {
                acc = convolve(
                    &acc,
                    &base,
                    stage_window(law, seq.as_ref(), &local, n, reach),
                );
            }
            if acc.err_bound > budget {
                local.w_factor *= 2.0;
                continue 'retry;
            }
            visit(n, &acc);
        }
        return Ok(());
    }
    Err(Error::CertificateFailure {
        bound: f64::NAN,
        tolerance: cfg.tol,
    })
}

/// `P(S_n = k)` with its certified per-entry bound.
pub fn local_prob(law: &LatticeLaw, n: u64, k: i64, cfg: &SnConfig) -> Result<(f64, f64)> {
    let pmf = sn_pmf(law, n, cfg)?;
    Ok((pmf.prob_at(k), pmf.entry_err()))
}

/// One pointwise local-limit comparison.
#[derive(Clone, Copy, Debug)]
pub struct LltRatio {
    /// `b_n P(S_n = kappa_n)`
    pub scaled_prob: f64,
    /// `g(kappa)`
    pub density: f64,
    pub ratio: f64,
    pub kappa_n: i64,
    pub err: f64,
}

/// Compare `b_n P(S_n = kappa_n)` against the stable density `g(kappa)`.
pub fn llt_ratio(
    law: &LatticeLaw,
    stable: &StableParams,
    seq: &NormingSeq,
    n: u64,
    kappa: f64,
    cfg: &SnConfig,
) -> Result<LltRatio> {
    let bn = seq.bn(n)?;
    let kappa_n = seq.kappa_site(kappa, n)?;
    let (p, e) = local_prob(law, n, kappa_n, cfg)?;
    let density = stable.density(kappa, (cfg.tol * 1e-3).min(1e-9))?;
    Ok(LltRatio {
        scaled_prob: bn * p,
        density,
        ratio: bn * p / density,
        kappa_n,
        err: bn * e,
    })
}

/// Result of [`uniform_bound_scan`].
#[derive(Clone, Debug)]
pub struct BoundScan {
    /// `max_n b_n max_k P(S_n = k)`
    pub c_hat: f64,
    pub at_n: u64,
    pub at_k: i64,
    /// per-n rows `(n, b_n * sup_k P(S_n=k))`
    pub rows: Vec<(u64, f64)>,
}

/// Scan `b_n sup_k P(S_n = k)` over a list of horizons.
pub fn uniform_bound_scan(
    law: &LatticeLaw,
    seq: &NormingSeq,
    n_list: &[u64],
    cfg: &SnConfig,
) -> Result<BoundScan> {
    if n_list.is_empty() {
        return Err(Error::param("n_list", "need at least one n"));
    }
    let mut sorted = n_list.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let max_n = *sorted.last().unwrap();

    let mut rows = Vec::with_capacity(sorted.len());
    let mut c_hat = f64::NEG_INFINITY;
    let mut at = (0u64, 0i64);

    let mut handle = |n: u64, pmf: &SnPmf| -> Result<()> {
        let bn = seq.bn(n)?;
        let (mut best_k, mut best) = (0i64, 0.0f64);
        for (k, m) in pmf.iter() {
            if m > best {
                best = m;
                best_k = k;
            }
        }
        rows.push((n, bn * best));
        if bn * best > c_hat {
            c_hat = bn * best;
            at = (n, best_k);
        }
        Ok(())
    };

    // dense lists ride the sweep; sparse ones go through the doubling path
    if sorted.len() as u64 * 8 >= max_n {
        let mut err = None;
        sn_sweep(law, max_n, cfg, |n, pmf| {
            if err.is_none() && sorted.binary_search(&n).is_ok() {
                if let Err(e) = handle(n, pmf) {
                    err = Some(e);
                }
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
    } else {
        for &n in &sorted {
            let pmf = sn_pmf(law, n, cfg)?;
            handle(n, &pmf)?;
        }
    }
    Ok(BoundScan {
        c_hat,
        at_n: at.0,
        at_k: at.1,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norming::SlowlyVarying;

    fn lazy() -> LatticeLaw {
        LatticeLaw::lazy_walk()
    }

    /// Exact dyadic-rational distribution of the lazy walk by integer DP:
    /// weights 1, 2, 1 over 4^n.
    fn lazy_exact(n: usize) -> Vec<(i64, f64)> {
        let mut w: Vec<u128> = vec![1, 2, 1]; // sites -1, 0, 1
        for _ in 1..n {
            let mut next = vec![0u128; w.len() + 2];
            for (i, &v) in w.iter().enumerate() {
                next[i] += v;
                next[i + 1] += 2 * v;
                next[i + 2] += v;
            }
            w = next;
        }
        let denom = 4f64.powi(n as i32);
        w.iter()
            .enumerate()
            .map(|(i, &v)| (i as i64 - n as i64, v as f64 / denom))
            .collect()
    }

    #[test]
    fn one_step_is_the_table() {
        let pmf = sn_pmf(&lazy(), 1, &SnConfig::default()).unwrap();
        assert_eq!(pmf.err_bound(), 0.0);
        assert_eq!(pmf.prob_at(0), 0.5);
        assert_eq!(pmf.prob_at(1), 0.25);
        assert_eq!(pmf.prob_at(-1), 0.25);
        assert_eq!(pmf.prob_at(2), 0.0);
    }

    #[test]
    fn two_steps_by_enumeration() {
        let pmf = sn_pmf(&lazy(), 2, &SnConfig::default()).unwrap();
        // 3x3 enumeration: P(S_2 = 0) = 2*(1/4)(1/4) + (1/2)^2 = 3/8
        assert_eq!(pmf.prob_at(0), 0.375);
        assert_eq!(pmf.prob_at(2), 0.0625);
        assert_eq!(pmf.prob_at(-2), 0.0625);
        assert_eq!(pmf.prob_at(1), 0.25);
    }

    #[test]
    fn lazy_walk_exact_rational_oracle() {
        // integer-weight DP gives exact dyadic rationals; the engine stays
        // in exact dyadic arithmetic for these sizes, so equality is exact
        for n in 1..=8usize {
            let pmf = sn_pmf(&lazy(), n as u64, &SnConfig::default()).unwrap();
            for (k, exact) in lazy_exact(n) {
                assert_eq!(pmf.prob_at(k), exact, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn doubling_matches_direct_iteration() {
        // same pre-truncated base, windows wide open: any difference is
        // transform roundoff
        for law in [
            lazy(),
            LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap(),
            LatticeLaw::zipf_skewed(1.5, 0.2, 0.05).unwrap(),
            LatticeLaw::log_sigma_family(1.5, 0.4).unwrap(),
            LatticeLaw::geometric_tail_counterexample(),
        ] {
            let n = 16u64;
            let cfg = SnConfig {
                tol: 1e-3,
                w_factor: 1e9,
                max_window: 1 << 23,
            };
            let base = one_step_pmf(&law, &cfg, n).unwrap();
            // direct iterated convolution, never windowed
            let mut direct = base.clone();
            for _ in 1..n {
                direct = convolve(&direct, &base, u64::MAX >> 1);
            }
            let fast = sn_pmf(&law, n, &cfg).unwrap();
            for (k, m) in direct.iter() {
                let d = (m - fast.prob_at(k)).abs();
                assert!(d <= 1e-12, "{} at k={k}: {d}", law.label());
            }
        }
    }

    #[test]
    fn zipf_sweep_matches_doubling() {
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        let cfg = SnConfig::with_tol(1e-4);
        let mut at_12 = None;
        sn_sweep(&law, 12, &cfg, |n, pmf| {
            if n == 12 {
                at_12 = Some(pmf.clone());
            }
        })
        .unwrap();
        let sweep = at_12.unwrap();
        let doubled = sn_pmf(&law, 12, &cfg).unwrap();
        let tol = sweep.entry_err() + doubled.entry_err() + 1e-12;
        for k in [-50i64, -3, 0, 1, 7, 50] {
            let d = (sweep.prob_at(k) - doubled.prob_at(k)).abs();
            assert!(d <= tol, "k={k}: {d} > {tol}");
        }
    }

    #[test]
    fn normalization_within_certificate() {
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        let cfg = SnConfig::with_tol(1e-4);
        let pmf = sn_pmf(&law, 64, &cfg).unwrap();
        let mass = pmf.total_mass();
        assert!(mass <= 1.0 + 1e-12, "mass {mass}");
        assert!(mass >= 1.0 - pmf.err_bound(), "mass {mass} err {}", pmf.err_bound());
        assert!(pmf.err_bound() <= 1e-4);
    }

    #[test]
    fn symmetric_pmf_is_symmetric() {
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        let pmf = sn_pmf(&law, 8, &SnConfig::with_tol(1e-4)).unwrap();
        for k in 0..200i64 {
            let d = (pmf.prob_at(k) - pmf.prob_at(-k)).abs();
            assert!(d < 1e-12, "k={k}");
        }
    }

    #[test]
    fn parseval_consistency() {
        // Σ_k q(k) e^{itk} must match φ(t)^n within the mass certificate
        let cfg = SnConfig::with_tol(1e-6);
        for (law, slack) in [
            (lazy(), 1e-8),
            (LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap(), 1e-6),
        ] {
            for n in [4u64, 16, 64] {
                let pmf = sn_pmf(&law, n, &cfg).unwrap();
                for t in [0.1f64, 0.7, 2.2] {
                    let phi_n = {
                        let p = law.char_fn(t);
                        p.powu(n as u32)
                    };
                    let mut sum = Complex64::new(0.0, 0.0);
                    for (k, m) in pmf.iter() {
                        let arg = t * k as f64;
                        sum += Complex64::new(arg.cos() * m, arg.sin() * m);
                    }
                    let d = (sum - phi_n).norm();
                    assert!(
                        d <= pmf.err_bound() + slack,
                        "{} n={n} t={t}: {d} > {} + {slack}",
                        law.label(),
                        pmf.err_bound()
                    );
                }
            }
        }
    }

    #[test]
    fn window_growth_never_adds_more_than_certificate() {
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        let narrow = sn_pmf(
            &law,
            64,
            &SnConfig {
                tol: 1e-3,
                w_factor: 20.0,
                max_window: 1 << 23,
            },
        )
        .unwrap();
        let wide = sn_pmf(&law, 64, &SnConfig::with_tol(1e-5)).unwrap();
        for (k, m) in narrow.iter() {
            let grown = wide.prob_at(k) - m;
            assert!(
                grown <= narrow.entry_err() + wide.entry_err(),
                "k={k}: grew by {grown}"
            );
        }
    }

    #[test]
    fn budget_error_carries_required_window() {
        let law = LatticeLaw::zipf_symmetric(0.5, 0.1).unwrap();
        let r = sn_pmf(
            &law,
            4,
            &SnConfig {
                tol: 1e-8,
                w_factor: 40.0,
                max_window: 1 << 16,
            },
        );
        match r {
            Err(Error::WindowTooLarge { required, budget }) => {
                assert!(required > budget);
            }
            other => panic!("expected WindowTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn gaussian_llt_anchor() {
        let law = lazy();
        let seq = law.natural_norming().unwrap();
        let stable = StableParams::gaussian();
        let r = llt_ratio(&law, &stable, &seq, 4096, 0.0, &SnConfig::default()).unwrap();
        let expect = 1.0 / (2.0 * core::f64::consts::PI).sqrt();
        assert!(
            (r.scaled_prob - expect).abs() < 0.01 * expect,
            "b_n P = {}",
            r.scaled_prob
        );
        assert!((r.ratio - 1.0).abs() < 0.01);
    }

    #[test]
    fn far_tail_kappa_outside_window() {
        let law = lazy();
        let seq = law.natural_norming().unwrap();
        let stable = StableParams::gaussian();
        // kappa = 10 puts kappa_n = 28 outside the exact support [-16, 16]
        let r = llt_ratio(&law, &stable, &seq, 16, 10.0, &SnConfig::default()).unwrap();
        assert_eq!(r.scaled_prob, 0.0);
        assert!(r.err < 1e-9);
        // kappa = 5 stays inside but the mass there is negligible
        let r = llt_ratio(&law, &stable, &seq, 16, 5.0, &SnConfig::default()).unwrap();
        assert!(r.scaled_prob < 1e-5);
    }

    #[test]
    fn uniform_bound_lazy_converges_to_density_at_zero() {
        let law = lazy();
        let seq = law.natural_norming().unwrap();
        let n_list: Vec<u64> = (1..=256).collect();
        let scan = uniform_bound_scan(&law, &seq, &n_list, &SnConfig::default()).unwrap();
        let g0 = 1.0 / (2.0 * core::f64::consts::PI).sqrt();
        assert!(scan.c_hat.is_finite());
        assert!((scan.c_hat - g0).abs() < 0.002, "C = {}", scan.c_hat);
        // the sup scales like g(0) for large n: flat trend near the density
        let late: Vec<f64> = scan.rows[200..].iter().map(|r| r.1).collect();
        for v in late {
            assert!((v - g0).abs() < 0.001);
        }
    }

    #[test]
    fn uniform_bound_single_n() {
        let law = lazy();
        let seq = law.natural_norming().unwrap();
        let scan = uniform_bound_scan(&law, &seq, &[1], &SnConfig::default()).unwrap();
        // b_1 max_k pmf = sqrt(1/2) * 1/2
        let expect = (0.5f64).sqrt() * 0.5;
        assert!((scan.c_hat - expect).abs() < 1e-12);
        assert_eq!(scan.at_n, 1);
        assert_eq!(scan.at_k, 0);
    }

    #[test]
    fn uniform_bound_zipf_not_exploding() {
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        let seq = law.natural_norming().unwrap();
        let n_list: Vec<u64> = (4..=10).map(|j| 1 << j).collect();
        let scan = uniform_bound_scan(&law, &seq, &n_list, &SnConfig::with_tol(1e-4)).unwrap();
        assert!(scan.c_hat.is_finite() && scan.c_hat < 1.0);
        // monotone-bounded: consecutive scans of growing grids agree
        let shorter = uniform_bound_scan(
            &law,
            &seq,
            &n_list[..4],
            &SnConfig::with_tol(1e-4),
        )
        .unwrap();
        assert!(scan.c_hat <= shorter.c_hat.max(0.5) + 1e-9);
    }

    #[test]
    fn kappa_site_rounding() {
        let law = lazy();
        let seq = law.natural_norming().unwrap();
        // b_8 = 2: kappa = 1 -> site 2
        assert_eq!(seq.kappa_site(1.0, 8).unwrap(), 2);
        assert_eq!(seq.kappa_site(0.0, 8).unwrap(), 0);
        // ties round toward the smaller site: 0.3 * 16 = 4.8 -> 5, and a
        // constant-h sequence with b = 16 at n = 4096 (alpha 2, h = 1/16)
        let seq16 = NormingSeq::new(2.0, SlowlyVarying::constant(1.0 / 16.0).unwrap()).unwrap();
        assert_eq!(seq16.kappa_site(0.3, 4096).unwrap(), 5);
        // exact half goes down
        let seq4 = NormingSeq::new(2.0, SlowlyVarying::constant(1.0).unwrap()).unwrap();
        assert_eq!(seq4.bn(4).unwrap(), 2.0);
        assert_eq!(seq4.kappa_site(0.75, 4).unwrap(), 1); // 1.5 -> 1
        assert_eq!(seq4.kappa_site(-0.75, 4).unwrap(), -2); // -1.5 -> -2
    }
}
