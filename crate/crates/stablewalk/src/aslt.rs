//! Logarithmically averaged local hits along simulated paths.
//!
//! One path tracks `S_n` incrementally and accumulates
//! `A_N = (1/log N) Σ_{n<=N} (b_n/n) 1{S_n = κ_n}`. The target sites `κ_n`
//! come from the shared nearest-site rule on `NormingSeq`, the weights from
//! the same solved `b_n`, and the exact expectation of `A_N` is available
//! through the convolution engine, the strongest identity a finite-horizon
//! experiment can check.
//!
//! Paths draw from counter-based streams, so studies parallelize over seeds
//! and still reduce deterministically.

use crate::error::{Error, Result};
use crate::exact_llt::{sn_sweep, SnConfig};
use crate::lattice::{LatticeLaw, TailDescriptor};
use crate::norming::NormingSeq;
use crate::rng::SeededStream;
use crate::stable::StableParams;

/// One simulated path with its running logarithmic averages.
#[derive(Clone, Debug, PartialEq)]
pub struct AsltRun {
    pub seed: u64,
    pub kappa: f64,
    pub horizon: u64,
    /// `(M, A_M)` at each requested checkpoint
    pub checkpoints: Vec<(u64, f64)>,
    /// number of indices with `S_n = κ_n`
    pub hits: u64,
    /// `A_N` at the horizon
    pub final_average: f64,
}

/// The averaging scope excludes laws outside the almost-sure theory: the
/// index must exceed 1, and at `alpha = 2` only finite-variance laws whose
/// squared-tail product is slowly varying qualify.
fn check_scope(law: &LatticeLaw) -> Result<()> {
    if law.alpha() <= 1.0 {
        return Err(Error::param(
            "law",
            "logarithmic averaging needs alpha > 1",
        ));
    }
    if law.alpha() == 2.0 && !matches!(law.tail(), TailDescriptor::None) {
        return Err(Error::param(
            "law",
            "alpha = 2 averaging needs bounded support; heavy and geometric \
             tails fall outside the verified hypotheses",
        ));
    }
    if law.span() != 1 {
        return Err(Error::param("law", "averaging is implemented for span 1"));
    }
    Ok(())
}

/// Solved weights `b_n` for `n = 1..=n_max`; entries before the first
/// solvable index are zero and skipped by every consumer.
fn weight_table(seq: &NormingSeq, n_max: u64) -> Result<Vec<f64>> {
    let start = seq.n_start();
    let mut b = vec![0.0; n_max as usize + 1];
    for n in start..=n_max {
        b[n as usize] = seq.bn(n)?;
    }
    Ok(b)
}

fn kappa_table(b: &[f64], kappa: f64) -> Vec<i64> {
    b.iter().map(|&bn| (kappa * bn - 0.5).ceil() as i64).collect()
}

#[allow(clippy::too_many_arguments)]
fn run_path_on(
    law: &LatticeLaw,
    b: &[f64],
    kappa_sites: &[i64],
    start: u64,
    kappa: f64,
    n_max: u64,
    seed: u64,
    checkpoints: &[u64],
    force_hits: bool,
) -> AsltRun {
    let mut stream = SeededStream::new(seed, 0);
    let mut s: i64 = 0;
    let mut acc = 0.0;
    let mut hits = 0u64;
    let mut cp_iter = checkpoints.iter().peekable();
    let mut out = Vec::with_capacity(checkpoints.len());
    for n in 1..=n_max {
        s += law.sample_one(&mut stream);
        if n >= start {
            let hit = force_hits || s == kappa_sites[n as usize];
            if hit {
                hits += 1;
                acc += b[n as usize] / n as f64;
            }
        }
        while let Some(&&cp) = cp_iter.peek() {
            if cp == n {
                out.push((cp, acc / (cp as f64).ln()));
                cp_iter.next();
            } else {
                break;
            }
        }
    }
    let final_average = acc / (n_max as f64).ln();
    AsltRun {
        seed,
        kappa,
        horizon: n_max,
        checkpoints: out,
        hits,
        final_average,
    }
}

fn validate_checkpoints(checkpoints: &[u64], n_max: u64) -> Result<()> {
    for w in checkpoints.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::param("checkpoints", "must be strictly increasing"));
        }
    }
    if checkpoints.iter().any(|&c| c < 2 || c > n_max) {
        return Err(Error::param("checkpoints", "must lie in [2, n_max]"));
    }
    Ok(())
}

/// Simulate one seeded path up to `n_max`, recording the running average at
/// each checkpoint. Fully determined by `(seed, law, kappa, n_max)`.
pub fn run_path(
    law: &LatticeLaw,
    seq: &NormingSeq,
    kappa: f64,
    n_max: u64,
    seed: u64,
    checkpoints: &[u64],
) -> Result<AsltRun> {
    check_scope(law)?;
    if n_max < 2 {
        return Err(Error::param("n_max", "need n_max >= 2"));
    }
    validate_checkpoints(checkpoints, n_max)?;
    let b = weight_table(seq, n_max)?;
    let sites = kappa_table(&b, kappa);
    Ok(run_path_on(
        law,
        &b,
        &sites,
        seq.n_start(),
        kappa,
        n_max,
        seed,
        checkpoints,
        false,
    ))
}

/// `(1/log N) Σ_{n<=N} b_n/n`, the average with every indicator forced on.
pub fn logarithmic_weight_sum(seq: &NormingSeq, n_max: u64) -> Result<f64> {
    let b = weight_table(seq, n_max)?;
    let sum: f64 = (seq.n_start()..=n_max)
        .map(|n| b[n as usize] / n as f64)
        .sum();
    Ok(sum / (n_max as f64).ln())
}

/// Exact expectation of the logarithmic average, with its certificate:
/// `(1/log N) Σ (b_n/n) P(S_n = κ_n)`.
#[derive(Clone, Copy, Debug)]
pub struct ExpectedAverage {
    pub value: f64,
    pub err: f64,
}

pub fn expected_average(
    law: &LatticeLaw,
    seq: &NormingSeq,
    kappa: f64,
    n_max: u64,
    cfg: &SnConfig,
) -> Result<ExpectedAverage> {
    check_scope(law)?;
    if n_max < 2 {
        return Err(Error::param("n_max", "need n_max >= 2"));
    }
    let b = weight_table(seq, n_max)?;
    let sites = kappa_table(&b, kappa);
    let start = seq.n_start();
    let mut sum = 0.0;
    let mut err = 0.0;
    sn_sweep(law, n_max, cfg, |n, pmf| {
        if n >= start {
            let w = b[n as usize] / n as f64;
            sum += w * pmf.prob_at(sites[n as usize]);
            err += w * pmf.entry_err();
        }
    })?;
    let log_n = (n_max as f64).ln();
    Ok(ExpectedAverage {
        value: sum / log_n,
        err: err / log_n,
    })
}

/// Cross-seed summary of `A_N` at one horizon.
#[derive(Clone, Copy, Debug)]
pub struct StudyRow {
    pub n: u64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub mean: f64,
    /// empirical standard error of the mean across seeds
    pub std_err: f64,
    pub expected: f64,
    pub g_kappa: f64,
    /// `|mean - expected| <= 4 std_err`
    pub within_band: bool,
}

/// Run every seed to the largest horizon and summarize `A_N` at each grid
/// point against the exact expectation and the stable density.
///
/// Paths run in parallel over seeds; the reduction is ordered by seed index
/// so the output never depends on scheduling.
#[allow(clippy::too_many_arguments)]
pub fn convergence_study(
    law: &LatticeLaw,
    seq: &NormingSeq,
    stable: &StableParams,
    kappa: f64,
    n_grid: &[u64],
    seeds: &[u64],
    threads: usize,
    cfg: &SnConfig,
) -> Result<Vec<StudyRow>> {
    check_scope(law)?;
    if seeds.len() < 8 {
        return Err(Error::param("seeds", "need at least 8 seeds"));
    }
    let n_max = *n_grid.last().ok_or_else(|| Error::param("n_grid", "empty"))?;
    validate_checkpoints(n_grid, n_max)?;

    let b = weight_table(seq, n_max)?;
    let sites = kappa_table(&b, kappa);
    let start = seq.n_start();

    let workers = if threads == 0 {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    } else {
        threads
    };
    let chunk = seeds.len().div_ceil(workers);
    let mut runs: Vec<Option<AsltRun>> = vec![None; seeds.len()];
    std::thread::scope(|scope| {
        let mut remaining: &mut [Option<AsltRun>] = &mut runs;
        for seed_chunk in seeds.chunks(chunk) {
            let (head, tail) = remaining.split_at_mut(seed_chunk.len());
            remaining = tail;
            let b = &b;
            let sites = &sites;
            scope.spawn(move || {
                for (slot, &seed) in head.iter_mut().zip(seed_chunk) {
                    *slot = Some(run_path_on(
                        law, b, sites, start, kappa, n_max, seed, n_grid, false,
                    ));
                }
            });
        }
    });
    let runs: Vec<AsltRun> = runs.into_iter().map(|r| r.expect("worker filled slot")).collect();

    let g_kappa = stable.density(kappa, 1e-9)?;
    let mut rows = Vec::with_capacity(n_grid.len());
    for (i, &n) in n_grid.iter().enumerate() {
        let mut vals: Vec<f64> = runs.iter().map(|r| r.checkpoints[i].1).collect();
        vals.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let idx = ((vals.len() - 1) as f64 * p).round() as usize;
            vals[idx]
        };
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (vals.len() - 1) as f64;
        let std_err = (var / vals.len() as f64).sqrt();
        let expected = expected_average(law, seq, kappa, n, cfg)?;
        rows.push(StudyRow {
            n,
            median: q(0.5),
            q25: q(0.25),
            q75: q(0.75),
            mean,
            std_err,
            expected: expected.value,
            g_kappa,
            within_band: (mean - expected.value).abs() <= 4.0 * std_err + expected.err,
        });
    }
    Ok(rows)
}

/// Monte Carlo block-variance diagnostic in the style of the dyadic
/// strong-law argument.
#[derive(Clone, Copy, Debug)]
pub struct BlockDiag {
    /// MC estimate of `E[(Σ_{i=m+1}^{m+blocks} Z_i)^2]`
    pub estimate: f64,
    /// standard error of the estimate across seeds
    pub std_err: f64,
    /// `(m+blocks)^{gamma∨1} - m^{gamma∨1}`
    pub growth_gap: f64,
    /// estimate / growth_gap
    pub ratio: f64,
    /// mean block sum across seeds (should sit at 0 within its band)
    pub mean_sum: f64,
    pub mean_std_err: f64,
}

/// Estimate the second moment of the dyadic block sums
/// `Z_i = Σ_{k=2^{i-1}}^{2^i-1} Y_k / k` over `i = m+1 ..= m+blocks`, where
/// `Y_k = b_k (1{S_k=κ_k} - P(S_k=κ_k))`.
#[allow(clippy::too_many_arguments)]
pub fn block_variance_diag(
    law: &LatticeLaw,
    seq: &NormingSeq,
    kappa: f64,
    m: u32,
    blocks: u32,
    seeds: &[u64],
    gamma: f64,
    cfg: &SnConfig,
) -> Result<BlockDiag> {
    check_scope(law)?;
    if seeds.len() < 2 {
        return Err(Error::param("seeds", "need at least 2 seeds"));
    }
    let horizon: u64 = (1u64 << (m + blocks)) - 1;
    if horizon > 1 << 26 {
        return Err(Error::param("m/blocks", "horizon beyond the diagnostic budget"));
    }
    let b = weight_table(seq, horizon)?;
    let sites = kappa_table(&b, kappa);
    let start = seq.n_start();

    // exact P(S_k = κ_k) across the block range
    let mut probs = vec![0.0; horizon as usize + 1];
    sn_sweep(law, horizon, cfg, |n, pmf| {
        probs[n as usize] = pmf.prob_at(sites[n as usize]);
    })?;

    let k_lo = 1u64 << m; // first index of block m+1
    let mut sums = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let mut stream = SeededStream::new(seed, 0);
        let mut s: i64 = 0;
        let mut block_sum = 0.0;
        for k in 1..=horizon {
            s += law.sample_one(&mut stream);
            if k >= k_lo && k >= start {
                let indicator = if s == sites[k as usize] { 1.0 } else { 0.0 };
                let y = b[k as usize] * (indicator - probs[k as usize]);
                block_sum += y / k as f64;
            }
        }
        sums.push(block_sum);
    }
    let nf = sums.len() as f64;
    let mean_sum = sums.iter().sum::<f64>() / nf;
    let mean_var = sums.iter().map(|v| (v - mean_sum) * (v - mean_sum)).sum::<f64>() / (nf - 1.0);
    let squares: Vec<f64> = sums.iter().map(|v| v * v).collect();
    let estimate = squares.iter().sum::<f64>() / nf;
    let est_var = squares
        .iter()
        .map(|v| (v - estimate) * (v - estimate))
        .sum::<f64>()
        / (nf - 1.0);
    let g = gamma.max(1.0);
    let growth_gap = ((m + blocks) as f64).powf(g) - (m as f64).powf(g);
    Ok(BlockDiag {
        estimate,
        std_err: (est_var / nf).sqrt(),
        growth_gap,
        ratio: estimate / growth_gap,
        mean_sum,
        mean_std_err: (mean_var / nf).sqrt(),
    })
}

/// Exact `E[Z_i^2]` for one dyadic block, via the convolution engine and
/// the independence identity
/// `E[Y_h Y_k] = b_h b_k (P(S_h=κ_h) P(S_{k-h}=κ_k-κ_h) - P(S_h=κ_h) P(S_k=κ_k))`.
pub fn block_second_moment_exact(
    law: &LatticeLaw,
    seq: &NormingSeq,
    kappa: f64,
    block: u32,
    cfg: &SnConfig,
) -> Result<f64> {
    check_scope(law)?;
    let lo = 1u64 << (block - 1);
    let hi = (1u64 << block) - 1;
    let b = weight_table(seq, hi)?;
    let sites = kappa_table(&b, kappa);

    let mut probs = vec![0.0; hi as usize + 1];
    let mut pmfs = Vec::with_capacity(hi as usize);
    sn_sweep(law, hi, cfg, |n, pmf| {
        probs[n as usize] = pmf.prob_at(sites[n as usize]);
        pmfs.push(pmf.clone());
    })?;
    let pmf_at = |n: u64| &pmfs[n as usize - 1];

    let mut total = 0.0;
    for h in lo..=hi {
        let ph = probs[h as usize];
        // E[Y_h^2] = b_h^2 (p_h - p_h^2)
        total += b[h as usize] * b[h as usize] * (ph - ph * ph) / ((h * h) as f64);
        for k in (h + 1)..=hi {
            let pk = probs[k as usize];
            let cross = pmf_at(k - h).prob_at(sites[k as usize] - sites[h as usize]);
            let cov = b[h as usize] * b[k as usize] * (ph * cross - ph * pk);
            total += 2.0 * cov / ((h * k) as f64);
        }
    }
    Ok(total)
}
