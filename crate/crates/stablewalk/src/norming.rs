//! Norming constants `b_n = L(n) n^{1/alpha}` and slowly varying machinery.
//!
//! The sequence is pinned down by the equation `b^alpha = n * h(b)`, where
//! `h` is the slowly varying factor of the step law's characteristic
//! exponent. This module solves that equation, exposes the slowly varying
//! part `L(n) = b_n / n^{1/alpha}`, the running supremum `M`, the composite
//! factor that multiplies the correlation bound, and the logarithmic-weight
//! summability diagnostic.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::quad;

/// Slowly varying function descriptors.
///
/// `Constant` covers the normal domain of attraction, `LogPower` the
/// `h(x) = ln^sigma x` family, and `Karamata` an explicit representation
/// `gamma(x) * exp(∫_1^x eps(t)/t dt)` with caller-declared bounds.
#[derive(Clone)]
pub enum SlowlyVarying {
    Constant(f64),
    LogPower {
        sigma: f64,
    },
    Karamata {
        gamma: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        eps: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        /// declared bound on |eps|
        eps_bound: f64,
        /// left end of the domain
        domain_start: f64,
    },
}

impl std::fmt::Debug for SlowlyVarying {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SlowlyVarying::Constant(c) => write!(f, "Constant({c})"),
            SlowlyVarying::LogPower { sigma } => write!(f, "LogPower(sigma={sigma})"),
            SlowlyVarying::Karamata {
                eps_bound,
                domain_start,
                ..
            } => {
                write!(f, "Karamata(eps_bound={eps_bound}, from={domain_start})")
            }
        }
    }
}

impl SlowlyVarying {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::param(
                "c",
                "constant slowly varying value must be positive",
            ));
        }
        Ok(SlowlyVarying::Constant(c))
    }

    pub fn log_power(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::param(
                "sigma",
                "log-power exponent must lie in (0, 1)",
            ));
        }
        Ok(SlowlyVarying::LogPower { sigma })
    }

    pub fn karamata(
        gamma: impl Fn(f64) -> f64 + Send + Sync + 'static,
        eps: impl Fn(f64) -> f64 + Send + Sync + 'static,
        eps_bound: f64,
        domain_start: f64,
    ) -> Result<Self> {
        if !(eps_bound >= 0.0 && eps_bound.is_finite()) {
            return Err(Error::param(
                "eps_bound",
                "must be a finite nonnegative bound",
            ));
        }
        if !(domain_start > 0.0) {
            return Err(Error::param("domain_start", "must be positive"));
        }
        Ok(SlowlyVarying::Karamata {
            gamma: Arc::new(gamma),
            eps: Arc::new(eps),
            eps_bound,
            domain_start,
        })
    }

    /// Left end of the domain on which `eval` is meaningful.
    pub fn domain_start(&self) -> f64 {
        match self {
            SlowlyVarying::Constant(_) => 0.0,
            SlowlyVarying::LogPower { .. } => 1.0,
            SlowlyVarying::Karamata { domain_start, .. } => *domain_start,
        }
    }

    /// True when the descriptor is non-decreasing on its whole domain.
    pub fn is_monotone(&self) -> bool {
        matches!(
            self,
            SlowlyVarying::Constant(_) | SlowlyVarying::LogPower { .. }
        )
    }

    /// Evaluate `h(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SlowlyVarying::Constant(c) => *c,
            SlowlyVarying::LogPower { sigma } => {
                let l = x.ln();
                if l <= 0.0 {
                    0.0
                } else {
                    l.powf(*sigma)
                }
            }
            SlowlyVarying::Karamata { gamma, eps, .. } => {
                // ∫_1^x eps(t)/t dt = ∫_0^{ln x} eps(e^u) du
                let lx = x.ln();
                let integral = if lx == 0.0 {
                    0.0
                } else {
                    let (a, b) = if lx > 0.0 { (0.0, lx) } else { (lx, 0.0) };
                    let q = quad::integrate(|u: f64| eps(u.exp()), a, b, 1e-11 * (1.0 + lx.abs()))
                        .expect("karamata exponent integral");
                    if lx > 0.0 {
                        q.value
                    } else {
                        -q.value
                    }
                };
                gamma(x) * integral.exp()
            }
        }
    }
}

/// Summary returned by [`NormingSeq::log_weight_sum_check`].
#[derive(Clone, Copy, Debug)]
pub struct SumCheck {
    /// `Σ_{k=a}^{b-1} tilde_L(k)/k` over the requested window
    pub lhs_sum: f64,
    /// `ln^gamma b - ln^gamma a`
    pub rhs_gap: f64,
    /// max of lhs/rhs over the sliding dyadic window family inside `[a, b)`
    pub fitted_c: f64,
}

/// The norming sequence `b_n` with its free parameters.
///
/// `epsilon` is the cut of the running supremum `M`, while `eta` and `delta`
/// enter the decay exponent `rho = min(eta (1/alpha - delta), 1)`.
pub struct NormingSeq {
    alpha: f64,
    h: SlowlyVarying,
    epsilon: f64,
    eta: f64,
    delta: f64,
    cache: RwLock<HashMap<u64, f64>>,
}

impl std::fmt::Debug for NormingSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NormingSeq")
            .field("alpha", &self.alpha)
            .field("h", &self.h)
            .field("epsilon", &self.epsilon)
            .field("eta", &self.eta)
            .field("delta", &self.delta)
            .finish()
    }
}

impl Clone for NormingSeq {
    fn clone(&self) -> Self {
        NormingSeq {
            alpha: self.alpha,
            h: self.h.clone(),
            epsilon: self.epsilon,
            eta: self.eta,
            delta: self.delta,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl NormingSeq {
    /// Sequence for tail index `alpha` with slowly varying factor `h`.
    ///
    /// Defaults: `epsilon = 0.5`, `eta = 1`, `delta = 1/(2 alpha)`.
    pub fn new(alpha: f64, h: SlowlyVarying) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0 {
            return Err(Error::param("alpha", "must lie in (0,2] and differ from 1"));
        }
        if let SlowlyVarying::LogPower { sigma } = h {
            let max_sigma = alpha / (1.0 + alpha);
            if sigma >= max_sigma {
                return Err(Error::param(
                    "sigma",
                    format!("log-power exponent must be below alpha/(1+alpha) = {max_sigma}"),
                ));
            }
        }
        Ok(NormingSeq {
            alpha,
            h,
            epsilon: 0.5,
            eta: 1.0,
            delta: 1.0 / (2.0 * alpha),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || 1.0 / epsilon < self.h.domain_start() {
            return Err(Error::param(
                "epsilon",
                "must be positive with 1/epsilon inside the domain of h",
            ));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::param("eta", "must lie in (0, 1]"));
        }
        self.eta = eta;
        Ok(self)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0 / self.alpha) {
            return Err(Error::param("delta", "must lie in (0, 1/alpha)"));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn h(&self) -> &SlowlyVarying {
        &self.h
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Decay exponent `rho = min(eta (1/alpha - delta), 1)`.
    pub fn rho(&self) -> f64 {
        (self.eta * (1.0 / self.alpha - self.delta)).min(1.0)
    }

    /// First index at which the norming equation has a root in the monotone
    /// region.
    pub fn n_start(&self) -> u64 {
        match self.h {
            SlowlyVarying::Constant(_) => 1,
            SlowlyVarying::LogPower { sigma } => {
                // the map b -> b^alpha / ln^sigma b attains its minimum
                // e^sigma (alpha/sigma)^sigma at b = e^{sigma/alpha}
                let min_val = sigma.exp() * (self.alpha / sigma).powf(sigma);
                (min_val.ceil() as u64).max(1)
            }
            SlowlyVarying::Karamata { .. } => 1,
        }
    }

    fn solve_raw(&self, n: u64) -> Result<f64> {
        let alpha = self.alpha;
        let nf = n as f64;
        match &self.h {
            SlowlyVarying::Constant(c) => Ok((nf * c).powf(1.0 / alpha)),
            SlowlyVarying::LogPower { sigma } => {
                let min_n = self.n_start();
                if n < min_n {
                    return Err(Error::NoNormingRoot { n, min_n });
                }
                let lo0 = (sigma / alpha).exp();
                let f = |b: f64| b.powf(alpha) - nf * self.h.eval(b);
                bisect_increasing(f, lo0, nf.powf(1.0 / alpha).max(2.0 * lo0))
            }
            SlowlyVarying::Karamata { domain_start, .. } => {
                let lo0 = *domain_start;
                let f = |b: f64| b.powf(alpha) - nf * self.h.eval(b);
                if f(lo0) > 0.0 {
                    return Err(Error::NoNormingRoot { n, min_n: n + 1 });
                }
                bisect_increasing(f, lo0, (2.0 * lo0).max(nf.powf(1.0 / alpha)))
            }
        }
    }

    /// The norming constant `b_n`, cached.
    pub fn bn(&self, n: u64) -> Result<f64> {
        if let Some(&b) = self.cache.read().expect("cache lock").get(&n) {
            return Ok(b);
        }
        let b = self.solve_raw(n)?;
        self.cache.write().expect("cache lock").insert(n, b);
        Ok(b)
    }

    /// `L(n) = b_n / n^{1/alpha}`.
    pub fn l_at(&self, n: u64) -> Result<f64> {
        Ok(self.bn(n)? / (n as f64).powf(1.0 / self.alpha))
    }

    /// The lattice site tracking `kappa`: nearest integer to
    /// `kappa * b_n`, ties resolved toward the smaller site.
    ///
    /// Guarantees `|kappa_n / b_n - kappa| <= 1/(2 b_n)`. Every module uses
    /// this rule, so local probabilities, correlation scans and simulated
    /// hits all refer to the same target sequence.
    pub fn kappa_site(&self, kappa: f64, n: u64) -> Result<i64> {
        let x = kappa * self.bn(n)?;
        Ok((x - 0.5).ceil() as i64)
    }

    /// The running supremum `M(x) = sup_{1/eps <= y <= x} h(y)`.
    pub fn sup_h(&self, x: f64) -> Result<f64> {
        let min_x = 1.0 / self.epsilon;
        if x < min_x {
            return Err(Error::SupDomain { x, min_x });
        }
        match &self.h {
            SlowlyVarying::Constant(c) => Ok(*c),
            SlowlyVarying::LogPower { .. } => Ok(self.h.eval(x)),
            SlowlyVarying::Karamata { .. } => {
                // geometric grid in log space, refined until stable
                let (la, lb) = (min_x.ln(), x.ln());
                let mut pts = 513usize;
                let mut best = f64::NEG_INFINITY;
                loop {
                    let mut cur = f64::NEG_INFINITY;
                    for i in 0..=pts {
                        let u = la + (lb - la) * i as f64 / pts as f64;
                        cur = cur.max(self.h.eval(u.exp()));
                    }
                    if cur - best <= 1e-6 * cur.abs() || pts >= 1 << 17 {
                        return Ok(cur.max(best));
                    }
                    best = cur;
                    pts *= 4;
                }
            }
        }
    }

    /// `tilde_L(n) = L(n) (1 + M(n^{1+1/alpha}) + L(n)^eta)`.
    pub fn tilde_l(&self, n: u64) -> Result<f64> {
        let l = self.l_at(n)?;
        let m = self.sup_h((n as f64).powf(1.0 + 1.0 / self.alpha))?;
        Ok(l * (1.0 + m + l.powf(self.eta)))
    }

    /// Check the summability hypothesis behind the logarithmic averages:
    /// sums `tilde_L(k)/k` for `k` in `a..b` against `ln^gamma b - ln^gamma a`
    /// and reports the worst window constant over dyadic sub-windows.
    pub fn log_weight_sum_check(&self, a: u64, b: u64, gamma: f64) -> Result<SumCheck> {
        if !(2 <= a && a < b) {
            return Err(Error::IndexRange(format!(
                "need 2 <= a < b, got a={a} b={b}"
            )));
        }
        if !(gamma > 0.0 && gamma < 2.0) {
            return Err(Error::param("gamma", "must lie in (0, 2)"));
        }
        let window_sum = |lo: u64, hi: u64| -> Result<f64> {
            let mut s = 0.0;
            for k in lo..hi {
                s += self.tilde_l(k)? / k as f64;
            }
            Ok(s)
        };
        let rhs = |lo: u64, hi: u64| (hi as f64).ln().powf(gamma) - (lo as f64).ln().powf(gamma);

        let lhs_sum = window_sum(a, b)?;
        let rhs_gap = rhs(a, b);
        let mut fitted_c: f64 = lhs_sum / rhs_gap;
        let mut lo = a;
        while lo.saturating_mul(2) <= b {
            let hi = (lo * 2).min(b);
            let c = window_sum(lo, hi)? / rhs(lo, hi);
            fitted_c = fitted_c.max(c);
            lo *= 2;
        }
        Ok(SumCheck {
            lhs_sum,
            rhs_gap,
            fitted_c,
        })
    }
}

/// Bisection root of an increasing function, bracketing upward from `lo0`.
fn bisect_increasing(f: impl Fn(f64) -> f64, lo0: f64, hi0: f64) -> Result<f64> {
    let mut lo = lo0;
    let mut hi = hi0.max(lo0 * 2.0);
    let mut guard = 0;
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::param("bracket", "no sign change while expanding"));
        }
    }
    while hi - lo > 1e-12 * lo {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
