//! The limiting stable law: parameters, characteristic function ψ, density
//! by numerical inversion, and the gamma-integral identity the tail
//! calculus leans on.
//!
//! Parameters follow the characteristic-exponent form
//! `log ψ(t) = -c |t|^alpha (1 - i beta sign(t) tan(pi alpha / 2))`, with the
//! strictly-stable polar (Zolotarev) form `-c' |t|^alpha
//! exp(-i (pi/2) theta alpha sign t)` carried alongside.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeLaw;
use crate::quad;

/// Parameters of a strictly stable limit law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StableParams {
    alpha: f64,
    beta: f64,
    c: f64,
    c_prime: f64,
    theta: f64,
}

impl StableParams {
    /// Build from index, skewness and scale.
    ///
    /// At `alpha = 2` the law is the standard normal limit: `beta = 0` and
    /// `c = 1/2` are required.
    pub fn new(alpha: f64, beta: f64, c: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0 {
            return Err(Error::param("alpha", "must lie in (0,2] and differ from 1"));
        }
        if !(-1.0..=1.0).contains(&beta) {
            return Err(Error::param("beta", "skewness must lie in [-1, 1]"));
        }
        if !(c > 0.0) {
            return Err(Error::param("c", "scale must be positive"));
        }
        if alpha == 2.0 && (beta != 0.0 || c != 0.5) {
            return Err(Error::param(
                "alpha",
                "the alpha = 2 limit is normal: beta = 0 and c = 1/2",
            ));
        }
        let theta = if alpha == 2.0 {
            0.0
        } else {
            let tan_term = (core::f64::consts::PI * alpha / 2.0).tan();
            2.0 / (core::f64::consts::PI * alpha) * (beta * tan_term).atan()
        };
        let c_prime = c / (core::f64::consts::PI * theta * alpha / 2.0).cos();
        let p = StableParams {
            alpha,
            beta,
            c,
            c_prime,
            theta,
        };
        debug_assert!(p.theta.abs() <= (2.0 / alpha - 1.0).min(1.0) + 1e-12);
        Ok(p)
    }

    /// Parameters of the limit law of a walk with tail constants `c1`, `c2`:
    /// `beta = (c1-c2)/(c1+c2)` and `c = Gamma(1-alpha)(c1+c2)cos(pi alpha/2)`.
    pub fn from_tails(alpha: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) || alpha == 1.0 {
            return Err(Error::param(
                "alpha",
                "tail-constant form needs alpha in (0,2) away from 1",
            ));
        }
        if !(c1 >= 0.0 && c2 >= 0.0 && c1 + c2 > 0.0) {
            return Err(Error::param("c1/c2", "need c1, c2 >= 0 with c1 + c2 > 0"));
        }
        let beta = (c1 - c2) / (c1 + c2);
        let c = libm::tgamma(1.0 - alpha) * (c1 + c2) * (core::f64::consts::PI * alpha / 2.0).cos();
        debug_assert!(c > 0.0, "the scale formula is positive on (0,1) and (1,2)");
        StableParams::new(alpha, beta, c)
    }

    /// The standard normal limit (`alpha = 2`).
    pub fn gaussian() -> Self {
        StableParams::new(2.0, 0.0, 0.5).expect("gaussian parameters are valid")
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Polar form `(c', theta)` of the characteristic exponent.
    pub fn zolotarev_form(&self) -> (f64, f64) {
        (self.c_prime, self.theta)
    }

    /// ψ(t).
    pub fn char_fn(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let at = t.abs().powf(self.alpha) * self.c;
        let arg = if self.alpha == 2.0 {
            0.0
        } else {
            at * self.beta * (core::f64::consts::PI * self.alpha / 2.0).tan() * t.signum()
        };
        Complex64::from_polar((-at).exp(), arg)
    }

    /// The stable density `g(x) = (1/pi) ∫_0^∞ Re[e^{-itx} ψ(t)] dt` by
    /// adaptive quadrature, to absolute accuracy `tol`.
    ///
    /// Quadrature noise can leave values a hair below zero; they are
    /// returned raw so tests can observe the integrator, and clamped only
    /// in exported tables.
    pub fn density(&self, x: f64, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::param("tol", "tolerance must be positive"));
        }
        let c = self.c;
        let alpha = self.alpha;
        let skew = if alpha == 2.0 {
            0.0
        } else {
            c * self.beta * (core::f64::consts::PI * alpha / 2.0).tan()
        };
        // truncate where the modulus has decayed below tol/10; the remainder
        // of the integral past t_end is below tol/10 * 1/(alpha c T^{alpha-1})
        let t_end = ((10.0 / tol).ln() / c).powf(1.0 / alpha);

        let integrand =
            move |t: f64| (-c * t.powf(alpha)).exp() * (t * x - skew * t.powf(alpha)).cos();
        // seed panels at the oscillation scale of the cosine
        let waves = (t_end * x.abs().max(1.0) / core::f64::consts::PI).ceil() as usize;
        let panels = waves.clamp(1, 4096);
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| t_end * i as f64 / panels as f64)
            .collect();
        let q = quad::integrate_with_breaks(integrand, &breaks, 0.7 * tol * core::f64::consts::PI)?;
        Ok(q.value / core::f64::consts::PI)
    }

    /// Standard normal density, the `alpha = 2` closed form used by oracles.
    pub fn gaussian_density(x: f64) -> f64 {
        (-0.5 * x * x).exp() / (2.0 * core::f64::consts::PI).sqrt()
    }
}

/// Closed form of `∫_0^∞ t^delta e^{-p t^alpha} dt =
/// Gamma((delta+1)/alpha) / (alpha p^{(delta+1)/alpha})`.
pub fn gamma_integral(delta: f64, p: f64, alpha: f64) -> Result<f64> {
    if !(delta > -1.0) {
        return Err(Error::param("delta", "need delta > -1"));
    }
    if !(p > 0.0) || !(alpha > 0.0) {
        return Err(Error::param("p/alpha", "need p > 0 and alpha > 0"));
    }
    let e = (delta + 1.0) / alpha;
    Ok(libm::tgamma(e) / (alpha * p.powf(e)))
}

/// Quadrature cross-check of [`gamma_integral`].
pub fn gamma_integral_quadrature(delta: f64, p: f64, alpha: f64) -> Result<f64> {
    if !(delta > -1.0) || !(p > 0.0) || !(alpha > 0.0) {
        return Err(Error::param(
            "delta/p/alpha",
            "outside the integral's domain",
        ));
    }
    let t_end = (80.0 / p).powf(1.0 / alpha).max(2.0);
    let scale = gamma_integral(delta, p, alpha)?;
    let mut breaks = vec![0.0];
    let mut b = t_end / 1024.0;
    while b < t_end {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(t_end);
    let q = quad::integrate_with_breaks(
        |t: f64| t.powf(delta) * (-p * t.powf(alpha)).exp(),
        &breaks,
        1e-10 * scale,
    )?;
    Ok(q.value)
}

/// Ratios `|arg φ(t) / log|φ(t)||` along a decreasing grid in `(0, 0.1]`.
///
/// For laws in the attraction domain the entries approach
/// `|beta tan(pi alpha/2)|` as the grid descends toward zero.
pub fn arg_log_ratio_check(law: &LatticeLaw, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if t_grid.is_empty() {
        return Err(Error::param("t_grid", "grid must be nonempty"));
    }
    for w in t_grid.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::param("t_grid", "grid must be strictly decreasing"));
        }
    }
    if t_grid[0] > 0.1 || *t_grid.last().unwrap() <= 0.0 {
        return Err(Error::param("t_grid", "grid must lie in (0, 0.1]"));
    }
    Ok(t_grid
        .iter()
        .map(|&t| {
            let phi = law.char_fn(t);
            let ratio = phi.arg().abs() / phi.norm().ln().abs();
            (t, ratio)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeLaw;

    #[test]
    fn from_tails_symmetric_scale() {
        let p = StableParams::from_tails(1.5, 0.5, 0.5).unwrap();
        assert_eq!(p.beta(), 0.0);
        // Gamma(-1/2) cos(3 pi/4) = sqrt(2 pi)
        let expect = (2.0 * core::f64::consts::PI).sqrt();
        assert!((p.c() - expect).abs() < 1e-12, "c = {}", p.c());
    }

    #[test]
    fn from_tails_skew_identity() {
        let p = StableParams::from_tails(1.5, 1.0, 0.0).unwrap();
        assert_eq!(p.beta(), 1.0);
        let p = StableParams::from_tails(0.5, 0.3, 0.7).unwrap();
        assert!((p.beta() + 0.4).abs() < 1e-15);
        let expect = libm::tgamma(0.5) * (core::f64::consts::PI / 4.0).cos();
        assert!((p.c() - expect).abs() < 1e-12);
        assert!(p.c() > 0.0);
    }

    #[test]
    fn from_tails_rejects_bad_ranges() {
        assert!(StableParams::from_tails(1.0, 0.5, 0.5).is_err());
        assert!(StableParams::from_tails(2.0, 0.5, 0.5).is_err());
        assert!(StableParams::from_tails(1.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn char_fn_values() {
        let gauss = StableParams::gaussian();
        assert_eq!(gauss.char_fn(0.0), Complex64::new(1.0, 0.0));
        assert!((gauss.char_fn(1.0).re - (-0.5f64).exp()).abs() < 1e-15);

        let p = StableParams::new(1.5, 0.0, 1.0).unwrap();
        let v = p.char_fn(2.0);
        assert!((v.re - (-(2f64.powf(1.5))).exp()).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn char_fn_modulus_and_argument() {
        let p = StableParams::from_tails(1.5, 0.4, 0.1).unwrap();
        let t = 1.3f64;
        let v = p.char_fn(t);
        assert!((v.norm() - (-p.c() * t.powf(1.5)).exp()).abs() < 1e-14);
        let expect_arg = p.c() * p.beta() * (core::f64::consts::PI * 0.75).tan() * t.powf(1.5);
        assert!((v.arg() - expect_arg).abs() < 1e-12);
        // conjugate symmetry
        assert!((p.char_fn(-t) - v.conj()).norm() < 1e-15);
    }

    #[test]
    fn char_modulus_strictly_decreasing() {
        let p = StableParams::new(1.5, 0.3, 1.0).unwrap();
        let mut prev = 1.0;
        for i in 1..60 {
            let m = p.char_fn(i as f64 * 0.1).norm();
            assert!(m < prev);
            prev = m;
        }
    }

    #[test]
    fn zolotarev_symmetric_is_identity() {
        let p = StableParams::new(1.5, 0.0, 2.0).unwrap();
        let (cp, theta) = p.zolotarev_form();
        assert_eq!(theta, 0.0);
        assert_eq!(cp, 2.0);
    }

    #[test]
    fn zolotarev_extremal_skew() {
        // alpha in (1,2), beta = 1: |theta| attains 2/alpha - 1
        let p = StableParams::new(1.5, 1.0, 1.0).unwrap();
        let (cp, theta) = p.zolotarev_form();
        assert!(
            (theta.abs() - (2.0 / 1.5 - 1.0)).abs() < 1e-12,
            "theta {theta}"
        );
        // consistency equations
        let half = core::f64::consts::PI * theta * 1.5 / 2.0;
        assert!((cp * half.cos() - p.c()).abs() < 1e-12);
        assert!((half.tan() - p.beta() * (core::f64::consts::PI * 0.75).tan()).abs() < 1e-12);

        // alpha < 1, beta = -1: bound is 1, attained exactly
        let p = StableParams::new(0.5, -1.0, 1.0).unwrap();
        let (_, theta) = p.zolotarev_form();
        assert!((theta.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zolotarev_round_trip() {
        for &(alpha, beta, c) in &[
            (1.5, 0.25, 1.0),
            (1.25, -0.7, 0.8),
            (0.5, 0.9, 2.0),
            (1.75, -1.0, 1.3),
        ] {
            let p = StableParams::new(alpha, beta, c).unwrap();
            let (cp, theta) = p.zolotarev_form();
            let half = core::f64::consts::PI * theta * alpha / 2.0;
            let c_back = cp * half.cos();
            let beta_back = half.tan() / (core::f64::consts::PI * alpha / 2.0).tan();
            assert!((c_back - c).abs() < 1e-12 * c);
            assert!((beta_back - beta).abs() < 1e-12);
        }
    }

    #[test]
    fn density_standard_normal() {
        let g = StableParams::gaussian();
        let v = g.density(0.0, 1e-8).unwrap();
        let expect = 1.0 / (2.0 * core::f64::consts::PI).sqrt();
        assert!((v - expect).abs() < 1e-8, "{v}");
        for x in [0.5, 1.0, 2.0, -3.0] {
            let v = g.density(x, 1e-8).unwrap();
            assert!(
                (v - StableParams::gaussian_density(x)).abs() < 1e-8,
                "x={x}"
            );
        }
    }

    #[test]
    fn density_at_origin_closed_form() {
        // g(0) = Gamma(1/alpha) / (pi alpha c^{1/alpha}) for beta = 0
        for alpha in [1.25, 1.5, 1.75] {
            let p = StableParams::new(alpha, 0.0, 1.0).unwrap();
            let v = p.density(0.0, 1e-9).unwrap();
            let expect = libm::tgamma(1.0 / alpha) / (core::f64::consts::PI * alpha);
            assert!((v - expect).abs() < 1e-9, "alpha={alpha}: {v} vs {expect}");
        }
    }

    #[test]
    fn density_origin_is_gamma_integral() {
        // the same value through the gamma-integral identity with delta = 0
        let p = StableParams::new(1.5, 0.0, 1.0).unwrap();
        let via_identity = gamma_integral(0.0, 1.0, 1.5).unwrap() / core::f64::consts::PI;
        assert!((p.density(0.0, 1e-10).unwrap() - via_identity).abs() < 1e-9);
    }

    #[test]
    fn density_symmetry_and_positivity() {
        let p = StableParams::new(1.5, 0.0, 1.0).unwrap();
        for x in [0.3, 1.1, 2.4, 5.0] {
            let a = p.density(x, 1e-10).unwrap();
            let b = p.density(-x, 1e-10).unwrap();
            assert!((a - b).abs() < 1e-10, "x={x}");
            assert!(a >= -1e-10);
        }
    }

    #[test]
    fn density_mass_with_tail_correction() {
        for &(alpha, beta) in &[(1.25, 0.0), (1.5, 0.5), (1.75, -0.3), (2.0, 0.0)] {
            let c = if alpha == 2.0 { 0.5 } else { 1.0 };
            let p = StableParams::new(alpha, beta, c).unwrap();
            let half_width = 40.0 * c.powf(1.0 / alpha);
            let n = 4000;
            let mut mass = 0.0;
            for i in 0..=n {
                let x = -half_width + 2.0 * half_width * i as f64 / n as f64;
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                mass += w * p.density(x, 1e-8).unwrap();
            }
            mass *= 2.0 * half_width / n as f64;
            let tail = if alpha == 2.0 {
                0.0
            } else {
                // the law's own tail constants: c1 + c2 recovered from c
                let c_sum = c
                    / (libm::tgamma(1.0 - alpha) * (core::f64::consts::PI * alpha / 2.0).cos());
                c_sum * half_width.powf(-alpha)
            };
            let total = mass + tail;
            assert!(
                (0.999..=1.001).contains(&total),
                "alpha={alpha} beta={beta}: {total}"
            );
        }
    }

    #[test]
    fn gamma_integral_examples() {
        assert!((gamma_integral(0.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        let expect = core::f64::consts::PI.sqrt() / 2.0;
        assert!((gamma_integral(0.0, 1.0, 2.0).unwrap() - expect).abs() < 1e-14);
        assert!((gamma_integral(1.0, 2.0, 2.0).unwrap() - 0.25).abs() < 1e-14);
        assert!(gamma_integral(-1.0, 1.0, 1.0).is_err());
        assert!(gamma_integral(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn gamma_integral_matches_quadrature_grid() {
        for delta in [0.0, 0.5, 1.0] {
            for p in [0.5, 1.0, 2.0] {
                for alpha in [0.8, 1.5, 2.0] {
                    let closed = gamma_integral(delta, p, alpha).unwrap();
                    let by_quad = gamma_integral_quadrature(delta, p, alpha).unwrap();
                    assert!(
                        ((closed - by_quad) / closed).abs() < 1e-8,
                        "({delta},{p},{alpha}): {closed} vs {by_quad}"
                    );
                }
            }
        }
    }

    #[test]
    fn arg_log_ratio_symmetric_law_vanishes() {
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        let grid = [0.1, 0.05, 0.02, 0.01];
        let rows = arg_log_ratio_check(&law, &grid).unwrap();
        for (t, r) in rows {
            assert!(r < 1e-9, "t={t}: ratio {r}");
        }
    }

    #[test]
    fn arg_log_ratio_lazy_walk_vanishes() {
        let law = LatticeLaw::lazy_walk();
        let rows = arg_log_ratio_check(&law, &[0.1, 0.05, 0.01]).unwrap();
        for (_, r) in rows {
            assert!(r < 1e-12);
        }
    }

    #[test]
    fn arg_log_ratio_totally_skewed_tends_to_tangent() {
        // beta = 1 at alpha = 3/2: |beta tan(3 pi/4)| = 1
        let law = LatticeLaw::zipf_skewed(1.5, 1.0, 0.0).unwrap();
        let grid = [0.1, 0.05, 0.02, 0.01, 0.005, 0.002];
        let rows = arg_log_ratio_check(&law, &grid).unwrap();
        let first = rows.first().unwrap().1;
        let last = rows.last().unwrap().1;
        assert!(
            (last - 1.0).abs() < (first - 1.0).abs(),
            "trend must improve: {first} -> {last}"
        );
        assert!((last - 1.0).abs() < 0.25, "last ratio {last}");
    }

    #[test]
    fn grid_validation() {
        let law = LatticeLaw::lazy_walk();
        assert!(arg_log_ratio_check(&law, &[]).is_err());
        assert!(arg_log_ratio_check(&law, &[0.01, 0.05]).is_err());
        assert!(arg_log_ratio_check(&law, &[0.5, 0.1]).is_err());
    }
}
