//! Certified tail sums of slowly decaying series.
//!
//! The lattice tails used in this crate are of the form
//! `f(k) = ln^sigma(k) * k^(-s)` with `s > 1` and `sigma >= 0`. Their mass
//! beyond a cutoff cannot be obtained by direct summation at the accuracies
//! the convolution certificates need, so we sum a head chunk directly and
//! close the series with an Euler–Maclaurin correction whose remainder is
//! bounded through the next derivative term.

use num_complex::Complex64;

use crate::quad;

/// A value together with a certified absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certified {
    pub value: f64,
    pub bound: f64,
}

impl Certified {
    pub fn exact(value: f64) -> Self {
        Certified { value, bound: 0.0 }
    }

    pub fn scale(self, k: f64) -> Self {
        Certified {
            value: self.value * k,
            bound: self.bound * k.abs(),
        }
    }
}

impl std::ops::Add for Certified {
    type Output = Certified;

    fn add(self, other: Certified) -> Certified {
        Certified {
            value: self.value + other.value,
            bound: self.bound + other.bound,
        }
    }
}

/// Order-insensitive compensated summation.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `f(x) = ln^sigma(x) x^(-s)` evaluated at integer or real arguments.
#[inline]
pub fn log_power_term(s: f64, sigma: f64, x: f64) -> f64 {
    if sigma == 0.0 {
        x.powf(-s)
    } else {
        let l = x.ln();
        if l <= 0.0 {
            return 0.0;
        }
        (sigma * l.ln() - s * l).exp()
    }
}

/// Derivatives of `f(x) = ln^sigma(x) x^(-s)` up to `max_order`, inclusive.
///
/// Writing `f^(n)(x) = x^(-s-n) * sum_j a[n][j] ln^(sigma-j) x`, the
/// coefficients obey `a[n+1][j] = -(s+n) a[n][j] + (sigma-j+1) a[n][j-1]`.
fn derivatives_upto(s: f64, sigma: f64, max_order: usize, x: f64) -> Vec<f64> {
    let l = x.ln();
    let log_powers: Vec<f64> = (0..=max_order + 1)
        .map(|j| l.powf(sigma - j as f64))
        .collect();
    let mut out = Vec::with_capacity(max_order + 1);
    let mut coef = vec![0.0; max_order + 2];
    coef[0] = 1.0;
    let mut x_pow = x.powf(-s);
    for n in 0..=max_order {
        let mut sum = 0.0;
        for (j, a) in coef.iter().take(n + 1).enumerate() {
            if *a != 0.0 {
                sum += a * log_powers[j];
            }
        }
        out.push(sum * x_pow);
        x_pow /= x;
        // advance the coefficient row
        let mut next = vec![0.0; max_order + 2];
        for j in 0..=n {
            next[j] += -(s + n as f64) * coef[j];
            next[j + 1] += (sigma - j as f64) * coef[j];
        }
        coef = next;
    }
    out
}

fn derivative(s: f64, sigma: f64, order: usize, x: f64) -> f64 {
    derivatives_upto(s, sigma, order, x)[order]
}

/// `∫_m^∞ ln^sigma(x) x^(-s) dx` for `s > 1`.
fn tail_integral(s: f64, sigma: f64, m: f64) -> Certified {
    let a = s - 1.0;
    if sigma == 0.0 {
        return Certified {
            value: m.powf(-a) / a,
            bound: 4.0 * f64::EPSILON * m.powf(-a) / a,
        };
    }
    // substitute u = ln x: ∫_{ln m}^∞ u^sigma e^{-a u} du
    let lo = m.ln();
    let hi = lo + 60.0 / a;
    let scale = lo.powf(sigma) * (-a * lo).exp() / a;
    // the error-estimate floor is ~50 eps * ∫|f|, so don't ask below it
    let q = quad::integrate(|u: f64| u.powf(sigma) * (-a * u).exp(), lo, hi, 3e-14 * scale)
        .expect("tail integral is smooth and fast-decaying");
    // truncated part: u^sigma ≤ (2 max(u0,60/a))^sigma e^{au/2} style bound is
    // overkill; e^{-60} times the integrand scale already sits below 1e-25.
    Certified {
        value: q.value,
        bound: q.abs_error + 1e-25 * scale.abs(),
    }
}

/// Certified `Σ_{k >= from} ln^sigma(k) k^(-s)`, for `s > 1`, `sigma >= 0`.
///
/// `chunk` controls how many terms are summed directly before the
/// Euler–Maclaurin closure takes over; larger chunks buy tighter bounds.
pub fn tail_sum_chunked(s: f64, sigma: f64, from: u64, chunk: u64) -> Certified {
    assert!(s > 1.0, "tail sum needs s > 1");
    assert!(sigma >= 0.0);
    let mut m = from.max(32);
    m = m.saturating_add(chunk);

    loop {
        let mut direct = 0.0;
        // summing upward; terms are decreasing so accumulation order is fine
        for k in from..m {
            direct += log_power_term(s, sigma, k as f64);
        }
        let x = m as f64;
        let integral = tail_integral(s, sigma, x);
        let f0 = log_power_term(s, sigma, x);
        let d1 = derivative(s, sigma, 1, x);
        let d3 = derivative(s, sigma, 3, x);
        let d5 = derivative(s, sigma, 5, x);
        // Σ_{k>=m} f(k) = ∫_m^∞ f + f(m)/2 - f'(m)/12 + f'''(m)/720
        //                - f^(5)(m)/30240 + R
        let em = integral.value + 0.5 * f0 - d1 / 12.0 + d3 / 720.0 - d5 / 30240.0;
        // |R| <= 2 zeta(6)/(2 pi)^6 * ∫|f^(6)| = 3.36e-5 |f^(5)(m)| for
        // eventually monotone f^(5); widened for the log-power prefactor.
        let bound = integral.bound + 1e-4 * d5.abs();
        let total = direct + em;
        if bound <= 1e-13 * total.abs() || m > from.max(32) + (chunk << 6) {
            return Certified {
                value: total,
                bound,
            };
        }
        m = m.saturating_mul(2);
    }
}

/// Certified `Σ_{k >= from} ln^sigma(k) k^(-s)` with the default head chunk.
pub fn tail_sum(s: f64, sigma: f64, from: u64) -> Certified {
    tail_sum_chunked(s, sigma, from, 512)
}

/// `B_{2j}/(2j)!` via `2 (-1)^{j+1} zeta(2j) / (2 pi)^{2j}`, tabulated once.
fn bernoulli_over_factorial(j: usize) -> f64 {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![0.0];
        for j in 1..=24usize {
            let two_j = 2.0 * j as f64;
            let zeta = if j == 1 {
                core::f64::consts::PI * core::f64::consts::PI / 6.0
            } else {
                // converges quickly for 2j >= 4; tail below 1e-17
                let mut z = 1.0;
                let mut k: f64 = 2.0;
                loop {
                    let term = k.powf(-two_j);
                    z += term;
                    if term < 1e-18 * z || k > 2e5 {
                        break;
                    }
                    k += 1.0;
                }
                z + (2e5f64).powf(1.0 - two_j) / (two_j - 1.0)
            };
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            t.push(sign * 2.0 * zeta / (2.0 * core::f64::consts::PI).powf(two_j));
        }
        t
    });
    table[j]
}

/// `∫_m^∞ ln^sigma(x) x^(-s) e^{itx} dx` for `t > 0`, by rotating the contour
/// to `x = m + iy` where the integrand decays like `e^{-ty}`.
fn oscillatory_tail_integral(s: f64, sigma: f64, m: f64, t: f64) -> (Complex64, f64) {
    debug_assert!(t > 0.0);
    let f = |z: Complex64| -> Complex64 {
        let lz = z.ln();
        let mut w = -s * lz;
        if sigma != 0.0 {
            w += sigma * lz.ln();
        }
        w.exp()
    };
    // choose the truncation point: past y the contour integrand is below
    // both the exponential and the power-law envelope
    let mut y_max = m.max(4.0 / t);
    let scale = log_power_term(s, sigma, m) * m / (s - 1.0).max(0.5);
    loop {
        let env = (-t * y_max).exp() / t * log_power_term(s, 0.0, (m * m + y_max * y_max).sqrt())
            * (1.0 + y_max.ln().abs()).powf(sigma.max(0.0));
        let poly = tail_integral(s, sigma.max(0.0), y_max.max(2.0)).value;
        if env.min(poly) <= 1e-17 * scale.max(1e-300) || y_max > 1e18 {
            break;
        }
        y_max *= 4.0;
    }
    let mut breaks = vec![0.0];
    let mut b = (m / 4.0).min(1.0 / t).max(1e-3 * y_max.min(m));
    while b < y_max {
        breaks.push(b);
        b *= 4.0;
    }
    breaks.push(y_max);
    let q = quad::integrate_with_breaks(
        |y: f64| f(Complex64::new(m, y)) * (-t * y).exp(),
        &breaks,
        3e-14 * scale.max(1e-300),
    )
    .expect("contour integrand is smooth and decaying");
    let phase = Complex64::new(0.0, t * m).exp() * Complex64::new(0.0, 1.0);
    (phase * q.value, q.abs_error + 1e-16 * scale)
}

/// Certified `Σ_{k >= from} ln^sigma(k) k^(-s) e^{itk}` for `s > 1` and
/// `|t| <= pi`.
///
/// Uses the Euler–Maclaurin expansion of `g(x) = f(x) e^{itx}` with the
/// number of correction pairs chosen adaptively; consecutive terms shrink by
/// `(t/2pi)^2`, so the closure converges over the whole reduced frequency
/// range.
pub fn oscillatory_tail_sum(s: f64, sigma: f64, from: u64, t: f64) -> (Complex64, f64) {
    assert!(s > 1.0);
    if t == 0.0 {
        let c = tail_sum(s, sigma, from);
        return (Complex64::new(c.value, 0.0), c.bound);
    }
    if t < 0.0 {
        let (v, b) = oscillatory_tail_sum(s, sigma, from, -t);
        return (v.conj(), b);
    }

    // direct head, Euler–Maclaurin closure at M
    let m_switch = from.max(64) + 256;
    let mut direct = Complex64::new(0.0, 0.0);
    let rot = Complex64::new(0.0, t).exp();
    let mut z = Complex64::new(0.0, t * from as f64).exp();
    for k in from..m_switch {
        direct += z * log_power_term(s, sigma, k as f64);
        z *= rot;
    }
    let mf = m_switch as f64;

    const J_MAX: usize = 22;
    let f_derivs = derivatives_upto(s, sigma, 2 * J_MAX, mf);
    let (integral, int_bound) = oscillatory_tail_integral(s, sigma, mf, t);
    let i_abs = tail_integral(s, sigma, mf);

    // g^{(n)}(M) = e^{itM} sum_l C(n,l) (it)^l f^{(n-l)}(M)
    let phase = Complex64::new(0.0, t * mf).exp();
    let g_deriv = |n: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0f64;
        let mut it_pow = Complex64::new(1.0, 0.0);
        let it = Complex64::new(0.0, t);
        for l in 0..=n {
            acc += it_pow * (binom * f_derivs[n - l]);
            binom *= (n - l) as f64 / (l + 1) as f64;
            it_pow *= it;
        }
        phase * acc
    };
    // ∫_M^∞ |g^{(n)}| <= sum_l C(n,l) t^l |f^{(n-1-l)}(M)| + t^n ∫|f|
    let g_integral_bound = |n: usize| -> f64 {
        let mut acc = 0.0;
        let mut binom = 1.0f64;
        let mut t_pow = 1.0f64;
        for l in 0..n {
            acc += binom * t_pow * f_derivs[n - 1 - l].abs();
            binom *= (n - l) as f64 / (l + 1) as f64;
            t_pow *= t;
        }
        acc + t_pow * i_abs.value
    };

    let mut sum = integral + g_deriv(0) * 0.5;
    let mut best: Option<(Complex64, f64)> = None;
    for j in 1..=J_MAX {
        sum -= g_deriv(2 * j - 1) * bernoulli_over_factorial(j);
        let zeta_factor = 2.0 * 1.1 / (2.0 * core::f64::consts::PI).powf(2.0 * j as f64);
        // x4 slop on the eventual-monotonicity reduction of ∫|g^{(2j)}|
        let rem = 4.0 * zeta_factor * g_integral_bound(2 * j);
        if best.is_none_or(|(_, b)| rem < b) {
            best = Some((sum, rem));
        }
        if rem < 1e-15 {
            break;
        }
    }
    let (tail, rem) = best.expect("at least one correction pair");
    (direct + tail, rem + int_bound + i_abs.bound)
}

/// Certified `Σ_{k >= from} 1/(k^2 2^k)`.
///
/// The series converges geometrically; the remainder after `n` terms is below
/// `2^(-n)/(n+1)^2`.
pub fn geometric_over_square_tail(from: u64) -> Certified {
    let mut sum = 0.0;
    let mut k = from.max(1);
    loop {
        let term = 0.5f64.powi(k as i32) / ((k * k) as f64);
        sum += term;
        k += 1;
        if k > from + 1080 || term < 1e-320 {
            break;
        }
        if term < 1e-18 * sum && k > from + 8 {
            break;
        }
    }
    let rem = 0.5f64.powi(k.min(1070) as i32) / ((k * k) as f64) * 2.0;
    Certified {
        value: sum,
        bound: rem + 4.0 * f64::EPSILON * sum,
    }
}
