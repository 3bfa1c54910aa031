//! Analytic descriptions of lattice-law mass outside the explicit table.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::series::{self, Certified};

/// Mass of a lattice law beyond the tabulated head.
///
/// `PowerLaw` places `right_coef * ln^sigma(k) / k^(1+alpha)` on sites
/// `k >= cutoff` and the mirrored expression with `left_coef` on
/// `k <= -cutoff`. `GeometricOverSquare` places `coef / (k^2 2^k)` on
/// `k >= cutoff` only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailDescriptor {
    None,
    PowerLaw {
        cutoff: u64,
        sigma: f64,
        right_coef: f64,
        left_coef: f64,
    },
    GeometricOverSquare {
        cutoff: u64,
        coef: f64,
    },
}

impl TailDescriptor {
    pub fn is_none(&self) -> bool {
        matches!(self, TailDescriptor::None)
    }

    pub fn cutoff(&self) -> Option<u64> {
        match self {
            TailDescriptor::None => None,
            TailDescriptor::PowerLaw { cutoff, .. }
            | TailDescriptor::GeometricOverSquare { cutoff, .. } => Some(*cutoff),
        }
    }

    /// Mass at site `k` when the tail covers it; `None` in the table region.
    pub fn pmf_at(&self, alpha: f64, k: i64) -> Option<f64> {
        match self {
            TailDescriptor::None => None,
            TailDescriptor::PowerLaw {
                cutoff,
                sigma,
                right_coef,
                left_coef,
            } => {
                let mag = k.unsigned_abs();
                if mag < *cutoff {
                    return None;
                }
                let coef = if k > 0 { *right_coef } else { *left_coef };
                Some(coef * series::log_power_term(1.0 + alpha, *sigma, mag as f64))
            }
            TailDescriptor::GeometricOverSquare { cutoff, coef } => {
                if k >= *cutoff as i64 {
                    let kf = k as f64;
                    Some(coef * 0.5f64.powi(k as i32) / (kf * kf))
                } else {
                    None
                }
            }
        }
    }

    /// Mass of right-tail sites `k >= from` (clipped to the tail region).
    pub fn right_mass_from(&self, alpha: f64, from: u64) -> Certified {
        self.right_mass_from_chunked(alpha, from, 512)
    }

    pub fn right_mass_from_chunked(&self, alpha: f64, from: u64, chunk: u64) -> Certified {
        match self {
            TailDescriptor::None => Certified::exact(0.0),
            TailDescriptor::PowerLaw {
                cutoff,
                sigma,
                right_coef,
                ..
            } => series::tail_sum_chunked(1.0 + alpha, *sigma, from.max(*cutoff), chunk)
                .scale(*right_coef),
            TailDescriptor::GeometricOverSquare { cutoff, coef } => {
                series::geometric_over_square_tail(from.max(*cutoff)).scale(*coef)
            }
        }
    }

    /// Mass of left-tail sites `k <= -from` (clipped to the tail region).
    pub fn left_mass_from(&self, alpha: f64, from: u64) -> Certified {
        self.left_mass_from_chunked(alpha, from, 512)
    }

    pub fn left_mass_from_chunked(&self, alpha: f64, from: u64, chunk: u64) -> Certified {
        match self {
            TailDescriptor::None | TailDescriptor::GeometricOverSquare { .. } => {
                Certified::exact(0.0)
            }
            TailDescriptor::PowerLaw {
                cutoff,
                sigma,
                left_coef,
                ..
            } => series::tail_sum_chunked(1.0 + alpha, *sigma, from.max(*cutoff), chunk)
                .scale(*left_coef),
        }
    }

    /// First moment of the whole tail region, when it converges.
    pub fn first_moment(&self, alpha: f64) -> Option<Certified> {
        match self {
            TailDescriptor::None => Some(Certified::exact(0.0)),
            TailDescriptor::PowerLaw {
                cutoff,
                sigma,
                right_coef,
                left_coef,
            } => {
                if alpha <= 1.0 {
                    return None;
                }
                let s = series::tail_sum(alpha, *sigma, *cutoff);
                Some(Certified {
                    value: (right_coef - left_coef) * s.value,
                    bound: (right_coef + left_coef) * s.bound,
                })
            }
            TailDescriptor::GeometricOverSquare { cutoff, coef } => {
                // Σ_{k>=c} k * coef/(k^2 2^k) = coef Σ 1/(k 2^k)
                let mut sum = 0.0;
                for k in *cutoff..cutoff + 400 {
                    sum += 0.5f64.powi(k as i32) / k as f64;
                    if k > cutoff + 8 && 0.5f64.powi(k as i32) < 1e-20 * sum {
                        break;
                    }
                }
                Some(Certified {
                    value: coef * sum,
                    bound: coef * 1e-18 * sum.abs() + f64::MIN_POSITIVE,
                })
            }
        }
    }

    /// Second moment of tail sites with `|k| <= x`, by direct summation.
    pub fn second_moment_upto(&self, alpha: f64, x: f64) -> f64 {
        let xm = x.floor().max(0.0) as u64;
        match self {
            TailDescriptor::None => 0.0,
            TailDescriptor::PowerLaw {
                cutoff,
                sigma,
                right_coef,
                left_coef,
            } => {
                let mut sum = 0.0;
                for k in *cutoff..=xm {
                    let kf = k as f64;
                    sum += kf * kf * series::log_power_term(1.0 + alpha, *sigma, kf);
                }
                sum * (right_coef + left_coef)
            }
            TailDescriptor::GeometricOverSquare { cutoff, coef } => {
                let mut sum = 0.0;
                for k in *cutoff..=xm.min(cutoff + 1100) {
                    sum += 0.5f64.powi(k as i32);
                }
                coef * sum
            }
        }
    }

    /// `Σ_tail pmf(k) e^{itk}` with a certified bound; `t` reduced to
    /// `(-pi, pi]` by the caller.
    pub fn char_sum(&self, alpha: f64, t: f64) -> (Complex64, f64) {
        match self {
            TailDescriptor::None => (Complex64::new(0.0, 0.0), 0.0),
            TailDescriptor::PowerLaw {
                cutoff,
                sigma,
                right_coef,
                left_coef,
            } => {
                let s = 1.0 + alpha;
                let mut value = Complex64::new(0.0, 0.0);
                let mut bound = 0.0;
                if *right_coef > 0.0 {
                    let (v, b) = series::oscillatory_tail_sum(s, *sigma, *cutoff, t);
                    value += v * *right_coef;
                    bound += b * *right_coef;
                }
                if *left_coef > 0.0 {
                    // sites -k contribute e^{-itk}
                    let (v, b) = series::oscillatory_tail_sum(s, *sigma, *cutoff, -t);
                    value += v * *left_coef;
                    bound += b * *left_coef;
                }
                (value, bound)
            }
            TailDescriptor::GeometricOverSquare { cutoff, coef } => {
                let mut value = Complex64::new(0.0, 0.0);
                let rot = Complex64::new(0.0, t).exp();
                let mut z = Complex64::new(0.0, t * *cutoff as f64).exp();
                let mut k = *cutoff;
                loop {
                    let kf = k as f64;
                    value += z * (coef * 0.5f64.powi(k as i32) / (kf * kf));
                    z *= rot;
                    k += 1;
                    if k > cutoff + 200 {
                        break;
                    }
                }
                let rem = coef * 0.5f64.powi((cutoff + 200) as i32);
                (value, rem)
            }
        }
    }
}
