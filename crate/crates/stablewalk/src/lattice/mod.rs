//! Centered integer-lattice step distributions with heavy tails.
//!
//! A [`LatticeLaw`] holds an explicit probability table on a finite set of
//! sites plus an analytic [`TailDescriptor`] for the mass beyond it. The
//! builders produce laws satisfying the standing assumptions of the limit
//! theory: span 1, zero mean whenever the tail index exceeds 1, and tail
//! products `x^alpha P(X > x) -> c1 l(x)`, `x^alpha P(X <= -x) -> c2 l(x)`.

mod builders;
mod sample;
mod tail;

pub use tail::TailDescriptor;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norming::{NormingSeq, SlowlyVarying};
use crate::series::Certified;

/// Raw ingredients for [`LatticeLaw::from_parts`].
#[derive(Clone, Debug)]
pub struct LawParts {
    /// explicit head of the pmf: (site, mass) pairs, any order
    pub table: Vec<(i64, f64)>,
    pub tail: TailDescriptor,
    /// tail index in (0, 2], not 1
    pub alpha: f64,
    /// right tail constant of `x^alpha P(X > x) -> c1 l(x)`
    pub c1: f64,
    /// left tail constant
    pub c2: f64,
    /// short name recorded in exports and cache keys
    pub label: String,
}

/// A lattice distribution: explicit table head plus analytic tail.
///
/// Immutable after construction and safe to share across threads.
#[derive(Clone, Debug)]
pub struct LatticeLaw {
    offset: i64,
    span: u32,
    table: Vec<(i64, f64)>,
    tail: TailDescriptor,
    alpha: f64,
    c1: f64,
    c2: f64,
    l: SlowlyVarying,
    label: String,
    // derived at construction
    cum: Vec<f64>,
    suffix: Vec<f64>,
    table_mass: f64,
    right_tail: Certified,
    left_tail: Certified,
}

const MASS_TOL: f64 = 1e-12;
const MEAN_TOL: f64 = 1e-10;

impl LatticeLaw {
    /// Validating constructor; computes span, offset and the cached sums.
    pub fn from_parts(parts: LawParts) -> Result<Self> {
        let LawParts {
            mut table,
            tail,
            alpha,
            c1,
            c2,
            label,
        } = parts;

        if !(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0 {
            return Err(Error::param("alpha", "must lie in (0,2] and differ from 1"));
        }
        if !(c1 >= 0.0 && c2 >= 0.0 && c1.is_finite() && c2.is_finite()) {
            return Err(Error::param("c1/c2", "tail constants must be finite and nonnegative"));
        }
        match &tail {
            TailDescriptor::PowerLaw {
                cutoff,
                sigma,
                right_coef,
                left_coef,
            } => {
                if *cutoff < 2 {
                    return Err(Error::param("cutoff", "analytic tail must start at |k| >= 2"));
                }
                if !(*sigma >= 0.0) {
                    return Err(Error::param("sigma", "tail log exponent must be >= 0"));
                }
                if c1 + c2 <= 0.0 {
                    return Err(Error::InvalidLaw(
                        "power-law tails need c1 + c2 > 0".into(),
                    ));
                }
                let ok = |coef: f64, c: f64| (coef - c * alpha).abs() <= 1e-9 * (1.0 + c * alpha);
                if !ok(*right_coef, c1) || !ok(*left_coef, c2) {
                    return Err(Error::InvalidLaw(
                        "tail coefficients must equal alpha * c1 (right) and alpha * c2 (left)"
                            .into(),
                    ));
                }
            }
            TailDescriptor::GeometricOverSquare { cutoff, coef } => {
                if *cutoff < 2 || !(*coef >= 0.0) {
                    return Err(Error::param("tail", "bad geometric-over-square parameters"));
                }
                if alpha != 2.0 || c1 != 0.0 || c2 != 0.0 {
                    return Err(Error::InvalidLaw(
                        "geometric-over-square tails live at alpha = 2 with c1 = c2 = 0".into(),
                    ));
                }
            }
            TailDescriptor::None => {
                if alpha != 2.0 || c1 != 0.0 || c2 != 0.0 {
                    return Err(Error::InvalidLaw(
                        "bounded-support laws sit in the normal domain: alpha = 2, c1 = c2 = 0"
                            .into(),
                    ));
                }
            }
        }

        table.retain(|(_, m)| *m != 0.0);
        table.sort_by_key(|(k, _)| *k);
        for w in table.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidLaw(format!("duplicate table site {}", w[0].0)));
            }
        }
        for &(k, m) in &table {
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::InvalidLaw(format!("mass at site {k} must be positive, got {m}")));
            }
            if let Some(cutoff) = tail.cutoff() {
                let in_tail = match tail {
                    TailDescriptor::GeometricOverSquare { .. } => k >= cutoff as i64,
                    _ => k.unsigned_abs() >= cutoff,
                };
                if in_tail {
                    return Err(Error::InvalidLaw(format!(
                        "table site {k} overlaps the analytic tail region (cutoff {cutoff})"
                    )));
                }
            }
        }

        let right_tail = tail.right_mass_from(alpha, 0);
        let left_tail = tail.left_mass_from(alpha, 0);
        let table_mass = crate::series::kahan_sum(table.iter().map(|(_, m)| *m));
        let total = table_mass + right_tail.value + left_tail.value;
        let slack = MASS_TOL + right_tail.bound + left_tail.bound;
        if (total - 1.0).abs() > slack {
            return Err(Error::InvalidLaw(format!(
                "total mass {total} deviates from 1 by more than {slack}"
            )));
        }

        // span and offset from the support
        let mut sites: Vec<i64> = table.iter().map(|(k, _)| *k).collect();
        if let Some(cutoff) = tail.cutoff() {
            let c = cutoff as i64;
            match tail {
                TailDescriptor::PowerLaw {
                    right_coef,
                    left_coef,
                    ..
                } => {
                    if right_coef > 0.0 {
                        sites.push(c);
                        sites.push(c + 1);
                    }
                    if left_coef > 0.0 {
                        sites.push(-c);
                        sites.push(-c - 1);
                    }
                }
                TailDescriptor::GeometricOverSquare { coef, .. } => {
                    if coef > 0.0 {
                        sites.push(c);
                        sites.push(c + 1);
                    }
                }
                TailDescriptor::None => {}
            }
        }
        let span = span_of_support(&sites)?;
        let offset = sites[0].rem_euclid(span as i64);

        // centered when the mean exists
        if alpha > 1.0 {
            let head = crate::series::kahan_sum(table.iter().map(|(k, m)| *k as f64 * m));
            let tail_first = tail
                .first_moment(alpha)
                .expect("alpha > 1 has a convergent tail mean");
            let mean = head + tail_first.value;
            if mean.abs() > MEAN_TOL + tail_first.bound {
                return Err(Error::InvalidLaw(format!(
                    "law must be centered for alpha > 1, mean = {mean}"
                )));
            }
        }

        let l = match &tail {
            TailDescriptor::PowerLaw { sigma, .. } if *sigma > 0.0 => {
                SlowlyVarying::log_power(*sigma)?
            }
            _ => SlowlyVarying::constant(1.0)?,
        };

        let mut cum = Vec::with_capacity(table.len());
        let mut acc = 0.0;
        for &(_, m) in &table {
            acc += m;
            cum.push(acc);
        }
        let mut suffix = vec![0.0; table.len() + 1];
        for i in (0..table.len()).rev() {
            suffix[i] = suffix[i + 1] + table[i].1;
        }

        Ok(LatticeLaw {
            offset,
            span,
            table,
            tail,
            alpha,
            c1,
            c2,
            l,
            label,
            cum,
            suffix,
            table_mass,
            right_tail,
            left_tail,
        })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }
    pub fn span(&self) -> u32 {
        self.span
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn c1(&self) -> f64 {
        self.c1
    }
    pub fn c2(&self) -> f64 {
        self.c2
    }
    pub fn tail(&self) -> &TailDescriptor {
        &self.tail
    }
    pub fn table(&self) -> &[(i64, f64)] {
        &self.table
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    /// The slowly varying factor `l` of the tail condition.
    pub fn slowly_varying(&self) -> &SlowlyVarying {
        &self.l
    }
    /// Mass kept in the explicit table.
    pub fn table_mass(&self) -> f64 {
        self.table_mass
    }
    /// Analytic mass beyond the table (right + left), with certificate.
    pub fn analytic_mass(&self) -> Certified {
        self.right_tail + self.left_tail
    }

    /// `P(X = k)`.
    pub fn pmf(&self, k: i64) -> f64 {
        if let Ok(i) = self.table.binary_search_by_key(&k, |(s, _)| *s) {
            return self.table[i].1;
        }
        self.tail.pmf_at(self.alpha, k).unwrap_or(0.0)
    }

    /// Recompute the maximal span from the support.
    pub fn verify_span(&self) -> Result<u32> {
        let mut sites: Vec<i64> = self.table.iter().map(|(k, _)| *k).collect();
        if let Some(c) = self.tail.cutoff() {
            match &self.tail {
                TailDescriptor::PowerLaw {
                    right_coef,
                    left_coef,
                    ..
                } => {
                    if *right_coef > 0.0 {
                        sites.extend([c as i64, c as i64 + 1]);
                    }
                    if *left_coef > 0.0 {
                        sites.extend([-(c as i64), -(c as i64) - 1]);
                    }
                }
                TailDescriptor::GeometricOverSquare { coef, .. } if *coef > 0.0 => {
                    sites.extend([c as i64, c as i64 + 1]);
                }
                _ => {}
            }
        }
        span_of_support(&sites)
    }

    /// `E[X^2 1_{|X| <= x}]`.
    pub fn second_moment_truncated(&self, x: f64) -> f64 {
        let head: f64 = self
            .table
            .iter()
            .filter(|(k, _)| (k.unsigned_abs() as f64) <= x)
            .map(|(k, m)| (*k as f64) * (*k as f64) * m)
            .sum();
        head + self.tail.second_moment_upto(self.alpha, x)
    }

    /// Variance, when the law has a finite second moment.
    pub fn variance(&self) -> Option<f64> {
        match &self.tail {
            TailDescriptor::PowerLaw { .. } => None,
            TailDescriptor::None => Some(self.second_moment_truncated(f64::INFINITY.min(1e18))),
            TailDescriptor::GeometricOverSquare { cutoff, coef } => {
                let head: f64 = self
                    .table
                    .iter()
                    .map(|(k, m)| (*k as f64) * (*k as f64) * m)
                    .sum();
                // Σ_{k>=c} k^2 coef/(k^2 2^k) = coef 2^{1-c}
                Some(head + coef * 0.5f64.powi(*cutoff as i32 - 1))
            }
        }
    }

    /// `P(X > x)` with certificate.
    pub fn right_tail_prob(&self, x: f64) -> Certified {
        let first = x.floor() as i64 + 1;
        let idx = self.table.partition_point(|(k, _)| *k < first);
        let head = self.suffix[idx];
        self.tail.right_mass_from(self.alpha, first.max(0) as u64) + Certified::exact(head)
    }

    /// `P(X <= -x)` with certificate.
    pub fn left_tail_prob(&self, x: f64) -> Certified {
        let last = -(x.ceil() as i64);
        let idx = self.table.partition_point(|(k, _)| *k <= last);
        let head = self.cum.get(idx.wrapping_sub(1)).copied().unwrap_or(0.0);
        let head = if idx == 0 { 0.0 } else { head };
        self.tail.left_mass_from(self.alpha, x.ceil().max(0.0) as u64) + Certified::exact(head)
    }

    /// Empirical tail products `(x, x^alpha P(X>x), x^alpha P(X<=-x))`.
    pub fn tail_profile(&self, x_grid: &[f64]) -> Vec<(f64, f64, f64)> {
        x_grid
            .iter()
            .map(|&x| {
                let xa = x.powf(self.alpha);
                (
                    x,
                    xa * self.right_tail_prob(x).value,
                    xa * self.left_tail_prob(x).value,
                )
            })
            .collect()
    }

    /// Characteristic function `E[e^{itX}]`, summed over table plus tail to
    /// absolute accuracy 1e-12.
    pub fn char_fn(&self, t: f64) -> Complex64 {
        let tr = reduce_frequency(t);
        let mut sum = Complex64::new(0.0, 0.0);
        for &(k, m) in &self.table {
            let arg = tr * k as f64;
            sum += Complex64::new(arg.cos() * m, arg.sin() * m);
        }
        let (tail, _bound) = self.tail.char_sum(self.alpha, tr);
        sum + tail
    }

    /// Table-only characteristic sum plus a bound on the neglected tail.
    ///
    /// Fast enough for dense grids; the neglected part is at most the
    /// analytic tail mass.
    pub fn char_fn_head(&self, t: f64) -> (Complex64, f64) {
        let tr = reduce_frequency(t);
        let rot = Complex64::new(0.0, tr).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut i = 0;
        while i < self.table.len() {
            // rotate along runs of consecutive sites
            let start = self.table[i].0;
            let mut z = Complex64::new(0.0, tr * start as f64).exp();
            sum += z * self.table[i].1;
            let mut prev = start;
            i += 1;
            while i < self.table.len() && self.table[i].0 == prev + 1 {
                z *= rot;
                sum += z * self.table[i].1;
                prev += 1;
                i += 1;
            }
        }
        let neglected = self.right_tail.value + self.left_tail.value
            + self.right_tail.bound
            + self.left_tail.bound
            + self.table.len() as f64 * 4.0 * f64::EPSILON;
        (sum, neglected)
    }

    /// The law reflected through the origin.
    pub fn mirrored(&self) -> LatticeLaw {
        let table: Vec<(i64, f64)> = self.table.iter().map(|&(k, m)| (-k, m)).collect();
        let tail = match &self.tail {
            TailDescriptor::PowerLaw {
                cutoff,
                sigma,
                right_coef,
                left_coef,
            } => TailDescriptor::PowerLaw {
                cutoff: *cutoff,
                sigma: *sigma,
                right_coef: *left_coef,
                left_coef: *right_coef,
            },
            other => other.clone(),
        };
        if matches!(tail, TailDescriptor::GeometricOverSquare { .. }) {
            // the geometric tail is one-sided; mirroring would need a left
            // variant which nothing in the crate consumes
            unimplemented!("mirroring is not defined for geometric-over-square tails");
        }
        LatticeLaw::from_parts(LawParts {
            table,
            tail,
            alpha: self.alpha,
            c1: self.c2,
            c2: self.c1,
            label: format!("{}~mirror", self.label),
        })
        .expect("mirror of a valid law is valid")
    }

    /// The norming sequence implied by the law itself.
    ///
    /// For `alpha < 2` the slowly varying factor of the characteristic
    /// exponent is the tail factor `l`; at `alpha = 2` with finite variance
    /// it degenerates to the constant `Var(X)`. The infinite-variance edge
    /// at `alpha = 2` has no closed descriptor here and must be supplied by
    /// the caller.
    pub fn natural_norming(&self) -> Result<NormingSeq> {
        if self.alpha < 2.0 {
            return NormingSeq::new(self.alpha, self.l.clone());
        }
        match self.variance() {
            Some(v) => NormingSeq::new(2.0, SlowlyVarying::constant(v)?),
            None => Err(Error::param(
                "law",
                "alpha = 2 with infinite variance has no built-in norming; supply one",
            )),
        }
    }

    /// Serialize to the interchange JSON document.
    pub fn to_json(&self) -> String {
        let schema = LawSchema {
            offset: self.offset,
            span: self.span,
            alpha: self.alpha,
            c1: self.c1,
            c2: self.c2,
            table: self.table.clone(),
            tail: self.tail.clone(),
        };
        serde_json::to_string_pretty(&schema).expect("law schema serializes")
    }

    /// Rebuild a law from [`LatticeLaw::to_json`] output, re-validating.
    pub fn from_json(text: &str) -> Result<Self> {
        let schema: LawSchema =
            serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))?;
        let law = LatticeLaw::from_parts(LawParts {
            table: schema.table,
            tail: schema.tail,
            alpha: schema.alpha,
            c1: schema.c1,
            c2: schema.c2,
            label: "from_json".into(),
        })?;
        if law.span != schema.span || law.offset != schema.offset {
            return Err(Error::InvalidLaw(format!(
                "declared span/offset ({}, {}) disagree with support ({}, {})",
                schema.span, schema.offset, law.span, law.offset
            )));
        }
        Ok(law)
    }

    /// Stable identifier derived from the serialized content.
    pub fn content_id(&self) -> u64 {
        let bytes = self.to_json();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in bytes.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
        h
    }
}

#[derive(Serialize, Deserialize)]
struct LawSchema {
    offset: i64,
    span: u32,
    alpha: f64,
    c1: f64,
    c2: f64,
    table: Vec<(i64, f64)>,
    tail: TailDescriptor,
}

/// Reduce a frequency to `(-pi, pi]`; exact for lattice laws on the integers.
fn reduce_frequency(t: f64) -> f64 {
    use core::f64::consts::PI;
    let two_pi = 2.0 * PI;
    let mut r = t % two_pi;
    if r > PI {
        r -= two_pi;
    } else if r <= -PI {
        r += two_pi;
    }
    r
}

/// Maximal span: gcd of the pairwise differences of the support sites.
pub fn span_of_support(sites: &[i64]) -> Result<u32> {
    let mut uniq: Vec<i64> = sites.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.len() < 2 {
        return Err(Error::DegenerateSupport);
    }
    let base = uniq[0];
    let mut g: u64 = 0;
    for &s in &uniq[1..] {
        g = gcd(g, (s - base).unsigned_abs());
    }
    Ok(g as u32)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::ComplexFloat;
    use proptest::prelude::*;

    #[test]
    fn lazy_char_fn_closed_form() {
        let law = LatticeLaw::lazy_walk();
        for t in [0.0, 0.3, 1.0, 2.5, -1.7] {
            let v = law.char_fn(t);
            assert!((v.re - (0.5 + 0.5 * t.cos())).abs() < 1e-14);
            assert!(v.im.abs() < 1e-14);
        }
        assert!((law.char_fn(0.0) - Complex64::new(1.0, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn lattice_periodicity() {
        use core::f64::consts::PI;
        for law in [
            LatticeLaw::lazy_walk(),
            LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap(),
            LatticeLaw::geometric_tail_counterexample(),
        ] {
            let v = law.char_fn(2.0 * PI);
            assert!(
                (v - Complex64::new(1.0, 0.0)).abs() < 1e-11,
                "{}: {v}",
                law.label()
            );
        }
    }

    #[test]
    fn char_fn_against_direct_sum_oracle() {
        // brute-force summation over |k| <= 10^7 with Abel remainder bound
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        let t = 0.1f64;
        let mut brute = Complex64::new(0.0, 0.0);
        for k in -10_000_000i64..=10_000_000 {
            let m = law.pmf(k);
            if m > 0.0 {
                let arg = t * k as f64;
                brute += Complex64::new(arg.cos() * m, arg.sin() * m);
            }
        }
        let rem = 4.0 * law.pmf(10_000_000) / (Complex64::new(1.0, 0.0) - Complex64::new(0.0, t).exp()).abs();
        let v = law.char_fn(t);
        assert!(v.im.abs() < 1e-12, "symmetric law has real char fn");
        assert!(v.re > 0.0 && v.re < 1.0);
        assert!((v - brute).abs() < 1e-11 + rem, "{} vs {}", v.re, brute.re);
    }

    #[test]
    fn char_fn_modulus_strictly_inside_unit_disc() {
        // span 1: |phi(t)| < 1 for 0 < |t| < 2 pi, checked on a grid
        for law in [
            LatticeLaw::lazy_walk(),
            LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap(),
            LatticeLaw::zipf_skewed(1.5, 0.3, 0.1).unwrap(),
        ] {
            for i in 1..60 {
                let t = 2.0 * core::f64::consts::PI * i as f64 / 60.0;
                let m = law.char_fn(t).abs();
                assert!(m < 1.0 - 1e-6, "{} at t={t}: |phi| = {m}", law.label());
                assert!(m <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn log_modulus_scaling_trend() {
        // log|phi(t)| / |t|^alpha approaches a negative constant: dyadic
        // ratios within 10% for t <= 1e-3
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        let mut t = 1e-3;
        for _ in 0..4 {
            let r1 = law.char_fn(t).abs().ln() / t.powf(1.5);
            let r2 = law.char_fn(t / 2.0).abs().ln() / (t / 2.0).powf(1.5);
            assert!(r1 < 0.0 && r2 < 0.0);
            assert!((r1 / r2 - 1.0).abs() < 0.1, "t={t}: {r1} vs {r2}");
            t /= 2.0;
        }
    }

    #[test]
    fn char_fn_head_consistent_with_full() {
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        for t in [0.05, 0.7, 2.0] {
            let full = law.char_fn(t);
            let (head, neglected) = law.char_fn_head(t);
            assert!((full - head).abs() <= neglected, "t={t}");
        }
    }

    #[test]
    fn tail_profile_zipf_two_percent() {
        let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
        let prof = law.tail_profile(&[1e4]);
        let (_, right, left) = prof[0];
        assert!((right - 0.25).abs() < 0.02 * 0.25, "right product {right}");
        assert!((left - 0.25).abs() < 0.02 * 0.25);
    }

    #[test]
    fn tail_profile_bounded_support() {
        let law = LatticeLaw::lazy_walk();
        let prof = law.tail_profile(&[2.0]);
        assert_eq!(prof[0].1, 0.0);
        assert_eq!(prof[0].2, 0.0);
    }

    #[test]
    fn counterexample_tail_product_not_slowly_varying() {
        // ratio at (x, 2x) must stay far from 1, unlike a slowly varying map
        let law = LatticeLaw::geometric_tail_counterexample();
        for x in [8.0f64, 16.0, 32.0] {
            let p1 = x * x * law.right_tail_prob(x).value;
            let p2 = 4.0 * x * x * law.right_tail_prob(2.0 * x).value;
            let ratio = p2 / p1;
            assert!(ratio < 0.5, "x={x}: ratio {ratio} too close to 1");
        }
        // while the truncated second moment passes the same test
        for x in [8.0f64, 16.0, 32.0] {
            let r = law.second_moment_truncated(2.0 * x) / law.second_moment_truncated(x);
            assert!((r - 1.0).abs() < 0.05, "x={x}: second-moment ratio {r}");
        }
    }

    #[test]
    fn span_examples() {
        assert_eq!(span_of_support(&[-1, 0, 1]).unwrap(), 1);
        assert_eq!(span_of_support(&[-2, 0, 2]).unwrap(), 2);
        assert_eq!(span_of_support(&[3, 8, 13]).unwrap(), 5);
        assert!(matches!(
            span_of_support(&[4]),
            Err(Error::DegenerateSupport)
        ));
    }

    #[test]
    fn span_two_law() {
        let law = LatticeLaw::from_parts(LawParts {
            table: vec![(-2, 0.25), (0, 0.5), (2, 0.25)],
            tail: TailDescriptor::None,
            alpha: 2.0,
            c1: 0.0,
            c2: 0.0,
            label: "even walk".into(),
        })
        .unwrap();
        assert_eq!(law.span(), 2);
        assert_eq!(law.verify_span().unwrap(), 2);
        assert_eq!(law.offset(), 0);
    }

    #[test]
    fn offset_representative() {
        let law = LatticeLaw::from_parts(LawParts {
            table: vec![(3, 0.4), (8, 0.2), (13, 0.4)],
            tail: TailDescriptor::None,
            alpha: 2.0,
            c1: 0.0,
            c2: 0.0,
            label: "shifted".into(),
        });
        // mean is 8, not centered -> rejected
        assert!(law.is_err());
    }

    #[test]
    fn mirrored_law_swaps_sides() {
        let law = LatticeLaw::zipf_skewed(1.5, 0.3, 0.1).unwrap();
        let mir = law.mirrored();
        assert_eq!(mir.c1(), 0.1);
        assert_eq!(mir.c2(), 0.3);
        for k in [-2000i64, -5, -1, 0, 1, 5, 2000] {
            assert_eq!(law.pmf(k), mir.pmf(-k), "site {k}");
        }
    }

    #[test]
    fn json_roundtrip_bit_exact() {
        let law = LatticeLaw::zipf_skewed(1.5, 0.3, 0.1).unwrap();
        let text = law.to_json();
        let back = LatticeLaw::from_json(&text).unwrap();
        assert_eq!(law.table(), back.table(), "table must round-trip bit-exactly");
        assert_eq!(law.tail(), back.tail());
        assert_eq!(law.span(), back.span());
        assert_eq!(law.alpha(), back.alpha());
        assert_eq!(law.content_id(), back.content_id());
    }

    #[test]
    fn natural_norming_kinds() {
        let lazy = LatticeLaw::lazy_walk().natural_norming().unwrap();
        assert!((lazy.bn(8).unwrap() - 2.0).abs() < 1e-12);
        let zipf = LatticeLaw::zipf_symmetric(1.5, 0.25)
            .unwrap()
            .natural_norming()
            .unwrap();
        assert!((zipf.bn(64).unwrap() - 16.0).abs() < 1e-11);
        let logs = LatticeLaw::log_sigma_family(1.5, 0.4)
            .unwrap()
            .natural_norming()
            .unwrap();
        assert!(matches!(logs.h(), SlowlyVarying::LogPower { .. }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn builders_are_normalized_and_centered(
            alpha in prop_oneof![Just(1.25), Just(1.5), Just(1.75), Just(0.5), Just(2.0)],
            c in 0.02f64..0.45,
        ) {
            if let Ok(law) = LatticeLaw::zipf_symmetric(alpha, c) {
                let total = law.table_mass() + law.analytic_mass().value;
                prop_assert!((total - 1.0).abs() <= 1e-12 + law.analytic_mass().bound);
                prop_assert_eq!(law.span(), 1);
                if alpha > 1.0 {
                    let head = crate::series::kahan_sum(law.table().iter().map(|(k, m)| *k as f64 * m));
                    let tm = law.tail().first_moment(alpha).unwrap();
                    prop_assert!((head + tm.value).abs() < 1e-10 + tm.bound);
                }
            }
        }

        #[test]
        fn char_fn_in_unit_disc(t in -20.0f64..20.0) {
            let law = LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap();
            let v = law.char_fn(t);
            prop_assert!(v.abs() <= 1.0 + 1e-12);
        }

        #[test]
        fn serde_roundtrip_any_builder(pick in 0usize..4) {
            let law = match pick {
                0 => LatticeLaw::lazy_walk(),
                1 => LatticeLaw::zipf_symmetric(1.5, 0.25).unwrap(),
                2 => LatticeLaw::log_sigma_family(1.5, 0.4).unwrap(),
                _ => LatticeLaw::geometric_tail_counterexample(),
            };
            let back = LatticeLaw::from_json(&law.to_json()).unwrap();
            prop_assert_eq!(law.table(), back.table());
        }
    }
}

