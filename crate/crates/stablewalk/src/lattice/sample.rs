//! Two-stage sampling: exact inversion on the table head, then conditional
//! inversion on certified analytic tail sums computed on demand.

use super::{LatticeLaw, TailDescriptor};
use crate::rng::SeededStream;

/// Sites larger than this are clamped; the probability of reaching the clamp
/// is far below the resolution of a 53-bit uniform draw.
const SITE_CAP: u64 = 1 << 61;

impl LatticeLaw {
    /// One draw from the law.
    pub fn sample_one(&self, stream: &mut SeededStream) -> i64 {
        let u = stream.next_f64();
        if u < self.table_mass || self.tail.is_none() {
            // inversion over the table head
            let idx = self.cum.partition_point(|&c| c <= u);
            return self.table[idx.min(self.table.len() - 1)].0;
        }
        let r = u - self.table_mass;
        if r < self.right_tail.value {
            self.invert_tail(r, Side::Right)
        } else {
            let r = r - self.right_tail.value;
            self.invert_tail(r.min(self.left_tail.value), Side::Left)
        }
    }

    /// `count` i.i.d. draws; deterministic given the stream identity.
    pub fn sample(&self, stream: &mut SeededStream, count: usize) -> Vec<i64> {
        (0..count).map(|_| self.sample_one(stream)).collect()
    }

    /// Smallest tail site `k` whose cumulative mass from the cutoff reaches
    /// `target`: equivalently the largest `k` with `mass(>= k) >= resid`.
    fn invert_tail(&self, target: f64, side: Side) -> i64 {
        let cutoff = self.tail.cutoff().expect("tail present");
        let (total, mass_from): (f64, Box<dyn Fn(u64) -> f64 + '_>) = match side {
            Side::Right => (
                self.right_tail.value,
                Box::new(|k| self.tail.right_mass_from_chunked(self.alpha, k, 64).value),
            ),
            Side::Left => (
                self.left_tail.value,
                Box::new(|k| self.tail.left_mass_from_chunked(self.alpha, k, 64).value),
            ),
        };
        let resid = (total - target).max(0.0);

        if let TailDescriptor::GeometricOverSquare { coef, .. } = self.tail {
            // geometric decay: walk directly
            let mut acc = 0.0;
            let mut k = cutoff;
            while k < cutoff + 1060 {
                let kf = k as f64;
                acc += coef * 0.5f64.powi(k as i32) / (kf * kf);
                if acc >= target {
                    return k as i64;
                }
                k += 1;
            }
            return k as i64;
        }

        // exponential search for the octave, then bisection on exact sums
        let mut lo = cutoff; // mass_from(lo) >= resid
        let mut hi = cutoff * 2;
        while mass_from(hi) > resid && hi < SITE_CAP {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if mass_from(mid) > resid {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // lo is the largest site with mass(>= lo) > resid
        let site = lo.min(SITE_CAP) as i64;
        match side {
            Side::Right => site,
            Side::Left => -site,
        }
    }
}

enum Side {
    Right,
    Left,
}
