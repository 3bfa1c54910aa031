//! Numerical laboratory for lattice random walks attracted to α-stable laws.
//!
//! The crate builds centered integer-lattice distributions with power-law
//! tails, computes the exact law of the partial sums `S_n` by certified
//! n-fold convolution, evaluates the limiting stable density by
//! characteristic-function inversion, solves for the norming constants
//! `b_n`, and measures how fast the joint local probabilities decorrelate,
//! the quantity driving logarithmically averaged local limit behaviour.
//!
//! The pieces fit together like this:
//!
//! * [`lattice`]: step distributions, builders, pmf/tail accessors,
//!   characteristic function, seeded sampling.
//! * [`stable`]: the limit law, parameters from tail constants, density by
//!   numerical inversion, the gamma-integral closed form.
//! * [`norming`]: the sequence `b_n = L(n) n^{1/α}`, slowly varying
//!   descriptors and the summability diagnostics.
//! * [`exact_llt`]: windowed convolution engine with truncation
//!   certificates; local probabilities and uniform-bound scans.
//! * [`correlation`]: the exact joint-minus-product quantity and its upper
//!   bounds; empirical decay-exponent fits.
//! * [`aslt`]: seeded simulation of logarithmic averages of local hits and
//!   the block-variance diagnostic.

// validations use `!(x > 0.0)` on purpose: the negation also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aslt;
pub mod correlation;
pub mod error;
pub mod exact_llt;
pub mod export;
pub mod lattice;
pub mod norming;
pub mod quad;
pub mod rng;
pub mod series;
pub mod stable;

pub use error::{Error, Result};
pub use exact_llt::{SnConfig, SnPmf};
pub use lattice::{LatticeLaw, TailDescriptor};
pub use norming::{NormingSeq, SlowlyVarying};
pub use stable::StableParams;
