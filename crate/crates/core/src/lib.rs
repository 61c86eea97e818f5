//! Building blocks for checking Erdős–Kac-type normal laws of polynomials
//! evaluated at strongly additive functions.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation: prime sieving and streamed factorization, sieve density
//! models, the mean/covariance statistics that predict the normal law,
//! streaming moment accumulators, the Kolmogorov–Smirnov comparison against
//! the standard normal, and an exact-rational oracle for the combinatorial
//! identities behind the moment computation.
//!
//! File formats, configuration, parallel orchestration and the command line
//! live in the companion `ekac` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod additive;
pub mod error;
pub mod fit;
pub mod input;
pub mod moments;
pub mod oracle;
pub mod poly;
pub mod sieve;
pub mod stats;
pub mod sum;

pub use additive::{PrimeWindow, StronglyAdditive};
pub use error::{Error, Result};
pub use fit::{phi, Ecdf, FitCollector, FitReport};
pub use input::{big_x, DensityModel, InputSet, Remainder};
pub use moments::{gaussian_moment_c, MomentAccumulator, MomentReport};
pub use poly::{PolyQ, RmExpansion};
pub use sieve::{primes_up_to, FactorStream, PrimeTable};
pub use stats::StatBundle;

/// Largest integer accepted anywhere in the crate (2^63 - 1).
pub const MAX_INPUT: u64 = i64::MAX as u64;
