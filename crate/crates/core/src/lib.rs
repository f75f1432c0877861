//! Additive complements for highly sparse sets, on finite horizons.
//!
//! Given `B ⊂ ℕ`, the crate builds sets `A` whose sumset `A + B` has a
//! prescribed asymptotic density `α`, or prescribed lower and upper
//! densities `α <= β`, and measures the result up to a horizon `H`.
//!
//! * [`sets`]: integer sets on a horizon, counting functions, sumsets,
//!   density profiles, generators and set files.
//! * [`sparseness`]: the ratio and rate characterizations of highly sparse
//!   sets, conversions between them and rate-preserving transformations.
//! * [`complement`]: the greedy construction of `A` with `d(A + B) = α`.
//! * [`oscillation`]: `A` with lower density `α` and upper density `β`,
//!   obtained by thinning a set `C` with `d(C + B) = β`.

pub mod complement;
pub mod error;
pub mod oscillation;
pub mod rational;
pub mod sets;
pub mod sparseness;

pub use error::{Error, ErrorKind, Result};
pub use rational::Rational;
pub use sets::{density_profile, sumset, DensityProfile, IntegerSet, SetGenerator};
