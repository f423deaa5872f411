//! Bivariate means and explicit solutions of the invariance equation
//! `M(K(x, y), L(x, y)) = M(x, y)`.
//!
//! * [`means`]: the [`MeanFn`] abstraction, the classical catalog, Stolarsky
//!   means and trace functions.
//! * [`projective`]: generalized projective means over subsets of the
//!   off-diagonal quadrant.
//! * [`complement`]: constructions of complementary pairs `(K, L)` for a
//!   given `M`, and their translative counterparts on the real line.
//! * [`verify`]: deterministic grid and random scans for mean-ness,
//!   monotonicity, invariance and declared flags.
//! * [`iterate`]: iterates of mean-type mappings and their limits.
//! * [`multivar`]: the `n`-variable construction and its failure.
//! * [`parse`]: the textual expression language used by the CLI.

pub mod complement;
pub mod error;
pub mod iterate;
pub mod means;
pub mod multivar;
pub mod num;
pub mod parse;
pub mod projective;
pub mod verify;

pub use complement::{
    general_base, general_pair, log_pair, self_complement_base, xy_pair, MeanPair, TParam, TRange,
};
pub use error::{MeanError, Result};
pub use iterate::{invariant_value_along_trajectory, iterate_pair, IterationTrace};
pub use means::{
    classical, stolarsky, trace_of, Classical, Flags, MeanFn, StolarskyParams, TraceFn,
};
pub use parse::{parse_mean, parse_pair, parse_spec, MeanSpec};
pub use projective::{complement_cone, projective_mean, ConeSet};
pub use verify::{ScanConfig, ScanReport};
