//! Exact intersection-theoretic calculator for divisor classes on the
//! moduli space of n-pointed stable rational curves and its weighted
//! (Hassett) models.
//!
//! Everything runs over arbitrary-precision rationals: boundary bases and
//! their linear relations, canonical forms, tautological classes,
//! push-forward/pull-back along reduction morphisms, restriction to
//! boundary and coincidence strata, pairing with vital (F-)curves, and an
//! exact simplex solver used to decide log-canonicality.

pub mod combinat;
pub mod hassett;
pub mod lc;
pub mod lp;
pub mod mzn;
pub mod oracle;
pub mod rational;

mod error;

pub use combinat::{FCurve, SubsetIndex, WeightDatum};
pub use error::{Error, Result};
pub use hassett::{BoundaryKind, HassettClass};
pub use mzn::MznClass;
pub use rational::Q;
