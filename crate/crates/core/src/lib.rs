//! Point counting for elliptic curves over finite fields `F_q`, `q < 2^32`.
//!
//! The trace of Frobenius is pinned down from the orders of random points on
//! a curve and on its quadratic twist, merged as congruences until a single
//! candidate remains in the Hasse interval. Small or excluded fields fall
//! back to enumeration. The [`exceptions`] module enumerates the field sizes
//! where point orders alone can leave the trace ambiguous.

pub mod arith;
pub mod counting;
pub mod curve;
pub mod exceptions;
pub mod field;
pub mod order;
pub mod selftest;

pub use counting::{CountError, CountMethod, CountResult, GroupStructure};
pub use curve::{Curve, CurveError, Point};
pub use exceptions::{CorollaryReading, ExceptionRecord};
pub use field::{FieldElement, FieldError, FieldSpec};
pub use order::{Congruence, HasseInterval, OrderError};
