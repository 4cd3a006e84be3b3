//! Computing `#E(F_q)`.
//!
//! The point-order method keeps a congruence `t = a (mod m)` on the trace,
//! starting from `0 mod 1`. Random points are drawn alternately from `E`
//! and its twist `E'`; a point of order `n` on `E` gives `t = q + 1 (mod n)`,
//! one on `E'` gives `t = -(q + 1) (mod n)`. The loop stops as soon as a
//! single `t` with `|t| <= 2 sqrt(q)` remains. The answer is always
//! correct; only the number of samples is random. Uniqueness is reachable
//! for every curve unless `q` is one of [`EXCLUDED_Q`], where the exhaustive
//! count is used instead.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::lcm;
use crate::curve::{Curve, CurveError, Point};
use crate::order::{self, crt_merge, unique_trace_candidate, Congruence, HasseInterval, OrderError};

/// Field sizes for which the trace cannot always be pinned down by the
/// exponents of `E` and `E'`.
pub const EXCLUDED_Q: [u64; 12] = [3, 4, 5, 7, 9, 11, 16, 17, 23, 25, 29, 49];

/// Field sizes for which the exponents of `E` and `E'` do not always
/// determine the group structures.
pub const COROLLARY_EXCLUDED_Q: [u64; 7] = [5, 7, 9, 11, 17, 23, 29];

/// Below this size `auto` counts by enumeration.
pub const SMALL_FIELD_LIMIT: u64 = 49;

/// Sample cap for the point-order loop.
pub const DEFAULT_SAMPLE_CAP: u32 = 64;

/// Largest field on which [`lambda_exponent`] and [`group_structure`] run.
pub const LAMBDA_LIMIT: u64 = 1 << 16;

/// Number of fresh points checked against the final count.
const VERIFICATION_POINTS: usize = 3;

pub fn is_excluded(q: u64) -> bool {
    EXCLUDED_Q.contains(&q)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("q = {0} is excluded from the point-order method")]
    ExcludedField(u64),
    #[error("no unique trace after {0} samples")]
    IterationCapExceeded(u32),
    #[error("count {count} failed verification: {point} is not annihilated")]
    VerificationFailed { count: u64, point: Point },
    #[error("group invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Auto,
    Exhaustive,
    PointOrder,
}

/// One sampled point in a point-order run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub on_twist: bool,
    pub order: u64,
    /// Trace constraint after merging this sample.
    pub congruence: Congruence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub q: u64,
    pub count: u64,
    pub trace: i64,
    pub twist_count: u64,
    /// `Exhaustive` or `PointOrder`, never `Auto`.
    pub method: CountMethod,
    pub samples_used: u32,
    pub transcript: Vec<SampleRecord>,
}

impl CountResult {
    fn from_count(q: u64, count: u64, method: CountMethod, transcript: Vec<SampleRecord>) -> Self {
        CountResult {
            q,
            count,
            trace: q as i64 + 1 - count as i64,
            twist_count: 2 * (q + 1) - count,
            method,
            samples_used: transcript.len() as u32,
            transcript,
        }
    }
}

/// `E(F_q) = Z/n1 x Z/n2` with `n1 | n2` and `n1 | q - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupStructure {
    pub n1: u64,
    pub n2: u64,
}

impl GroupStructure {
    pub fn order(&self) -> u64 {
        self.n1 * self.n2
    }

    pub fn is_cyclic(&self) -> bool {
        self.n1 == 1
    }
}

/// Counts points with the requested method, sampling with `rng`.
pub fn count_points<R: Rng + ?Sized>(
    curve: &Curve,
    method: CountMethod,
    rng: &mut R,
) -> Result<CountResult, CountError> {
    count_points_capped(curve, method, rng, DEFAULT_SAMPLE_CAP)
}

/// [`count_points`] with an explicit sample cap for the point-order loop.
pub fn count_points_capped<R: Rng + ?Sized>(
    curve: &Curve,
    method: CountMethod,
    rng: &mut R,
    cap: u32,
) -> Result<CountResult, CountError> {
    let q = curve.field().q();
    let method = match method {
        CountMethod::Auto if q <= SMALL_FIELD_LIMIT || is_excluded(q) => CountMethod::Exhaustive,
        CountMethod::Auto => CountMethod::PointOrder,
        m => m,
    };
    match method {
        CountMethod::Exhaustive => {
            let count = curve.count_exhaustive()?;
            Ok(CountResult::from_count(q, count, CountMethod::Exhaustive, Vec::new()))
        }
        _ => {
            if is_excluded(q) {
                return Err(CountError::ExcludedField(q));
            }
            count_by_point_orders(curve, rng, cap)
        }
    }
}

fn count_by_point_orders<R: Rng + ?Sized>(curve: &Curve, rng: &mut R, cap: u32) -> Result<CountResult, CountError> {
    let q = curve.field().q();
    let twist = curve.quadratic_twist()?;
    let mut constraint = Congruence::TRIVIAL;
    let mut transcript = Vec::new();

    for i in 0..cap {
        let on_twist = i % 2 == 1;
        let e = if on_twist { &twist } else { curve };
        let p = e.random_point(rng)?;
        let n = order::point_order(e, &p)?;
        // #E = q + 1 - t and #E' = q + 1 + t are multiples of n.
        let target = if on_twist { -(q as i128 + 1) } else { q as i128 + 1 };
        constraint = crt_merge(constraint, Congruence::new(target, n))?;
        transcript.push(SampleRecord {
            on_twist,
            order: n,
            congruence: constraint,
        });
        if let Some(t) = unique_trace_candidate(constraint, q) {
            let count = (q as i64 + 1 - t) as u64;
            debug_assert!(HasseInterval::new(q).contains(count));
            for _ in 0..VERIFICATION_POINTS {
                let p = curve.random_point(rng)?;
                if !curve.mul(count, &p).is_infinity() {
                    return Err(CountError::VerificationFailed { count, point: p });
                }
            }
            return Ok(CountResult::from_count(q, count, CountMethod::PointOrder, transcript));
        }
    }
    Err(CountError::IterationCapExceeded(cap))
}

fn lambda_guard(curve: &Curve) -> Result<(), CountError> {
    let q = curve.field().q();
    if q > LAMBDA_LIMIT {
        return Err(CurveError::FieldTooLarge { q, limit: LAMBDA_LIMIT }.into());
    }
    Ok(())
}

/// The group exponent: lcm of the orders of all rational points.
pub fn lambda_exponent(curve: &Curve) -> Result<u64, CountError> {
    lambda_guard(curve)?;
    let points = curve.enumerate_points()?;
    let count = points.len() as u64;
    let mut exponent = 1;
    for p in &points {
        let n = order::exact_order(curve, p, count)?;
        exponent = lcm(exponent, n).expect("exponent divides the group order");
    }
    Ok(exponent)
}

/// The group structure `(n1, n2)` from the count and the exponent.
pub fn group_structure(curve: &Curve) -> Result<GroupStructure, CountError> {
    let n2 = lambda_exponent(curve)?;
    let count = curve.count_exhaustive()?;
    let q = curve.field().q();
    if count % n2 != 0 {
        return Err(CountError::InvariantViolation(format!(
            "exponent {n2} does not divide #E = {count}"
        )));
    }
    let n1 = count / n2;
    if n2 % n1 != 0 || !(q - 1).is_multiple_of(n1) {
        return Err(CountError::InvariantViolation(format!(
            "n1 = {n1} must divide n2 = {n2} and q - 1 = {}",
            q - 1
        )));
    }
    Ok(GroupStructure { n1, n2 })
}
