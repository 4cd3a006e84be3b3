//! Enumeration of the cases where the exponents of `E` and `E'` leave the
//! trace ambiguous.
//!
//! For a prime power `q` we look for integers `M`, `N` (candidate exponents
//! of `E` and its twist) and traces `0 <= t <= B`, `|t'| <= B`, `t' != t`,
//! `B = floor(2 sqrt(q))`, such that
//!
//! 1. `M | q + 1 - t` and `N | q + 1 + t`;
//! 2. the cofactors `m = (q + 1 - t) / M` and `n = (q + 1 + t) / N` divide
//!    `M` and `q - 1`, and `N` and `q - 1`, respectively;
//! 3. `M | q + 1 - t'` and `N | q + 1 + t'`.
//!
//! The search ranges over `ceil(sqrt q) - 1 <= M, N <= floor(4 sqrt q)`:
//! outside that window the trace is forced by `lcm(M, N) > 4 sqrt q`.
//! Cases with `t < 0` mirror those with `t > 0` under `t -> -t`, `M <-> N`.

mod table1;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, isqrt, isqrt_ceil};

pub use table1::{table1_rows, verify_table1, Table1Report, Table1Row, Table1RowReport};

/// Upper end of the `q` sweep; larger `q` cannot be exceptional.
pub const DEFAULT_Q_MAX: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExceptionError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// One exceptional quadruple `(M, N, t, t')` at `q`, with its cofactors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExceptionRecord {
    pub q: u64,
    /// Candidate exponent of `E`.
    #[serde(rename = "M")]
    pub exponent: u64,
    /// Candidate exponent of the twist.
    #[serde(rename = "N")]
    pub twist_exponent: u64,
    pub t: i64,
    pub t_prime: i64,
    /// `(q + 1 - t) / M`.
    #[serde(rename = "m")]
    pub cofactor: u64,
    /// `(q + 1 + t) / N`.
    #[serde(rename = "n")]
    pub twist_cofactor: u64,
}

impl fmt::Display for ExceptionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.q, self.exponent, self.twist_exponent, self.t, self.t_prime
        )
    }
}

/// How the corollary variant constrains the cofactors at `t'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryReading {
    /// `(q+1-t')/M | M` and `(q+1+t')/N | N`.
    ExponentOnly,
    /// Additionally `(q+1-t')/M | q-1` and `(q+1+t')/N | q-1`.
    ExponentAndQMinusOne,
}

impl CorollaryReading {
    pub const ALL: [CorollaryReading; 2] = [CorollaryReading::ExponentOnly, CorollaryReading::ExponentAndQMinusOne];
}

/// Inclusive search window for `M` and `N`.
pub fn exponent_window(q: u64) -> (u64, u64) {
    let lo = isqrt_ceil(q).saturating_sub(1).max(1);
    (lo, isqrt(16 * q))
}

fn divides(d: u64, n: u64) -> bool {
    n.is_multiple_of(d)
}

/// Cofactor pair `((q+1-t)/M, (q+1+t)/N)`, if both divisions are exact.
fn cofactors(q: u64, exponent: u64, twist_exponent: u64, t: i64) -> Option<(u64, u64)> {
    let count = (q as i64 + 1 - t) as u64;
    let twist_count = (q as i64 + 1 + t) as u64;
    (divides(exponent, count) && divides(twist_exponent, twist_count))
        .then(|| (count / exponent, twist_count / twist_exponent))
}

fn enumerate_filtered(q: u64, reading: Option<CorollaryReading>) -> Result<Vec<ExceptionRecord>, ExceptionError> {
    if arith::prime_power(q).is_none() {
        return Err(ExceptionError::NotPrimePower(q));
    }
    let bound = isqrt(4 * q) as i64;
    let (lo, hi) = exponent_window(q);
    let admissible = |m: u64, exponent: u64| divides(m, exponent) && divides(m, q - 1);
    let mut out = Vec::new();
    for exponent in lo..=hi {
        for twist_exponent in lo..=hi {
            for t in 0..=bound {
                let Some((m, n)) = cofactors(q, exponent, twist_exponent, t) else {
                    continue;
                };
                if !(admissible(m, exponent) && admissible(n, twist_exponent)) {
                    continue;
                }
                for t_prime in -bound..=bound {
                    if t_prime == t {
                        continue;
                    }
                    let Some((m2, n2)) = cofactors(q, exponent, twist_exponent, t_prime) else {
                        continue;
                    };
                    let keep = match reading {
                        None => true,
                        Some(CorollaryReading::ExponentOnly) => divides(m2, exponent) && divides(n2, twist_exponent),
                        Some(CorollaryReading::ExponentAndQMinusOne) => {
                            admissible(m2, exponent) && admissible(n2, twist_exponent)
                        }
                    };
                    if keep {
                        out.push(ExceptionRecord {
                            q,
                            exponent,
                            twist_exponent,
                            t,
                            t_prime,
                            cofactor: m,
                            twist_cofactor: n,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All exceptional quadruples at `q`, sorted by `(M, N, t, t')`.
pub fn enumerate_exceptions(q: u64) -> Result<Vec<ExceptionRecord>, ExceptionError> {
    enumerate_filtered(q, None)
}

/// Exceptional quadruples that survive the extra cofactor conditions at `t'`.
pub fn enumerate_exceptions_corollary(
    q: u64,
    reading: CorollaryReading,
) -> Result<Vec<ExceptionRecord>, ExceptionError> {
    enumerate_filtered(q, Some(reading))
}

/// Prime powers `q <= q_max` with at least one exceptional quadruple.
pub fn exceptional_q_set(q_max: u64) -> BTreeSet<u64> {
    arith::prime_powers_up_to(q_max)
        .into_iter()
        .filter(|&q| !enumerate_exceptions(q).expect("prime power").is_empty())
        .collect()
}

/// Prime powers `q <= q_max` with at least one corollary-variant quadruple.
pub fn corollary_exceptional_q_set(q_max: u64, reading: CorollaryReading) -> BTreeSet<u64> {
    arith::prime_powers_up_to(q_max)
        .into_iter()
        .filter(|&q| {
            !enumerate_exceptions_corollary(q, reading)
                .expect("prime power")
                .is_empty()
        })
        .collect()
}

/// Records whose `t'`-side cofactors agree mod 2,
/// `(q+1-t')/M = (q+1+t')/N (mod 2)`; the others cannot come from a curve
/// with trace `t'`.
pub fn parity_filter(records: &[ExceptionRecord]) -> Vec<ExceptionRecord> {
    records
        .iter()
        .filter(|r| {
            let (m, n) = cofactors(r.q, r.exponent, r.twist_exponent, r.t_prime)
                .expect("condition (iii) holds for every record");
            m % 2 == n % 2
        })
        .copied()
        .collect()
}
