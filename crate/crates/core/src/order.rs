//! Point orders and trace bookkeeping.
//!
//! [`bsgs_annihilator`] finds some `m` in the Hasse interval with `mP = O`
//! using `O(q^(1/4))` group operations; [`exact_order`] then strips prime
//! factors from `m` to get `|P|`. Each order found pins the trace of
//! Frobenius modulo `|P|`; [`Congruence`]s accumulate those constraints
//! and [`unique_trace_candidate`] decides when only one trace is left.
//!
//! All interval logic is in exact integers (`isqrt`), never floating point:
//! at square `q = r^2` the bound `|t| = 2r` is attained.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, rem_euclid, FACTOR_LIMIT};
pub use crate::arith::{factorize, gcd, isqrt, lcm};
use crate::curve::{Curve, CurveError, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("congruences {first} and {second} are incompatible")]
    Incompatible { first: Congruence, second: Congruence },
    #[error("no annihilator found in the Hasse interval (group law inconsistency)")]
    NoAnnihilator,
    #[error("{0} does not annihilate the point")]
    NotAnnihilator(u64),
    #[error("{0} is too large to factor")]
    FactorTooLarge(u64),
    #[error("modulus overflow while merging congruences")]
    Overflow,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// `[q + 1 - B, q + 1 + B]` with `B = floor(2 sqrt(q))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseInterval {
    pub q: u64,
    pub lo: u64,
    pub hi: u64,
    pub trace_bound: u64,
}

impl HasseInterval {
    pub fn new(q: u64) -> HasseInterval {
        let trace_bound = isqrt(4 * q);
        HasseInterval {
            q,
            lo: q + 1 - trace_bound,
            hi: q + 1 + trace_bound,
            trace_bound,
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn contains_trace(&self, t: i64) -> bool {
        t.unsigned_abs() <= self.trace_bound
    }

    pub fn width(&self) -> u64 {
        self.hi - self.lo
    }
}

pub fn hasse_interval(q: u64) -> HasseInterval {
    HasseInterval::new(q)
}

/// Multiples of `m` in the interval, ascending.
pub fn multiples_in_interval(m: u64, interval: &HasseInterval) -> Vec<u64> {
    assert!(m >= 1, "multiples of zero");
    let first = interval.lo.div_ceil(m) * m;
    (first..=interval.hi).step_by(m as usize).collect()
}

/// The residue class `x = residue (mod modulus)`, `0 <= residue < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Congruence {
    pub residue: u64,
    pub modulus: u64,
}

impl Congruence {
    /// `x = 0 (mod 1)`, satisfied by every integer.
    pub const TRIVIAL: Congruence = Congruence { residue: 0, modulus: 1 };

    pub fn new(residue: i128, modulus: u64) -> Congruence {
        assert!(modulus >= 1, "modulus must be positive");
        Congruence {
            residue: rem_euclid(residue, modulus),
            modulus,
        }
    }

    pub fn contains(&self, x: i128) -> bool {
        rem_euclid(x, self.modulus) == self.residue
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// The conjunction of two congruences, modulo `lcm(m1, m2)`.
pub fn crt_merge(first: Congruence, second: Congruence) -> Result<Congruence, OrderError> {
    let (a1, m1) = (first.residue as i128, first.modulus as i128);
    let (a2, m2) = (second.residue as i128, second.modulus as i128);
    let eg = m1.extended_gcd(&m2);
    let g = eg.gcd;
    let diff = a2 - a1;
    if diff % g != 0 {
        return Err(OrderError::Incompatible { first, second });
    }
    let l = (m1 / g).checked_mul(m2).ok_or(OrderError::Overflow)?;
    let modulus = u64::try_from(l).map_err(|_| OrderError::Overflow)?;
    // m1 * eg.x = g (mod m2), so a1 + m1 * x * diff/g solves both.
    let step = m2 / g;
    if step >= 1 << 63 {
        return Err(OrderError::Overflow);
    }
    let k = ((diff / g) % step) * (eg.x % step) % step;
    Ok(Congruence::new(a1 + m1 * k, modulus))
}

/// Every `t` with `|t| <= floor(2 sqrt(q))` in the residue class, ascending.
pub fn trace_candidates(c: Congruence, q: u64) -> Vec<i64> {
    let bound = HasseInterval::new(q).trace_bound as i64;
    let m = c.modulus as i64;
    let first = -bound + rem_euclid(c.residue as i128 + bound as i128, c.modulus) as i64;
    (0..).map(|i| first + i * m).take_while(|&t| t <= bound).collect()
}

/// The only admissible trace in the residue class, if there is exactly one.
pub fn unique_trace_candidate(c: Congruence, q: u64) -> Option<i64> {
    match trace_candidates(c, q).as_slice() {
        [t] => Some(*t),
        _ => None,
    }
}

/// Group-operation counter for the order routines.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub group_ops: u64,
}

fn counted_mul(curve: &Curve, n: u64, p: &Point, ops: &mut OpCounter) -> Point {
    let mut acc = Point::Infinity;
    if n == 0 {
        return acc;
    }
    for bit in (0..64 - n.leading_zeros()).rev() {
        if !acc.is_infinity() {
            acc = curve.double(&acc);
            ops.group_ops += 1;
        }
        if (n >> bit) & 1 == 1 {
            acc = curve.add(&acc, p);
            ops.group_ops += 1;
        }
    }
    acc
}

/// Some `m` in the Hasse interval with `mP = O`.
pub fn bsgs_annihilator(curve: &Curve, p: &Point) -> Result<u64, OrderError> {
    bsgs_annihilator_counted(curve, p, &mut OpCounter::default())
}

/// [`bsgs_annihilator`], tallying group operations into `ops`.
///
/// Baby steps `jP` for `1 <= j <= s` are keyed by `x`; since `x` identifies
/// a point up to sign, each giant step `cP` covers `[c - s, c + s]`. Giant
/// steps start at `c = lo + s` and advance by `2s + 1`, with
/// `s ~ sqrt(width / 2)`.
pub fn bsgs_annihilator_counted(curve: &Curve, p: &Point, ops: &mut OpCounter) -> Result<u64, OrderError> {
    if !curve.is_on_curve(p) {
        return Err(CurveError::PointNotOnCurve.into());
    }
    let interval = HasseInterval::new(curve.field().q());
    if p.is_infinity() {
        return Ok(interval.lo);
    }
    let s = arith::isqrt_ceil(interval.width().div_ceil(2)).max(1);

    let mut baby: HashMap<u64, (u64, Point)> = HashMap::with_capacity(s as usize);
    let mut cur = *p;
    let mut small_order = None;
    for j in 1..=s {
        match cur {
            Point::Infinity => {
                small_order = Some(j);
                break;
            }
            Point::Affine { x, .. } => {
                if baby.insert(x.encoding(), (j, cur)).is_some() {
                    // jP = +-j'P, so |P| <= 2s
                    small_order = Some(linear_order(curve, p, 2 * s + 1, ops)?);
                    break;
                }
            }
        }
        if j < s {
            cur = curve.add(&cur, p);
            ops.group_ops += 1;
        }
    }
    if let Some(order) = small_order {
        return multiples_in_interval(order, &interval)
            .first()
            .copied()
            .ok_or(OrderError::NoAnnihilator);
    }

    // cur = sP
    let stride = 2 * s + 1;
    let step = curve.add(&curve.double(&cur), p);
    ops.group_ops += 2;
    let mut center = interval.lo + s;
    let mut giant = counted_mul(curve, center, p, ops);
    while center - s <= interval.hi {
        let candidate = match giant {
            Point::Infinity => Some(center),
            Point::Affine { x, y } => baby.get(&x.encoding()).map(|&(j, bp)| match bp {
                Point::Affine { y: by, .. } if by == y => center - j,
                _ => center + j,
            }),
        };
        if let Some(m) = candidate.filter(|&m| interval.contains(m)) {
            return Ok(m);
        }
        giant = curve.add(&giant, &step);
        ops.group_ops += 1;
        center += stride;
    }
    Err(OrderError::NoAnnihilator)
}

fn linear_order(curve: &Curve, p: &Point, limit: u64, ops: &mut OpCounter) -> Result<u64, OrderError> {
    let mut cur = *p;
    for n in 1..=limit {
        if cur.is_infinity() {
            return Ok(n);
        }
        cur = curve.add(&cur, p);
        ops.group_ops += 1;
    }
    Err(OrderError::NoAnnihilator)
}

/// `|P|`, given any multiple of it.
pub fn exact_order(curve: &Curve, p: &Point, annihilator: u64) -> Result<u64, OrderError> {
    if !curve.is_on_curve(p) {
        return Err(CurveError::PointNotOnCurve.into());
    }
    if p.is_infinity() {
        return Ok(1);
    }
    if annihilator == 0 || annihilator >= FACTOR_LIMIT {
        return Err(OrderError::FactorTooLarge(annihilator));
    }
    if !curve.mul(annihilator, p).is_infinity() {
        return Err(OrderError::NotAnnihilator(annihilator));
    }
    let mut n = annihilator;
    for l in arith::prime_divisors(annihilator) {
        while n.is_multiple_of(l) && curve.mul(n / l, p).is_infinity() {
            n /= l;
        }
    }
    Ok(n)
}

/// `|P|` from scratch: BSGS annihilator, then prime stripping.
pub fn point_order(curve: &Curve, p: &Point) -> Result<u64, OrderError> {
    let m = bsgs_annihilator(curve, p)?;
    exact_order(curve, p, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::prime_powers_up_to;
    use crate::field::FieldSpec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(q: u64, a: [u64; 5]) -> Curve {
        Curve::from_encodings(&FieldSpec::from_q(q, None).unwrap(), a).unwrap()
    }

    /// Smallest n >= 1 with nP = O, by repeated addition.
    fn brute_force_order(e: &Curve, p: &Point) -> u64 {
        let mut cur = *p;
        let mut n = 1;
        while !cur.is_infinity() {
            cur = e.add(&cur, p);
            n += 1;
        }
        n
    }

    #[test]
    fn hasse_examples() {
        let h = hasse_interval(49);
        assert_eq!((h.lo, h.hi, h.trace_bound), (36, 64, 14));
        let h = hasse_interval(2);
        assert_eq!((h.lo, h.hi), (1, 5));
        let h = hasse_interval(229);
        assert_eq!((h.lo, h.hi), (200, 260));
        for q in prime_powers_up_to(1024) {
            let h = hasse_interval(q);
            assert_eq!(h.lo + h.hi, 2 * (q + 1));
            assert_eq!(h.hi - h.lo, 2 * h.trace_bound);
            assert!(h.trace_bound * h.trace_bound <= 4 * q);
            assert!((h.trace_bound + 1) * (h.trace_bound + 1) > 4 * q);
        }
    }

    #[test]
    fn multiples_examples() {
        let h = hasse_interval(49);
        assert_eq!(multiples_in_interval(6, &h), vec![36, 42, 48, 54, 60]);
        assert_eq!(multiples_in_interval(8, &h), vec![40, 48, 56, 64]);
        assert_eq!(
            multiples_in_interval(1, &hasse_interval(4)),
            (1..=9).collect::<Vec<_>>()
        );
    }

    #[test]
    fn crt_examples() {
        let c = |a, m| Congruence::new(a, m);
        assert_eq!(crt_merge(Congruence::TRIVIAL, c(5, 7)).unwrap(), c(5, 7));
        assert_eq!(crt_merge(c(1, 2), c(2, 3)).unwrap(), c(5, 6));
        assert_eq!(crt_merge(c(2, 6), c(6, 8)).unwrap(), c(14, 24));
        // brute-force oracle for the last one
        let sols: Vec<i128> = (0..24).filter(|x| x % 6 == 2 && x % 8 == 6).collect();
        assert_eq!(sols, vec![14]);
        assert!(matches!(
            crt_merge(c(1, 2), c(0, 4)),
            Err(OrderError::Incompatible { .. })
        ));
    }

    #[test]
    fn trace_candidate_examples() {
        let c = Congruence::new(14, 24);
        assert_eq!(trace_candidates(c, 49), vec![-10, 14]);
        assert_eq!(unique_trace_candidate(c, 49), None);
        assert_eq!(unique_trace_candidate(Congruence::new(5, 1000), 229), Some(5));
        assert_eq!(trace_candidates(Congruence::new(0, 2), 3), vec![-2, 0, 2]);
        assert_eq!(unique_trace_candidate(Congruence::new(0, 2), 3), None);
    }

    proptest! {
        #[test]
        fn crt_merge_satisfies_both(a1 in 0u64..10_000, m1 in 1u64..10_000, x in -100_000i128..100_000, m2 in 1u64..10_000) {
            // x is a common solution, so the pair is compatible
            let c1 = Congruence::new(x, m1);
            let c2 = Congruence::new(x, m2);
            let out = crt_merge(c1, c2).unwrap();
            prop_assert_eq!(out.modulus, lcm(m1, m2).unwrap());
            prop_assert!(out.contains(x));
            prop_assert_eq!(rem_euclid(out.residue as i128, m1), c1.residue);
            prop_assert_eq!(rem_euclid(out.residue as i128, m2), c2.residue);
            let _ = a1;
        }

        #[test]
        fn crt_merge_detects_incompatibility(a1 in 0u64..500, m1 in 1u64..500, a2 in 0u64..500, m2 in 1u64..500) {
            let c1 = Congruence::new(a1 as i128, m1);
            let c2 = Congruence::new(a2 as i128, m2);
            let l = lcm(m1, m2).unwrap();
            let brute: Vec<u64> = (0..l).filter(|&x| x % m1 == c1.residue && x % m2 == c2.residue).collect();
            match crt_merge(c1, c2) {
                Ok(out) => prop_assert_eq!(brute, vec![out.residue]),
                Err(_) => prop_assert!(brute.is_empty()),
            }
        }

        #[test]
        fn candidates_match_scan(a in 0u64..5000, m in 1u64..5000, q in 2u64..200_000) {
            let c = Congruence::new(a as i128, m);
            let b = isqrt(4 * q) as i64;
            let scan: Vec<i64> = (-b..=b).filter(|&t| c.contains(t as i128)).collect();
            prop_assert_eq!(trace_candidates(c, q), scan.clone());
            let expected = if scan.len() == 1 { Some(scan[0]) } else { None };
            prop_assert_eq!(unique_trace_candidate(c, q), expected);
        }
    }

    #[test]
    fn order_examples() {
        let f5 = FieldSpec::from_q(5, None).unwrap();
        let e = curve(5, [0, 0, 0, 1, 0]);
        let t = Point::affine(f5.zero(), f5.zero());
        let m = bsgs_annihilator(&e, &t).unwrap();
        assert!(m.is_multiple_of(2) && (2..=10).contains(&m));
        assert_eq!(exact_order(&e, &t, m).unwrap(), 2);
        assert_eq!(exact_order(&e, &t, 8).unwrap(), 2);
        assert_eq!(bsgs_annihilator(&e, &Point::Infinity).unwrap(), hasse_interval(5).lo);
        assert_eq!(exact_order(&e, &Point::Infinity, 17).unwrap(), 1);
        assert_eq!(exact_order(&e, &t, 3), Err(OrderError::NotAnnihilator(3)));

        let e3 = curve(3, [0, 0, 0, 2, 0]);
        let orders: Vec<u64> = e3
            .enumerate_points()
            .unwrap()
            .iter()
            .map(|p| point_order(&e3, p).unwrap())
            .collect();
        assert!(orders.iter().all(|&o| o == 1 || o == 2));
        assert_eq!(orders.iter().fold(1, |acc, &o| lcm(acc, o).unwrap()), 2);

        let e = curve(1009, [0, 0, 0, 1008, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let p = e.random_point(&mut rng).unwrap();
            let m = bsgs_annihilator(&e, &p).unwrap();
            assert!(hasse_interval(1009).contains(m));
            assert!(e.mul(m, &p).is_infinity());
        }
    }

    #[test]
    fn exact_order_matches_brute_force_on_small_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for q in prime_powers_up_to(49) {
            let f = FieldSpec::from_q(q, None).unwrap();
            let mut curves = 0;
            while curves < 25 {
                let a = [0; 5].map(|_| f.random_element(&mut rng));
                let Ok(e) = Curve::new(&f, a) else { continue };
                curves += 1;
                for p in e.enumerate_points().unwrap() {
                    let n = point_order(&e, &p).unwrap();
                    assert_eq!(n, brute_force_order(&e, &p), "{e:?} {p}");
                    assert!(e.mul(n, &p).is_infinity());
                    for l in arith::prime_divisors(n) {
                        assert!(!e.mul(n / l, &p).is_infinity());
                    }
                }
            }
        }
    }

    #[test]
    fn bsgs_handles_large_prime_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (q, a) in [
            (1_000_003u64, [0, 0, 0, 1, 1]),
            (65537, [0, 0, 0, 3, 7]),
            (4_194_301, [0, 0, 0, 5, 11]),
        ] {
            let e = curve(q, a);
            for _ in 0..20 {
                let p = e.random_point(&mut rng).unwrap();
                let m = bsgs_annihilator(&e, &p).unwrap();
                assert!(hasse_interval(q).contains(m));
                assert!(e.mul(m, &p).is_infinity());
                let n = exact_order(&e, &p, m).unwrap();
                assert_eq!(m % n, 0);
            }
        }
    }
}
