//! Invariant sweep over small fields, used by `hassecount selftest`.
//!
//! Every check draws its randomness from a ChaCha8 stream keyed by the seed
//! and the field size, so results do not depend on thread scheduling.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::prime_powers_up_to;
use crate::counting::{count_points, group_structure, is_excluded, CountMethod, EXCLUDED_Q};
use crate::curve::{isomorphism_class_cover, Curve, Point};
use crate::exceptions::{self, CorollaryReading, ExceptionRecord};
use crate::field::FieldSpec;
use crate::order::{exact_order, hasse_interval};

const MAX_REPORTED_FAILURES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Fast,
    Full,
}

struct Budget {
    q_max: u64,
    cover_q_max: u64,
    lambda_q_max: u64,
    lambda_curves: usize,
    order_q_max: u64,
    twist_curves: usize,
    count_q_max: u64,
    count_curves: usize,
    group_law_triples: usize,
}

impl Mode {
    fn budget(self) -> Budget {
        match self {
            Mode::Full => Budget {
                q_max: 1024,
                cover_q_max: 121,
                lambda_q_max: 121,
                lambda_curves: 200,
                order_q_max: 49,
                twist_curves: 20,
                count_q_max: 1024,
                count_curves: 20,
                group_law_triples: 500,
            },
            Mode::Fast => Budget {
                q_max: 256,
                cover_q_max: 32,
                lambda_q_max: 32,
                lambda_curves: 20,
                order_q_max: 16,
                twist_curves: 4,
                count_q_max: 256,
                count_curves: 3,
                group_law_triples: 100,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: u64,
    /// First few failures, in field order.
    pub failures: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub mode: Mode,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Per-field outcome: number of cases and failure descriptions.
type Tally = (u64, Vec<String>);

fn rng_for(seed: u64, q: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(q);
    rng
}

fn fields_up_to(q_max: u64) -> Vec<FieldSpec> {
    prime_powers_up_to(q_max)
        .into_iter()
        .map(|q| FieldSpec::from_q(q, None).expect("prime power"))
        .collect()
}

fn run_check<F>(name: &str, fields: &[FieldSpec], check: F) -> CheckReport
where
    F: Fn(&FieldSpec) -> Tally + Sync + Send,
{
    let tallies: Vec<Tally> = fields.par_iter().map(check).collect();
    let cases = tallies.iter().map(|t| t.0).sum();
    let failures: Vec<String> = tallies.into_iter().flat_map(|t| t.1).collect();
    CheckReport {
        name: name.to_string(),
        cases,
        pass: failures.is_empty(),
        failures: failures.into_iter().take(MAX_REPORTED_FAILURES).collect(),
    }
}

fn field_arithmetic(f: &FieldSpec) -> Tally {
    let q = f.q();
    let mut fails = Vec::new();
    for a in f.elements() {
        if !a.is_zero() && f.inv(a).map(|b| f.mul(a, b)) != Ok(f.one()) {
            fails.push(format!("q={q}: inverse of {a:?}"));
        }
        if q <= 121 && f.pow(a, q) != a {
            fails.push(format!("q={q}: {a:?}^q != {a:?}"));
        }
        if f.is_square(a) && f.sqrt(a).map(|s| f.square(s)) != Ok(a) {
            fails.push(format!("q={q}: sqrt of {a:?}"));
        }
    }
    (q, fails)
}

fn group_law(f: &FieldSpec, seed: u64, triples: usize) -> Tally {
    let mut rng = rng_for(seed, f.q());
    let e = Curve::random(f, &mut rng);
    let mut fails = Vec::new();
    let point = |rng: &mut ChaCha8Rng| e.random_point(rng).expect("small field");
    for _ in 0..triples {
        let (p, q, r) = (point(&mut rng), point(&mut rng), point(&mut rng));
        let pq = e.add(&p, &q);
        let ok = e.is_on_curve(&pq)
            && pq == e.add(&q, &p)
            && e.add(&pq, &r) == e.add(&p, &e.add(&q, &r))
            && e.add(&p, &e.neg(&p)) == Point::Infinity
            && e.add(&p, &Point::Infinity) == p;
        if !ok {
            fails.push(format!("q={} curve {}: {p} {q} {r}", f.q(), e.coefficient_string()));
        }
    }
    (triples as u64, fails)
}

fn cover_curves(f: &FieldSpec) -> impl Iterator<Item = Curve> + '_ {
    isomorphism_class_cover(f).filter_map(move |a| Curve::new(f, a).ok())
}

fn hasse_and_lagrange(f: &FieldSpec, seed: u64) -> Tally {
    let mut rng = rng_for(seed, f.q());
    let h = hasse_interval(f.q());
    let (mut cases, mut fails) = (0, Vec::new());
    for e in cover_curves(f) {
        cases += 1;
        let n = e.count_exhaustive().expect("small field");
        let p = e.random_point(&mut rng).expect("small field");
        if !h.contains(n) || !e.mul(n, &p).is_infinity() {
            fails.push(format!("q={} curve {}: count {n}", f.q(), e.coefficient_string()));
        }
    }
    (cases, fails)
}

fn twist_identity(f: &FieldSpec, seed: u64, curves: usize) -> Tally {
    let mut rng = rng_for(seed, f.q());
    let q = f.q();
    let mut fails = Vec::new();
    for _ in 0..curves {
        let e = Curve::random(f, &mut rng);
        let n = e.count_exhaustive().expect("small field");
        let nt = e.quadratic_twist().and_then(|t| t.count_exhaustive());
        if nt != Ok(2 * (q + 1) - n) {
            fails.push(format!("q={q} curve {}: {n} + {nt:?}", e.coefficient_string()));
        }
    }
    (curves as u64, fails)
}

fn lambda_invariants(f: &FieldSpec, seed: u64, curves: usize) -> Tally {
    let mut rng = rng_for(seed, f.q());
    let mut fails = Vec::new();
    for _ in 0..curves {
        let e = Curve::random(f, &mut rng);
        let ok = match group_structure(&e) {
            Ok(g) => g.n2 % g.n1 == 0 && (f.q() - 1).is_multiple_of(g.n1),
            Err(_) => false,
        };
        if !ok {
            fails.push(format!("q={} curve {}", f.q(), e.coefficient_string()));
        }
    }
    (curves as u64, fails)
}

fn brute_force_order(e: &Curve, p: &Point) -> u64 {
    let mut acc = *p;
    let mut n = 1;
    while !acc.is_infinity() {
        acc = e.add(&acc, p);
        n += 1;
    }
    n
}

fn point_orders(f: &FieldSpec, seed: u64) -> Tally {
    let mut rng = rng_for(seed, f.q());
    let (mut cases, mut fails) = (0, Vec::new());
    for _ in 0..10 {
        let e = Curve::random(f, &mut rng);
        let points = e.enumerate_points().expect("small field");
        let n = points.len() as u64;
        for p in &points {
            cases += 1;
            if exact_order(&e, p, n).ok() != Some(brute_force_order(&e, p)) {
                fails.push(format!("q={} curve {}: point {p}", f.q(), e.coefficient_string()));
            }
        }
    }
    (cases, fails)
}

fn point_order_counts(f: &FieldSpec, seed: u64, curves: usize) -> Tally {
    let mut rng = rng_for(seed, f.q());
    let mut fails = Vec::new();
    for _ in 0..curves {
        let e = Curve::random(f, &mut rng);
        let expected = e.count_exhaustive().expect("small field");
        let got = count_points(&e, CountMethod::PointOrder, &mut rng).map(|r| r.count);
        if got != Ok(expected) {
            fails.push(format!(
                "q={} curve {}: {got:?} != {expected}",
                f.q(),
                e.coefficient_string()
            ));
        }
    }
    (curves as u64, fails)
}

/// Rechecks conditions (i)-(iii) of an exception record from scratch.
fn record_holds(r: &ExceptionRecord) -> bool {
    let q = r.q as i64;
    let (m_exp, n_exp) = (r.exponent as i64, r.twist_exponent as i64);
    let bound = (0..).take_while(|b: &i64| b * b <= 4 * q).last().unwrap_or(0);
    let (e, et) = (q + 1 - r.t, q + 1 + r.t);
    let (e2, et2) = (q + 1 - r.t_prime, q + 1 + r.t_prime);
    (0..=bound).contains(&r.t)
        && r.t_prime.abs() <= bound
        && r.t_prime != r.t
        && e % m_exp == 0
        && et % n_exp == 0
        && e / m_exp == r.cofactor as i64
        && et / n_exp == r.twist_cofactor as i64
        && m_exp % (e / m_exp) == 0
        && (q - 1) % (e / m_exp) == 0
        && n_exp % (et / n_exp) == 0
        && (q - 1) % (et / n_exp) == 0
        && e2 % m_exp == 0
        && et2 % n_exp == 0
}

fn exception_sweep(q_max: u64) -> Vec<CheckReport> {
    let qs = prime_powers_up_to(q_max);
    let per_q: Vec<(u64, Vec<ExceptionRecord>, Vec<Vec<ExceptionRecord>>)> = qs
        .par_iter()
        .map(|&q| {
            let base = exceptions::enumerate_exceptions(q).expect("prime power");
            let corollary = CorollaryReading::ALL
                .iter()
                .map(|&r| exceptions::enumerate_exceptions_corollary(q, r).expect("prime power"))
                .collect();
            (q, base, corollary)
        })
        .collect();

    let mut fails = Vec::new();
    let mut records = 0;
    for (q, base, corollary) in &per_q {
        records += base.len() as u64;
        fails.extend(base.iter().filter(|r| !record_holds(r)).map(|r| format!("q={q}: {r}")));
        for c in corollary.iter().flatten() {
            if !base.contains(c) {
                fails.push(format!("q={q}: corollary record {c} not in base output"));
            }
        }
    }
    let found: BTreeSet<u64> = per_q.iter().filter(|p| !p.1.is_empty()).map(|p| p.0).collect();
    let expected: BTreeSet<u64> = EXCLUDED_Q.iter().copied().filter(|&q| q <= q_max).collect();
    let set_fails = if found == expected {
        Vec::new()
    } else {
        vec![format!("exceptional q {found:?}, expected {expected:?}")]
    };
    vec![
        CheckReport {
            name: "exception records".into(),
            cases: records,
            pass: fails.is_empty(),
            failures: fails.into_iter().take(MAX_REPORTED_FAILURES).collect(),
        },
        CheckReport {
            name: "exceptional q set".into(),
            cases: qs.len() as u64,
            pass: set_fails.is_empty(),
            failures: set_fails,
        },
    ]
}

/// Runs every check. Parallelism follows the ambient rayon pool.
pub fn run(mode: Mode, seed: u64) -> SelftestReport {
    let b = mode.budget();
    let all = fields_up_to(b.q_max);
    let upto = |limit: u64| -> Vec<FieldSpec> { all.iter().filter(|f| f.q() <= limit).cloned().collect() };
    let panel: Vec<FieldSpec> = [2u64, 3, 4, 5, 7, 8, 9, 16, 27, 101, 256]
        .iter()
        .map(|&q| FieldSpec::from_q(q, None).expect("prime power"))
        .collect();
    let count_fields: Vec<FieldSpec> = all
        .iter()
        .filter(|f| f.q() > 49 && f.q() <= b.count_q_max && !is_excluded(f.q()))
        .cloned()
        .collect();

    let mut checks = vec![
        run_check("field arithmetic", &all, field_arithmetic),
        run_check("group law", &panel, |f| group_law(f, seed, b.group_law_triples)),
        run_check("hasse bound and lagrange", &upto(b.cover_q_max), |f| {
            hasse_and_lagrange(f, seed)
        }),
        run_check("twist identity", &all, |f| twist_identity(f, seed, b.twist_curves)),
        run_check("group structure", &upto(b.lambda_q_max), |f| {
            lambda_invariants(f, seed, b.lambda_curves)
        }),
        run_check("exact order", &upto(b.order_q_max), |f| point_orders(f, seed)),
        run_check("point-order counting", &count_fields, |f| {
            point_order_counts(f, seed, b.count_curves)
        }),
    ];
    checks.extend(exception_sweep(exceptions::DEFAULT_Q_MAX));
    SelftestReport { mode, seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;

    #[test]
    fn record_check_rejects_tampering() {
        let r = exceptions::enumerate_exceptions(49).unwrap()[0];
        assert!(record_holds(&r));
        assert!(!record_holds(&ExceptionRecord { t_prime: r.t, ..r }));
        assert!(!record_holds(&ExceptionRecord {
            cofactor: r.cofactor + 1,
            ..r
        }));
    }

    #[test]
    fn brute_order_of_identity() {
        let f = FieldSpec::from_q(5, None).unwrap();
        let e = Curve::new(
            &f,
            [
                FieldElement::ZERO,
                FieldElement::ZERO,
                FieldElement::ZERO,
                f.one(),
                FieldElement::ZERO,
            ],
        )
        .unwrap();
        assert_eq!(brute_force_order(&e, &Point::Infinity), 1);
        assert_eq!(brute_force_order(&e, &Point::affine(f.zero(), f.zero())), 2);
    }
}
