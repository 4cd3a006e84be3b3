use hassecount::counting::{self, CountMethod};
use hassecount::curve::{Curve, Point};
use hassecount::exceptions::{self, CorollaryReading};
use hassecount::field::FieldSpec;
use hassecount::order;
use hassecount::selftest::{self, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::CliError;
use crate::output::{render, CountRecord, ExceptionsOutput, GroupRecord, OrderRecord, TwistRecord};
use crate::Format;

/// Largest field for which `twist` reports both counts.
const TWIST_COUNT_LIMIT: u64 = 1 << 16;

fn parse_list(text: &str, what: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("bad {what} entry {s:?} in {text:?}")))
        })
        .collect()
}

pub fn parse_curve(q: u64, poly: Option<u64>, coeffs: &str) -> Result<Curve, CliError> {
    let field = FieldSpec::from_q(q, poly)?;
    let a: [u64; 5] = parse_list(coeffs, "coefficient")?
        .try_into()
        .map_err(|v: Vec<u64>| CliError::Usage(format!("--curve needs 5 coefficients, got {}", v.len())))?;
    Ok(Curve::from_encodings(&field, a)?)
}

pub fn parse_point(curve: &Curve, text: &str) -> Result<Point, CliError> {
    if text.trim().eq_ignore_ascii_case("inf") {
        return Ok(Point::Infinity);
    }
    let f = curve.field();
    match parse_list(text, "point")?.as_slice() {
        &[x, y] => Ok(Point::affine(f.element(x)?, f.element(y)?)),
        _ => Err(CliError::Usage(format!("--point must be x,y or inf, got {text:?}"))),
    }
}

pub fn count(curve: &Curve, method: CountMethod, seed: u64, format: Format) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = counting::count_points(curve, method, &mut rng)?;
    let record = CountRecord {
        q: r.q,
        curve: curve.coefficient_string(),
        count: r.count,
        trace: r.trace,
        twist_count: r.twist_count,
        method: r.method,
        samples_used: r.samples_used,
    };
    render(&record, format)
}

pub fn order(curve: &Curve, point: &str, format: Format) -> Result<String, CliError> {
    let p = parse_point(curve, point)?;
    if !curve.is_on_curve(&p) {
        return Err(hassecount::curve::CurveError::PointNotOnCurve.into());
    }
    let record = OrderRecord {
        q: curve.field().q(),
        curve: curve.coefficient_string(),
        point: p.to_string(),
        order: order::point_order(curve, &p)?,
    };
    render(&record, format)
}

pub fn twist(curve: &Curve, format: Format) -> Result<String, CliError> {
    let t = curve.quadratic_twist()?;
    let q = curve.field().q();
    let (count, twist_count) = if q <= TWIST_COUNT_LIMIT {
        (Some(curve.count_exhaustive()?), Some(t.count_exhaustive()?))
    } else {
        (None, None)
    };
    if let (Some(a), Some(b)) = (count, twist_count) {
        if a + b != 2 * (q + 1) {
            return Err(CliError::Internal(format!("#E + #E' = {a} + {b} != 2(q + 1)")));
        }
    }
    let record = TwistRecord {
        q,
        curve: curve.coefficient_string(),
        twist: t.coefficient_string(),
        count,
        twist_count,
    };
    render(&record, format)
}

pub fn group(curve: &Curve, format: Format) -> Result<String, CliError> {
    let g = counting::group_structure(curve)?;
    let record = GroupRecord {
        q: curve.field().q(),
        curve: curve.coefficient_string(),
        count: g.order(),
        n1: g.n1,
        n2: g.n2,
    };
    render(&record, format)
}

pub fn exceptions(qmax: u64, reading: Option<CorollaryReading>, format: Format) -> Result<String, CliError> {
    let qs = hassecount::arith::prime_powers_up_to(qmax);
    let per_q = qs
        .par_iter()
        .map(|&q| match reading {
            None => exceptions::enumerate_exceptions(q),
            Some(r) => exceptions::enumerate_exceptions_corollary(q, r),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let exceptional_q = qs
        .iter()
        .zip(&per_q)
        .filter(|(_, records)| !records.is_empty())
        .map(|(&q, _)| q)
        .collect();
    let out = ExceptionsOutput {
        qmax,
        corollary: reading,
        records: per_q.into_iter().flatten().collect(),
        exceptional_q,
    };
    render(&out, format)
}

pub fn table1(format: Format) -> Result<String, CliError> {
    let report = exceptions::verify_table1();
    let text = render(&report, format)?;
    if report.all_passed() {
        Ok(text)
    } else {
        Err(CliError::Failed { report: text, code: 1 })
    }
}

pub fn selftest(fast: bool, seed: u64, format: Format) -> Result<String, CliError> {
    let mode = if fast { Mode::Fast } else { Mode::Full };
    let report = selftest::run(mode, seed);
    let text = render(&report, format)?;
    if report.all_passed() {
        Ok(text)
    } else {
        Err(CliError::Failed { report: text, code: 4 })
    }
}
