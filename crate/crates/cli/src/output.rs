use std::fmt::Write;

use hassecount::counting::CountMethod;
use hassecount::exceptions::{CorollaryReading, ExceptionRecord, Table1Report};
use hassecount::selftest::SelftestReport;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::Format;

pub trait Tsv {
    fn tsv(&self) -> String;
}

pub fn render<T: Serialize + Tsv>(value: &T, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Tsv => value.tsv(),
    })
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub q: u64,
    pub curve: String,
    pub count: u64,
    pub trace: i64,
    pub twist_count: u64,
    pub method: CountMethod,
    pub samples_used: u32,
}

impl Tsv for CountRecord {
    fn tsv(&self) -> String {
        let method = match self.method {
            CountMethod::Auto => "auto",
            CountMethod::Exhaustive => "exhaustive",
            CountMethod::PointOrder => "point_order",
        };
        format!(
            "q\tcurve\tcount\ttrace\ttwist_count\tmethod\tsamples_used\n{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            self.q, self.curve, self.count, self.trace, self.twist_count, method, self.samples_used
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub q: u64,
    pub curve: String,
    pub point: String,
    pub order: u64,
}

impl Tsv for OrderRecord {
    fn tsv(&self) -> String {
        format!(
            "q\tcurve\tpoint\torder\n{}\t{}\t{}\t{}\n",
            self.q, self.curve, self.point, self.order
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRecord {
    pub q: u64,
    pub curve: String,
    pub twist: String,
    pub count: Option<u64>,
    pub twist_count: Option<u64>,
}

impl Tsv for TwistRecord {
    fn tsv(&self) -> String {
        let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |n| n.to_string());
        format!(
            "q\tcurve\ttwist\tcount\ttwist_count\n{}\t{}\t{}\t{}\t{}\n",
            self.q,
            self.curve,
            self.twist,
            opt(self.count),
            opt(self.twist_count)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub q: u64,
    pub curve: String,
    pub count: u64,
    pub n1: u64,
    pub n2: u64,
}

impl Tsv for GroupRecord {
    fn tsv(&self) -> String {
        format!(
            "q\tcurve\tcount\tn1\tn2\n{}\t{}\t{}\t{}\t{}\n",
            self.q, self.curve, self.count, self.n1, self.n2
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionsOutput {
    pub qmax: u64,
    pub corollary: Option<CorollaryReading>,
    pub records: Vec<ExceptionRecord>,
    pub exceptional_q: Vec<u64>,
}

impl Tsv for ExceptionsOutput {
    fn tsv(&self) -> String {
        let mut out = String::from("q\tM\tN\tt\tt'\n");
        for r in &self.records {
            writeln!(out, "{r}").unwrap();
        }
        writeln!(out, "# exceptional q: {}", join(&self.exceptional_q, ",")).unwrap();
        out
    }
}

impl Tsv for Table1Report {
    fn tsv(&self) -> String {
        let mut out = String::from("q\tM\tN\tt\tt'\tcurve\tcount\tlambda\ttwist_lambda\tstatus\n");
        let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |n| n.to_string());
        for r in &self.rows {
            let mut status = if r.pass { "PASS".to_string() } else { "FAIL".to_string() };
            if r.pass && !r.direct_match {
                status.push_str(" (mirror)");
            }
            if !r.missing_quadruples.is_empty() {
                write!(status, " missing t'={}", join(&r.missing_quadruples, ",")).unwrap();
            }
            if let Some(e) = &r.error {
                write!(status, " {e}").unwrap();
            }
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.q,
                r.exponent,
                r.twist_exponent,
                r.t,
                join(&r.t_primes, ","),
                r.equation,
                opt(r.count),
                opt(r.curve_exponent),
                opt(r.twist_curve_exponent),
                status
            )
            .unwrap();
        }
        writeln!(out, "# passed {}/{}", self.passed(), self.rows.len()).unwrap();
        out
    }
}

impl Tsv for SelftestReport {
    fn tsv(&self) -> String {
        let mut out = String::from("check\tcases\tstatus\n");
        for c in &self.checks {
            writeln!(out, "{}\t{}\t{}", c.name, c.cases, if c.pass { "PASS" } else { "FAIL" }).unwrap();
            for f in &c.failures {
                writeln!(out, "#   {f}").unwrap();
            }
        }
        writeln!(out, "# {}", if self.all_passed() { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}
