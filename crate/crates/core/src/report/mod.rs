//! Batch sweeps and their CSV output.
//!
//! Output columns:
//!
//! ```text
//! scenario_id,theorem,fn,eta,alpha,k,r,a,b,p,q,lhs,rhs,margin,status
//! ```
//!
//! Reals are written with 12 significant digits. `p` and `q` are empty for
//! theorems without Hölder exponents, and `lhs`, `rhs`, `margin` are empty
//! for rows without a verdict.

pub mod config;
pub mod scenario;
pub mod sweep;

use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

pub use config::SweepConfig;
pub use scenario::Scenario;
pub use sweep::{run_sweep, SweepOutcome};

use crate::error::{Error, Result};
use crate::inequalities::TheoremId;

pub const HEADER: [&str; 15] = [
    "scenario_id",
    "theorem",
    "fn",
    "eta",
    "alpha",
    "k",
    "r",
    "a",
    "b",
    "p",
    "q",
    "lhs",
    "rhs",
    "margin",
    "status",
];

/// Process exit codes of the CLI.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATED: i32 = 3;
    pub const CONFIG: i32 = 4;
    pub const NONCONVERGED: i32 = 5;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Holds,
    Violated,
    PreconditionFailed,
    Skipped,
    Nonconverged,
}

impl Status {
    pub const ALL: [Status; 5] = [
        Status::Holds,
        Status::Violated,
        Status::PreconditionFailed,
        Status::Skipped,
        Status::Nonconverged,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Violated => "violated",
            Status::PreconditionFailed => "precondition-failed",
            Status::Skipped => "skipped",
            Status::Nonconverged => "nonconverged",
        }
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Status::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown status `{s}`")))
    }
}

/// One row of the sweep output.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRow {
    pub scenario_id: u64,
    pub theorem: TheoremId,
    pub fn_label: String,
    pub eta_label: String,
    pub alpha: f64,
    pub k: f64,
    pub r: f64,
    pub a: f64,
    pub b: f64,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub status: Status,
}

impl VerificationRow {
    /// A row for `theorem` on `s` with no values yet.
    pub fn blank(s: &Scenario, theorem: TheoremId) -> Self {
        let holder = theorem.uses_holder();
        Self {
            scenario_id: s.id,
            theorem,
            fn_label: s.fn_label.clone(),
            eta_label: s.eta_label.clone(),
            alpha: s.alpha,
            k: s.k,
            r: s.r,
            a: s.a,
            b: s.b,
            p: holder.then_some(s.holder_p),
            q: holder.then(|| s.holder_q()),
            lhs: None,
            rhs: None,
            margin: None,
            status: Status::Skipped,
        }
    }

    fn fields(&self) -> [String; 15] {
        let opt = |v: Option<f64>| v.map(format_real).unwrap_or_default();
        [
            self.scenario_id.to_string(),
            self.theorem.as_str().to_string(),
            self.fn_label.clone(),
            self.eta_label.clone(),
            format_real(self.alpha),
            format_real(self.k),
            format_real(self.r),
            format_real(self.a),
            format_real(self.b),
            opt(self.p),
            opt(self.q),
            opt(self.lhs),
            opt(self.rhs),
            opt(self.margin),
            self.status.as_str().to_string(),
        ]
    }

    fn from_fields(rec: &csv::StringRecord) -> Result<Self> {
        if rec.len() != HEADER.len() {
            return Err(Error::Config(format!("expected {} fields, got {}", HEADER.len(), rec.len())));
        }
        let real = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad {} value `{}`", HEADER[i], &rec[i])))
        };
        let opt = |i: usize| -> Result<Option<f64>> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                real(i).map(Some)
            }
        };
        Ok(Self {
            scenario_id: rec[0]
                .parse()
                .map_err(|_| Error::Config(format!("bad scenario id `{}`", &rec[0])))?,
            theorem: rec[1].parse()?,
            fn_label: rec[2].to_string(),
            eta_label: rec[3].to_string(),
            alpha: real(4)?,
            k: real(5)?,
            r: real(6)?,
            a: real(7)?,
            b: real(8)?,
            p: opt(9)?,
            q: opt(10)?,
            lhs: opt(11)?,
            rhs: opt(12)?,
            margin: opt(13)?,
            status: rec[14].parse()?,
        })
    }
}

/// 12 significant digits, fixed notation for decimal exponents in
/// [−5, 12) and scientific otherwise, trailing zeros removed. Negative
/// zero prints as 0.
pub fn format_real(x: f64) -> String {
    format_significant(x, 12)
}

/// [`format_real`] with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Write the header and rows, `\n`-terminated.
pub fn emit_csv<W: Write>(rows: &[VerificationRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER).map_err(csv_error)?;
    for row in rows {
        w.write_record(row.fields()).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(rows: &[VerificationRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", path.display())))?;
    emit_csv(rows, std::io::BufWriter::new(file))
}

/// Parse output written by [`emit_csv`].
pub fn parse_csv<R: Read>(input: R) -> Result<Vec<VerificationRow>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(Error::Config(format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    rdr.records()
        .map(|rec| VerificationRow::from_fields(&rec.map_err(csv_error)?))
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => io.into(),
            _ => unreachable!(),
        }
    } else {
        Error::Config(e.to_string())
    }
}

/// 3 if a non-informational row is violated, else 5 if any row did not
/// converge, else 0.
pub fn exit_code(rows: &[VerificationRow]) -> i32 {
    if rows
        .iter()
        .any(|r| r.status == Status::Violated && !r.theorem.is_informational())
    {
        exit::VIOLATED
    } else if rows.iter().any(|r| r.status == Status::Nonconverged) {
        exit::NONCONVERGED
    } else {
        exit::OK
    }
}
