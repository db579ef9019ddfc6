//! Flat CSV records, one row per run.

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

pub const HEADER: &str =
    "mode,d,L,N,t1,tau,cos_delta,t2_star,p_max,effective_queries,walk_steps_total,runtime_ms,status";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Grover,
    Spatial,
    Tulsi,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Grover => "grover",
            Mode::Spatial => "spatial",
            Mode::Tulsi => "tulsi",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "grover" => Ok(Mode::Grover),
            "spatial" => Ok(Mode::Spatial),
            "tulsi" => Ok(Mode::Tulsi),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Ok,
    BudgetLimited,
    /// Norm drift or light-cone violation.
    Inconsistent(String),
    Error(String),
}

impl Status {
    pub fn is_completed(&self) -> bool {
        matches!(self, Status::Ok | Status::BudgetLimited)
    }

    pub fn from_error(e: &Error) -> Self {
        let msg = e.to_string().replace([',', '\n', '\r'], ";");
        if e.is_consistency_failure() {
            Status::Inconsistent(msg)
        } else {
            Status::Error(msg)
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Ok => f.write_str("ok"),
            Status::BudgetLimited => f.write_str("budget-limited"),
            Status::Inconsistent(m) => write!(f, "inconsistent: {m}"),
            Status::Error(m) => write!(f, "error: {m}"),
        }
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(Status::Ok),
            "budget-limited" => Ok(Status::BudgetLimited),
            _ => {
                if let Some(m) = s.strip_prefix("inconsistent: ") {
                    Ok(Status::Inconsistent(m.to_string()))
                } else if let Some(m) = s.strip_prefix("error: ") {
                    Ok(Status::Error(m.to_string()))
                } else {
                    Err(Error::InvalidParameter(format!("unknown status '{s}'")))
                }
            }
        }
    }
}

/// One measurement point. Fields that do not apply to a mode are `None`
/// and serialize as empty cells.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchRecord {
    pub mode: Mode,
    pub d: Option<usize>,
    pub side: Option<usize>,
    pub size: usize,
    pub t1: Option<usize>,
    pub tau: Option<f64>,
    pub cos_delta: Option<f64>,
    pub t2_star: Option<usize>,
    pub p_max: Option<f64>,
    pub effective_queries: Option<f64>,
    pub walk_steps_total: Option<usize>,
    pub runtime_ms: u64,
    pub status: Status,
}

impl SearchRecord {
    /// A row with only the configuration columns filled in.
    pub fn pending(mode: Mode, d: Option<usize>, side: Option<usize>, size: usize, t1: Option<usize>, cos_delta: Option<f64>) -> Self {
        Self {
            mode,
            d,
            side,
            size,
            t1,
            tau: None,
            cos_delta,
            t2_star: None,
            p_max: None,
            effective_queries: None,
            walk_steps_total: None,
            runtime_ms: 0,
            status: Status::Ok,
        }
    }

    /// `mode|d|L|t1|cos_delta`, with `N` standing in for the lattice
    /// columns in grover mode.
    pub fn key(&self) -> String {
        match self.mode {
            Mode::Grover => format!("grover|N={}", self.size),
            _ => format!(
                "{}|{}|{}|{}|{}",
                self.mode,
                opt(self.d),
                opt(self.side),
                opt(self.t1),
                self.cos_delta.map(fmt_g).unwrap_or_default()
            ),
        }
    }

    /// Numeric ordering of config keys.
    pub fn key_cmp(&self, other: &Self) -> Ordering {
        let cd = |r: &Self| r.cos_delta.unwrap_or(f64::NEG_INFINITY);
        self.mode
            .cmp(&other.mode)
            .then(self.d.cmp(&other.d))
            .then(self.side.cmp(&other.side))
            .then(self.size.cmp(&other.size))
            .then(self.t1.cmp(&other.t1))
            .then(cd(self).total_cmp(&cd(other)))
    }

    pub fn to_csv_line(&self) -> String {
        [
            self.mode.to_string(),
            opt(self.d),
            opt(self.side),
            self.size.to_string(),
            opt(self.t1),
            self.tau.map(fmt_g).unwrap_or_default(),
            self.cos_delta.map(fmt_g).unwrap_or_default(),
            opt(self.t2_star),
            self.p_max.map(fmt_g).unwrap_or_default(),
            self.effective_queries.map(fmt_g).unwrap_or_default(),
            opt(self.walk_steps_total),
            self.runtime_ms.to_string(),
            self.status.to_string(),
        ]
        .join(",")
    }

    pub fn from_csv_line(line: &str) -> Result<Self> {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 13 {
            return Err(Error::InvalidParameter(format!(
                "csv row has {} cells, expected 13",
                cells.len()
            )));
        }
        Ok(Self {
            mode: cells[0].parse()?,
            d: parse_opt(cells[1])?,
            side: parse_opt(cells[2])?,
            size: parse_cell(cells[3])?,
            t1: parse_opt(cells[4])?,
            tau: parse_opt(cells[5])?,
            cos_delta: parse_opt(cells[6])?,
            t2_star: parse_opt(cells[7])?,
            p_max: parse_opt(cells[8])?,
            effective_queries: parse_opt(cells[9])?,
            walk_steps_total: parse_opt(cells[10])?,
            runtime_ms: parse_cell(cells[11])?,
            status: cells[12].parse()?,
        })
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_cell<T: FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::InvalidParameter(format!("bad csv cell '{s}'")))
}

fn parse_opt<T: FromStr>(s: &str) -> Result<Option<T>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_cell(s).map(Some)
    }
}

/// `%.12g`.
pub fn fmt_g(x: f64) -> String {
    const SIG: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..SIG).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_csv<W: Write>(mut out: W, records: &[SearchRecord]) -> Result<()> {
    writeln!(out, "{HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.to_csv_line())?;
    }
    out.flush()?;
    Ok(())
}

/// Reads rows written by [`write_csv`]; the header is optional.
pub fn read_csv<R: BufRead>(input: R) -> Result<Vec<SearchRecord>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() || line == HEADER {
            continue;
        }
        out.push(SearchRecord::from_csv_line(line)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(0.25), "0.25");
        assert_eq!(fmt_g(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_g(1e-7), "1e-07");
        assert_eq!(fmt_g(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_g(-0.000123), "-0.000123");
        assert_eq!(fmt_g(100.0), "100");
    }

    #[test]
    fn round_trip() {
        let mut r = SearchRecord::pending(Mode::Tulsi, Some(2), Some(16), 256, Some(3), Some(0.35355339059327373));
        r.tau = Some(0.5048);
        r.t2_star = Some(8);
        r.p_max = Some(0.2009);
        r.effective_queries = Some(17.84);
        r.walk_steps_total = Some(24);
        let line = r.to_csv_line();
        let back = SearchRecord::from_csv_line(&line).unwrap();
        assert_eq!(back.to_csv_line(), line);
        let e = SearchRecord {
            status: Status::from_error(&Error::NormDrift { drift: 1e-9, tolerance: 1e-10 }),
            ..r
        };
        let back = SearchRecord::from_csv_line(&e.to_csv_line()).unwrap();
        assert!(matches!(back.status, Status::Inconsistent(_)));
    }

    #[test]
    fn grover_key() {
        let r = SearchRecord::pending(Mode::Grover, None, None, 4, None, None);
        assert_eq!(r.key(), "grover|N=4");
        assert_eq!(r.to_csv_line(), "grover,,,4,,,,,,,,0,ok");
    }
}
