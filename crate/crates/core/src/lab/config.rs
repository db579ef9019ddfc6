//! Flat `key = value` sweep files. Lists are comma separated, integer lists
//! also accept inclusive ranges `a..b`, and `#` starts a comment.
//!
//! ```text
//! mode = spatial
//! dims = 3..5
//! sides = 4
//! t1 = 3
//! tau = auto
//! output = fig3.csv
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use super::record::Mode;
use super::sweep::{CosDelta, SweepSpec, TauChoice};
use crate::error::{Error, Result};
use crate::spatial::PeakRule;

pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let mut spec = SweepSpec::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| Error::Config {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let wrap = |e: Error| err(e.to_string());
        match key {
            "mode" => spec.mode = value.parse().map_err(wrap)?,
            "dims" | "d" => spec.dims = int_list(value).map_err(wrap)?,
            "sides" | "L" | "l" => spec.sides = int_list(value).map_err(wrap)?,
            "sizes" | "n" | "N" => spec.sizes = int_list(value).map_err(wrap)?,
            "t1" => spec.t1_values = int_list(value).map_err(wrap)?,
            "tau" => {
                spec.tau = if value == "auto" {
                    TauChoice::Auto
                } else {
                    TauChoice::Fixed(scalar(value).map_err(wrap)?)
                }
            }
            "cos_delta" => {
                spec.cos_deltas = split(value).map(CosDelta::from_str).collect::<Result<_>>().map_err(wrap)?
            }
            "seed" => spec.seed = scalar(value).map_err(wrap)?,
            "output" => spec.output = Some(PathBuf::from(value)),
            "t2_max" => spec.t2_max = Some(scalar(value).map_err(wrap)?),
            "kind" => {
                spec.kind = value.parse().map_err(wrap)?;
                spec.tune.kind = spec.kind;
            }
            "grid" => spec.tune.grid = scalar(value).map_err(wrap)?,
            "refine" => spec.tune.refine = scalar(value).map_err(wrap)?,
            "peak" => {
                spec.peak = match value {
                    "global" => PeakRule::GlobalMax,
                    "first" => PeakRule::default(),
                    other => PeakRule::FirstProminent {
                        fraction: scalar(other).map_err(wrap)?,
                    },
                }
            }
            "jobs" => spec.jobs = scalar(value).map_err(wrap)?,
            "max_n" => spec.max_n = scalar(value).map_err(wrap)?,
            "record_timing" => spec.record_timing = scalar(value).map_err(wrap)?,
            other => return Err(err(format!("unknown key '{other}'"))),
        }
    }
    if spec.mode == Mode::Grover && (!spec.dims.is_empty() || !spec.sides.is_empty()) {
        return Err(Error::Config {
            line: 0,
            message: "grover mode takes 'sizes', not 'dims'/'sides'".into(),
        });
    }
    Ok(spec)
}

fn split(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn scalar<T: FromStr>(value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse '{value}'")))
}

/// Comma-separated integers and inclusive `a..b` ranges.
pub fn int_list(value: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in split(value) {
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (scalar(a.trim())?, scalar(b.trim())?);
                if a > b {
                    return Err(Error::InvalidParameter(format!("empty range '{item}'")));
                }
                out.extend(a..=b);
            }
            None => out.push(scalar(item)?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let spec = parse_config(
            "# fig 3 points\nmode = tulsi\ndims = 2\nsides = 16, 32..34\n\
             t1 = 3\ntau = 0.5\ncos_delta = auto, 0.3\nseed = 9\noutput = out.csv\n\
             t2_max = 100 # budget\nkind = hopping\njobs = 2\nrecord_timing = true\n",
        )
        .unwrap();
        assert_eq!(spec.mode, Mode::Tulsi);
        assert_eq!(spec.sides, vec![16, 32, 33, 34]);
        assert_eq!(spec.tau, TauChoice::Fixed(0.5));
        assert_eq!(spec.cos_deltas, vec![CosDelta::Auto, CosDelta::Value(0.3)]);
        assert_eq!(spec.t2_max, Some(100));
        assert_eq!(spec.jobs, 2);
        assert!(spec.record_timing);
        assert_eq!(spec.output, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn reports_bad_lines() {
        assert!(matches!(parse_config("mode = spatial\nbogus = 1"), Err(Error::Config { line: 2, .. })));
        assert!(matches!(parse_config("dims 3"), Err(Error::Config { line: 1, .. })));
        assert!(matches!(parse_config("dims = 5..3"), Err(Error::Config { line: 1, .. })));
        assert!(parse_config("mode = grover\ndims = 3").is_err());
    }
}
