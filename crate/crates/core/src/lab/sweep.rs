//! Parameter sweeps over grover, spatial and Tulsi-regulated runs.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;

use super::record::{read_csv, write_csv, Mode, SearchRecord, Status};
use super::DEFAULT_MAX_N;
use crate::error::{Error, Result};
use crate::grover::optimal_queries;
use crate::lattice::{make_lattice, Lattice};
use crate::spatial::{default_cos_delta, run_search, PeakRule, SearchConfig};
use crate::walk::{BlockHamiltonian, TuneOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TauChoice {
    Fixed(f64),
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CosDelta {
    Value(f64),
    /// `1/√log₂N`.
    Auto,
}

impl CosDelta {
    pub fn resolve(self, size: usize) -> f64 {
        match self {
            CosDelta::Value(v) => v,
            CosDelta::Auto => default_cos_delta(size),
        }
    }
}

impl std::str::FromStr for CosDelta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "auto" {
            return Ok(CosDelta::Auto);
        }
        s.parse()
            .map(CosDelta::Value)
            .map_err(|_| Error::InvalidParameter(format!("bad cos_delta '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub mode: Mode,
    pub dims: Vec<usize>,
    pub sides: Vec<usize>,
    /// Database sizes for grover mode.
    pub sizes: Vec<usize>,
    pub t1_values: Vec<usize>,
    pub tau: TauChoice,
    /// Tulsi mode only; defaults to `[Auto]` when empty.
    pub cos_deltas: Vec<CosDelta>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub t2_max: Option<usize>,
    pub kind: BlockHamiltonian,
    pub tune: TuneOptions,
    pub peak: PeakRule,
    pub jobs: usize,
    pub max_n: usize,
    /// Write wall-clock times; off keeps output byte-reproducible.
    pub record_timing: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            mode: Mode::Spatial,
            dims: Vec::new(),
            sides: Vec::new(),
            sizes: Vec::new(),
            t1_values: vec![3],
            tau: TauChoice::Auto,
            cos_deltas: Vec::new(),
            seed: 0,
            output: None,
            t2_max: None,
            kind: BlockHamiltonian::default(),
            tune: TuneOptions::default(),
            peak: PeakRule::default(),
            jobs: 1,
            max_n: DEFAULT_MAX_N,
            record_timing: false,
        }
    }
}

#[derive(Clone, Debug)]
enum Job {
    Grover { size: usize },
    Lattice { lattice: Lattice, t1: usize, cos_delta: Option<f64> },
}

impl SweepSpec {
    /// Expands the spec into runnable jobs, failing on the first infeasible
    /// or invalid configuration.
    fn jobs(&self) -> Result<Vec<(SearchRecord, Job)>> {
        let mut out = Vec::new();
        match self.mode {
            Mode::Grover => {
                for &n in &self.sizes {
                    if n == 0 {
                        return Err(Error::InvalidDimension(0));
                    }
                    self.check_cap(n)?;
                    out.push((SearchRecord::pending(Mode::Grover, None, None, n, None, None), Job::Grover { size: n }));
                }
            }
            Mode::Spatial | Mode::Tulsi => {
                let deltas: Vec<CosDelta> = match (self.mode, self.cos_deltas.is_empty()) {
                    (Mode::Tulsi, true) => vec![CosDelta::Auto],
                    (Mode::Tulsi, false) => self.cos_deltas.clone(),
                    _ => Vec::new(),
                };
                if self.t1_values.contains(&0) {
                    return Err(Error::InvalidParameter("t1 must be at least 1".into()));
                }
                for &d in &self.dims {
                    for &side in &self.sides {
                        let lattice = make_lattice(d, side)?;
                        self.check_cap(lattice.size())?;
                        for &t1 in &self.t1_values {
                            let n = lattice.size();
                            let cds: Vec<Option<f64>> = if self.mode == Mode::Tulsi {
                                deltas.iter().map(|c| Some(c.resolve(n))).collect()
                            } else {
                                vec![None]
                            };
                            for cd in cds {
                                if let Some(c) = cd {
                                    if !(c > 0.0 && c <= 1.0) {
                                        return Err(Error::InvalidParameter(format!("cos_delta {c} outside (0, 1]")));
                                    }
                                }
                                let rec = SearchRecord::pending(self.mode, Some(d), Some(side), n, Some(t1), cd);
                                out.push((
                                    rec,
                                    Job::Lattice {
                                        lattice: lattice.clone(),
                                        t1,
                                        cos_delta: cd,
                                    },
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_cap(&self, size: usize) -> Result<()> {
        if size > self.max_n {
            return Err(Error::InfeasibleSize { size, cap: self.max_n });
        }
        Ok(())
    }

    fn run_job(&self, mut rec: SearchRecord, job: &Job) -> SearchRecord {
        let start = Instant::now();
        let outcome = match job {
            Job::Grover { size } => optimal_queries(*size, 1).map(|(q, p)| {
                rec.t2_star = Some(q);
                rec.p_max = Some(p);
                rec.effective_queries = Some(q as f64 / p.sqrt());
                rec.walk_steps_total = Some(0);
            }),
            Job::Lattice { lattice, t1, cos_delta } => {
                let mut cfg = SearchConfig::new(lattice.clone(), *t1).with_kind(self.kind);
                cfg.tune = TuneOptions { kind: self.kind, ..self.tune };
                cfg.peak = self.peak;
                if let TauChoice::Fixed(tau) = self.tau {
                    cfg = cfg.with_tau(tau);
                }
                if let Some(m) = self.t2_max {
                    cfg = cfg.with_budget(m);
                }
                if let Some(cd) = cos_delta {
                    cfg = cfg.with_tulsi(*cd);
                }
                run_search(&cfg).map(|r| {
                    rec.tau = Some(r.tau);
                    rec.t2_star = Some(r.t2_star);
                    rec.p_max = Some(r.p_max);
                    rec.effective_queries = Some(r.effective_queries);
                    rec.walk_steps_total = Some(r.walk_steps_total);
                    if r.budget_limited {
                        rec.status = Status::BudgetLimited;
                    }
                })
            }
        };
        if let Err(e) = outcome {
            warn!("{}: {e}", rec.key());
            rec.status = Status::from_error(&e);
        }
        if self.record_timing {
            rec.runtime_ms = start.elapsed().as_millis() as u64;
        }
        info!("{} -> {}", rec.key(), rec.status);
        rec
    }
}

/// Runs every configuration of `spec` and returns all rows sorted by config
/// key. With an output path, rows already present in the file are kept and
/// their configurations skipped; new rows are appended as they finish and the
/// file is finally rewritten in sorted order.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SearchRecord>> {
    let jobs = spec.jobs()?;

    let mut existing = match &spec.output {
        Some(path) if path.exists() => read_csv(BufReader::new(File::open(path)?))?,
        _ => Vec::new(),
    };
    existing.retain(|r| r.status.is_completed());
    let done: HashSet<String> = existing.iter().map(SearchRecord::key).collect();
    let todo: Vec<_> = jobs.into_iter().filter(|(r, _)| !done.contains(&r.key())).collect();
    if !done.is_empty() {
        info!("resuming: {} configurations already done, {} to run", done.len(), todo.len());
    }

    let appender = match &spec.output {
        Some(path) => Some(Mutex::new(open_appender(path, &existing)?)),
        None => None,
    };
    let run = |(rec, job): &(SearchRecord, Job)| -> Result<SearchRecord> {
        // Round through the CSV form so fresh and resumed rows compare equal.
        let out = SearchRecord::from_csv_line(&spec.run_job(rec.clone(), job).to_csv_line())?;
        if let Some(app) = &appender {
            let mut w = app.lock().expect("csv writer poisoned");
            writeln!(w, "{}", out.to_csv_line())?;
            w.flush()?;
        }
        Ok(out)
    };

    let fresh: Vec<SearchRecord> = if spec.jobs <= 1 {
        todo.iter().map(run).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.jobs)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| todo.par_iter().map(run).collect::<Result<_>>())?
    };
    drop(appender);

    let mut all = existing;
    all.extend(fresh);
    all.sort_by(SearchRecord::key_cmp);
    if let Some(path) = &spec.output {
        write_atomically(path, &all)?;
    }
    Ok(all)
}

fn open_appender(path: &Path, existing: &[SearchRecord]) -> Result<BufWriter<File>> {
    // Start from a clean file holding only the rows being kept.
    write_atomically(path, existing)?;
    let file = OpenOptions::new().append(true).open(path)?;
    Ok(BufWriter::new(file))
}

fn write_atomically(path: &Path, records: &[SearchRecord]) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    {
        let file = File::create(&tmp)?;
        write_csv(BufWriter::new(file), records)?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes rows to standard output or a file, header first.
pub fn emit(records: &[SearchRecord], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => write_atomically(p, records),
        None => {
            let stdout = std::io::stdout();
            write_csv(stdout.lock(), records)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grover_mode_record() {
        let spec = SweepSpec {
            mode: Mode::Grover,
            sizes: vec![4],
            ..SweepSpec::default()
        };
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].t2_star, Some(1));
        assert!((rows[0].p_max.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_dims_give_no_rows() {
        let spec = SweepSpec {
            sides: vec![4],
            ..SweepSpec::default()
        };
        assert!(sweep(&spec).unwrap().is_empty());
    }

    #[test]
    fn fails_fast_on_bad_geometry() {
        let spec = SweepSpec {
            dims: vec![2],
            sides: vec![4, 5],
            ..SweepSpec::default()
        };
        assert!(matches!(sweep(&spec), Err(Error::UnsupportedGeometry(_))));
        let spec = SweepSpec {
            dims: vec![2],
            sides: vec![64],
            max_n: 1024,
            ..SweepSpec::default()
        };
        assert!(matches!(sweep(&spec), Err(Error::InfeasibleSize { .. })));
    }

    #[test]
    fn resume_skips_completed_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let mut spec = SweepSpec {
            dims: vec![2],
            sides: vec![4],
            t2_max: Some(20),
            output: Some(path.clone()),
            ..SweepSpec::default()
        };
        let first = sweep(&spec).unwrap();
        let bytes = fs::read(&path).unwrap();
        spec.sides = vec![4, 6];
        let second = sweep(&spec).unwrap();
        assert_eq!(second.len(), 2);
        assert_eq!(second[0], first[0]);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(std::str::from_utf8(&bytes).unwrap()));
        assert_eq!(text.lines().count(), 3);
    }
}
