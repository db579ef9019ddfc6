//! Scaling sweeps with `a + b/x` fits: effective queries against `d`
//! (`y = eff/√N`) and, for the regulated two-dimensional search, against
//! `L` (`y = eff/√(N log₂N)`).

use std::path::PathBuf;

use log::warn;

use super::fit::{fit_inverse, FitResult};
use super::record::{Mode, SearchRecord};
use super::sweep::{sweep, CosDelta, SweepSpec, TauChoice};
use super::DEFAULT_MAX_N;
use crate::error::{Error, Result};
use crate::lattice::make_lattice;
use crate::spatial::PeakRule;
use crate::walk::{BlockHamiltonian, TuneOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct FigureOptions {
    pub t1: usize,
    pub kind: BlockHamiltonian,
    pub tune: TuneOptions,
    pub peak: PeakRule,
    pub t2_max: Option<usize>,
    pub max_n: usize,
    pub jobs: usize,
    pub output: Option<PathBuf>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            t1: 3,
            kind: BlockHamiltonian::default(),
            tune: TuneOptions::default(),
            peak: PeakRule::default(),
            t2_max: None,
            max_n: DEFAULT_MAX_N,
            jobs: 1,
            output: None,
        }
    }
}

impl FigureOptions {
    fn spec(&self, mode: Mode, dims: Vec<usize>, sides: Vec<usize>) -> SweepSpec {
        SweepSpec {
            mode,
            dims,
            sides,
            t1_values: vec![self.t1],
            tau: TauChoice::Auto,
            t2_max: self.t2_max,
            kind: self.kind,
            tune: TuneOptions { kind: self.kind, ..self.tune },
            peak: self.peak,
            jobs: self.jobs,
            max_n: self.max_n,
            output: None,
            ..SweepSpec::default()
        }
    }
}

#[derive(Debug)]
pub struct Fig3Report {
    pub records: Vec<SearchRecord>,
    /// `(d, L, eff/√N)` for every completed run.
    pub points: Vec<(usize, usize, f64)>,
    pub fit: Result<FitResult>,
    pub skipped: Vec<(usize, usize)>,
}

impl Fig3Report {
    /// `a − π/4`.
    pub fn prefactor_gap(&self) -> Option<f64> {
        self.fit.as_ref().ok().map(|f| f.a - std::f64::consts::FRAC_PI_4)
    }
}

fn feasible(d: usize, side: usize, max_n: usize) -> bool {
    match make_lattice(d, side) {
        Ok(l) if l.size() <= max_n => true,
        Ok(l) => {
            warn!("skipping d={d} L={side}: N={} exceeds cap {max_n}", l.size());
            false
        }
        Err(e) => {
            warn!("skipping d={d} L={side}: {e}");
            false
        }
    }
}

fn completed(r: &SearchRecord) -> Option<f64> {
    if r.status.is_completed() {
        r.effective_queries
    } else {
        None
    }
}

/// Spatial runs over `ds × Ls`, fitting `eff/√N = a + b/d`.
pub fn reproduce_fig3(sides: &[usize], dims: &[usize], opts: &FigureOptions) -> Result<Fig3Report> {
    let mut pairs = Vec::new();
    let mut skipped = Vec::new();
    for &d in dims {
        for &side in sides {
            if feasible(d, side, opts.max_n) {
                pairs.push((d, side));
            } else {
                skipped.push((d, side));
            }
        }
    }

    let mut records = Vec::new();
    for &(d, side) in &pairs {
        records.extend(sweep(&opts.spec(Mode::Spatial, vec![d], vec![side]))?);
    }
    records.sort_by(SearchRecord::key_cmp);
    if let Some(path) = &opts.output {
        super::sweep::emit(&records, Some(path))?;
    }

    let points: Vec<(usize, usize, f64)> = records
        .iter()
        .filter_map(|r| {
            let eff = completed(r)?;
            Some((r.d?, r.side?, eff / (r.size as f64).sqrt()))
        })
        .collect();
    let xs: Vec<f64> = points.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.2).collect();
    let fit = fit_inverse(&xs, &ys);
    Ok(Fig3Report {
        records,
        points,
        fit,
        skipped,
    })
}

#[derive(Debug)]
pub struct Fig4Column {
    /// `None` for the unregulated control.
    pub cos_delta: Option<CosDelta>,
    /// `(L, cosδ used, eff/√(N log₂N), p_max)`.
    pub points: Vec<(usize, Option<f64>, f64, f64)>,
    pub fit: Result<FitResult>,
}

#[derive(Debug)]
pub struct Fig4Report {
    pub records: Vec<SearchRecord>,
    pub columns: Vec<Fig4Column>,
    pub control: Fig4Column,
}

fn column(records: &[SearchRecord], mode: Mode, cos_delta: Option<CosDelta>, sides: &[usize]) -> Fig4Column {
    let mut points = Vec::new();
    for &side in sides {
        let n = side * side;
        let want = cos_delta.map(|c| c.resolve(n));
        let hit = records
            .iter()
            .find(|r| r.mode == mode && r.side == Some(side) && r.cos_delta == want);
        if let Some(r) = hit {
            if let (Some(eff), Some(p)) = (completed(r), r.p_max) {
                let scale = (n as f64 * (n as f64).log2()).sqrt();
                points.push((side, want, eff / scale, p));
            }
        }
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.2).collect();
    Fig4Column {
        cos_delta,
        points,
        fit: fit_inverse(&xs, &ys),
    }
}

/// Tulsi-regulated `d = 2` runs per `cosδ`, plus an unregulated control,
/// each fitted as `eff/√(N log₂N) = a + b/L`.
pub fn reproduce_fig4(sides: &[usize], cos_deltas: &[CosDelta], opts: &FigureOptions) -> Result<Fig4Report> {
    if cos_deltas.is_empty() {
        return Err(Error::InvalidParameter("fig4 needs at least one cos_delta".into()));
    }
    let sides: Vec<usize> = sides.iter().copied().filter(|&l| feasible(2, l, opts.max_n)).collect();

    let mut tulsi = opts.spec(Mode::Tulsi, vec![2], sides.clone());
    tulsi.cos_deltas = cos_deltas.to_vec();
    let mut records = sweep(&tulsi)?;
    records.extend(sweep(&opts.spec(Mode::Spatial, vec![2], sides.clone()))?);
    records.sort_by(SearchRecord::key_cmp);
    if let Some(path) = &opts.output {
        super::sweep::emit(&records, Some(path))?;
    }

    let columns = cos_deltas
        .iter()
        .map(|&c| column(&records, Mode::Tulsi, Some(c), &sides))
        .collect();
    let control = column(&records, Mode::Spatial, None, &sides);
    Ok(Fig4Report {
        records,
        columns,
        control,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_dimension_fit_fails_but_records_remain() {
        let opts = FigureOptions {
            t2_max: Some(40),
            ..FigureOptions::default()
        };
        let rep = reproduce_fig3(&[4], &[3], &opts).unwrap();
        assert_eq!(rep.records.len(), 1);
        assert!(matches!(rep.fit, Err(Error::Underdetermined { .. })));
    }

    #[test]
    fn infeasible_points_are_skipped() {
        let opts = FigureOptions {
            t2_max: Some(20),
            max_n: 64,
            ..FigureOptions::default()
        };
        let rep = reproduce_fig3(&[4, 5], &[2, 3, 4], &opts).unwrap();
        assert_eq!(rep.points.len(), 2);
        assert_eq!(rep.skipped.len(), 4);
        assert!(rep.fit.is_ok());
    }

    #[test]
    fn unit_cos_delta_matches_control() {
        let opts = FigureOptions {
            t2_max: Some(60),
            ..FigureOptions::default()
        };
        let rep = reproduce_fig4(&[8, 12], &[CosDelta::Value(1.0)], &opts).unwrap();
        let ones = &rep.columns[0].points;
        assert_eq!(ones.len(), 2);
        for (a, b) in ones.iter().zip(&rep.control.points) {
            assert_eq!(a.0, b.0);
            assert_eq!(a.2, b.2);
        }
    }
}
