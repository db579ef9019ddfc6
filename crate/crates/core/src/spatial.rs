//! Spatial search `[W^{t1}·R]^{t2}` from the uniform state, peak scanning,
//! effective-query accounting and the ancilla-controlled (Tulsi) variant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{ensure_same_dim, Reflection, StateVector, NORM_TOLERANCE};
use crate::lattice::Lattice;
use crate::walk::{tune_walk, BlockHamiltonian, TuneOptions, WalkOperator};

type C = Complex64;

/// The mixing stage applied between two oracle queries.
pub trait Mixer: Sync {
    fn dim(&self) -> usize;

    fn mix(&self, amps: &mut [C], scratch: &mut Vec<C>);

    /// Local walk steps per query, for light-cone accounting. `None` for
    /// nonlocal mixers.
    fn steps_per_query(&self) -> Option<usize>;
}

impl Mixer for WalkOperator {
    fn dim(&self) -> usize {
        WalkOperator::dim(self)
    }

    fn mix(&self, amps: &mut [C], scratch: &mut Vec<C>) {
        self.walk_in_place(amps, scratch);
    }

    fn steps_per_query(&self) -> Option<usize> {
        Some(self.t1())
    }
}

/// The global diffusion `−U_s`, turning the pipeline into plain Grover search.
#[derive(Clone, Debug)]
pub struct GlobalDiffusion {
    reflection: Reflection,
}

impl GlobalDiffusion {
    pub fn new(dim: usize) -> Result<Self> {
        Ok(Self {
            reflection: Reflection::negated(StateVector::uniform(dim)?),
        })
    }
}

impl Mixer for GlobalDiffusion {
    fn dim(&self) -> usize {
        self.reflection.axis().dim()
    }

    fn mix(&self, amps: &mut [C], _scratch: &mut Vec<C>) {
        self.reflection
            .apply_in_place(amps)
            .expect("mixer called with matching dimension");
    }

    fn steps_per_query(&self) -> Option<usize> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regulator {
    None,
    Tulsi { cos_delta: f64 },
}

/// Phase applied to the paused (ancilla 0) branch while the walk acts on
/// the other branch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PauseMode {
    #[default]
    NegatePaused,
    Identity,
}

impl PauseMode {
    fn factor(self) -> f64 {
        match self {
            PauseMode::NegatePaused => -1.0,
            PauseMode::Identity => 1.0,
        }
    }
}

/// How `t2*` is picked from the probability curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PeakRule {
    /// First local maximum reaching `fraction` of the global maximum.
    FirstProminent { fraction: f64 },
    GlobalMax,
}

impl Default for PeakRule {
    fn default() -> Self {
        PeakRule::FirstProminent { fraction: 0.5 }
    }
}

/// `⌈8√(N log₂N)⌉` for `d ≤ 2`, `⌈8√N⌉` otherwise.
pub fn default_budget(lattice: &Lattice) -> usize {
    let n = lattice.size() as f64;
    let b = if lattice.dim() <= 2 {
        8.0 * (n * n.log2().max(1.0)).sqrt()
    } else {
        8.0 * n.sqrt()
    };
    (b.ceil() as usize).max(1)
}

/// `1/√log₂N`, clamped to `(0, 1]`.
pub fn default_cos_delta(size: usize) -> f64 {
    let lg = (size as f64).log2();
    if lg <= 1.0 {
        1.0
    } else {
        1.0 / lg.sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub lattice: Lattice,
    pub t1: usize,
    /// `None` tunes `τ` before the run.
    pub tau: Option<f64>,
    pub kind: BlockHamiltonian,
    pub regulator: Regulator,
    pub pause: PauseMode,
    pub t2_max: usize,
    pub marked: usize,
    pub peak: PeakRule,
    pub tune: TuneOptions,
    /// Fail on probabilities above the light-cone bound.
    pub check_light_cone: bool,
}

impl SearchConfig {
    pub fn new(lattice: Lattice, t1: usize) -> Self {
        let t2_max = default_budget(&lattice);
        Self {
            lattice,
            t1,
            tau: None,
            kind: BlockHamiltonian::default(),
            regulator: Regulator::None,
            pause: PauseMode::default(),
            t2_max,
            marked: 0,
            peak: PeakRule::default(),
            tune: TuneOptions::default(),
            check_light_cone: true,
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_kind(mut self, kind: BlockHamiltonian) -> Self {
        self.kind = kind;
        self.tune.kind = kind;
        self
    }

    pub fn with_tulsi(mut self, cos_delta: f64) -> Self {
        self.regulator = Regulator::Tulsi { cos_delta };
        self
    }

    pub fn with_budget(mut self, t2_max: usize) -> Self {
        self.t2_max = t2_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.t2_max == 0 {
            return Err(Error::InvalidParameter("t2_max must be at least 1".into()));
        }
        if self.t1 == 0 {
            return Err(Error::InvalidParameter("t1 must be at least 1".into()));
        }
        if self.marked >= self.lattice.size() {
            return Err(Error::IndexOutOfRange {
                index: self.marked,
                dim: self.lattice.size(),
            });
        }
        if let Regulator::Tulsi { cos_delta } = self.regulator {
            check_cos_delta(cos_delta)?;
        }
        if let PeakRule::FirstProminent { fraction } = self.peak {
            if !(0.0..=1.0).contains(&fraction) {
                return Err(Error::InvalidParameter(format!("peak fraction {fraction} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// The walk this config runs, tuning `τ` when none is given.
    pub fn walk(&self) -> Result<WalkOperator> {
        let base = WalkOperator::new(&self.lattice, self.tau.unwrap_or(0.0), self.t1)?.with_kind(self.kind);
        match self.tau {
            Some(_) => Ok(base),
            None => {
                let opts = TuneOptions {
                    kind: self.kind,
                    ..self.tune
                };
                let tuned = tune_walk(&base, &opts)?;
                base.with_tau(tuned.tau)
            }
        }
    }
}

fn check_cos_delta(cos_delta: f64) -> Result<()> {
    if !(cos_delta > 0.0 && cos_delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("cos_delta {cos_delta} outside (0, 1]")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    /// `p_curve[t]` is the marked-vertex probability after `t` queries.
    pub p_curve: Vec<f64>,
    pub t2_star: usize,
    pub p_max: f64,
    pub effective_queries: f64,
    pub walk_steps_total: usize,
    /// The chosen peak sits at the end of the budget while still rising.
    pub budget_limited: bool,
    pub norm_drift: f64,
    /// `τ` actually used (tuned or given); zero for nonlocal mixers.
    pub tau: f64,
}

impl SearchResult {
    pub fn global_max(&self) -> f64 {
        self.p_curve[1..].iter().copied().fold(0.0, f64::max)
    }
}

/// Sign flip on the marked vertex.
pub fn oracle_reflect(state: &StateVector, marked: usize) -> Result<StateVector> {
    if marked >= state.dim() {
        return Err(Error::IndexOutOfRange {
            index: marked,
            dim: state.dim(),
        });
    }
    let mut out = state.clone();
    out.amplitudes_mut()[marked] = -out.amplitudes()[marked];
    Ok(out)
}

/// Picks `(t2*, P)` from `curve[1..]`.
pub fn select_peak(curve: &[f64], rule: PeakRule) -> Option<(usize, f64)> {
    if curve.len() < 2 {
        return None;
    }
    let last = curve.len() - 1;
    let global = (1..=last).fold((1, curve[1]), |best, t| if curve[t] > best.1 { (t, curve[t]) } else { best });
    match rule {
        PeakRule::GlobalMax => Some(global),
        PeakRule::FirstProminent { fraction } => {
            let floor = fraction * global.1;
            (1..=last)
                .find(|&t| {
                    let p = curve[t];
                    p >= floor && p >= curve[t - 1] && (t == last || p >= curve[t + 1])
                })
                .map(|t| (t, curve[t]))
                .or(Some(global))
        }
    }
}

pub fn effective_queries(r: &SearchResult) -> Result<f64> {
    if r.p_max <= 0.0 {
        return Err(Error::DegenerateRun);
    }
    Ok(r.t2_star as f64 / r.p_max.sqrt())
}

/// Runs the configured search, regulated or not.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let walk = cfg.walk()?;
    let mut r = match cfg.regulator {
        Regulator::None => run_core(&walk, cfg, None),
        Regulator::Tulsi { cos_delta } => {
            check_cos_delta(cos_delta)?;
            run_core(&walk, cfg, Some(cos_delta))
        }
    }?;
    r.tau = walk.tau();
    Ok(r)
}

/// Runs the Tulsi-regulated search; `cfg.regulator` must be `Tulsi`.
pub fn run_search_tulsi(cfg: &SearchConfig) -> Result<SearchResult> {
    match cfg.regulator {
        Regulator::Tulsi { .. } => run_search(cfg),
        Regulator::None => Err(Error::InvalidParameter("tulsi run needs a tulsi regulator".into())),
    }
}

/// Unregulated search with an arbitrary mixer.
pub fn run_search_with(mixer: &dyn Mixer, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    run_core(mixer, cfg, None)
}

/// Tulsi-regulated search with an arbitrary mixer.
pub fn run_tulsi_with(mixer: &dyn Mixer, cfg: &SearchConfig, cos_delta: f64) -> Result<SearchResult> {
    cfg.validate()?;
    check_cos_delta(cos_delta)?;
    run_core(mixer, cfg, Some(cos_delta))
}

fn run_core(mixer: &dyn Mixer, cfg: &SearchConfig, cos_delta: Option<f64>) -> Result<SearchResult> {
    let n = cfg.lattice.size();
    ensure_same_dim(mixer.dim(), n)?;
    let m = cfg.marked;
    let mut amps = StateVector::uniform(n)?.into_amplitudes();
    let mut scratch = Vec::new();
    // The ancilla-0 branch only ever lives on the marked vertex.
    let mut parked = C::new(0.0, 0.0);
    let (c, s) = match cos_delta {
        Some(cd) => (cd, (1.0 - cd * cd).max(0.0).sqrt()),
        None => (1.0, 0.0),
    };
    let pause = cfg.pause.factor();

    let mut curve = Vec::with_capacity(cfg.t2_max + 1);
    curve.push(amps[m].norm_sqr());
    for _ in 0..cfg.t2_max {
        if cos_delta.is_some() {
            let (p, a) = (parked, amps[m]);
            parked = p * c - a * s;
            amps[m] = p * s + a * c;
        }
        amps[m] = -amps[m];
        mixer.mix(&mut amps, &mut scratch);
        if cos_delta.is_some() {
            parked *= pause;
        }
        curve.push(amps[m].norm_sqr() + parked.norm_sqr());
    }

    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>() + parked.norm_sqr();
    let drift = (norm - 1.0).abs();
    if drift > NORM_TOLERANCE {
        return Err(Error::NormDrift {
            drift,
            tolerance: NORM_TOLERANCE,
        });
    }

    let steps = mixer.steps_per_query();
    if cfg.check_light_cone {
        if let Some(t1) = steps {
            check_cone(&cfg.lattice, t1, &curve)?;
        }
    }

    let (t2_star, p_max) = select_peak(&curve, cfg.peak).ok_or(Error::DegenerateRun)?;
    if p_max <= 0.0 {
        return Err(Error::DegenerateRun);
    }
    let last = curve.len() - 1;
    let budget_limited = t2_star == last && curve[last] > curve[last - 1];
    let tau = steps.and(cfg.tau).unwrap_or(0.0);
    Ok(SearchResult {
        effective_queries: t2_star as f64 / p_max.sqrt(),
        walk_steps_total: steps.unwrap_or(1) * t2_star,
        p_curve: curve,
        t2_star,
        p_max,
        budget_limited,
        norm_drift: drift,
        tau,
    })
}

/// Vertices a disturbance at one vertex can reach in `walk_steps` steps.
pub fn cone_size(lattice: &Lattice, walk_steps: usize) -> usize {
    lattice.linf_ball_size(2 * walk_steps)
}

/// Outside the light cone of the marked vertex the state is still uniform,
/// so the marked probability cannot exceed `|cone|/N`.
fn check_cone(lattice: &Lattice, t1: usize, curve: &[f64]) -> Result<()> {
    let n = lattice.size() as f64;
    for (t, &p) in curve.iter().enumerate() {
        let bound = cone_size(lattice, t1 * t) as f64 / n;
        if p > bound * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::LightConeViolation {
                query: t,
                probability: p,
                bound,
            });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBoundReport {
    /// `walk_steps_total / (d·L)`.
    pub light_cone_ratio: f64,
    /// `effective_queries / √N`.
    pub query_ratio: f64,
    /// The walk has run long enough to reach the antipode: `2·steps ≥ L/2`.
    pub reaches_antipode: bool,
}

/// Checks the peak against the light cone and reports the two lower-bound
/// ratios.
pub fn lower_bound_check(lattice: &Lattice, r: &SearchResult) -> Result<LowerBoundReport> {
    if r.t2_star == 0 {
        return Err(Error::DegenerateRun);
    }
    let eff = effective_queries(r)?;
    let steps = r.walk_steps_total;
    let bound = cone_size(lattice, steps) as f64 / lattice.size() as f64;
    if r.p_max > bound * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::LightConeViolation {
            query: r.t2_star,
            probability: r.p_max,
            bound,
        });
    }
    Ok(LowerBoundReport {
        light_cone_ratio: steps as f64 / (lattice.dim() * lattice.side()) as f64,
        query_ratio: eff / (lattice.size() as f64).sqrt(),
        reaches_antipode: 2 * steps >= lattice.side() / 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grover::{subspace_leakage, success_probability};
    use crate::hilbert::{apply_reflection, basis_state};
    use crate::lattice::make_lattice;

    #[test]
    fn oracle_examples() {
        let s = StateVector::uniform(16).unwrap();
        let r = oracle_reflect(&s, 0).unwrap();
        assert_eq!(r.amplitudes()[0], C::new(-0.25, 0.0));
        assert_eq!(oracle_reflect(&r, 0).unwrap(), s);
        let via = apply_reflection(&Reflection::about(basis_state(16, 0).unwrap()), &s).unwrap();
        for (a, b) in via.amplitudes().iter().zip(r.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(oracle_reflect(&s, 16).is_err());
    }

    #[test]
    fn global_diffusion_is_grover() {
        for (d, side) in [(2, 4), (3, 4), (2, 16)] {
            let lat = make_lattice(d, side).unwrap();
            let n = lat.size();
            let cfg = SearchConfig::new(lat, 1).with_budget(40);
            let mixer = GlobalDiffusion::new(n).unwrap();
            let r = run_search_with(&mixer, &cfg).unwrap();
            assert!((r.p_curve[0] - 1.0 / n as f64).abs() < 1e-15);
            for (t, p) in r.p_curve.iter().enumerate() {
                let want = success_probability(n, 1, t).unwrap();
                assert!((p - want).abs() < 1e-9, "N={n} t={t}");
            }
        }
    }

    #[test]
    fn peak_rules() {
        let curve = [0.0, 0.2, 0.5, 0.3, 0.1, 0.6, 0.9, 0.4];
        assert_eq!(select_peak(&curve, PeakRule::GlobalMax), Some((6, 0.9)));
        assert_eq!(select_peak(&curve, PeakRule::default()), Some((2, 0.5)));
        let rising = [0.0, 0.1, 0.2, 0.3];
        assert_eq!(select_peak(&rising, PeakRule::default()), Some((3, 0.3)));
        assert_eq!(select_peak(&[0.1], PeakRule::default()), None);
    }

    #[test]
    fn effective_query_arithmetic() {
        let mut r = SearchResult {
            p_curve: vec![0.0, 1.0],
            t2_star: 100,
            p_max: 0.25,
            effective_queries: 0.0,
            walk_steps_total: 0,
            budget_limited: false,
            norm_drift: 0.0,
            tau: 0.0,
        };
        assert!((effective_queries(&r).unwrap() - 200.0).abs() < 1e-12);
        r.p_max = 1.0;
        r.t2_star = 7;
        assert_eq!(effective_queries(&r).unwrap(), 7.0);
        r.p_max = 0.0;
        assert!(matches!(effective_queries(&r), Err(Error::DegenerateRun)));
    }

    #[test]
    fn three_dimensional_search_finds_the_origin() {
        let lat = make_lattice(3, 8).unwrap();
        let n = lat.size() as f64;
        let r = run_search(&SearchConfig::new(lat.clone(), 3)).unwrap();
        assert!(r.p_max > 0.1, "{}", r.p_max);
        assert!((r.t2_star as f64) < 4.0 * n.sqrt());
        let ratio = r.effective_queries / (std::f64::consts::PI * n.sqrt() / 4.0);
        assert!((1.0..=2.0).contains(&ratio), "{ratio}");
        let report = lower_bound_check(&lat, &r).unwrap();
        assert!(report.query_ratio.is_finite());
    }

    #[test]
    fn tulsi_reduces_to_plain_run() {
        let lat = make_lattice(2, 8).unwrap();
        let cfg = SearchConfig::new(lat, 3).with_tau(0.49);
        let plain = run_search(&cfg).unwrap();
        let tulsi = run_search(&cfg.clone().with_tulsi(1.0)).unwrap();
        assert_eq!(plain.p_curve, tulsi.p_curve);
        assert_eq!(plain.t2_star, tulsi.t2_star);
    }

    #[test]
    fn tulsi_rejects_bad_cos_delta() {
        let lat = make_lattice(2, 4).unwrap();
        for cd in [0.0, -0.5, 1.5, f64::NAN] {
            assert!(run_search(&SearchConfig::new(lat.clone(), 1).with_tau(0.4).with_tulsi(cd)).is_err());
        }
        assert!(run_search_tulsi(&SearchConfig::new(lat, 1).with_tau(0.4)).is_err());
    }

    #[test]
    fn leakage_is_strictly_positive_in_two_dimensions() {
        let lat = make_lattice(2, 16).unwrap();
        let walk = WalkOperator::new(&lat, 0.49, 3).unwrap();
        let mut amps = StateVector::uniform(lat.size()).unwrap().into_amplitudes();
        let mut scratch = Vec::new();
        let mut worst: f64 = 0.0;
        for _ in 0..40 {
            amps[0] = -amps[0];
            walk.walk_in_place(&mut amps, &mut scratch);
            worst = worst.max(subspace_leakage(&amps, 0).unwrap());
        }
        assert!(worst > 1e-3, "{worst}");
    }

    #[test]
    fn side_two_smoke_run() {
        let lat = make_lattice(6, 2).unwrap();
        let r = run_search(&SearchConfig::new(lat.clone(), 3)).unwrap();
        let report = lower_bound_check(&lat, &r).unwrap();
        assert!(report.light_cone_ratio.is_finite() && report.query_ratio.is_finite());
    }

    #[test]
    fn budget_defaults() {
        assert_eq!(default_budget(&make_lattice(3, 8).unwrap()), 182);
        assert_eq!(default_budget(&make_lattice(2, 16).unwrap()), 363);
        assert!((default_cos_delta(4096) - 1.0 / 12f64.sqrt()).abs() < 1e-15);
    }
}
