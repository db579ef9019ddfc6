//! The local walk step `W = U_e·U_o` built from exactly exponentiated
//! elementary-hypercube blocks, `τ` tuning, and a Bloch-mode dispersion probe.
//!
//! Two intra-block Hamiltonians are available:
//!
//! * [`BlockHamiltonian::Staggered`] (default): hopping `i·η_j(c)` along each
//!   hypercube edge with staggered signs `η_j(c) = (−1)^{c_0+…+c_{j−1}}`
//!   (an extra `(−1)^j` on even blocks). `H_B² = d·I`, so
//!   `exp(−iτH_B) = cos(τ√d) − i sin(τ√d) H_B/√d` exactly, and the uniform
//!   state is invariant under `W`. Small-`k` modes disperse linearly.
//! * [`BlockHamiltonian::Hopping`]: `H_B = Σ_j X_j`, the plain hypercube
//!   adjacency, applied as a product of per-axis `cos τ − i sin τ X`
//!   rotations. Small-`k` modes disperse quadratically.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{ensure_same_dim, inner, StateVector};
use crate::lattice::{BlockPartition, Lattice, Parity};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Vertex count from which block loops run on the rayon pool.
pub const PAR_THRESHOLD: usize = 1 << 14;

/// Largest lattice accepted by [`dispersion_probe`].
pub const PROBE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BlockHamiltonian {
    #[default]
    Staggered,
    Hopping,
}

impl BlockHamiltonian {
    pub fn name(self) -> &'static str {
        match self {
            BlockHamiltonian::Staggered => "staggered",
            BlockHamiltonian::Hopping => "hopping",
        }
    }
}

impl std::str::FromStr for BlockHamiltonian {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "staggered" => Ok(BlockHamiltonian::Staggered),
            "hopping" => Ok(BlockHamiltonian::Hopping),
            other => Err(Error::InvalidParameter(format!("unknown block hamiltonian '{other}'"))),
        }
    }
}

/// Staggered sign of the edge `(c, c⊕ê_j)` seen from corner `c`, including
/// the antisymmetry factor `1 − 2c_j`.
#[inline]
fn staggered_sign(c: usize, j: usize, parity: Parity) -> f64 {
    let below = (c & ((1 << j) - 1)).count_ones() + ((c >> j) & 1) as u32;
    let flip = match parity {
        Parity::Odd => below,
        Parity::Even => below + j as u32,
    };
    if flip % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Dense intra-block Hamiltonian `H_B` in binary corner order.
pub fn block_hamiltonian(dim: usize, parity: Parity, kind: BlockHamiltonian) -> DMatrix<C> {
    let n = 1usize << dim;
    let mut h = DMatrix::from_element(n, n, ZERO);
    for c in 0..n {
        for j in 0..dim {
            let other = c ^ (1 << j);
            h[(c, other)] = match kind {
                BlockHamiltonian::Hopping => C::new(1.0, 0.0),
                BlockHamiltonian::Staggered => C::new(0.0, staggered_sign(c, j, parity)),
            };
        }
    }
    h
}

/// Largest dimension whose staggered signs are tabulated.
const SIGN_TABLE_MAX_DIM: usize = 14;

/// `σ[c·d + j]` for every corner and axis, or empty above
/// [`SIGN_TABLE_MAX_DIM`].
fn sign_table(dim: usize, parity: Parity) -> Vec<f64> {
    if dim > SIGN_TABLE_MAX_DIM {
        return Vec::new();
    }
    (0..1usize << dim)
        .flat_map(|c| (0..dim).map(move |j| staggered_sign(c, j, parity)))
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct BlockCoeffs {
    dim: usize,
    parity: Parity,
    kind: BlockHamiltonian,
    cos: f64,
    sin: f64,
}

impl BlockCoeffs {
    fn new(dim: usize, parity: Parity, kind: BlockHamiltonian, tau: f64) -> Self {
        let (cos, sin) = match kind {
            BlockHamiltonian::Staggered => {
                let root = (dim as f64).sqrt();
                let phi = tau * root;
                (phi.cos(), phi.sin() / root)
            }
            BlockHamiltonian::Hopping => (tau.cos(), tau.sin()),
        };
        Self {
            dim,
            parity,
            kind,
            cos,
            sin,
        }
    }

    /// `exp(−iτH_B)` on one block stored contiguously in corner order.
    /// `tmp` must hold a block; `signs` is a [`sign_table`].
    #[inline]
    fn transform(&self, block: &mut [C], tmp: &mut [C], signs: &[f64]) {
        let d = self.dim;
        match self.kind {
            BlockHamiltonian::Staggered => {
                for (c, slot) in tmp.iter_mut().enumerate() {
                    let mut acc = block[c] * self.cos;
                    if signs.is_empty() {
                        for j in 0..d {
                            acc += block[c ^ (1 << j)] * (staggered_sign(c, j, self.parity) * self.sin);
                        }
                    } else {
                        for (j, s) in signs[c * d..(c + 1) * d].iter().enumerate() {
                            acc += block[c ^ (1 << j)] * (s * self.sin);
                        }
                    }
                    *slot = acc;
                }
                block.copy_from_slice(tmp);
            }
            BlockHamiltonian::Hopping => {
                let mis = C::new(0.0, -self.sin);
                for j in 0..d {
                    let bit = 1 << j;
                    for c in 0..block.len() {
                        if c & bit == 0 {
                            let (a, b) = (block[c], block[c | bit]);
                            block[c] = a * self.cos + b * mis;
                            block[c | bit] = a * mis + b * self.cos;
                        }
                    }
                }
            }
        }
    }
}

/// Transforms every block of a buffer held in block order.
fn transform_all(buf: &mut [C], len: usize, coeffs: BlockCoeffs, signs: &[f64]) {
    if buf.len() >= PAR_THRESHOLD && buf.len() > len {
        buf.par_chunks_mut(len)
            .for_each_init(|| vec![ZERO; len], |tmp, chunk| coeffs.transform(chunk, tmp, signs));
    } else {
        let mut tmp = vec![ZERO; len];
        for chunk in buf.chunks_mut(len) {
            coeffs.transform(chunk, &mut tmp, signs);
        }
    }
}

/// `dst[p] = src[perm[p]]`.
fn permute(dst: &mut [C], src: &[C], perm: &[usize]) {
    if dst.len() >= PAR_THRESHOLD {
        dst.par_iter_mut().zip(perm.par_iter()).for_each(|(a, &p)| *a = src[p]);
    } else {
        for (a, &p) in dst.iter_mut().zip(perm) {
            *a = src[p];
        }
    }
}

fn block_step_in_place(amps: &mut [C], scratch: &mut Vec<C>, part: &BlockPartition, coeffs: BlockCoeffs, signs: &[f64]) {
    scratch.resize(amps.len(), ZERO);
    permute(scratch, amps, part.vertices());
    transform_all(scratch, part.block_len(), coeffs, signs);
    permute(amps, scratch, part.positions());
}

/// Applies `exp(−iτH_B)` to every block of `part`.
pub fn apply_block_step(
    state: &StateVector,
    part: &BlockPartition,
    tau: f64,
    kind: BlockHamiltonian,
) -> Result<StateVector> {
    ensure_same_dim(state.dim(), part.vertices().len())?;
    let mut out = state.clone();
    let coeffs = BlockCoeffs::new(part.dim(), part.parity(), kind, tau);
    let signs = sign_table(part.dim(), part.parity());
    let mut scratch = Vec::new();
    block_step_in_place(out.amplitudes_mut(), &mut scratch, part, coeffs, &signs);
    Ok(out)
}

#[derive(Debug)]
struct Geometry {
    lattice: Lattice,
    odd: BlockPartition,
    even: BlockPartition,
    odd_signs: Vec<f64>,
    even_signs: Vec<f64>,
    /// Even-order position `q` reads odd-order position `odd_to_even[q]`.
    odd_to_even: Vec<usize>,
    even_to_odd: Vec<usize>,
}

/// `W = U_e·U_o` on a lattice, applied `t1` times between oracle queries.
///
/// Cloning is cheap: the block partitions are shared.
#[derive(Clone, Debug)]
pub struct WalkOperator {
    geometry: Arc<Geometry>,
    tau_odd: f64,
    tau_even: f64,
    t1: usize,
    kind: BlockHamiltonian,
}

fn check_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() {
        return Err(Error::InvalidParameter(format!("tau must be finite, got {tau}")));
    }
    Ok(())
}

impl WalkOperator {
    pub fn new(lattice: &Lattice, tau: f64, t1: usize) -> Result<Self> {
        check_tau(tau)?;
        if t1 == 0 {
            return Err(Error::InvalidParameter("t1 must be at least 1".into()));
        }
        let odd = BlockPartition::new(lattice, Parity::Odd);
        let even = BlockPartition::new(lattice, Parity::Even);
        let odd_to_even = even.vertices().iter().map(|&v| odd.positions()[v]).collect();
        let even_to_odd = odd.vertices().iter().map(|&v| even.positions()[v]).collect();
        let geometry = Geometry {
            lattice: lattice.clone(),
            odd_signs: sign_table(lattice.dim(), Parity::Odd),
            even_signs: sign_table(lattice.dim(), Parity::Even),
            odd,
            even,
            odd_to_even,
            even_to_odd,
        };
        Ok(Self {
            geometry: Arc::new(geometry),
            tau_odd: tau,
            tau_even: tau,
            t1,
            kind: BlockHamiltonian::default(),
        })
    }

    pub fn with_kind(mut self, kind: BlockHamiltonian) -> Self {
        self.kind = kind;
        self
    }

    /// Same geometry, new global `τ`.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        Ok(Self {
            tau_odd: tau,
            tau_even: tau,
            ..self.clone()
        })
    }

    /// Separate step parameters for the odd and even block sets.
    pub fn with_parity_taus(&self, odd: f64, even: f64) -> Result<Self> {
        check_tau(odd)?;
        check_tau(even)?;
        Ok(Self {
            tau_odd: odd,
            tau_even: even,
            ..self.clone()
        })
    }

    pub fn with_t1(&self, t1: usize) -> Result<Self> {
        if t1 == 0 {
            return Err(Error::InvalidParameter("t1 must be at least 1".into()));
        }
        Ok(Self { t1, ..self.clone() })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.geometry.lattice
    }

    pub fn partition(&self, parity: Parity) -> &BlockPartition {
        match parity {
            Parity::Odd => &self.geometry.odd,
            Parity::Even => &self.geometry.even,
        }
    }

    /// The global `τ` (the odd-block value when the two differ).
    pub fn tau(&self) -> f64 {
        self.tau_odd
    }

    pub fn parity_taus(&self) -> (f64, f64) {
        (self.tau_odd, self.tau_even)
    }

    pub fn t1(&self) -> usize {
        self.t1
    }

    pub fn kind(&self) -> BlockHamiltonian {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.geometry.lattice.size()
    }

    fn coeffs(&self, parity: Parity) -> BlockCoeffs {
        let tau = match parity {
            Parity::Odd => self.tau_odd,
            Parity::Even => self.tau_even,
        };
        BlockCoeffs::new(self.geometry.lattice.dim(), parity, self.kind, tau)
    }

    /// One `W` step in place. `scratch` is resized as needed and may be reused.
    pub fn step_in_place(&self, amps: &mut [C], scratch: &mut Vec<C>) {
        self.power_in_place(amps, scratch, 1);
    }

    /// `W^steps` in place. Between steps the amplitudes stay in block order
    /// so every block transform runs on contiguous memory.
    pub fn power_in_place(&self, amps: &mut [C], scratch: &mut Vec<C>, steps: usize) {
        debug_assert_eq!(amps.len(), self.dim());
        if steps == 0 {
            return;
        }
        let g = &*self.geometry;
        let len = g.odd.block_len();
        let odd = self.coeffs(Parity::Odd);
        let even = self.coeffs(Parity::Even);
        scratch.resize(amps.len(), ZERO);
        permute(scratch, amps, g.odd.vertices());
        for k in 0..steps {
            transform_all(scratch, len, odd, &g.odd_signs);
            permute(amps, scratch, &g.odd_to_even);
            transform_all(amps, len, even, &g.even_signs);
            if k + 1 < steps {
                permute(scratch, amps, &g.even_to_odd);
            }
        }
        permute(scratch, amps, g.even.positions());
        amps.copy_from_slice(scratch);
    }

    /// `W^{t1}` in place.
    pub fn walk_in_place(&self, amps: &mut [C], scratch: &mut Vec<C>) {
        self.power_in_place(amps, scratch, self.t1);
    }

    /// One `W` step: `U_o` then `U_e`.
    pub fn apply_w(&self, state: &StateVector) -> Result<StateVector> {
        self.apply_power(state, 1)
    }

    /// `W^{t1}`.
    pub fn apply_walk(&self, state: &StateVector) -> Result<StateVector> {
        self.apply_power(state, self.t1)
    }

    pub fn apply_power(&self, state: &StateVector, steps: usize) -> Result<StateVector> {
        ensure_same_dim(state.dim(), self.dim())?;
        let mut out = state.clone();
        let mut scratch = Vec::new();
        self.power_in_place(out.amplitudes_mut(), &mut scratch, steps);
        Ok(out)
    }

    /// `⟨0|W^{t1}|0⟩`.
    pub fn return_amplitude(&self) -> C {
        let mut amps = vec![ZERO; self.dim()];
        amps[0] = C::new(1.0, 0.0);
        let mut scratch = Vec::new();
        self.walk_in_place(&mut amps, &mut scratch);
        amps[0]
    }

    /// `⟨s|W^{t1}|s⟩`, the phase picked up by the uniform state.
    pub fn uniform_phase(&self) -> C {
        let n = self.dim();
        let s = vec![C::new(1.0 / (n as f64).sqrt(), 0.0); n];
        let mut amps = s.clone();
        let mut scratch = Vec::new();
        self.walk_in_place(&mut amps, &mut scratch);
        inner(&s, &amps)
    }

    /// `Re(⟨0|W^{t1}|0⟩·conj⟨s|W^{t1}|s⟩)`: most negative when `W^{t1}`
    /// acts on the origin like a reflection relative to the uniform mode.
    pub fn tuning_score(&self) -> f64 {
        (self.return_amplitude() * self.uniform_phase().conj()).re
    }
}

pub fn apply_w(state: &StateVector, w: &WalkOperator) -> Result<StateVector> {
    w.apply_w(state)
}

pub fn return_amplitude(w: &WalkOperator) -> C {
    w.return_amplitude()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TuneOptions {
    /// Grid points `τ_k = (π/2)·k/grid`, `k = 1..=grid`.
    pub grid: usize,
    /// Golden-section refinement around the best grid point.
    pub refine: bool,
    pub tolerance: f64,
    pub kind: BlockHamiltonian,
}

impl Default for TuneOptions {
    fn default() -> Self {
        Self {
            grid: 64,
            refine: true,
            tolerance: 1e-3,
            kind: BlockHamiltonian::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TuneResult {
    pub tau: f64,
    pub score: f64,
    pub return_amplitude: C,
}

/// Tunes `τ` with the default options and the given grid resolution.
pub fn tune_tau(lattice: &Lattice, t1: usize, grid: usize) -> Result<TuneResult> {
    tune_tau_with(
        lattice,
        t1,
        &TuneOptions {
            grid,
            ..TuneOptions::default()
        },
    )
}

pub fn tune_tau_with(lattice: &Lattice, t1: usize, opts: &TuneOptions) -> Result<TuneResult> {
    let base = WalkOperator::new(lattice, 0.0, t1)?.with_kind(opts.kind);
    tune_walk(&base, opts)
}

/// Tunes the `τ` of an existing operator, keeping its geometry, `t1` and kind.
pub fn tune_walk(base: &WalkOperator, opts: &TuneOptions) -> Result<TuneResult> {
    if opts.grid < 8 {
        return Err(Error::InvalidParameter(format!(
            "tuning grid needs at least 8 points, got {}",
            opts.grid
        )));
    }
    let base = base.clone().with_kind(opts.kind);
    let score = |tau: f64| -> f64 { base.with_tau(tau).map(|w| w.tuning_score()).unwrap_or(f64::INFINITY) };

    let step = FRAC_PI_2 / opts.grid as f64;
    let mut best_tau = step;
    let mut best = f64::INFINITY;
    for k in 1..=opts.grid {
        let tau = step * k as f64;
        let s = score(tau);
        if s < best - 1e-15 {
            best = s;
            best_tau = tau;
        }
    }

    if opts.refine {
        let lo = (best_tau - step).max(step * 1e-3);
        let hi = (best_tau + step).min(FRAC_PI_2);
        let (tau, s) = golden_section(&score, lo, hi, opts.tolerance);
        if s < best {
            best = s;
            best_tau = tau;
        }
    }

    let w = base.with_tau(best_tau)?;
    Ok(TuneResult {
        tau: best_tau,
        score: best,
        return_amplitude: w.return_amplitude(),
    })
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Eigenvalues of the walk restricted to one Bloch momentum.
#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    /// Momentum per axis, `2πm/L` with `0 ≤ m < L/2`.
    pub k: Vec<f64>,
    pub eigenvalues: Vec<C>,
}

impl Mode {
    pub fn k_norm(&self) -> f64 {
        self.k.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l.arg()).collect()
    }

    /// Smallest eigenphase measured from `reference`.
    pub fn band_phase(&self, reference: C) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| (l * reference.conj()).arg().abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Eigenphases of a translation-invariant step over all Bloch momenta of the
/// two-site unit cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSpectrum {
    pub dim: usize,
    pub side: usize,
    /// Eigenvalue of the uniform state.
    pub reference: C,
    /// Modes in lexicographic order of `m`, axis 0 fastest.
    pub modes: Vec<Mode>,
}

impl ModeSpectrum {
    /// Half the side: number of momenta per axis.
    fn per_axis(&self) -> usize {
        self.side / 2
    }

    pub fn k_zero(&self) -> &Mode {
        &self.modes[0]
    }

    /// `(|k|, band phase)` for momenta along `axis`, excluding `k = 0`.
    pub fn axis_band(&self, axis: usize) -> Vec<(f64, f64)> {
        let stride = self.per_axis().pow(axis as u32);
        (1..self.per_axis())
            .map(|m| {
                let mode = &self.modes[m * stride];
                (mode.k_norm(), mode.band_phase(self.reference))
            })
            .collect()
    }

    /// Log-log slope of band phase against `|k|` over the `count` smallest
    /// nonzero momenta along `axis`.
    pub fn small_k_exponent(&self, axis: usize, count: usize) -> Result<f64> {
        if axis >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: axis,
                dim: self.dim,
            });
        }
        let band = self.axis_band(axis);
        if count < 2 || band.len() < count {
            return Err(Error::Underdetermined {
                distinct: band.len().min(count),
            });
        }
        let pts: Vec<(f64, f64)> = band[..count].iter().map(|&(k, p)| (k.ln(), p.ln())).collect();
        Ok(slope(&pts))
    }

    /// Counts of all eigenphases in `bins` equal slices of `(−π, π]`.
    pub fn phase_histogram(&self, bins: usize) -> Vec<usize> {
        let mut out = vec![0usize; bins.max(1)];
        let width = 2.0 * std::f64::consts::PI / out.len() as f64;
        for p in self.modes.iter().flat_map(Mode::phases) {
            let i = ((p + std::f64::consts::PI) / width) as usize;
            let last = out.len() - 1;
            out[i.min(last)] += 1;
        }
        out
    }
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Dispersion of a single `W` step.
pub fn dispersion_probe(w: &WalkOperator) -> Result<ModeSpectrum> {
    let mut scratch = Vec::new();
    dispersion_probe_with(w.lattice(), |amps| w.step_in_place(amps, &mut scratch))
}

/// Dispersion of an arbitrary step that commutes with translations by two
/// sites along every axis.
pub fn dispersion_probe_with(lattice: &Lattice, mut step: impl FnMut(&mut [C])) -> Result<ModeSpectrum> {
    let n = lattice.size();
    if n > PROBE_LIMIT {
        return Err(Error::InfeasibleSize {
            size: n,
            cap: PROBE_LIMIT,
        });
    }
    let d = lattice.dim();
    let side = lattice.side();
    let cell = 1usize << d;
    let half = side / 2;

    let uniform = vec![C::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut image = uniform.clone();
    step(&mut image);
    let reference = inner(&uniform, &image);

    // Sparse columns: (row sublattice, cell displacement, amplitude).
    let mut columns: Vec<Vec<(usize, Vec<usize>, C)>> = Vec::with_capacity(cell);
    for sigma in 0..cell {
        let mut amps = vec![ZERO; n];
        let origin: Vec<usize> = (0..d).map(|j| (sigma >> j) & 1).collect();
        amps[lattice.index(&origin)?] = C::new(1.0, 0.0);
        step(&mut amps);
        let mut col = Vec::new();
        for (x, a) in amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let coords = lattice.coords(x)?;
            let sub = coords.iter().enumerate().map(|(j, c)| (c & 1) << j).sum();
            let disp = coords.iter().map(|c| c & !1).collect();
            col.push((sub, disp, *a));
        }
        columns.push(col);
    }

    let n_modes = half.pow(d as u32);
    let unit = 2.0 * std::f64::consts::PI / side as f64;
    let mut modes = Vec::with_capacity(n_modes);
    for mi in 0..n_modes {
        let mut rest = mi;
        let k: Vec<f64> = (0..d)
            .map(|_| {
                let m = rest % half;
                rest /= half;
                unit * m as f64
            })
            .collect();
        let mut mat = DMatrix::from_element(cell, cell, ZERO);
        for (sigma, col) in columns.iter().enumerate() {
            for (sub, disp, a) in col {
                let phase: f64 = k.iter().zip(disp).map(|(kj, &r)| kj * r as f64).sum();
                mat[(*sub, sigma)] += a * C::from_polar(1.0, -phase);
            }
        }
        let eigenvalues = eigenvalues(mat)?;
        modes.push(Mode { k, eigenvalues });
    }

    Ok(ModeSpectrum {
        dim: d,
        side,
        reference,
        modes,
    })
}

fn eigenvalues(mat: DMatrix<C>) -> Result<Vec<C>> {
    let n = mat.nrows();
    if n == 1 {
        return Ok(vec![mat[(0, 0)]]);
    }
    mat.schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .ok_or_else(|| Error::InvalidParameter("mode matrix did not converge to Schur form".into()))
}
