//! Grover database search: exact state-vector dynamics and closed forms.
//!
//! The iteration `𝒢 = −U_s·U_t` rotates the state by `2θ` per query inside
//! span{|s⟩, |t⟩}, with `sin θ = √(M/N)`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{ensure_same_dim, inner, Reflection, StateVector};

/// Consecutive query counts whose success differs by less than this are ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Largest dimension accepted for dense unitaries.
pub const DENSE_LIMIT: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleParams {
    pub theta: f64,
    pub per_query_rotation: f64,
}

impl AngleParams {
    pub fn new(size: usize, marked: usize) -> Result<Self> {
        check_counts(size, marked)?;
        Ok(Self::from_theta((marked as f64 / size as f64).sqrt().asin()))
    }

    pub fn from_theta(theta: f64) -> Self {
        Self {
            theta,
            per_query_rotation: 2.0 * theta,
        }
    }

    /// `sin²((2q+1)θ)`.
    pub fn success_after(&self, queries: usize) -> f64 {
        ((2 * queries + 1) as f64 * self.theta).sin().powi(2)
    }

    /// Smallest `q` maximizing `sin²((2q+1)θ)` over the first approach to π/2.
    pub fn optimal_queries(&self) -> (usize, f64) {
        let ideal = FRAC_PI_2 / (2.0 * self.theta) - 0.5;
        let lo = ideal.floor().max(0.0) as usize;
        let (p_lo, p_hi) = (self.success_after(lo), self.success_after(lo + 1));
        if ideal <= 0.0 || p_lo >= p_hi - TIE_TOLERANCE {
            (lo, p_lo)
        } else {
            (lo + 1, p_hi)
        }
    }
}

/// Validated, sorted set of marked indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSet {
    size: usize,
    indices: Vec<usize>,
}

impl MarkedSet {
    pub fn new(size: usize, indices: &[usize]) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidDimension(size));
        }
        if indices.is_empty() {
            return Err(Error::EmptyMarkedSet);
        }
        let mut indices = indices.to_vec();
        indices.sort_unstable();
        indices.dedup();
        if let Some(&index) = indices.iter().find(|&&i| i >= size) {
            return Err(Error::IndexOutOfRange { index, dim: size });
        }
        Ok(Self { size, indices })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `U_t`: sign flip on every marked amplitude.
    pub fn flip(&self, v: &mut [Complex64]) {
        for &i in &self.indices {
            v[i] = -v[i];
        }
    }

    pub fn probability(&self, v: &[Complex64]) -> f64 {
        self.indices.iter().map(|&i| v[i].norm_sqr()).sum()
    }
}

/// Reusable Grover iteration for one database size and marked set.
#[derive(Clone, Debug)]
pub struct GroverOperator {
    marked: MarkedSet,
    diffusion: Reflection,
}

impl GroverOperator {
    pub fn new(marked: MarkedSet) -> Result<Self> {
        let diffusion = Reflection::negated(StateVector::uniform(marked.size())?);
        Ok(Self { marked, diffusion })
    }

    pub fn marked(&self) -> &MarkedSet {
        &self.marked
    }

    pub fn apply(&self, v: &mut [Complex64]) -> Result<()> {
        ensure_same_dim(self.marked.size(), v.len())?;
        self.marked.flip(v);
        self.diffusion.apply_in_place(v)
    }
}

/// One application of `−U_s U_t`.
pub fn grover_iterate(state: &StateVector, marked: &[usize]) -> Result<StateVector> {
    let op = GroverOperator::new(MarkedSet::new(state.dim(), marked)?)?;
    let mut out = state.clone();
    op.apply(out.amplitudes_mut())?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverRun {
    pub size: usize,
    pub marked: Vec<usize>,
    pub q_performed: usize,
    /// `(iteration, success probability)`, starting at iteration 0.
    pub trace: Vec<(usize, f64)>,
    pub final_state: StateVector,
}

/// Runs `queries` Grover iterations from the uniform state, tracing the
/// marked-set probability after each.
pub fn run_grover(size: usize, marked: &[usize], queries: usize) -> Result<GroverRun> {
    let op = GroverOperator::new(MarkedSet::new(size, marked)?)?;
    let mut state = StateVector::uniform(size)?;
    let mut trace = Vec::with_capacity(queries + 1);
    trace.push((0, op.marked().probability(state.amplitudes())));
    for q in 1..=queries {
        op.apply(state.amplitudes_mut())?;
        trace.push((q, op.marked().probability(state.amplitudes())));
    }
    state.check_norm()?;
    Ok(GroverRun {
        size,
        marked: op.marked().indices().to_vec(),
        q_performed: queries,
        trace,
        final_state: state,
    })
}

pub fn optimal_queries(size: usize, marked: usize) -> Result<(usize, f64)> {
    Ok(AngleParams::new(size, marked)?.optimal_queries())
}

pub fn success_probability(size: usize, marked: usize, queries: usize) -> Result<f64> {
    Ok(AngleParams::new(size, marked)?.success_after(queries))
}

/// Database size for which `Q` queries succeed exactly:
/// `N = 1 / sin²(π / (2(2Q+1)))`.
pub fn solve_n_for_q(queries: usize) -> Result<f64> {
    if queries == 0 {
        return Err(Error::InvalidParameter(
            "Q = 0 is the degenerate N = 1 case".into(),
        ));
    }
    let x = PI / (2.0 * (2 * queries + 1) as f64);
    Ok(1.0 / x.sin().powi(2))
}

/// An eigenvalue of the Grover rotation with its eigenvector in the
/// `(|t⟩, |t⊥⟩)` basis, where `|t⊥⟩` is the normalized part of `|s⟩`
/// orthogonal to `|t⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenpair {
    pub value: Complex64,
    pub vector: [Complex64; 2],
}

pub fn rotation_eigenpairs(size: usize) -> Result<[Eigenpair; 2]> {
    if size < 2 {
        return Err(Error::InvalidDimension(size));
    }
    let theta = AngleParams::new(size, 1)?.theta;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one = Complex64::new(h, 0.0);
    let i = Complex64::new(0.0, h);
    Ok([
        Eigenpair {
            value: Complex64::from_polar(1.0, 2.0 * theta),
            vector: [one, i],
        },
        Eigenpair {
            value: Complex64::from_polar(1.0, -2.0 * theta),
            vector: [one, -i],
        },
    ])
}

/// Mean success when stopping uniformly at random in
/// `0..⌈π/θ⌉`, one full rotation of the state.
pub fn random_stopping_mean(size: usize, samples: usize, seed: u64) -> Result<f64> {
    if size < 2 {
        return Err(Error::InvalidDimension(size));
    }
    let angles = AngleParams::new(size, 1)?;
    let window = (PI / angles.theta).ceil() as usize;
    random_stopping_mean_in(size, 0..window, samples, seed)
}

/// Same as [`random_stopping_mean`] with an explicit stopping window.
pub fn random_stopping_mean_in(
    size: usize,
    window: std::ops::Range<usize>,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 || window.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one sample and a nonempty window".into(),
        ));
    }
    let angles = AngleParams::new(size, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: f64 = (0..samples)
        .map(|_| angles.success_after(rng.gen_range(window.clone())))
        .sum();
    Ok(total / samples as f64)
}

/// A unitary given either densely or as a `(V, V†)` pair of actions.
pub trait UnitaryTransform {
    fn dim(&self) -> usize;
    fn apply(&self, v: &mut [Complex64]);
    fn apply_adjoint(&self, v: &mut [Complex64]);
}

#[derive(Clone, Debug)]
pub struct DenseUnitary {
    matrix: DMatrix<Complex64>,
    adjoint: DMatrix<Complex64>,
}

impl DenseUnitary {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || n != matrix.ncols() {
            return Err(Error::InvalidParameter("matrix must be square".into()));
        }
        if n > DENSE_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "dense unitaries are limited to N ≤ {DENSE_LIMIT}"
            )));
        }
        let adjoint = matrix.adjoint();
        let defect = (&adjoint * &matrix - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "matrix is not unitary (defect {defect:.2e})"
            )));
        }
        Ok(Self { matrix, adjoint })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

fn dense_apply(m: &DMatrix<Complex64>, v: &mut [Complex64]) {
    let out: Vec<Complex64> = (0..m.nrows())
        .map(|r| m.row(r).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
        .collect();
    v.copy_from_slice(&out);
}

impl UnitaryTransform for DenseUnitary {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply(&self, v: &mut [Complex64]) {
        dense_apply(&self.matrix, v);
    }

    fn apply_adjoint(&self, v: &mut [Complex64]) {
        dense_apply(&self.adjoint, v);
    }
}

/// A transform defined by a pair of in-place actions. The caller guarantees
/// that `adjoint` inverts `forward`.
pub struct FnTransform<F, G> {
    dim: usize,
    forward: F,
    adjoint: G,
}

impl<F, G> FnTransform<F, G>
where
    F: Fn(&mut [Complex64]),
    G: Fn(&mut [Complex64]),
{
    pub fn new(dim: usize, forward: F, adjoint: G) -> Self {
        Self {
            dim,
            forward,
            adjoint,
        }
    }
}

impl<F, G> UnitaryTransform for FnTransform<F, G>
where
    F: Fn(&mut [Complex64]),
    G: Fn(&mut [Complex64]),
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &mut [Complex64]) {
        (self.forward)(v)
    }

    fn apply_adjoint(&self, v: &mut [Complex64]) {
        (self.adjoint)(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Amplification {
    pub queries: usize,
    pub predicted_success: f64,
    pub measured_success: f64,
    pub final_state: StateVector,
}

/// Amplitude amplification: starts from `V|s⟩` and iterates
/// `−(V U_s V†) U_t`, with the query count fixed by `sin θ = |⟨t|V|s⟩|`.
///
/// With `V = 1` and a uniform `start` this is plain Grover search.
pub fn amplitude_amplify(
    transform: &dyn UnitaryTransform,
    start: &StateVector,
    t_index: usize,
) -> Result<Amplification> {
    let n = transform.dim();
    ensure_same_dim(n, start.dim())?;
    if t_index >= n {
        return Err(Error::IndexOutOfRange { index: t_index, dim: n });
    }
    let mut state = start.amplitudes().to_vec();
    transform.apply(&mut state);
    let amp = state[t_index].norm();
    if amp < 1e-14 {
        return Err(Error::NoAmplification);
    }
    let angles = AngleParams::from_theta(amp.min(1.0).asin());
    let (queries, predicted_success) = angles.optimal_queries();

    let start_reflection = Reflection::about(start.clone());
    for _ in 0..queries {
        state[t_index] = -state[t_index];
        transform.apply_adjoint(&mut state);
        start_reflection.apply_in_place(&mut state)?;
        transform.apply(&mut state);
        state.iter_mut().for_each(|a| *a = -*a);
    }
    let final_state = StateVector::from_amplitudes(state)?;
    Ok(Amplification {
        queries,
        predicted_success,
        measured_success: final_state.amplitudes()[t_index].norm_sqr(),
        final_state,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorizedSearch {
    pub queries: usize,
    pub found: usize,
}

/// Locates `target` in a database of `4^n` items by one exact 4-item search
/// per base-4 digit of its label.
pub fn factorized_search(size: usize, target: usize) -> Result<FactorizedSearch> {
    let digits = log4_exact(size).ok_or(Error::NotPowerOfFour(size))?;
    if target >= size {
        return Err(Error::IndexOutOfRange {
            index: target,
            dim: size,
        });
    }
    let mut found = 0;
    let mut queries = 0;
    let mut place = 1;
    let mut rest = target;
    for _ in 0..digits {
        let digit = rest % 4;
        rest /= 4;
        let run = run_grover(4, &[digit], 1)?;
        queries += run.q_performed;
        let amps = run.final_state.amplitudes();
        let measured = (0..4)
            .max_by(|&a, &b| amps[a].norm_sqr().total_cmp(&amps[b].norm_sqr()))
            .unwrap_or(0);
        found += measured * place;
        place *= 4;
    }
    Ok(FactorizedSearch { queries, found })
}

fn log4_exact(size: usize) -> Option<usize> {
    if size == 0 || !size.is_power_of_two() || !size.trailing_zeros().is_multiple_of(2) {
        return None;
    }
    Some(size.trailing_zeros() as usize / 2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalBaselines {
    /// `⌈log₂ N⌉`; exact binary search when `N` is a power of two.
    pub binary_sorted: u32,
    pub binary_exact: bool,
    pub unsorted_mean_with_memory: f64,
    pub unsorted_mean_memoryless: f64,
}

pub fn classical_baselines(size: usize) -> Result<ClassicalBaselines> {
    if size == 0 {
        return Err(Error::InvalidDimension(size));
    }
    Ok(ClassicalBaselines {
        binary_sorted: size.next_power_of_two().trailing_zeros(),
        binary_exact: size.is_power_of_two(),
        unsorted_mean_with_memory: (size as f64 + 1.0) / 2.0,
        unsorted_mean_memoryless: size as f64,
    })
}

/// Component of `v` outside span{|s⟩, |t⟩} for a single marked index.
pub fn subspace_leakage(v: &[Complex64], marked: usize) -> Result<f64> {
    let n = v.len();
    if marked >= n {
        return Err(Error::IndexOutOfRange { index: marked, dim: n });
    }
    let s = StateVector::uniform(n)?;
    let t = StateVector::basis(n, marked)?;
    // Orthonormal basis {t, t⊥} of the plane.
    let mut perp = s.into_amplitudes();
    let st = perp[marked];
    perp[marked] -= st;
    let norm = perp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let in_plane = if norm > 0.0 {
        perp.iter_mut().for_each(|a| *a /= norm);
        v[marked].norm_sqr() + inner(&perp, v).norm_sqr()
    } else {
        inner(t.amplitudes(), v).norm_sqr()
    };
    let total: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    Ok((total - in_plane).max(0.0).sqrt())
}

fn check_counts(size: usize, marked: usize) -> Result<()> {
    if size == 0 {
        return Err(Error::InvalidDimension(size));
    }
    if marked == 0 || marked > size {
        return Err(Error::InvalidMarkedCount { marked, size });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_items_one_query() {
        let s = StateVector::uniform(4).unwrap();
        let out = grover_iterate(&s, &[0]).unwrap();
        assert!((out.amplitudes()[0] - 1.0).norm() < 1e-12);
        assert_eq!(optimal_queries(4, 1).unwrap().0, 1);
        assert!((optimal_queries(4, 1).unwrap().1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_marked_is_already_solved() {
        let marked: Vec<usize> = (0..16).collect();
        let run = run_grover(16, &marked, 2).unwrap();
        assert!(run.trace.iter().all(|&(_, p)| (p - 1.0).abs() < 1e-12));
        assert_eq!(optimal_queries(16, 16).unwrap(), (0, 1.0));
    }

    #[test]
    fn eight_items_one_iteration() {
        let run = run_grover(8, &[5], 1).unwrap();
        let expected = (3.0 * (1.0 / 8f64.sqrt()).asin()).sin().powi(2);
        assert!((run.trace[1].1 - expected).abs() < 1e-12);
        assert!((run.trace[1].1 - 0.78125).abs() < 1e-12);
    }

    #[test]
    fn optimal_query_examples() {
        assert_eq!(optimal_queries(1, 1).unwrap(), (0, 1.0));
        let (q, p) = optimal_queries(100, 1).unwrap();
        assert_eq!(q, 7);
        assert!((p - 0.995344).abs() < 1e-6);
        let (q, p) = optimal_queries(16, 4).unwrap();
        assert_eq!(q, 1);
        assert!((p - 1.0).abs() < 1e-12);
        assert!(optimal_queries(4, 0).is_err());
        assert!(optimal_queries(4, 5).is_err());
    }

    #[test]
    fn exact_sizes() {
        assert!((solve_n_for_q(1).unwrap() - 4.0).abs() < 1e-12);
        assert!((solve_n_for_q(2).unwrap() - 10.47).abs() < 0.01);
        assert!((solve_n_for_q(3).unwrap() - 20.20).abs() < 0.01);
        assert!(solve_n_for_q(0).is_err());
    }

    #[test]
    fn closed_form_success() {
        assert!((success_probability(4, 1, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!((success_probability(10, 3, 0).unwrap() - 0.3).abs() < 1e-12);
        assert!((success_probability(8, 1, 2).unwrap() - 0.9453).abs() < 1e-4);
    }

    #[test]
    fn eigenpairs_small() {
        let pairs = rotation_eigenpairs(4).unwrap();
        assert!((pairs[0].value - Complex64::from_polar(1.0, PI / 3.0)).norm() < 1e-12);
        assert!((pairs[1].value - Complex64::from_polar(1.0, -PI / 3.0)).norm() < 1e-12);
        let big = rotation_eigenpairs(1 << 40).unwrap();
        assert!((big[0].value - 1.0).norm() < 1e-5);
        assert!(rotation_eigenpairs(1).is_err());
    }

    #[test]
    fn stopping_statistics() {
        let always_one = random_stopping_mean_in(4, 1..2, 100, 7).unwrap();
        assert!((always_one - 1.0).abs() < 1e-12);
        for (size, tol) in [(1024, 1e-2), (1 << 20, 1e-3)] {
            let theta = AngleParams::new(size, 1).unwrap();
            let window = (PI / theta.theta).ceil() as usize;
            let avg = (0..window).map(|q| theta.success_after(q)).sum::<f64>() / window as f64;
            assert!((avg - 0.5).abs() < tol, "{size}: {avg}");
        }
        assert!(random_stopping_mean(1, 10, 0).is_err());
    }

    #[test]
    fn amplification_with_identity_is_grover() {
        let n = 32;
        let id = FnTransform::new(n, |_v: &mut [Complex64]| {}, |_v: &mut [Complex64]| {});
        let amp = amplitude_amplify(&id, &StateVector::uniform(n).unwrap(), 9).unwrap();
        let plain = run_grover(n, &[9], amp.queries).unwrap();
        assert_eq!(amp.queries, optimal_queries(n, 1).unwrap().0);
        for (a, b) in amp
            .final_state
            .amplitudes()
            .iter()
            .zip(plain.final_state.amplitudes())
        {
            assert!((a - b).norm() < 1e-12);
        }
        let basis = StateVector::basis(n, 3).unwrap();
        assert!(matches!(
            amplitude_amplify(&id, &basis, 4),
            Err(Error::NoAmplification)
        ));
    }

    #[test]
    fn factorized_examples() {
        assert_eq!(
            factorized_search(16, 11).unwrap(),
            FactorizedSearch { queries: 2, found: 11 }
        );
        assert_eq!(factorized_search(4, 2).unwrap().queries, 1);
        assert_eq!(factorized_search(4096, 1234).unwrap().queries, 6);
        assert_eq!(factorized_search(4096, 1234).unwrap().found, 1234);
        assert!(matches!(factorized_search(8, 1), Err(Error::NotPowerOfFour(8))));
        assert!(factorized_search(16, 16).is_err());
    }

    #[test]
    fn baselines() {
        let b = classical_baselines(1024).unwrap();
        assert_eq!(b.binary_sorted, 10);
        assert_eq!(b.unsorted_mean_with_memory, 512.5);
        assert_eq!(b.unsorted_mean_memoryless, 1024.0);
        let b = classical_baselines(1).unwrap();
        assert_eq!((b.binary_sorted, b.unsorted_mean_with_memory), (0, 1.0));
        let b = classical_baselines(4).unwrap();
        assert_eq!((b.binary_sorted, b.unsorted_mean_with_memory), (2, 2.5));
        let b = classical_baselines(5).unwrap();
        assert!(!b.binary_exact);
        assert_eq!(b.binary_sorted, 3);
    }

    #[test]
    fn marked_set_validation() {
        assert!(matches!(MarkedSet::new(4, &[]), Err(Error::EmptyMarkedSet)));
        assert!(MarkedSet::new(4, &[4]).is_err());
        assert_eq!(MarkedSet::new(4, &[2, 1, 2]).unwrap().indices(), &[1, 2]);
        assert!(grover_iterate(&StateVector::uniform(4).unwrap(), &[]).is_err());
    }
}
