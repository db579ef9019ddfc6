//! Dense complex state vectors and matrix-free reflections.
//!
//! States are indexed by item label, not by qubit register. Every unitary
//! helper here preserves the norm; a drift beyond [`NORM_TOLERANCE`] is
//! reported through [`StateVector::check_norm`] and never corrected.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Allowed deviation of `Σ|a_i|²` from one.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The uniform superposition `|s⟩` with every amplitude `1/√N`.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self { amps: vec![a; dim] })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Wraps raw amplitudes, rejecting vectors that are not unit length.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let state = Self { amps };
        state.check_norm()?;
        Ok(state)
    }

    /// Normalizes arbitrary nonzero amplitudes. Intended for building test
    /// and start vectors, not for repairing evolved states.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amps.is_empty() || norm == 0.0 {
            return Err(Error::InvalidDimension(amps.len()));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { amps })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Mutable access for unitary kernels. Callers own the norm invariant.
    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_norm(&self) -> Result<()> {
        let drift = (self.norm_sqr() - 1.0).abs();
        if drift > NORM_TOLERANCE {
            return Err(Error::NormDrift {
                drift,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(())
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        ensure_same_dim(self.dim(), other.dim())?;
        Ok(inner(&self.amps, &other.amps))
    }

    pub fn probability_at(&self, index: usize) -> Result<f64> {
        self.amps
            .get(index)
            .map(|a| a.norm_sqr())
            .ok_or(Error::IndexOutOfRange {
                index,
                dim: self.dim(),
            })
    }
}

/// Overall sign of a reflection, so that `−U_s` is representable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `sign · (1 − 2|p⟩⟨p|)` for a unit axis `p`, applied as a rank-1 update.
#[derive(Clone, Debug, PartialEq)]
pub struct Reflection {
    axis: StateVector,
    sign: Sign,
}

impl Reflection {
    pub fn new(axis: StateVector, sign: Sign) -> Self {
        Self { axis, sign }
    }

    /// `1 − 2|p⟩⟨p|`.
    pub fn about(axis: StateVector) -> Self {
        Self::new(axis, Sign::Plus)
    }

    /// `−(1 − 2|p⟩⟨p|)`, the "inversion about the mean" when `p = |s⟩`.
    pub fn negated(axis: StateVector) -> Self {
        Self::new(axis, Sign::Minus)
    }

    pub fn axis(&self) -> &StateVector {
        &self.axis
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn apply_in_place(&self, v: &mut [Complex64]) -> Result<()> {
        ensure_same_dim(self.axis.dim(), v.len())?;
        let p = self.axis.amplitudes();
        let c = 2.0 * inner(p, v);
        let sign = self.sign.factor();
        for (vi, pi) in v.iter_mut().zip(p) {
            *vi = sign * (*vi - c * pi);
        }
        Ok(())
    }
}

pub fn uniform_state(dim: usize) -> Result<StateVector> {
    StateVector::uniform(dim)
}

pub fn basis_state(dim: usize, index: usize) -> Result<StateVector> {
    StateVector::basis(dim, index)
}

pub fn overlap(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.overlap(b)
}

pub fn apply_reflection(r: &Reflection, v: &StateVector) -> Result<StateVector> {
    let mut out = v.clone();
    r.apply_in_place(out.amplitudes_mut())?;
    Ok(out)
}

pub fn probability_at(v: &StateVector, index: usize) -> Result<f64> {
    v.probability_at(index)
}

/// `Σ conj(a_i)·b_i` over raw slices of equal length.
#[inline]
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn ensure_same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_amps(v: &StateVector, expected: &[f64], tol: f64) {
        assert_eq!(v.dim(), expected.len());
        for (a, e) in v.amplitudes().iter().zip(expected) {
            assert!((a - c(*e)).norm() < tol, "{a} vs {e}");
        }
    }

    #[test]
    fn uniform_small_cases() {
        assert_amps(&uniform_state(4).unwrap(), &[0.5; 4], 1e-15);
        assert_amps(&uniform_state(1).unwrap(), &[1.0], 1e-15);
        assert!(matches!(uniform_state(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn uniform_large_is_normalized() {
        let s = uniform_state(1 << 20).unwrap();
        assert!(s.amplitudes().iter().all(|a| *a == c(1.0 / 1024.0)));
        let total: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-10);
        s.check_norm().unwrap();
    }

    #[test]
    fn basis_states() {
        assert_amps(&basis_state(4, 0).unwrap(), &[1.0, 0.0, 0.0, 0.0], 1e-15);
        assert_amps(&basis_state(2, 1).unwrap(), &[0.0, 1.0], 1e-15);
        assert!(matches!(
            basis_state(4, 4),
            Err(Error::IndexOutOfRange { index: 4, dim: 4 })
        ));
        let ov = overlap(&basis_state(8, 3).unwrap(), &uniform_state(8).unwrap()).unwrap();
        assert!((ov - c(1.0 / 8f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn overlaps() {
        let t = basis_state(4, 0).unwrap();
        let s = uniform_state(4).unwrap();
        assert!((overlap(&t, &s).unwrap() - c(0.5)).norm() < 1e-15);
        assert!((overlap(&s, &s).unwrap() - c(1.0)).norm() < 1e-15);
        let b1 = basis_state(4, 1).unwrap();
        assert_eq!(overlap(&t, &b1).unwrap(), c(0.0));
        assert!(matches!(
            overlap(&t, &uniform_state(3).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn four_item_trace() {
        let s = uniform_state(4).unwrap();
        let ut = Reflection::about(basis_state(4, 0).unwrap());
        let flipped = apply_reflection(&ut, &s).unwrap();
        assert_amps(&flipped, &[-0.5, 0.5, 0.5, 0.5], 1e-15);
        let us = Reflection::negated(s.clone());
        let found = apply_reflection(&us, &flipped).unwrap();
        assert_amps(&found, &[1.0, 0.0, 0.0, 0.0], 1e-15);
        let back = apply_reflection(&ut, &flipped).unwrap();
        assert_amps(&back, &[0.5; 4], 1e-15);
    }

    #[test]
    fn reflection_dimension_mismatch() {
        let r = Reflection::about(basis_state(4, 0).unwrap());
        assert!(apply_reflection(&r, &uniform_state(5).unwrap()).is_err());
    }

    #[test]
    fn probabilities() {
        let s = uniform_state(4).unwrap();
        for i in 0..4 {
            assert!((probability_at(&s, i).unwrap() - 0.25).abs() < 1e-15);
        }
        let b = basis_state(8, 3).unwrap();
        assert_eq!(probability_at(&b, 3).unwrap(), 1.0);
        assert_eq!(probability_at(&b, 0).unwrap(), 0.0);
        assert!(probability_at(&b, 8).is_err());
    }

    #[test]
    fn from_amplitudes_rejects_unnormalized() {
        assert!(StateVector::from_amplitudes(vec![c(1.0), c(1.0)]).is_err());
        assert!(StateVector::from_amplitudes(vec![]).is_err());
        assert!(StateVector::from_amplitudes(vec![c(0.6), Complex64::new(0.0, 0.8)]).is_ok());
    }

    #[test]
    fn norm_drift_is_reported() {
        let mut s = uniform_state(4).unwrap();
        s.amplitudes_mut()[0] *= 1.0 + 1e-6;
        assert!(matches!(s.check_norm(), Err(Error::NormDrift { .. })));
    }
}
