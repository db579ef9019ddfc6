use crate::error::{Error, Result};

/// Least-squares fit of `y = a + b/x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub residual_rms: f64,
    pub points_used: usize,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.a + self.b / x
    }
}

/// Unweighted least squares of `ys` against `(1, 1/xs)`.
pub fn fit_inverse(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if let Some(&x) = xs.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidParameter(format!("abscissa {x} must be positive")));
    }
    if let Some(&y) = ys.iter().find(|y| !y.is_finite()) {
        return Err(Error::InvalidParameter(format!("ordinate {y} must be finite")));
    }
    let mut distinct = xs.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Underdetermined {
            distinct: distinct.len(),
        });
    }

    let n = xs.len() as f64;
    let us: Vec<f64> = xs.iter().map(|x| 1.0 / x).collect();
    let mu = us.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let suu: f64 = us.iter().map(|u| (u - mu).powi(2)).sum();
    let suy: f64 = us.iter().zip(ys).map(|(u, y)| (u - mu) * (y - my)).sum();
    let b = suy / suu;
    let a = my - b * mu;
    let sse: f64 = us.iter().zip(ys).map(|(u, y)| (y - a - b * u).powi(2)).sum();
    Ok(FitResult {
        a,
        b,
        residual_rms: (sse / n).sqrt(),
        points_used: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_recovery() {
        let f = fit_inverse(&[1.0, 2.0, 4.0], &[5.0, 3.5, 2.75]).unwrap();
        assert!((f.a - 2.0).abs() < 1e-12);
        assert!((f.b - 3.0).abs() < 1e-12);
        assert!(f.residual_rms < 1e-12);
        assert_eq!(f.points_used, 3);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            fit_inverse(&[3.0, 3.0, 3.0], &[1.0, 2.0, 3.0]),
            Err(Error::Underdetermined { distinct: 1 })
        ));
        assert!(fit_inverse(&[], &[]).is_err());
        assert!(fit_inverse(&[1.0, 2.0], &[1.0]).is_err());
        assert!(fit_inverse(&[0.0, 2.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn noisy_recovery() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (3..=12).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.8 + 1.6 / x + rng.gen_range(-0.01..0.01)).collect();
        let f = fit_inverse(&xs, &ys).unwrap();
        assert!((f.a - 0.8).abs() < 0.02, "{f:?}");
    }
}
