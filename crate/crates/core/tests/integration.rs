use std::process::Command;

use nalgebra::DMatrix;
use qsearch::grover::{amplitude_amplify, optimal_queries, DenseUnitary, FnTransform};
use qsearch::lattice::make_lattice;
use qsearch::walk::{tune_tau, WalkOperator};
use qsearch::{Complex64 as C, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn walsh_hadamard(v: &mut [C]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
    let s = 1.0 / (n as f64).sqrt();
    v.iter_mut().for_each(|x| *x *= s);
}

#[test]
fn uniform_builder_reproduces_grover() {
    let n = 64;
    let v = FnTransform::new(n, walsh_hadamard, walsh_hadamard);
    let start = StateVector::basis(n, 0).unwrap();
    for target in [0, 17, 63] {
        let amp = amplitude_amplify(&v, &start, target).unwrap();
        let (q, p) = optimal_queries(n, 1).unwrap();
        assert_eq!(amp.queries, q);
        assert!((amp.measured_success - p).abs() < 1e-9);
    }
}

fn random_unitary(n: usize, seed: u64) -> DMatrix<C> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(n, n, |_, _| {
        C::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    });
    g.qr().q()
}

#[test]
fn random_unitary_matches_closed_form() {
    for seed in 0..5 {
        let u = DenseUnitary::new(random_unitary(16, seed)).unwrap();
        let start = StateVector::basis(16, 3).unwrap();
        let amp = amplitude_amplify(&u, &start, 11).unwrap();
        assert!((amp.measured_success - amp.predicted_success).abs() < 1e-9);
        assert!(amp.measured_success > 0.5);
    }
}

#[test]
fn walker_spreads_linearly() {
    let side = 1024;
    let lat = make_lattice(1, side).unwrap();
    let tau = tune_tau(&lat, 3, 64).unwrap().tau;
    let w = WalkOperator::new(&lat, tau, 1).unwrap();
    let src = side / 2;
    let mut v = StateVector::basis(side, src).unwrap().into_amplitudes();
    let mut scratch = Vec::new();
    let (mut ts, mut sigmas) = (Vec::new(), Vec::new());
    for t in 1..=256 {
        w.step_in_place(&mut v, &mut scratch);
        if t >= 64 && t % 8 == 0 {
            let (mut m1, mut m2) = (0.0, 0.0);
            for (x, a) in v.iter().enumerate() {
                let dx = x as f64 - src as f64;
                m1 += a.norm_sqr() * dx;
                m2 += a.norm_sqr() * dx * dx;
            }
            ts.push(t as f64);
            sigmas.push((m2 - m1 * m1).sqrt());
        }
    }
    let n = ts.len() as f64;
    let (mt, ms) = (ts.iter().sum::<f64>() / n, sigmas.iter().sum::<f64>() / n);
    let sxy: f64 = ts.iter().zip(&sigmas).map(|(t, s)| (t - mt) * (s - ms)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    let syy: f64 = sigmas.iter().map(|s| (s - ms).powi(2)).sum();
    let r2 = sxy * sxy / (sxx * syy);
    assert!(r2 > 0.99, "R² = {r2}");
    assert!(sxy / sxx > 0.1);
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qsearch"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn cli_exit_codes() {
    let (code, out) = cli(&["grover", "--n", "4", "--marked", "0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("N,M,Q,success\n4,1,1,1"));
    assert_eq!(cli(&["spatial", "--d", "2", "--l", "3"]).0, 1);
    assert_eq!(cli(&["nonsense"]).0, 1);
    assert_eq!(cli(&["--max-n", "100", "spatial", "--d", "3", "--l", "8"]).0, 3);
}

#[test]
fn cli_table_csv() {
    let (code, out) = cli(&["table", "--ns", "4,1024", "--csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
}
