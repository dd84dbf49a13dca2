use std::f64::consts::PI;

use largeface_core::sampling::{derive_stream, sample_stable_jumps};
use largeface_core::theory::{gamma, stable_face_constant};
use rand::Rng;
use rand_distr::{Distribution, Exp1};

const SEED: u64 = 42;
const SECOND_SEED: u64 = 43;

// Kanter's representation of the positive stable law with Laplace transform
// exp(-λ^γ): ((A(U)/E)^{(1-γ)/γ}), U uniform, E exponential.
fn kanter<R: Rng>(g: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let e: f64 = Exp1.sample(rng);
    let a =
        ((g * PI * u).sin() / (PI * u).sin()).powf(1.0 / (1.0 - g)) * ((1.0 - g) * PI * u).sin() / (g * PI * u).sin();
    (a / e).powf((1.0 - g) / g)
}

fn two_sample_ks(mut xs: Vec<f64>, mut ys: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < xs.len() && j < ys.len() {
        if xs[i] <= ys[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / xs.len() as f64 - j as f64 / ys.len() as f64).abs());
    }
    d
}

#[test]
fn total_jump_mass_has_the_stable_law() {
    let m = 20_000;
    for beta in [1.2, 1.5, 1.8] {
        let ours: Vec<f64> =
            (0..m).map(|i| sample_stable_jumps(beta, 1e-6, derive_stream(SEED, i)).unwrap().t1).collect();
        let mut rng = derive_stream(SECOND_SEED, 0).rng();
        let exact: Vec<f64> = (0..m).map(|_| kanter(1.0 / beta, &mut rng)).collect();
        let d = two_sample_ks(ours, exact);
        // 1% critical value is 1.63 sqrt(2/m) ≈ 0.0163.
        assert!(d < 0.02, "β={beta}: two-sample KS {d}");
    }
}

// The largest-jump Mecke identity gives E min(T-Δ, Δ) in closed form; the
// direct estimator has infinite variance, hence the loose tolerance.
#[test]
fn large_face_constant_matches_palm_identity() {
    let beta: f64 = 1.5;
    let g = 1.0 / beta;
    let q = 1.0 - g;
    let c = g / gamma(1.0 - g);
    let t_q = gamma(2.0 - beta) / gamma(g);
    let d_q = gamma(1.0 - g).powf(-(beta - 1.0)) * gamma(2.0 - beta);
    let oracle = 2.0 * PI * (beta - 1.0) / gamma(2.0 - beta) * c * ((t_q - d_q) / q + t_q / g);
    let est = stable_face_constant(beta, 100_000, 1e-6, SEED).unwrap();
    assert!((est.mean / oracle - 1.0).abs() < 0.1, "{} vs {oracle}", est.mean);
}
