//! Closed forms, special functions and quadrature.

pub mod brownian;
pub mod constants;
pub mod quad;
pub mod renewal;
pub mod special;
pub mod stable;

pub use brownian::{
    brownian_longest_chord_cdf, g1, g1_integral, m_brownian, m_by_quadrature, phi_brownian, phi_by_quadrature,
    u_density_brownian, u_laplace_brownian, BrownianTail,
};
pub use constants::TheoryConstants;
pub use quad::{Quadrature, QuadratureSpec, Scheme};
pub use renewal::{laplace_exponent, mean_log_drift, renewal_limit, StepTail, TailFunction};
pub use special::{bessel_j1, gamma, gamma_fn, ln_gamma};
pub use stable::{
    c_beta, conditioned_kernel, d_beta, delta1_cdf, direct_inner, finish_chord_cdf, nu_beta_phi_sample, phi_stable,
    stable_face_constant, stable_face_prefactor, stable_face_sample, stable_longest_chord_cdf, t1_moment_target,
    u_density_stable, u_laplace_stable, ChordCdfPoint, ChordEstimator, StableChordSetup,
};
