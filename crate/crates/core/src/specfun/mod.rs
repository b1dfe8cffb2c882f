//! Special functions used by the closed-form distributions.
//!
//! Everything here is self-contained f64 code. Series and continued fractions
//! share one accuracy budget, [`ACCURACY`].

mod bessel;
mod gamma;
mod hyper;
mod marcum;
mod moments;
pub mod quad;
mod whittaker;

pub use bessel::{bessel_i0, bessel_i0e, bessel_ie_sequence};
pub use gamma::{
    erfc, erfcx, exp_integral_e, gamma, gamma_p, gamma_q, ln_gamma, ln_gamma_1p,
    lower_incomplete_gamma, tail_moment, upper_gamma_scaled, upper_incomplete_gamma,
    upper_incomplete_gamma_ext,
};
pub use hyper::kummer_1f1;
pub use marcum::marcum_q1;
pub use moments::{
    half_gaussian_moment_gamma_sum, half_gaussian_moment_kummer, half_gaussian_moments,
    ln_half_gaussian_moments,
};
pub use whittaker::{whittaker_w, whittaker_w_integral};

/// Convergence budget shared by series, recurrences and continued fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

pub const ACCURACY: Accuracy = Accuracy { rel_tol: 1e-15, max_terms: 5000 };

pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
