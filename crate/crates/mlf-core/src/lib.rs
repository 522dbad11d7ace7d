//! Two-parameter Mittag-Leffler function E_{α,β}(z) = Σ z^k / Γ(αk+β).
//!
//! Evaluation on the complex plane (series, asymptotic expansion, closed forms),
//! real-axis Taylor jets, the log-convexity boundary h(α), zero location and
//! counting, global inequality checks and sampled complete-monotonicity tests.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod cm;
pub mod error;
pub mod hfun;
pub mod inequal;
pub mod math;
pub mod mlf;
pub mod params;
pub mod zeros;

pub use error::Error;
pub use mlf::{
    closed_form, deriv_coeffs, eval, eval_asymptotic, eval_asymptotic_optimal, eval_derivative,
    eval_derivative_decomposed, eval_general, eval_series, taylor_jet, DerivCoeffTable, EvalResult, Evaluator, Method, TaylorJet,
};
pub use num_complex::Complex64;
pub use params::Params;
