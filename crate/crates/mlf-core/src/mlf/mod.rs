//! Evaluation of E_{α,β} and its real-axis derivatives.
//!
//! Three paths: power series (double precision, with a double-double rerun when
//! cancellation eats the tolerance), the exponential/algebraic asymptotic
//! expansion, and closed forms for six special pairs.

mod asymptotic;
mod closed;
mod coeffs;
mod deriv;
mod jet;
mod series;

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::Error;
use crate::params::Params;

pub use asymptotic::{asymptotic_min_radius, eval_asymptotic, switch_radius};
pub use closed::closed_form;
pub use deriv::{deriv_coeffs, DerivCoeffTable};
pub use series::eval_series;

use coeffs::{CachedCoeffs, Coeffs, DirectCoeffs};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Series,
    Asymptotic,
    ClosedForm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Asymptotic => "asymptotic",
            Method::ClosedForm => "closed_form",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_err_est: f64,
    pub method: Method,
}

/// Truncated Taylor expansion at a real center: `coeffs[k] = f^{(k)}(center)/k!`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorJet {
    pub center: f64,
    pub coeffs: Vec<f64>,
    /// Absolute error estimate per coefficient (zeros when unknown).
    pub errs: Vec<f64>,
    /// Trailing parts: `coeffs[k] + lo[k]` is the double-double value where the
    /// jet was summed that way, zero elsewhere.
    pub lo: Vec<f64>,
}

impl TaylorJet {
    pub fn new(center: f64, coeffs: Vec<f64>) -> Self {
        let errs = alloc::vec![0.0; coeffs.len()];
        let lo = errs.clone();
        TaylorJet { center, coeffs, errs, lo }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// k-th derivative, `k! c_k`.
    pub fn derivative(&self, k: usize) -> f64 {
        factorial(k) * self.coeffs[k]
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |a, i| a * i as f64)
}

pub(crate) fn check_tol(tol: f64) -> Result<(), Error> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("tol must be positive"))
    }
}

fn is_zero_beta(p: &Params) -> bool {
    p.beta() == 0.0
}

pub(crate) fn eval_with<C: Coeffs>(c: &C, z: Complex64, tol: f64, shortcuts: bool) -> Result<EvalResult, Error> {
    check_tol(tol)?;
    let p = c.params();
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument("z must be finite"));
    }
    if !shortcuts {
        return general(c, z, tol);
    }
    if let Some(r) = closed::closed_form_result(&p, z) {
        let finite = r.value.re.is_finite() && r.value.im.is_finite() && r.abs_err_est.is_finite();
        return if finite { Ok(r) } else { Err(Error::NonFinite) };
    }
    if is_zero_beta(&p) {
        // E_{α,0}(z) = z E_{α,α}(z)
        let q = Params::new(p.alpha(), p.alpha())?;
        let inner = eval(&q, z, tol)?;
        let value = z * inner.value;
        let abs_err_est = z.norm() * inner.abs_err_est + f64::EPSILON * value.norm();
        return Ok(EvalResult { value, abs_err_est, method: inner.method });
    }
    general(c, z, tol)
}

fn general<C: Coeffs>(c: &C, z: Complex64, tol: f64) -> Result<EvalResult, Error> {
    let p = c.params();
    if z.norm() < switch_radius(p.alpha()) {
        let overlap = z.norm() >= asymptotic_min_radius(p.alpha());
        match series::series_with(c, z, tol) {
            // cancellation beyond double-double: the expansion may do better
            Ok(r) if overlap && r.abs_err_est > tol * r.value.norm() => {
                match asymptotic::asymptotic_auto(&p, z) {
                    Ok(a) if a.abs_err_est < r.abs_err_est => Ok(a),
                    _ => Ok(r),
                }
            }
            Ok(r) => Ok(r),
            Err(Error::NonFinite) if overlap => asymptotic::asymptotic_auto(&p, z),
            Err(e) => Err(e),
        }
    } else {
        asymptotic::asymptotic_auto(&p, z)
    }
}

/// E_{α,β}(z): closed form when known, else series inside the switch radius and
/// the asymptotic expansion outside it.
pub fn eval(p: &Params, z: Complex64, tol: f64) -> Result<EvalResult, Error> {
    eval_with(&DirectCoeffs::new(*p), z, tol, true)
}

/// `eval` without the closed forms and the β = 0 reduction: series or
/// expansion only. An independent route for cross-checks.
pub fn eval_general(p: &Params, z: Complex64, tol: f64) -> Result<EvalResult, Error> {
    eval_with(&DirectCoeffs::new(*p), z, tol, false)
}

/// The asymptotic expansion cut at its smallest algebraic term.
pub fn eval_asymptotic_optimal(p: &Params, z: Complex64) -> Result<EvalResult, Error> {
    asymptotic::asymptotic_auto(p, z)
}

/// `taylor_jet(p, x, N, tol)`: coefficients `E^{(k)}(x)/k!`, k = 0..=N.
pub fn taylor_jet(p: &Params, x: f64, n: usize, tol: f64) -> Result<TaylorJet, Error> {
    jet::taylor_jet_with(&DirectCoeffs::new(*p), x, n, tol)
}

/// E^{(i)}_{α,β}(x).
pub fn eval_derivative(p: &Params, x: f64, i: usize, tol: f64) -> Result<f64, Error> {
    Ok(taylor_jet(p, x, i, tol)?.derivative(i))
}

/// E^{(i)} through the decomposition α^{-i} Σ_j a_{j,i} E_{α, i(α-1)+β+j}(x).
///
/// Independent of the jet route; it loses digits to cancellation for large i
/// on the negative axis, so it serves as a cross-check.
pub fn eval_derivative_decomposed(p: &Params, x: f64, i: usize, tol: f64) -> Result<EvalResult, Error> {
    let table = deriv_coeffs(p, i);
    let a = p.alpha();
    let scale = libm::pow(a, -(i as f64));
    let mut value = 0.0;
    let mut err = 0.0;
    let mut method = Method::ClosedForm;
    for j in 0..=i {
        let c = table.get(j, i);
        if c == 0.0 {
            continue;
        }
        let q = Params::new(a, i as f64 * (a - 1.0) + p.beta() + j as f64)?;
        let r = eval(&q, Complex64::new(x, 0.0), tol)?;
        value += c * r.value.re;
        err += c.abs() * (r.abs_err_est + f64::EPSILON * r.value.re.abs());
        if r.method != Method::ClosedForm {
            method = r.method;
        }
    }
    Ok(EvalResult {
        value: Complex64::new(scale * value, 0.0),
        abs_err_est: scale * err,
        method,
    })
}

/// E_{α,β} for one fixed (α, β), with the series coefficients precomputed.
///
/// Use this when evaluating many points with the same parameters.
#[derive(Clone, Debug)]
pub struct Evaluator {
    coeffs: CachedCoeffs,
}

impl Evaluator {
    pub fn new(p: Params) -> Self {
        Evaluator { coeffs: CachedCoeffs::new(p) }
    }

    pub fn params(&self) -> Params {
        self.coeffs.params()
    }

    pub fn eval(&self, z: Complex64, tol: f64) -> Result<EvalResult, Error> {
        eval_with(&self.coeffs, z, tol, true)
    }

    pub fn eval_real(&self, x: f64, tol: f64) -> Result<EvalResult, Error> {
        self.eval(Complex64::new(x, 0.0), tol)
    }

    pub fn eval_series(&self, z: Complex64, tol: f64) -> Result<EvalResult, Error> {
        check_tol(tol)?;
        series::series_with(&self.coeffs, z, tol)
    }

    pub fn taylor_jet(&self, x: f64, n: usize, tol: f64) -> Result<TaylorJet, Error> {
        jet::taylor_jet_with(&self.coeffs, x, n, tol)
    }
}
