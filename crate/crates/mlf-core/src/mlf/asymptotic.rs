//! Large-|z| expansion
//!
//!   E_{α,β}(z) ≈ Σ_m (1/α) w_m^{1-β} e^{w_m} − Σ_{k≥1} z^{-k}/Γ(β−αk),
//!   w_m = |z|^{1/α} e^{iφ_m},  φ_m = (arg z + 2πm)/α.
//!
//! Branch m is kept when |φ_m| < π and halved on |φ_m| = π (the Stokes line,
//! where e^{w_m} is maximally subdominant). The algebraic series is cut at
//! its smallest term unless the caller fixes the length.

use core::f64::consts::PI;

use num_complex::Complex64;

use super::{EvalResult, Method};
use crate::error::Error;
use crate::math::gamma;
use crate::params::Params;

const EPS: f64 = f64::EPSILON;

/// |z|^{1/α} at which `eval` leaves the series for the expansion.
pub const SWITCH_ROOT: f64 = 38.0;
/// Smallest |z|^{1/α} accepted by `eval_asymptotic`.
pub const MIN_ROOT: f64 = 8.0;
const MAX_ALG_TERMS: usize = 400;

/// Switch radius r*(α) = 38^α: beyond it the truncation error of the expansion,
/// about e^{-|z|^{1/α}}, is below double-precision rounding.
pub fn switch_radius(alpha: f64) -> f64 {
    libm::pow(SWITCH_ROOT, alpha)
}

/// Below 8^α the expansion is refused.
pub fn asymptotic_min_radius(alpha: f64) -> f64 {
    libm::pow(MIN_ROOT, alpha)
}

pub(crate) struct Branch {
    /// ln|z|/α + iφ_m, i.e. ln w_m
    pub ln_w: Complex64,
    pub weight: f64,
    /// Close enough to a Stokes line that the sharp on/off rule is uncertain.
    pub near_stokes: bool,
}

/// Exponential branches relevant at z (including near-Stokes ones, flagged,
/// with weight 0 when they are outside).
pub(crate) fn branches(alpha: f64, z: Complex64) -> impl Iterator<Item = Branch> {
    let theta = z.arg();
    let lnr = libm::log(z.norm()) / alpha;
    let root = libm::exp(lnr);
    let band = PI.min(4.0 / libm::sqrt(root.max(1.0)));
    let lo = libm::floor((-alpha * PI - alpha * band - theta) / (2.0 * PI)) as i64;
    let hi = libm::ceil((alpha * PI + alpha * band - theta) / (2.0 * PI)) as i64;
    (lo..=hi).filter_map(move |m| {
        let phi = (theta + 2.0 * PI * m as f64) / alpha;
        let d = phi.abs() - PI;
        if d > band {
            return None;
        }
        let weight = if d.abs() <= 1e-13 {
            0.5
        } else if d < 0.0 {
            1.0
        } else {
            0.0
        };
        Some(Branch { ln_w: Complex64::new(lnr, phi), weight, near_stokes: d.abs() <= band })
    })
}

/// For integer α and β the expansion is exact: the branches are all α roots
/// w of z, and 1/Γ(β−αk) vanishes once αk ≥ β.
pub(crate) fn is_exact(p: &Params) -> bool {
    p.alpha() == libm::trunc(p.alpha()) && p.beta() == libm::trunc(p.beta())
}

/// Nonzero algebraic terms of an exact expansion.
fn exact_terms(p: &Params) -> usize {
    let n = libm::ceil(p.beta() / p.alpha()) - 1.0;
    n.max(0.0) as usize
}

pub(crate) struct ExpPart {
    pub value: Complex64,
    pub err: f64,
    pub mag: f64,
}

fn exponential_part(p: &Params, z: Complex64) -> Result<ExpPart, Error> {
    let a = p.alpha();
    let b = p.beta();
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut mag = 0.0;
    let exact = is_exact(p);
    for br in branches(a, z) {
        let w = br.ln_w.exp();
        let ln_t = (1.0 - b) * br.ln_w + w - libm::log(a);
        if ln_t.re > 709.0 {
            return Err(Error::NonFinite);
        }
        let t = ln_t.exp();
        let m = t.norm();
        value += br.weight * t;
        mag += br.weight * m;
        // w = exp(ln w) carries relative error ~ |ln w|·ε, amplified by |w| in e^w
        let rel = EPS * (4.0 + w.norm() * (2.0 + br.ln_w.norm()) + (1.0 - b).abs() * br.ln_w.norm());
        err += br.weight * m * rel;
        if br.near_stokes && !exact {
            err += m;
        }
    }
    Ok(ExpPart { value, err, mag })
}

/// ln of the envelope |z|^{-k} Γ(1−β+αk)/π ≥ |z^{-k}/Γ(β−αk)|.
fn ln_envelope(p: &Params, lnr: f64, k: usize) -> f64 {
    let x = 1.0 - p.beta() + p.alpha() * k as f64;
    let kf = k as f64;
    if x > 0.0 {
        -kf * lnr + libm::lgamma_r(x).0 - libm::log(PI)
    } else {
        let g = gamma::rgamma(p.beta() - p.alpha() * kf).abs();
        -kf * lnr + libm::log(g.max(f64::MIN_POSITIVE))
    }
}

fn alg_term(p: &Params, z: Complex64, k: usize) -> Complex64 {
    let g = gamma::rgamma(p.beta() - p.alpha() * k as f64);
    if g == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let kf = k as f64;
    let lnr = libm::log(z.norm());
    let th = z.arg();
    Complex64::from_polar(g * libm::exp(-kf * lnr), -kf * th)
}

fn finish(exp: ExpPart, alg: Complex64, alg_abs: f64, trunc: f64) -> EvalResult {
    let value = exp.value - alg;
    let abs_err_est = exp.err + trunc + 4.0 * EPS * alg_abs + EPS * value.norm();
    EvalResult { value, abs_err_est, method: Method::Asymptotic }
}

fn check_radius(p: &Params, z: Complex64) -> Result<(), Error> {
    if !(z.norm() >= asymptotic_min_radius(p.alpha())) {
        return Err(Error::DomainTooSmall);
    }
    Ok(())
}

/// Asymptotic expansion with exactly `n_terms` algebraic terms.
///
/// The error estimate is the first omitted algebraic term's envelope, plus
/// rounding and any exponential branch lying near a Stokes line.
pub fn eval_asymptotic(p: &Params, z: Complex64, n_terms: usize) -> Result<EvalResult, Error> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("n_terms must be positive"));
    }
    check_radius(p, z)?;
    let exp = exponential_part(p, z)?;
    let lnr = libm::log(z.norm());
    let mut alg = Complex64::new(0.0, 0.0);
    let mut alg_abs = 0.0;
    for k in 1..=n_terms {
        let t = alg_term(p, z, k);
        alg += t;
        alg_abs += t.norm() * (1.0 + k as f64);
    }
    let trunc = if is_exact(p) && n_terms >= exact_terms(p) {
        0.0
    } else {
        libm::exp(ln_envelope(p, lnr, n_terms + 1))
    };
    Ok(finish(exp, alg, alg_abs, trunc))
}

/// Number of algebraic terms kept by optimal truncation at |z| = r, and the
/// log-envelope of the first omitted term.
pub(crate) fn optimal_terms(p: &Params, lnr: f64, floor: f64) -> (usize, f64) {
    if is_exact(p) {
        return (exact_terms(p), f64::NEG_INFINITY);
    }
    // before the Γ argument turns negative the envelope can grow harmlessly
    let k0 = libm::ceil((p.beta() + 1.0) / p.alpha()).max(1.0) as usize;
    let ln_floor = libm::log(floor.max(f64::MIN_POSITIVE));
    let mut prev = ln_envelope(p, lnr, 1);
    let mut k = 1;
    while k < MAX_ALG_TERMS {
        let next = ln_envelope(p, lnr, k + 1);
        if k >= k0 && (next > prev || prev < ln_floor) {
            return (k, next);
        }
        prev = next;
        k += 1;
    }
    (k, ln_envelope(p, lnr, k + 1))
}

pub(crate) fn asymptotic_auto(p: &Params, z: Complex64) -> Result<EvalResult, Error> {
    check_radius(p, z)?;
    let exp = exponential_part(p, z)?;
    let lnr = libm::log(z.norm());
    // scale for the rounding floor: the exponential part or the first algebraic term
    let scale = exp.mag + libm::exp(ln_envelope(p, lnr, 1));
    let (n, ln_next) = optimal_terms(p, lnr, 0.01 * EPS * scale);
    let mut alg = Complex64::new(0.0, 0.0);
    let mut alg_abs = 0.0;
    for k in 1..=n {
        let t = alg_term(p, z, k);
        alg += t;
        alg_abs += t.norm() * (1.0 + k as f64);
    }
    Ok(finish(exp, alg, alg_abs, libm::exp(ln_next)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64) -> Params {
        Params::new(a, b).unwrap()
    }

    #[test]
    fn radius_guard() {
        let q = p(1.5, 1.5);
        assert_eq!(eval_asymptotic(&q, Complex64::new(5.0, 0.0), 5), Err(Error::DomainTooSmall));
        assert!(eval_asymptotic(&q, Complex64::new(50.0, 0.0), 5).is_ok());
    }

    #[test]
    fn exponential_on_negative_axis() {
        // α = 1 on the negative axis: both branches sit on the Stokes line, half each
        let q = p(1.0, 1.0);
        let r = asymptotic_auto(&q, Complex64::new(-60.0, 0.0)).unwrap();
        assert!((r.value.re - libm::exp(-60.0)).abs() < 1e-13 * libm::exp(-60.0));
    }

    #[test]
    fn cosine_form_alpha_two() {
        // E_{2,1}(-x^2) = cos x
        let q = p(2.0, 1.0);
        let x: f64 = 45.0;
        let r = asymptotic_auto(&q, Complex64::new(-x * x, 0.0)).unwrap();
        assert!((r.value.re - libm::cos(x)).abs() < 1e-13, "{}", r.value.re);
        assert!(r.value.im.abs() < 1e-13);
    }
}
