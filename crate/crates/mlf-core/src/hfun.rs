//! The boundary function h(x): the unique y > 0 with 2Γ(x+y)² = Γ(y)Γ(2x+y),
//! i.e. the root of F(x,y) = ln 2 + 2 lnΓ(x+y) − lnΓ(y) − lnΓ(2x+y).

use crate::error::Error;
use crate::math::{digamma, ln_gamma_dd, trigamma, Dd};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HSample {
    pub x: f64,
    pub h: f64,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HCurvature {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub h_value: f64,
}

fn lg(x: Dd) -> Dd {
    // arguments here are positive
    ln_gamma_dd(x).map_or(Dd::from_f64(f64::INFINITY), |(v, _)| v)
}

fn f_dd(x: f64, y: f64) -> Dd {
    let xy = Dd::sum(x, y);
    let x2y = Dd::sum(2.0 * x, y);
    crate::math::dd::LN2 + lg(xy).mul_f64(2.0) - lg(Dd::from_f64(y)) - lg(x2y)
}

/// F(x, y); increasing in y, → −∞ as y → 0⁺ and → ln 2 as y → ∞.
///
/// Evaluated in double-double, so the cancellation between the four
/// log-gamma terms (each ~ y ln y) costs nothing at large x.
pub fn f_of(x: f64, y: f64) -> f64 {
    f_dd(x, y).to_f64()
}

/// ∂F/∂y = 2ψ(x+y) − ψ(y) − ψ(2x+y)
pub fn f_dy(x: f64, y: f64) -> f64 {
    2.0 * digamma(x + y) - digamma(y) - digamma(2.0 * x + y)
}

/// ∂F/∂x = 2(ψ(x+y) − ψ(2x+y))
pub fn f_dx(x: f64, y: f64) -> f64 {
    2.0 * (digamma(x + y) - digamma(2.0 * x + y))
}

/// H(x,y,z) = 2(z+1)²ψ′(x+y) − z²ψ′(y) − (z+2)²ψ′(2x+y).
pub fn h_curvature(x: f64, y: f64, z: f64) -> HCurvature {
    let h_value = 2.0 * (z + 1.0) * (z + 1.0) * trigamma(x + y)
        - z * z * trigamma(y)
        - (z + 2.0) * (z + 2.0) * trigamma(2.0 * x + y);
    HCurvature { x, y, z, h_value }
}

/// Root of F(x, ·) by bracketing plus safeguarded Newton; `tol` bounds |F|.
///
/// h(0) = 0 (continuous extension).
pub fn solve_h(x: f64, tol: f64) -> Result<HSample, Error> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument("x must be non-negative"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive"));
    }
    if x == 0.0 {
        return Ok(HSample { x, h: 0.0, residual: 0.0 });
    }
    let mut lo = 1e-12_f64.min(x * 1e-3);
    // h(x) ~ x²/ln2 for large x and ~ (√2−1)x for small x
    let mut hi = (10.0 * x * x).max(1.0);
    let f_lo = f_of(x, lo);
    let f_hi = f_of(x, hi);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::BracketFailure);
    }
    let mut y = (x * x / core::f64::consts::LN_2 - x + 0.6).clamp(lo, hi);
    if x < 1.0 {
        y = (core::f64::consts::SQRT_2 - 1.0) * x;
    }
    let mut fy = f_of(x, y);
    for _ in 0..300 {
        if fy == 0.0 {
            break;
        }
        if fy < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let d = f_dy(x, y);
        let mut next = y - fy / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = (next - y).abs();
        y = next;
        fy = f_of(x, y);
        if fy.abs() <= tol && step <= 4.0 * f64::EPSILON * y {
            break;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    if !(fy.abs() <= tol) {
        // final residual is limited by rounding of y itself
        let slack = f_dy(x, y).abs() * y * 4.0 * f64::EPSILON;
        if !(fy.abs() <= tol + slack) {
            return Err(Error::BracketFailure);
        }
    }
    Ok(HSample { x, h: y, residual: fy })
}

/// h′(x) = −∂ₓF/∂ᵧF at (x, h(x)); the limit √2 − 1 at x = 0.
pub fn h_prime(x: f64) -> Result<f64, Error> {
    if x == 0.0 {
        return Ok(core::f64::consts::SQRT_2 - 1.0);
    }
    let s = solve_h(x, 1e-14)?;
    Ok(-f_dx(x, s.h) / f_dy(x, s.h))
}

/// h(x) − x²/ln 2 + x.
pub fn asymptote_gap(x: f64) -> Result<f64, Error> {
    if !(x >= 2.0) {
        return Err(Error::InvalidArgument("asymptote_gap needs x >= 2"));
    }
    let s = solve_h(x, 1e-14)?;
    Ok(s.h - x * x / core::f64::consts::LN_2 + x)
}
