use num_complex::Complex64;

use super::coeffs::{Coeffs, DirectCoeffs};
use super::{check_tol, EvalResult, Method};
use crate::error::Error;
use crate::math::{gamma, Dd};
use crate::params::Params;

const EPS: f64 = f64::EPSILON;
// unit roundoff of double-double with a little slack
const DD_EPS: f64 = 1e-31;
const MAX_TERMS: usize = 200_000;

/// Power series Σ z^k/Γ(αk+β), truncated once a geometric majorant of the tail
/// drops below `tol·|sum|` (or below the rounding floor).
///
/// When cancellation leaves the double-precision sum short of `tol`, the sum
/// is recomputed in double-double arithmetic.
pub fn eval_series(p: &Params, z: Complex64, tol: f64) -> Result<EvalResult, Error> {
    check_tol(tol)?;
    series_with(&DirectCoeffs::new(*p), z, tol)
}

pub(crate) fn series_with<C: Coeffs>(c: &C, z: Complex64, tol: f64) -> Result<EvalResult, Error> {
    let p = c.params();
    if z == Complex64::new(0.0, 0.0) {
        let v = gamma::rgamma(p.beta());
        return Ok(EvalResult {
            value: Complex64::new(v, 0.0),
            abs_err_est: 2.0 * EPS * v.abs(),
            method: Method::Series,
        });
    }
    let (sum, err) = series_f64(c, z, tol)?;
    if err <= tol * sum.norm() {
        return Ok(EvalResult { value: sum, abs_err_est: err, method: Method::Series });
    }
    let (sum_dd, err_dd) = series_dd(c, z, tol)?;
    let (value, abs_err_est) = if err_dd < err { (sum_dd, err_dd) } else { (sum, err) };
    Ok(EvalResult { value, abs_err_est, method: Method::Series })
}

struct Mag {
    mag: f64,
    lg: f64,
    sign: f64,
}

fn term_mag<C: Coeffs>(c: &C, k: usize, lz: f64) -> Result<Option<Mag>, Error> {
    match c.lg(k) {
        None => Ok(None),
        Some((lg, s)) => {
            let le = k as f64 * lz - lg;
            if le > 709.0 {
                return Err(Error::NonFinite);
            }
            Ok(Some(Mag { mag: libm::exp(le), lg, sign: s as f64 }))
        }
    }
}

fn mag_of(m: &Option<Mag>) -> f64 {
    m.as_ref().map_or(0.0, |m| m.mag)
}

/// Returns (sum, absolute error estimate).
fn series_f64<C: Coeffs>(c: &C, z: Complex64, tol: f64) -> Result<(Complex64, f64), Error> {
    let p = c.params();
    let r = z.norm();
    let lz = libm::log(r);
    let u = z / r;
    let mut upow = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut rnd = 0.0;
    let mut cur = term_mag(c, 0, lz)?;
    let mut next = term_mag(c, 1, lz)?;
    for k in 0..MAX_TERMS {
        if let Some(m) = &cur {
            sum += upow * (m.sign * m.mag);
            abs_sum += m.mag;
            rnd += m.mag * (4.0 + 2.0 * k as f64 + k as f64 * lz.abs() + m.lg.abs());
        }
        let after = term_mag(c, k + 2, lz)?;
        let x = p.alpha() * k as f64 + p.beta();
        if x > 0.0 {
            let m1 = mag_of(&next);
            let m2 = mag_of(&after);
            if m1 == 0.0 && m2 == 0.0 {
                break;
            }
            if m2 < m1 {
                // ratios of successive terms decrease once αk+β > 0 (log-convexity of Γ)
                let tail = m1 / (1.0 - m2 / m1);
                if tail <= tol * sum.norm() || tail <= EPS * EPS * abs_sum {
                    return Ok((sum, EPS * rnd + tail));
                }
            }
        }
        upow *= u;
        cur = next;
        next = after;
    }
    Err(Error::NonFinite)
}

#[derive(Clone, Copy)]
struct CDd {
    re: Dd,
    im: Dd,
}

impl CDd {
    fn mul(self, o: CDd) -> CDd {
        CDd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

fn series_dd<C: Coeffs>(c: &C, z: Complex64, tol: f64) -> Result<(Complex64, f64), Error> {
    let p = c.params();
    let r2 = Dd::prod(z.re, z.re) + Dd::prod(z.im, z.im);
    let r = r2.sqrt();
    let lz = r.ln();
    let lzf = lz.to_f64();
    let u = CDd { re: Dd::from_f64(z.re) / r, im: Dd::from_f64(z.im) / r };
    let mut upow = CDd { re: Dd::ONE, im: Dd::ZERO };
    let mut sum = CDd { re: Dd::ZERO, im: Dd::ZERO };
    let mut abs_sum = 0.0;
    let mut rnd = 0.0;
    let mut prev_mag = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let x = p.alpha() * k as f64 + p.beta();
        let mut mag = 0.0;
        if let Some((lg, s)) = c.lg_dd(k) {
            let le = lz.mul_f64(k as f64) - lg;
            if le.hi > 709.0 {
                return Err(Error::NonFinite);
            }
            let t = le.exp();
            let t = if s < 0 { -t } else { t };
            sum.re = sum.re + upow.re * t;
            sum.im = sum.im + upow.im * t;
            mag = t.hi.abs();
            abs_sum += mag;
            rnd += mag * (8.0 + 2.0 * k as f64 + k as f64 * lzf.abs() + lg.hi.abs());
        }
        if x > 0.0 && prev_mag.is_finite() && mag < prev_mag {
            let s = libm::hypot(sum.re.to_f64(), sum.im.to_f64());
            // geometric tail with ratio mag/prev_mag (decreasing from here on)
            let ratio = mag / prev_mag;
            let tail = mag * ratio / (1.0 - ratio);
            if tail <= 0.01 * DD_EPS * abs_sum || tail <= 0.01 * tol * s {
                let value = Complex64::new(sum.re.to_f64(), sum.im.to_f64());
                let err = DD_EPS * rnd + tail + EPS * value.norm();
                return Ok((value, err));
            }
        }
        if x > 0.0 {
            prev_mag = mag;
        }
        upow = upow.mul(u);
    }
    Err(Error::NonFinite)
}
