//! Real-axis Taylor jets of E_{α,β}.
//!
//! Inside the switch radius: c_n = Σ_k C(k,n) x^{k−n}/Γ(αk+β), summed in
//! double-double (the alternating sums on the negative axis cancel badly).
//! Outside: the asymptotic expansion, expanded in t around x with
//! (x+t)^p = x^p (1+t/x)^p and the exponential recurrence for e^{g(t)}.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::asymptotic::{self, branches};
use super::coeffs::Coeffs;
use super::{check_tol, TaylorJet};
use crate::error::Error;
use crate::math::{binom, gamma, Dd};
use crate::params::Params;

const EPS: f64 = f64::EPSILON;
const DD_EPS: f64 = 1e-31;
const MAX_TERMS: usize = 100_000;

pub(crate) fn taylor_jet_with<C: Coeffs>(c: &C, x: f64, n: usize, tol: f64) -> Result<TaylorJet, Error> {
    check_tol(tol)?;
    if !x.is_finite() {
        return Err(Error::InvalidArgument("jet center must be finite"));
    }
    let p = c.params();
    let (coeffs, errs, lo) = if x == 0.0 {
        at_origin(c, n)
    } else if x.abs() < asymptotic::switch_radius(p.alpha()) {
        let (mut coeffs, mut errs, mut lo) = series_jet(c, x, n)?;
        let short = coeffs.iter().zip(errs.iter()).any(|(v, e)| *e > tol * v.abs());
        if short && x.abs() >= asymptotic::asymptotic_min_radius(p.alpha()) {
            if let Ok((ac, ae)) = asymptotic_jet(&p, x, n) {
                for j in 0..=n {
                    if ae[j] < errs[j] {
                        coeffs[j] = ac[j];
                        errs[j] = ae[j];
                        lo[j] = 0.0;
                    }
                }
            }
        }
        (coeffs, errs, lo)
    } else {
        let (coeffs, errs) = asymptotic_jet(&p, x, n)?;
        (coeffs, errs, vec![0.0; n + 1])
    };
    Ok(TaylorJet { center: x, coeffs, errs, lo })
}

type Parts = (Vec<f64>, Vec<f64>, Vec<f64>);

fn at_origin<C: Coeffs>(c: &C, n: usize) -> Parts {
    let full: Vec<Dd> = (0..=n)
        .map(|k| match c.lg_dd(k) {
            None => Dd::ZERO,
            Some((lg, s)) => (-lg).exp().mul_f64(s as f64),
        })
        .collect();
    let coeffs: Vec<f64> = full.iter().map(|v| v.hi).collect();
    let errs = coeffs.iter().map(|v| EPS * v.abs()).collect();
    (coeffs, errs, full.iter().map(|v| v.lo).collect())
}

fn series_jet<C: Coeffs>(c: &C, x: f64, n: usize) -> Result<Parts, Error> {
    let p = c.params();
    let lx = Dd::from_f64(x.abs()).ln();
    let lxf = lx.to_f64().abs();
    let neg = x < 0.0;
    let mut acc = vec![Dd::ZERO; n + 1];
    let mut abs_acc = vec![0.0; n + 1];
    // Pascal row C(k, 0..=n)
    let mut pascal = vec![Dd::ZERO; n + 1];
    pascal[0] = Dd::ONE;
    let mut prev_mag = f64::INFINITY;
    for k in 0..MAX_TERMS {
        if k > 0 {
            for j in (1..=n.min(k)).rev() {
                pascal[j] = pascal[j] + pascal[j - 1];
            }
        }
        let mut mag = 0.0;
        if let Some((lg, s)) = c.lg_dd(k) {
            let le = lx.mul_f64(k as f64) - lg;
            if le.hi > 709.0 {
                return Err(Error::NonFinite);
            }
            let mut t = le.exp();
            if (s < 0) != (neg && k % 2 == 1) {
                t = -t;
            }
            mag = t.hi.abs();
            let w = 8.0 + 2.0 * k as f64 + k as f64 * lxf + lg.hi.abs();
            for j in 0..=n.min(k) {
                acc[j] = acc[j] + pascal[j] * t;
                abs_acc[j] += pascal[j].hi * mag * w;
            }
        }
        let xk = p.alpha() * k as f64 + p.beta();
        if k > n && xk > 0.0 && mag < prev_mag {
            // with the binomial growth C(k+1,j)/C(k,j) ≤ (k+1)/(k+1−n)
            let ratio = mag / prev_mag * (k + 1) as f64 / (k + 1 - n) as f64;
            if ratio < 0.5 {
                let done = (0..=n).all(|j| {
                    let tail = 2.0 * pascal[j].hi * mag * ratio;
                    tail <= 1e-3 * DD_EPS * abs_acc[j] || tail == 0.0
                });
                if done {
                    break;
                }
            }
        }
        if xk > 0.0 {
            prev_mag = mag;
        }
    }
    let inv = Dd::from_f64(x).recip();
    let invf = 1.0 / x.abs();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut errs = Vec::with_capacity(n + 1);
    let mut lo = Vec::with_capacity(n + 1);
    let mut scale = Dd::ONE;
    let mut scalef = 1.0;
    for j in 0..=n {
        let full = acc[j] * scale;
        let v = full.hi;
        coeffs.push(v);
        lo.push(full.lo);
        errs.push(DD_EPS * abs_acc[j] * scalef + EPS * v.abs());
        scale = scale * inv;
        scalef *= invf;
    }
    Ok((coeffs, errs, lo))
}

/// Truncated-series helpers on `Vec<Complex64>` / `Vec<f64>` of equal length.
mod cj {
    use super::*;

    pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        (0..a.len())
            .map(|n| (0..=n).map(|i| a[i] * b[n - i]).sum())
            .collect()
    }

    pub fn mul_abs(a: &[f64], b: &[f64]) -> Vec<f64> {
        (0..a.len())
            .map(|n| (0..=n).map(|i| a[i] * b[n - i]).sum())
            .collect()
    }

    /// e^{g} with g_0 treated as 0 (the caller scales by e^{g_0}).
    pub fn exp0(g: &[Complex64]) -> Vec<Complex64> {
        let mut h = vec![Complex64::new(0.0, 0.0); g.len()];
        h[0] = Complex64::new(1.0, 0.0);
        for n in 1..g.len() {
            let s: Complex64 = (1..=n).map(|k| g[k] * h[n - k] * k as f64).sum();
            h[n] = s / n as f64;
        }
        h
    }

    pub fn exp0_abs(g: &[f64]) -> Vec<f64> {
        let mut h = vec![0.0; g.len()];
        h[0] = 1.0;
        for n in 1..g.len() {
            let s: f64 = (1..=n).map(|k| g[k] * h[n - k] * k as f64).sum();
            h[n] = s / n as f64;
        }
        h
    }

    /// (1 + t/x)^e
    pub fn binom_series(e: f64, x: f64, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n + 1);
        let mut xp = 1.0;
        for j in 0..=n {
            out.push(binom(e, j) * xp);
            xp /= x;
        }
        out
    }
}

fn asymptotic_jet(p: &Params, x: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let (a, b) = (p.alpha(), p.beta());
    let z = Complex64::new(x, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut total = vec![zero; n + 1];
    let mut err = vec![0.0; n + 1];
    let mut exp_mag = 0.0;
    let exact = asymptotic::is_exact(p);
    let pw = cj::binom_series((1.0 - b) / a, x, n);
    let root = cj::binom_series(1.0 / a, x, n);
    let pw_c: Vec<Complex64> = pw.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let pw_abs: Vec<f64> = pw.iter().map(|v| v.abs()).collect();
    for br in branches(a, z) {
        if br.weight == 0.0 && !br.near_stokes {
            continue;
        }
        let w0 = br.ln_w.exp();
        let ln_l = (1.0 - b) * br.ln_w + w0 - libm::log(a);
        if ln_l.re > 709.0 {
            return Err(Error::NonFinite);
        }
        let l = ln_l.exp();
        let mut g: Vec<Complex64> = root.iter().map(|&r| w0 * r).collect();
        g[0] = zero;
        let g_abs: Vec<f64> = g.iter().map(|v| v.norm()).collect();
        let jet = cj::mul(&pw_c, &cj::exp0(&g));
        let bound = cj::mul_abs(&pw_abs, &cj::exp0_abs(&g_abs));
        let lm = l.norm();
        exp_mag += br.weight * lm;
        for j in 0..=n {
            total[j] += br.weight * l * jet[j];
            let m = lm * bound[j];
            err[j] += br.weight * m * EPS * (8.0 + w0.norm() * (2.0 + br.ln_w.norm()) + 2.0 * j as f64);
            if br.near_stokes && !exact {
                err[j] += m;
            }
        }
    }
    let lnr = libm::log(x.abs());
    let env1 = libm::exp(-lnr + libm::lgamma_r((1.0 - b + a).max(f64::MIN_POSITIVE)).0);
    let (kmax, ln_next) = asymptotic::optimal_terms(p, lnr, 0.01 * EPS * (exp_mag + env1));
    let mut coeffs: Vec<f64> = total.iter().map(|v| v.re).collect();
    let inv = 1.0 / x;
    for k in 1..=kmax {
        let g = gamma::rgamma(b - a * k as f64);
        if g == 0.0 {
            continue;
        }
        let base = g * libm::pow(inv, k as f64);
        let s = cj::binom_series(-(k as f64), x, n);
        for j in 0..=n {
            let t = base * s[j];
            coeffs[j] -= t;
            err[j] += 4.0 * EPS * (1.0 + k as f64) * t.abs();
        }
    }
    let next = libm::exp(ln_next);
    let s = cj::binom_series(-((kmax + 1) as f64), x, n);
    for j in 0..=n {
        err[j] += next * s[j].abs() + EPS * coeffs[j].abs();
    }
    Ok((coeffs, err))
}
