//! Sampled complete-monotonicity tests: sign alternation of Taylor jets.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math::Dd;
use crate::mlf::{factorial, Evaluator, TaylorJet};
use crate::params::Params;

/// Relative slack on (−1)^n f^{(n)} ≥ 0.
pub const EPS_REL: f64 = 1e-9;
pub const MAX_ORDER: usize = 24;
pub const DEFAULT_POINTS: [f64; 5] = [0.05, 0.2, 1.0, 5.0, 20.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// x ↦ E_{α,β}(−x)
    EOfMinusX,
    /// x ↦ 1/E_{α,β}(x)
    ReciprocalE,
}

impl Target {
    pub fn as_str(&self) -> &'static str {
        match self {
            Target::EOfMinusX => "E_of_minus_x",
            Target::ReciprocalE => "reciprocal_E",
        }
    }
}

/// Power-series reciprocal: Σ_i a_i b_{k−i} = [k = 0].
///
/// Error estimates are pushed through the recursion to first order.
pub fn reciprocal_jet(j: &TaylorJet) -> Result<TaylorJet, Error> {
    let a = &j.coeffs;
    let ea = &j.errs;
    let a0 = a[0];
    if a0 == 0.0 || !a0.is_finite() {
        return Err(Error::DivisionByZeroSeries);
    }
    let n = a.len();
    // the sums alternate and cancel roughly like 2^k, so run them in double-double
    let ad: Vec<Dd> = a.iter().zip(&j.lo).map(|(&h, &l)| Dd::new(h, 0.0) + Dd::from_f64(l)).collect();
    let inv = Dd::ONE / ad[0];
    let mut bd: Vec<Dd> = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let mut eb = Vec::with_capacity(n);
    bd.push(inv);
    b.push(inv.to_f64());
    eb.push(ea[0] / (a0 * a0) + f64::EPSILON * b[0].abs());
    for k in 1..n {
        let mut s = Dd::ZERO;
        let mut e = 0.0;
        for i in 1..=k {
            s = s + bd[k - i] * ad[i];
            e += a[i].abs() * eb[k - i] + ea[i] * b[k - i].abs();
        }
        let bk = -(s * inv);
        bd.push(bk);
        b.push(bk.to_f64());
        eb.push(e / a0.abs() + ea[0] * b[k].abs() / a0.abs() + f64::EPSILON * b[k].abs());
    }
    Ok(TaylorJet { center: j.center, coeffs: b, errs: eb, lo: bd.iter().map(|v| v.lo).collect() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CmSigns {
    /// (−1)^n f^{(n)}(x), n = 0..=N
    pub values: Vec<f64>,
    pub errs: Vec<f64>,
    /// some error estimate exceeds 10% of its term
    pub numerical_doubt: bool,
}

/// (−1)^n f^{(n)}(x) for n ≤ N, with f = E(−·) or 1/E.
pub fn cm_signs(p: &Params, target: Target, x: f64, n: usize) -> Result<CmSigns, Error> {
    cm_signs_with(&Evaluator::new(*p), target, x, n)
}

fn cm_signs_with(ev: &Evaluator, target: Target, x: f64, n: usize) -> Result<CmSigns, Error> {
    if n > MAX_ORDER {
        return Err(Error::InvalidArgument("order is capped at 24"));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument("sample points must be positive"));
    }
    let (jet, flip) = match target {
        // d^n/dx^n E(−x) = (−1)^n E^{(n)}(−x): the signs cancel
        Target::EOfMinusX => (ev.taylor_jet(-x, n, 1e-15)?, false),
        Target::ReciprocalE => (reciprocal_jet(&ev.taylor_jet(x, n, 1e-15)?)?, true),
    };
    let mut values = Vec::with_capacity(n + 1);
    let mut errs = Vec::with_capacity(n + 1);
    let mut doubt = false;
    for k in 0..=n {
        let s = if flip && k % 2 == 1 { -1.0 } else { 1.0 };
        let f = factorial(k);
        let v = s * f * jet.coeffs[k];
        let e = f * jet.errs[k];
        doubt |= e > 0.1 * v.abs();
        values.push(v);
        errs.push(e);
    }
    Ok(CmSigns { values, errs, numerical_doubt: doubt })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CmFailure {
    pub point: f64,
    pub order: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CmVerdict {
    pub target: Target,
    pub points: Vec<f64>,
    pub max_order: usize,
    pub pass: bool,
    pub first_failure: Option<CmFailure>,
    pub numerical_doubt: bool,
}

/// Pass iff (−1)^n f^{(n)}(x) ≥ −ε·(largest |value| of order ≤ n at x) for every
/// sampled x and n ≤ N.
pub fn is_cm_sampled(p: &Params, target: Target, xs: &[f64], n: usize) -> Result<CmVerdict, Error> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument("need at least one sample point"));
    }
    let ev = Evaluator::new(*p);
    let mut first_failure = None;
    let mut doubt = false;
    for &x in xs {
        let s = cm_signs_with(&ev, target, x, n)?;
        doubt |= s.numerical_doubt;
        let mut scale: f64 = 0.0;
        for (k, &v) in s.values.iter().enumerate() {
            scale = scale.max(v.abs());
            if v < -EPS_REL * scale && first_failure.is_none() {
                first_failure = Some(CmFailure { point: x, order: k, value: v });
            }
        }
    }
    Ok(CmVerdict {
        target,
        points: xs.to_vec(),
        max_order: n,
        pass: first_failure.is_none(),
        first_failure,
        numerical_doubt: doubt,
    })
}
