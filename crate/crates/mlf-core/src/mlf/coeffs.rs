//! Series coefficients 1/Γ(αk+β), as log-magnitude plus sign.

use alloc::vec::Vec;

use crate::math::{gamma, Dd};
use crate::params::Params;

pub(crate) trait Coeffs {
    fn params(&self) -> Params;
    /// `(ln|Γ(αk+β)|, sign)`, `None` where 1/Γ vanishes.
    fn lg(&self, k: usize) -> Option<(f64, i32)>;
    fn lg_dd(&self, k: usize) -> Option<(Dd, i32)>;
}

fn arg_f64(p: &Params, k: usize) -> f64 {
    p.alpha() * k as f64 + p.beta()
}

fn arg_dd(p: &Params, k: usize) -> Dd {
    Dd::prod(p.alpha(), k as f64).add_f64(p.beta())
}

fn lg_direct(p: &Params, k: usize) -> Option<(f64, i32)> {
    let x = arg_f64(p, k);
    if gamma::is_nonpositive_integer(x) {
        return None;
    }
    Some(libm::lgamma_r(x))
}

fn lg_dd_direct(p: &Params, k: usize) -> Option<(Dd, i32)> {
    gamma::ln_gamma_dd(arg_dd(p, k))
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct DirectCoeffs {
    p: Params,
}

impl DirectCoeffs {
    pub fn new(p: Params) -> Self {
        DirectCoeffs { p }
    }
}

impl Coeffs for DirectCoeffs {
    fn params(&self) -> Params {
        self.p
    }
    fn lg(&self, k: usize) -> Option<(f64, i32)> {
        lg_direct(&self.p, k)
    }
    fn lg_dd(&self, k: usize) -> Option<(Dd, i32)> {
        lg_dd_direct(&self.p, k)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct CachedCoeffs {
    p: Params,
    lg: Vec<Option<(f64, i32)>>,
    lg_dd: Vec<Option<(Dd, i32)>>,
}

impl CachedCoeffs {
    pub fn new(p: Params) -> Self {
        // enough terms for |z|^{1/α} up to the switch radius, with margin
        let n = libm::ceil((240.0 + p.beta().abs()) / p.alpha()).min(20_000.0) as usize + 16;
        let lg = (0..n).map(|k| lg_direct(&p, k)).collect();
        let lg_dd = (0..n).map(|k| lg_dd_direct(&p, k)).collect();
        CachedCoeffs { p, lg, lg_dd }
    }
}

impl Coeffs for CachedCoeffs {
    fn params(&self) -> Params {
        self.p
    }
    fn lg(&self, k: usize) -> Option<(f64, i32)> {
        match self.lg.get(k) {
            Some(v) => *v,
            None => lg_direct(&self.p, k),
        }
    }
    fn lg_dd(&self, k: usize) -> Option<(Dd, i32)> {
        match self.lg_dd.get(k) {
            Some(v) => *v,
            None => lg_dd_direct(&self.p, k),
        }
    }
}
