//! Elementary closed forms:
//!   (1,1) e^z, (1,0) z e^z, (2,1) cosh √z, (2,2) sinh √z/√z,
//!   (2,3) (cosh √z − 1)/z = 2 sinh²(√z/2)/z, (2,4) (sinh √z/√z − 1)/z.

use num_complex::Complex64;

use super::{EvalResult, Method};
use crate::math::gamma;
use crate::params::Params;

const EPS: f64 = f64::EPSILON;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Pair {
    E11,
    E10,
    E21,
    E22,
    E23,
    E24,
}

fn pair(p: &Params) -> Option<Pair> {
    match (p.alpha(), p.beta()) {
        (a, b) if a == 1.0 && b == 1.0 => Some(Pair::E11),
        (a, b) if a == 1.0 && b == 0.0 => Some(Pair::E10),
        (a, b) if a == 2.0 && b == 1.0 => Some(Pair::E21),
        (a, b) if a == 2.0 && b == 2.0 => Some(Pair::E22),
        (a, b) if a == 2.0 && b == 3.0 => Some(Pair::E23),
        (a, b) if a == 2.0 && b == 4.0 => Some(Pair::E24),
        _ => None,
    }
}

/// Exact closed form for the six elementary pairs, `None` otherwise.
pub fn closed_form(p: &Params, z: Complex64) -> Option<Complex64> {
    closed_form_result(p, z).map(|r| r.value)
}

// Σ_{k<n} z^k/Γ(αk+β), for the removable singularities at the origin
fn short_series(p: &Params, z: Complex64, n: usize) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for k in 0..n {
        s += zk * gamma::rgamma(p.alpha() * k as f64 + p.beta());
        zk *= z;
    }
    s
}

pub(crate) fn closed_form_result(p: &Params, z: Complex64) -> Option<EvalResult> {
    let which = pair(p)?;
    let r = z.norm();
    let w = z.sqrt();
    // rounding scale of hyperbolic functions of w: e^{|Re w|}, relative error ∝ |w|
    let ch = libm::cosh(w.re);
    let rel = EPS * (4.0 + 2.0 * w.norm());
    let (value, err) = match which {
        Pair::E11 => {
            let v = z.exp();
            (v, v.norm() * EPS * (4.0 + 2.0 * r))
        }
        Pair::E10 => {
            let v = z * z.exp();
            (v, v.norm() * EPS * (5.0 + 2.0 * r))
        }
        Pair::E21 => (w.cosh(), ch * rel),
        Pair::E22 => {
            if r < 1e-4 {
                (short_series(p, z, 6), 2.0 * EPS)
            } else {
                (w.sinh() / w, ch * rel / w.norm())
            }
        }
        Pair::E23 => {
            if r < 1e-4 {
                (short_series(p, z, 6), 2.0 * EPS)
            } else {
                let s = (w * 0.5).sinh();
                let v = 2.0 * s * s / z;
                (v, ch * rel / r)
            }
        }
        Pair::E24 => {
            // (sinh w − w)/w³ cancels for small w; the series is cheaper there
            if r < 1.0 {
                (short_series(p, z, 14), 2.0 * EPS)
            } else {
                let v = (w.sinh() - w) / (w * z);
                (v, (ch + w.norm()) * rel / (r * w.norm()))
            }
        }
    };
    Some(EvalResult { value, abs_err_est: err + EPS * value.norm(), method: Method::ClosedForm })
}
