//! Gamma-family functions on the real line.

use super::dd::{Dd, HALF_LN_2PI};

const STIRLING: [Dd; 16] = [
    Dd::new(0.08333333333333333, 4.625929269271485e-18),
    Dd::new(-0.002777777777777778, 1.0601087908747154e-19),
    Dd::new(0.0007936507936507937, 6.883823317368282e-22),
    Dd::new(-0.0005952380952380953, 5.36938218754726e-20),
    Dd::new(0.0008417508417508417, 3.6870174889237694e-20),
    Dd::new(-0.0019175269175269176, 1.0675702776872475e-19),
    Dd::new(0.00641025641025641, 2.2240044563805217e-19),
    Dd::new(-0.029550653594771242, 4.861760957508855e-19),
    Dd::new(0.17964437236883057, -6.401600482710946e-19),
    Dd::new(-1.3924322169059011, 1.5837056989230303e-17),
    Dd::new(13.402864044168393, -6.154114101993966e-16),
    Dd::new(-156.84828462600203, 9.391823141715389e-15),
    Dd::new(2193.1033333333335, -1.3339255626002948e-13),
    Dd::new(-36108.77125372499, 5.897583353514365e-13),
    Dd::new(691472.268851313, 2.5585296305158e-11),
    Dd::new(-15238221.539407415, -8.76774522490625e-10),
];

const STIRLING_MIN: f64 = 24.0;

pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == libm::floor(x)
}

/// `(ln|Γ(x)|, sign Γ(x))`. At poles the log is `+inf`.
pub fn ln_gamma(x: f64) -> (f64, i32) {
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, 1);
    }
    libm::lgamma_r(x)
}

/// 1/Γ(x), zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x.abs() < 170.0 {
        return 1.0 / libm::tgamma(x);
    }
    let (lg, s) = libm::lgamma_r(x);
    s as f64 * libm::exp(-lg)
}

fn stirling(x: Dd) -> Dd {
    let lnx = x.ln();
    let mut s = (x - Dd::from_f64(0.5)) * lnx - x + HALF_LN_2PI;
    let inv = x.recip();
    let inv2 = inv.sqr();
    let mut p = inv;
    for c in STIRLING.iter() {
        let t = *c * p;
        s = s + t;
        if t.hi.abs() < 1e-34 * s.hi.abs().max(1.0) {
            break;
        }
        p = p * inv2;
    }
    s
}

/// Double-double `ln|Γ(x)|` with sign; `None` at the non-positive integers.
pub fn ln_gamma_dd(x: Dd) -> Option<(Dd, i32)> {
    if x.hi >= STIRLING_MIN {
        return Some((stirling(x), 1));
    }
    if x.lo == 0.0 && is_nonpositive_integer(x.hi) {
        return None;
    }
    // Γ(x) = Γ(x+n) / (x (x+1) ... (x+n-1))
    let n = libm::ceil(STIRLING_MIN - x.hi) as u32;
    let mut prod = Dd::ONE;
    let mut ln_acc = Dd::ZERO;
    let mut sign = 1;
    for i in 0..n {
        let f = x.add_f64(i as f64);
        if f.hi == 0.0 {
            return None;
        }
        if f.hi < 0.0 {
            sign = -sign;
            prod = prod * (-f);
        } else {
            prod = prod * f;
        }
        if prod.hi > 1e250 || prod.hi < 1e-250 {
            ln_acc = ln_acc + prod.ln();
            prod = Dd::ONE;
        }
    }
    ln_acc = ln_acc + prod.ln();
    Some((stirling(x.add_f64(n as f64)) - ln_acc, sign))
}

/// Digamma ψ(x).
pub fn digamma(mut x: f64) -> f64 {
    if x <= 0.0 {
        if x == libm::floor(x) {
            return f64::NAN;
        }
        // ψ(1-x) - ψ(x) = π cot(πx)
        let pi = core::f64::consts::PI;
        return digamma(1.0 - x) - pi / libm::tan(pi * x);
    }
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // B_{2k}/(2k)
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    acc + libm::log(x) - 0.5 / x - tail
}

/// Trigamma ψ'(x) for x > 0.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // 1/x + 1/(2x^2) + Σ B_{2k}/x^{2k+1}
    let tail = inv
        * inv2
        * (1.0 / 6.0
            - inv2
                * (1.0 / 30.0
                    - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0 - inv2 * (691.0 / 2730.0))))));
    acc + inv + 0.5 * inv2 + tail
}
