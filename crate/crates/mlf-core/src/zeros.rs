//! Real zeros by sign-change scanning, zero counts by the argument principle.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Error;
use crate::mlf::Evaluator;
use crate::params::Params;

const TOL: f64 = 1e-15;
/// |E| below this at a local minimum without sign change counts as a double zero.
pub const DOUBLE_ZERO_THRESHOLD: f64 = 1e-9;
/// Contour samples beyond which refinement gives up.
pub const MAX_BOUNDARY_SAMPLES: usize = 1 << 20;
pub const DEFAULT_BOUNDARY: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, Error> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !ok || !(re_min < re_max) || !(im_min < im_max) {
            return Err(Error::InvalidArgument("rectangle needs re_min < re_max and im_min < im_max"));
        }
        Ok(Rect { re_min, re_max, im_min, im_max })
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.im_min == -self.im_max
    }

    /// Same rectangle with every edge pushed outwards by `d`.
    pub fn grown(&self, d: f64) -> Rect {
        Rect {
            re_min: self.re_min - d,
            re_max: self.re_max + d,
            im_min: self.im_min - d,
            im_max: self.im_max + d,
        }
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealZero {
    pub location: f64,
    /// Width of the final bracket.
    pub width: f64,
    /// 1, or 2 for a double zero found as a touching minimum.
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroReport {
    /// Sorted ascending.
    pub real_zeros: Vec<RealZero>,
    pub rect_count: usize,
    pub nonreal_count: usize,
}

/// Default scan step: a quarter of the zero spacing α π |x|^{1−1/α} / sin(π/α)
/// of the oscillating asymptotic form, clamped to [1e−3, 1].
pub fn default_step(alpha: f64, x: f64) -> f64 {
    let s = libm::sin(PI / alpha);
    if alpha <= 1.0 || s <= 0.0 {
        return 1.0;
    }
    let spacing = alpha * PI * libm::pow(x.abs(), 1.0 - 1.0 / alpha) / s;
    (0.25 * spacing).clamp(1e-3, 1.0)
}

fn width_tol(x: f64) -> f64 {
    1e-10 * x.abs().max(1.0)
}

struct RealAxis<'a> {
    ev: &'a Evaluator,
}

impl RealAxis<'_> {
    fn f(&self, x: f64) -> Result<f64, Error> {
        Ok(self.ev.eval_real(x, TOL)?.value.re)
    }

    fn df(&self, x: f64) -> Result<f64, Error> {
        Ok(self.ev.taylor_jet(x, 1, TOL)?.coeffs[1])
    }

    /// Bisection on a sign change of `g` in [lo, hi].
    fn bisect(&self, mut lo: f64, mut hi: f64, mut g_lo: f64, deriv: bool) -> Result<(f64, f64), Error> {
        while hi - lo > width_tol(0.5 * (lo + hi)) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let g = if deriv { self.df(mid)? } else { self.f(mid)? };
            if g == 0.0 {
                return Ok((mid, 0.0));
            }
            if (g < 0.0) == (g_lo < 0.0) {
                lo = mid;
                g_lo = g;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi), hi - lo))
    }

    /// Touching minimum of |f| between a < b < c (samples of one sign, f(b) smallest).
    fn double_zero(&self, a: f64, c: f64) -> Result<Option<RealZero>, Error> {
        let (da, dc) = (self.df(a)?, self.df(c)?);
        let s = self.f(a)?.signum();
        // s·f falls then rises
        if !(s * da < 0.0 && s * dc > 0.0) {
            return Ok(None);
        }
        let (x, w) = self.bisect(a, c, da, true)?;
        if self.f(x)?.abs() < DOUBLE_ZERO_THRESHOLD {
            return Ok(Some(RealZero { location: x, width: w, multiplicity: 2 }));
        }
        Ok(None)
    }
}

/// Scan from `x_max` down to `x_min`; stops after the first zero when `first_only`.
fn scan(p: &Params, x_min: f64, x_max: f64, step_hint: Option<f64>, first_only: bool) -> Result<Vec<RealZero>, Error> {
    if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
        return Err(Error::InvalidArgument("scan needs finite x_min < x_max"));
    }
    if let Some(h) = step_hint {
        if !(h > 0.0) {
            return Err(Error::InvalidArgument("step_hint must be positive"));
        }
    }
    let ev = Evaluator::new(*p);
    let ax = RealAxis { ev: &ev };
    let mut out = Vec::new();
    // window of the last three samples, most recent last
    let mut win: Vec<(f64, f64)> = Vec::with_capacity(3);
    let mut x = x_max;
    let mut fx = ax.f(x)?;
    loop {
        if fx == 0.0 {
            out.push(RealZero { location: x, width: 0.0, multiplicity: 1 });
        }
        win.push((x, fx));
        if win.len() > 3 {
            win.remove(0);
        }
        if win.len() >= 2 {
            let (xb, fb) = win[win.len() - 1];
            let (xa, fa) = win[win.len() - 2];
            if fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0) {
                let (loc, w) = ax.bisect(xb, xa, fb, false)?;
                out.push(RealZero { location: loc, width: w, multiplicity: 1 });
            }
        }
        if win.len() == 3 {
            let (x2, f2) = win[2];
            let (_, f1) = win[1];
            let (x0, f0) = win[0];
            let same = f0 != 0.0 && (f0 < 0.0) == (f1 < 0.0) && (f1 < 0.0) == (f2 < 0.0);
            if same && f1.abs() < f0.abs() && f1.abs() < f2.abs() {
                if let Some(z) = ax.double_zero(x2, x0)? {
                    out.push(z);
                }
            }
        }
        if first_only && out.iter().any(|z| z.location < x_max) {
            break;
        }
        if x <= x_min {
            break;
        }
        let h = step_hint.unwrap_or_else(|| default_step(p.alpha(), x));
        x = (x - h).max(x_min);
        fx = ax.f(x)?;
    }
    out.sort_by(|a, b| a.location.total_cmp(&b.location));
    Ok(out)
}

/// Real zeros of E_{α,β} in [x_min, x_max], sorted ascending.
///
/// A sign change is bisected to width 1e−10·max(1,|x|); a local minimum of |E|
/// below [`DOUBLE_ZERO_THRESHOLD`] without a sign change is reported as a
/// double zero. For β > 0 the positive axis carries no zeros, so the useful
/// range is x_max ≤ 0.
pub fn real_zero_scan(p: &Params, x_min: f64, x_max: f64, step_hint: Option<f64>) -> Result<Vec<RealZero>, Error> {
    scan(p, x_min, x_max, step_hint, false)
}

/// Largest zero in [x_floor, 0).
pub fn first_negative_zero(p: &Params, x_floor: f64) -> Result<Option<f64>, Error> {
    if !(x_floor < 0.0) {
        return Err(Error::InvalidArgument("x_floor must be negative"));
    }
    let z = scan(p, x_floor, 0.0, None, true)?;
    Ok(z.iter().rev().find(|z| z.location < 0.0).map(|z| z.location))
}

/// Number of zeros (with multiplicity) inside `r`, as the winding number of E
/// along the boundary.
///
/// Each edge starts with n_boundary/4 samples; a gap is halved until the phase
/// moves by less than π/2 across it. A sample where |E| is below 1e−13 of its
/// neighbours (or below its own error estimate) means the contour passes
/// through a zero.
pub fn count_zeros_rect(p: &Params, r: &Rect, n_boundary: usize) -> Result<usize, Error> {
    if n_boundary < 64 {
        return Err(Error::InvalidArgument("n_boundary must be at least 64"));
    }
    let ev = Evaluator::new(*p);
    let per_edge = n_boundary / 4;
    let c = r.corners();
    let mut total = 0.0;
    let mut budget = MAX_BOUNDARY_SAMPLES;
    for e in 0..4 {
        let (a, b) = (c[e], c[(e + 1) % 4]);
        total += edge_phase(&ev, a, b, per_edge, &mut budget)?;
    }
    let w = total / (2.0 * PI);
    let n = libm::round(w);
    if (w - n).abs() > 0.1 || n < 0.0 {
        return Err(Error::IllConditioned);
    }
    Ok(n as usize)
}

fn sample(ev: &Evaluator, z: Complex64) -> Result<(Complex64, f64), Error> {
    let r = ev.eval(z, TOL)?;
    if !(r.value.norm() > 4.0 * r.abs_err_est) {
        return Err(Error::ContourThroughZero);
    }
    Ok((r.value, r.abs_err_est))
}

fn edge_phase(ev: &Evaluator, a: Complex64, b: Complex64, n: usize, budget: &mut usize) -> Result<f64, Error> {
    let mut total = 0.0;
    let at = |t: f64| a + (b - a) * t;
    let mut prev_t = 0.0;
    let (mut prev_v, _) = sample(ev, a)?;
    for i in 1..=n {
        let t = i as f64 / n as f64;
        let (v, _) = sample(ev, at(t))?;
        total += refine(ev, &at, prev_t, prev_v, t, v, budget)?;
        prev_t = t;
        prev_v = v;
    }
    Ok(total)
}

fn refine<F: Fn(f64) -> Complex64>(
    ev: &Evaluator,
    at: &F,
    t0: f64,
    v0: Complex64,
    t1: f64,
    v1: Complex64,
    budget: &mut usize,
) -> Result<f64, Error> {
    let mut stack = alloc::vec![(t0, v0, t1, v1)];
    let mut total = 0.0;
    while let Some((t0, v0, t1, v1)) = stack.pop() {
        let d = (v1 / v0).arg();
        if d.abs() < 0.5 * PI {
            total += d;
            continue;
        }
        if *budget == 0 || t1 - t0 <= f64::EPSILON * 4.0 {
            return Err(Error::ContourThroughZero);
        }
        *budget -= 1;
        let tm = 0.5 * (t0 + t1);
        let (vm, _) = sample(ev, at(tm))?;
        if vm.norm() < 1e-13 * v0.norm().max(v1.norm()) {
            return Err(Error::ContourThroughZero);
        }
        // the phase sum is order independent
        stack.push((tm, vm, t1, v1));
        stack.push((t0, v0, tm, vm));
    }
    Ok(total)
}

/// Real zeros on r's real segment plus the contour count; the remainder is non-real.
pub fn classify_zero_reality(p: &Params, r: &Rect) -> Result<ZeroReport, Error> {
    classify_zero_reality_with(p, r, DEFAULT_BOUNDARY)
}

pub fn classify_zero_reality_with(p: &Params, r: &Rect, n_boundary: usize) -> Result<ZeroReport, Error> {
    if !r.is_real_symmetric() {
        return Err(Error::InvalidArgument("rectangle must be symmetric about the real axis"));
    }
    let rect_count = count_zeros_rect(p, r, n_boundary)?;
    let real_zeros: Vec<RealZero> = real_zero_scan(p, r.re_min, r.re_max, None)?
        .into_iter()
        .filter(|z| z.location > r.re_min && z.location < r.re_max)
        .collect();
    let real: usize = real_zeros.iter().map(|z| z.multiplicity as usize).sum();
    if real > rect_count {
        return Err(Error::IllConditioned);
    }
    Ok(ZeroReport { real_zeros, rect_count, nonreal_count: rect_count - real })
}

/// Rectangles of side ≤ `min_side` inside `r`, each with its zero count, found by
/// repeated halving with the argument principle.
pub fn isolate_zeros(p: &Params, r: &Rect, min_side: f64) -> Result<Vec<(Rect, usize)>, Error> {
    if !(min_side > 0.0) {
        return Err(Error::InvalidArgument("min_side must be positive"));
    }
    let mut out = Vec::new();
    let n = count_zeros_rect(p, r, 64)?;
    let mut stack = alloc::vec![(*r, n)];
    while let Some((q, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        let (w, h) = (q.re_max - q.re_min, q.im_max - q.im_min);
        if w.max(h) <= min_side {
            out.push((q, n));
            continue;
        }
        // split slightly off centre, away from symmetric zero positions; shift on a hit
        let mut done = false;
        for f in [0.5123, 0.4771, 0.5391, 0.4417] {
            let (a, b) = if w >= h {
                let c = q.re_min + f * w;
                (Rect { re_max: c, ..q }, Rect { re_min: c, ..q })
            } else {
                let c = q.im_min + f * h;
                (Rect { im_max: c, ..q }, Rect { im_min: c, ..q })
            };
            match (count_zeros_rect(p, &a, 64), count_zeros_rect(p, &b, 64)) {
                (Ok(na), Ok(nb)) => {
                    stack.push((b, nb));
                    stack.push((a, na));
                    done = true;
                    break;
                }
                (Err(Error::ContourThroughZero), _) | (_, Err(Error::ContourThroughZero)) => continue,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        if !done {
            return Err(Error::ContourThroughZero);
        }
    }
    out.sort_by(|a, b| a.0.re_min.total_cmp(&b.0.re_min).then(a.0.im_min.total_cmp(&b.0.im_min)));
    Ok(out)
}

/// Newton iteration for a simple zero near `z0`, with
/// E′_{α,β}(z) = (E_{α,β−1}(z) − (β−1)E_{α,β}(z)) / (αz).
pub fn polish_zero(p: &Params, z0: Complex64) -> Result<Complex64, Error> {
    let ev = Evaluator::new(*p);
    let lower = Evaluator::new(p.with_beta(p.beta() - 1.0)?);
    let mut z = z0;
    for _ in 0..60 {
        if z.norm() == 0.0 {
            return Err(Error::IllConditioned);
        }
        let e = ev.eval(z, TOL)?.value;
        let d = (lower.eval(z, TOL)?.value - (p.beta() - 1.0) * e) / (p.alpha() * z);
        if d.norm() == 0.0 {
            return Err(Error::IllConditioned);
        }
        let step = e / d;
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            return Ok(z);
        }
    }
    Err(Error::IllConditioned)
}
