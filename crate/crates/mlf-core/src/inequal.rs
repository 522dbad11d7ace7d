//! Inequalities |E(z)| ≶ E(Re z), the quantities that control them, and the
//! region labels of the two parameter maps.

use alloc::vec::Vec;
use core::ops::Range;

use num_complex::Complex64;

use crate::error::Error;
use crate::hfun;
use crate::math::{binom, ln_gamma_dd, Dd};
use crate::mlf::{EvalResult, Evaluator};
use crate::params::Params;

/// A violation is reported only when the margin exceeds this multiple of the
/// summed error estimates of both sides.
pub const BUDGET_FACTOR: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub n_re: usize,
    pub n_im: usize,
}

impl GridSpec {
    pub fn new(re_range: (f64, f64), im_range: (f64, f64), n_re: usize, n_im: usize) -> Result<Self, Error> {
        let finite = [re_range.0, re_range.1, im_range.0, im_range.1].iter().all(|v| v.is_finite());
        if !finite || n_re < 2 || n_im < 2 || !(re_range.0 <= re_range.1) || !(im_range.0 <= im_range.1) {
            return Err(Error::InvalidArgument("grid needs finite ordered ranges and at least 2 points per axis"));
        }
        Ok(GridSpec { re_range, im_range, n_re, n_im })
    }

    /// Square grid [−r, r]² with n points per axis.
    pub fn square(r: f64, n: usize) -> Result<Self, Error> {
        GridSpec::new((-r, r), (-r, r), n, n)
    }

    pub fn re(&self, i: usize) -> f64 {
        lattice_point(self.re_range, i, self.n_re)
    }

    pub fn im(&self, j: usize) -> f64 {
        lattice_point(self.im_range, j, self.n_im)
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Point i of n equally spaced points on [a, b], ends exact.
pub fn lattice_point((a, b): (f64, f64), i: usize, n: usize) -> f64 {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * (i as f64 / (n - 1) as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inequality {
    /// |E(z)| ≤ E(Re z)
    Le,
    /// |E(z)| ≥ E(Re z)
    Ge,
    /// E(Re z) ≤ |E(z)| ≤ E((Re z^{1/α})^α)
    TwoSided,
}

impl Inequality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Inequality::Le => "LE",
            Inequality::Ge => "GE",
            Inequality::TwoSided => "two-sided",
        }
    }
}

/// Which bound on |E(z)| failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ViolationRecord {
    pub z: Complex64,
    /// |E(z)|
    pub lhs: f64,
    /// the bound it was compared with
    pub rhs: f64,
    /// lhs − rhs
    pub margin: f64,
    /// BUDGET_FACTOR × (err(lhs) + err(rhs))
    pub budget: f64,
    pub bound: Bound,
}

fn compare(z: Complex64, l: &EvalResult, r: &EvalResult, bound: Bound) -> Option<ViolationRecord> {
    let lhs = l.value.norm();
    let rhs = r.value.re;
    let margin = lhs - rhs;
    let budget = BUDGET_FACTOR * (l.abs_err_est + r.abs_err_est);
    let bad = match bound {
        Bound::Upper => margin > budget,
        Bound::Lower => -margin > budget,
    };
    bad.then_some(ViolationRecord { z, lhs, rhs, margin, budget, bound })
}

/// Grid check restricted to the imaginary-axis rows in `rows`, in lattice order
/// (row by row, Re increasing). Used to split work across threads.
pub fn check_rows(p: &Params, ineq: Inequality, g: &GridSpec, rows: Range<usize>, tol: f64) -> Result<Vec<ViolationRecord>, Error> {
    let a = p.alpha();
    if ineq == Inequality::TwoSided {
        two_sided_domain(p, g)?;
    }
    let ev = Evaluator::new(*p);
    // E(Re z) is shared by a whole column
    let mut cols = Vec::with_capacity(g.n_re);
    for i in 0..g.n_re {
        cols.push(ev.eval_real(g.re(i), tol)?);
    }
    let mut out = Vec::new();
    for j in rows {
        let y = g.im(j);
        for (i, er) in cols.iter().enumerate() {
            let z = Complex64::new(g.re(i), y);
            if ineq == Inequality::TwoSided && y == 0.0 && z.re < 0.0 {
                // slit
                continue;
            }
            let ez = ev.eval(z, tol)?;
            match ineq {
                Inequality::Le => out.extend(compare(z, &ez, er, Bound::Upper)),
                Inequality::Ge => out.extend(compare(z, &ez, er, Bound::Lower)),
                Inequality::TwoSided => {
                    out.extend(compare(z, &ez, er, Bound::Lower));
                    let s = z.powf(1.0 / a).re.max(0.0);
                    let w = libm::pow(s, a);
                    // w carries a few ulps from the root and the power; charge E′(w)·δw
                    let j = ev.taylor_jet(w, 1, tol)?;
                    let upper = EvalResult {
                        value: Complex64::new(j.coeffs[0], 0.0),
                        abs_err_est: j.errs[0] + 8.0 * f64::EPSILON * w * j.coeffs[1].abs(),
                        method: ez.method,
                    };
                    out.extend(compare(z, &ez, &upper, Bound::Upper));
                }
            }
        }
    }
    Ok(out)
}

fn two_sided_domain(p: &Params, g: &GridSpec) -> Result<(), Error> {
    let (a, b) = (p.alpha(), p.beta());
    if a == 2.0 && (1.0..=3.0).contains(&b) {
        return Ok(());
    }
    if !((1.0..2.0).contains(&a) && b >= 1.0 && b <= a) {
        return Err(Error::InvalidArgument("two-sided check needs α ∈ [1,2), β ∈ [1,α] or α = 2, β ∈ [1,3]"));
    }
    if g.re_range.0 < 0.0 {
        return Err(Error::InvalidArgument("two-sided check for α < 2 needs Re z ≥ 0"));
    }
    Ok(())
}

/// Lattice points where |E(z)| > E(Re z) beyond the error budget.
pub fn check_le(p: &Params, g: &GridSpec, tol: f64) -> Result<Vec<ViolationRecord>, Error> {
    check_rows(p, Inequality::Le, g, 0..g.n_im, tol)
}

/// Lattice points where |E(z)| < E(Re z) beyond the error budget.
pub fn check_ge(p: &Params, g: &GridSpec, tol: f64) -> Result<Vec<ViolationRecord>, Error> {
    check_rows(p, Inequality::Ge, g, 0..g.n_im, tol)
}

/// Both bounds of E(Re z) ≤ |E(z)| ≤ E((Re z^{1/α})^α), principal branch.
/// For α = 2 the grid may cover the plane; points on the negative axis are skipped.
pub fn check_two_sided(p: &Params, g: &GridSpec, tol: f64) -> Result<Vec<ViolationRecord>, Error> {
    check_rows(p, Inequality::TwoSided, g, 0..g.n_im, tol)
}

/// F_{α,β}(x) = E′(x)² − E(x)E″(x).
pub fn f_ab(p: &Params, x: f64) -> Result<f64, Error> {
    let j = Evaluator::new(*p).taylor_jet(x, 2, 1e-15)?;
    let c = &j.coeffs;
    Ok(c[1] * c[1] - 2.0 * c[0] * c[2])
}

/// F_{α,β}(0) = 1/Γ(α+β)² − 2/(Γ(β)Γ(2α+β)), written as
/// −expm1(F(α,β))/Γ(α+β)² with F the function whose root in β is h(α); the
/// sign is therefore exactly that of h(α) − β.
pub fn f_ab_zero(p: &Params) -> Result<f64, Error> {
    let (a, b) = (p.alpha(), p.beta());
    if !(b > 0.0) {
        return Err(Error::InvalidArgument("F(0) needs β > 0"));
    }
    let f = hfun::f_of(a, b);
    let (lg, _) = ln_gamma_dd(Dd::sum(a, b)).ok_or(Error::NonFinite)?;
    Ok(-libm::expm1(f) * libm::exp(-2.0 * lg.to_f64()))
}

/// F_k(x) = Σ_{i=0}^{2k} C(2k,i) (−1)^i E^{(i)}(x) E^{(2k−i)}(x).
///
/// F_1 = −2 F_{α,β}; |E(x+iy)|² = Σ_k (−1)^k F_k(x) y^{2k}/(2k)!.
pub fn f_k(p: &Params, x: f64, k: usize) -> Result<f64, Error> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive"));
    }
    let n = 2 * k;
    let j = Evaluator::new(*p).taylor_jet(x, n, 1e-15)?;
    let d: Vec<f64> = (0..=n).map(|i| j.derivative(i)).collect();
    Ok(binomial_sum(&d, k))
}

/// The alternating binomial sum behind F_k, from derivative values d[0..=2k].
pub fn binomial_sum(d: &[f64], k: usize) -> f64 {
    let n = 2 * k;
    (0..=n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * binom(n as f64, i) * d[i] * d[n - i]
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionFit {
    /// fitted y⁰ coefficient of (|E(x+iy)|² − E(x)²)/y²
    pub constant: f64,
    /// fitted y² coefficient (F_2/24 in theory)
    pub curvature: f64,
    pub f_ab: f64,
    /// constant − F_{α,β}(x)
    pub deviation: f64,
    /// rms fit residual relative to the data scale
    pub residual: f64,
}

pub const DEFAULT_Y: [f64; 5] = [0.01, 0.02, 0.03, 0.04, 0.05];

/// Least-squares fit of g(y) = (|E(x+iy)|² − E(x)²)/y² by A + B y².
pub fn local_expansion_check(p: &Params, x: f64, ys: &[f64]) -> Result<ExpansionFit, Error> {
    let lim = 0.1 * x.abs().max(1.0);
    if ys.len() < 2 || ys.iter().any(|y| !(y.abs() > 0.0 && y.abs() <= lim)) {
        return Err(Error::InvalidArgument("need at least two y with 0 < |y| ≤ 0.1·max(1,|x|)"));
    }
    let ev = Evaluator::new(*p);
    let e0 = ev.eval_real(x, 1e-15)?.value.re;
    let mut pts = Vec::with_capacity(ys.len());
    for &y in ys {
        let v = ev.eval(Complex64::new(x, y), 1e-15)?.value;
        // (Re v − e0)(Re v + e0) + (Im v)², the difference taken before squaring
        let g = ((v.re - e0) * (v.re + e0) + v.im * v.im) / (y * y);
        pts.push((y * y, g));
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(t, g)| (a + t, b + g));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = pts.iter().map(|&(t, _)| (t - mx) * (t - mx)).sum();
    let sxy: f64 = pts.iter().map(|&(t, g)| (t - mx) * (g - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("y values must have distinct squares"));
    }
    let curvature = sxy / sxx;
    let constant = my - curvature * mx;
    let rss: f64 = pts
        .iter()
        .map(|&(t, g)| {
            let r = g - constant - curvature * t;
            r * r
        })
        .sum();
    let scale = pts.iter().map(|&(_, g)| g.abs()).fold(e0 * e0, f64::max);
    let residual = libm::sqrt(rss / n) / scale;
    if residual > 1e-4 {
        return Err(Error::IllConditioned);
    }
    let fab = f_ab(p, x)?;
    Ok(ExpansionFit { constant, curvature, f_ab: fab, deviation: constant - fab, residual })
}

/// u_n = (n+1) Γ(β+αn) / Γ(β+α+αn), through double-double log-gamma.
pub fn u_seq(p: &Params, n: usize) -> Result<f64, Error> {
    let (a, b) = (p.alpha(), p.beta());
    if !(b > 0.0) {
        return Err(Error::InvalidArgument("u_n needs β > 0"));
    }
    let an = Dd::prod(a, n as f64);
    let lo = ln_gamma_dd(an.add_f64(b)).ok_or(Error::NonFinite)?.0;
    let hi = ln_gamma_dd(an.add_f64(b).add_f64(a)).ok_or(Error::NonFinite)?.0;
    let l = Dd::from_f64(n as f64 + 1.0).ln() + lo - hi;
    Ok(l.exp().to_f64())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IneqLabel {
    LeHolds,
    GeHolds,
    GeConjectured,
    Neither,
    NeitherConjectured,
}

impl IneqLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            IneqLabel::LeHolds => "LE_holds",
            IneqLabel::GeHolds => "GE_holds",
            IneqLabel::GeConjectured => "GE_conjectured",
            IneqLabel::Neither => "neither",
            IneqLabel::NeitherConjectured => "neither_conjectured",
        }
    }

    pub fn is_conjectured(&self) -> bool {
        matches!(self, IneqLabel::GeConjectured | IneqLabel::NeitherConjectured)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Additivity {
    Super,
    Sub,
    Neither,
}

impl Additivity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Additivity::Super => "super",
            Additivity::Sub => "sub",
            Additivity::Neither => "neither",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionLabel {
    pub ineq: IneqLabel,
    pub additivity: Additivity,
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

/// Labels from the proved thresholds, given h = h(α).
pub fn classify_with_h(alpha: f64, beta: f64, h: f64) -> RegionLabel {
    let ineq = if alpha <= 1.0 && beta >= alpha {
        IneqLabel::LeHolds
    } else if near(alpha, 1.0) {
        // β < 1 here
        IneqLabel::GeHolds
    } else if near(alpha, 2.0) {
        if beta <= 3.0 {
            IneqLabel::GeHolds
        } else {
            IneqLabel::Neither
        }
    } else if alpha > 2.0 {
        let proved = if alpha >= 4.0 { 2.0 * alpha } else { 2.0 * alpha - 1.0 };
        if beta <= proved {
            IneqLabel::GeHolds
        } else if beta <= h {
            IneqLabel::NeitherConjectured
        } else {
            IneqLabel::Neither
        }
    } else if alpha > 1.0 && alpha < 2.0 && beta >= alpha - 1.0 && beta <= alpha {
        IneqLabel::GeConjectured
    } else {
        IneqLabel::Neither
    };
    // h comes from a root solve; treat β within 1e−12 of it as on the curve
    let slack = 1e-12 * h.max(1.0);
    let additivity = if alpha <= 1.0 && beta >= h - slack {
        Additivity::Super
    } else if alpha >= 1.0 && beta <= h + slack {
        Additivity::Sub
    } else {
        Additivity::Neither
    };
    RegionLabel { ineq, additivity }
}

pub fn classify_point(p: &Params) -> Result<RegionLabel, Error> {
    if !(p.beta() >= 0.0) {
        return Err(Error::InvalidArgument("classification needs β ≥ 0"));
    }
    let h = hfun::solve_h(p.alpha(), 1e-14)?.h;
    Ok(classify_with_h(p.alpha(), p.beta(), h))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionCell {
    pub alpha: f64,
    pub beta: f64,
    pub label: RegionLabel,
    pub h_of_alpha: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionMap {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// α-major lattice order
    pub cells: Vec<RegionCell>,
    /// (α, h(α)) at every lattice α
    pub h_curve: Vec<(f64, f64)>,
}

impl RegionMap {
    pub fn cell(&self, i_alpha: usize, i_beta: usize) -> &RegionCell {
        &self.cells[i_alpha * self.betas.len() + i_beta]
    }
}

pub fn check_map_ranges(alpha_range: (f64, f64), beta_range: (f64, f64), resolution: usize) -> Result<(), Error> {
    let finite = alpha_range.1.is_finite() && beta_range.1.is_finite();
    if resolution < 2 || !finite || !(alpha_range.0 > 0.0) || !(alpha_range.0 < alpha_range.1) || !(beta_range.0 >= 0.0) || !(beta_range.0 < beta_range.1) {
        return Err(Error::InvalidArgument("region map needs α > 0, β ≥ 0, ordered ranges, resolution ≥ 2"));
    }
    Ok(())
}

/// classify_point over a uniform `resolution`² lattice, both ends included.
pub fn region_map(alpha_range: (f64, f64), beta_range: (f64, f64), resolution: usize) -> Result<RegionMap, Error> {
    check_map_ranges(alpha_range, beta_range, resolution)?;
    let alphas: Vec<f64> = (0..resolution).map(|i| lattice_point(alpha_range, i, resolution)).collect();
    let betas: Vec<f64> = (0..resolution).map(|i| lattice_point(beta_range, i, resolution)).collect();
    let mut cells = Vec::with_capacity(resolution * resolution);
    let mut h_curve = Vec::with_capacity(resolution);
    for &a in &alphas {
        let h = hfun::solve_h(a, 1e-14)?.h;
        h_curve.push((a, h));
        for &b in &betas {
            cells.push(RegionCell { alpha: a, beta: b, label: classify_with_h(a, b, h), h_of_alpha: h });
        }
    }
    Ok(RegionMap { alphas, betas, cells, h_curve })
}

/// Γ(β)E(x+y) − Γ(β)E(x)·Γ(β)E(y): ≥ 0 when super-additive, ≤ 0 when sub-additive.
pub fn additivity_gap(p: &Params, x: f64, y: f64) -> Result<f64, Error> {
    let ev = Evaluator::new(*p);
    let g = crate::math::gamma::ln_gamma(p.beta());
    let s = libm::exp(g.0) * g.1 as f64;
    let e = |t: f64| -> Result<f64, Error> { Ok(s * ev.eval_real(t, 1e-15)?.value.re) };
    Ok(e(x + y)? - e(x)? * e(y)?)
}
