use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::Parser;
use rayon::prelude::*;

use mlf_core::cm::{self, Target};
use mlf_core::inequal::{self, GridSpec, Inequality, ViolationRecord};
use mlf_core::zeros::{self, Rect, ZeroReport};
use mlf_core::{hfun, Complex64, Error, Params};

use crate::args::*;
use crate::figure::{self, Which};
use crate::record::{Field, OutputRecord};

/// How often a counting rectangle is grown and retried after
/// [`Error::ContourThroughZero`].
pub const CONTOUR_RETRIES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParams | Error::InvalidArgument(_) => 2,
            Error::ContourThroughZero => 4,
            _ => 3,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: 3, message: format!("i/o error: {e}") }
    }
}

type Res<T> = Result<T, CliError>;

/// Parse `args` (including the program name), run, and write the record to
/// `out`. Returns the process exit code; messages go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{}", text.ansi()) };
            return code;
        }
    };
    match execute(&cli.command).and_then(|(rec, fmt)| emit(&rec, fmt, out)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "mlf: {e}");
            e.code
        }
    }
}

fn emit(rec: &OutputRecord, fmt: Format, out: &mut dyn Write) -> Res<()> {
    match fmt {
        Format::Json => rec.write_json(out)?,
        Format::Csv => rec.write_csv(out)?,
    }
    Ok(())
}

pub fn execute(cmd: &Command) -> Res<(OutputRecord, Format)> {
    match cmd {
        Command::Eval(a) => Ok((cmd_eval(a)?, a.format)),
        Command::H(a) => Ok((cmd_h(a)?, a.format)),
        Command::Zeros(a) => Ok((cmd_zeros(a)?, a.format)),
        Command::Check(a) => Ok((cmd_check(a)?, a.format)),
        Command::Cm(a) => Ok((cmd_cm(a)?, a.format)),
        Command::Figure(a) => Ok((cmd_figure(a)?, a.format)),
    }
}

fn params(a: &ParamArgs) -> Res<Params> {
    Ok(Params::new(a.alpha, a.beta)?)
}

fn param_pairs(a: &ParamArgs) -> Vec<(&'static str, Field)> {
    vec![("alpha", a.alpha.into()), ("beta", a.beta.into())]
}

fn floats(s: &str, n: usize, what: &str) -> Res<Vec<f64>> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == n && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(CliError::usage(format!("--{what} expects {n} comma-separated finite numbers, got {s:?}"))),
    }
}

pub fn cmd_eval(a: &EvalArgs) -> Res<OutputRecord> {
    let p = params(&a.p)?;
    let r = mlf_core::eval(&p, Complex64::new(a.re, a.im), a.tol)?;
    let mut ps = param_pairs(&a.p);
    ps.extend([("re", a.re.into()), ("im", a.im.into()), ("tol", a.tol.into())]);
    let mut rec = OutputRecord::new("eval", ps, vec!["re", "im", "abs_err_est", "method"]);
    rec.push(vec![r.value.re.into(), r.value.im.into(), r.abs_err_est.into(), r.method.as_str().into()]);
    Ok(rec)
}

pub fn cmd_h(a: &HArgs) -> Res<OutputRecord> {
    let mut rec = OutputRecord::new("h", vec![("tol", a.tol.into())], vec!["x", "h", "h_prime", "residual"]);
    for &x in &a.x {
        let s = hfun::solve_h(x, a.tol)?;
        // h′ is undefined at 0 (only the one-sided limit exists)
        let d = if x > 0.0 { Some(hfun::h_prime(x)?) } else { None };
        rec.push(vec![x.into(), s.h.into(), d.into(), s.residual.into()]);
    }
    Ok(rec)
}

/// Count (and classify) with up to `retries` slightly grown rectangles when
/// the contour hits a zero. Returns the report, the rectangle used and the
/// number of retries spent.
pub fn classify_with_retries(p: &Params, r: &Rect, n_boundary: usize, retries: usize) -> Res<(ZeroReport, Rect, usize)> {
    let scale = (r.re_max - r.re_min).max(r.im_max - r.im_min);
    for k in 0..=retries {
        // irregular growth so a retry does not land on the next zero by design
        let rect = if k == 0 { *r } else { r.grown(scale * 0.00731 * k as f64) };
        match zeros::classify_zero_reality_with(p, &rect, n_boundary) {
            Err(Error::ContourThroughZero) => continue,
            Err(e) => return Err(e.into()),
            Ok(rep) => return Ok((rep, rect, k)),
        }
    }
    Err(CliError {
        code: 4,
        message: format!("counting contour passes through a zero after {retries} perturbed retries"),
    })
}

pub fn cmd_zeros(a: &ZerosArgs) -> Res<OutputRecord> {
    let p = params(&a.p)?;
    let mut ps = param_pairs(&a.p);
    ps.extend([("xmin", a.xmin.into()), ("xmax", a.xmax.into()), ("step", a.step.into())]);
    let mut rec = OutputRecord::new("zeros", ps, vec!["kind", "re", "im", "width", "multiplicity"]);
    for z in zeros::real_zero_scan(&p, a.xmin, a.xmax, a.step)? {
        rec.push(vec!["real".into(), z.location.into(), 0.0.into(), z.width.into(), z.multiplicity.into()]);
    }
    let Some(spec) = &a.rect else {
        return Ok(rec);
    };
    let v = floats(spec, 4, "rect")?;
    let r = Rect::new(v[0], v[1], v[2], v[3])?;
    rec.params.push(("rect", spec.as_str().into()));
    let (rep, used, tries) = classify_with_retries(&p, &r, a.boundary, CONTOUR_RETRIES)?;
    if let Some(side) = a.locate {
        for (b, n) in zeros::isolate_zeros(&p, &used, side)? {
            let c = Complex64::new(0.5 * (b.re_min + b.re_max), 0.5 * (b.im_min + b.im_max));
            let z = if n == 1 { zeros::polish_zero(&p, c).unwrap_or(c) } else { c };
            let w = (b.re_max - b.re_min).max(b.im_max - b.im_min);
            rec.push(vec!["located".into(), z.re.into(), z.im.into(), w.into(), n.into()]);
        }
    }
    rec.summary = vec![
        ("rect_count", rep.rect_count.into()),
        ("nonreal_count", rep.nonreal_count.into()),
        ("real_in_rect", rep.real_zeros.iter().map(|z| z.multiplicity as usize).sum::<usize>().into()),
        ("retries", tries.into()),
        ("rect_used", format!("{},{},{},{}", used.re_min, used.re_max, used.im_min, used.im_max).into()),
    ];
    Ok(rec)
}

/// The worker pool, capped by MLF_THREADS when set.
pub fn pool() -> Res<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MLF_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => b = b.num_threads(n),
            _ => return Err(CliError::usage(format!("MLF_THREADS must be a positive integer, got {v:?}"))),
        }
    }
    b.build().map_err(|e| CliError { code: 3, message: e.to_string() })
}

/// Grid check split into row blocks across the pool; records come back in
/// lattice order whatever the scheduling.
pub fn parallel_check(p: &Params, ineq: Inequality, g: &GridSpec, tol: f64) -> Res<Vec<ViolationRecord>> {
    let pool = pool()?;
    let block = g.n_im.div_ceil(4 * pool.current_num_threads()).max(1);
    let blocks: Vec<_> = (0..g.n_im).step_by(block).map(|s| s..(s + block).min(g.n_im)).collect();
    let parts: Vec<Result<Vec<ViolationRecord>, Error>> =
        pool.install(|| blocks.into_par_iter().map(|rows| inequal::check_rows(p, ineq, g, rows, tol)).collect());
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

pub fn cmd_check(a: &CheckArgs) -> Res<OutputRecord> {
    let p = params(&a.p)?;
    let v = floats(&a.grid, 4, "grid")?;
    let n: Vec<usize> = a.points.split(',').map(|t| t.trim().parse::<usize>()).collect::<Result<_, _>>().map_err(|_| CliError::usage("--points expects N or N_RE,N_IM"))?;
    let (n_re, n_im) = match n[..] {
        [n] => (n, n),
        [a, b] => (a, b),
        _ => return Err(CliError::usage("--points expects N or N_RE,N_IM")),
    };
    let g = GridSpec::new((v[0], v[1]), (v[2], v[3]), n_re, n_im)?;
    let ineq = match a.ineq {
        IneqArg::Le => Inequality::Le,
        IneqArg::Ge => Inequality::Ge,
        IneqArg::TwoSided => Inequality::TwoSided,
    };
    let found = parallel_check(&p, ineq, &g, a.tol)?;
    let mut ps = param_pairs(&a.p);
    ps.extend([
        ("ineq", ineq.as_str().into()),
        ("grid", a.grid.as_str().into()),
        ("n_re", n_re.into()),
        ("n_im", n_im.into()),
        ("tol", a.tol.into()),
    ]);
    let mut rec = OutputRecord::new("check", ps, vec!["re", "im", "lhs", "rhs", "margin", "budget", "bound"]);
    for r in &found {
        let bound = match r.bound {
            inequal::Bound::Upper => "upper",
            inequal::Bound::Lower => "lower",
        };
        rec.push(vec![r.z.re.into(), r.z.im.into(), r.lhs.into(), r.rhs.into(), r.margin.into(), r.budget.into(), bound.into()]);
    }
    rec.summary = vec![("points", g.len().into()), ("violations", found.len().into())];
    Ok(rec)
}

pub fn cmd_cm(a: &CmArgs) -> Res<OutputRecord> {
    let p = params(&a.p)?;
    let target = match a.target {
        TargetArg::EOfMinusX => Target::EOfMinusX,
        TargetArg::Reciprocal => Target::ReciprocalE,
    };
    let xs = a.points.clone().unwrap_or_else(|| cm::DEFAULT_POINTS.to_vec());
    let verdict = cm::is_cm_sampled(&p, target, &xs, a.order)?;
    let mut ps = param_pairs(&a.p);
    ps.extend([("target", target.as_str().into()), ("order", a.order.into())]);
    let mut rec = OutputRecord::new("cm", ps, vec!["x", "order", "signed_value", "err_est"]);
    for &x in &xs {
        let s = cm::cm_signs(&p, target, x, a.order)?;
        for (n, (v, e)) in s.values.iter().zip(&s.errs).enumerate() {
            rec.push(vec![x.into(), n.into(), (*v).into(), (*e).into()]);
        }
    }
    let ff = verdict.first_failure.as_ref();
    rec.summary = vec![
        ("pass", verdict.pass.into()),
        ("numerical_doubt", verdict.numerical_doubt.into()),
        ("first_failure_point", ff.map(|f| f.point).into()),
        ("first_failure_order", ff.map(|f| f.order).into()),
        ("first_failure_value", ff.map(|f| f.value).into()),
    ];
    Ok(rec)
}

pub fn cmd_figure(a: &FigureArgs) -> Res<OutputRecord> {
    if a.resolution < figure::MIN_RESOLUTION {
        return Err(CliError::usage(format!("--resolution must be at least {}", figure::MIN_RESOLUTION)));
    }
    let which = if a.which == 1 { Which::Additivity } else { Which::Inequality };
    let m = region_map_parallel(figure::ALPHA_RANGE, figure::BETA_RANGE, a.resolution)?;
    let (svg, csv) = figure::write_figure(&m, which, &a.out)?;
    let ps = vec![
        ("which", (a.which as usize).into()),
        ("resolution", a.resolution.into()),
        ("alpha_range", format!("{},{}", figure::ALPHA_RANGE.0, figure::ALPHA_RANGE.1).into()),
        ("beta_range", format!("{},{}", figure::BETA_RANGE.0, figure::BETA_RANGE.1).into()),
    ];
    let mut rec = OutputRecord::new("figure", ps, vec!["file", "kind"]);
    rec.push(vec![svg.display().to_string().into(), "svg".into()]);
    rec.push(vec![csv.display().to_string().into(), "csv".into()]);
    rec.summary = vec![("cells", m.cells.len().into())];
    Ok(rec)
}

/// region_map with the per-α root solves spread over the pool; the same
/// lattice and labels as the sequential version.
pub fn region_map_parallel(alpha_range: (f64, f64), beta_range: (f64, f64), resolution: usize) -> Res<inequal::RegionMap> {
    inequal::check_map_ranges(alpha_range, beta_range, resolution)?;
    let pool = pool()?;
    let strips: Vec<Result<inequal::RegionMap, Error>> = pool.install(|| {
        (0..resolution)
            .into_par_iter()
            .map(|i| {
                let a = inequal::lattice_point(alpha_range, i, resolution);
                single_alpha(a, beta_range, resolution)
            })
            .collect()
    });
    let mut m = inequal::RegionMap { alphas: Vec::new(), betas: Vec::new(), cells: Vec::new(), h_curve: Vec::new() };
    for s in strips {
        let s = s?;
        m.alphas.push(s.alphas[0]);
        m.h_curve.extend(s.h_curve);
        m.betas = s.betas;
        m.cells.extend(s.cells);
    }
    Ok(m)
}

fn single_alpha(a: f64, beta_range: (f64, f64), resolution: usize) -> Result<inequal::RegionMap, Error> {
    let h = hfun::solve_h(a, 1e-14)?.h;
    let betas: Vec<f64> = (0..resolution).map(|j| inequal::lattice_point(beta_range, j, resolution)).collect();
    let cells = betas
        .iter()
        .map(|&b| inequal::RegionCell { alpha: a, beta: b, label: inequal::classify_with_h(a, b, h), h_of_alpha: h })
        .collect();
    Ok(inequal::RegionMap { alphas: vec![a], betas, cells, h_curve: vec![(a, h)] })
}
