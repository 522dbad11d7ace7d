//! The two parameter-space figures: additivity regions (1) and inequality
//! regions (2), each as an SVG 1.1 image plus a CSV of every lattice cell.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use mlf_core::inequal::{Additivity, IneqLabel, RegionMap};

use crate::record::fmt_num;

pub const CSV_COLUMNS: [&str; 5] = ["alpha", "beta", "ineq_label", "additivity_label", "h_of_alpha"];
pub const MIN_RESOLUTION: usize = 50;
pub const ALPHA_RANGE: (f64, f64) = (0.1, 4.0);
pub const BETA_RANGE: (f64, f64) = (0.0, 8.0);

const ORANGE: &str = "#f0a030";
const GREEN: &str = "#4caf50";
const GRAY: &str = "#b0b0b0";
const BLUE: &str = "#1f4fd8";

const W: f64 = 560.0;
const H: f64 = 560.0;
const LEFT: f64 = 60.0;
const TOP: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Additivity,
    Inequality,
}

impl Which {
    pub fn number(self) -> u8 {
        match self {
            Which::Additivity => 1,
            Which::Inequality => 2,
        }
    }
}

struct Layer {
    id: &'static str,
    class: &'static str,
    fill: &'static str,
}

fn layers(which: Which) -> Vec<Layer> {
    match which {
        Which::Additivity => vec![
            Layer { id: Additivity::Super.as_str(), class: "proved", fill: ORANGE },
            Layer { id: Additivity::Sub.as_str(), class: "proved", fill: GREEN },
            Layer { id: Additivity::Neither.as_str(), class: "proved", fill: GRAY },
        ],
        Which::Inequality => vec![
            Layer { id: IneqLabel::LeHolds.as_str(), class: "proved", fill: ORANGE },
            Layer { id: IneqLabel::GeHolds.as_str(), class: "proved", fill: GREEN },
            Layer { id: IneqLabel::Neither.as_str(), class: "proved", fill: GRAY },
            Layer { id: IneqLabel::GeConjectured.as_str(), class: "conjectured", fill: "url(#hatch-green)" },
            Layer { id: IneqLabel::NeitherConjectured.as_str(), class: "conjectured", fill: "url(#hatch-gray)" },
        ],
    }
}

fn label_of(m: &RegionMap, which: Which, i: usize, j: usize) -> &'static str {
    let c = m.cell(i, j).label;
    match which {
        Which::Additivity => c.additivity.as_str(),
        Which::Inequality => c.ineq.as_str(),
    }
}

/// Lattice points are cell centres; the cells tile the plot area exactly.
struct Frame {
    na: usize,
    nb: usize,
    a0: f64,
    a1: f64,
    b0: f64,
    b1: f64,
}

impl Frame {
    fn new(m: &RegionMap) -> Self {
        let (na, nb) = (m.alphas.len(), m.betas.len());
        let da = (m.alphas[na - 1] - m.alphas[0]) / (na - 1) as f64;
        let db = (m.betas[nb - 1] - m.betas[0]) / (nb - 1) as f64;
        Frame {
            na,
            nb,
            a0: m.alphas[0] - 0.5 * da,
            a1: m.alphas[na - 1] + 0.5 * da,
            b0: m.betas[0] - 0.5 * db,
            b1: m.betas[nb - 1] + 0.5 * db,
        }
    }

    fn x(&self, a: f64) -> f64 {
        LEFT + W * (a - self.a0) / (self.a1 - self.a0)
    }

    fn y(&self, b: f64) -> f64 {
        TOP + H * (1.0 - (b - self.b0) / (self.b1 - self.b0))
    }

    fn col(&self, i: usize) -> (f64, f64) {
        (LEFT + W * i as f64 / self.na as f64, LEFT + W * (i + 1) as f64 / self.na as f64)
    }

    fn row(&self, j: usize) -> (f64, f64) {
        // top edge, bottom edge
        (TOP + H * (1.0 - (j + 1) as f64 / self.nb as f64), TOP + H * (1.0 - j as f64 / self.nb as f64))
    }
}

pub fn svg(m: &RegionMap, which: Which) -> String {
    let f = Frame::new(m);
    let mut s = String::new();
    let (tw, th) = (LEFT + W + 20.0, TOP + H + 50.0);
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{tw}" height="{th}" viewBox="0 0 {tw} {th}">"#
    );
    let title = match which {
        Which::Additivity => "Super-/sub-additivity of Gamma(beta) E_{alpha,beta} on the positive half-line",
        Which::Inequality => "Global inequalities |E(z)| vs E(Re z)",
    };
    let _ = writeln!(s, "<title>{title}</title>");
    s.push_str(concat!(
        "<defs>\n",
        "<pattern id=\"hatch-green\" patternUnits=\"userSpaceOnUse\" width=\"8\" height=\"8\" patternTransform=\"rotate(45)\">",
        "<rect width=\"8\" height=\"8\" fill=\"#ffffff\"/><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"8\" stroke=\"#4caf50\" stroke-width=\"3\"/></pattern>\n",
        "<pattern id=\"hatch-gray\" patternUnits=\"userSpaceOnUse\" width=\"3\" height=\"3\" patternTransform=\"rotate(45)\">",
        "<rect width=\"3\" height=\"3\" fill=\"#ffffff\"/><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"3\" stroke=\"#b0b0b0\" stroke-width=\"1.5\"/></pattern>\n",
    ));
    let _ = writeln!(s, r#"<clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{W}" height="{H}"/></clipPath>"#);
    s.push_str("</defs>\n");

    for layer in layers(which) {
        let _ = writeln!(s, r#"<g id="{}" class="{}" fill="{}" stroke="none">"#, layer.id, layer.class, layer.fill);
        // one polygon per run of equal labels in an α column
        for i in 0..f.na {
            let (x0, x1) = f.col(i);
            let mut j = 0;
            while j < f.nb {
                if label_of(m, which, i, j) != layer.id {
                    j += 1;
                    continue;
                }
                let start = j;
                while j < f.nb && label_of(m, which, i, j) == layer.id {
                    j += 1;
                }
                let (y_top, _) = f.row(j - 1);
                let (_, y_bot) = f.row(start);
                let _ = writeln!(s, r#"<polygon points="{x0:.3},{y_bot:.3} {x1:.3},{y_bot:.3} {x1:.3},{y_top:.3} {x0:.3},{y_top:.3}"/>"#);
            }
        }
        s.push_str("</g>\n");
    }

    let pts: Vec<String> = m.h_curve.iter().map(|&(a, h)| format!("{:.3},{:.3}", f.x(a), f.y(h))).collect();
    let _ = writeln!(
        s,
        r#"<g id="h_curve" class="proved" clip-path="url(#plot)"><polyline fill="none" stroke="{BLUE}" stroke-width="2" points="{}"/></g>"#,
        pts.join(" ")
    );

    axes(&mut s, &f);
    s.push_str("</svg>\n");
    s
}

fn axes(s: &mut String, f: &Frame) {
    let _ = writeln!(s, r#"<g id="axes" stroke="black" fill="none" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{W}" height="{H}"/>"#);
    for k in (f.a0.ceil() as i64)..=(f.a1.floor() as i64) {
        let x = f.x(k as f64);
        let _ = writeln!(s, r#"<line x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}"/>"#, TOP + H, TOP + H + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.3}" y="{:.3}" stroke="none" fill="black" text-anchor="middle">{k}</text>"#, TOP + H + 18.0);
    }
    for k in (f.b0.ceil() as i64)..=(f.b1.floor() as i64) {
        let y = f.y(k as f64);
        let _ = writeln!(s, r#"<line x1="{:.3}" y1="{y:.3}" x2="{LEFT}" y2="{y:.3}"/>"#, LEFT - 5.0);
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" stroke="none" fill="black" text-anchor="end">{k}</text>"#, LEFT - 8.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" stroke="none" fill="black" text-anchor="middle">alpha</text>"#, LEFT + 0.5 * W, TOP + H + 38.0);
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.3}" stroke="none" fill="black" text-anchor="middle" transform="rotate(-90 15 {:.3})">beta</text>"#,
        TOP + 0.5 * H,
        TOP + 0.5 * H
    );
    s.push_str("</g>\n");
}

pub fn write_csv<W: Write>(m: &RegionMap, w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_COLUMNS)?;
    for c in &m.cells {
        let num = |v: f64| fmt_num(v).unwrap_or_default();
        out.write_record([num(c.alpha), num(c.beta), c.label.ineq.as_str().into(), c.label.additivity.as_str().into(), num(c.h_of_alpha)])?;
    }
    out.flush()
}

/// Write to a sibling temporary file, then rename over `path`; nothing partial
/// is left behind on failure.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let name = path.file_name().ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let res = fs::write(&tmp, bytes).and_then(|()| fs::rename(&tmp, path));
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    res
}

/// Paths of the SVG and CSV for figure `which` under `dir`.
pub fn paths(dir: &Path, which: Which) -> (PathBuf, PathBuf) {
    let n = which.number();
    (dir.join(format!("figure{n}.svg")), dir.join(format!("figure{n}.csv")))
}

pub fn write_figure(m: &RegionMap, which: Which, dir: &Path) -> io::Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let (svg_path, csv_path) = paths(dir, which);
    let mut csv_bytes = Vec::new();
    write_csv(m, &mut csv_bytes)?;
    write_atomic(&svg_path, svg(m, which).as_bytes())?;
    write_atomic(&csv_path, &csv_bytes)?;
    Ok((svg_path, csv_path))
}
