//! Pattern and diffraction exports.
//!
//! CSV files carry full `f64` precision (shortest round-trip form). The LaTeX
//! picture uses fixed `F10.5` fields with the same layout as the reference
//! FORTRAN listing: the pattern offset by `(10, 20)`, low-occupancy points as
//! `\circle*{0.2}`, high-occupancy points as `\circle{0.4}`, and the cluster
//! itself drawn around `(32, 20)`.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diffract::{DiffractionMap, Peak};
use crate::generate::{LatticePoint, Pattern, ProjectedPoint};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Svg,
    Latex,
}

impl ExportFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Svg => "svg",
            ExportFormat::Latex => "tex",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "svg" => Ok(ExportFormat::Svg),
            "latex" | "tex" => Ok(ExportFormat::Latex),
            other => Err(Error::InvalidArgument(format!("unknown export format `{other}`"))),
        }
    }
}

const AXES: [&str; 3] = ["x", "y", "z"];

/// Header `x,y[,z],s1,...,sk,n`, one row per point.
pub fn write_pattern_csv<W: Write>(pattern: &Pattern, out: W) -> Result<()> {
    let (d, k) = (pattern.dim(), pattern.k());
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = AXES[..d]
        .iter()
        .map(|s| s.to_string())
        .chain((1..=k).map(|i| format!("s{i}")))
        .chain(std::iter::once("n".to_string()))
        .collect();
    w.write_record(&header)?;
    for p in &pattern.points {
        let row: Vec<String> = p
            .phys
            .iter()
            .map(|c| c.to_string())
            .chain(p.source.coords().iter().map(|c| c.to_string()))
            .chain(std::iter::once(p.occupation.to_string()))
            .collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_pattern_csv`].
pub fn read_pattern_csv<R: Read>(input: R) -> Result<Vec<ProjectedPoint>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let d = header.iter().take_while(|h| AXES.contains(h)).count();
    let k = header.iter().filter(|h| h.starts_with('s')).count();
    if d == 0 || header.len() != d + k + 1 || header.get(d + k) != Some("n") {
        return Err(Error::InvalidArgument(format!(
            "unexpected pattern header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let bad = |line: usize, what: &str| Error::InvalidArgument(format!("row {line}: bad {what}"));
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let phys = rec
            .iter()
            .take(d)
            .map(str::parse)
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|_| bad(line + 2, "coordinate"))?;
        let source = rec
            .iter()
            .skip(d)
            .take(k)
            .map(str::parse)
            .collect::<std::result::Result<Vec<i64>, _>>()
            .map_err(|_| bad(line + 2, "lattice coordinate"))?;
        let occupation = rec
            .get(d + k)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(line + 2, "occupation"))?;
        out.push(ProjectedPoint {
            phys,
            source: LatticePoint(source),
            occupation,
        });
    }
    Ok(out)
}

/// FORTRAN `F10.5`: five decimals, right-aligned in ten columns, leading
/// zero dropped for `|x| < 1`, asterisks on overflow.
pub fn fortran_f10_5(x: f64) -> String {
    let mut s = format!("{x:.5}");
    if let Some(rest) = s.strip_prefix("0.") {
        s = format!(".{rest}");
    } else if let Some(rest) = s.strip_prefix("-0.") {
        s = format!("-.{rest}");
    }
    if s.len() > 10 {
        "*".repeat(10)
    } else {
        format!("{s:>10}")
    }
}

fn put(x: f64, y: f64, shape: &str) -> String {
    format!("\\put( {},{}){{{shape}}} ", fortran_f10_5(x), fortran_f10_5(y))
}

/// Occupation above which a point is drawn as an open circle.
fn highlight_threshold(pattern: &Pattern, p: f64) -> f64 {
    pattern.k() as f64 * p * 2.0 / 100.0
}

/// The `\put` lines of the picture, in output order.
pub fn latex_lines(pattern: &Pattern, p: f64) -> Vec<String> {
    let thr = highlight_threshold(pattern, p);
    let xy = |q: &ProjectedPoint| (q.phys[0], q.phys.get(1).copied().unwrap_or(0.0));
    let mut lines = vec!["\\put(32.0,20.0){\\circle*{0.2}} ".to_string()];
    for q in pattern.points.iter().filter(|q| f64::from(q.occupation) <= thr) {
        let (x, y) = xy(q);
        lines.push(put(10.0 + x, 20.0 + y, "\\circle*{0.2}"));
    }
    for q in pattern.points.iter().filter(|q| f64::from(q.occupation) > thr) {
        let (x, y) = xy(q);
        lines.push(put(10.0 + x, 20.0 + y, "\\circle{0.4}"));
    }
    for v in &pattern.config.cluster {
        let (x, y) = (v[0], v.get(1).copied().unwrap_or(0.0));
        lines.push(put(32.0 + x, 20.0 + y, "\\circle*{0.2}"));
        lines.push(put(32.0 - x, 20.0 - y, "\\circle*{0.2}"));
    }
    lines
}

/// A `picture` environment; `p` is the highlight percentage.
pub fn write_pattern_latex<W: Write>(pattern: &Pattern, p: f64, mut out: W) -> Result<()> {
    writeln!(out, "\\setlength{{\\unitlength}}{{1.5mm}}")?;
    writeln!(out, "\\begin{{picture}}(50,20)(0,0)")?;
    for line in latex_lines(pattern, p) {
        writeln!(out, "{line}")?;
    }
    writeln!(out, "\\end{{picture}}")?;
    Ok(())
}

/// Scatter plot of the first two coordinates, `y` pointing up.
pub fn write_pattern_svg<W: Write>(pattern: &Pattern, p: f64, mut out: W) -> Result<()> {
    let thr = highlight_threshold(pattern, p);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for q in &pattern.points {
        for a in 0..2 {
            let c = q.phys.get(a).copied().unwrap_or(0.0);
            lo[a] = lo[a].min(c);
            hi[a] = hi[a].max(c);
        }
    }
    if pattern.is_empty() {
        lo = [-1.0; 2];
        hi = [1.0; 2];
    }
    let m = 1.0;
    let (w, h) = (hi[0] - lo[0] + 2.0 * m, hi[1] - lo[1] + 2.0 * m);
    let mut body = String::new();
    for q in &pattern.points {
        let x = q.phys[0];
        let y = q.phys.get(1).copied().unwrap_or(0.0);
        if f64::from(q.occupation) > thr {
            let _ = writeln!(
                body,
                r#"<circle cx="{x:.6}" cy="{:.6}" r="0.2" fill="none" stroke="black" stroke-width="0.04"/>"#,
                -y
            );
        } else {
            let _ = writeln!(body, r#"<circle cx="{x:.6}" cy="{:.6}" r="0.1"/>"#, -y);
        }
    }
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {w:.6} {h:.6}" width="{:.0}" height="{:.0}">"#,
        lo[0] - m,
        -hi[1] - m,
        w * 20.0,
        h * 20.0
    )?;
    write!(out, "{body}")?;
    writeln!(out, "</svg>")?;
    Ok(())
}

pub fn write_pattern<W: Write>(pattern: &Pattern, format: ExportFormat, p: f64, out: W) -> Result<()> {
    match format {
        ExportFormat::Csv => write_pattern_csv(pattern, out),
        ExportFormat::Svg => write_pattern_svg(pattern, p, out),
        ExportFormat::Latex => write_pattern_latex(pattern, p, out),
    }
}

/// `nx` rows of `ny` intensities; row `i` is `ξ_1 = min_1 + i · step`.
pub fn write_intensity_csv<W: Write>(map: &DiffractionMap, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let ny = map.grid.counts[1];
    for row in map.intensity.chunks(ny) {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_peaks_csv<W: Write>(peaks: &[Peak], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "j", "xi1", "xi2", "intensity"])?;
    for p in peaks {
        w.write_record([
            p.index[0].to_string(),
            p.index[1].to_string(),
            p.xi[0].to_string(),
            p.xi[1].to_string(),
            p.intensity.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
