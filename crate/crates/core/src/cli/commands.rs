use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::cli::config::RunConfig;
use crate::cli::export::{write_intensity_csv, write_pattern, write_peaks_csv, ExportFormat};
use crate::cli::verify::verify;
use crate::diffract::{diffraction_map, extract_peaks};
use crate::embed::embed;
use crate::generate::{generate_standard, Method, Pattern};
use crate::modified::generate_modified;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Orbit,
    Generate,
    Modify,
    Diffract,
    Verify,
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orbit" => Ok(Command::Orbit),
            "generate" => Ok(Command::Generate),
            "modify" => Ok(Command::Modify),
            "diffract" => Ok(Command::Diffract),
            "verify" => Ok(Command::Verify),
            other => Err(Error::InvalidArgument(format!("unknown command `{other}`"))),
        }
    }
}

/// Command-line overrides of the config.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub formats: Option<Vec<ExportFormat>>,
}

/// `key=value` summary lines, warnings, and the files written.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub lines: Vec<(String, String)>,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
    /// False when `verify` found a discrepancy.
    pub ok: bool,
}

impl Report {
    fn push(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn run(command: Command, cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let mut report = Report {
        ok: true,
        ..Report::default()
    };
    let cluster = cfg.cluster()?;
    report.push("group", cfg.group);
    report.push("k", cluster.k());

    if command == Command::Orbit {
        for (i, v) in cluster.reps().iter().enumerate() {
            let coords: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            report.push(&format!("v{}", i + 1), coords.join(","));
        }
        report.push("kappa", embed(&cluster)?.kappa());
        return Ok(report);
    }

    let spec = cfg.strip_spec(&cluster)?;
    report.push("constraints", spec.constraints().len());
    report.push("active_constraints", spec.active_count());

    if command == Command::Verify {
        let v = verify(&cluster, &spec, cfg.verify_samples, cfg.rng_seed)?;
        report.push("closed", v.closed);
        report.push("max_cross", v.embedding.max_cross);
        report.push("norm_spread", v.embedding.norm_spread);
        report.push("bound_discrepancy", v.bound_discrepancy);
        report.push("oracle_compared", v.oracle.compared);
        report.push("oracle_skipped", v.oracle.skipped);
        report.push("oracle_disagreements", v.oracle.disagreements);
        report.ok = v.passes();
        report.push("result", if report.ok { "pass" } else { "fail" });
        return Ok(report);
    }

    let method = match command {
        Command::Generate => Method::Standard,
        Command::Modify => Method::Modified,
        _ => cfg.method,
    };
    let started = Instant::now();
    let pattern = match method {
        Method::Standard => generate_standard(&spec),
        Method::Modified => generate_modified(&spec, &cfg.modified_config(&cluster))?,
    };
    report.push("method", method);
    report.push("analysed", pattern.analysed);
    report.push("emitted", pattern.len());
    report.push("truncated", pattern.truncated);
    if pattern.truncated {
        report.warnings.push(format!(
            "enumeration stopped at cap = {} with lattice points left unvisited",
            pattern.analysed
        ));
    }
    if let Some(d) = pattern.config.delta {
        report.push("delta", d);
    }

    let out_dir = opts.out_dir.clone().unwrap_or_else(|| cfg.output_dir.clone());
    fs::create_dir_all(&out_dir)?;
    let stem = format!("{}_{}", cfg.name, method);

    if command == Command::Diffract {
        let map = diffraction_map(&pattern, &cfg.grid, cfg.threshold_ratio)?;
        let peaks = extract_peaks(&map);
        report.push("i0", map.i0);
        report.push("peaks", peaks.len());
        report.push("elapsed_s", started.elapsed().as_secs_f64());
        let path = out_dir.join(format!("{stem}_intensity.csv"));
        write_intensity_csv(&map, BufWriter::new(File::create(&path)?))?;
        report.files.push(path);
        let path = out_dir.join(format!("{stem}_peaks.csv"));
        write_peaks_csv(&peaks, BufWriter::new(File::create(&path)?))?;
        report.files.push(path);
    } else {
        report.push("elapsed_s", started.elapsed().as_secs_f64());
        let formats = opts.formats.clone().unwrap_or_else(|| cfg.formats.clone());
        for f in formats {
            let path = out_dir.join(format!("{stem}.{}", f.extension()));
            export(&pattern, f, cfg.p, &path)?;
            report.files.push(path);
        }
    }
    for f in &report.files {
        report.lines.push(("wrote".into(), f.display().to_string()));
    }
    Ok(report)
}

fn export(pattern: &Pattern, format: ExportFormat, p: f64, path: &Path) -> Result<()> {
    write_pattern(pattern, format, p, BufWriter::new(File::create(path)?))
}
