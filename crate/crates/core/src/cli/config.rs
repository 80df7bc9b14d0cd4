//! JSON run configuration.
//!
//! A config is a flat JSON object. Every key except `group` is optional:
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `group` | required | `"C<n>"` or `"Y"` / `"icosahedral"` |
//! | `seeds` | `[]` | orbit seeds, one coordinate list each |
//! | `points` | none | explicit representatives (skips orbit closure) |
//! | `translation` | `0.1` | scalar (broadcast) or length-`k` list |
//! | `radius` | `9.0` | enumeration radius, or `"infinite"` |
//! | `radius_space` | `"super"` | `"super"` or `"physical"` |
//! | `cap` | `6000` | analysed lattice points, or `"unbounded"` |
//! | `method` | `"standard"` | pattern used by `diffract` |
//! | `p` | `50` | completion threshold in percent |
//! | `delta` | `"auto"` | admission distance, `"auto"` = half the minimum cluster spacing |
//! | `eps_pos` | `1e-4` | positional duplicate tolerance |
//! | `grid_min`, `grid_step`, `grid_counts` | `[-1.47,-1.47]`, `0.03`, `[100,100]` | diffraction grid |
//! | `threshold_ratio` | `1e-3` | peak threshold relative to `I(0)` |
//! | `output_dir` | `"out"` | where exports go |
//! | `formats` | `["csv"]` | any of `"csv"`, `"svg"`, `"latex"` |
//! | `name` | file stem | prefix of exported files |
//! | `verify_samples` | `10000` | samples for the oracle cross-check |
//! | `rng_seed` | `0` | sampling seed for `verify` |

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::cli::export::ExportFormat;
use crate::cluster::{build_cluster, GCluster, GroupSpec, OrbitSeed};
use crate::diffract::{GridSpec, DEFAULT_THRESHOLD_RATIO};
use crate::embed::embed;
use crate::generate::Method;
use crate::modified::{min_cluster_distance, ModifiedConfig};
use crate::strip::{RadiusSpace, StripSpec, DEFAULT_EPS_POS};
use crate::{Error, Result};

pub const DEFAULT_CAP: usize = 6000;

const KEYS: &[&str] = &[
    "group",
    "seeds",
    "points",
    "translation",
    "radius",
    "radius_space",
    "cap",
    "method",
    "p",
    "delta",
    "eps_pos",
    "grid_min",
    "grid_step",
    "grid_counts",
    "threshold_ratio",
    "output_dir",
    "formats",
    "name",
    "verify_samples",
    "rng_seed",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Translation {
    /// The same value in every coordinate.
    Uniform(f64),
    Vector(Vec<f64>),
}

impl Translation {
    pub fn resolve(&self, k: usize) -> Result<Vec<f64>> {
        match self {
            Translation::Uniform(t) => Ok(vec![*t; k]),
            Translation::Vector(v) if v.len() == k => Ok(v.clone()),
            Translation::Vector(v) => Err(Error::config(
                "translation",
                format!("expected {k} components (superspace dimension), got {}", v.len()),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Delta {
    /// Half the minimum distance between cluster points.
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub group: GroupSpec,
    pub seeds: Vec<OrbitSeed>,
    pub points: Option<Vec<Vec<f64>>>,
    pub translation: Translation,
    pub radius: f64,
    pub radius_space: RadiusSpace,
    pub cap: Option<usize>,
    pub method: Method,
    pub p: f64,
    pub delta: Delta,
    pub eps_pos: f64,
    pub grid: GridSpec,
    pub threshold_ratio: f64,
    pub output_dir: PathBuf,
    pub formats: Vec<ExportFormat>,
    pub verify_samples: usize,
    pub rng_seed: u64,
}

/// Reads and validates a config file. The file stem is the default `name`.
pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("pattern");
    RunConfig::from_json(&text, stem)
}

fn field<T: DeserializeOwned>(map: &Map<String, Value>, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| Error::config(key, e.to_string())),
    }
}

impl RunConfig {
    pub fn from_json(text: &str, default_name: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        let Value::Object(map) = value else {
            return Err(Error::config("<root>", "config must be a JSON object"));
        };
        if let Some(unknown) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::config(unknown, "unknown key"));
        }

        let group_name: String =
            field(&map, "group")?.ok_or_else(|| Error::config("group", "missing"))?;
        let group: GroupSpec = group_name
            .parse()
            .map_err(|e: Error| Error::config("group", e.to_string()))?;
        let d = group.dim();

        let seeds: Vec<Vec<f64>> = field(&map, "seeds")?.unwrap_or_default();
        for s in &seeds {
            if s.len() != d {
                return Err(Error::config(
                    "seeds",
                    format!("group {group} acts in dimension {d}, got seed {s:?}"),
                ));
            }
        }
        let points: Option<Vec<Vec<f64>>> = field(&map, "points")?;
        if let Some(pts) = &points {
            if let Some(bad) = pts.iter().find(|p| p.len() != d) {
                return Err(Error::config(
                    "points",
                    format!("group {group} acts in dimension {d}, got point {bad:?}"),
                ));
            }
        }
        if seeds.is_empty() && points.as_ref().is_none_or(Vec::is_empty) {
            return Err(Error::config("seeds", "at least one orbit seed is required"));
        }
        if points.is_some() && !seeds.is_empty() {
            return Err(Error::config("points", "give either `seeds` or `points`, not both"));
        }

        let translation = match map.get("translation") {
            None => Translation::Uniform(0.1),
            Some(Value::Number(n)) => Translation::Uniform(n.as_f64().unwrap_or(f64::NAN)),
            Some(_) => Translation::Vector(field(&map, "translation")?.unwrap_or_default()),
        };
        let finite = match &translation {
            Translation::Uniform(t) => t.is_finite(),
            Translation::Vector(v) => v.iter().all(|t| t.is_finite()),
        };
        if !finite {
            return Err(Error::config("translation", "must be finite"));
        }

        let radius = match map.get("radius") {
            Some(Value::String(s)) if s == "infinite" => f64::INFINITY,
            _ => field::<f64>(&map, "radius")?.unwrap_or(9.0),
        };
        if radius.is_nan() || radius < 0.0 {
            return Err(Error::config("radius", "must be non-negative"));
        }
        let radius_space: RadiusSpace = field(&map, "radius_space")?.unwrap_or_default();

        let cap = match map.get("cap") {
            None => Some(DEFAULT_CAP),
            Some(Value::Null) => None,
            Some(Value::String(s)) if s == "unbounded" => None,
            Some(_) => {
                let c: usize = field(&map, "cap")?.unwrap_or(DEFAULT_CAP);
                if c == 0 {
                    return Err(Error::config("cap", "must be at least 1"));
                }
                Some(c)
            }
        };
        if cap.is_none() && !radius.is_finite() {
            return Err(Error::config("cap", "an unbounded cap needs a finite radius"));
        }

        let method: Method = field(&map, "method")?.unwrap_or(Method::Standard);
        let p: f64 = field(&map, "p")?.unwrap_or(50.0);
        if !(p > 0.0 && p <= 100.0) {
            return Err(Error::config("p", format!("must lie in (0, 100], got {p}")));
        }

        let eps_pos: f64 = field(&map, "eps_pos")?.unwrap_or(DEFAULT_EPS_POS);
        if !(eps_pos > 0.0 && eps_pos.is_finite()) {
            return Err(Error::config("eps_pos", "must be positive"));
        }

        let delta = match map.get("delta") {
            None => Delta::Auto,
            Some(Value::String(s)) if s == "auto" => Delta::Auto,
            Some(_) => {
                let v: f64 = field(&map, "delta")?.unwrap_or(0.0);
                if v.is_nan() || v < eps_pos {
                    return Err(Error::config(
                        "delta",
                        format!("must be at least eps_pos ({eps_pos}), got {v}"),
                    ));
                }
                Delta::Value(v)
            }
        };

        let defaults = GridSpec::default();
        let grid = GridSpec {
            min: field(&map, "grid_min")?.unwrap_or(defaults.min),
            step: field(&map, "grid_step")?.unwrap_or(defaults.step),
            counts: field(&map, "grid_counts")?.unwrap_or(defaults.counts),
        };
        if !(grid.step > 0.0 && grid.step.is_finite()) {
            return Err(Error::config("grid_step", "must be positive"));
        }
        if grid.counts.contains(&0) {
            return Err(Error::config("grid_counts", "must be at least 1"));
        }
        let threshold_ratio: f64 =
            field(&map, "threshold_ratio")?.unwrap_or(DEFAULT_THRESHOLD_RATIO);
        if !(threshold_ratio > 0.0 && threshold_ratio < 1.0) {
            return Err(Error::config("threshold_ratio", "must lie in (0, 1)"));
        }

        let output_dir: PathBuf = field(&map, "output_dir")?.unwrap_or_else(|| PathBuf::from("out"));
        let formats: Vec<ExportFormat> = field(&map, "formats")?.unwrap_or(vec![ExportFormat::Csv]);
        let name: String = field(&map, "name")?.unwrap_or_else(|| default_name.to_string());
        let verify_samples: usize = field(&map, "verify_samples")?.unwrap_or(10_000);
        if verify_samples == 0 {
            return Err(Error::config("verify_samples", "must be at least 1"));
        }
        let rng_seed: u64 = field(&map, "rng_seed")?.unwrap_or(0);

        Ok(RunConfig {
            name,
            group,
            seeds: seeds.into_iter().map(OrbitSeed::new).collect(),
            points,
            translation,
            radius,
            radius_space,
            cap,
            method,
            p,
            delta,
            eps_pos,
            grid,
            threshold_ratio,
            output_dir,
            formats,
            verify_samples,
            rng_seed,
        })
    }

    /// The cluster: orbit closure of the seeds, or the explicit points.
    pub fn cluster(&self) -> Result<GCluster> {
        match &self.points {
            Some(pts) => GCluster::from_reps(self.group, pts.clone())
                .map_err(|e| Error::config("points", e.to_string())),
            None => build_cluster(self.group, &self.seeds)
                .map_err(|e| Error::config("seeds", e.to_string())),
        }
    }

    pub fn strip_spec(&self, cluster: &GCluster) -> Result<StripSpec> {
        let emb = embed(cluster)?;
        let t = self.translation.resolve(emb.k())?;
        StripSpec::new(emb, t, self.radius, self.cap)?
            .with_radius_space(self.radius_space)
            .with_eps_pos(self.eps_pos)
    }

    pub fn modified_config(&self, cluster: &GCluster) -> ModifiedConfig {
        let delta = match self.delta {
            Delta::Auto => 0.5 * min_cluster_distance(cluster),
            Delta::Value(v) => v,
        };
        ModifiedConfig { p: self.p, delta }
    }
}
