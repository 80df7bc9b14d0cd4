//! Modified strip projection.
//!
//! Starting from the standard fragment, lattice points are scanned in
//! decreasing order of occupation `n(x)`. A point whose occupation exceeds
//! `p%` of `2k` is treated as the centre of a cluster to complete: it is
//! projected together with all `2k` arithmetic neighbours, whether or not
//! those lie in the strip. Any other point is projected only if it keeps a
//! distance of at least `δ` from everything emitted so far.
//!
//! Completion points skip the `δ` test (they only go through the `ε_pos`
//! duplicate check) and are not radius-gated, so clusters on the edge of the
//! fragment are completed too.

use rayon::prelude::*;

use crate::cluster::GCluster;
use crate::generate::{
    enumerate_fragment, gated_points, occupation, LatticePoint, Method, Pattern, PatternConfig,
    ProjectedPoint,
};
use crate::spatial::PointIndex;
use crate::strip::StripSpec;
use crate::{Error, Result};

/// Threshold and admission distance for [`generate_modified`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedConfig {
    /// Percentage of the `2k` neighbours a centre must exceed, in `(0, 100]`.
    pub p: f64,
    /// Minimum admission distance in scaled physical units.
    pub delta: f64,
}

impl ModifiedConfig {
    /// `δ = 0.5 · min_cluster_distance(cluster)`.
    pub fn with_auto_delta(p: f64, cluster: &GCluster) -> Self {
        ModifiedConfig {
            p,
            delta: 0.5 * min_cluster_distance(cluster),
        }
    }

    /// Occupation a centre must strictly exceed: `p · 2k / 100`.
    pub fn threshold(&self, k: usize) -> f64 {
        self.p * 2.0 * k as f64 / 100.0
    }

    fn validate(&self, eps_pos: f64) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 100.0) {
            return Err(Error::InvalidArgument(format!(
                "p must lie in (0, 100], got {}",
                self.p
            )));
        }
        if self.delta.is_nan() || self.delta < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "delta must be non-negative, got {}",
                self.delta
            )));
        }
        if self.delta < eps_pos {
            return Err(Error::InvalidArgument(format!(
                "delta ({}) is below the duplicate tolerance eps_pos ({eps_pos})",
                self.delta
            )));
        }
        Ok(())
    }
}

/// Smallest nonzero distance between two of the `2k` points `{±v_i}`.
pub fn min_cluster_distance(cluster: &GCluster) -> f64 {
    let pts = cluster.symmetric_points();
    let mut best = f64::INFINITY;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[..i] {
            let d = a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            if d > 0.0 && d < best {
                best = d;
            }
        }
    }
    best
}

/// How a point entered a modified pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// A high-occupancy centre.
    Centre,
    /// A neighbour projected to complete a centre's cluster.
    Completion,
    /// A low-occupancy point that passed the distance test.
    Admitted,
}

/// The modified pattern plus the provenance of each emitted point and the
/// centres in scan order (with their occupations).
#[derive(Debug, Clone)]
pub struct ModifiedOutcome {
    pub pattern: Pattern,
    pub provenance: Vec<Provenance>,
    pub scanned: Vec<(LatticePoint, u32)>,
}

pub fn generate_modified(spec: &StripSpec, cfg: &ModifiedConfig) -> Result<Pattern> {
    generate_modified_traced(spec, cfg).map(|o| o.pattern)
}

/// [`generate_modified`] keeping the bookkeeping used by invariant checks.
pub fn generate_modified_traced(spec: &StripSpec, cfg: &ModifiedConfig) -> Result<ModifiedOutcome> {
    cfg.validate(spec.eps_pos())?;
    let fragment = enumerate_fragment(spec);
    let mut candidates: Vec<(LatticePoint, Vec<f64>, u32)> = gated_points(spec, &fragment)
        .into_par_iter()
        .map(|(x, phys)| {
            let n = occupation(spec, &x);
            (x, phys, n)
        })
        .collect();
    candidates.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));

    let k = spec.k();
    let threshold = cfg.threshold(k);
    let eps = spec.eps_pos();
    let emb = spec.embedding();
    let cell = if cfg.delta.is_finite() { cfg.delta.max(eps) } else { eps };
    let mut index = PointIndex::new(cell.max(1e-12));
    let mut points = Vec::new();
    let mut provenance = Vec::new();
    let mut scanned = Vec::with_capacity(candidates.len());

    for (x, phys, n) in candidates {
        scanned.push((x.clone(), n));
        if f64::from(n) > threshold {
            if !index.any_within(&phys, eps) {
                index.insert(phys.clone());
                points.push(ProjectedPoint {
                    phys,
                    source: x.clone(),
                    occupation: n,
                });
                provenance.push(Provenance::Centre);
            }
            for nb in x.neighbours() {
                let q = emb.project_lattice(nb.coords());
                if index.any_within(&q, eps) {
                    continue;
                }
                index.insert(q.clone());
                let occ = occupation(spec, &nb);
                points.push(ProjectedPoint {
                    phys: q,
                    source: nb,
                    occupation: occ,
                });
                provenance.push(Provenance::Completion);
            }
        } else if !index.any_within(&phys, cfg.delta) {
            index.insert(phys.clone());
            points.push(ProjectedPoint {
                phys,
                source: x,
                occupation: n,
            });
            provenance.push(Provenance::Admitted);
        }
    }

    let mut config = PatternConfig::from_spec(spec);
    config.p = Some(cfg.p);
    config.delta = Some(cfg.delta);
    Ok(ModifiedOutcome {
        pattern: Pattern {
            points,
            method: Method::Modified,
            config,
            analysed: fragment.analysed,
            truncated: fragment.truncated,
        },
        provenance,
        scanned,
    })
}
