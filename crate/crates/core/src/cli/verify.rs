//! Self-checks run by `qpack verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cluster::GCluster;
use crate::embed::{Embedding, EmbeddingReport};
use crate::strip::{slice_oracle, StripConstraint, StripSpec};
use crate::Result;

/// Points closer than this to a face are not compared.
pub const MARGIN_GUARD: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleAgreement {
    pub compared: usize,
    pub skipped: usize,
    pub disagreements: usize,
}

/// Samples half of the points uniformly from `[-3/2, 3/2]^k`, the other half
/// next to the strip boundary (a uniform point rescaled onto the boundary,
/// perturbed by a relative `1e-3`, then shifted along `E`).
pub fn sample_points(emb: &Embedding, spec: &StripSpec, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let k = emb.k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let y: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.5..1.5)).collect();
        if out.len() % 2 == 0 {
            out.push(y);
            continue;
        }
        let g = spec.gauge(&y);
        if g <= 0.0 {
            continue;
        }
        let s = (1.0 + rng.gen_range(-1e-3..1e-3)) / g;
        let mut z: Vec<f64> = y.iter().map(|c| c * s).collect();
        for w in emb.rows() {
            let c = rng.gen_range(-5.0..5.0) / emb.kappa();
            for (zi, wi) in z.iter_mut().zip(w) {
                *zi += c * wi;
            }
        }
        out.push(z);
    }
    out
}

/// Compares determinant membership with the slice oracle.
pub fn oracle_agreement(spec: &StripSpec, samples: &[Vec<f64>]) -> Result<OracleAgreement> {
    let emb = spec.embedding();
    let results: Vec<Option<bool>> = samples
        .par_iter()
        .map(|y| {
            if spec.min_margin(y) < MARGIN_GUARD {
                return Ok(None);
            }
            Ok(Some(spec.in_strip(y)? == slice_oracle(emb, y)?))
        })
        .collect::<Result<_>>()?;
    let skipped = results.iter().filter(|r| r.is_none()).count();
    let disagreements = results.iter().filter(|r| **r == Some(false)).count();
    Ok(OracleAgreement {
        compared: results.len() - skipped,
        skipped,
        disagreements,
    })
}

/// Largest gap between a constraint's closed-form bound and the maximum of
/// its determinant over the cube vertices.
pub fn bound_discrepancy(constraints: &[StripConstraint]) -> f64 {
    constraints
        .par_iter()
        .map(|c| {
            let cof = c.cofactors();
            let best = (0..1u32 << cof.len())
                .map(|mask| {
                    cof.iter()
                        .enumerate()
                        .map(|(j, x)| if mask >> j & 1 == 1 { 0.5 * x } else { -0.5 * x })
                        .sum::<f64>()
                })
                .fold(f64::NEG_INFINITY, f64::max);
            (best - c.bound()).abs() / c.bound().max(1.0)
        })
        .reduce(|| 0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub closed: bool,
    pub embedding: EmbeddingReport,
    pub constraints: usize,
    pub active: usize,
    pub bound_discrepancy: f64,
    pub oracle: OracleAgreement,
}

impl VerifyReport {
    pub fn passes(&self) -> bool {
        self.closed
            && self.embedding.passes()
            && self.bound_discrepancy <= 1e-12
            && self.oracle.disagreements == 0
    }
}

pub fn verify(cluster: &GCluster, spec: &StripSpec, samples: usize, seed: u64) -> Result<VerifyReport> {
    let emb = spec.embedding();
    let pts = sample_points(emb, spec, samples, seed);
    Ok(VerifyReport {
        closed: cluster.is_closed(),
        embedding: emb.report(),
        constraints: spec.constraints().len(),
        active: spec.active_count(),
        bound_discrepancy: bound_discrepancy(spec.constraints()),
        oracle: oracle_agreement(spec, &pts)?,
    })
}
