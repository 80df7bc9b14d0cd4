//! Superspace embedding of a G-cluster.
//!
//! Row `a` of the embedding is `w_a = (v_{a1}, ..., v_{ak})`, the `a`-th
//! coordinate of every representative. For a genuine G-cluster the rows are
//! orthogonal with common norm `κ`, and span the physical subspace `E`.
//!
//! Physical coordinates are the *scaled* coordinates `⟨x, w_a⟩`, i.e. the
//! coordinates of the orthogonal projection in the basis `κ^{-2} w_a`. They
//! are `κ` times the metric coordinates; divide by `κ` to get the latter.
//! With this convention `project_phys(e_i) = v_i`.

use crate::cluster::GCluster;
use crate::error::check_len;
use crate::{Error, Result};

/// Relative tolerance for the orthogonality and equal-norm checks.
pub const EMBED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    w: Vec<Vec<f64>>,
    kappa: f64,
}

/// Builds the embedding and verifies that the rows are orthogonal with equal
/// norm. A failure means the input is not a union of orbits.
pub fn embed(cluster: &GCluster) -> Result<Embedding> {
    let d = cluster.dim();
    let w: Vec<Vec<f64>> = (0..d)
        .map(|a| cluster.reps().iter().map(|v| v[a]).collect())
        .collect();
    Embedding::from_rows(w)
}

impl Embedding {
    /// Wraps `d` rows of length `k`, checking the embedding invariants.
    pub fn from_rows(w: Vec<Vec<f64>>) -> Result<Self> {
        let d = w.len();
        if d == 0 {
            return Err(Error::InvalidArgument("embedding needs at least one row".into()));
        }
        let k = w[0].len();
        for row in &w {
            check_len(k, row.len())?;
        }
        let kappa = dot(&w[0], &w[0]).sqrt();
        if kappa == 0.0 || !kappa.is_finite() {
            return Err(Error::NotClusterEmbedding("w_1 has zero norm".into()));
        }
        let report = EmbeddingReport::of(&w, kappa);
        if report.max_cross > EMBED_TOL * kappa * kappa {
            return Err(Error::NotClusterEmbedding(format!(
                "rows are not orthogonal (max |<w_a,w_b>| = {:.3e}, kappa^2 = {:.6})",
                report.max_cross,
                kappa * kappa
            )));
        }
        if report.norm_spread > EMBED_TOL * kappa {
            return Err(Error::NotClusterEmbedding(format!(
                "rows do not share a norm (spread {:.3e}, kappa = {:.6})",
                report.norm_spread, kappa
            )));
        }
        Ok(Embedding { w, kappa })
    }

    /// Physical dimension `d`.
    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// Superspace dimension `k`.
    pub fn k(&self) -> usize {
        self.w[0].len()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.w
    }

    /// Column `i`, i.e. the cluster representative `v_i`.
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.w.iter().map(|row| row[i]).collect()
    }

    pub fn report(&self) -> EmbeddingReport {
        EmbeddingReport::of(&self.w, self.kappa)
    }

    /// Scaled physical coordinates `(⟨x,w_1⟩, ..., ⟨x,w_d⟩)`.
    pub fn project_phys(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.k(), x.len())?;
        Ok(self.w.iter().map(|row| dot(row, x)).collect())
    }

    /// Physical coordinates of an integer lattice point, summed in the same
    /// order as [`Embedding::project_phys`] so both agree bit for bit.
    pub fn project_lattice(&self, x: &[i64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.k());
        self.w
            .iter()
            .map(|row| row.iter().zip(x).map(|(w, &xi)| w * xi as f64).sum())
            .collect()
    }

    /// `x - π x`, the component of `x` orthogonal to the physical subspace.
    pub fn project_perp(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.k(), x.len())?;
        let k2 = self.kappa * self.kappa;
        let mut out = x.to_vec();
        for row in &self.w {
            let c = dot(row, x) / k2;
            for (o, w) in out.iter_mut().zip(row) {
                *o -= c * w;
            }
        }
        Ok(out)
    }
}

/// Measured deviation of the rows from an orthogonal, equal-norm family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingReport {
    /// `max_{a≠b} |⟨w_a, w_b⟩|`
    pub max_cross: f64,
    /// `max_a |‖w_a‖ - κ|`
    pub norm_spread: f64,
    pub kappa: f64,
}

impl EmbeddingReport {
    fn of(w: &[Vec<f64>], kappa: f64) -> Self {
        let mut max_cross = 0.0f64;
        let mut norm_spread = 0.0f64;
        for (a, wa) in w.iter().enumerate() {
            norm_spread = norm_spread.max((dot(wa, wa).sqrt() - kappa).abs());
            for wb in &w[..a] {
                max_cross = max_cross.max(dot(wa, wb).abs());
            }
        }
        EmbeddingReport {
            max_cross,
            norm_spread,
            kappa,
        }
    }

    pub fn passes(&self) -> bool {
        self.max_cross <= EMBED_TOL * self.kappa * self.kappa
            && self.norm_spread <= EMBED_TOL * self.kappa
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{build_cluster, GroupSpec, OrbitSeed};
    use proptest::prelude::*;

    fn c12() -> Embedding {
        let c = build_cluster(GroupSpec::Cyclic(12), &[OrbitSeed::new(vec![1.0, 0.0])]).unwrap();
        embed(&c).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn twelvefold_rows() {
        let e = c12();
        let h = 3f64.sqrt() / 2.0;
        assert_close(&e.rows()[0], &[1.0, h, 0.5, 0.0, -0.5, -h], 1e-15);
        assert_close(&e.rows()[1], &[0.0, 0.5, h, 1.0, h, 0.5], 1e-15);
        assert!((e.kappa() * e.kappa() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn square_is_identity_embedding() {
        let c = build_cluster(GroupSpec::Cyclic(4), &[OrbitSeed::new(vec![1.0, 0.0])]).unwrap();
        let e = embed(&c).unwrap();
        assert_close(&e.rows()[0], &[1.0, 0.0], 1e-15);
        assert_close(&e.rows()[1], &[0.0, 1.0], 1e-15);
        assert!((e.kappa() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perturbed_cluster_is_rejected() {
        let c = build_cluster(GroupSpec::Cyclic(12), &[OrbitSeed::new(vec![1.0, 0.0])]).unwrap();
        let mut reps = c.reps().to_vec();
        reps[1][1] += 1e-3;
        let bad = GCluster::from_reps(GroupSpec::Cyclic(12), reps).unwrap();
        let err = embed(&bad).unwrap_err();
        assert!(matches!(err, Error::NotClusterEmbedding(_)));
        assert!(err.to_string().contains("not a G-cluster embedding"));
    }

    #[test]
    fn unit_vectors_project_to_cluster_points() {
        let e = c12();
        for i in 0..6 {
            let mut x = vec![0.0; 6];
            x[i] = 1.0;
            assert_close(&e.project_phys(&x).unwrap(), &e.column(i), 0.0);
        }
        assert_close(&e.project_phys(&[0.0; 6]).unwrap(), &[0.0, 0.0], 0.0);
        let p = e.project_phys(&[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_close(&p, &[1.0, 1.0], 1e-15);
    }

    #[test]
    fn lattice_and_real_projection_agree() {
        let e = c12();
        let x = [3i64, -2, 7, 0, -5, 1];
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        assert_eq!(e.project_lattice(&x), e.project_phys(&xf).unwrap());
    }

    #[test]
    fn perp_of_physical_vectors_vanishes() {
        let e = c12();
        let tol = 1e-9 * e.kappa();
        let p = e.project_perp(&e.rows()[0]).unwrap();
        assert!(p.iter().all(|c| c.abs() <= tol));
        let mut e1 = vec![0.0; 6];
        e1[0] = 1.0;
        let p = e.project_perp(&e1).unwrap();
        assert!(dot(&p, &e.rows()[1]).abs() <= tol);
    }

    #[test]
    fn dimension_mismatch() {
        let e = c12();
        assert!(matches!(
            e.project_phys(&[1.0; 5]),
            Err(Error::DimensionMismatch { expected: 6, got: 5 })
        ));
        assert!(e.project_perp(&[1.0; 7]).is_err());
    }

    proptest! {
        #[test]
        fn pythagoras_and_idempotence(x in prop::collection::vec(-5.0f64..5.0, 6)) {
            let e = c12();
            let perp = e.project_perp(&x).unwrap();
            let phys = e.project_phys(&x).unwrap();
            let lhs = dot(&x, &x);
            let rhs = dot(&perp, &perp) + dot(&phys, &phys) / (e.kappa() * e.kappa());
            prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs.max(1e-12));
            let twice = e.project_perp(&perp).unwrap();
            for (a, b) in twice.iter().zip(&perp) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
            // perp + orthogonal projection reconstructs x
            let k2 = e.kappa() * e.kappa();
            for i in 0..6 {
                let proj: f64 = (0..2).map(|a| phys[a] * e.rows()[a][i] / k2).sum();
                prop_assert!((perp[i] + proj - x[i]).abs() <= 1e-12);
            }
        }

        #[test]
        fn unit_steps_shift_by_cluster_points(
            x in prop::collection::vec(-20i64..20, 6),
            i in 0usize..6,
        ) {
            let e = c12();
            let mut y = x.clone();
            y[i] += 1;
            let a = e.project_lattice(&x);
            let b = e.project_lattice(&y);
            let v = e.column(i);
            for c in 0..2 {
                prop_assert!((b[c] - a[c] - v[c]).abs() <= 1e-12);
            }
        }
    }
}
