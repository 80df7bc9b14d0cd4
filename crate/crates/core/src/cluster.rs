//! Point-group orbits and G-clusters.
//!
//! Two groups are supported: the cyclic group `C_n` acting on the plane by
//! rotations through `2π/n`, and the icosahedral rotation group `Y = 235`
//! acting on space through the generators
//!
//! ```text
//! a = | (τ-1)/2   -τ/2     1/2    |      b = diag(-1, -1, 1)
//!     |  τ/2       1/2    (τ-1)/2 |
//!     | -1/2      (τ-1)/2  τ/2    |
//! ```
//!
//! with `τ = (1+√5)/2`, subject to `a^5 = b^2 = (ab)^3 = e`.
//!
//! Only `C_8`, `C_10` and `C_12` (and `Y`) occur in physical quasicrystals;
//! any `n >= 3` is accepted.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Row-major 3×3 matrix.
pub type Mat3 = [[f64; 3]; 3];

/// Tolerance used when deduplicating group elements.
pub const EPS_MAT: f64 = 1e-9;

/// Orbit points are deduplicated within `EPS_DUP_REL * max point norm`.
pub const EPS_DUP_REL: f64 = 1e-9;

/// Coordinates below this (relative) size are rounding residue of exact zeros.
const SNAP_REL: f64 = 1e-14;

/// The golden ratio `(1+√5)/2` at full precision.
pub fn tau() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    /// Cyclic group `C_n` acting on the plane.
    Cyclic(u32),
    /// Icosahedral rotation group acting on space.
    Icosahedral,
}

impl GroupSpec {
    /// Physical dimension the group acts on.
    pub fn dim(&self) -> usize {
        match self {
            GroupSpec::Cyclic(_) => 2,
            GroupSpec::Icosahedral => 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GroupSpec::Cyclic(n) if n < 3 => Err(Error::InvalidArgument(format!(
                "cyclic group order must be at least 3, got {n}"
            ))),
            _ => Ok(()),
        }
    }

    /// Generating rotations of the group.
    pub fn generators(&self) -> Vec<Rotation> {
        match *self {
            GroupSpec::Cyclic(n) => vec![Rotation::planar(2.0 * PI / f64::from(n))],
            GroupSpec::Icosahedral => {
                let (a, b) = icosahedral_generators();
                vec![Rotation::spatial(a), Rotation::spatial(b)]
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Icosahedral => write!(f, "Y"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `C<n>` (e.g. `C12`) or `Y` / `icosahedral`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("y") || s.eq_ignore_ascii_case("icosahedral") {
            return Ok(GroupSpec::Icosahedral);
        }
        let order = s
            .strip_prefix('C')
            .or_else(|| s.strip_prefix('c'))
            .and_then(|n| n.parse::<u32>().ok())
            .ok_or_else(|| {
                Error::InvalidArgument(format!("unknown group `{s}` (expected C<n> or Y)"))
            })?;
        let group = GroupSpec::Cyclic(order);
        group.validate()?;
        Ok(group)
    }
}

/// A rotation of the plane or of space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    dim: usize,
    m: Mat3,
}

impl Rotation {
    pub fn planar(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Rotation {
            dim: 2,
            m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn spatial(m: Mat3) -> Self {
        Rotation { dim: 3, m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.m[r][c] * v[c]).sum())
            .collect()
    }
}

/// A nonzero point whose orbit contributes to a cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrbitSeed(Vec<f64>);

impl OrbitSeed {
    pub fn new(coords: Vec<f64>) -> Self {
        OrbitSeed(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    fn check(&self, dim: usize) -> Result<()> {
        crate::error::check_len(dim, self.0.len())?;
        if self.0.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "orbit seed {:?} has non-finite coordinates",
                self.0
            )));
        }
        if norm(&self.0) == 0.0 {
            return Err(Error::InvalidArgument(
                "orbit seed must be nonzero (the origin is a trivial orbit)".into(),
            ));
        }
        Ok(())
    }
}

/// The cyclic orbit `a^j(seed)`, `j = 0..n-1`, in order of `j`.
pub fn cyclic_orbit(n: u32, seed: &OrbitSeed) -> Result<Vec<Vec<f64>>> {
    GroupSpec::Cyclic(n).validate()?;
    seed.check(2)?;
    let scale = norm(seed.coords());
    let orbit = (0..n)
        .map(|j| {
            let mut p = Rotation::planar(2.0 * PI * f64::from(j) / f64::from(n)).apply(seed.coords());
            snap(&mut p, scale);
            p
        })
        .collect();
    Ok(orbit)
}

/// The generators `a` and `b` of the icosahedral group.
pub fn icosahedral_generators() -> (Mat3, Mat3) {
    let t = tau();
    let a = [
        [(t - 1.0) / 2.0, -t / 2.0, 0.5],
        [t / 2.0, 0.5, (t - 1.0) / 2.0],
        [-0.5, (t - 1.0) / 2.0, t / 2.0],
    ];
    let b = [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
    (a, b)
}

pub fn mat_mul(x: &Mat3, y: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|i| x[r][i] * y[i][c]).sum();
        }
    }
    out
}

pub fn mat_max_diff(x: &Mat3, y: &Mat3) -> f64 {
    x.iter()
        .flatten()
        .zip(y.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// All 60 elements of the icosahedral rotation group, generated by
/// breadth-first closure of `{a, b}` starting at the identity.
pub fn icosahedral_group() -> Vec<Mat3> {
    let (a, b) = icosahedral_generators();
    let identity = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut elements = vec![identity];
    let mut next = 0;
    while next < elements.len() {
        let g = elements[next];
        next += 1;
        for h in [&a, &b] {
            let m = mat_mul(h, &g);
            if !elements.iter().any(|e| mat_max_diff(e, &m) <= EPS_MAT) {
                elements.push(m);
            }
        }
    }
    elements
}

/// Distinct images of `seed` under the icosahedral group, sorted
/// lexicographically. The length is 12, 20, 30 or 60.
pub fn icosahedral_orbit(seed: &OrbitSeed) -> Result<Vec<Vec<f64>>> {
    seed.check(3)?;
    let scale = norm(seed.coords());
    let eps = EPS_DUP_REL * scale;
    let mut orbit: Vec<Vec<f64>> = Vec::with_capacity(60);
    for g in icosahedral_group() {
        let mut p = Rotation::spatial(g).apply(seed.coords());
        snap(&mut p, scale);
        if !orbit.iter().any(|q| max_diff(q, &p) <= eps) {
            orbit.push(p);
        }
    }
    orbit.sort_by(|x, y| lex_cmp(x, y, eps));
    Ok(orbit)
}

/// A symmetric finite set `{±v_1, ..., ±v_k}` that is a union of orbits,
/// stored through one representative per antipodal pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GCluster {
    group: GroupSpec,
    reps: Vec<Vec<f64>>,
    eps_dup: f64,
}

impl GCluster {
    /// Wraps explicit representatives without closing them under the group.
    ///
    /// Representatives must be nonzero, pairwise neither equal nor antipodal,
    /// and at least `d` in number. Closure under the group is *not* checked
    /// here; see [`GCluster::is_closed`].
    pub fn from_reps(group: GroupSpec, reps: Vec<Vec<f64>>) -> Result<Self> {
        group.validate()?;
        let d = group.dim();
        for r in &reps {
            OrbitSeed(r.clone()).check(d)?;
        }
        let max_norm = reps.iter().map(|r| norm(r)).fold(0.0, f64::max);
        let eps_dup = EPS_DUP_REL * max_norm;
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[..i] {
                if max_diff(a, b) <= eps_dup || max_sum(a, b) <= eps_dup {
                    return Err(Error::InvalidArgument(format!(
                        "cluster points {a:?} and {b:?} coincide up to sign"
                    )));
                }
            }
        }
        if reps.len() < d {
            return Err(Error::InvalidArgument(format!(
                "cluster needs at least {d} representatives, got {}",
                reps.len()
            )));
        }
        Ok(GCluster {
            group,
            reps,
            eps_dup,
        })
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    /// Physical dimension `d`.
    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// Number of antipodal pairs `k` (the superspace dimension).
    pub fn k(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Vec<f64>] {
        &self.reps
    }

    pub fn eps_dup(&self) -> f64 {
        self.eps_dup
    }

    /// All `2k` points: `v_1, ..., v_k, -v_1, ..., -v_k`.
    pub fn symmetric_points(&self) -> Vec<Vec<f64>> {
        let neg = self.reps.iter().map(|v| v.iter().map(|c| -c).collect());
        self.reps.iter().cloned().chain(neg).collect()
    }

    /// Whether every generator maps `{±v_i}` onto itself within `eps_dup`.
    pub fn is_closed(&self) -> bool {
        let points = self.symmetric_points();
        self.group.generators().iter().all(|g| {
            points.iter().all(|p| {
                let image = g.apply(p);
                points.iter().any(|q| max_diff(q, &image) <= self.eps_dup)
            })
        })
    }
}

/// Union of the orbits of `seeds`, reduced to one representative per
/// antipodal pair.
///
/// Cyclic orbits are walked in rotation order and the first point met from
/// each pair is kept, so a single even-order orbit yields `a^j(seed)` for
/// `j < n/2`. Icosahedral orbits keep the lexicographically larger point of
/// each pair, sorted. Orbits that are not centrally symmetric contribute
/// their symmetric closure. Coincident points from different seeds merge.
pub fn build_cluster(group: GroupSpec, seeds: &[OrbitSeed]) -> Result<GCluster> {
    group.validate()?;
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("at least one orbit seed is required".into()));
    }
    let orbits = seeds
        .iter()
        .map(|s| match group {
            GroupSpec::Cyclic(n) => cyclic_orbit(n, s),
            GroupSpec::Icosahedral => icosahedral_orbit(s),
        })
        .collect::<Result<Vec<_>>>()?;
    let max_norm = orbits
        .iter()
        .flatten()
        .map(|p| norm(p))
        .fold(0.0, f64::max);
    let eps = EPS_DUP_REL * max_norm;

    let mut reps: Vec<Vec<f64>> = Vec::new();
    let push = |reps: &mut Vec<Vec<f64>>, v: Vec<f64>| {
        if !reps
            .iter()
            .any(|r| max_diff(r, &v) <= eps || max_sum(r, &v) <= eps)
        {
            reps.push(v);
        }
    };
    for orbit in orbits {
        match group {
            GroupSpec::Cyclic(_) => orbit.into_iter().for_each(|v| push(&mut reps, v)),
            GroupSpec::Icosahedral => {
                let mut canon: Vec<Vec<f64>> = orbit
                    .into_iter()
                    .map(|v| {
                        let neg: Vec<f64> = v.iter().map(|c| -c).collect();
                        if lex_cmp(&v, &neg, eps) == Ordering::Less {
                            neg
                        } else {
                            v
                        }
                    })
                    .collect();
                canon.sort_by(|x, y| lex_cmp(x, y, eps));
                canon.into_iter().for_each(|v| push(&mut reps, v));
            }
        }
    }
    if reps.is_empty() {
        return Err(Error::InvalidArgument("cluster is empty".into()));
    }
    GCluster::from_reps(group, reps)
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub(crate) fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn max_sum(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max)
}

/// Lexicographic order treating coordinates within `eps` as equal.
pub(crate) fn lex_cmp(a: &[f64], b: &[f64], eps: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > eps {
            return x.total_cmp(y);
        }
    }
    Ordering::Equal
}

fn snap(v: &mut [f64], scale: f64) {
    for c in v.iter_mut() {
        if c.abs() <= SNAP_REL * scale {
            *c = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(c: &[f64]) -> OrbitSeed {
        OrbitSeed::new(c.to_vec())
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        max_diff(a, b) < 1e-12
    }

    #[test]
    fn twelvefold_orbit_is_regular_dodecagon() {
        let orbit = cyclic_orbit(12, &seed(&[1.0, 0.0])).unwrap();
        assert_eq!(orbit.len(), 12);
        for (j, p) in orbit.iter().enumerate() {
            let ang = j as f64 * PI / 6.0;
            assert!(close(p, &[ang.cos(), ang.sin()]), "j={j}: {p:?}");
        }
    }

    #[test]
    fn square_orbit() {
        let orbit = cyclic_orbit(4, &seed(&[1.0, 0.0])).unwrap();
        let expected = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        for (p, e) in orbit.iter().zip(expected) {
            assert!(close(p, &e));
        }
    }

    #[test]
    fn cyclic_orbit_rejects_bad_input() {
        assert!(cyclic_orbit(12, &seed(&[0.0, 0.0])).is_err());
        assert!(cyclic_orbit(2, &seed(&[1.0, 0.0])).is_err());
        assert!(cyclic_orbit(12, &seed(&[1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn cyclic_rotation_has_order_n() {
        for n in [3u32, 5, 8, 10, 12] {
            let a = Rotation::planar(2.0 * PI / f64::from(n));
            let mut m = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
            for _ in 0..n {
                m = mat_mul(a.matrix(), &m);
            }
            let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
            assert!(mat_max_diff(&m, &id) < EPS_MAT, "C{n}");
        }
    }

    #[test]
    fn twelvefold_reps_follow_basis_table() {
        let c = build_cluster(GroupSpec::Cyclic(12), &[seed(&[1.0, 0.0])]).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let expected = [
            [1.0, 0.0],
            [h, 0.5],
            [0.5, h],
            [0.0, 1.0],
            [-0.5, h],
            [-h, 0.5],
        ];
        assert_eq!(c.k(), 6);
        for (r, e) in c.reps().iter().zip(expected) {
            assert!(close(r, &e), "{r:?} vs {e:?}");
        }
        assert!(c.is_closed());
    }

    #[test]
    fn square_cluster() {
        let c = build_cluster(GroupSpec::Cyclic(4), &[seed(&[1.0, 0.0])]).unwrap();
        assert_eq!(c.k(), 2);
        assert!(close(&c.reps()[0], &[1.0, 0.0]));
        assert!(close(&c.reps()[1], &[0.0, 1.0]));
    }

    #[test]
    fn odd_cyclic_orbit_is_symmetrised() {
        let c = build_cluster(GroupSpec::Cyclic(5), &[seed(&[1.0, 0.0])]).unwrap();
        assert_eq!(c.k(), 5);
        assert!(c.is_closed());
    }

    #[test]
    fn icosahedral_generator_relations() {
        let (a, b) = icosahedral_generators();
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let pow = |m: &Mat3, n: usize| (0..n).fold(id, |acc, _| mat_mul(m, &acc));
        assert!(mat_max_diff(&pow(&a, 5), &id) < EPS_MAT);
        assert!(mat_max_diff(&pow(&b, 2), &id) < EPS_MAT);
        assert!(mat_max_diff(&pow(&mat_mul(&a, &b), 3), &id) < EPS_MAT);
        let t = tau();
        let a_e1 = Rotation::spatial(a).apply(&[1.0, 0.0, 0.0]);
        assert!(close(&a_e1, &[(t - 1.0) / 2.0, t / 2.0, -0.5]));
    }

    #[test]
    fn icosahedral_group_has_sixty_rotations() {
        let g = icosahedral_group();
        assert_eq!(g.len(), 60);
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(g.iter().any(|m| mat_max_diff(m, &id) < EPS_MAT));
        for m in &g {
            // orthogonal with determinant +1
            let mut mt = [[0.0; 3]; 3];
            for r in 0..3 {
                for c in 0..3 {
                    mt[r][c] = m[c][r];
                }
            }
            assert!(mat_max_diff(&mat_mul(m, &mt), &id) < EPS_MAT);
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            assert!((det - 1.0).abs() < EPS_MAT);
        }
    }

    #[test]
    fn icosahedral_orbit_lengths() {
        let t = tau();
        assert_eq!(icosahedral_orbit(&seed(&[1.0, t, 0.0])).unwrap().len(), 12);
        assert_eq!(icosahedral_orbit(&seed(&[1.0, 1.0, 1.0])).unwrap().len(), 20);
        assert_eq!(icosahedral_orbit(&seed(&[1.0, 0.0, 0.0])).unwrap().len(), 30);
        assert_eq!(icosahedral_orbit(&seed(&[0.3, 0.7, 1.1])).unwrap().len(), 60);
        assert!(icosahedral_orbit(&seed(&[0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn every_rotation_preserves_icosahedron() {
        let t = tau();
        let ico = icosahedral_orbit(&seed(&[1.0, t, 0.0])).unwrap();
        for g in icosahedral_group() {
            for p in &ico {
                let q = Rotation::spatial(g).apply(p);
                assert!(ico.iter().any(|r| max_diff(r, &q) < 1e-9));
            }
        }
    }

    #[test]
    fn three_shell_icosahedral_cluster() {
        let t = tau();
        let seeds = [seed(&[1.0, t, 0.0]), seed(&[1.0, 1.0, 1.0]), seed(&[1.0, 0.0, 0.0])];
        let c = build_cluster(GroupSpec::Icosahedral, &seeds).unwrap();
        assert_eq!(c.k(), 31);
        assert!(c.is_closed());
        // one representative per pair, lexicographically larger
        for r in c.reps() {
            let neg: Vec<f64> = r.iter().map(|x| -x).collect();
            assert_eq!(lex_cmp(r, &neg, 1e-12), Ordering::Greater);
        }
    }

    #[test]
    fn generic_icosahedral_orbit_gets_symmetric_closure() {
        let c = build_cluster(GroupSpec::Icosahedral, &[seed(&[0.3, 0.7, 1.1])]).unwrap();
        assert_eq!(c.k(), 60);
        assert!(c.is_closed());
    }

    #[test]
    fn coincident_seeds_merge() {
        let c = build_cluster(
            GroupSpec::Cyclic(8),
            &[seed(&[1.0, 0.0]), seed(&[0.0, 1.0]), seed(&[-1.0, 0.0])],
        )
        .unwrap();
        assert_eq!(c.k(), 4);
    }

    #[test]
    fn build_cluster_errors() {
        assert!(build_cluster(GroupSpec::Cyclic(12), &[]).is_err());
        assert!(build_cluster(GroupSpec::Cyclic(12), &[seed(&[0.0, 0.0])]).is_err());
        assert!(build_cluster(GroupSpec::Icosahedral, &[seed(&[1.0, 0.0])]).is_err());
    }

    #[test]
    fn perturbed_reps_are_not_closed() {
        let c = build_cluster(GroupSpec::Cyclic(12), &[seed(&[1.0, 0.0])]).unwrap();
        let mut reps = c.reps().to_vec();
        reps[2][0] += 1e-3;
        let bad = GCluster::from_reps(GroupSpec::Cyclic(12), reps).unwrap();
        assert!(!bad.is_closed());
    }

    #[test]
    fn group_spec_parsing() {
        assert_eq!("C12".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic(12));
        assert_eq!("icosahedral".parse::<GroupSpec>().unwrap(), GroupSpec::Icosahedral);
        assert!("C2".parse::<GroupSpec>().is_err());
        assert!("D6".parse::<GroupSpec>().is_err());
        assert_eq!(GroupSpec::Cyclic(8).to_string(), "C8");
    }
}
