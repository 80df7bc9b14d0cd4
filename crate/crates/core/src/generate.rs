//! Breadth-first enumeration of the translated strip and the standard
//! strip-projection pattern.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spatial::PointIndex;
use crate::strip::{RadiusSpace, StripSpec};

/// A point of `Z^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// `self ± e_i`.
    pub fn step(&self, i: usize, sign: i64) -> LatticePoint {
        let mut c = self.0.clone();
        c[i] += sign;
        LatticePoint(c)
    }

    /// The `2k` arithmetic neighbours in expansion order: for `i = 1..k`,
    /// first `-e_i`, then `+e_i`.
    pub fn neighbours(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (0..self.0.len()).flat_map(move |i| [self.step(i, -1), self.step(i, 1)])
    }
}

/// A projected point with its lattice source and occupation number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectedPoint {
    /// Scaled physical coordinates `π(source)`.
    pub phys: Vec<f64>,
    pub source: LatticePoint,
    /// Number of the `2k` neighbours of `source` lying in the strip.
    pub occupation: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Standard,
    Modified,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Standard => "standard",
            Method::Modified => "modified",
        })
    }
}

/// Parameters a pattern was generated with.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternConfig {
    /// Cluster representatives `v_1, ..., v_k`.
    pub cluster: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
    pub radius: f64,
    pub radius_space: RadiusSpace,
    pub cap: Option<usize>,
    pub eps_pos: f64,
    pub p: Option<f64>,
    pub delta: Option<f64>,
}

impl PatternConfig {
    pub(crate) fn from_spec(spec: &StripSpec) -> Self {
        let emb = spec.embedding();
        PatternConfig {
            cluster: (0..emb.k()).map(|i| emb.column(i)).collect(),
            translation: spec.translation().to_vec(),
            radius: spec.radius(),
            radius_space: spec.radius_space(),
            cap: spec.cap(),
            eps_pos: spec.eps_pos(),
            p: None,
            delta: None,
        }
    }
}

/// A finite fragment of a quasiperiodic point set.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub points: Vec<ProjectedPoint>,
    pub method: Method,
    pub config: PatternConfig,
    /// Lattice points analysed by the enumeration.
    pub analysed: usize,
    /// The enumeration stopped at the cap with work left in the queue.
    pub truncated: bool,
}

impl Pattern {
    /// Physical dimension.
    pub fn dim(&self) -> usize {
        self.config.cluster.first().map_or(0, Vec::len)
    }

    /// Superspace dimension.
    pub fn k(&self) -> usize {
        self.config.cluster.len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.phys.clone()).collect()
    }
}

/// The in-strip lattice points met by the walk, in dequeue order.
#[derive(Debug, Clone, PartialEq)]
pub struct Fragment {
    pub inside: Vec<LatticePoint>,
    pub analysed: usize,
    pub truncated: bool,
}

/// `round` with halves away from zero, as FORTRAN's `ANINT`.
fn round_half_away(x: f64) -> i64 {
    x.round() as i64
}

/// Breadth-first walk of the lattice from `round(t)`.
///
/// Each dequeued point inside the translated strip enqueues its `2k`
/// neighbours (`-e_1, +e_1, ..., -e_k, +e_k`) unless already seen; points
/// outside the strip are dead ends. The walk stops after `cap` dequeues.
/// Without a cap, only neighbours passing the radius gate are enqueued so
/// that the walk terminates.
pub fn enumerate_fragment(spec: &StripSpec) -> Fragment {
    let start = LatticePoint(spec.translation().iter().map(|&t| round_half_away(t)).collect());
    let mut queue = VecDeque::from([start.clone()]);
    let mut seen: HashSet<LatticePoint> = HashSet::from([start]);
    let mut inside = Vec::new();
    let mut analysed = 0usize;
    let cap = spec.cap();
    let mut truncated = false;

    while let Some(x) = queue.pop_front() {
        if cap.is_some_and(|c| analysed >= c) {
            truncated = true;
            break;
        }
        analysed += 1;
        if !spec.lattice_in_strip(x.coords()) {
            continue;
        }
        for n in x.neighbours() {
            if seen.contains(&n) {
                continue;
            }
            if cap.is_none() && !spec.within_radius(n.coords()) {
                continue;
            }
            seen.insert(n.clone());
            queue.push_back(n);
        }
        inside.push(x);
    }
    Fragment {
        inside,
        analysed,
        truncated,
    }
}

/// Number of the `2k` neighbours of `x` inside the translated strip.
pub fn occupation(spec: &StripSpec, x: &LatticePoint) -> u32 {
    let mut c = x.0.clone();
    let mut n = 0;
    for i in 0..c.len() {
        for s in [-1, 1] {
            c[i] += s;
            n += u32::from(spec.lattice_in_strip(&c));
            c[i] -= s;
        }
    }
    n
}

/// Radius-gated, position-deduplicated in-strip points with their
/// projections, in enumeration order.
pub(crate) fn gated_points(spec: &StripSpec, fragment: &Fragment) -> Vec<(LatticePoint, Vec<f64>)> {
    let emb = spec.embedding();
    let eps = spec.eps_pos();
    let mut index = PointIndex::new(eps.max(1e-12));
    let mut out = Vec::new();
    for x in &fragment.inside {
        if !spec.within_radius(x.coords()) {
            continue;
        }
        let phys = emb.project_lattice(x.coords());
        if index.any_within(&phys, eps) {
            continue;
        }
        index.insert(phys.clone());
        out.push((x.clone(), phys));
    }
    out
}

/// The standard strip-projection pattern of the fragment.
pub fn generate_standard(spec: &StripSpec) -> Pattern {
    let fragment = enumerate_fragment(spec);
    let gated = gated_points(spec, &fragment);
    let points = gated
        .into_par_iter()
        .map(|(source, phys)| ProjectedPoint {
            occupation: occupation(spec, &source),
            phys,
            source,
        })
        .collect();
    Pattern {
        points,
        method: Method::Standard,
        config: PatternConfig::from_spec(spec),
        analysed: fragment.analysed,
        truncated: fragment.truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{build_cluster, GroupSpec, OrbitSeed};
    use crate::embed::embed;

    fn spec(n: u32, t: f64, radius: f64, cap: Option<usize>) -> StripSpec {
        let c = build_cluster(GroupSpec::Cyclic(n), &[OrbitSeed::new(vec![1.0, 0.0])]).unwrap();
        let emb = embed(&c).unwrap();
        let k = emb.k();
        StripSpec::new(emb, vec![t; k], radius, cap).unwrap()
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round_half_away(0.5), 1);
        assert_eq!(round_half_away(-0.5), -1);
        assert_eq!(round_half_away(0.1), 0);
        assert_eq!(round_half_away(-1.49), -1);
    }

    #[test]
    fn neighbour_order() {
        let x = LatticePoint(vec![0, 0]);
        let n: Vec<_> = x.neighbours().map(|p| p.0).collect();
        assert_eq!(n, vec![vec![-1, 0], vec![1, 0], vec![0, -1], vec![0, 1]]);
    }

    #[test]
    fn walk_starts_at_rounded_translation() {
        let f = enumerate_fragment(&spec(12, 0.1, 9.0, Some(6000)));
        assert_eq!(f.inside[0].0, vec![0; 6]);
        let s = spec(12, 0.6, 9.0, Some(1));
        let f = enumerate_fragment(&s);
        assert_eq!(f.analysed, 1);
        assert!(f.truncated);
        assert!(f.inside.len() <= 1);
    }

    #[test]
    fn zero_radius_gives_empty_pattern() {
        let p = generate_standard(&spec(12, 0.1, 0.0, Some(500)));
        assert!(p.is_empty());
        assert_eq!(p.analysed, 500);
    }

    #[test]
    fn origin_is_fully_occupied() {
        let s = spec(12, 0.0, 9.0, Some(6000));
        assert_eq!(occupation(&s, &LatticePoint(vec![0; 6])), 12);
    }

    #[test]
    fn occupation_is_symmetric_without_translation() {
        let s = spec(12, 0.0, 9.0, Some(6000));
        let pts = [
            vec![1, 0, 0, 0, 0, 0],
            vec![1, 1, 0, -1, 0, 0],
            vec![2, 1, 1, 0, -1, 0],
            vec![0, 1, 1, 1, 0, -1],
        ];
        for p in pts {
            let neg: Vec<i64> = p.iter().map(|c| -c).collect();
            assert_eq!(
                occupation(&s, &LatticePoint(p.clone())),
                occupation(&s, &LatticePoint(neg))
            );
        }
    }

    #[test]
    fn isolated_point_has_zero_occupation() {
        let s = spec(12, 0.1, 9.0, Some(10));
        let far = LatticePoint(vec![50, -50, 50, -50, 50, -50]);
        assert!(far.neighbours().all(|n| !s.lattice_in_strip(n.coords())));
        assert_eq!(occupation(&s, &far), 0);
    }

    #[test]
    fn generation_is_deterministic() {
        let s = spec(10, 0.13, 6.0, Some(3000));
        let a = generate_standard(&s);
        let b = generate_standard(&s);
        assert_eq!(a, b);
        for (p, q) in a.points.iter().zip(&b.points) {
            for (x, y) in p.phys.iter().zip(&q.phys) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn sources_are_in_strip_and_unique() {
        let s = spec(12, 0.1, 9.0, Some(6000));
        let p = generate_standard(&s);
        let mut seen = HashSet::new();
        for q in &p.points {
            assert!(s.lattice_in_strip(q.source.coords()));
            assert!(seen.insert(q.source.clone()));
            assert_eq!(q.phys, s.embedding().project_lattice(q.source.coords()));
            assert!(q.occupation <= 12);
        }
    }

    #[test]
    fn physical_radius_gate() {
        let s = spec(8, 0.1, 3.0, None).with_radius_space(RadiusSpace::Physical);
        let p = generate_standard(&s);
        assert!(!p.is_empty());
        let t = s.embedding().project_phys(s.translation()).unwrap();
        for q in &p.points {
            let r2: f64 = q.phys.iter().zip(&t).map(|(a, b)| (a - b).powi(2)).sum();
            assert!(r2 < 9.0);
        }
    }
}
