#![allow(dead_code)]

use qpack::cluster::{build_cluster, GCluster, GroupSpec, OrbitSeed};
use qpack::embed::embed;
use qpack::strip::StripSpec;

pub const STANDARD_REFERENCE: &str = include_str!("../data/c12_standard_reference.tex");
pub const MODIFIED_REFERENCE: &str = include_str!("../data/c12_modified_reference.tex");

/// Tolerance for comparing against the reference listings, which was
/// computed in single precision and printed with five decimals.
pub const LISTING_TOL: f64 = 1e-5;

pub fn c12() -> GCluster {
    build_cluster(GroupSpec::Cyclic(12), &[OrbitSeed::new(vec![1.0, 0.0])]).unwrap()
}

/// The fragment the reference listings were drawn from.
pub fn reference_spec() -> StripSpec {
    StripSpec::new(embed(&c12()).unwrap(), vec![0.1; 6], 9.0, Some(6000)).unwrap()
}

/// Raw coordinates of a `\put( x, y)` line.
pub fn put_coords(line: &str) -> Option<[f64; 2]> {
    let rest = line.strip_prefix("\\put( ")?;
    let (coords, _) = rest.split_once(')')?;
    let (x, y) = coords.split_once(',')?;
    Some([x.trim().parse().ok()?, y.trim().parse().ok()?])
}

/// Pattern points of a picture listing, offsets removed, the cluster drawn
/// around `(32, 20)` skipped.
pub fn listing_points(text: &str) -> Vec<[f64; 2]> {
    text.lines()
        .filter_map(put_coords)
        .filter(|p| p[0] < 30.0)
        .map(|p| [p[0] - 10.0, p[1] - 20.0])
        .collect()
}

/// Points of `a` and `b` left unmatched by a one-to-one pairing within `tol`
/// (max-norm).
pub fn symmetric_difference(a: &[[f64; 2]], b: &[[f64; 2]], tol: f64) -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
    let mut used = vec![false; b.len()];
    let mut only_a = Vec::new();
    for p in a {
        let hit = b
            .iter()
            .enumerate()
            .position(|(j, q)| !used[j] && (p[0] - q[0]).abs() <= tol && (p[1] - q[1]).abs() <= tol);
        match hit {
            Some(j) => used[j] = true,
            None => only_a.push(*p),
        }
    }
    let only_b = b.iter().zip(&used).filter(|(_, u)| !**u).map(|(q, _)| *q).collect();
    (only_a, only_b)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}
