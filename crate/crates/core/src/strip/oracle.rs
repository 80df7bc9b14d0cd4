//! Geometric membership oracle, independent of the determinant constraints.
//!
//! `y ∈ E + [-1/2, 1/2]^k` iff some `a ∈ R^d` satisfies
//! `|y_i - ⟨a, v_i⟩| ≤ 1/2` for every column `v_i`. That is a feasibility
//! problem in `d` unknowns with `2k` half-space constraints, decided here by
//! polygon clipping (`d = 2`) or vertex enumeration (`d = 3`).

use crate::embed::Embedding;
use crate::error::check_len;
use crate::{Error, Result};

/// Whether the physical `d`-plane through `y` meets the unit hypercube.
pub fn slice_oracle(emb: &Embedding, y: &[f64]) -> Result<bool> {
    check_len(emb.k(), y.len())?;
    let k = emb.k();
    // a·v_i ≤ y_i + 1/2  and  -a·v_i ≤ 1/2 - y_i
    let mut half_spaces = Vec::with_capacity(2 * k);
    for (i, yi) in y.iter().enumerate() {
        let v = emb.column(i);
        let neg: Vec<f64> = v.iter().map(|c| -c).collect();
        half_spaces.push((v, yi + 0.5));
        half_spaces.push((neg, 0.5 - yi));
    }
    match emb.dim() {
        2 => Ok(clip_feasible(emb, y, &half_spaces)),
        3 => Ok(vertex_feasible(&half_spaces)),
        d => Err(Error::InvalidArgument(format!(
            "slice oracle supports d = 2 or 3, got {d}"
        ))),
    }
}

fn clip_feasible(emb: &Embedding, y: &[f64], half_spaces: &[(Vec<f64>, f64)]) -> bool {
    // Σ_i ⟨a, v_i⟩² = κ²‖a‖², so a feasible `a` lies in this box.
    let reach: f64 = y.iter().map(|c| (c.abs() + 0.5).powi(2)).sum::<f64>().sqrt();
    let b = reach / emb.kappa() + 1.0;
    let mut poly = vec![[-b, -b], [b, -b], [b, b], [-b, b]];
    for (n, c) in half_spaces {
        poly = clip(&poly, [n[0], n[1]], *c);
        if poly.is_empty() {
            return false;
        }
    }
    true
}

/// Sutherland–Hodgman step: keep the part of `poly` with `n·p ≤ c`.
fn clip(poly: &[[f64; 2]], n: [f64; 2], c: f64) -> Vec<[f64; 2]> {
    let f = |p: &[f64; 2]| n[0] * p[0] + n[1] * p[1] - c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (i, p) in poly.iter().enumerate() {
        let q = &poly[(i + 1) % poly.len()];
        let (fp, fq) = (f(p), f(q));
        if fp <= 0.0 {
            out.push(*p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let s = fp / (fp - fq);
            out.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
        }
    }
    out
}

/// A bounded polyhedron is nonempty iff it has a vertex; try every triple of
/// bounding planes.
fn vertex_feasible(half_spaces: &[(Vec<f64>, f64)]) -> bool {
    let m = half_spaces.len();
    for i in 0..m {
        for j in i + 1..m {
            for l in j + 1..m {
                let (n1, c1) = &half_spaces[i];
                let (n2, c2) = &half_spaces[j];
                let (n3, c3) = &half_spaces[l];
                let Some(a) = solve3([n1, n2, n3], [*c1, *c2, *c3]) else {
                    continue;
                };
                let ok = half_spaces.iter().all(|(n, c)| {
                    let s = n[0] * a[0] + n[1] * a[1] + n[2] * a[2];
                    s <= c + 1e-9 * (1.0 + c.abs() + s.abs())
                });
                if ok {
                    return true;
                }
            }
        }
    }
    false
}

fn solve3(n: [&Vec<f64>; 3], c: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let rows = [
        [n[0][0], n[0][1], n[0][2]],
        [n[1][0], n[1][1], n[1][2]],
        [n[2][0], n[2][1], n[2][2]],
    ];
    let d = det(rows);
    let scale: f64 = rows
        .iter()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
        .product();
    if d.abs() <= 1e-12 * scale {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, o) in out.iter_mut().enumerate() {
        let mut m = rows;
        for r in 0..3 {
            m[r][col] = c[r];
        }
        *o = det(m) / d;
    }
    Some(out)
}
