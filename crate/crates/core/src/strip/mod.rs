//! Strip membership by determinant constraints.
//!
//! The strip `S = E + [-1/2, 1/2]^k` is bounded by the families of
//! `(k-d-1)`-faces of the hypercube, one family per increasing index tuple
//! `(i_1, ..., i_{d+1})`. A point `y` lies in `S` iff for every tuple
//!
//! ```text
//!     | y_{i_1}    ...  y_{i_{d+1}}   |
//!     | v_{1 i_1}  ...  v_{1 i_{d+1}} |
//!     |   ...                         |   ≤   bound
//!     | v_{d i_1}  ...  v_{d i_{d+1}} |
//! ```
//!
//! in absolute value, where `bound` is the largest such determinant over
//! the hypercube vertices `y ∈ {±1/2}^{d+1}`. Expanding along the first row
//! turns each determinant into a dot product with a cofactor vector, so
//! membership costs `C(k, d+1)` short dot products regardless of `k`.

mod oracle;

use serde::{Deserialize, Serialize};

use crate::embed::Embedding;
use crate::error::check_len;
use crate::{Error, Result};

pub use oracle::slice_oracle;

/// Degeneracy threshold relative to `κ^d`.
pub const EPS_DEG_REL: f64 = 1e-12;

/// Default positional deduplication tolerance for projected points.
pub const DEFAULT_EPS_POS: f64 = 1e-4;

/// One family of parallel faces: `|Σ_j y[indices[j]] * cofactors[j]| ≤ bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripConstraint {
    indices: [usize; 4],
    cofactors: [f64; 4],
    arity: usize,
    bound: f64,
    active: bool,
}

impl StripConstraint {
    /// Zero-based column indices, increasing.
    pub fn indices(&self) -> &[usize] {
        &self.indices[..self.arity]
    }

    /// Signed minors of the cluster rows, in expansion order.
    pub fn cofactors(&self) -> &[f64] {
        &self.cofactors[..self.arity]
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Whether the constraint takes part in membership. Constraints whose
    /// cofactors all vanish are identically satisfied and are skipped.
    pub fn is_active(&self) -> bool {
        self.active
    }

    /// The determinant with first row `y` at this constraint's columns.
    #[inline]
    pub fn determinant(&self, y: &[f64]) -> f64 {
        let mut s = 0.0;
        for j in 0..self.arity {
            s += y[self.indices[j]] * self.cofactors[j];
        }
        s
    }

    #[inline]
    fn lattice_determinant(&self, x: &[i64], t: &[f64]) -> f64 {
        let mut s = 0.0;
        for j in 0..self.arity {
            let i = self.indices[j];
            s += (x[i] as f64 - t[i]) * self.cofactors[j];
        }
        s
    }
}

/// One constraint per increasing `(d+1)`-tuple of columns, in lexicographic
/// order of the tuple.
pub fn build_constraints(emb: &Embedding) -> Vec<StripConstraint> {
    let d = emb.dim();
    let arity = d + 1;
    let eps_deg = EPS_DEG_REL * emb.kappa().powi(d as i32);
    let rows = emb.rows();
    let mut out = Vec::new();
    for tuple in Combinations::new(emb.k(), arity) {
        let mut indices = [0usize; 4];
        indices[..arity].copy_from_slice(&tuple);
        let mut cofactors = [0.0f64; 4];
        let mut minor_cols = [0usize; 3];
        for (j, cof) in cofactors[..arity].iter_mut().enumerate() {
            let mut m = 0;
            for (jj, &c) in tuple.iter().enumerate() {
                if jj != j {
                    minor_cols[m] = c;
                    m += 1;
                }
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            *cof = sign * minor(rows, &minor_cols[..d]);
        }
        // max over α ∈ {±1/2}^{d+1} of |Σ α_j c_j|
        let bound = 0.5 * cofactors[..arity].iter().map(|c| c.abs()).sum::<f64>();
        out.push(StripConstraint {
            indices,
            cofactors,
            arity,
            bound,
            active: bound > eps_deg,
        });
    }
    out
}

fn minor(rows: &[Vec<f64>], cols: &[usize]) -> f64 {
    match cols.len() {
        1 => rows[0][cols[0]],
        2 => rows[0][cols[0]] * rows[1][cols[1]] - rows[0][cols[1]] * rows[1][cols[0]],
        3 => {
            let m = |r: usize, c: usize| rows[r][cols[c]];
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        n => unreachable!("minor of order {n}"),
    }
}

/// Which norm the enumeration radius is measured in.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusSpace {
    /// `‖x - t‖` in the superspace.
    #[default]
    Super,
    /// `‖π(x - t)‖` in scaled physical coordinates.
    Physical,
}

/// A translated strip together with the enumeration limits.
#[derive(Debug, Clone)]
pub struct StripSpec {
    embedding: Embedding,
    constraints: Vec<StripConstraint>,
    active: Vec<StripConstraint>,
    translation: Vec<f64>,
    radius: f64,
    radius_space: RadiusSpace,
    cap: Option<usize>,
    eps_pos: f64,
}

impl StripSpec {
    /// `cap = None` means no limit on analysed lattice points; the radius
    /// must then be finite.
    pub fn new(
        embedding: Embedding,
        translation: Vec<f64>,
        radius: f64,
        cap: Option<usize>,
    ) -> Result<Self> {
        check_len(embedding.k(), translation.len())?;
        if translation.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("translation must be finite".into()));
        }
        if radius.is_nan() || radius < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "radius must be non-negative, got {radius}"
            )));
        }
        match cap {
            Some(0) => return Err(Error::InvalidArgument("cap must be at least 1".into())),
            None if !radius.is_finite() => {
                return Err(Error::InvalidArgument(
                    "an unbounded cap needs a finite radius".into(),
                ))
            }
            _ => {}
        }
        let constraints = build_constraints(&embedding);
        let active = constraints.iter().copied().filter(|c| c.active).collect();
        Ok(StripSpec {
            embedding,
            constraints,
            active,
            translation,
            radius,
            radius_space: RadiusSpace::Super,
            cap,
            eps_pos: DEFAULT_EPS_POS,
        })
    }

    pub fn with_radius_space(mut self, space: RadiusSpace) -> Self {
        self.radius_space = space;
        self
    }

    pub fn with_eps_pos(mut self, eps_pos: f64) -> Result<Self> {
        if !(eps_pos >= 0.0 && eps_pos.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "eps_pos must be finite and non-negative, got {eps_pos}"
            )));
        }
        self.eps_pos = eps_pos;
        Ok(self)
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn constraints(&self) -> &[StripConstraint] {
        &self.constraints
    }

    pub fn active_count(&self) -> usize {
        self.active.len()
    }

    pub fn translation(&self) -> &[f64] {
        &self.translation
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn radius_space(&self) -> RadiusSpace {
        self.radius_space
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    pub fn eps_pos(&self) -> f64 {
        self.eps_pos
    }

    /// Superspace dimension `k`.
    pub fn k(&self) -> usize {
        self.embedding.k()
    }

    /// Membership of `y` in the untranslated strip. For the translated strip
    /// pass `x - t`.
    pub fn in_strip(&self, y: &[f64]) -> Result<bool> {
        check_len(self.k(), y.len())?;
        Ok(self.contains(y))
    }

    /// [`StripSpec::in_strip`] without the length check.
    #[inline]
    pub fn contains(&self, y: &[f64]) -> bool {
        self.active
            .iter()
            .all(|c| c.determinant(y).abs() <= c.bound)
    }

    /// Whether the lattice point `x` lies in the translated strip `S + t`.
    #[inline]
    pub fn lattice_in_strip(&self, x: &[i64]) -> bool {
        let t = &self.translation;
        self.active
            .iter()
            .all(|c| c.lattice_determinant(x, t).abs() <= c.bound)
    }

    /// Smallest `| bound - |det| |` over active constraints; infinite when
    /// there are none. Small values flag points on a face.
    pub fn min_margin(&self, y: &[f64]) -> f64 {
        self.active
            .iter()
            .map(|c| (c.bound - c.determinant(y).abs()).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// `max |det| / bound` over active constraints, so `y ∈ S` iff the gauge
    /// is at most 1. The strip is convex and symmetric, so `y / gauge(y)`
    /// lies on its boundary.
    pub fn gauge(&self, y: &[f64]) -> f64 {
        self.active
            .iter()
            .map(|c| c.determinant(y).abs() / c.bound)
            .fold(0.0, f64::max)
    }

    /// Radius gate applied to a lattice point.
    pub fn within_radius(&self, x: &[i64]) -> bool {
        let t = &self.translation;
        let r2 = self.radius * self.radius;
        match self.radius_space {
            RadiusSpace::Super => {
                let s: f64 = x
                    .iter()
                    .zip(t)
                    .map(|(&xi, ti)| {
                        let v = xi as f64 - ti;
                        v * v
                    })
                    .sum();
                s < r2
            }
            RadiusSpace::Physical => {
                let s: f64 = self
                    .embedding
                    .rows()
                    .iter()
                    .map(|row| {
                        let p: f64 = row
                            .iter()
                            .zip(x.iter().zip(t))
                            .map(|(w, (&xi, ti))| w * (xi as f64 - ti))
                            .sum();
                        p * p
                    })
                    .sum();
                s < r2
            }
        }
    }
}

/// Increasing `r`-subsets of `0..n` in lexicographic order.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, r: usize) -> Self {
        Combinations {
            n,
            current: (r <= n).then(|| (0..r).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let r = cur.len();
        let mut next = cur.clone();
        let mut i = r;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - r + i {
                next[i] += 1;
                for j in i + 1..r {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(cur)
    }
}
