//! Uniform-grid index for "is any stored point closer than r" queries.

use std::collections::HashMap;

pub(crate) struct PointIndex {
    cell: f64,
    cells: HashMap<[i64; 3], Vec<usize>>,
    points: Vec<Vec<f64>>,
}

impl PointIndex {
    pub(crate) fn new(cell: f64) -> Self {
        let cell = if cell.is_finite() && cell > 0.0 { cell } else { 1.0 };
        PointIndex {
            cell,
            cells: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn key(&self, p: &[f64]) -> [i64; 3] {
        let mut key = [0i64; 3];
        for (k, c) in key.iter_mut().zip(p) {
            *k = (c / self.cell).floor() as i64;
        }
        key
    }

    pub(crate) fn insert(&mut self, p: Vec<f64>) {
        let key = self.key(&p);
        self.cells.entry(key).or_default().push(self.points.len());
        self.points.push(p);
    }

    /// Whether some stored point lies at Euclidean distance `< r` from `p`.
    pub(crate) fn any_within(&self, p: &[f64], r: f64) -> bool {
        if self.points.is_empty() || r <= 0.0 {
            return false;
        }
        if r.is_infinite() {
            return true;
        }
        let r2 = r * r;
        let close = |q: &Vec<f64>| {
            q.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() < r2
        };
        let reach = (r / self.cell).ceil() as i64;
        let dim = p.len().min(3);
        let neighbourhood = (2 * reach + 1).checked_pow(dim as u32).unwrap_or(i64::MAX);
        if neighbourhood as usize > self.points.len() {
            return self.points.iter().any(close);
        }
        let centre = self.key(p);
        let mut offset = vec![-reach; dim];
        loop {
            let mut key = centre;
            for (k, o) in key.iter_mut().zip(&offset) {
                *k += o;
            }
            if let Some(ids) = self.cells.get(&key) {
                if ids.iter().any(|&i| close(&self.points[i])) {
                    return true;
                }
            }
            // odometer over the neighbourhood
            let mut axis = 0;
            loop {
                if axis == dim {
                    return false;
                }
                offset[axis] += 1;
                if offset[axis] <= reach {
                    break;
                }
                offset[axis] = -reach;
                axis += 1;
            }
        }
    }
}
