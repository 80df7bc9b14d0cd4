//! Diffraction intensity of a finite pattern.
//!
//! Identifying the pattern with the Dirac comb `Σ_ω δ_ω`, the intensity is
//! `I(ξ) = |Σ_ω exp(i⟨ω, ξ⟩)|²`. Points sit at irrational positions, so the
//! sum is evaluated directly (no FFT): `O(L · cells)` work for a grid. Each
//! cell sums in pattern order; cells are evaluated in parallel.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generate::Pattern;
use crate::{Error, Result};

/// Peak threshold relative to the central intensity.
pub const DEFAULT_THRESHOLD_RATIO: f64 = 1e-3;

/// A rectangular grid `ξ = min + step · (i, j)`, `0 ≤ i < nx`, `0 ≤ j < ny`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: [f64; 2],
    pub step: f64,
    pub counts: [usize; 2],
}

impl Default for GridSpec {
    /// 100 × 100 cells at spacing 0.03 covering `[-1.47, 1.50]²`.
    fn default() -> Self {
        GridSpec {
            min: [-1.47, -1.47],
            step: 0.03,
            counts: [100, 100],
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid step must be positive, got {}",
                self.step
            )));
        }
        if self.counts[0] == 0 || self.counts[1] == 0 {
            return Err(Error::InvalidArgument("grid counts must be at least 1".into()));
        }
        if self.min.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidArgument("grid origin must be finite".into()));
        }
        Ok(())
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.min[0] + self.step * i as f64,
            self.min[1] + self.step * j as f64,
        ]
    }
}

/// Intensity at one frequency. `xi` must match the pattern dimension; for
/// planar grids over spatial patterns see [`diffraction_map`].
pub fn intensity(pattern: &Pattern, xi: &[f64]) -> f64 {
    intensity_of(pattern.points.iter().map(|p| p.phys.as_slice()), xi)
}

/// Intensity of an arbitrary point list; missing `xi` components are zero.
pub fn intensity_of<'a>(points: impl IntoIterator<Item = &'a [f64]>, xi: &[f64]) -> f64 {
    let amplitude: Complex64 = points
        .into_iter()
        .map(|w| {
            let phase: f64 = w.iter().zip(xi).map(|(a, b)| a * b).sum();
            Complex64::from_polar(1.0, phase)
        })
        .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z);
    amplitude.norm_sqr()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffractionMap {
    pub grid: GridSpec,
    /// Row-major: `intensity[i * ny + j]` is the value at `grid.point(i, j)`.
    pub intensity: Vec<f64>,
    /// Intensity at `ξ = 0`, i.e. `L²`.
    pub i0: f64,
    pub threshold_ratio: f64,
}

impl DiffractionMap {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.intensity[i * self.grid.counts[1] + j]
    }
}

/// Evaluates the intensity on every grid cell. Spatial patterns are sampled
/// in the plane `ξ_3 = 0`.
pub fn diffraction_map(pattern: &Pattern, grid: &GridSpec, threshold_ratio: f64) -> Result<DiffractionMap> {
    grid.validate()?;
    if !(threshold_ratio > 0.0 && threshold_ratio < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold ratio must lie in (0, 1), got {threshold_ratio}"
        )));
    }
    let [nx, ny] = grid.counts;
    let positions: Vec<&[f64]> = pattern.points.iter().map(|p| p.phys.as_slice()).collect();
    let intensity: Vec<f64> = (0..nx * ny)
        .into_par_iter()
        .map(|cell| {
            let xi = grid.point(cell / ny, cell % ny);
            intensity_of(positions.iter().copied(), &xi)
        })
        .collect();
    let zero = vec![0.0; pattern.dim().max(2)];
    Ok(DiffractionMap {
        grid: *grid,
        intensity,
        i0: intensity_of(positions.iter().copied(), &zero),
        threshold_ratio,
    })
}

/// A grid cell above the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub index: [usize; 2],
    pub xi: [f64; 2],
    pub intensity: f64,
}

/// All cells with `intensity > threshold_ratio · i0`, in grid order.
pub fn extract_peaks(map: &DiffractionMap) -> Vec<Peak> {
    let cut = map.threshold_ratio * map.i0;
    let ny = map.grid.counts[1];
    map.intensity
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > cut)
        .map(|(cell, &v)| {
            let (i, j) = (cell / ny, cell % ny);
            Peak {
                index: [i, j],
                xi: map.grid.point(i, j),
                intensity: v,
            }
        })
        .collect()
}
