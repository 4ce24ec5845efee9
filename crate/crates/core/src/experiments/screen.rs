use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::fmt_float;
use crate::mesh::{Point, PolytopalMesh};

/// `|psi_h|^2` sampled along the vertical line `x = x_screen`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScreenProfile {
    pub flux: f64,
    pub x_screen: f64,
    pub ys: Vec<f64>,
    pub intensity: Vec<f64>,
}

/// `|u|^2` at `p`, averaged over every cell whose closure contains `p`.
/// Points outside the mesh give zero.
pub fn sample_density<E>(mesh: &PolytopalMesh, p: Point, eval: &E) -> f64
where
    E: Fn(usize, Point) -> C64 + Sync,
{
    let cells = mesh.locate(p);
    if cells.is_empty() {
        return 0.0;
    }
    cells.iter().map(|&c| eval(c, p).norm_sqr()).sum::<f64>() / cells.len() as f64
}

impl ScreenProfile {
    pub fn sample<E>(mesh: &PolytopalMesh, flux: f64, x_screen: f64, ys: Vec<f64>, eval: &E) -> Self
    where
        E: Fn(usize, Point) -> C64 + Sync,
    {
        let intensity = ys.par_iter().map(|&y| sample_density(mesh, [x_screen, y], eval)).collect();
        Self {
            flux,
            x_screen,
            ys,
            intensity,
        }
    }

    pub fn max(&self) -> f64 {
        self.intensity.iter().copied().fold(0.0, f64::max)
    }

    /// Ordinate of the global maximum.
    pub fn argmax(&self) -> f64 {
        let mut best = 0;
        for (i, &v) in self.intensity.iter().enumerate() {
            if v > self.intensity[best] {
                best = i;
            }
        }
        self.ys[best]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("y,intensity\n");
        for (y, v) in self.ys.iter().zip(&self.intensity) {
            s.push_str(&format!("{},{}\n", fmt_float(*y), fmt_float(*v)));
        }
        s
    }
}

/// Interior local maxima `(y, value)`, largest first. A sample counts when it
/// is at least as large as both neighbours and strictly larger than one.
pub fn find_peaks(ys: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let mut peaks: Vec<(f64, f64)> = (1..values.len().saturating_sub(1))
        .filter(|&i| {
            let (l, c, r) = (values[i - 1], values[i], values[i + 1]);
            c >= l && c >= r && (c > l || c > r)
        })
        .map(|i| (ys[i], values[i]))
        .collect();
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
    peaks
}
