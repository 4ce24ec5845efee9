use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::ComplexField;
use crate::error::{Error, Result};
use crate::hho::FieldSpec;
use crate::mesh::{Point, PuncturedOptions, Rectangle};

/// Aharonov-Bohm scattering setup: a wave packet passing an impenetrable
/// solenoid of radius `solenoid_radius` at the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbConfig {
    pub flux: f64,
    pub solenoid_radius: f64,
    pub hole_segments: usize,
    pub bounds: [[f64; 2]; 2],
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub sigma: f64,
    pub k0: f64,
    pub screen_x: f64,
    pub screen_points: usize,
    pub t_end: f64,
    pub dt: f64,
}

impl Default for AbConfig {
    fn default() -> Self {
        Self {
            flux: 0.0,
            solenoid_radius: 0.5,
            hole_segments: 64,
            bounds: [[-5.0, -2.0], [5.0, 2.0]],
            nx: 150,
            ny: 60,
            x0: -3.5,
            sigma: 0.8,
            k0: 3.0,
            screen_x: 3.0,
            screen_points: 400,
            t_end: 1.49,
            dt: 2.5e-3,
        }
    }
}

impl AbConfig {
    pub fn domain(&self) -> Rectangle {
        Rectangle::new(self.bounds[0], self.bounds[1])
    }

    pub fn mesh_options(&self) -> PuncturedOptions {
        let mut o = PuncturedOptions::new(self.domain(), self.nx, self.ny, [0.0, 0.0], self.solenoid_radius);
        o.hole_segments = self.hole_segments;
        o
    }

    /// Smallest distance from the origin to the polygonal hole boundary.
    pub fn inner_radius(&self) -> f64 {
        self.solenoid_radius * (PI / self.hole_segments as f64).cos()
    }

    pub fn field(&self) -> FieldSpec {
        ab_vector_potential(self.flux, self.solenoid_radius, self.inner_radius())
    }

    pub fn packet(&self) -> ComplexField {
        gaussian_packet(self.x0, self.sigma, self.k0)
    }

    /// Screen sample ordinates: `screen_points` values evenly spaced over the
    /// vertical extent, endpoints included.
    pub fn screen_ys(&self) -> Vec<f64> {
        let (lo, hi) = (self.bounds[0][1], self.bounds[1][1]);
        let n = self.screen_points;
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

fn ab_formula(flux: f64, p: Point) -> Point {
    let r2 = p[0] * p[0] + p[1] * p[1];
    let c = flux / (2.0 * PI);
    [-c * p[1] / r2, c * p[0] / r2]
}

/// `A = flux / (2 pi) (-y, x) / |x|^2`, curl-free outside the origin with
/// circulation `flux` around it. Points with `|x| < r_s / 2` evaluate to NaN,
/// which assembly reports as an error naming the cell. `r_min` bounds `|x|`
/// from below on the mesh and sets `|A|_inf`.
pub fn ab_vector_potential(flux: f64, r_s: f64, r_min: f64) -> FieldSpec {
    let a = Arc::new(move |p: Point| {
        if p[0].hypot(p[1]) < 0.5 * r_s {
            [f64::NAN, f64::NAN]
        } else {
            ab_formula(flux, p)
        }
    });
    let a_inf = flux.abs() / (2.0 * PI * r_min);
    FieldSpec::new(format!("ab(flux={flux})"), a, Arc::new(|_| 0.0), Arc::new(|_| 0.0), a_inf, 0.0)
}

/// Checked evaluation of the AB potential.
pub fn ab_try_eval(flux: f64, r_s: f64, p: Point) -> Result<Point> {
    if p[0].hypot(p[1]) < 0.5 * r_s {
        return Err(Error::InsideSolenoid { x: p[0], y: p[1] });
    }
    Ok(ab_formula(flux, p))
}

/// Jacobian `J[i][j] = d A_i / d x_j` of the AB potential.
pub fn ab_jacobian(flux: f64, p: Point) -> [[f64; 2]; 2] {
    let [x, y] = p;
    let r2 = x * x + y * y;
    let c = flux / (2.0 * PI * r2 * r2);
    [[c * 2.0 * x * y, -c * (r2 - 2.0 * y * y)], [c * (r2 - 2.0 * x * x), -c * 2.0 * x * y]]
}

/// `exp(-((x - x0)^2 + y^2) / (2 sigma^2)) exp(i k0 x)`.
pub fn gaussian_packet(x0: f64, sigma: f64, k0: f64) -> ComplexField {
    Arc::new(move |p: Point| {
        let r2 = (p[0] - x0).powi(2) + p[1] * p[1];
        C64::from_polar((-r2 / (2.0 * sigma * sigma)).exp(), k0 * p[0])
    })
}
