//! Concrete magnetic and electric potentials, reference energies and exact
//! solutions used by the experiments.

mod ab;
mod manufactured;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

pub use ab::{ab_jacobian, ab_try_eval, ab_vector_potential, gaussian_packet, AbConfig};
pub use manufactured::{covariant_gradient_exact, ManufacturedCase};

use crate::error::{Error, Result};
use crate::hho::{FieldSpec, ScalarField, VectorField};
use crate::mesh::{Point, Rectangle};

pub type ComplexField = Arc<dyn Fn(Point) -> C64 + Send + Sync>;
pub type ComplexGradient = Arc<dyn Fn(Point) -> [C64; 2] + Send + Sync>;

/// Points per axis of the grid used to bound `|A|` and `|V|`.
pub const SUP_GRID: usize = 512;

/// Maximum of `f` over a `SUP_GRID x SUP_GRID` grid including the corners.
pub fn sup_on_grid(domain: Rectangle, f: impl Fn(Point) -> f64) -> f64 {
    let n = SUP_GRID;
    let mut m: f64 = 0.0;
    for j in 0..n {
        let y = domain.min[1] + (domain.max[1] - domain.min[1]) * j as f64 / (n - 1) as f64;
        for i in 0..n {
            let x = domain.min[0] + (domain.max[0] - domain.min[0]) * i as f64 / (n - 1) as f64;
            let v = f([x, y]);
            if v.is_finite() {
                m = m.max(v);
            }
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Gauge {
    /// `A = B/2 (-y, x)`
    Sym,
    /// `A = (-B y, 0)`
    Landau,
    /// `A = B/2 (-y, x) + (0.1, 0.1)`
    Smooth,
}

impl Gauge {
    pub const ALL: [Gauge; 3] = [Gauge::Sym, Gauge::Landau, Gauge::Smooth];

    pub fn name(self) -> &'static str {
        match self {
            Gauge::Sym => "sym",
            Gauge::Landau => "landau",
            Gauge::Smooth => "smooth",
        }
    }

    pub fn potential(self, b: f64, p: Point) -> Point {
        let [x, y] = p;
        match self {
            Gauge::Sym => [-0.5 * b * y, 0.5 * b * x],
            Gauge::Landau => [-b * y, 0.0],
            Gauge::Smooth => [-0.5 * b * y + 0.1, 0.5 * b * x + 0.1],
        }
    }

    /// `chi` with `A_gauge = A_sym + grad chi`.
    pub fn chi(self, b: f64, p: Point) -> f64 {
        let [x, y] = p;
        match self {
            Gauge::Sym => 0.0,
            Gauge::Landau => -0.5 * b * x * y,
            Gauge::Smooth => 0.1 * (x + y),
        }
    }

    pub fn grad_chi(self, b: f64, p: Point) -> Point {
        let [x, y] = p;
        match self {
            Gauge::Sym => [0.0, 0.0],
            Gauge::Landau => [-0.5 * b * y, -0.5 * b * x],
            Gauge::Smooth => [0.1, 0.1],
        }
    }
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gauge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" => Ok(Gauge::Sym),
            "landau" => Ok(Gauge::Landau),
            "smooth" => Ok(Gauge::Smooth),
            _ => Err(Error::InvalidConfig(format!("unknown gauge '{s}' (expected sym, landau or smooth)"))),
        }
    }
}

/// A uniform field `B` in one of the three gauges, with `V = 0`.
#[derive(Clone, Debug)]
pub struct GaugeCase {
    pub gauge: Gauge,
    pub b: f64,
    pub field: FieldSpec,
}

pub fn gauge(gauge: Gauge, b: f64, domain: Rectangle) -> GaugeCase {
    let a: VectorField = Arc::new(move |p| gauge.potential(b, p));
    let a_inf = sup_on_grid(domain, |p| {
        let v = gauge.potential(b, p);
        v[0].hypot(v[1])
    });
    let field = FieldSpec::new(gauge.name(), a, Arc::new(|_| 0.0), Arc::new(|_| 0.0), a_inf, 0.0)
        .with_gauge_function(Arc::new(move |p| gauge.chi(b, p)), Arc::new(move |p| gauge.grad_chi(b, p)));
    GaugeCase { gauge, b, field }
}

/// `V = omega0^2 |x|^2 / 2`.
pub fn harmonic_potential(omega0: f64) -> ScalarField {
    Arc::new(move |p: Point| 0.5 * omega0 * omega0 * (p[0] * p[0] + p[1] * p[1]))
}

/// `sqrt(B^2 + 2 omega0^2) (2n + |m| + 1) - m B`.
pub fn fock_darwin_energy(n: u32, m: i32, b: f64, omega0: f64) -> f64 {
    (b * b + 2.0 * omega0 * omega0).sqrt() * (2 * n as i64 + m.unsigned_abs() as i64 + 1) as f64 - m as f64 * b
}

/// Uniform field plus harmonic confinement on `[-L, L]^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FockDarwinConfig {
    pub omega0: f64,
    pub b: f64,
    pub half_width: f64,
}

impl Default for FockDarwinConfig {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            b: 1.0,
            half_width: 4.0,
        }
    }
}

impl FockDarwinConfig {
    pub fn domain(&self) -> Rectangle {
        Rectangle::centered(self.half_width)
    }

    pub fn field(&self, g: Gauge) -> FieldSpec {
        let l = self.half_width;
        let w = self.omega0;
        gauge(g, self.b, self.domain()).field.with_potential(harmonic_potential(w), w * w * l * l)
    }

    pub fn ground_energy(&self) -> f64 {
        fock_darwin_energy(0, 0, self.b, self.omega0)
    }

    /// The `count` lowest levels of the unbounded-plane spectrum, ascending.
    pub fn lowest_energies(&self, count: usize) -> Vec<f64> {
        let mut e = Vec::new();
        let max_q = 2 * count as i32 + 2;
        for n in 0..=max_q as u32 {
            for m in -max_q..=max_q {
                e.push(fock_darwin_energy(n, m, self.b, self.omega0));
            }
        }
        e.sort_by(f64::total_cmp);
        e.truncate(count);
        e
    }
}

#[cfg(test)]
mod tests;
