use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::{gauge, harmonic_potential, ComplexField, ComplexGradient, Gauge};
use crate::hho::FieldSpec;
use crate::mesh::{Point, Rectangle};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Exact solution of `(-i grad - A)^2 u + V u = f` with `u = 0` on the
/// boundary of `domain`.
#[derive(Clone)]
pub struct ManufacturedCase {
    pub name: String,
    pub domain: Rectangle,
    pub u: ComplexField,
    pub grad_u: ComplexGradient,
    pub lap_u: ComplexField,
    pub field: FieldSpec,
}

impl std::fmt::Debug for ManufacturedCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManufacturedCase")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("field", &self.field)
            .finish()
    }
}

/// `-i grad u - A u`.
pub fn covariant_gradient_exact(a: Point, u: C64, grad_u: [C64; 2]) -> [C64; 2] {
    [-I * grad_u[0] - a[0] * u, -I * grad_u[1] - a[1] * u]
}

impl ManufacturedCase {
    /// `u = sin(pi x) sin(pi y) exp(i w . x)` on the unit square.
    pub fn sine_product(field: FieldSpec, w: [f64; 2]) -> Self {
        let s = |p: Point| (PI * p[0]).sin() * (PI * p[1]).sin();
        let ds = |p: Point| {
            [
                PI * (PI * p[0]).cos() * (PI * p[1]).sin(),
                PI * (PI * p[0]).sin() * (PI * p[1]).cos(),
            ]
        };
        let e = move |p: Point| C64::from_polar(1.0, w[0] * p[0] + w[1] * p[1]);
        let u = Arc::new(move |p: Point| s(p) * e(p));
        let grad_u = Arc::new(move |p: Point| {
            let (sv, g, ev) = (s(p), ds(p), e(p));
            [(g[0] + I * w[0] * sv) * ev, (g[1] + I * w[1] * sv) * ev]
        });
        let lap_u = Arc::new(move |p: Point| {
            let (sv, g, ev) = (s(p), ds(p), e(p));
            let w2 = w[0] * w[0] + w[1] * w[1];
            (-2.0 * PI * PI * sv + 2.0 * I * (w[0] * g[0] + w[1] * g[1]) - w2 * sv) * ev
        });
        Self {
            name: format!("sine_product[{}]", field.name),
            domain: Rectangle::unit(),
            u,
            grad_u,
            lap_u,
            field,
        }
    }

    /// `u = sin(pi x) sin(pi y) exp(i (x + y))`, symmetric gauge with `B = 1`
    /// and harmonic potential with `omega0 = 1`.
    pub fn standard() -> Self {
        let domain = Rectangle::unit();
        let field = gauge(Gauge::Sym, 1.0, domain)
            .field
            .with_potential(harmonic_potential(1.0), 1.0);
        let mut c = Self::sine_product(field, [1.0, 1.0]);
        c.name = "standard".into();
        c
    }

    /// `u = (1 + i) x (1 - x) y (1 - y)` with `A = 0`, `V = 0`. The flux
    /// `-i grad u` lies in `P^3`, so at `k = 3` the discrete solution equals
    /// the interpolant.
    pub fn polynomial() -> Self {
        let c = C64::new(1.0, 1.0);
        let q = |t: f64| t * (1.0 - t);
        let dq = |t: f64| 1.0 - 2.0 * t;
        Self {
            name: "polynomial".into(),
            domain: Rectangle::unit(),
            u: Arc::new(move |p: Point| c * q(p[0]) * q(p[1])),
            grad_u: Arc::new(move |p: Point| [c * dq(p[0]) * q(p[1]), c * q(p[0]) * dq(p[1])]),
            lap_u: Arc::new(move |p: Point| c * (-2.0 * q(p[1]) - 2.0 * q(p[0]))),
            field: FieldSpec::zero(),
        }
    }

    /// `f = -lap u + i (div A) u + 2 i A . grad u + |A|^2 u + V u`.
    pub fn source(&self) -> ComplexField {
        let (u, grad_u, lap_u) = (self.u.clone(), self.grad_u.clone(), self.lap_u.clone());
        let (a, div_a, v) = (self.field.a.clone(), self.field.div_a.clone(), self.field.v.clone());
        Arc::new(move |p: Point| {
            let (uv, g, av) = (u(p), grad_u(p), a(p));
            -lap_u(p)
                + I * div_a(p) * uv
                + 2.0 * I * (av[0] * g[0] + av[1] * g[1])
                + (av[0] * av[0] + av[1] * av[1]) * uv
                + v(p) * uv
        })
    }
}
