//! Gauss rules on segments, triangles and polygons.
//!
//! Triangles use the collapsed (Duffy) tensor product of Gauss-Legendre
//! rules, which has positive weights for every order. Polygons are split
//! into a fan from the centroid, or ear-clipped when the fan would fold.

use crate::mesh::{signed_area, Point, PolytopalMesh};

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    /// Polynomial degree integrated exactly.
    pub order: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<T, F>(&self, f: F) -> T
    where
        T: std::iter::Sum<T> + std::ops::Mul<f64, Output = T>,
        F: Fn(Point) -> T,
    {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| f(p) * w).sum()
    }

    fn extend(&mut self, other: QuadratureRule) {
        self.points.extend(other.points);
        self.weights.extend(other.weights);
    }
}

/// `n`-point Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
            z = 0.0;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = 0.5 * (1.0 - z);
        x[n - 1 - i] = 0.5 * (1.0 + z);
        w[i] = 0.5 * wi;
        w[n - 1 - i] = 0.5 * wi;
    }
    (x, w)
}

pub fn quadrature_segment(a: Point, b: Point, order: usize) -> QuadratureRule {
    let n = order / 2 + 1;
    let (x, w) = gauss_legendre(n);
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    QuadratureRule {
        points: x.iter().map(|&t| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]).collect(),
        weights: w.iter().map(|&wi| wi * len).collect(),
        order,
    }
}

pub fn quadrature_triangle(a: Point, b: Point, c: Point, order: usize) -> QuadratureRule {
    let nu = (order + 2).div_ceil(2);
    let nv = (order + 1).div_ceil(2).max(1);
    let (xu, wu) = gauss_legendre(nu);
    let (xv, wv) = gauss_legendre(nv);
    let det = ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs();
    let mut points = Vec::with_capacity(nu * nv);
    let mut weights = Vec::with_capacity(nu * nv);
    for (&u, &wu) in xu.iter().zip(&wu) {
        for (&v, &wv) in xv.iter().zip(&wv) {
            // x = a + u (b - a) + u v (c - b), Jacobian u * det
            let p = [
                a[0] + u * (b[0] - a[0]) + u * v * (c[0] - b[0]),
                a[1] + u * (b[1] - a[1]) + u * v * (c[1] - b[1]),
            ];
            points.push(p);
            weights.push(wu * wv * u * det);
        }
    }
    QuadratureRule { points, weights, order }
}

/// Triangulates a counter-clockwise polygon: a fan from `center` when every
/// fan triangle is positively oriented, otherwise ear clipping.
pub fn triangulate_polygon(poly: &[Point], center: Point) -> Vec<[Point; 3]> {
    let n = poly.len();
    let area = signed_area(poly);
    let fan_ok = (0..n).all(|i| signed_area(&[center, poly[i], poly[(i + 1) % n]]) > 1e-12 * area);
    if fan_ok {
        return (0..n).map(|i| [center, poly[i], poly[(i + 1) % n]]).collect();
    }
    ear_clip(poly)
}

fn ear_clip(poly: &[Point]) -> Vec<[Point; 3]> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut tris = Vec::new();
    let cross = |a: Point, b: Point, c: Point| (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let mut guard = 0;
    while idx.len() > 3 && guard < 10 * poly.len() * poly.len() {
        guard += 1;
        let m = idx.len();
        let mut clipped = false;
        for i in 0..m {
            let (ia, ib, ic) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            let (a, b, c) = (poly[ia], poly[ib], poly[ic]);
            if cross(a, b, c) <= 0.0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                if j == ia || j == ib || j == ic {
                    return false;
                }
                let p = poly[j];
                cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0
            });
            if !blocked {
                tris.push([a, b, c]);
                idx.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            break;
        }
    }
    if idx.len() == 3 {
        tris.push([poly[idx[0]], poly[idx[1]], poly[idx[2]]]);
    }
    tris
}

pub fn quadrature_polygon(poly: &[Point], center: Point, order: usize) -> QuadratureRule {
    let mut rule = QuadratureRule {
        points: Vec::new(),
        weights: Vec::new(),
        order,
    };
    for [a, b, c] in triangulate_polygon(poly, center) {
        rule.extend(quadrature_triangle(a, b, c, order));
    }
    rule
}

pub fn quadrature_cell(mesh: &PolytopalMesh, cell: usize, order: usize) -> QuadratureRule {
    quadrature_polygon(&mesh.cell_vertices(cell), mesh.cells[cell].centroid, order)
}

pub fn quadrature_face(mesh: &PolytopalMesh, face: usize, order: usize) -> QuadratureRule {
    let f = &mesh.faces[face];
    quadrature_segment(mesh.vertices[f.vertex_ids[0]].coords, mesh.vertices[f.vertex_ids[1]].coords, order)
}
