use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::{quadrature_cell, quadrature_face, CellBasis, FaceBasis, QuadratureRule};
use crate::error::{Error, Result};
use crate::mesh::{Point, PolytopalMesh};

/// Gram matrix of a basis under a quadrature rule.
pub fn mass_matrix<F>(rule: &QuadratureRule, dim: usize, eval: F) -> DMatrix<f64>
where
    F: Fn(Point, &mut [f64]),
{
    let mut m = DMatrix::zeros(dim, dim);
    let mut v = vec![0.0; dim];
    for (&p, &w) in rule.points.iter().zip(&rule.weights) {
        eval(p, &mut v);
        for j in 0..dim {
            let wj = w * v[j];
            for i in 0..dim {
                m[(i, j)] += v[i] * wj;
            }
        }
    }
    m
}

/// Cholesky-factored mass matrix; solves for L2-projection coefficients.
#[derive(Clone, Debug)]
pub struct Projector {
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    dim: usize,
}

impl Projector {
    pub fn new(mass: DMatrix<f64>, what: &'static str, cell: usize) -> Result<Self> {
        let dim = mass.nrows();
        let chol = mass.cholesky().ok_or(Error::SingularLocalMatrix { what, cell })?;
        Ok(Self { chol, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        self.chol.inverse()
    }

    pub fn solve_real(&self, rhs: &DMatrix<f64>) -> DMatrix<f64> {
        self.chol.solve(rhs)
    }

    /// Solves `M c = b` for complex `b`.
    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let mut b = DMatrix::zeros(self.dim, 2);
        for (i, z) in rhs.iter().enumerate() {
            b[(i, 0)] = z.re;
            b[(i, 1)] = z.im;
        }
        self.chol.solve_mut(&mut b);
        (0..self.dim).map(|i| C64::new(b[(i, 0)], b[(i, 1)])).collect()
    }

    pub fn solve_vec(&self, rhs: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(rhs)
    }
}

/// Right-hand side `b_i = (f, phi_i)` for a real basis.
pub fn load_vector<F, B>(rule: &QuadratureRule, dim: usize, eval: B, f: F) -> Vec<C64>
where
    F: Fn(Point) -> C64,
    B: Fn(Point, &mut [f64]),
{
    let mut b = vec![C64::new(0.0, 0.0); dim];
    let mut v = vec![0.0; dim];
    for (&p, &w) in rule.points.iter().zip(&rule.weights) {
        eval(p, &mut v);
        let fw = f(p) * w;
        for (bi, vi) in b.iter_mut().zip(&v) {
            *bi += fw * *vi;
        }
    }
    b
}

pub fn cell_basis(mesh: &PolytopalMesh, cell: usize, degree: usize) -> CellBasis {
    let c = &mesh.cells[cell];
    CellBasis::new(degree, c.centroid, c.diameter)
}

pub fn face_basis(mesh: &PolytopalMesh, face: usize, degree: usize) -> FaceBasis {
    let f = &mesh.faces[face];
    FaceBasis::new(degree, f.midpoint, f.tangent(), f.diameter)
}

/// L2 projection of `f` onto `P^l(T)`, coefficients in the scaled monomial
/// basis. `extra` raises the quadrature order beyond `2 l`.
pub fn l2_project_cell<F>(mesh: &PolytopalMesh, cell: usize, l: usize, extra: usize, f: F) -> Result<Vec<C64>>
where
    F: Fn(Point) -> C64,
{
    let basis = cell_basis(mesh, cell, l);
    let rule = quadrature_cell(mesh, cell, 2 * l + extra);
    let eval = |p: Point, o: &mut [f64]| basis.eval_into(p, o);
    let proj = Projector::new(mass_matrix(&rule, basis.dim(), eval), "cell mass", cell)?;
    Ok(proj.solve(&load_vector(&rule, basis.dim(), eval, f)))
}

/// L2 projection of `f` onto `P^l(F)`.
pub fn l2_project_face<F>(mesh: &PolytopalMesh, face: usize, l: usize, extra: usize, f: F) -> Result<Vec<C64>>
where
    F: Fn(Point) -> C64,
{
    let basis = face_basis(mesh, face, l);
    let rule = quadrature_face(mesh, face, 2 * l + extra);
    let eval = |p: Point, o: &mut [f64]| basis.eval_into(p, o);
    let proj = Projector::new(mass_matrix(&rule, basis.dim(), eval), "face mass", mesh.faces[face].owner_cell)?;
    Ok(proj.solve(&load_vector(&rule, basis.dim(), eval, f)))
}

/// Evaluates a complex combination of real basis values.
pub fn combine(values: &[f64], coeffs: &[C64]) -> C64 {
    values.iter().zip(coeffs).map(|(v, c)| c * *v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_cartesian, generate_punctured, PuncturedOptions, Rectangle};

    #[test]
    fn projection_reproduces_polynomials() {
        let m = generate_cartesian(Rectangle::unit(), 3, 3).unwrap();
        let f = |p: Point| C64::new(p[0] * p[0] * p[1] - 2.0 * p[1], p[0] - p[1] * p[1] * p[1]);
        let c = l2_project_cell(&m, 4, 3, 2, f).unwrap();
        let b = cell_basis(&m, 4, 3);
        for p in [[0.4, 0.4], [0.5, 0.61], [0.35, 0.66]] {
            assert!((combine(&b.eval(p), &c) - f(p)).norm() < 1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent_and_orthogonal() {
        let mut opts = PuncturedOptions::new(Rectangle::new([-1.0, -1.0], [1.0, 1.0]), 6, 6, [0.0, 0.0], 0.35);
        opts.hole_segments = 16;
        let m = generate_punctured(&opts).unwrap();
        let f = |p: Point| C64::new((3.0 * p[0]).sin(), (p[1] * p[0]).exp());
        for cell in 0..m.n_cells() {
            let l = 2;
            let c = l2_project_cell(&m, cell, l, 6, f).unwrap();
            let b = cell_basis(&m, cell, l);
            let again = l2_project_cell(&m, cell, l, 6, |p| combine(&b.eval(p), &c)).unwrap();
            for (x, y) in c.iter().zip(&again) {
                assert!((x - y).norm() < 1e-10 * (1.0 + x.norm()));
            }
            // residual orthogonal to P^l
            let rule = quadrature_cell(&m, cell, 2 * l + 10);
            let area = m.cells[cell].measure;
            for i in 0..b.dim() {
                let r: C64 = rule.integrate(|p| (f(p) - combine(&b.eval(p), &c)) * b.eval(p)[i]);
                assert!(r.norm() < 1e-9 * area, "cell {cell} i {i}: {r}");
            }
        }
    }

    #[test]
    fn face_projection_of_linear_function() {
        let m = generate_cartesian(Rectangle::unit(), 2, 2).unwrap();
        for face in 0..m.n_faces() {
            let f = |p: Point| C64::new(2.0 * p[0] - p[1], 1.0);
            let c = l2_project_face(&m, face, 1, 0, f).unwrap();
            let b = face_basis(&m, face, 1);
            let mid = m.faces[face].midpoint;
            assert!((combine(&b.eval(mid), &c) - f(mid)).norm() < 1e-13);
        }
    }
}
