use nalgebra::DMatrix;

use crate::error::Result;
use crate::functional::{
    cell_basis, face_basis, mass_matrix, poly_dim, quadrature_cell, quadrature_face, CellBasis, FaceBasis, Projector,
    QuadratureRule,
};
use crate::mesh::{Point, PolytopalMesh};

/// `a^T diag(w) b` for real matrices with one row per quadrature point.
pub fn weighted_gram(a: &DMatrix<f64>, w: &[f64], b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut wb = b.clone();
    for (mut row, &wi) in wb.row_iter_mut().zip(w) {
        row *= wi;
    }
    a.transpose() * wb
}

/// Local unknowns `U_T = P^k(T) x prod_F P^k(F)`: the cell block first, then
/// one block per face in cell face order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalDofLayout {
    pub k: usize,
    pub n_cell: usize,
    pub n_face: usize,
    pub n_faces: usize,
}

impl LocalDofLayout {
    pub fn new(k: usize, n_faces: usize) -> Self {
        Self {
            k,
            n_cell: poly_dim(k),
            n_face: k + 1,
            n_faces,
        }
    }

    pub fn n_loc(&self) -> usize {
        self.n_cell + self.n_faces * self.n_face
    }

    pub fn face_offset(&self, local_face: usize) -> usize {
        self.n_cell + local_face * self.n_face
    }
}

/// Basis values of a face: trace of the cell basis and the face basis.
#[derive(Clone, Debug)]
pub struct FaceContext {
    pub face: usize,
    pub normal: Point,
    pub h: f64,
    pub basis: FaceBasis,
    pub quad: QuadratureRule,
    /// `zeta_j(x_q)`, `nq x (k+1)`
    pub zeta: DMatrix<f64>,
    /// `phi_r(x_q)` for the degree `k+1` cell basis, `nq x n_r`
    pub phi: DMatrix<f64>,
    /// `grad phi_r(x_q) . n`, `nq x n_r`
    pub dphi_n: DMatrix<f64>,
    /// Face mass matrix and its factorization.
    pub mass: DMatrix<f64>,
    pub proj: Projector,
}

/// Everything geometric needed by the local operators of one cell.
#[derive(Clone, Debug)]
pub struct CellContext {
    pub cell: usize,
    pub layout: LocalDofLayout,
    pub measure: f64,
    /// Degree `k+1` scaled monomials; the first `n_cell` span `P^k(T)`.
    pub basis: CellBasis,
    pub quad: QuadratureRule,
    /// `phi_r(x_q)`, `nq x n_r`
    pub phi: DMatrix<f64>,
    /// `d_x phi_r(x_q)` and `d_y phi_r(x_q)`, `nq x n_r` each
    pub dphi: [DMatrix<f64>; 2],
    /// Mass of the degree `k+1` basis, `n_r x n_r`.
    pub mass_r: DMatrix<f64>,
    /// Factorized mass of `P^k(T)`.
    pub proj_k: Projector,
    /// `(grad phi_i, grad phi_j)_T`, `n_r x n_r`
    pub stiff_r: DMatrix<f64>,
    pub faces: Vec<FaceContext>,
}

impl CellContext {
    /// Builds bases and quadrature rules of order `2k + 3 + quad_extra`.
    pub fn new(mesh: &PolytopalMesh, cell: usize, k: usize, quad_extra: usize) -> Result<Self> {
        let c = &mesh.cells[cell];
        let layout = LocalDofLayout::new(k, c.face_ids.len());
        let order = 2 * k + 3 + quad_extra;
        let basis = cell_basis(mesh, cell, k + 1);
        let n_r = basis.dim();
        let quad = quadrature_cell(mesh, cell, order);
        let nq = quad.len();

        let mut phi = DMatrix::zeros(nq, n_r);
        let mut dx = DMatrix::zeros(nq, n_r);
        let mut dy = DMatrix::zeros(nq, n_r);
        let mut v = vec![0.0; n_r];
        let mut g = vec![[0.0; 2]; n_r];
        for (q, &p) in quad.points.iter().enumerate() {
            basis.eval_into(p, &mut v);
            basis.grad_into(p, &mut g);
            for r in 0..n_r {
                phi[(q, r)] = v[r];
                dx[(q, r)] = g[r][0];
                dy[(q, r)] = g[r][1];
            }
        }
        let mass_r = weighted_gram(&phi, &quad.weights, &phi);
        let stiff_r = weighted_gram(&dx, &quad.weights, &dx) + weighted_gram(&dy, &quad.weights, &dy);
        let n_k = layout.n_cell;
        let proj_k = Projector::new(mass_r.view((0, 0), (n_k, n_k)).into_owned(), "cell mass", cell)?;

        let mut faces = Vec::with_capacity(layout.n_faces);
        for (lf, &fid) in c.face_ids.iter().enumerate() {
            let f = &mesh.faces[fid];
            let normal = mesh.outward_normal(cell, lf);
            let fb = face_basis(mesh, fid, k);
            let fq = quadrature_face(mesh, fid, order);
            let nqf = fq.len();
            let mut zeta = DMatrix::zeros(nqf, k + 1);
            let mut fphi = DMatrix::zeros(nqf, n_r);
            let mut dphi_n = DMatrix::zeros(nqf, n_r);
            let mut zv = vec![0.0; k + 1];
            for (q, &p) in fq.points.iter().enumerate() {
                fb.eval_into(p, &mut zv);
                for j in 0..=k {
                    zeta[(q, j)] = zv[j];
                }
                basis.eval_into(p, &mut v);
                basis.grad_into(p, &mut g);
                for r in 0..n_r {
                    fphi[(q, r)] = v[r];
                    dphi_n[(q, r)] = g[r][0] * normal[0] + g[r][1] * normal[1];
                }
            }
            let fmass = mass_matrix(&fq, k + 1, |p, o| fb.eval_into(p, o));
            let proj = Projector::new(fmass.clone(), "face mass", cell)?;
            faces.push(FaceContext {
                face: fid,
                normal,
                h: f.diameter,
                basis: fb,
                quad: fq,
                zeta,
                phi: fphi,
                dphi_n,
                mass: fmass,
                proj,
            });
        }

        Ok(Self {
            cell,
            layout,
            measure: c.measure,
            basis,
            quad,
            phi,
            dphi: [dx, dy],
            mass_r,
            proj_k,
            stiff_r,
            faces,
        })
    }

    pub fn k(&self) -> usize {
        self.layout.k
    }

    pub fn n_r(&self) -> usize {
        self.basis.dim()
    }

    /// Mass matrix of `P^k(T)`.
    pub fn mass_k(&self) -> DMatrix<f64> {
        let n = self.layout.n_cell;
        self.mass_r.view((0, 0), (n, n)).into_owned()
    }

    /// Values of `P^k(T)` at cell quadrature points, `nq x n_cell`.
    pub fn psi(&self) -> DMatrix<f64> {
        self.phi.columns(0, self.layout.n_cell).into_owned()
    }

    /// Real matrix `N` with `v^T N v = sum_T |grad v_T|^2 + sum_F h_F^{-1} |v_F - v_T|^2_F`
    /// restricted to this cell.
    pub fn norm_1h_matrix(&self) -> DMatrix<f64> {
        let l = self.layout;
        let n_loc = l.n_loc();
        let mut out = DMatrix::zeros(n_loc, n_loc);
        out.view_mut((0, 0), (l.n_cell, l.n_cell))
            .copy_from(&self.stiff_r.view((0, 0), (l.n_cell, l.n_cell)));
        for (lf, fc) in self.faces.iter().enumerate() {
            let j = self.face_jump_values(lf, fc);
            out += weighted_gram(&j, &fc.quad.weights, &j) / fc.h;
        }
        out
    }

    /// Values of `v_F - v_T` at the quadrature points of local face `lf`,
    /// as a `nq x n_loc` matrix.
    pub fn face_jump_values(&self, lf: usize, fc: &FaceContext) -> DMatrix<f64> {
        let l = self.layout;
        let mut j = DMatrix::zeros(fc.quad.len(), l.n_loc());
        j.columns_mut(0, l.n_cell).copy_from(&(-fc.phi.columns(0, l.n_cell)));
        j.columns_mut(l.face_offset(lf), l.n_face).copy_from(&fc.zeta);
        j
    }
}
