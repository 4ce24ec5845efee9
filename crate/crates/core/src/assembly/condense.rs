use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{CsrMatrix, HermitianSystem, HybridField};
use crate::error::{Error, Result};
use crate::mesh::PolytopalMesh;

struct CellRecovery {
    offset: usize,
    /// Global indices of the cell's face unknowns.
    faces: Vec<usize>,
    /// `K_TT^{-1} K_TF`
    x: DMatrix<C64>,
    /// `K_TT^{-1} b_T`
    y: DVector<C64>,
}

/// Face-only Schur complement system and the data to recover cell unknowns.
pub struct CondensedSystem {
    /// Unknowns are the face unknowns shifted by `n_cell_dofs`.
    pub matrix: CsrMatrix,
    pub rhs: Vec<C64>,
    n_cell_dofs: usize,
    n_dof: usize,
    cells: Vec<CellRecovery>,
}

impl CondensedSystem {
    /// Full solution from the face solution: `u_T = K_TT^{-1}(b_T - K_TF u_F)`.
    pub fn recover(&self, face_solution: &[C64]) -> HybridField {
        assert_eq!(face_solution.len(), self.matrix.nrows);
        let mut out = vec![C64::new(0.0, 0.0); self.n_dof];
        out[self.n_cell_dofs..].copy_from_slice(face_solution);
        for r in &self.cells {
            let uf = DVector::from_iterator(r.faces.len(), r.faces.iter().map(|&g| out[g]));
            let ut = &r.y - &r.x * uf;
            out[r.offset..r.offset + ut.len()].copy_from_slice(ut.as_slice());
        }
        out
    }
}

/// Eliminates the cell unknowns of `K u = b`. Fails with the cell id when a
/// cell block is numerically singular.
pub fn static_condense(mesh: &PolytopalMesh, sys: &HermitianSystem, rhs: &[C64]) -> Result<CondensedSystem> {
    let dofs = &sys.dofs;
    let k = &sys.stiffness;
    let nc = dofs.n_cell_dofs;
    let nf = dofs.n_dof - nc;

    let cells = (0..mesh.n_cells())
        .into_par_iter()
        .map(|c| {
            let off = dofs.cell_offset[c];
            let nk = dofs.n_cell;
            let faces: Vec<usize> = dofs.local_to_global(mesh, c)[nk..].iter().flatten().copied().collect();
            let ktt = DMatrix::from_fn(nk, nk, |i, j| k.get(off + i, off + j));
            let ktf = DMatrix::from_fn(nk, faces.len(), |i, j| k.get(off + i, faces[j]));
            let lu = ktt.lu();
            let u = lu.u();
            let diag: Vec<f64> = (0..nk).map(|i| u[(i, i)].norm()).collect();
            let dmax = diag.iter().copied().fold(0.0, f64::max);
            let dmin = diag.iter().copied().fold(f64::INFINITY, f64::min);
            if !(dmin > 1e-13 * dmax) {
                return Err(Error::SingularCellBlock { cell: c });
            }
            let x = lu.solve(&ktf).ok_or(Error::SingularCellBlock { cell: c })?;
            let bt = DVector::from_column_slice(&rhs[off..off + nk]);
            let y = lu.solve(&bt).ok_or(Error::SingularCellBlock { cell: c })?;
            Ok(CellRecovery { offset: off, faces, x, y })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut triplets = Vec::new();
    for i in nc..dofs.n_dof {
        for (j, v) in k.row(i) {
            if j >= nc {
                triplets.push((i - nc, j - nc, v));
            }
        }
    }
    let mut g: Vec<C64> = rhs[nc..].to_vec();
    for r in &cells {
        let nk = r.y.len();
        let kft = DMatrix::from_fn(r.faces.len(), nk, |i, j| k.get(r.faces[i], r.offset + j));
        let s = &kft * &r.x;
        let gy = &kft * &r.y;
        for (a, &fa) in r.faces.iter().enumerate() {
            g[fa - nc] -= gy[a];
            for (b, &fb) in r.faces.iter().enumerate() {
                triplets.push((fa - nc, fb - nc, -s[(a, b)]));
            }
        }
    }
    Ok(CondensedSystem {
        matrix: CsrMatrix::from_triplets(nf, nf, &triplets),
        rhs: g,
        n_cell_dofs: nc,
        n_dof: dofs.n_dof,
        cells,
    })
}
