//! Global unknown numbering with Dirichlet elimination, assembly of the
//! Hermitian stiffness and cell mass, discrete norms and static condensation.

mod condense;
mod sparse;

pub use condense::{static_condense, CondensedSystem};
pub use sparse::CsrMatrix;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::Result;
use crate::functional::{cell_basis, combine, poly_dim, quadrature_cell};
use crate::hho::{interpolate_local, local_form, potential_reconstruction, CellContext, FieldSpec};
use crate::mesh::{Point, PolytopalMesh};

/// Coefficient vector over the global unknowns.
pub type HybridField = Vec<C64>;

/// Cell unknowns first (cell by cell), then interior faces. Boundary faces
/// carry no unknowns (`u_F = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalDofMap {
    pub k: usize,
    pub n_cell: usize,
    pub n_face: usize,
    pub cell_offset: Vec<usize>,
    /// `None` for eliminated boundary faces.
    pub face_offset: Vec<Option<usize>>,
    pub n_cell_dofs: usize,
    pub n_dof: usize,
}

impl GlobalDofMap {
    pub fn new(mesh: &PolytopalMesh, k: usize) -> Self {
        let n_cell = poly_dim(k);
        let n_face = k + 1;
        let cell_offset: Vec<usize> = (0..mesh.n_cells()).map(|c| c * n_cell).collect();
        let n_cell_dofs = mesh.n_cells() * n_cell;
        let mut face_offset = vec![None; mesh.n_faces()];
        for (i, &f) in mesh.interior_face_ids.iter().enumerate() {
            face_offset[f] = Some(n_cell_dofs + i * n_face);
        }
        Self {
            k,
            n_cell,
            n_face,
            cell_offset,
            face_offset,
            n_cell_dofs,
            n_dof: n_cell_dofs + mesh.interior_face_ids.len() * n_face,
        }
    }

    /// Global index of every local unknown of `cell`, `None` when eliminated.
    pub fn local_to_global(&self, mesh: &PolytopalMesh, cell: usize) -> Vec<Option<usize>> {
        let mut out: Vec<Option<usize>> = (0..self.n_cell).map(|i| Some(self.cell_offset[cell] + i)).collect();
        for &f in &mesh.cells[cell].face_ids {
            match self.face_offset[f] {
                Some(o) => out.extend((0..self.n_face).map(|j| Some(o + j))),
                None => out.extend(std::iter::repeat_n(None, self.n_face)),
            }
        }
        out
    }

    /// Local unknowns of `cell`, eliminated entries read as zero.
    pub fn gather(&self, mesh: &PolytopalMesh, cell: usize, v: &[C64]) -> DVector<C64> {
        let map = self.local_to_global(mesh, cell);
        DVector::from_iterator(map.len(), map.iter().map(|g| g.map_or(C64::new(0.0, 0.0), |i| v[i])))
    }

    pub fn cell_coeffs<'a>(&self, cell: usize, v: &'a [C64]) -> &'a [C64] {
        &v[self.cell_offset[cell]..self.cell_offset[cell] + self.n_cell]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AssemblyOptions {
    /// Extra quadrature order on top of `2k + 3`.
    pub quad_extra: usize,
    /// Use the gradient of the reconstruction instead of the full covariant
    /// gradient.
    pub cheap_gradient: bool,
}

/// Global stiffness `K[i][j] = a_h(phi_j, phi_i)` and cell mass `M`.
#[derive(Clone, Debug)]
pub struct HermitianSystem {
    pub dofs: GlobalDofMap,
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    pub field_name: String,
    /// `-(|A|_inf^2 + |V|_inf)`
    pub spectral_floor: f64,
    pub options: AssemblyOptions,
}

impl HermitianSystem {
    pub fn n_dof(&self) -> usize {
        self.dofs.n_dof
    }

    /// `sqrt(v^H M v)`.
    pub fn l2_norm_cells(&self, v: &[C64]) -> f64 {
        self.mass.form(v, v).re.max(0.0).sqrt()
    }

    /// `v^H K v / v^H M v`.
    pub fn rayleigh_quotient(&self, v: &[C64]) -> f64 {
        self.stiffness.form(v, v).re / self.mass.form(v, v).re
    }
}

struct LocalBlock {
    aloc: nalgebra::DMatrix<C64>,
    mloc: nalgebra::DMatrix<f64>,
}

/// Assembles the global system. Local operators are computed in parallel;
/// the scatter is sequential in cell order, so the result does not depend on
/// scheduling.
pub fn assemble(mesh: &PolytopalMesh, k: usize, field: &FieldSpec, opts: AssemblyOptions) -> Result<HermitianSystem> {
    let dofs = GlobalDofMap::new(mesh, k);
    let blocks = (0..mesh.n_cells())
        .into_par_iter()
        .map(|c| {
            let ctx = CellContext::new(mesh, c, k, opts.quad_extra)?;
            let ops = local_form(&ctx, field, opts.cheap_gradient)?;
            Ok(LocalBlock {
                aloc: ops.aloc,
                mloc: ops.mloc,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let maps: Vec<Vec<Option<usize>>> = (0..mesh.n_cells()).map(|c| dofs.local_to_global(mesh, c)).collect();
    let mut k_rows = vec![Vec::new(); dofs.n_dof];
    let mut m_rows = vec![Vec::new(); dofs.n_dof];
    for (c, map) in maps.iter().enumerate() {
        let g: Vec<usize> = map.iter().flatten().copied().collect();
        for &a in &g {
            k_rows[a].extend_from_slice(&g);
        }
        let off = dofs.cell_offset[c];
        for a in 0..dofs.n_cell {
            m_rows[off + a].extend(off..off + dofs.n_cell);
        }
    }
    let mut stiffness = CsrMatrix::from_pattern(dofs.n_dof, dofs.n_dof, k_rows);
    let mut mass = CsrMatrix::from_pattern(dofs.n_dof, dofs.n_dof, m_rows);
    for (c, (map, b)) in maps.iter().zip(&blocks).enumerate() {
        for (i, gi) in map.iter().enumerate() {
            let Some(gi) = *gi else { continue };
            for (j, gj) in map.iter().enumerate() {
                if let Some(gj) = *gj {
                    stiffness.add(gi, gj, b.aloc[(i, j)]);
                }
            }
        }
        let off = dofs.cell_offset[c];
        for i in 0..dofs.n_cell {
            for j in 0..dofs.n_cell {
                mass.add(off + i, off + j, C64::new(b.mloc[(i, j)], 0.0));
            }
        }
    }
    Ok(HermitianSystem {
        dofs,
        stiffness,
        mass,
        field_name: field.name.clone(),
        spectral_floor: field.spectral_floor(),
        options: opts,
    })
}

/// Load vector `l(v) = (f, v_T)`: cell blocks `int f phi_i`, face blocks zero.
pub fn assemble_rhs<F>(mesh: &PolytopalMesh, dofs: &GlobalDofMap, quad_extra: usize, f: F) -> HybridField
where
    F: Fn(Point) -> C64 + Sync,
{
    let k = dofs.k;
    let blocks: Vec<Vec<C64>> = (0..mesh.n_cells())
        .into_par_iter()
        .map(|c| {
            let basis = cell_basis(mesh, c, k);
            let rule = quadrature_cell(mesh, c, 2 * k + 3 + quad_extra);
            let mut b = vec![C64::new(0.0, 0.0); basis.dim()];
            let mut v = vec![0.0; basis.dim()];
            for (&p, &w) in rule.points.iter().zip(&rule.weights) {
                basis.eval_into(p, &mut v);
                let fw = f(p) * w;
                for (bi, vi) in b.iter_mut().zip(&v) {
                    *bi += fw * *vi;
                }
            }
            b
        })
        .collect();
    let mut out = vec![C64::new(0.0, 0.0); dofs.n_dof];
    for (c, b) in blocks.into_iter().enumerate() {
        out[dofs.cell_offset[c]..dofs.cell_offset[c] + dofs.n_cell].copy_from_slice(&b);
    }
    out
}

/// Global interpolant `I_h u`; boundary face values are dropped.
pub fn interpolate<F>(mesh: &PolytopalMesh, dofs: &GlobalDofMap, quad_extra: usize, u: F) -> Result<HybridField>
where
    F: Fn(Point) -> C64 + Sync,
{
    let locals = (0..mesh.n_cells())
        .into_par_iter()
        .map(|c| {
            let ctx = CellContext::new(mesh, c, dofs.k, quad_extra)?;
            Ok(interpolate_local(&ctx, &u))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![C64::new(0.0, 0.0); dofs.n_dof];
    let mut written = vec![false; dofs.n_dof];
    for (c, loc) in locals.iter().enumerate() {
        for (i, g) in dofs.local_to_global(mesh, c).into_iter().enumerate() {
            if let Some(g) = g {
                if !written[g] {
                    out[g] = loc[i];
                    written[g] = true;
                }
            }
        }
    }
    Ok(out)
}

/// `(sum_T |grad v_T|^2_T + sum_T sum_{F in F_T} h_F^{-1} |v_F - v_T|^2_F)^{1/2}`.
pub fn norm_1h(mesh: &PolytopalMesh, dofs: &GlobalDofMap, quad_extra: usize, v: &[C64]) -> Result<f64> {
    let parts = (0..mesh.n_cells())
        .into_par_iter()
        .map(|c| {
            let ctx = CellContext::new(mesh, c, dofs.k, quad_extra)?;
            let nm = ctx.norm_1h_matrix();
            let u = dofs.gather(mesh, c, v);
            let nu = nm.map(|x| C64::new(x, 0.0)) * &u;
            Ok(u.iter().zip(nu.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.iter().sum::<f64>().max(0.0).sqrt())
}

/// Value of the cell polynomial `v_T` at `p`.
pub fn eval_cell(mesh: &PolytopalMesh, dofs: &GlobalDofMap, cell: usize, v: &[C64], p: Point) -> C64 {
    let basis = cell_basis(mesh, cell, dofs.k);
    combine(&basis.eval(p), dofs.cell_coeffs(cell, v))
}

/// Reconstructions `p_T v` of every cell, coefficients in the degree `k+1`
/// scaled monomial basis.
pub fn reconstruct(mesh: &PolytopalMesh, dofs: &GlobalDofMap, quad_extra: usize, v: &[C64]) -> Result<Vec<Vec<C64>>> {
    (0..mesh.n_cells())
        .into_par_iter()
        .map(|c| {
            let ctx = CellContext::new(mesh, c, dofs.k, quad_extra)?;
            let p = potential_reconstruction(&ctx)?;
            let u = dofs.gather(mesh, c, v);
            Ok((p.map(|x| C64::new(x, 0.0)) * u).iter().copied().collect())
        })
        .collect()
}
