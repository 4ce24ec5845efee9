use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::context::{weighted_gram, CellContext};
use super::field::FieldSpec;
use crate::error::{Error, Result};
use crate::functional::Projector;
use crate::mesh::Point;

pub(crate) fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Solves `M X = B` column by column for complex `B` and real SPD `M`.
pub(crate) fn solve_complex(proj: &Projector, b: &DMatrix<C64>) -> DMatrix<C64> {
    let re = proj.solve_real(&b.map(|z| z.re));
    let im = proj.solve_real(&b.map(|z| z.im));
    re.zip_map(&im, C64::new)
}

fn scaled_weights(w: &[f64], f: &[f64]) -> Vec<f64> {
    w.iter().zip(f).map(|(a, b)| a * b).collect()
}

/// Potential reconstruction `p_T : U_T -> P^{k+1}(T)` as an `n_r x n_loc`
/// real matrix. Rows 1.. solve the Neumann problem against non-constant test
/// functions; row 0 matches the mean of `u_T`.
pub fn potential_reconstruction(ctx: &CellContext) -> Result<DMatrix<f64>> {
    let l = ctx.layout;
    let n_r = ctx.n_r();
    let n_loc = l.n_loc();
    let mut rhs = DMatrix::zeros(n_r, n_loc);
    // (grad psi_j, grad phi_i)_T
    rhs.columns_mut(0, l.n_cell)
        .copy_from(&ctx.stiff_r.columns(0, l.n_cell));
    for (lf, fc) in ctx.faces.iter().enumerate() {
        // -(psi_j, grad phi_i . n)_F and (zeta_j, grad phi_i . n)_F
        let cell_part = weighted_gram(&fc.dphi_n, &fc.quad.weights, &fc.phi.columns(0, l.n_cell).into_owned());
        let mut cols = rhs.columns_mut(0, l.n_cell);
        cols -= cell_part;
        let face_part = weighted_gram(&fc.dphi_n, &fc.quad.weights, &fc.zeta);
        rhs.columns_mut(l.face_offset(lf), l.n_face).copy_from(&face_part);
    }

    let k11 = ctx.stiff_r.view((1, 1), (n_r - 1, n_r - 1)).into_owned();
    let chol = k11.cholesky().ok_or(Error::SingularLocalMatrix {
        what: "reconstruction stiffness",
        cell: ctx.cell,
    })?;
    let tail = chol.solve(&rhs.rows(1, n_r - 1).into_owned());

    let mut p = DMatrix::zeros(n_r, n_loc);
    p.rows_mut(1, n_r - 1).copy_from(&tail);
    // c_0 |T| + sum_{i>=1} c_i (phi_i, 1) = (u_T, 1)
    let mut row0 = DVector::zeros(n_loc);
    for j in 0..l.n_cell {
        row0[j] = ctx.mass_r[(0, j)];
    }
    for i in 1..n_r {
        row0 -= tail.row(i - 1).transpose() * ctx.mass_r[(0, i)];
    }
    p.row_mut(0).copy_from(&(row0 / ctx.mass_r[(0, 0)]).transpose());
    Ok(p)
}

/// `delta_T = pi_T^k p_T - [I | 0]`, an `n_cell x n_loc` matrix.
pub fn delta_cell(ctx: &CellContext, p: &DMatrix<f64>) -> DMatrix<f64> {
    let l = ctx.layout;
    let m_kr = ctx.mass_r.rows(0, l.n_cell).into_owned();
    let mut d = ctx.proj_k.solve_real(&(m_kr * p));
    for i in 0..l.n_cell {
        d[(i, i)] -= 1.0;
    }
    d
}

/// `delta_TF = pi_F^k p_T - E_F`, a `(k+1) x n_loc` matrix.
pub fn delta_face(ctx: &CellContext, lf: usize, p: &DMatrix<f64>) -> DMatrix<f64> {
    let l = ctx.layout;
    let fc = &ctx.faces[lf];
    let m_fr = weighted_gram(&fc.zeta, &fc.quad.weights, &fc.phi);
    let mut d = fc.proj.solve_real(&(m_fr * p));
    let off = l.face_offset(lf);
    for j in 0..l.n_face {
        d[(j, off + j)] -= 1.0;
    }
    d
}

/// Values of `(delta_TF - delta_T) u` at the quadrature points of every face,
/// one `nq x n_loc` matrix per face in cell face order.
pub fn stabilization_factors(ctx: &CellContext, p: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let l = ctx.layout;
    let dt = delta_cell(ctx, p);
    ctx.faces
        .iter()
        .enumerate()
        .map(|(lf, fc)| &fc.zeta * delta_face(ctx, lf, p) - fc.phi.columns(0, l.n_cell) * &dt)
        .collect()
}

/// Stabilization `s_T(u, v) = sum_F h_F^{-1} ((delta_TF - delta_T) u, (delta_TF - delta_T) v)_F`.
pub fn stabilization(ctx: &CellContext, p: &DMatrix<f64>) -> DMatrix<f64> {
    let n_loc = ctx.layout.n_loc();
    let mut s = DMatrix::zeros(n_loc, n_loc);
    for (fc, vals) in ctx.faces.iter().zip(stabilization_factors(ctx, p)) {
        s += weighted_gram(&vals, &fc.quad.weights, &vals) / fc.h;
    }
    (&s + s.transpose()) * 0.5
}

/// `s_T(u, u)` from the face values directly, without the roundoff floor of
/// the assembled quadratic form.
pub fn stabilization_energy(ctx: &CellContext, p: &DMatrix<f64>, u: &DVector<C64>) -> f64 {
    ctx.faces
        .iter()
        .zip(stabilization_factors(ctx, p))
        .map(|(fc, vals)| {
            let du = to_complex(&vals) * u;
            du.iter().zip(&fc.quad.weights).map(|(z, w)| w * z.norm_sqr()).sum::<f64>() / fc.h
        })
        .sum()
}

/// Componentwise `pi_T^k A`, one coefficient vector per direction.
pub fn project_potential(ctx: &CellContext, field: &FieldSpec) -> Result<[DVector<f64>; 2]> {
    let l = ctx.layout;
    let nq = ctx.quad.len();
    let mut vals = [DVector::zeros(nq), DVector::zeros(nq)];
    for (q, &x) in ctx.quad.points.iter().enumerate() {
        let a = (field.a)(x);
        if !(a[0].is_finite() && a[1].is_finite()) {
            return Err(Error::NonFiniteField {
                what: "vector potential",
                cell: ctx.cell,
                x: x[0],
                y: x[1],
            });
        }
        vals[0][q] = a[0];
        vals[1][q] = a[1];
    }
    let psi = ctx.phi.columns(0, l.n_cell);
    let w = DVector::from_column_slice(&ctx.quad.weights);
    let proj = |v: &DVector<f64>| ctx.proj_k.solve_vec(&(psi.transpose() * v.component_mul(&w)));
    Ok([proj(&vals[0]), proj(&vals[1])])
}

fn potential_values(ctx: &CellContext, a_t: &[DVector<f64>; 2]) -> [Vec<f64>; 2] {
    let psi = ctx.phi.columns(0, ctx.layout.n_cell);
    [0, 1].map(|c| (psi * &a_t[c]).iter().copied().collect())
}

/// Covariant gradient `G_T[A_T]`, `2 n_cell x n_loc`, components stacked.
/// Defined by `(G u, tau)_T = (u_T, -i div tau - A_T . tau)_T - i sum_F (u_F, tau . n_F)_F`.
pub fn covariant_gradient(ctx: &CellContext, a_t: &[DVector<f64>; 2]) -> DMatrix<C64> {
    let l = ctx.layout;
    let nk = l.n_cell;
    let psi = ctx.psi();
    let w = &ctx.quad.weights;
    let a_vals = potential_values(ctx, a_t);
    let i = C64::new(0.0, 1.0);
    let mut g = DMatrix::zeros(2 * nk, l.n_loc());
    for c in 0..2 {
        let dpsi = ctx.dphi[c].columns(0, nk).into_owned();
        let d = weighted_gram(&dpsi, w, &psi);
        let ma = weighted_gram(&psi, &scaled_weights(w, &a_vals[c]), &psi);
        let mut b = DMatrix::<C64>::zeros(nk, l.n_loc());
        b.columns_mut(0, nk).copy_from(&(to_complex(&d) * i - to_complex(&ma)));
        for (lf, fc) in ctx.faces.iter().enumerate() {
            let tr = weighted_gram(&fc.phi.columns(0, nk).into_owned(), &fc.quad.weights, &fc.zeta);
            b.columns_mut(l.face_offset(lf), l.n_face)
                .copy_from(&(to_complex(&tr) * (-i * fc.normal[c])));
        }
        g.rows_mut(c * nk, nk).copy_from(&solve_complex(&ctx.proj_k, &b));
    }
    g
}

/// Cheaper gradient `pi_T^k(-i grad p_T u - A_T p_T u)`.
pub fn covariant_gradient_cheap(ctx: &CellContext, a_t: &[DVector<f64>; 2], p: &DMatrix<f64>) -> DMatrix<C64> {
    let l = ctx.layout;
    let nk = l.n_cell;
    let psi = ctx.psi();
    let w = &ctx.quad.weights;
    let a_vals = potential_values(ctx, a_t);
    let i = C64::new(0.0, 1.0);
    let pc = to_complex(p);
    let mut g = DMatrix::zeros(2 * nk, l.n_loc());
    for c in 0..2 {
        let d = weighted_gram(&psi, w, &ctx.dphi[c]);
        let ma = weighted_gram(&psi, &scaled_weights(w, &a_vals[c]), &ctx.phi);
        let b = (to_complex(&d) * (-i) - to_complex(&ma)) * &pc;
        g.rows_mut(c * nk, nk).copy_from(&solve_complex(&ctx.proj_k, &b));
    }
    g
}

/// `I_T^k u = (pi_T^k u, (pi_F^k u)_F)`.
pub fn interpolate_local<F>(ctx: &CellContext, u: F) -> DVector<C64>
where
    F: Fn(Point) -> C64,
{
    let l = ctx.layout;
    let mut out = DVector::zeros(l.n_loc());
    let psi = ctx.psi();
    let mut b = vec![C64::new(0.0, 0.0); l.n_cell];
    for (q, (&x, &w)) in ctx.quad.points.iter().zip(&ctx.quad.weights).enumerate() {
        let fw = u(x) * w;
        for (i, bi) in b.iter_mut().enumerate() {
            *bi += fw * psi[(q, i)];
        }
    }
    for (i, c) in ctx.proj_k.solve(&b).into_iter().enumerate() {
        out[i] = c;
    }
    for (lf, fc) in ctx.faces.iter().enumerate() {
        let mut b = vec![C64::new(0.0, 0.0); l.n_face];
        for (q, (&x, &w)) in fc.quad.points.iter().zip(&fc.quad.weights).enumerate() {
            let fw = u(x) * w;
            for (j, bj) in b.iter_mut().enumerate() {
                *bj += fw * fc.zeta[(q, j)];
            }
        }
        let off = l.face_offset(lf);
        for (j, c) in fc.proj.solve(&b).into_iter().enumerate() {
            out[off + j] = c;
        }
    }
    out
}

/// Discrete gauge transformation `(pi_T^k(e^{i chi} v_T), pi_F^k(e^{i chi} v_F))`.
pub fn gauge_transform_local<F>(ctx: &CellContext, v: &DVector<C64>, chi: F) -> DVector<C64>
where
    F: Fn(Point) -> f64,
{
    let l = ctx.layout;
    let mut out = DVector::zeros(l.n_loc());
    let phase = |x: Point| C64::from_polar(1.0, chi(x));

    let psi = ctx.psi();
    let vt = v.rows(0, l.n_cell);
    let mut b = vec![C64::new(0.0, 0.0); l.n_cell];
    for (q, (&x, &w)) in ctx.quad.points.iter().zip(&ctx.quad.weights).enumerate() {
        let val: C64 = (0..l.n_cell).map(|j| vt[j] * psi[(q, j)]).sum();
        let fw = phase(x) * val * w;
        for (i, bi) in b.iter_mut().enumerate() {
            *bi += fw * psi[(q, i)];
        }
    }
    for (i, c) in ctx.proj_k.solve(&b).into_iter().enumerate() {
        out[i] = c;
    }
    for (lf, fc) in ctx.faces.iter().enumerate() {
        let off = l.face_offset(lf);
        let mut b = vec![C64::new(0.0, 0.0); l.n_face];
        for (q, (&x, &w)) in fc.quad.points.iter().zip(&fc.quad.weights).enumerate() {
            let val: C64 = (0..l.n_face).map(|j| v[off + j] * fc.zeta[(q, j)]).sum();
            let fw = phase(x) * val * w;
            for (j, bj) in b.iter_mut().enumerate() {
                *bj += fw * fc.zeta[(q, j)];
            }
        }
        for (j, c) in fc.proj.solve(&b).into_iter().enumerate() {
            out[off + j] = c;
        }
    }
    out
}

/// All local operators of one cell.
#[derive(Clone, Debug)]
pub struct LocalOperators {
    /// Reconstruction, `n_r x n_loc`.
    pub p: DMatrix<f64>,
    /// Covariant gradient, `2 n_cell x n_loc`.
    pub g: DMatrix<C64>,
    /// Stabilization, `n_loc x n_loc`.
    pub s: DMatrix<f64>,
    /// Local form `G^H M_d G + S + (V u_T, v_T)`, Hermitian.
    pub aloc: DMatrix<C64>,
    /// Mass of the cell block, `n_cell x n_cell`.
    pub mloc: DMatrix<f64>,
    /// `pi_T^k A`.
    pub a_t: [DVector<f64>; 2],
}

/// `(V psi_j, psi_i)_T` by cell quadrature.
pub fn potential_mass(ctx: &CellContext, field: &FieldSpec) -> Result<DMatrix<f64>> {
    let mut vals = Vec::with_capacity(ctx.quad.len());
    for &x in &ctx.quad.points {
        let v = (field.v)(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteField {
                what: "scalar potential",
                cell: ctx.cell,
                x: x[0],
                y: x[1],
            });
        }
        vals.push(v);
    }
    let psi = ctx.psi();
    Ok(weighted_gram(&psi, &scaled_weights(&ctx.quad.weights, &vals), &psi))
}

/// Assembles `a_T(u, v) = (G u, G v)_T + s_T(u, v) + (V u_T, v_T)_T` with
/// `aloc[i][j] = a_T(e_j, e_i)`.
pub fn local_form(ctx: &CellContext, field: &FieldSpec, cheap_gradient: bool) -> Result<LocalOperators> {
    let l = ctx.layout;
    let nk = l.n_cell;
    let p = potential_reconstruction(ctx)?;
    let s = stabilization(ctx, &p);
    let a_t = project_potential(ctx, field)?;
    let g = if cheap_gradient {
        covariant_gradient_cheap(ctx, &a_t, &p)
    } else {
        covariant_gradient(ctx, &a_t)
    };
    let mloc = ctx.mass_k();
    let mloc = (&mloc + mloc.transpose()) * 0.5;
    let mc = to_complex(&mloc);
    let mut aloc = to_complex(&s);
    for c in 0..2 {
        let gc = g.rows(c * nk, nk);
        aloc += gc.adjoint() * &mc * gc;
    }
    let vm = potential_mass(ctx, field)?;
    let mut block = aloc.view_mut((0, 0), (nk, nk));
    block += to_complex(&vm);
    let aloc = (&aloc + aloc.adjoint()) * C64::new(0.5, 0.0);
    Ok(LocalOperators { p, g, s, aloc, mloc, a_t })
}

/// Largest `C` with `|grad p_T u|^2 + s_T(u, u) >= C |grad u_T|^2` over all
/// local DOF vectors.
pub fn coercivity_constant(ctx: &CellContext, p: &DMatrix<f64>, s: &DMatrix<f64>) -> f64 {
    let l = ctx.layout;
    let lhs = p.transpose() * &ctx.stiff_r * p + s;
    let lhs = (&lhs + lhs.transpose()) * 0.5;
    let mut rhs = DMatrix::zeros(l.n_loc(), l.n_loc());
    rhs.view_mut((0, 0), (l.n_cell, l.n_cell))
        .copy_from(&ctx.stiff_r.view((0, 0), (l.n_cell, l.n_cell)));
    let eig = SymmetricEigen::new(lhs);
    let top = eig.eigenvalues.max();
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > 1e-10 * top)
        .collect();
    let mut basis = DMatrix::zeros(l.n_loc(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        basis.set_column(c, &(eig.eigenvectors.column(i) / eig.eigenvalues[i].sqrt()));
    }
    let reduced = basis.transpose() * rhs * &basis;
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let lmax = SymmetricEigen::new(reduced).eigenvalues.max();
    1.0 / lmax
}
