use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{write_json, CommonOptions, MeshSource};
use crate::assembly::{assemble, HermitianSystem};
use crate::error::{Error, Result};
use crate::functional::{cell_basis, combine, l2_project_cell, quadrature_cell, Polynomial};
use crate::hho::{
    coercivity_constant, covariant_gradient, interpolate_local, potential_reconstruction, project_potential,
    stabilization, stabilization_energy, CellContext, FieldSpec,
};
use crate::mesh::{validate, Point, PolytopalMesh, Rectangle, ValidateOptions};
use crate::physics::{gauge, harmonic_potential, sup_on_grid, Gauge};
use crate::solvers::{evolve, lowest_eigenpairs, EigenMethod, EigenOptions, TimeGrid};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Relative defects of the local exactness properties on one cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ExactnessDefects {
    /// `|p_T I_T w - w|_T / |w|_T` for `w` in `P^{k+1}`.
    pub reconstruction: f64,
    /// `s_T(I_T w, I_T w) / sum_F h_F^{-1} |w|^2_F` for `w` in `P^{k+1}`.
    pub stabilization: f64,
    /// `|G_T I_T u - pi_T(-i grad u - A_T u)| / |pi_T(...)|`, with `A` linear
    /// and `u` in `P^k` (constant `A` and `u` in `P^1` when `k = 0`).
    pub gradient: f64,
}

impl ExactnessDefects {
    pub fn max(&self) -> f64 {
        self.reconstruction.max(self.stabilization).max(self.gradient)
    }
}

/// `|a - b|_T / |b|_T` for coefficient vectors of the degree-`l` cell basis.
/// Measured on functions, since monomial coefficients of high degree are
/// poorly conditioned.
fn relative_l2(mesh: &PolytopalMesh, cell: usize, l: usize, a: &[C64], b: &[C64]) -> f64 {
    let basis = cell_basis(mesh, cell, l);
    let quad = quadrature_cell(mesh, cell, 2 * l + 2);
    let (mut num, mut den) = (0.0, 0.0);
    for (&p, &w) in quad.points.iter().zip(&quad.weights) {
        let phi = basis.eval(p);
        let (fa, fb) = (combine(&phi, a), combine(&phi, b));
        num += w * (fa - fb).norm_sqr();
        den += w * fb.norm_sqr();
    }
    (num / den).sqrt()
}

fn linear_potential(c: [f64; 6]) -> FieldSpec {
    FieldSpec::new(
        "linear",
        Arc::new(move |p: Point| [c[0] + c[1] * p[0] + c[2] * p[1], c[3] + c[4] * p[0] + c[5] * p[1]]),
        Arc::new(move |_| c[1] + c[5]),
        Arc::new(|_| 0.0),
        f64::NAN,
        0.0,
    )
}

/// Measures the exactness defects of cell `cell` at degree `k` with random
/// polynomial data drawn from `seed`.
pub fn operator_exactness(mesh: &PolytopalMesh, cell: usize, k: usize, seed: u64) -> Result<ExactnessDefects> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = CellContext::new(mesh, cell, k, 0)?;
    let geo = &mesh.cells[cell];
    let p = potential_reconstruction(&ctx)?;
    let pc = p.map(|x| C64::new(x, 0.0));
    let extra = 4;

    let w = Polynomial::random(&mut rng, k + 1, geo.centroid, geo.diameter);
    let iw = interpolate_local(&ctx, |x| w.eval(x));
    let rec: Vec<C64> = (&pc * &iw).iter().copied().collect();
    let exact = l2_project_cell(mesh, cell, k + 1, extra, |x| w.eval(x))?;
    let reconstruction = relative_l2(mesh, cell, k + 1, &rec, &exact);

    let energy = stabilization_energy(&ctx, &p, &iw);
    let scale: f64 = ctx
        .faces
        .iter()
        .map(|fc| {
            fc.quad
                .points
                .iter()
                .zip(&fc.quad.weights)
                .map(|(&x, &wq)| wq * w.eval(x).norm_sqr())
                .sum::<f64>()
                / fc.h
        })
        .sum();
    let stabilization = energy / scale;

    let (field, u) = if k >= 1 {
        let c: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        (linear_potential(c), Polynomial::random(&mut rng, k, geo.centroid, geo.diameter))
    } else {
        let a = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let f = FieldSpec::new("constant", Arc::new(move |_| a), Arc::new(|_| 0.0), Arc::new(|_| 0.0), f64::NAN, 0.0);
        (f, Polynomial::random(&mut rng, 1, geo.centroid, geo.diameter))
    };
    let a_t = project_potential(&ctx, &field)?;
    let g = covariant_gradient(&ctx, &a_t);
    let gu = g * interpolate_local(&ctx, |x| u.eval(x));
    let nk = ctx.layout.n_cell;
    let mut gradient: f64 = 0.0;
    for c in 0..2 {
        let oracle = l2_project_cell(mesh, cell, k, extra + 2, |x| -I * u.grad(x)[c] - (field.a)(x)[c] * u.eval(x))?;
        let got: Vec<C64> = gu.rows(c * nk, nk).iter().copied().collect();
        gradient = gradient.max(relative_l2(mesh, cell, k, &got, &oracle));
    }
    Ok(ExactnessDefects {
        reconstruction,
        stabilization,
        gradient,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckConfig {
    pub common: CommonOptions,
    pub mesh: MeshSource,
    /// Domain of generated meshes.
    pub domain: Rectangle,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            common: CommonOptions { k: 1, ..Default::default() },
            mesh: MeshSource::Cartesian { levels: vec![4, 8] },
            domain: Rectangle::unit(),
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckItem {
    pub level: usize,
    pub name: String,
    pub value: f64,
    /// Pass when `value <= threshold`, or `value >= threshold` for lower bounds.
    pub threshold: f64,
    pub lower_bound: bool,
    pub passed: bool,
}

impl CheckItem {
    fn upper(level: usize, name: &str, value: f64, threshold: f64) -> Self {
        Self {
            level,
            name: name.into(),
            value,
            threshold,
            lower_bound: false,
            passed: value <= threshold,
        }
    }

    fn lower(level: usize, name: &str, value: f64, threshold: f64) -> Self {
        Self {
            level,
            name: name.into(),
            value,
            threshold,
            lower_bound: true,
            passed: value >= threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub k: usize,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

fn bounding_box(mesh: &PolytopalMesh) -> Rectangle {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for v in &mesh.vertices {
        for d in 0..2 {
            lo[d] = lo[d].min(v.coords[d]);
            hi[d] = hi[d].max(v.coords[d]);
        }
    }
    Rectangle::new(lo, hi)
}

/// Symmetric gauge with `B = 1` and a harmonic potential, bounds taken over
/// the mesh's bounding box.
fn check_field(mesh: &PolytopalMesh) -> FieldSpec {
    let bbox = bounding_box(mesh);
    let v = harmonic_potential(1.0);
    let v_inf = sup_on_grid(bbox, |p| v(p).abs());
    gauge(Gauge::Sym, 1.0, bbox).field.with_potential(v, v_inf)
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn check_system(level: usize, sys: &HermitianSystem, rng: &mut ChaCha8Rng, items: &mut Vec<CheckItem>) -> Result<()> {
    let k = &sys.stiffness;
    items.push(CheckItem::upper(level, "stiffness_hermitian_defect", k.hermitian_defect() / k.max_abs(), 1e-14));
    let m = &sys.mass;
    items.push(CheckItem::upper(level, "mass_hermitian_defect", m.hermitian_defect(), 0.0));

    let worst = (0..1000)
        .map(|_| sys.rayleigh_quotient(&random_vector(rng, sys.n_dof())))
        .fold(f64::INFINITY, f64::min);
    items.push(CheckItem::lower(level, "garding_min_rayleigh_quotient", worst, sys.spectral_floor));

    if sys.n_dof() <= 400 && sys.dofs.n_cell_dofs >= 3 {
        let n_eig = 3;
        let dense = lowest_eigenpairs(
            sys,
            &EigenOptions {
                n_eig,
                method: EigenMethod::Dense,
                ..Default::default()
            },
        )?;
        let si = lowest_eigenpairs(
            sys,
            &EigenOptions {
                n_eig,
                method: EigenMethod::ShiftInvert,
                ..Default::default()
            },
        )?;
        let gap = dense
            .values
            .iter()
            .zip(&si.values)
            .take(n_eig)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        items.push(CheckItem::upper(level, "eigen_dense_vs_shift_invert", gap, 1e-8));
        items.push(CheckItem::lower(level, "ground_state_above_floor", dense.values[0], sys.spectral_floor));
    }

    let psi0 = random_vector(rng, sys.n_dof());
    let m0 = sys.l2_norm_cells(&psi0);
    let mut drift: f64 = 0.0;
    evolve(sys, &psi0, TimeGrid::new(1e-2, 0.2)?, None, |_, _, psi| {
        drift = drift.max((sys.l2_norm_cells(psi) - m0).abs() / m0);
        Ok(())
    })?;
    items.push(CheckItem::upper(level, "crank_nicolson_mass_drift", drift, 1e-10));
    Ok(())
}

/// Runs the invariant suite on every mesh level. An invalid mesh is an
/// error; failed checks are reported in the items.
pub fn cmd_check(cfg: &CheckConfig) -> Result<CheckReport> {
    cfg.common.check()?;
    cfg.mesh.check()?;
    let k = cfg.common.k;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut items = Vec::new();
    for level in 0..cfg.mesh.n_levels() {
        let mesh = cfg.mesh.build(level, cfg.domain)?;
        let report = validate(&mesh, &ValidateOptions::default());
        if let Some(v) = report.violations.first() {
            return Err(v.to_error());
        }
        let rho = ValidateOptions::default().rho;
        items.push(CheckItem::lower(level, "mesh_face_ratio", report.min_face_ratio, rho * rho));
        // reported only; clipped cells have thin fan triangles
        items.push(CheckItem::lower(level, "mesh_shape_ratio", report.rho(), 0.0));

        let step = (mesh.n_cells() / 16).max(1);
        let mut defects = ExactnessDefects::default();
        let mut coercivity = f64::INFINITY;
        for cell in (0..mesh.n_cells()).step_by(step) {
            let d = operator_exactness(&mesh, cell, k, rng.random())?;
            defects.reconstruction = defects.reconstruction.max(d.reconstruction);
            defects.stabilization = defects.stabilization.max(d.stabilization);
            defects.gradient = defects.gradient.max(d.gradient);
            let ctx = CellContext::new(&mesh, cell, k, cfg.common.quad_extra)?;
            let p = potential_reconstruction(&ctx)?;
            coercivity = coercivity.min(coercivity_constant(&ctx, &p, &stabilization(&ctx, &p)));
        }
        items.push(CheckItem::upper(level, "reconstruction_exactness", defects.reconstruction, 1e-10));
        items.push(CheckItem::upper(level, "stabilization_consistency", defects.stabilization, 1e-10));
        items.push(CheckItem::upper(level, "gradient_exactness", defects.gradient, 1e-10));
        // infinite at k = 0, where grad u_T vanishes
        items.push(CheckItem::lower(level, "local_coercivity_constant", coercivity, 1e-3));

        let sys = assemble(&mesh, k, &check_field(&mesh), cfg.common.assembly())?;
        cfg.common.dump(&sys, &format!("level{level}"))?;
        check_system(level, &sys, &mut rng, &mut items)?;
    }
    let report = CheckReport { k, items };
    if let Some(p) = cfg.common.path("check.json") {
        write_json(&p, &report)?;
    }
    if let Some(i) = report.items.iter().find(|i| i.value.is_nan()) {
        return Err(Error::InvalidConfig(format!("check '{}' produced NaN", i.name)));
    }
    Ok(report)
}
