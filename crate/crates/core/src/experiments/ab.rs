use std::f64::consts::PI;
use std::fs;
use std::io::BufWriter;
use std::path::PathBuf;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::screen::sample_density;
use super::{find_peaks, write_json, write_text, write_vtk, CommonOptions, ScreenProfile};
use crate::assembly::{assemble, eval_cell, interpolate, reconstruct, GlobalDofMap};
use crate::error::{Error, Result};
use crate::functional::{cell_basis, combine};
use crate::mesh::{generate_punctured, import_mesh, Point, PolytopalMesh};
use crate::physics::AbConfig;
use crate::solvers::{evolve, TimeGrid};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbRunConfig {
    pub common: CommonOptions,
    /// Geometry, packet and time stepping; `physics.flux` is replaced by each
    /// entry of `fluxes`.
    pub physics: AbConfig,
    pub fluxes: Vec<f64>,
    /// Mesh file replacing the generated punctured mesh.
    pub mesh_file: Option<PathBuf>,
    /// Evaluate densities from the reconstruction instead of the cell unknowns.
    pub use_reconstruction: bool,
    /// Times of the VTK density frames, snapped to the nearest step.
    pub frames: Vec<f64>,
}

impl Default for AbRunConfig {
    fn default() -> Self {
        Self {
            common: CommonOptions { k: 1, ..Default::default() },
            physics: AbConfig::default(),
            fluxes: vec![0.0, PI],
            mesh_file: None,
            use_reconstruction: false,
            frames: vec![0.0, 0.8, 1.45],
        }
    }
}

/// Summary of one flux value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbRun {
    pub flux: f64,
    pub label: String,
    /// `|psi_h|^2` at `(x_screen, 0)`.
    pub i0: f64,
    pub max_intensity: f64,
    pub argmax: f64,
    /// Local maxima of the profile `[y, intensity]`, largest first.
    pub peaks: Vec<[f64; 2]>,
    /// `max_n | |psi^n|_M - |psi^0|_M | / |psi^0|_M`.
    pub mass_drift: f64,
    pub n_steps: usize,
    pub dt: f64,
    pub n_dof: usize,
    pub n_cells: usize,
    #[serde(skip)]
    pub profile: ScreenProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbReport {
    pub k: usize,
    pub use_reconstruction: bool,
    pub runs: Vec<AbRun>,
}

/// File label of a flux value: the multiple of pi, e.g. `flux_1pi`.
pub fn flux_label(flux: f64) -> String {
    format!("flux_{}pi", flux / PI)
}

/// Evaluates `psi_h` on single cells, from either the cell unknowns or the
/// reconstruction.
struct Evaluator<'a> {
    mesh: &'a PolytopalMesh,
    dofs: &'a GlobalDofMap,
    recon: Option<Vec<Vec<C64>>>,
}

impl<'a> Evaluator<'a> {
    fn new(mesh: &'a PolytopalMesh, dofs: &'a GlobalDofMap, psi: &[C64], use_recon: bool, quad_extra: usize) -> Result<Self> {
        let recon = if use_recon {
            Some(reconstruct(mesh, dofs, quad_extra, psi)?)
        } else {
            None
        };
        Ok(Self { mesh, dofs, recon })
    }

    fn eval(&self, psi: &[C64], cell: usize, p: Point) -> C64 {
        match &self.recon {
            Some(r) => combine(&cell_basis(self.mesh, cell, self.dofs.k + 1).eval(p), &r[cell]),
            None => eval_cell(self.mesh, self.dofs, cell, psi, p),
        }
    }

    fn centroid_density(&self, psi: &[C64]) -> Vec<f64> {
        (0..self.mesh.n_cells())
            .map(|c| self.eval(psi, c, self.mesh.cells[c].centroid).norm_sqr())
            .collect()
    }
}

impl AbRunConfig {
    fn mesh(&self) -> Result<PolytopalMesh> {
        match &self.mesh_file {
            Some(p) => import_mesh(p),
            None => generate_punctured(&self.physics.mesh_options()),
        }
    }

    fn run(&self, mesh: &PolytopalMesh, flux: f64) -> Result<AbRun> {
        let c = &self.common;
        let label = flux_label(flux);
        let phys = AbConfig { flux, ..self.physics.clone() };
        let sys = assemble(mesh, c.k, &phys.field(), c.assembly())?;
        c.dump(&sys, &label)?;
        let packet = phys.packet();
        let mut psi0 = interpolate(mesh, &sys.dofs, c.quad_extra, |p| packet(p))?;
        let m0 = sys.l2_norm_cells(&psi0);
        if !(m0 > 0.0) {
            return Err(Error::InvalidConfig("initial packet vanishes on the mesh".into()));
        }
        psi0.iter_mut().for_each(|z| *z /= m0);
        let grid = TimeGrid::new(phys.dt, phys.t_end)?;
        let frame_steps: Vec<(usize, f64)> = self
            .frames
            .iter()
            .map(|&t| ((t / grid.dt).round() as usize, t))
            .filter(|&(s, _)| s <= grid.n_steps)
            .collect();

        let mut drift: f64 = 0.0;
        let psi = evolve(&sys, &psi0, grid, None, |step, _, psi| {
            drift = drift.max((sys.l2_norm_cells(psi) - 1.0).abs());
            for &(s, t) in &frame_steps {
                if s == step {
                    if let Some(p) = c.path(&format!("density_{label}_t{t}.vtk")) {
                        let ev = Evaluator::new(mesh, &sys.dofs, psi, self.use_reconstruction, c.quad_extra)?;
                        let dens = ev.centroid_density(psi);
                        write_vtk(mesh, &[("density", &dens)], BufWriter::new(fs::File::create(p)?))?;
                    }
                }
            }
            Ok(())
        })?;

        let ev = Evaluator::new(mesh, &sys.dofs, &psi, self.use_reconstruction, c.quad_extra)?;
        let f = |cell: usize, p: Point| ev.eval(&psi, cell, p);
        let profile = ScreenProfile::sample(mesh, flux, phys.screen_x, phys.screen_ys(), &f);
        let i0 = sample_density(mesh, [phys.screen_x, 0.0], &f);
        let peaks = find_peaks(&profile.ys, &profile.intensity).into_iter().map(|(y, v)| [y, v]).collect();
        if let Some(p) = c.path(&format!("screen_{label}.csv")) {
            write_text(&p, &profile.to_csv())?;
        }
        let run = AbRun {
            flux,
            label: label.clone(),
            i0,
            max_intensity: profile.max(),
            argmax: profile.argmax(),
            peaks,
            mass_drift: drift,
            n_steps: grid.n_steps,
            dt: grid.dt,
            n_dof: sys.n_dof(),
            n_cells: mesh.n_cells(),
            profile,
        };
        if let Some(p) = c.path(&format!("ab_{label}.json")) {
            write_json(&p, &run)?;
        }
        Ok(run)
    }
}

/// Propagates the packet past the solenoid for every flux value and records
/// the screen profile at the final time.
pub fn cmd_ab(cfg: &AbRunConfig) -> Result<AbReport> {
    cfg.common.check()?;
    if cfg.fluxes.is_empty() {
        return Err(Error::InvalidConfig("at least one flux value is required".into()));
    }
    let mesh = cfg.mesh()?;
    let runs = cfg.fluxes.iter().map(|&f| cfg.run(&mesh, f)).collect::<Result<Vec<_>>>()?;
    let report = AbReport {
        k: cfg.common.k,
        use_reconstruction: cfg.use_reconstruction,
        runs,
    };
    if let Some(p) = cfg.common.path("ab.json") {
        write_json(&p, &report)?;
    }
    Ok(report)
}
