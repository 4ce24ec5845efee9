use rayon::prelude::*;
use serde::Serialize;

use super::{finite_or_none, fmt_float, rates, write_json, write_text, CommonOptions, MeshSource};
use crate::assembly::assemble;
use crate::error::{Error, Result};
use crate::mesh::PolytopalMesh;
use crate::physics::{FockDarwinConfig, Gauge};
use crate::solvers::{lowest_eigenpairs, EigenOptions, EigenPairs};

/// Eigenvalues reported per level.
pub const N_REPORTED: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenConfig {
    pub common: CommonOptions,
    pub mesh: MeshSource,
    pub gauge: Gauge,
    pub physics: FockDarwinConfig,
    pub solver: EigenOptions,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            common: CommonOptions { k: 1, ..Default::default() },
            mesh: MeshSource::Cartesian {
                levels: vec![8, 16, 32, 64],
            },
            gauge: Gauge::Sym,
            physics: FockDarwinConfig::default(),
            solver: EigenOptions::default(),
        }
    }
}

impl EigenConfig {
    fn check(&self) -> Result<()> {
        self.common.check()?;
        self.mesh.check()?;
        if self.solver.n_eig < N_REPORTED {
            return Err(Error::InvalidConfig(format!("at least {N_REPORTED} eigenvalues are reported")));
        }
        Ok(())
    }

    fn solve_level(&self, mesh: &PolytopalMesh, gauge: Gauge, tag: &str) -> Result<(usize, f64, EigenPairs)> {
        let field = self.physics.field(gauge);
        let sys = assemble(mesh, self.common.k, &field, self.common.assembly())?;
        self.common.dump(&sys, tag)?;
        let pairs = lowest_eigenpairs(&sys, &self.solver)?;
        Ok((sys.n_dof(), sys.spectral_floor, pairs))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenRow {
    pub h: f64,
    pub n_dof: usize,
    pub lambdas: Vec<f64>,
    pub rel_err: f64,
    #[serde(serialize_with = "ser_opt")]
    pub rate: f64,
    pub residuals: Vec<f64>,
    pub spectral_floor: f64,
    pub method: crate::solvers::EigenMethod,
}

fn ser_opt<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    finite_or_none(*x).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenReport {
    pub k: usize,
    pub gauge: Gauge,
    pub physics: FockDarwinConfig,
    pub reference: f64,
    pub reference_levels: Vec<f64>,
    pub rows: Vec<EigenRow>,
}

impl EigenReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("h,ndof");
        for j in 0..N_REPORTED {
            s.push_str(&format!(",lambda{j}"));
        }
        s.push_str(",rel_err,rate\n");
        for r in &self.rows {
            s.push_str(&format!("{},{}", fmt_float(r.h), r.n_dof));
            for l in &r.lambdas[..N_REPORTED] {
                s.push(',');
                s.push_str(&fmt_float(*l));
            }
            s.push_str(&format!(",{},{}\n", fmt_float(r.rel_err), fmt_float(r.rate)));
        }
        s
    }
}

/// Lowest eigenvalues of the Fock-Darwin Hamiltonian on each level and the
/// relative error of the ground energy against `sqrt(B^2 + 2 omega0^2)`.
pub fn cmd_eigen(cfg: &EigenConfig) -> Result<EigenReport> {
    cfg.check()?;
    let reference = cfg.physics.ground_energy();
    let mut report = EigenReport {
        k: cfg.common.k,
        gauge: cfg.gauge,
        physics: cfg.physics,
        reference,
        reference_levels: cfg.physics.lowest_energies(N_REPORTED),
        rows: Vec::new(),
    };
    for level in 0..cfg.mesh.n_levels() {
        let mesh = cfg.mesh.build(level, cfg.physics.domain())?;
        let (n_dof, floor, pairs) = cfg.solve_level(&mesh, cfg.gauge, &format!("level{level}"))?;
        report.rows.push(EigenRow {
            h: mesh.h,
            n_dof,
            rel_err: (pairs.values[0] - reference).abs() / reference,
            rate: f64::NAN,
            lambdas: pairs.values[..N_REPORTED].to_vec(),
            residuals: pairs.residuals[..N_REPORTED].to_vec(),
            spectral_floor: floor,
            method: pairs.method,
        });
        let h: Vec<f64> = report.rows.iter().map(|r| r.h).collect();
        let e: Vec<f64> = report.rows.iter().map(|r| r.rel_err).collect();
        for (r, q) in report.rows.iter_mut().zip(rates(&h, &e)) {
            r.rate = q;
        }
        if let Some(p) = cfg.common.path("eigen.csv") {
            write_text(&p, &report.to_csv())?;
        }
    }
    if let Some(p) = cfg.common.path("eigen.json") {
        write_json(&p, &report)?;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeDevRow {
    pub h: f64,
    pub n_dof: usize,
    pub dev_smooth: f64,
    #[serde(serialize_with = "ser_opt")]
    pub rate_smooth: f64,
    pub dev_landau: f64,
    #[serde(serialize_with = "ser_opt")]
    pub rate_landau: f64,
    pub lambdas_sym: Vec<f64>,
    pub lambdas_landau: Vec<f64>,
    pub lambdas_smooth: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeDevReport {
    pub k: usize,
    pub physics: FockDarwinConfig,
    pub rows: Vec<GaugeDevRow>,
}

impl GaugeDevReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("h,dev_smooth,rate_smooth,dev_landau,rate_landau\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_float(r.h),
                fmt_float(r.dev_smooth),
                fmt_float(r.rate_smooth),
                fmt_float(r.dev_landau),
                fmt_float(r.rate_landau)
            ));
        }
        s
    }
}

/// `max_{j < 5} |lambda_j(sym) - lambda_j(gauge)|`.
pub fn dev_error(sym: &[f64], other: &[f64]) -> f64 {
    sym.iter()
        .zip(other)
        .take(N_REPORTED)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Spectra of the three gauges on shared meshes and the deviation of the
/// Landau and smooth gauges from the symmetric one.
pub fn cmd_gauge_dev(cfg: &EigenConfig) -> Result<GaugeDevReport> {
    cfg.check()?;
    let mut report = GaugeDevReport {
        k: cfg.common.k,
        physics: cfg.physics,
        rows: Vec::new(),
    };
    for level in 0..cfg.mesh.n_levels() {
        let mesh = cfg.mesh.build(level, cfg.physics.domain())?;
        let solved = Gauge::ALL
            .par_iter()
            .map(|&g| cfg.solve_level(&mesh, g, &format!("level{level}_{g}")))
            .collect::<Result<Vec<_>>>()?;
        let vals: Vec<Vec<f64>> = solved.iter().map(|s| s.2.values[..N_REPORTED].to_vec()).collect();
        report.rows.push(GaugeDevRow {
            h: mesh.h,
            n_dof: solved[0].0,
            dev_smooth: dev_error(&vals[0], &vals[2]),
            rate_smooth: f64::NAN,
            dev_landau: dev_error(&vals[0], &vals[1]),
            rate_landau: f64::NAN,
            lambdas_sym: vals[0].clone(),
            lambdas_landau: vals[1].clone(),
            lambdas_smooth: vals[2].clone(),
        });
        let h: Vec<f64> = report.rows.iter().map(|r| r.h).collect();
        let ds: Vec<f64> = report.rows.iter().map(|r| r.dev_smooth).collect();
        let dl: Vec<f64> = report.rows.iter().map(|r| r.dev_landau).collect();
        for ((r, a), b) in report.rows.iter_mut().zip(rates(&h, &ds)).zip(rates(&h, &dl)) {
            r.rate_smooth = a;
            r.rate_landau = b;
        }
        if let Some(p) = cfg.common.path("gauge_dev.csv") {
            write_text(&p, &report.to_csv())?;
        }
    }
    if let Some(p) = cfg.common.path("gauge_dev.json") {
        write_json(&p, &report)?;
    }
    Ok(report)
}
