use std::time::Instant;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::{finite_or_none, fmt_float, rates, write_json, write_text, CommonOptions, MeshSource};
use crate::assembly::{assemble, assemble_rhs, interpolate, norm_1h, static_condense};
use crate::error::{Error, Result};
use crate::physics::ManufacturedCase;
use crate::solvers::solve;

pub const CONVERGENCE_HEADER: &str = "h,ndof,err1h,rate1h,errL2,rateL2,seconds";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ManufacturedKind {
    /// Smooth solution with the symmetric gauge and a harmonic potential.
    #[default]
    Standard,
    /// Quartic solution without fields, reproduced exactly at `k = 3`.
    Polynomial,
}

impl ManufacturedKind {
    pub fn case(self) -> ManufacturedCase {
        match self {
            ManufacturedKind::Standard => ManufacturedCase::standard(),
            ManufacturedKind::Polynomial => ManufacturedCase::polynomial(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergeConfig {
    pub common: CommonOptions,
    pub mesh: MeshSource,
    pub case: ManufacturedKind,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self {
            common: CommonOptions::default(),
            mesh: MeshSource::Cartesian {
                levels: vec![4, 8, 16, 32],
            },
            case: ManufacturedKind::Standard,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub n_dof: usize,
    pub err_1h: f64,
    #[serde(serialize_with = "ser_rate")]
    pub rate_1h: f64,
    pub err_l2: f64,
    #[serde(serialize_with = "ser_rate")]
    pub rate_l2: f64,
    #[serde(skip)]
    pub wall_time: f64,
}

fn ser_rate<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    finite_or_none(*x).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub case: String,
    pub k: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CONVERGENCE_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt_float(r.h),
                r.n_dof,
                fmt_float(r.err_1h),
                fmt_float(r.rate_1h),
                fmt_float(r.err_l2),
                fmt_float(r.rate_l2),
                fmt_float(r.wall_time)
            ));
        }
        s
    }

    /// Rates between the last two levels, `(energy, L2)`.
    pub fn final_rates(&self) -> Option<(f64, f64)> {
        self.rows.last().filter(|_| self.rows.len() > 1).map(|r| (r.rate_1h, r.rate_l2))
    }

    fn recompute_rates(&mut self) {
        let h: Vec<f64> = self.rows.iter().map(|r| r.h).collect();
        let e1: Vec<f64> = self.rows.iter().map(|r| r.err_1h).collect();
        let e2: Vec<f64> = self.rows.iter().map(|r| r.err_l2).collect();
        for ((r, a), b) in self.rows.iter_mut().zip(rates(&h, &e1)).zip(rates(&h, &e2)) {
            r.rate_1h = a;
            r.rate_l2 = b;
        }
    }
}

/// Solves the manufactured problem on every level and measures
/// `|u_h - I_h u|_{1,h}` and `|u_T - pi_T u|_{L2}`. The CSV is rewritten
/// after each level, so a failure leaves the completed rows on disk.
pub fn cmd_converge(cfg: &ConvergeConfig) -> Result<ConvergenceReport> {
    let c = &cfg.common;
    c.check()?;
    cfg.mesh.check()?;
    let case = cfg.case.case();
    let f = case.source();
    let mut report = ConvergenceReport {
        case: case.name.clone(),
        k: c.k,
        rows: Vec::new(),
    };
    for level in 0..cfg.mesh.n_levels() {
        let start = Instant::now();
        let mesh = cfg.mesh.build(level, case.domain)?;
        let sys = assemble(&mesh, c.k, &case.field, c.assembly())?;
        c.dump(&sys, &format!("level{level}"))?;
        let rhs = assemble_rhs(&mesh, &sys.dofs, c.quad_extra, |p| f(p));
        let cond = static_condense(&mesh, &sys, &rhs)?;
        let uh = if cond.matrix.nrows == 0 {
            cond.recover(&[])
        } else {
            cond.recover(&solve(&cond.matrix, &cond.rhs)?)
        };
        let iu = interpolate(&mesh, &sys.dofs, c.quad_extra, |p| (case.u)(p))?;
        let diff: Vec<C64> = uh.iter().zip(&iu).map(|(a, b)| a - b).collect();
        let err_1h = norm_1h(&mesh, &sys.dofs, c.quad_extra, &diff)?;
        let err_l2 = sys.l2_norm_cells(&diff);
        if !(err_1h.is_finite() && err_l2.is_finite()) {
            return Err(Error::Factorization(format!("non-finite error on level {level}")));
        }
        report.rows.push(ConvergenceRow {
            h: mesh.h,
            n_dof: sys.n_dof(),
            err_1h,
            rate_1h: f64::NAN,
            err_l2,
            rate_l2: f64::NAN,
            wall_time: start.elapsed().as_secs_f64(),
        });
        report.recompute_rates();
        if let Some(p) = c.path("convergence.csv") {
            write_text(&p, &report.to_csv())?;
        }
    }
    if let Some(p) = c.path("convergence.json") {
        write_json(&p, &report)?;
    }
    Ok(report)
}
