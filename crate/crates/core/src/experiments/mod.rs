//! The numerical studies behind the `maghho` subcommands. Each command takes a
//! plain config struct, returns a report and, when an output directory is
//! set, writes CSV tables and a JSON summary.

mod ab;
mod check;
mod converge;
mod eigen;
mod screen;
mod vtk;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use ab::{cmd_ab, flux_label, AbReport, AbRun, AbRunConfig};
pub use check::{cmd_check, operator_exactness, CheckConfig, CheckItem, CheckReport, ExactnessDefects};
pub use converge::{cmd_converge, CONVERGENCE_HEADER, ConvergeConfig, ConvergenceReport, ConvergenceRow, ManufacturedKind};
pub use eigen::{cmd_eigen, cmd_gauge_dev, dev_error, EigenConfig, EigenReport, EigenRow, GaugeDevReport, GaugeDevRow};
pub use screen::{find_peaks, sample_density, ScreenProfile};
pub use vtk::{read_vtk_cell_data, write_vtk};

use crate::assembly::HermitianSystem;
use crate::error::{Error, Result};
use crate::mesh::{generate_cartesian, import_mesh, PolytopalMesh, Rectangle};

/// Largest supported polynomial degree.
pub const MAX_DEGREE: usize = 3;

/// Where the meshes of a refinement study come from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MeshSource {
    /// `n x n` Cartesian grids of the experiment's domain, one per entry.
    Cartesian { levels: Vec<usize> },
    /// Mesh files, one per level.
    Files { paths: Vec<PathBuf> },
}

impl MeshSource {
    /// `"cartesian"` selects generated grids with the given levels; anything
    /// else is a comma-separated list of mesh files.
    pub fn parse(mesh: &str, levels: &[usize]) -> Self {
        if mesh == "cartesian" {
            MeshSource::Cartesian { levels: levels.to_vec() }
        } else {
            MeshSource::Files {
                paths: mesh.split(',').map(PathBuf::from).collect(),
            }
        }
    }

    pub fn n_levels(&self) -> usize {
        match self {
            MeshSource::Cartesian { levels } => levels.len(),
            MeshSource::Files { paths } => paths.len(),
        }
    }

    pub fn build(&self, level: usize, domain: Rectangle) -> Result<PolytopalMesh> {
        match self {
            MeshSource::Cartesian { levels } => generate_cartesian(domain, levels[level], levels[level]),
            MeshSource::Files { paths } => import_mesh(&paths[level]),
        }
    }

    fn check(&self) -> Result<()> {
        if self.n_levels() == 0 {
            return Err(Error::InvalidConfig("at least one mesh level is required".into()));
        }
        Ok(())
    }
}

/// Options shared by every command.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CommonOptions {
    pub k: usize,
    pub quad_extra: usize,
    pub cheap_gradient: bool,
    /// Write `K` and `M` of every level as coordinate lists.
    pub dump_system: bool,
    pub out: Option<PathBuf>,
}

impl CommonOptions {
    fn check(&self) -> Result<()> {
        if self.k > MAX_DEGREE {
            return Err(Error::InvalidConfig(format!("k = {} exceeds the maximum degree {MAX_DEGREE}", self.k)));
        }
        if let Some(out) = &self.out {
            fs::create_dir_all(out)?;
        }
        Ok(())
    }

    fn assembly(&self) -> crate::assembly::AssemblyOptions {
        crate::assembly::AssemblyOptions {
            quad_extra: self.quad_extra,
            cheap_gradient: self.cheap_gradient,
        }
    }

    fn path(&self, name: &str) -> Option<PathBuf> {
        self.out.as_ref().map(|d| d.join(name))
    }

    fn dump(&self, sys: &HermitianSystem, tag: &str) -> Result<()> {
        if !self.dump_system {
            return Ok(());
        }
        if let Some(dir) = &self.out {
            sys.stiffness
                .write_coo(std::io::BufWriter::new(fs::File::create(dir.join(format!("K_{tag}.coo")))?))?;
            sys.mass
                .write_coo(std::io::BufWriter::new(fs::File::create(dir.join(format!("M_{tag}.coo")))?))?;
        }
        Ok(())
    }
}

/// Parses a flux value: a plain number, `pi`, or a multiple such as
/// `0.5pi` or `-pi`.
pub fn parse_flux(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::InvalidConfig(format!("cannot parse flux '{s}'"));
    match t.strip_suffix("pi") {
        Some(m) => {
            let m = m.trim_end_matches('*');
            let c = match m {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => m.parse::<f64>().map_err(|_| bad())?,
            };
            Ok(c * std::f64::consts::PI)
        }
        None => t.parse::<f64>().map_err(|_| bad()),
    }
}

/// Floats in output files carry 17 significant digits; NaN prints as `nan`.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

/// `log(e_i / e_{i+1}) / log(h_i / h_{i+1})`, NaN for the first level.
pub fn rates(h: &[f64], e: &[f64]) -> Vec<f64> {
    std::iter::once(f64::NAN)
        .chain((1..h.len()).map(|i| (e[i - 1] / e[i]).ln() / (h[i - 1] / h[i]).ln()))
        .collect()
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Serializes non-finite floats as `null` instead of failing.
fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[cfg(test)]
mod tests;
