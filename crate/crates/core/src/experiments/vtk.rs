use std::collections::BTreeMap;
use std::io::Write;

use super::fmt_float;
use crate::error::{Error, Result};
use crate::mesh::PolytopalMesh;

const VTK_POLYGON: u8 = 7;

/// Legacy ASCII unstructured grid with one polygon per cell and the given
/// per-cell scalars.
pub fn write_vtk(mesh: &PolytopalMesh, cell_data: &[(&str, &[f64])], mut out: impl Write) -> Result<()> {
    for (name, values) in cell_data {
        if values.len() != mesh.n_cells() {
            return Err(Error::InvalidConfig(format!(
                "cell field '{name}' has {} values for {} cells",
                values.len(),
                mesh.n_cells()
            )));
        }
    }
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "maghho")?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(out, "POINTS {} double", mesh.vertices.len())?;
    for v in &mesh.vertices {
        writeln!(out, "{} {} 0", fmt_float(v.coords[0]), fmt_float(v.coords[1]))?;
    }
    let size: usize = mesh.cells.iter().map(|c| c.vertex_ids.len() + 1).sum();
    writeln!(out, "CELLS {} {size}", mesh.n_cells())?;
    for c in &mesh.cells {
        write!(out, "{}", c.vertex_ids.len())?;
        for v in &c.vertex_ids {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    writeln!(out, "CELL_TYPES {}", mesh.n_cells())?;
    for _ in &mesh.cells {
        writeln!(out, "{VTK_POLYGON}")?;
    }
    if !cell_data.is_empty() {
        writeln!(out, "CELL_DATA {}", mesh.n_cells())?;
        for (name, values) in cell_data {
            writeln!(out, "SCALARS {name} double 1")?;
            writeln!(out, "LOOKUP_TABLE default")?;
            for v in *values {
                writeln!(out, "{}", fmt_float(*v))?;
            }
        }
    }
    Ok(())
}

/// Reads back the number of polygon records and the cell scalars of a file
/// written by [`write_vtk`].
pub fn read_vtk_cell_data(text: &str) -> Result<(usize, BTreeMap<String, Vec<f64>>)> {
    let bad = |line: usize, message: &str| Error::Parse {
        line: line + 1,
        message: message.into(),
    };
    let lines: Vec<&str> = text.lines().collect();
    let mut n_cells = None;
    let mut fields = BTreeMap::new();
    let mut i = 0;
    while i < lines.len() {
        let words: Vec<&str> = lines[i].split_whitespace().collect();
        match words.first().copied() {
            Some("CELLS") => {
                let n = words.get(1).and_then(|w| w.parse().ok()).ok_or_else(|| bad(i, "bad CELLS line"))?;
                n_cells = Some(n);
                i += n;
            }
            Some("SCALARS") => {
                let name = words.get(1).ok_or_else(|| bad(i, "unnamed scalar field"))?.to_string();
                let n = n_cells.ok_or_else(|| bad(i, "scalars before cells"))?;
                let start = i + 2;
                let values = lines
                    .get(start..start + n)
                    .ok_or_else(|| bad(i, "truncated scalar field"))?
                    .iter()
                    .enumerate()
                    .map(|(j, l)| l.trim().parse::<f64>().map_err(|_| bad(start + j, "bad value")))
                    .collect::<Result<Vec<_>>>()?;
                fields.insert(name, values);
                i = start + n - 1;
            }
            _ => {}
        }
        i += 1;
    }
    Ok((n_cells.ok_or_else(|| bad(0, "no CELLS section"))?, fields))
}
