//! Writes the Fock-Darwin ground-state density to a legacy VTK file and
//! reads the cell data back.

use maghho::assembly::{assemble, eval_cell, AssemblyOptions};
use maghho::experiments::{read_vtk_cell_data, write_vtk};
use maghho::mesh::generate_cartesian;
use maghho::physics::{FockDarwinConfig, Gauge};
use maghho::solvers::{lowest_eigenpairs, EigenOptions};

fn main() -> maghho::Result<()> {
    let fd = FockDarwinConfig::default();
    let mesh = generate_cartesian(fd.domain(), 16, 16)?;
    let sys = assemble(&mesh, 1, &fd.field(Gauge::Sym), AssemblyOptions::default())?;
    let pairs = lowest_eigenpairs(&sys, &EigenOptions::default())?;
    let ground = &pairs.vectors[0];
    let density: Vec<f64> = (0..mesh.n_cells())
        .map(|c| eval_cell(&mesh, &sys.dofs, c, ground, mesh.cells[c].centroid).norm_sqr())
        .collect();
    let phase: Vec<f64> = (0..mesh.n_cells())
        .map(|c| eval_cell(&mesh, &sys.dofs, c, ground, mesh.cells[c].centroid).arg())
        .collect();

    let path = std::env::temp_dir().join("maghho_ground_state.vtk");
    write_vtk(&mesh, &[("density", &density), ("phase", &phase)], std::fs::File::create(&path)?)?;
    let (n, fields) = read_vtk_cell_data(&std::fs::read_to_string(&path)?)?;
    println!("wrote {} ({n} cells, fields {:?})", path.display(), fields.keys().collect::<Vec<_>>());
    println!("lambda0 = {:.8}, peak density {:.4}", pairs.values[0], density.iter().cloned().fold(0.0, f64::max));
    Ok(())
}
