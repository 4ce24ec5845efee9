//! Crank-Nicolson propagation of a Gaussian packet in the Fock-Darwin trap:
//! the mass is conserved and the packet's centre oscillates.

use maghho::assembly::{assemble, eval_cell, interpolate, AssemblyOptions};
use maghho::mesh::generate_cartesian;
use maghho::physics::{gaussian_packet, FockDarwinConfig, Gauge};
use maghho::solvers::{evolve, TimeGrid};

fn main() -> maghho::Result<()> {
    let fd = FockDarwinConfig::default();
    let mesh = generate_cartesian(fd.domain(), 16, 16)?;
    let sys = assemble(&mesh, 1, &fd.field(Gauge::Sym), AssemblyOptions::default())?;
    let packet = gaussian_packet(-1.0, 0.8, 0.0);
    let psi0 = interpolate(&mesh, &sys.dofs, 0, |p| packet(p))?;
    let m0 = sys.l2_norm_cells(&psi0);

    let centre = |psi: &[num_complex::Complex64]| {
        let (mut sx, mut sy, mut s) = (0.0, 0.0, 0.0);
        for (c, cell) in mesh.cells.iter().enumerate() {
            let rho = eval_cell(&mesh, &sys.dofs, c, psi, cell.centroid).norm_sqr() * cell.measure;
            sx += rho * cell.centroid[0];
            sy += rho * cell.centroid[1];
            s += rho;
        }
        (sx / s, sy / s)
    };
    evolve(&sys, &psi0, TimeGrid::new(0.01, 3.0)?, None, |step, t, psi| {
        if step % 50 == 0 {
            let (x, y) = centre(psi);
            let drift = (sys.l2_norm_cells(psi) - m0).abs() / m0;
            println!("t = {t:.2}: centre ({x:+.3}, {y:+.3}), mass drift {drift:.1e}");
        }
        Ok(())
    })?;
    Ok(())
}
