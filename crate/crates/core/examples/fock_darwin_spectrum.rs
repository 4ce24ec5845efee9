//! Lowest eigenvalues of the Fock-Darwin Hamiltonian with shift-invert
//! Krylov-Schur, against the exact Landau-level energies.

use maghho::experiments::{cmd_eigen, CommonOptions, EigenConfig, MeshSource};

fn main() -> maghho::Result<()> {
    let cfg = EigenConfig {
        common: CommonOptions { k: 1, ..Default::default() },
        mesh: MeshSource::Cartesian { levels: vec![8, 16] },
        ..Default::default()
    };
    let report = cmd_eigen(&cfg)?;
    println!("exact lowest levels: {:?}", report.reference_levels);
    for row in &report.rows {
        println!(
            "h = {:.4}, {} dofs, {:?}: lambda = {:.6?}, ground rel_err {:.2e}, max residual {:.1e}",
            row.h,
            row.n_dof,
            row.method,
            row.lambdas,
            row.rel_err,
            row.residuals.iter().cloned().fold(0.0, f64::max)
        );
    }
    Ok(())
}
