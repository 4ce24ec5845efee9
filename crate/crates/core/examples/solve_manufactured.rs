//! Assembly, static condensation and a direct solve for a manufactured
//! magnetic Schrodinger problem, with the discrete errors.

use maghho::assembly::{assemble, assemble_rhs, interpolate, norm_1h, static_condense, AssemblyOptions};
use maghho::mesh::generate_cartesian;
use maghho::physics::ManufacturedCase;
use maghho::solvers::solve;
use num_complex::Complex64 as C64;

fn main() -> maghho::Result<()> {
    let case = ManufacturedCase::standard();
    let k = 2;
    let mesh = generate_cartesian(case.domain, 8, 8)?;
    let sys = assemble(&mesh, k, &case.field, AssemblyOptions::default())?;
    println!(
        "{} unknowns ({} cell, {} face), K has {} nonzeros",
        sys.n_dof(),
        sys.dofs.n_cell_dofs,
        sys.n_dof() - sys.dofs.n_cell_dofs,
        sys.stiffness.nnz()
    );

    let f = case.source();
    let rhs = assemble_rhs(&mesh, &sys.dofs, 0, |p| f(p));
    let condensed = static_condense(&mesh, &sys, &rhs)?;
    println!("condensed face system: {} unknowns", condensed.matrix.nrows);
    let u_h = condensed.recover(&solve(&condensed.matrix, &condensed.rhs)?);

    let u = case.u.clone();
    let i_h = interpolate(&mesh, &sys.dofs, 0, |p| u(p))?;
    let diff: Vec<C64> = u_h.iter().zip(&i_h).map(|(a, b)| a - b).collect();
    println!(
        "|u_h - I_h u|_1,h = {:.3e}, |u_h - I_h u|_L2 = {:.3e}",
        norm_1h(&mesh, &sys.dofs, 0, &diff)?,
        sys.l2_norm_cells(&diff)
    );

    let mut coo = Vec::new();
    sys.stiffness.write_coo(&mut coo)?;
    let text = String::from_utf8(coo).expect("ASCII");
    println!("first COO entries (i j re im):");
    for line in text.lines().take(3) {
        println!("  {line}");
    }
    Ok(())
}
