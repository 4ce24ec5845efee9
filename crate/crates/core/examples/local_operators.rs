//! Local HHO operators on one random polygon: reconstruction, stabilization,
//! covariant gradient and their polynomial exactness.

use maghho::experiments::operator_exactness;
use maghho::hho::{coercivity_constant, potential_reconstruction, stabilization, CellContext};
use maghho::mesh::{random_polygon, single_cell_mesh};
use rand::SeedableRng;

fn main() -> maghho::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let mesh = single_cell_mesh(random_polygon(&mut rng, 6))?;
    let cell = &mesh.cells[0];
    println!("hexagon: area {:.4}, diameter {:.4}", cell.measure, cell.diameter);
    for k in 0..=3 {
        let ctx = CellContext::new(&mesh, 0, k, 0)?;
        let p = potential_reconstruction(&ctx)?;
        let s = stabilization(&ctx, &p);
        let d = operator_exactness(&mesh, 0, k, 42)?;
        println!(
            "k={k}: {} local dofs, p_T is {}x{}, coercivity {:.3e}, defects rec {:.1e} stab {:.1e} grad {:.1e}",
            ctx.layout.n_loc(),
            p.nrows(),
            p.ncols(),
            coercivity_constant(&ctx, &p, &s),
            d.reconstruction,
            d.stabilization,
            d.gradient
        );
    }
    Ok(())
}
