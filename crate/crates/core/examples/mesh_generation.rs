//! Cartesian and punctured meshes, validation and the ASCII mesh format.

use maghho::mesh::{
    generate_cartesian, generate_punctured, parse_mesh, validate, write_mesh, PuncturedOptions, Rectangle,
    ValidateOptions,
};

fn main() -> maghho::Result<()> {
    let grid = generate_cartesian(Rectangle::centered(4.0), 8, 8)?;
    println!(
        "cartesian: {} cells, {} faces ({} interior), h = {:.4}",
        grid.n_cells(),
        grid.n_faces(),
        grid.interior_face_ids.len(),
        grid.h
    );

    let opts = PuncturedOptions::new(Rectangle::new([-5.0, -2.0], [5.0, 2.0]), 30, 12, [0.0, 0.0], 0.5);
    let punctured = generate_punctured(&opts)?;
    let report = validate(&punctured, &ValidateOptions::default());
    let max_vertices = punctured.cells.iter().map(|c| c.vertex_ids.len()).max().unwrap_or(0);
    println!(
        "punctured: {} cells, up to {max_vertices} vertices per cell, area {:.6}, valid = {}, rho = {:.3}",
        punctured.n_cells(),
        punctured.total_measure(),
        report.is_valid(),
        report.rho()
    );

    let mut text = Vec::new();
    write_mesh(&punctured, &mut text)?;
    let back = parse_mesh(std::str::from_utf8(&text).expect("ASCII"))?;
    println!("round trip through the mesh format: {} cells", back.n_cells());

    // clockwise cells are rejected with the offending cell id
    let bad = "dim 2\nvertices 3\n0 0\n0 1\n1 0\ncells 1\n3 0 1 2\n";
    match parse_mesh(bad) {
        Ok(m) => println!("unexpected: parsed {} cells", m.n_cells()),
        Err(e) => println!("clockwise cell: {e}"),
    }
    Ok(())
}
