//! Spectra in the symmetric, Landau and smooth gauges on shared meshes; the
//! deviation vanishes under refinement.

use maghho::experiments::{cmd_gauge_dev, CommonOptions, EigenConfig, MeshSource};

fn main() -> maghho::Result<()> {
    let cfg = EigenConfig {
        common: CommonOptions { k: 1, ..Default::default() },
        mesh: MeshSource::Cartesian { levels: vec![8, 16] },
        ..Default::default()
    };
    let report = cmd_gauge_dev(&cfg)?;
    print!("{}", report.to_csv());
    let last = report.rows.last().expect("two levels");
    println!("sym    {:.8?}", last.lambdas_sym);
    println!("landau {:.8?}", last.lambdas_landau);
    println!("smooth {:.8?}", last.lambdas_smooth);
    Ok(())
}
