//! Manufactured-solution refinement study, as `maghho converge`.

use maghho::experiments::{cmd_converge, CommonOptions, ConvergeConfig, ManufacturedKind, MeshSource};

fn main() -> maghho::Result<()> {
    for k in 0..=2 {
        let cfg = ConvergeConfig {
            common: CommonOptions { k, ..Default::default() },
            mesh: MeshSource::Cartesian {
                levels: vec![4, 8, 16],
            },
            case: ManufacturedKind::Standard,
        };
        let report = cmd_converge(&cfg)?;
        println!("k = {k}");
        print!("{}", report.to_csv());
        if let Some((energy, l2)) = report.final_rates() {
            println!("final rates: energy {energy:.2}, L2 {l2:.2}\n");
        }
    }
    Ok(())
}
