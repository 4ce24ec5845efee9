//! The invariant suite behind `maghho check`: mesh regularity, local
//! exactness, Hermitian structure, Garding bound, eigen oracle and mass
//! conservation.

use maghho::experiments::{cmd_check, CheckConfig, CommonOptions, MeshSource};

fn main() -> maghho::Result<()> {
    let cfg = CheckConfig {
        common: CommonOptions { k: 2, ..Default::default() },
        mesh: MeshSource::Cartesian { levels: vec![3, 6] },
        ..Default::default()
    };
    let report = cmd_check(&cfg)?;
    for item in &report.items {
        let op = if item.lower_bound { ">=" } else { "<=" };
        let tag = if item.passed { "ok  " } else { "FAIL" };
        println!("{tag} level {} {:<32} {:.3e} {op} {:.3e}", item.level, item.name, item.value, item.threshold);
    }
    println!("all passed: {}", report.passed());
    Ok(())
}
