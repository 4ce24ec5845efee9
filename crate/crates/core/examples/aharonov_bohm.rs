//! Coarse Aharonov-Bohm run: a packet passes the solenoid with flux 0 and
//! pi; the screen shows a central maximum and a central minimum.

use std::f64::consts::PI;

use maghho::experiments::{cmd_ab, AbRunConfig};

fn main() -> maghho::Result<()> {
    let mut cfg = AbRunConfig {
        fluxes: vec![0.0, PI],
        ..Default::default()
    };
    cfg.physics.nx = 75;
    cfg.physics.ny = 30;
    cfg.physics.dt = 5e-3;
    let report = cmd_ab(&cfg)?;
    for run in &report.runs {
        println!(
            "{}: {} cells, {} steps, I(0) = {:.3e}, max = {:.3e} at y = {:+.3}, mass drift {:.1e}",
            run.label, run.n_cells, run.n_steps, run.i0, run.max_intensity, run.argmax, run.mass_drift
        );
        for [y, v] in run.peaks.iter().take(3) {
            println!("  peak at y = {y:+.3}: {v:.3e}");
        }
    }
    Ok(())
}
