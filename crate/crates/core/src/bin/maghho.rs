use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maghho::experiments::{
    cmd_ab, cmd_check, cmd_converge, cmd_eigen, cmd_gauge_dev, parse_flux, AbRunConfig, CheckConfig, CommonOptions,
    ConvergeConfig, EigenConfig, ManufacturedKind, MeshSource,
};
use maghho::physics::Gauge;
use maghho::solvers::EigenOptions;

#[derive(Parser)]
#[command(name = "maghho", version, about = "Hybrid high-order solver for the magnetic Schrodinger equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Manufactured-solution convergence table.
    Converge {
        #[command(flatten)]
        common: CommonArgs,
        /// Exact solution: standard or polynomial.
        #[arg(long, default_value = "standard")]
        case: String,
    },
    /// Lowest Fock-Darwin eigenvalues under refinement.
    Eigen {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        eig: EigenArgs,
        #[arg(long, default_value = "sym")]
        gauge: Gauge,
    },
    /// Deviation of the Landau and smooth gauge spectra from the symmetric one.
    GaugeDev {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        eig: EigenArgs,
    },
    /// Aharonov-Bohm wave packet past a solenoid.
    Ab {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated flux values; accepts multiples of pi such as `0.5pi`.
        #[arg(long, default_value = "0,pi")]
        flux: String,
        #[arg(long, default_value_t = 2.5e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1.49)]
        t_end: f64,
        /// Evaluate densities from the potential reconstruction.
        #[arg(long)]
        use_reconstruction: bool,
    },
    /// Invariant suite on the configured meshes.
    Check {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Polynomial degree, 0 to 3.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// `cartesian` or a comma-separated list of mesh files.
    #[arg(long, default_value = "cartesian")]
    mesh: String,
    /// Cells per side of the Cartesian levels, comma-separated.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra quadrature order.
    #[arg(long, default_value_t = 0)]
    quad_extra: usize,
    /// Write K and M of every level as `i j re im` lists.
    #[arg(long)]
    dump_system: bool,
    /// Use the gradient of the reconstruction in the covariant gradient.
    #[arg(long)]
    cheap_gradient: bool,
}

impl CommonArgs {
    fn options(&self) -> CommonOptions {
        CommonOptions {
            k: self.k,
            quad_extra: self.quad_extra,
            cheap_gradient: self.cheap_gradient,
            dump_system: self.dump_system,
            out: self.out.clone(),
        }
    }

    fn source(&self, default_levels: &[usize]) -> MeshSource {
        MeshSource::parse(&self.mesh, self.levels.as_deref().unwrap_or(default_levels))
    }
}

#[derive(Args)]
struct EigenArgs {
    #[arg(long, default_value_t = 5)]
    n_eig: usize,
    /// Shift of the shift-invert transform; defaults below the spectral floor.
    #[arg(long)]
    shift: Option<f64>,
    /// Relative residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

impl EigenArgs {
    fn options(&self) -> EigenOptions {
        EigenOptions {
            n_eig: self.n_eig,
            shift: self.shift,
            tol: self.tol,
            ..Default::default()
        }
    }
}

fn run(cli: Cli) -> maghho::Result<bool> {
    match cli.command {
        Command::Converge { common, case } => {
            let case = match case.as_str() {
                "standard" => ManufacturedKind::Standard,
                "polynomial" => ManufacturedKind::Polynomial,
                _ => return Err(maghho::Error::InvalidConfig(format!("unknown case '{case}'"))),
            };
            let cfg = ConvergeConfig {
                common: common.options(),
                mesh: common.source(&[4, 8, 16, 32]),
                case,
            };
            print!("{}", cmd_converge(&cfg)?.to_csv());
        }
        Command::Eigen { common, eig, gauge } => {
            let cfg = EigenConfig {
                common: common.options(),
                mesh: common.source(&[8, 16, 32, 64]),
                gauge,
                solver: eig.options(),
                ..Default::default()
            };
            print!("{}", cmd_eigen(&cfg)?.to_csv());
        }
        Command::GaugeDev { common, eig } => {
            let cfg = EigenConfig {
                common: common.options(),
                mesh: common.source(&[8, 16, 32]),
                solver: eig.options(),
                ..Default::default()
            };
            print!("{}", cmd_gauge_dev(&cfg)?.to_csv());
        }
        Command::Ab {
            common,
            flux,
            dt,
            t_end,
            use_reconstruction,
        } => {
            let mut cfg = AbRunConfig {
                common: common.options(),
                fluxes: flux.split(',').map(parse_flux).collect::<maghho::Result<_>>()?,
                use_reconstruction,
                ..Default::default()
            };
            cfg.physics.dt = dt;
            cfg.physics.t_end = t_end;
            if common.mesh != "cartesian" {
                cfg.mesh_file = Some(PathBuf::from(&common.mesh));
            }
            if let Some(l) = &common.levels {
                if let [nx, ny] = l[..] {
                    cfg.physics.nx = nx;
                    cfg.physics.ny = ny;
                } else {
                    return Err(maghho::Error::InvalidConfig("ab takes --levels nx,ny".into()));
                }
            }
            let report = cmd_ab(&cfg)?;
            println!("flux,i0,max_intensity,argmax,mass_drift");
            for r in &report.runs {
                println!("{},{:e},{:e},{},{:e}", r.flux, r.i0, r.max_intensity, r.argmax, r.mass_drift);
            }
        }
        Command::Check { common, seed } => {
            let cfg = CheckConfig {
                common: common.options(),
                mesh: common.source(&[4, 8]),
                seed,
                ..Default::default()
            };
            let report = cmd_check(&cfg)?;
            for i in &report.items {
                let op = if i.lower_bound { ">=" } else { "<=" };
                let tag = if i.passed { "PASS" } else { "FAIL" };
                println!("{tag} level {} {}: {:e} {op} {:e}", i.level, i.name, i.value, i.threshold);
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
