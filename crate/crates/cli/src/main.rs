//! `qtem`: oracle verification sweeps, elemental-matrix dumps, waveguide
//! cutoff solves and convergence studies.
//!
//! Exit codes: 0 success, 1 verification or solve failure, 2 usage error.
//! `QTEM_THREADS` caps the number of worker threads.

mod dump;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qtem_core::parallel::with_threads;
use qtem_core::{convergence_study, cutoff_modes, gen_rect_mesh, read_mesh, run_verify, write_mesh, ModeType};

#[derive(Parser)]
#[command(name = "qtem", version, about = "Quadratic triangular elements for 2-D electromagnetics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Tm,
    Te,
}

impl From<Mode> for ModeType {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Tm => ModeType::Tm,
            Mode::Te => ModeType::Te,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compare every closed form against the quadrature and exact oracles.
    Verify {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        triangles: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        report: Report,
    },
    /// Print one 6x6 elemental matrix.
    DumpMatrix {
        /// A matrix kind (e.g. mass_NN, UU) or curl_curl, vector_mass, gradient.
        #[arg(long)]
        kind: dump::DumpKind,
        /// Corners as "x1,y1 x2,y2 x3,y3".
        #[arg(long)]
        corners: dump::Corners,
        /// Edge signs as three of '+' / '-'.
        #[arg(long, default_value = "+++")]
        signs: dump::Signs,
        #[arg(long, value_enum, default_value = "csv")]
        format: MatrixFormat,
    },
    /// Cutoff wavenumbers of a rectangular waveguide.
    Waveguide {
        #[arg(long)]
        width: f64,
        #[arg(long)]
        height: f64,
        #[arg(long, default_value_t = 16)]
        nx: usize,
        #[arg(long, default_value_t = 8)]
        ny: usize,
        #[arg(long, value_enum)]
        mode_type: Mode,
        #[arg(long, default_value_t = 5)]
        n_modes: usize,
        /// Solve on this mesh file instead of the structured nx x ny mesh.
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        report: Report,
    },
    /// Observed convergence order of the lowest unit-square mode.
    Convergence {
        #[arg(long, value_enum)]
        mode_type: Mode,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(3..))]
        levels: u64,
        /// Elements per side on the coarsest level.
        #[arg(long, default_value_t = 2)]
        base_n: usize,
        #[arg(long, value_enum, default_value = "text")]
        report: Report,
    },
    /// Write a structured rectangle mesh in the qtmesh format.
    GenMesh {
        #[arg(long)]
        width: f64,
        #[arg(long)]
        height: f64,
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Run(String),
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var("QTEM_THREADS") {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("QTEM_THREADS must be a positive integer, got `{v}`"))),
        },
    }
}

fn render<T>(report: Report, value: &T, text: impl Fn(&T) -> String, json: impl Fn(&T) -> String) -> String {
    match report {
        Report::Text => text(value),
        Report::Json => json(value) + "\n",
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let threads = threads_from_env()?;
    let run_err = |e: qtem_core::Error| Failure::Run(e.to_string());
    match cli.command {
        Command::Verify {
            triangles,
            seed,
            report,
        } => {
            let r = with_threads(threads, || run_verify(triangles as usize, seed));
            print!("{}", render(report, &r, |r| r.to_text(), |r| r.to_json()));
            if r.pass {
                Ok(())
            } else {
                Err(Failure::Run("verification failed".into()))
            }
        }
        Command::DumpMatrix {
            kind,
            corners,
            signs,
            format,
        } => {
            let out = dump::dump(kind, corners, signs).map_err(run_err)?;
            print!(
                "{}",
                match format {
                    MatrixFormat::Csv => out.to_csv(),
                    MatrixFormat::Json => out.to_json() + "\n",
                }
            );
            Ok(())
        }
        Command::Waveguide {
            width,
            height,
            nx,
            ny,
            mode_type,
            n_modes,
            mesh,
            report,
        } => {
            if !(width > 0.0 && height > 0.0) {
                return Err(Failure::Usage("width and height must be positive".into()));
            }
            let mesh = match mesh {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| Failure::Run(format!("cannot read {}: {e}", path.display())))?;
                    read_mesh(&text).map_err(run_err)?
                }
                None => gen_rect_mesh(width, height, nx, ny).map_err(|e| Failure::Usage(e.to_string()))?,
            };
            let r = with_threads(threads, || cutoff_modes(&mesh, width, height, mode_type.into(), n_modes))
                .map_err(run_err)?;
            print!("{}", render(report, &r, |r| r.to_text(), |r| r.to_json()));
            Ok(())
        }
        Command::Convergence {
            mode_type,
            levels,
            base_n,
            report,
        } => {
            let r = with_threads(threads, || convergence_study(mode_type.into(), levels as usize, base_n))
                .map_err(run_err)?;
            print!("{}", render(report, &r, |r| r.to_text(), |r| r.to_json()));
            Ok(())
        }
        Command::GenMesh {
            width,
            height,
            nx,
            ny,
            output,
        } => {
            let mesh = gen_rect_mesh(width, height, nx, ny).map_err(|e| Failure::Usage(e.to_string()))?;
            let text = write_mesh(&mesh);
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display()))),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
