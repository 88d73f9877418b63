//! `csg`: generate coalition games, transform them, solve them and analyse
//! the QAOA gate budget.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 resource limit,
//! 4 infeasible instance. Failures print one JSON object on stderr.

mod args;
mod bench;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csg_core::analysis::{complexity_table, write_complexity_csv, SMode, DEFAULT_P_LIST};
use csg_core::game::{generate_game, load_game, write_game};
use csg_core::transform::{
    build_bilp, build_qubo, qubo_to_ising, write_ising_json, write_qubo_json, write_qubo_text,
};
use csg_core::{CoalitionGame, Error, Result};

use run::{Method, SolveOptions};

#[derive(Parser)]
#[command(
    name = "csg",
    version,
    about = "Coalition structure generation via QUBO, annealing and QAOA"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random game as JSON.
    Gen {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one game and print its report.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum)]
        method: Method,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the QUBO or Ising form of a game.
    Export {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        /// Coalition indices to drop from the model, comma-separated.
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the gate-count comparison table as CSV.
    Analyze {
        /// Agent counts, `N` or `A..B`.
        #[arg(long, default_value = "2..64")]
        agents: String,
        /// Layer counts.
        #[arg(long = "p", value_delimiter = ',')]
        p_list: Vec<u64>,
        #[arg(long, value_enum, default_value = "all")]
        s_mode: SModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a grid of generated games, one report file per cell plus
    /// `summary.csv`.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "sa")]
        methods: Vec<Method>,
        /// Agent counts, `N` or `A..B`.
        #[arg(long, default_value = "2..7")]
        agents: String,
        /// `all` or comma-separated distribution names.
        #[arg(long = "dists", alias = "dist", default_value = "all")]
        dists: String,
        /// First game seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds per cell.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Distribution parameter override, `key=value`.
        #[arg(long = "param")]
        params: Vec<String>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GameArgs {
    /// Read the game from this file instead of generating one.
    #[arg(long, conflicts_with_all = ["agents", "dist", "params"])]
    game: Option<PathBuf>,
    #[arg(long)]
    agents: Option<usize>,
    #[arg(long, default_value = "normal")]
    dist: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Distribution parameter override, `key=value`.
    #[arg(long = "param")]
    params: Vec<String>,
}

impl GameArgs {
    fn load(&self) -> Result<CoalitionGame> {
        if let Some(path) = &self.game {
            return load_game(path);
        }
        let n = self
            .agents
            .ok_or_else(|| Error::Config("pass --game or --agents".into()))?;
        let spec = args::dist_spec(self.dist.parse()?, &self.params)?;
        generate_game(n, &spec, self.seed)
    }
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Coalition indices to drop from the model, comma-separated.
    #[arg(long, value_delimiter = ',')]
    exclude: Vec<String>,
    /// Solver seed; defaults to the game seed.
    #[arg(long)]
    solver_seed: Option<u64>,
    /// Run QAOA at exactly this depth.
    #[arg(long = "p", conflicts_with = "p_max")]
    p: Option<usize>,
    /// Scan QAOA depths 1..=P, stopping at the first that samples an optimum.
    #[arg(long, default_value_t = 12)]
    p_max: usize,
    #[arg(long, default_value_t = 1024)]
    shots: usize,
    /// Annealing sweeps per restart.
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
}

impl SolverArgs {
    fn options(&self, seed: u64) -> Result<SolveOptions> {
        Ok(SolveOptions {
            lambda: self.lambda,
            exclude: args::parse_exclusions(&self.exclude)?,
            seed: self.solver_seed.unwrap_or(seed),
            depths: match self.p {
                Some(p) => p..=p,
                None => 1..=self.p_max,
            },
            shots: self.shots,
            sweeps: self.sweeps,
            restarts: self.restarts,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    QuboJson,
    QuboText,
    IsingJson,
}

#[derive(Clone, Copy, ValueEnum)]
enum SModeArg {
    Min,
    Max,
    Actual,
    All,
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { game, out } => {
            if game.game.is_some() {
                return Err(Error::Config(
                    "gen generates a game; --game is not accepted".into(),
                ));
            }
            let g = game.load()?;
            let mut w = output(out.as_ref())?;
            write_game(&g, &mut w)?;
            w.flush()?;
        }
        Command::Solve {
            game,
            method,
            solver,
            out,
        } => {
            let g = game.load()?;
            let report = run::solve(method, &g, &solver.options(g.seed().unwrap_or(game.seed))?)?;
            let mut w = output(out.as_ref())?;
            serde_json::to_writer_pretty(&mut w, &report).map_err(Error::from)?;
            writeln!(w)?;
            w.flush()?;
        }
        Command::Export {
            game,
            format,
            lambda,
            exclude,
            out,
        } => {
            let g = game.load()?;
            let bilp = build_bilp(&g, &args::parse_exclusions(&exclude)?)?;
            let qubo = build_qubo(&bilp, lambda)?;
            let mut w = output(out.as_ref())?;
            match format {
                ExportFormat::QuboJson => write_qubo_json(&qubo, &mut w)?,
                ExportFormat::QuboText => write_qubo_text(&qubo, &mut w)?,
                ExportFormat::IsingJson => write_ising_json(&qubo_to_ising(&qubo), &mut w)?,
            }
            w.flush()?;
        }
        Command::Analyze {
            agents,
            p_list,
            s_mode,
            out,
        } => {
            let range = args::parse_range(&agents)?;
            let range = (*range.start() as u32)..=(*range.end() as u32);
            let p_list = if p_list.is_empty() {
                DEFAULT_P_LIST.to_vec()
            } else {
                p_list
            };
            let modes = match s_mode {
                SModeArg::Min => vec![SMode::Min],
                SModeArg::Max => vec![SMode::Max],
                SModeArg::Actual => vec![SMode::Actual],
                SModeArg::All => SMode::ALL.to_vec(),
            };
            let mut rows = Vec::new();
            for mode in modes {
                rows.extend(complexity_table(range.clone(), &p_list, mode)?);
            }
            let mut w = output(out.as_ref())?;
            write_complexity_csv(&rows, &mut w)?;
            w.flush()?;
        }
        Command::Bench {
            methods,
            agents,
            dists,
            seed,
            seeds,
            params,
            solver,
            out,
        } => {
            let grid = bench::Grid {
                methods,
                dists: args::parse_dists(&dists)?,
                agents: args::parse_range(&agents)?,
                seeds: seed..seed + seeds,
                params,
            };
            if grid.seeds.is_empty() {
                return Err(Error::Config("--seeds must be at least 1".into()));
            }
            let cells = bench::run(&grid, &solver.options(seed)?, &out)?;
            eprintln!("bench: {cells} cells written to {}", out.display());
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) => 3,
        Error::Infeasible(_) => 4,
        _ => 2,
    }
}

fn report_error(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!(
        "{}",
        serde_json::json!({ "error": kind, "message": message })
    );
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.kind().to_string();
            let detail = e.render().to_string();
            let first = detail
                .lines()
                .next()
                .unwrap_or(&message)
                .trim_start_matches("error: ");
            return report_error("config", first, 2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(e.kind(), &e.to_string(), exit_code(&e)),
    }
}
