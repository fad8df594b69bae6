use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use compound_robin::analysis::{
    compare, estimate_orders, run_sweep, validate_exterior_limit, validate_harnack_bounds,
    validate_max_principle, write_sweep_csv, CSV_HEADER,
};
use compound_robin::config::Config;
use compound_robin::grid::{cartesian_grid, write_field_csv};
use compound_robin::Result;

#[derive(Parser)]
#[command(
    version,
    about = "Compound asymptotics for a disk with a small Robin inclusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Single {
    /// TOML run configuration
    #[arg(short, long)]
    config: PathBuf,
    /// Overrides [geometry] eps
    #[arg(long)]
    eps: Option<f64>,
    /// Overrides the first [sweep] kappa
    #[arg(long)]
    kappa: Option<f64>,
    /// Output file; stdout if omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the compound approximation on a grid
    Approx {
        #[command(flatten)]
        run: Single,
        /// Grid points per axis
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
    /// Evaluate the reference solution on a grid
    Exact {
        #[command(flatten)]
        run: Single,
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
    /// One sweep row for a single (eps, kappa)
    Compare {
        #[command(flatten)]
        run: Single,
    },
    /// Every (eps, kappa) pair of the [sweep] block
    Sweep {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Overrides [solver] workers
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Randomized checks of the supporting estimates
    Validate {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Trials per suite; defaults 100, 200 and 50
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    MaxPrinciple,
    Harnack,
    ExteriorLimit,
}

fn sink(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(e: io::Error) -> compound_robin::Error {
    compound_robin::Error::Config(e.to_string())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Approx { run, grid } => {
            let cfg = Config::load(&run.config)?;
            let g = cfg.geometry(run.eps)?;
            let opts = cfg.solver_options();
            let ca = opts.approximate(&g, cfg.kappa(run.kappa)?, &cfg.robin_data()?)?;
            let rows = cartesian_grid(&g, grid)
                .into_iter()
                .map(|x| Ok((x, ca.eval(&x)?)))
                .collect::<Result<Vec<_>>>()?;
            write_field_csv(sink(&run.output).map_err(io_err)?, "u0", rows).map_err(io_err)?;
        }
        Command::Exact { run, grid } => {
            let cfg = Config::load(&run.config)?;
            let g = cfg.geometry(run.eps)?;
            let sol =
                cfg.solver_options()
                    .reference(&g, cfg.kappa(run.kappa)?, &cfg.robin_data()?)?;
            eprintln!("residuals: {:?}", sol.residual_report);
            let rows = cartesian_grid(&g, grid)
                .into_iter()
                .map(|x| Ok((x, sol.eval(&x)?)))
                .collect::<Result<Vec<_>>>()?;
            write_field_csv(sink(&run.output).map_err(io_err)?, "u", rows).map_err(io_err)?;
        }
        Command::Compare { run } => {
            let cfg = Config::load(&run.config)?;
            let g = cfg.geometry(run.eps)?;
            let rec = compare(
                &g,
                g.eps(),
                cfg.kappa(run.kappa)?,
                &cfg.robin_data()?,
                &cfg.solver_options(),
            );
            println!("{CSV_HEADER}\n{}", rec.csv_row());
            if run.output.is_some() {
                write_sweep_csv(
                    sink(&run.output).map_err(io_err)?,
                    std::slice::from_ref(&rec),
                )
                .map_err(io_err)?;
            }
            return Ok(rec.status.is_ok());
        }
        Command::Sweep {
            config,
            output,
            workers,
        } => {
            let cfg = Config::load(&config)?;
            let mut sweep = cfg.sweep_config()?;
            if let Some(w) = workers {
                sweep.workers = w;
            }
            let records = run_sweep(&sweep)?;
            write_sweep_csv(sink(&output).map_err(io_err)?, &records).map_err(io_err)?;
            if let Ok(est) = estimate_orders(&records) {
                for e in est {
                    eprintln!("kappa = {}: orders {:?}", e.kappa, e.orders);
                }
            }
            return Ok(records.iter().all(|r| r.status.is_ok()));
        }
        Command::Validate {
            suite,
            trials,
            seed,
        } => {
            let mut ok = true;
            let pick = |s: Suite| suite == Suite::All || suite == s;
            if pick(Suite::MaxPrinciple) {
                let r = validate_max_principle(trials.unwrap_or(100), seed);
                println!("{r}\n");
                ok &= r.passed();
            }
            if pick(Suite::Harnack) {
                let r = validate_harnack_bounds(trials.unwrap_or(200), seed);
                println!("{r}\n");
                ok &= r.passed();
            }
            if pick(Suite::ExteriorLimit) {
                let r = validate_exterior_limit(trials.unwrap_or(50), seed);
                println!("{r}\n");
                ok &= r.passed();
            }
            return Ok(ok);
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
