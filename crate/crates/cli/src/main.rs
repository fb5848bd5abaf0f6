use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flexling_cli::commands::{
    approx_svg, cmd_approx, cmd_compare, infer_row, output_dir, parse_list, report_svg,
    write_approx_csv, write_file, write_result_csv, CliError, EvaluatorTag, InferMethod,
    TargetFunction,
};
use flexling_cli::config::{load_config, ConfigError, ExperimentConfig, MIN_GRID_POINTS};

#[derive(Parser)]
#[command(name = "flexling", version, about = "Flexible linguistic inference experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory (overrides the config's `outputs`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// RNG seed (overrides the config's `seed`)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Grid points per universe (overrides the config's `grid_points`)
    #[arg(long, global = true)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a config file
    Define {
        #[arg(short, long)]
        config: PathBuf,
        /// Print the normalized config
        #[arg(long)]
        print: bool,
    },
    /// Run one inference method
    Infer {
        #[arg(short, long)]
        config: PathBuf,
        /// Rule name, or a comma list for parallel/mamdani/cri
        #[arg(long)]
        rule: String,
        /// Input value (comma list for multi-condition natural inference)
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, value_enum)]
        method: InferMethod,
    },
    /// Compare degree, at, mamdani and cri over several inputs
    Compare {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        rule: String,
        /// Comma list of inputs
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
    },
    /// Approximation error under granule refinement
    Approx {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        function: TargetFunction,
        /// Granule counts, e.g. 5,9,17,33
        #[arg(long)]
        schedule: String,
        #[arg(long, value_enum, default_value = "interpolation")]
        evaluator: EvaluatorTag,
        #[arg(long, default_value_t = flexling::approx::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Plot an approx CSV as SVG
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

fn load(cli: &Cli, path: &Path) -> Result<ExperimentConfig, CliError> {
    let mut cfg = load_config(path)?;
    if let Some(out) = &cli.out {
        cfg.outputs = Some(out.clone());
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(grid) = cli.grid {
        if grid < MIN_GRID_POINTS {
            return Err(ConfigError::Validation {
                entity: "--grid".into(),
                message: format!("{grid} < {MIN_GRID_POINTS}"),
            }
            .into());
        }
        cfg.grid_points = grid;
    }
    Ok(cfg)
}

fn list<T: std::str::FromStr>(flag: &str, s: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    parse_list(s).map_err(|e| CliError::Usage(format!("{flag}: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Define { config, print } => {
            let cfg = load(&cli, config)?;
            if *print {
                println!("{}", cfg.to_json());
            } else {
                println!(
                    "ok: {} universes, {} values, {} partitions, {} rules",
                    cfg.universes.len(),
                    cfg.values.len(),
                    cfg.partitions.len(),
                    cfg.rules.len()
                );
            }
        }
        Command::Infer {
            config,
            rule,
            x0,
            method,
        } => {
            let cfg = load(&cli, config)?;
            let row = infer_row(&cfg, rule, &list::<f64>("--x0", x0)?, *method)?;
            let rows = [row];
            write_result_csv(&rows, io::stdout().lock())?;
            if let Some(dir) = &cfg.outputs {
                let mut buf = Vec::new();
                write_result_csv(&rows, &mut buf)?;
                let name = format!("infer_{}_{}.csv", rule.replace(',', "+"), method.as_str());
                write_file(&dir.join(name), &buf)?;
            }
        }
        Command::Compare { config, rule, x0 } => {
            let cfg = load(&cli, config)?;
            let rows = cmd_compare(&cfg, rule, &list::<f64>("--x0", x0)?)?;
            let mut buf = Vec::new();
            write_result_csv(&rows, &mut buf)?;
            print!("{}", String::from_utf8_lossy(&buf));
            if let Some(dir) = &cfg.outputs {
                write_file(&dir.join(format!("compare_{}.csv", rule.replace(',', "+"))), &buf)?;
            }
            if rows.iter().all(|r| r.error.is_some()) {
                return Err(CliError::Usage("every comparison row failed".into()));
            }
        }
        Command::Approx {
            config,
            function,
            schedule,
            evaluator,
            samples,
        } => {
            let cfg = load(&cli, config)?;
            let schedule = list::<usize>("--schedule", schedule)?;
            let rows = cmd_approx(&cfg, *function, &schedule, *evaluator, *samples)?;
            let mut buf = Vec::new();
            write_approx_csv(&rows, &mut buf)?;
            print!("{}", String::from_utf8_lossy(&buf));
            let dir = output_dir(&cfg);
            let stem = format!("approx_{}_{}", function.name(), rows[0].method);
            write_file(&dir.join(format!("{stem}.csv")), &buf)?;
            let title = format!("{} / {}", function.name(), rows[0].method);
            write_file(&dir.join(format!("{stem}.svg")), approx_svg(&title, &rows).as_bytes())?;
        }
        Command::Report { input, svg } => {
            let doc = report_svg(input)?;
            write_file(svg, doc.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
