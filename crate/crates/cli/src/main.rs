use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use velgauge_cli::config::ExperimentConfig;
use velgauge_cli::error::CliError;
use velgauge_cli::output::{dump_fields, summary_header, write_report, write_text};
use velgauge_cli::registry::render_table;
use velgauge_cli::suites::{
    algebra_suite, algebra_suite_for, convergence_suite, jacobi_table_csv, reduction_suite,
    run_suites,
};

#[derive(Parser)]
#[command(
    name = "velgauge",
    about = "Lattice verification suites for velocity-space-localised gauge fields",
    version
)]
struct Cli {
    /// Print the static check registry (name, equation tag, kind, threshold)
    /// and exit.
    #[arg(long, global = true)]
    list_checks: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory for report.csv and summary.txt (default: config
    /// `output` or ./out).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed override for all randomized coefficient draws.
    #[arg(long)]
    seed: Option<u64>,

    /// Additionally write field snapshots (matter, gauge, lambda,
    /// connection, F2, J1, J2) as CSV.
    #[arg(long)]
    dump_fields: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Verify structure constants, Jacobi identity and antisymmetry.
    VerifyAlgebra {
        /// Algebra to verify (u1, su2, su3); default: all three.
        #[arg(long)]
        algebra: Option<String>,

        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the suites selected in the configuration file.
    Run {
        config: PathBuf,

        #[command(flatten)]
        common: CommonArgs,
    },
    /// Two-resolution (or longer ladder) convergence checks.
    Convergence {
        config: PathBuf,

        /// Comma-separated lattice extents, e.g. 8,16.
        #[arg(long, value_delimiter = ',', required = true)]
        resolutions: Vec<usize>,

        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare the currents against the standard space-time-gauge reference.
    ReduceAkt {
        config: PathBuf,

        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_checks {
        print!("{}", render_table());
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (try --help)");
        return ExitCode::from(2);
    };
    match dispatch(command) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<bool, CliError> {
    match command {
        Command::VerifyAlgebra { algebra, common } => {
            let outdir = common.out.unwrap_or_else(|| PathBuf::from("out"));
            let report = match &algebra {
                Some(name) => {
                    let alg = velgauge::lie::builtin_algebra::<f64>(name)?;
                    let suite = algebra_suite_for(&alg);
                    write_text(
                        &outdir.join(format!("jacobi_{name}.csv")),
                        &jacobi_table_csv(&alg),
                    )?;
                    suite
                }
                None => {
                    for name in ["u1", "su2", "su3"] {
                        let alg = velgauge::lie::builtin_algebra::<f64>(name)?;
                        write_text(
                            &outdir.join(format!("jacobi_{name}.csv")),
                            &jacobi_table_csv(&alg),
                        )?;
                    }
                    algebra_suite(None)
                }
            };
            let header = format!(
                "velgauge verify-algebra — {}",
                algebra.as_deref().unwrap_or("u1, su2, su3")
            );
            finish(&outdir, report, &header)
        }
        Command::Run { config, common } => {
            let experiment = ExperimentConfig::from_path(&config)?;
            let seed = common.seed.unwrap_or(experiment.seed);
            let outdir = resolve_outdir(&common.out, &experiment);
            let (report, cfg) = run_suites(&experiment, seed)?;
            if experiment.selected_suites().contains(&"noether") {
                let rows = velgauge_cli::suites::residual_records(&cfg, experiment.epsilon);
                let mut buf = Vec::new();
                velgauge::report::write_residual_csv(&mut buf, &rows)?;
                std::fs::create_dir_all(&outdir)?;
                std::fs::write(outdir.join("residuals.csv"), buf)?;
            }
            if common.dump_fields {
                dump_fields(&outdir, &cfg)?;
            }
            let header = run_header("run", &experiment, seed);
            finish(&outdir, report, &header)
        }
        Command::Convergence {
            config,
            resolutions,
            common,
        } => {
            let experiment = ExperimentConfig::from_path(&config)?;
            let seed = common.seed.unwrap_or(experiment.seed);
            let outdir = resolve_outdir(&common.out, &experiment);
            let report = convergence_suite(&experiment, &resolutions)?;
            let header = run_header("convergence", &experiment, seed);
            finish(&outdir, report, &header)
        }
        Command::ReduceAkt { config, common } => {
            let experiment = ExperimentConfig::from_path(&config)?;
            let seed = common.seed.unwrap_or(experiment.seed);
            let outdir = resolve_outdir(&common.out, &experiment);
            let report = reduction_suite(seed, experiment.epsilon);
            let header = run_header("reduce-akt", &experiment, seed);
            finish(&outdir, report, &header)
        }
    }
}

fn resolve_outdir(flag: &Option<PathBuf>, experiment: &ExperimentConfig) -> PathBuf {
    flag.clone()
        .or_else(|| experiment.output.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn run_header(command: &str, experiment: &ExperimentConfig, seed: u64) -> String {
    let algebra = match &experiment.algebra {
        velgauge_cli::config::AlgebraSpec::Name(n) => n.clone(),
        velgauge_cli::config::AlgebraSpec::Custom { name, .. } => format!("custom:{name}"),
    };
    summary_header(
        command,
        &algebra,
        experiment.lattice.extents,
        experiment.lattice.spacing,
        experiment.coupling,
        experiment.mass,
        experiment.epsilon,
        seed,
    )
}

fn finish(
    outdir: &std::path::Path,
    report: velgauge::report::SuiteReport,
    header: &str,
) -> Result<bool, CliError> {
    let (csv, summary) = write_report(outdir, &report, header)?;
    let mut stdout = String::new();
    let mut buf = Vec::new();
    report.write_summary(&mut buf, header)?;
    stdout.push_str(&String::from_utf8_lossy(&buf));
    stdout.push_str(&format!(
        "report: {} — summary: {}\n",
        csv.display(),
        summary.display()
    ));
    print!("{stdout}");
    for failure in report.failures() {
        eprintln!(
            "FAILED {} [{}]: {:e} > {:e}",
            failure.name,
            failure.tag,
            failure.value,
            failure.threshold.unwrap_or(f64::NAN)
        );
    }
    Ok(report.all_passed())
}
