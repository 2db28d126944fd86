use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use relconv::repkit::{relative_convolution, SchrodingerRep};
use relconv_cli::config::{ScenarioConfig, Suite, CONFIG_DIR_ENV};
use relconv_cli::report::RunReport;
use relconv_cli::suites::{run_scenario, RunOptions};

#[derive(Parser)]
#[command(name = "relconv", version, about = "Numerical checks for relative convolutions on nilpotent groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the structure constants and group law.
    CheckAlgebra(Common),
    /// Validate the algebra, then the homogeneous-space charts.
    CheckCcp(Common),
    /// Run suites from the scenario.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite to run; repeatable. Defaults to the config's list.
        #[arg(long = "suite", value_parser = parse_suite)]
        suites: Vec<Suite>,
    },
    /// Two-resolution bound sweep over a kernel family.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family_size: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// Config file path or name (looked up in the config dir, then built-ins).
    #[arg(long, default_value = "heisenberg-default")]
    config: String,
    /// Write the bound-verdict CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Also compute at doubled resolution.
    #[arg(long)]
    refine: bool,
    /// Write the relative-convolution matrix of the scenario kernel
    /// (`.bin` for binary, CSV otherwise).
    #[arg(long)]
    export_operator: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{s}` (expected one of {})", names.join(", "))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let (common, options, print_csv) = match cli.command {
        Command::CheckAlgebra(common) => (common, RunOptions::with_suites(vec![Suite::Algebra]), false),
        Command::CheckCcp(common) => (common, RunOptions::with_suites(vec![Suite::Algebra, Suite::Ccp]), false),
        Command::Verify { common, suites } => {
            let suites = if suites.is_empty() { None } else { Some(suites) };
            (common, RunOptions { suites, ..Default::default() }, false)
        }
        Command::Sweep { common, family_size } => (
            common,
            RunOptions {
                suites: Some(vec![Suite::Sweep]),
                family_size,
                ..Default::default()
            },
            true,
        ),
    };
    let options = RunOptions {
        refine: common.refine,
        ..options
    };
    let mut cfg = ScenarioConfig::load(&common.config).with_context(|| {
        format!("loading config `{}` (search dir: ${CONFIG_DIR_ENV})", common.config)
    })?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(path) = &common.export_operator {
        export_operator(&cfg, path)?;
    }

    let report = run_scenario(&cfg, &options);
    print!("{}", report.render());
    if let Some(path) = &common.csv {
        write_csv(&report, path)?;
    } else if print_csv {
        print!("{}", report.csv_string());
    }
    eprintln!("wall clock: {:.3} s", report.wall_clock.as_secs_f64());
    Ok(report.exit_code())
}

fn write_csv(report: &RunReport, path: &Path) -> anyhow::Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    report.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn export_operator(cfg: &ScenarioConfig, path: &Path) -> anyhow::Result<()> {
    let rep = SchrodingerRep::new(cfg.rep.lambda, cfg.rep_grid())?;
    let kernel = cfg.kernel.family(cfg.seed).sample(&cfg.x_grid()?)?;
    let matrix = relative_convolution(&rep, &kernel)?;
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    if path.extension().is_some_and(|e| e == "bin") {
        matrix.write_binary(&mut out)?;
    } else {
        matrix.write_csv(&mut out)?;
    }
    out.flush()?;
    Ok(())
}
