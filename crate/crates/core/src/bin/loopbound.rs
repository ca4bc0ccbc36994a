use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use loopbound::harness::{
    all_hold, default_config, determinism_hash, emit_report, emit_suite, list_scenarios, run_scenario, suite_hash, Report, ReportFormat,
    ScenarioConfig,
};
use loopbound::Error;

#[derive(Parser)]
#[command(name = "loopbound", version, about = "Run comparison-geometry scenarios and emit verdict reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, env = "LOOPBOUND_THREADS")]
    threads: Option<usize>,

    /// Output format.
    #[arg(long, global = true, default_value = "json", value_parser = parse_format)]
    format: ReportFormat,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered scenarios.
    List,
    /// Run one scenario, by name or from a JSON config file.
    Run {
        #[arg(long, required_unless_present = "config")]
        scenario: Option<String>,
        #[arg(long, conflicts_with = "scenario")]
        config: Option<PathBuf>,
    },
    /// Run every scenario with its default config.
    All,
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn write_out(bytes: &[u8], out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(Error::from),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(Error::from)
        }
    }
}

fn load_config(scenario: Option<String>, config: Option<PathBuf>, seed: Option<u64>) -> Result<ScenarioConfig, Error> {
    let mut cfg = match (scenario, config) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Usage { path: path.display().to_string(), message: e.to_string() })?;
            ScenarioConfig::from_json(&text)?
        }
        (Some(name), None) => default_config(&name).ok_or_else(|| Error::Usage { path: "--scenario".into(), message: format!("unknown scenario `{name}`") })?,
        (None, None) => unreachable!("clap requires one of --scenario/--config"),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn summary(reports: &[Report]) -> Result<(), Error> {
    for r in reports {
        let failed = r.verdicts.iter().filter(|v| !v.holds && !v.vacuous).count();
        eprintln!(
            "{:<26} {:>3} verdicts {:>2} failed {:>7} ms  {}",
            r.scenario,
            r.verdicts.len(),
            failed,
            r.runtime_ms,
            &determinism_hash(r)?[..16]
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Usage { path: "--threads".into(), message: "must be >= 1".into() });
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Resource(e.to_string()))?;
    }
    match cli.command {
        Command::List => {
            for (name, description) in list_scenarios() {
                println!("{name:<26} {description}");
            }
            Ok(true)
        }
        Command::Run { scenario, config } => {
            let mut cfg = load_config(scenario, config, cli.seed)?;
            let out = cli.out.clone().or_else(|| cfg.output_path.take().map(PathBuf::from));
            let report = run_scenario(&cfg)?;
            write_out(&emit_report(&report, cli.format)?, out.as_ref())?;
            summary(std::slice::from_ref(&report))?;
            Ok(all_hold(std::slice::from_ref(&report)))
        }
        Command::All => {
            let mut reports = Vec::new();
            for (name, _) in list_scenarios() {
                let cfg = load_config(Some(name.to_string()), None, cli.seed)?;
                reports.push(run_scenario(&cfg)?);
            }
            write_out(&emit_suite(&reports, cli.format)?, cli.out.as_ref())?;
            summary(&reports)?;
            eprintln!("suite hash {}", suite_hash(&reports)?);
            Ok(all_hold(&reports))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Usage { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
