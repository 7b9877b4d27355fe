use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map};

use deligne_cli::commands::{run, Command, Config};
use deligne_cli::report::Report;

#[derive(Parser)]
#[command(name = "deligne", version, about = "Checks the infinitesimal Deligne cycle class identities")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Instance file (.toml or .json) or builtin name
    #[arg(long, global = true)]
    instance: Option<String>,
    /// Restrict to one value of p
    #[arg(long, global = true)]
    p: Option<usize>,
    /// Degree bound of the Čech truncation
    #[arg(long = "D", global = true)]
    degree_bound: Option<usize>,
    /// Increment used for the stabilization check
    #[arg(long, global = true)]
    delta: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report to this path ("-" for stdout)
    #[arg(long, global = true)]
    json: Option<String>,
    #[arg(long, global = true)]
    quiet: bool,
    /// Sheaf for `cech`, e.g. O(-2), omega1, Omega^2
    #[arg(long, global = true, allow_hyphen_values = true)]
    sheaf: Option<String>,
    /// Report runtime_ms as 0
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one of the named identity checks
    Verify { what: Verify },
    Cech,
    Hypercoh,
    TangentChow,
    DeltaR,
    Composed,
    Relations,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    #[value(name = "lemma2.6")]
    Lemma26,
    BetaAgreement,
    #[value(name = "diagram2.7")]
    Diagram27,
    AlphaDelta,
    #[value(name = "lemma2.4")]
    Lemma24,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cmd = match cli.command {
        Cmd::Verify { what } => match what {
            Verify::Lemma26 => Command::Lemma26,
            Verify::BetaAgreement => Command::BetaAgreement,
            Verify::Diagram27 => Command::Diagram27,
            Verify::AlphaDelta => Command::AlphaDelta,
            Verify::Lemma24 => Command::Lemma24,
        },
        Cmd::Cech => Command::Cech,
        Cmd::Hypercoh => Command::Hypercoh,
        Cmd::TangentChow => Command::TangentChow,
        Cmd::DeltaR => Command::DeltaR,
        Cmd::Composed => Command::Composed,
        Cmd::Relations => Command::Relations,
    };
    let cfg = Config {
        instance: cli.instance,
        p: cli.p,
        degree_bound: cli.degree_bound,
        delta: cli.delta,
        seed: cli.seed,
        sheaf: cli.sheaf,
    };
    let start = Instant::now();
    let checks = match run(cmd, &cfg) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(2);
        }
    };
    let runtime_ms = if cli.no_timing { 0 } else { start.elapsed().as_millis() as u64 };
    let mut config = Map::new();
    config.insert("instance".into(), json!(cfg.instance));
    config.insert("p".into(), json!(cfg.p));
    config.insert("D".into(), json!(cfg.degree_bound));
    config.insert("delta".into(), json!(cfg.delta));
    config.insert("seed".into(), json!(cfg.seed));
    config.insert("sheaf".into(), json!(cfg.sheaf));
    let report = Report { command: cmd.name().to_string(), config, checks, runtime_ms };
    if let Some(path) = &cli.json {
        let text = report.to_json();
        if path == "-" {
            print!("{text}");
        } else if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {path}: {e}");
            return ExitCode::from(2);
        }
    }
    if !cli.quiet && cli.json.as_deref() != Some("-") {
        for line in report.summary_lines() {
            println!("{line}");
        }
    }
    if report.pass() { ExitCode::SUCCESS } else { ExitCode::from(1) }
}
