use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use supercartan::cartan::Family;
use supercartan::mapalg::ActionSpec;
use supercartan::verify::{list_suites, run_suite, Format, SuiteConfig};

#[derive(Parser)]
#[command(name = "verify", version, about = "Run verification suites and write reports")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one suite.
    Run(RunArgs),
    /// List the available suites.
    List,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    suite: Option<String>,
    /// Family: W, S, S_tilde, H_tilde or H. Repeatable.
    #[arg(long = "family")]
    families: Vec<String>,
    /// Number of odd generators. Repeatable.
    #[arg(long)]
    n: Vec<usize>,
    /// Coefficient algebra, e.g. field, trunc:2, points:2,3. Repeatable.
    #[arg(long = "coeff")]
    coeffs: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Automorphism of g from the action catalog.
    #[arg(long)]
    action: Option<String>,
    #[arg(long, default_value = "Z2")]
    group: String,
    /// Automorphism of B from the action catalog.
    #[arg(long = "coeff-action", default_value = "identity")]
    coeff_action: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON file with the same fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn config(a: RunArgs) -> Result<SuiteConfig, String> {
    let mut cfg = match &a.config {
        Some(p) => SuiteConfig::from_file(p).map_err(|e| e.to_string())?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = a.suite {
        cfg.suite = s;
    }
    if cfg.suite.is_empty() {
        return Err("no suite given (use --suite or a config file)".into());
    }
    if !a.families.is_empty() {
        cfg.families = a.families.iter().map(|f| Family::from_str(f).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    }
    if !a.n.is_empty() {
        cfg.n = a.n;
    }
    if !a.coeffs.is_empty() {
        cfg.coeffs = a.coeffs;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(s) = a.samples {
        cfg.samples = s;
    }
    if let Some(act) = a.action {
        cfg.actions = vec![ActionSpec::new(&act, &a.group, &a.coeff_action)];
    }
    if a.out.is_some() {
        cfg.out = a.out;
    }
    if let Some(f) = a.format {
        cfg.format = f;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = match cli.cmd {
        Cmd::List => {
            for s in list_suites() {
                println!("{:<20} {}\n{:<20} checks: {}", s.name, s.anchor, "", s.checks.join(", "));
            }
            return ExitCode::SUCCESS;
        }
        Cmd::Run(a) => a,
    };
    let cfg = match config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &cfg.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
            let s = &report.body.summary;
            eprintln!("{}: {} checks, {} pass, {} fail, {} skipped", report.body.suite, s.total, s.pass, s.fail, s.skipped);
        }
        None => print!("{text}"),
    }
    if report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
