use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use supercartan::cartan::{build_family, Family};

#[derive(Parser)]
#[command(name = "algebra", version, about = "Build a Cartan-type superalgebra and print its structure constants")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Basis labels, parities, degrees and nonzero structure constants.
    Dump {
        /// W, S, S_tilde, H_tilde or H.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let Cmd::Dump { family, n, format } = Cli::parse().cmd;
    let f: Family = match family.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let g = match build_family(f, n) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let dump = g.dump();
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&dump).expect("dump serializes")),
        Format::Text => print!("{}", dump.to_text()),
    }
    ExitCode::SUCCESS
}
