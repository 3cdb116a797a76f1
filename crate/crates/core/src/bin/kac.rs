use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use supercartan::cartan::{build_family, Family};
use supercartan::coeffalg::{build_coeff_algebra, Presentation};
use supercartan::mapalg::{tensor_algebra, MapSuperAlgebra};
use supercartan::repsuper::{induce_kac, irreducible_quotient, maximal_submodule, ModuleSpec, SuperModule};

/// Induce a Generalized Kac module K(V) over g⊗B and write it out.
///
/// V is a JSON file with `dim`, optional `parities`, and `action`: one list of
/// `[row, col, "scalar"]` triples per basis element of g₀⊗B, in the order
/// printed by `--basis`. Without `--v` the trivial module is used.
#[derive(Parser)]
#[command(name = "kac", version)]
struct Cli {
    /// W, S, S_tilde, H_tilde or H.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    /// Coefficient algebra: short form (field, trunc:2, points:2,3) or a JSON presentation.
    #[arg(long, default_value = "field")]
    coeff: String,
    #[arg(long)]
    v: Option<PathBuf>,
    /// Output path; stdout if absent.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Emit the irreducible quotient L(V) instead of K(V).
    #[arg(long)]
    quotient: bool,
    /// Print the basis of g₀⊗B and exit.
    #[arg(long)]
    basis: bool,
}

fn setup(cli: &Cli) -> Result<MapSuperAlgebra, String> {
    let f: Family = cli.family.parse().map_err(|e| format!("{e}"))?;
    let p: Presentation = if cli.coeff.trim_start().starts_with('{') {
        serde_json::from_str(&cli.coeff).map_err(|e| e.to_string())?
    } else {
        cli.coeff.parse().map_err(|e| format!("{e}"))?
    };
    let g = build_family(f, cli.n).map_err(|e| e.to_string())?;
    let b = build_coeff_algebra(&p).map_err(|e| e.to_string())?;
    tensor_algebra(g, Arc::new(b)).map_err(|e| e.to_string())
}

fn read_v(cli: &Cli, ga: &MapSuperAlgebra) -> Result<SuperModule, String> {
    let (ga0, _) = ga.degree_zero().map_err(|e| e.to_string())?;
    let Some(path) = &cli.v else { return Ok(SuperModule::trivial(ga0.flat().clone())) };
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let spec: ModuleSpec = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    spec.build(ga0.flat().clone()).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ga = match setup(&cli) {
        Ok(ga) => ga,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.basis {
        let (ga0, _) = ga.degree_zero().expect("degree zero part");
        for (i, b) in ga0.flat().basis().iter().enumerate() {
            println!("{i} {}", b.label);
        }
        return ExitCode::SUCCESS;
    }
    let v = match read_v(&cli, &ga) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let k = match induce_kac(&ga, &v) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let n = maximal_submodule(&k);
    eprintln!("dim V {} dim K(V) {} dim N(V) {} dim L(V) {}", v.dim(), k.dim(), n.dim(), k.dim() - n.dim());
    let module = if cli.quotient {
        match irreducible_quotient(&k) {
            Ok(l) => l,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        }
    } else {
        k.module.clone()
    };
    let json = serde_json::to_string_pretty(&module.dump()).expect("dump serializes");
    match &cli.emit {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{json}"),
    }
    ExitCode::SUCCESS
}
