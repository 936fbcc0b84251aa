//! Command-line surface: validation, homology tables, corner characters,
//! full reports, products of complexes, long-exact-sequence certificates and
//! the aggregated selftest. Output is deterministic; exit codes are 0 for
//! success, 1 for validation/data failures and 2 for usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use conormal::complex::FaceComplex;
use conormal::{builders, doc, homology, products, report, selftest, Error};

#[derive(Parser)]
#[command(
    name = "conormal",
    version,
    about = "Conormal homology, K-theory groups and Fredholm diagnostics for manifolds with corners"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Complex file in the canonical JSON format
    file: Option<PathBuf>,
    /// Builder name, e.g. `cube` or `two_chambers:3`
    #[arg(long, value_name = "NAME[:K]")]
    builder: Option<String>,
}

impl Source {
    fn load(&self) -> conormal::Result<(FaceComplex, String)> {
        if let Some(name) = &self.builder {
            let id: builders::BuilderId = name.parse()?;
            return Ok((builders::build(&id)?, id.to_string()));
        }
        let path = self.file.as_ref().expect("clap enforces one source");
        let text = std::fs::read_to_string(path)?;
        Ok((doc::parse_json(&text)?, path.display().to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the face-complex axioms and list violations
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// Print the homology table (graded and periodic groups)
    Homology {
        #[command(flatten)]
        source: Source,
    },
    /// Print the corner characters chi0, chi1, chi
    Chars {
        #[command(flatten)]
        source: Source,
    },
    /// Print the full corner report (homology, K-theory, Fredholm flags)
    Report {
        #[command(flatten)]
        source: Source,
        /// Emit the machine-readable JSON document instead of text
        #[arg(long)]
        json: bool,
        /// Write the report to a file instead of standard output
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Multiply two complex files and write the product with provenance
    Product {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Certify exactness of the filtration long exact sequence at a cutoff
    Les {
        #[command(flatten)]
        source: Source,
        /// Filtration cutoff m (faces of codimension <= m form the subcomplex)
        #[arg(long)]
        m: usize,
    },
    /// Run the full invariant suite on builders and seeded random products
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Argument(_) | Error::Builder(_) => 2,
        _ => 1,
    }
}

fn emit(text: &str, output: Option<&Path>) -> conormal::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> conormal::Result<u8> {
    match cli.command {
        Command::Validate { source } => {
            let (cx, label) = source.load()?;
            let result = cx.validate();
            if result.ok() {
                println!(
                    "ok: {} ({} faces, codimension {})",
                    label,
                    cx.num_faces(),
                    cx.max_codim()
                );
                Ok(0)
            } else {
                println!("invalid: {label}");
                for v in &result.violations {
                    println!("  {v}");
                }
                Ok(1)
            }
        }
        Command::Homology { source } => {
            let (cx, label) = source.load()?;
            let table = homology::conormal_homology(&cx)?;
            println!("homology: {label}");
            for (p, g) in table.by_codim.iter().enumerate() {
                println!("  H_{p}^cn = {g}");
            }
            println!("H0^pcn = {}", table.even);
            println!("H1^pcn = {}", table.odd);
            Ok(0)
        }
        Command::Chars { source } => {
            let (cx, label) = source.load()?;
            let c = report::corner_characters(&cx)?;
            println!("corner characters: {label}");
            println!("chi0 = {}", c.chi0);
            println!("chi1 = {}", c.chi1);
            println!("chi = {}", c.chi);
            Ok(0)
        }
        Command::Report {
            source,
            json,
            output,
        } => {
            let (cx, label) = source.load()?;
            let r = report::corner_report(&cx, &label)?;
            let text = if json { r.to_json()? } else { r.render_text() };
            emit(&text, output.as_deref())?;
            Ok(0)
        }
        Command::Product {
            file1,
            file2,
            output,
        } => {
            let a = doc::parse_json(&std::fs::read_to_string(&file1)?)?;
            let b = doc::parse_json(&std::fs::read_to_string(&file2)?)?;
            a.ensure_valid()?;
            b.ensure_valid()?;
            let p = products::product(&a, &b)?;
            std::fs::write(&output, doc::to_json(&p))?;
            println!(
                "wrote product with {} faces (codimension {}) to {}",
                p.num_faces(),
                p.max_codim(),
                output.display()
            );
            Ok(0)
        }
        Command::Les { source, m } => {
            let (cx, label) = source.load()?;
            let les = homology::les_exactness(&cx, m)?;
            println!("long exact sequence: {label}, cutoff m = {m}");
            for node in &les.nodes {
                let status = if node.exact() { "exact  " } else { "INEXACT" };
                println!("  {status} at {:<14} group {}", node.label, node.group);
            }
            if les.all_exact() {
                println!("all {} nodes exact", les.nodes.len());
                Ok(0)
            } else {
                println!("exactness FAILED");
                Ok(1)
            }
        }
        Command::Selftest { seed } => {
            let outcome = selftest::run(seed);
            print!("{}", outcome.log);
            Ok(if outcome.ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
