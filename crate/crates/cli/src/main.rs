use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use algsurg::commands::{self, ExampleParams, Input, Options, Output};
use algsurg::format::{self, CliError, CliResult};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "algsurg", version, about = "Algebraic surgery on chain complexes with Poincaré duality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Ring for fixtures and for files without a "ring" field: Z, Q or Z[Z/k].
    #[arg(long, global = true)]
    ring: Option<String>,
    /// Dimension for `dualize` and `example`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    n: Option<i64>,
    /// Directory to write output documents into.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized examples.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document: complex, structured complex, map, pair, cobordism, form or formation.
    Validate { file: Option<PathBuf> },
    /// Homology in every degree of the window.
    Homology { file: Option<PathBuf> },
    /// The dual complex C^{n-*}.
    Dualize { file: Option<PathBuf> },
    /// Mapping cone of a chain map.
    Cone { file: Option<PathBuf> },
    /// Surgery on a pair: writes the effect and the trace.
    Surger {
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Instant surgery obstruction of an even-dimensional quadratic Poincaré complex over Z.
    Obstruction { file: Option<PathBuf> },
    /// Signature, Arf invariant and Witt class of a form.
    Invariants { file: Option<PathBuf> },
    /// Check a triviality witness for a formation.
    TrivialWitness { file: Option<PathBuf> },
    /// Emit a fixture document; `list` prints the names.
    Example {
        name: String,
        #[arg(long)]
        g: Option<usize>,
        #[arg(long)]
        i: Option<i64>,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
    /// Recover surgery data from a cobordism and check the equivalence g.
    Roundtrip { file: Option<PathBuf> },
}

fn read_input(file: Option<&PathBuf>) -> CliResult<format::FileInput> {
    match file.filter(|p| p.as_os_str() != "-") {
        Some(p) => Ok(format::FileInput { doc: format::read_json(p)?, base: format::base_dir(Some(p)) }),
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            Ok(format::FileInput { doc: format::parse_json(&text, "stdin")?, base: format::base_dir(None) })
        }
    }
}

fn run(cli: Cli) -> CliResult<(Output, bool)> {
    let opts = Options { ring: cli.ring.as_deref().map(format::parse_ring).transpose()?, n: cli.n, seed: cli.seed };
    let with = |file: Option<&PathBuf>, f: fn(&Input, &Options) -> CliResult<Output>| -> CliResult<Output> {
        let fi = read_input(file)?;
        f(&Input { doc: fi.doc, base: &fi.base }, &opts)
    };
    // `true` when the primary document, not the report, goes to stdout without --out
    Ok(match &cli.command {
        Command::Validate { file } => (with(file.as_ref(), commands::validate)?, false),
        Command::Homology { file } => (with(file.as_ref(), commands::homology_cmd)?, false),
        Command::Dualize { file } => (with(file.as_ref(), commands::dualize)?, true),
        Command::Cone { file } => (with(file.as_ref(), commands::cone)?, true),
        Command::Surger { data } => (with(data.as_ref(), commands::surger)?, true),
        Command::Obstruction { file } => (with(file.as_ref(), commands::obstruction)?, false),
        Command::Invariants { file } => (with(file.as_ref(), commands::invariants)?, false),
        Command::TrivialWitness { file } => (with(file.as_ref(), commands::trivial_witness)?, false),
        Command::Roundtrip { file } => (with(file.as_ref(), commands::roundtrip)?, false),
        Command::Example { name, .. } if name == "list" => {
            let mut out = Output::default();
            out.report.ok = true;
            for (n, d) in commands::EXAMPLES {
                out.report.lines.push(((*n).into(), (*d).into()));
            }
            (out, false)
        }
        Command::Example { name, g, i, variant, max_rank } => {
            let params = ExampleParams { g: *g, i: *i, variant: variant.clone(), max_rank: *max_rank };
            (commands::example(name, &opts, &params)?, true)
        }
    })
}

fn emit(cli_out: Option<&PathBuf>, fmt: Format, out: &Output, document_to_stdout: bool) -> CliResult<String> {
    let report = || match fmt {
        Format::Text => out.report.text(),
        Format::Json => format::render(&out.report.json()),
    };
    match cli_out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
            let mut text = report();
            for (stem, doc) in &out.documents {
                let path = dir.join(format!("{stem}.json"));
                std::fs::write(&path, format::render(doc))
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                if matches!(fmt, Format::Text) {
                    text.push_str(&format!("wrote: {}\n", path.display()));
                }
            }
            Ok(text)
        }
        None => match out.documents.first() {
            Some((_, doc)) if document_to_stdout && out.report.ok => Ok(format::render(doc)),
            _ => Ok(report()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (dir, fmt) = (cli.out.clone(), cli.format);
    let result = run(cli).and_then(|(out, doc)| Ok((emit(dir.as_ref(), fmt, &out, doc)?, out.report.ok)));
    match result {
        Ok((text, ok)) => {
            let _ = io::stdout().write_all(text.as_bytes());
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
