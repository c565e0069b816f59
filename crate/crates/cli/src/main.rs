mod commands;
mod fixtures;
mod input;
mod report;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Check, Resolved};
use input::{InputDocument, InputError, StrategyArg};
use report::Report;
use toral_core::exactnum::DEFAULT_PRECISION;
use toral_core::quadmod::DEFAULT_BUDGET;

/// Abelian RT and toral CS invariants of surgery presentations.
#[derive(Parser)]
#[command(name = "toral", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Working precision in bits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Cap on enumerated terms per sum.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, value_enum)]
    strategy: Option<StrategyArg>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit JSON instead of `key: value` lines.
    #[arg(long, global = true)]
    machine: bool,
}

#[derive(Subcommand)]
enum Command {
    /// RT and CS scalars of one presentation.
    Invariant {
        /// Input document, or `-` for stdin.
        file: PathBuf,
        /// Evaluate on the empty link (S³) when the input has no [L].
        #[arg(long)]
        empty_link: bool,
    },
    /// Run one family of checks, on the input or on built-in cases.
    Verify {
        #[arg(value_enum)]
        which: Check,
        file: Option<PathBuf>,
        /// Number of random cases when no input is given (kirby also uses it with input).
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Divisors, q-values, S and T, κ and the modular relations.
    ModularData { file: PathBuf },
    /// The twelve acceptance criteria.
    ReportSuite {
        /// Restrict to these criterion ids.
        #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=12))]
        only: Vec<u8>,
        /// Append wall-clock times (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
    },
}

fn load(path: &PathBuf) -> Result<InputDocument, InputError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| InputError::Invalid(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| InputError::Invalid(format!("{}: {e}", path.display())))?
    };
    InputDocument::parse(&text)
}

fn resolve(common: &Common, doc: Option<&InputDocument>) -> Resolved {
    let file = doc.map(|d| d.options.clone()).unwrap_or_default();
    Resolved {
        precision: common
            .precision
            .or(file.precision)
            .unwrap_or(DEFAULT_PRECISION),
        budget: common.budget.or(file.budget).unwrap_or(DEFAULT_BUDGET),
        strategy: common
            .strategy
            .or(file.strategy)
            .unwrap_or(StrategyArg::Reduced),
        seed: common.seed.or(file.seed).unwrap_or(0),
    }
}

/// The document as evaluated: flags folded into `[options]`.
fn resolved_doc(mut doc: InputDocument, res: &Resolved) -> InputDocument {
    doc.options.precision = Some(res.precision);
    doc.options.budget = Some(res.budget);
    doc.options.strategy = Some(res.strategy);
    doc.options.seed = Some(res.seed);
    doc
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    if cli
        .common
        .precision
        .is_some_and(|p| p < toral_core::exactnum::MIN_PRECISION)
    {
        return Err(InputError::Invalid(format!(
            "precision must be at least {} bits",
            toral_core::exactnum::MIN_PRECISION
        )));
    }
    match &cli.command {
        Command::Invariant { file, empty_link } => {
            let mut doc = load(file)?;
            if *empty_link {
                if doc.l.as_ref().is_some_and(|l| !l.is_empty()) {
                    return Err(InputError::Invalid(
                        "--empty-link given but the input has a nonempty [L]".into(),
                    ));
                }
                doc.l = Some(Vec::new());
            }
            let res = resolve(&cli.common, Some(&doc));
            let doc = resolved_doc(doc, &res);
            let mut r = commands::invariant(&doc, &res)?;
            r.set_input(doc.to_text());
            Ok(r)
        }
        Command::Verify { which, file, cases } => {
            let doc = file.as_ref().map(load).transpose()?;
            let res = resolve(&cli.common, doc.as_ref());
            let doc = doc.map(|d| resolved_doc(d, &res));
            let mut r = commands::verify(*which, doc.as_ref(), &res, *cases)?;
            if let Some(d) = doc {
                r.set_input(d.to_text());
            }
            Ok(r)
        }
        Command::ModularData { file } => {
            let doc = load(file)?;
            let res = resolve(&cli.common, Some(&doc));
            let doc = resolved_doc(doc, &res);
            let mut r = commands::modular_data(&doc, &res)?;
            r.set_input(doc.to_text());
            Ok(r)
        }
        Command::ReportSuite { only, timings } => {
            commands::report_suite(&resolve(&cli.common, None), only, *timings)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, code) = match run(&cli) {
        Ok(r) => {
            let code = if r.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
            (r, code)
        }
        Err(e) => {
            let mut r = Report::new("error");
            r.push("status", "error");
            r.push("message", e);
            (r, ExitCode::from(2))
        }
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(report.render(cli.common.machine).as_bytes());
    code
}
