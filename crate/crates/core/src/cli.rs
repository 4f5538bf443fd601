//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::Corpus;
use crate::error::Error;
use crate::parser::parse;
use crate::report::{apply_override, evaluate, EvalOptions, SemanticsChoice};
use crate::semantics::{Analyzed, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "foundalog", version, about = "Founded and constraint semantics for Datalog with aggregation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a program.
    Eval(EvalArgs),
    /// Parse and validate a program without evaluating it.
    Check {
        file: PathBuf,
        /// Declaration override, e.g. `p/1=uncertain,complete,closed`.
        #[arg(long = "declare", value_name = "PRED=KEYWORDS")]
        declare: Vec<String>,
    },
    /// Run the regression corpus.
    Corpus {
        /// Corpus directory; the bundled corpus is used when absent.
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Rewrite expected.json in DIR from the current results.
        #[arg(long, requires = "dir")]
        bless: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct EvalArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = SemanticsChoice::Both)]
    semantics: SemanticsChoice,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximum number of constraint models to print.
    #[arg(long, env = "FOUNDALOG_MAX_MODELS", default_value_t = 1000,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_models: u64,
    /// Maximum number of undefined atoms the enumeration will branch on.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Declaration override, e.g. `p/1=uncertain,complete,closed`.
    #[arg(long = "declare", value_name = "PRED=KEYWORDS")]
    declare: Vec<String>,
    /// Print the ground rules of the program.
    #[arg(long)]
    dump_ground: bool,
    /// Print the completed program.
    #[arg(long)]
    dump_completed: bool,
    /// Print the dependency graph, SCC order and declarations.
    #[arg(long)]
    dump_depgraph: bool,
    /// Compare the results with the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    /// Also list false atoms of certain predicates in text output.
    #[arg(long)]
    show_false: bool,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&a, out, err),
        Command::Check { file, declare } => cmd_check(&file, &declare, out),
        Command::Corpus { dir, bless } => cmd_corpus(dir.as_deref(), bless, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn load(file: &Path, declare: &[String]) -> Result<crate::Program, Error> {
    let src = fs::read_to_string(file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
    let mut prog = parse(&src)?;
    for d in declare {
        apply_override(&mut prog, d)?;
    }
    Ok(prog)
}

fn cmd_check(file: &Path, declare: &[String], out: &mut dyn Write) -> Result<i32, Error> {
    let analyzed = Analyzed::new(&load(file, declare)?)?;
    let _ = writeln!(
        out,
        "ok: {} rules, {} predicates, {} ground atoms",
        analyzed.program.rules.len(),
        analyzed.graph.nodes().len(),
        analyzed.universe.len()
    );
    Ok(EXIT_OK)
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let prog = load(&a.file, &a.declare)?;
    let opts = EvalOptions { semantics: a.semantics, max_models: usize::try_from(a.max_models).unwrap_or(usize::MAX), budget: a.budget };
    let e = evaluate(&prog, &opts)?;
    // Dumps go to stderr in JSON mode so stdout stays parseable.
    let dump: &mut dyn Write = if a.format == Format::Json { &mut *err } else { &mut *out };
    if a.dump_depgraph {
        let _ = writeln!(dump, "% dependency graph\n{}", e.analyzed.graph);
        let _ = writeln!(dump, "% scc order");
        for (i, c) in e.analyzed.plan.components.iter().enumerate() {
            let names: Vec<String> = c.iter().map(ToString::to_string).collect();
            let _ = writeln!(dump, "{i}: {}", names.join(" "));
        }
        let _ = writeln!(dump, "% declarations");
        for d in &e.analyzed.program.declarations {
            let _ = writeln!(dump, "{d}");
        }
    }
    if a.dump_completed {
        let _ = writeln!(dump, "% completed program\n{}", e.analyzed.completed);
    }
    if a.dump_ground {
        let _ = writeln!(dump, "% ground program\n{}", e.analyzed.ground_original);
    }
    match a.format {
        Format::Text => {
            let _ = write!(out, "{}", e.text(a.semantics, a.show_false));
        }
        Format::Json => {
            let json = serde_json::to_string_pretty(&e.report(a.semantics)).expect("report serializes");
            let _ = writeln!(out, "{json}");
        }
    }
    if a.oracle {
        let diffs = e.oracle_diff()?;
        if !diffs.is_empty() {
            let _ = writeln!(err, "oracle mismatch:");
            for d in diffs {
                let _ = writeln!(err, "  {d}");
            }
            return Ok(EXIT_MISMATCH);
        }
        let _ = writeln!(err, "oracle agrees");
    }
    Ok(EXIT_OK)
}

fn cmd_corpus(dir: Option<&Path>, bless: bool, out: &mut dyn Write) -> Result<i32, Error> {
    let corpus = match dir {
        Some(d) => Corpus::from_dir(d)?,
        None => Corpus::bundled(),
    };
    if bless {
        let dir = dir.expect("clap requires --dir with --bless");
        let reports = corpus.bless()?;
        let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
        fs::write(dir.join("expected.json"), json + "\n").map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let _ = writeln!(out, "blessed {} variants", reports.len());
        return Ok(EXIT_OK);
    }
    let outcomes = corpus.check();
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    for o in &outcomes {
        let status = if o.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(out, "{:width$}  {status}", o.name);
        for d in &o.diff {
            let _ = writeln!(out, "    {d}");
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let _ = writeln!(out, "{} passed, {failed} failed", outcomes.len() - failed);
    Ok(if failed == 0 { EXIT_OK } else { EXIT_MISMATCH })
}
