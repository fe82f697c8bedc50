use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use otlab::pipeline::{analyze, verify_paper_example, ErrorReport, Manifest};
use otlab::search::{run_search, run_to_file, Evaluation, SearchSpec};
use otlab::Error;

/// Special Hermitian metrics on Oeljeklaus-Toma manifolds.
#[derive(Parser)]
#[command(name = "otlab", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze the manifold described by a JSON manifest.
    Analyze {
        manifest: PathBuf,
        /// Working precision in bits (overrides the manifest).
        #[arg(long)]
        precision: Option<u32>,
        /// Accept the polynomial as irreducible when no certificate is found.
        #[arg(long)]
        assert_irreducible: bool,
        /// Dolbeault bidegrees as a flat list `p,q[,p,q...]`.
        #[arg(long, value_delimiter = ',')]
        hodge: Vec<usize>,
        /// Include per-stage wall-clock times in the report.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Check the bundled sextic and cubic examples against the published values.
    VerifyPaperExample {
        #[arg(long, default_value_t = 256)]
        precision: u32,
        /// Emit the checklist as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Scan a polynomial family; one JSON line per hit.
    Search {
        spec: PathBuf,
        /// Checkpoint file; an existing one is resumed. Requires --out.
        #[arg(long, requires = "out")]
        resume: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn error_json(e: &Error) -> String {
    let body = serde_json::json!({ "error": ErrorReport::from(e) });
    serde_json::to_string_pretty(&body).expect("error report serializes") + "\n"
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))
}

fn hodge_pairs(flat: &[usize]) -> Result<Option<Vec<[usize; 2]>>, Error> {
    if flat.is_empty() {
        return Ok(None);
    }
    if flat.len() % 2 != 0 {
        return Err(Error::Manifest(
            "--hodge needs an even number of integers".into(),
        ));
    }
    Ok(Some(flat.chunks(2).map(|c| [c[0], c[1]]).collect()))
}

fn run_analyze(
    manifest: &Path,
    precision: Option<u32>,
    assert_irreducible: bool,
    hodge: &[usize],
    timing: bool,
) -> Result<String, Error> {
    let mut m = Manifest::from_json(&read(manifest)?)?;
    if let Some(p) = precision {
        m.precision = p;
    }
    m.assert_irreducible |= assert_irreducible;
    if let Some(pairs) = hodge_pairs(hodge)? {
        m.hodge_pairs = Some(pairs);
    }
    let report = analyze(&m, timing)?;
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

fn run_search_command(
    spec: &Path,
    resume: Option<&Path>,
    out: Option<&Path>,
    threads: Option<usize>,
) -> Result<(), Error> {
    let spec: SearchSpec =
        serde_json::from_str(&read(spec)?).map_err(|e| Error::Manifest(e.to_string()))?;
    let summary = match out {
        Some(path) => run_to_file(&spec, path, resume, threads)?,
        None => {
            let stdout = io::stdout();
            run_search(&spec, 0, |_, evals| {
                let mut lock = stdout.lock();
                for e in evals {
                    if let Evaluation::Hit(h) = e {
                        serde_json::to_writer(&mut lock, h)?;
                        lock.write_all(b"\n")?;
                    }
                }
                Ok(())
            })?
        }
    };
    eprintln!(
        "examined {}, hits {}, skipped {}{}",
        summary.examined,
        summary.hits,
        summary.skipped,
        if summary.truncated {
            " (truncated)"
        } else {
            ""
        }
    );
    Ok(())
}

fn fail(out: &Option<PathBuf>, e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    let _ = emit(out, &error_json(e));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::FAILURE;
        }
    }
    match cli.command {
        Command::Analyze {
            manifest,
            precision,
            assert_irreducible,
            hodge,
            timing,
            output,
        } => match run_analyze(&manifest, precision, assert_irreducible, &hodge, timing) {
            Ok(text) => match emit(&output.out, &text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(&None, &Error::Io(e)),
            },
            Err(e) => fail(&output.out, &e),
        },
        Command::VerifyPaperExample {
            precision,
            json,
            output,
        } => match verify_paper_example(precision) {
            Ok(list) => {
                let text = if json {
                    serde_json::to_string_pretty(&list).expect("checklist serializes") + "\n"
                } else {
                    list.render()
                };
                if let Err(e) = emit(&output.out, &text) {
                    return fail(&None, &Error::Io(e));
                }
                if list.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
            Err(e) => fail(&output.out, &e),
        },
        Command::Search {
            spec,
            resume,
            output,
        } => {
            match run_search_command(&spec, resume.as_deref(), output.out.as_deref(), cli.threads) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(&None, &e),
            }
        }
    }
}
