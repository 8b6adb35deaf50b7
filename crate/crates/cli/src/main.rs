use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use centra::exactla::{parse_rational, parse_rational_list};
use centra::problem::Problem;
use centra::{CentraError, Result};
use centra_cli::commands::{self, error_report, exit_code, Settings, SolveInputs};
use centra_cli::text::Render;

const DEFAULT_MAX_DEGREE: u32 = 6;
const DEFAULT_CAP: usize = 200;
const DEFAULT_WINDOW: (f64, usize) = (1.0, 1000);

#[derive(Parser)]
#[command(name = "centra", version, about = "Polynomial centralizers, invariants and closed-form solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct Common {
    /// Problem file (JSON).
    file: PathBuf,
    /// Highest degree to compute [default: options.max_degree, else 6].
    #[arg(long)]
    max_degree: Option<u32>,
    /// Cap on bracket-closure and family sizes [default: options.cap, else 200].
    #[arg(long)]
    cap: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    /// Initial value, comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    y0: Option<String>,
    /// Initial time (rational).
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<String>,
    /// Compare against RK4 on [t0, T_END] with STEPS steps.
    #[arg(long, num_args = 2, value_names = ["T_END", "STEPS"], allow_hyphen_values = true)]
    verify: Option<Vec<String>>,
    /// Largest accepted RK4 deviation.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Graded bases of the equivariant fields.
    Centralizer(Common),
    /// Invariants, or relative invariants with --alpha.
    Invariants {
        #[command(flatten)]
        common: Common,
        /// Values of the linear form on the algebra basis, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Finite / infinite / undetermined verdict with certificate.
    Finiteness(Common),
    /// Closed-form solution of the problem's system or field.
    Solve(SolveArgs),
    /// Formal normal form of the problem's field.
    NormalForm {
        #[command(flatten)]
        common: Common,
        /// Respect the problem's symmetry matrix.
        #[arg(long)]
        symmetry: bool,
    },
    /// Re-check every certificate the problem admits.
    Verify(SolveArgs),
}

struct Emitted {
    text: String,
    code: i32,
}

fn emit<R: Serialize + Render>(report: &R, format: Format, code: i32) -> Emitted {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Text => report.render(),
    };
    Emitted { text, code }
}

fn settings(c: &Common, p: &Problem) -> Settings {
    Settings {
        max_degree: c.max_degree.or(p.max_degree).unwrap_or(DEFAULT_MAX_DEGREE),
        cap: c.cap.or(p.cap).unwrap_or(DEFAULT_CAP),
    }
}

fn load(c: &Common) -> Result<Problem> {
    let text = std::fs::read_to_string(&c.file)
        .map_err(|e| CentraError::Invalid(format!("cannot read {}: {e}", c.file.display())))?;
    Problem::parse(&text)
}

fn solve_inputs(a: &SolveArgs, default_window: Option<(f64, usize)>) -> Result<SolveInputs> {
    let window = match &a.verify {
        Some(v) => {
            let t_end = v[0].parse::<f64>().map_err(|e| CentraError::Parse(format!("T_END: {e}")))?;
            let steps = v[1].parse::<usize>().map_err(|e| CentraError::Parse(format!("STEPS: {e}")))?;
            Some((t_end, steps))
        }
        None => default_window,
    };
    Ok(SolveInputs {
        y0: a.y0.as_deref().map(parse_rational_list).transpose()?,
        t0: a.t0.as_deref().map(parse_rational).transpose()?,
        window,
        tolerance: a.tol,
    })
}

fn run(cli: &Cli) -> Result<(Emitted, Option<PathBuf>)> {
    let (emitted, output) = match &cli.command {
        Command::Centralizer(c) => {
            let p = load(c)?;
            (emit(&commands::centralizer(&p, &settings(c, &p))?, c.format, 0), &c.output)
        }
        Command::Invariants { common: c, alpha } => {
            let p = load(c)?;
            let alpha = alpha.as_deref().map(parse_rational_list).transpose()?;
            (emit(&commands::invariants(&p, &settings(c, &p), alpha)?, c.format, 0), &c.output)
        }
        Command::Finiteness(c) => {
            let p = load(c)?;
            (emit(&commands::finiteness(&p, &settings(c, &p))?, c.format, 0), &c.output)
        }
        Command::Solve(a) => {
            let c = &a.common;
            let p = load(c)?;
            let (report, ok) = commands::solve(&p, &settings(c, &p), &solve_inputs(a, None)?)?;
            (emit(&report, c.format, if ok { 0 } else { 1 }), &c.output)
        }
        Command::NormalForm { common: c, symmetry } => {
            let p = load(c)?;
            (emit(&commands::normal_form_cmd(&p, &settings(c, &p), *symmetry)?, c.format, 0), &c.output)
        }
        Command::Verify(a) => {
            let c = &a.common;
            let p = load(c)?;
            let report = commands::verify(&p, &settings(c, &p), &solve_inputs(a, Some(DEFAULT_WINDOW))?)?;
            let code = if report.passed { 0 } else { 1 };
            (emit(&report, c.format, code), &c.output)
        }
    };
    Ok((emitted, output.clone()))
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("CENTRA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CentraError::Invalid(format!("CENTRA_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CentraError::Internal(e.to_string()))
}

fn fail(e: &CentraError) -> ExitCode {
    let body = serde_json::to_string(&error_report(e)).expect("error reports serialize");
    eprintln!("{body}");
    ExitCode::from(exit_code(e) as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    match run(&cli) {
        Ok((emitted, output)) => {
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &emitted.text) {
                        return fail(&CentraError::Invalid(format!("cannot write {}: {e}", path.display())));
                    }
                }
                None => print!("{}", emitted.text),
            }
            ExitCode::from(emitted.code as u8)
        }
        Err(e) => fail(&e),
    }
}
