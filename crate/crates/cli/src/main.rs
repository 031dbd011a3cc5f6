//! `gstrata`: equations, tangent space and universal family of the Groebner
//! stratum of a monomial ideal.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gstrata::pipeline::{self, FamilyReport, VerifyInput};
use gstrata::{Error, Exec, Exponent, JobConfig, Mode, NuStrategy, OrderSpec};

#[derive(Parser)]
#[command(name = "gstrata", version, about = "Groebner strata of monomial ideals")]
struct Cli {
    /// Upper bound on worker threads.
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,
    /// Run every stage on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: equations, tangent space, residual presentation, family.
    Stratum(JobArgs),
    /// Edge triples and degree data of the standard set.
    Triples(JobArgs),
    /// Tangent space at the monomial point.
    Tangent(JobArgs),
    /// Universal family over the residual coordinates.
    Family(JobArgs),
    /// Check that a basis is a reduced Groebner basis with the given corners.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Homogeneous,
    Truncated,
}

#[derive(Clone, Copy, ValueEnum)]
enum NuArg {
    Smallest,
    Largest,
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Write the text report here (`-` for stdout).
    #[arg(long, value_name = "OUT")]
    text: Option<PathBuf>,
}

#[derive(Args)]
struct JobArgs {
    /// `lex`, `grlex`, `grevlex` or a JSON order object.
    #[arg(long, default_value = "grlex")]
    order: String,
    /// Corner exponents as JSON, e.g. `[[1,1,0],[1,0,1]]`, or a file holding them.
    #[arg(long, value_name = "FILE|INLINE")]
    corners: String,
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    /// Allowed tail exponents for `--mode truncated` (JSON or file).
    #[arg(long, value_name = "FILE|INLINE")]
    dset: Option<String>,
    /// Truncation degree; must be at least the default.
    #[arg(long, value_name = "D")]
    degree_bound: Option<u32>,
    /// Direction choice for extending the family to the border.
    #[arg(long, value_enum, default_value = "smallest")]
    nu: NuArg,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON `{order, corners, basis}` (inline, a file, or `-` for stdin).
    #[arg(value_name = "FILE|INLINE")]
    input: String,
    #[command(flatten)]
    out: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gstrata: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    if let Some(k) = cli.threads {
        gstrata::par::set_max_threads(k).map_err(Error::Config)?;
    }
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::Stratum(a) => {
            let report = pipeline::run(&job(&a, exec)?)?;
            emit(&a.out, &report.to_json(), &report.to_text())?;
        }
        Command::Triples(a) => {
            let r = pipeline::triples(&job(&a, exec)?)?;
            emit(&a.out, &pipeline::to_json_string(&r), &r.to_text())?;
        }
        Command::Tangent(a) => {
            let r = pipeline::tangent(&job(&a, exec)?)?;
            emit(&a.out, &pipeline::to_json_string(&r), &r.to_text())?;
        }
        Command::Family(a) => {
            let r = FamilyReport::from_report(&pipeline::run(&job(&a, exec)?)?);
            emit(&a.out, &pipeline::to_json_string(&r), &r.to_text())?;
        }
        Command::Verify(a) => {
            let src = read_arg(&a.input, &['{'])?;
            let input: VerifyInput =
                serde_json::from_str(&src).map_err(|e| Error::Config(format!("verify input: {e}")))?;
            let r = pipeline::verify(&input, exec)?;
            let text = match &r.certificate.failure {
                None => format!("ok ({} S-pairs)\n", r.certificate.pairs_checked),
                Some(f) => format!("not a reduced Groebner basis: {}\n", serde_json::to_string(f).unwrap_or_default()),
            };
            emit(&a.out, &pipeline::to_json_string(&r), &text)?;
            return Ok(if r.ok { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn job(a: &JobArgs, exec: Exec) -> Result<JobConfig, Error> {
    let order = OrderSpec::parse(&a.order)?;
    let corners = exponents(&a.corners, "corners")?;
    let mode = match (a.mode, &a.dset) {
        (ModeArg::Truncated, Some(d)) => Mode::Truncated {
            dset: exponents(d, "dset")?,
        },
        (ModeArg::Truncated, None) => return Err(Error::Config("--mode truncated needs --dset".into())),
        (_, Some(_)) => return Err(Error::Config("--dset only applies to --mode truncated".into())),
        (ModeArg::Full, None) => Mode::Full,
        (ModeArg::Homogeneous, None) => Mode::Homogeneous,
    };
    let mut cfg = JobConfig::new(order, corners, mode);
    cfg.degree_bound = a.degree_bound;
    cfg.nu = match a.nu {
        NuArg::Smallest => NuStrategy::Smallest,
        NuArg::Largest => NuStrategy::Largest,
    };
    cfg.exec = exec;
    Ok(cfg)
}

fn exponents(arg: &str, what: &str) -> Result<Vec<Exponent>, Error> {
    let src = read_arg(arg, &['['])?;
    serde_json::from_str(&src).map_err(|e| Error::Config(format!("{what}: {e}")))
}

/// Inline text when it starts with one of `inline`, stdin for `-`, else a file.
fn read_arg(arg: &str, inline: &[char]) -> Result<String, Error> {
    let t = arg.trim_start();
    if t.starts_with(inline) {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Config(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(arg).map_err(|e| Error::Config(format!("{arg}: {e}")))
}

/// Text goes to stdout when no destination is given.
fn emit(out: &Output, json: &str, text: &str) -> Result<(), Error> {
    if out.json.is_none() && out.text.is_none() {
        return write_to(None, text);
    }
    if let Some(p) = &out.json {
        write_to(Some(p), json)?;
    }
    if let Some(p) = &out.text {
        write_to(Some(p), text)?;
    }
    Ok(())
}

fn write_to(path: Option<&PathBuf>, s: &str) -> Result<(), Error> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, s).map_err(|e| Error::Config(format!("{}: {e}", p.display()))),
        _ => io::stdout()
            .write_all(s.as_bytes())
            .map_err(|e| Error::Config(format!("stdout: {e}"))),
    }
}
