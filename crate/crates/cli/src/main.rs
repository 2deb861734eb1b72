use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use perfectoid_core::config::{GlobalConfig, OutputFormat};
use perfectoid_core::report::{emit, error_json};
use perfectoid_core::Result;

mod cmd;

/// Finite-precision workbench for perfectoid fields, Witt vectors, tilting
/// and toy nonarchimedean spectra.
///
/// Norm arguments are written as an exponent `E` meaning `p^(-E)` (for
/// example `3/2`), or `zero`. JSON arguments may be given inline or as
/// `@path`.
#[derive(Parser, Debug)]
#[command(name = "perfectoid", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// JSON configuration file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    p: Option<u32>,
    #[arg(long, global = true)]
    witt_len: Option<usize>,
    /// t-adic precision N as a rational exponent.
    #[arg(long, global = true)]
    t_prec: Option<String>,
    #[arg(long, global = true)]
    max_spectral_n: Option<u64>,
    #[arg(long, global = true)]
    term_cap: Option<usize>,
    /// Directory for Witt polynomial tables (else PERFECTOID_WITT_CACHE).
    #[arg(long, global = true)]
    witt_cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Permit primes and Witt lengths outside the default-supported range.
    #[arg(long, global = true)]
    allow_unsupported: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value-group arithmetic.
    Values(cmd::ValuesArgs),
    /// Series over F_p((t^(1/p^inf))).
    Charp(cmd::CharpArgs),
    #[command(subcommand)]
    Witt(cmd::WittCmd),
    #[command(subcommand)]
    Untilt(cmd::UntiltCmd),
    #[command(subcommand)]
    Gauss(cmd::GaussCmd),
    #[command(subcommand)]
    Tilt(cmd::TiltCmd),
    #[command(subcommand)]
    Zariski(cmd::ZariskiCmd),
    #[command(subcommand)]
    Spectra(cmd::SpectraCmd),
    /// Runs the acceptance suite and prints one line per criterion.
    Selftest,
}

fn load_config(g: &GlobalArgs) -> Result<GlobalConfig> {
    let mut cfg = match &g.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => GlobalConfig::default(),
    };
    if let Some(p) = g.p {
        cfg.p = p;
    }
    if let Some(n) = g.witt_len {
        cfg.witt_len = n;
    }
    if let Some(s) = &g.t_prec {
        cfg.t_prec = Some(cmd::exp_arg(cfg.p, s)?.to_json());
    }
    if let Some(m) = g.max_spectral_n {
        cfg.max_spectral_n = m;
    }
    if let Some(c) = g.term_cap {
        cfg.term_cap = c;
    }
    if let Some(d) = &g.witt_cache_dir {
        cfg.witt_cache_dir = Some(d.clone());
    }
    if let Some(f) = g.format {
        cfg.output_format = match f {
            Format::Json => OutputFormat::Json,
            Format::Tsv => OutputFormat::Tsv,
        };
    }
    cfg.allow_unsupported |= g.allow_unsupported;
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = load_config(&cli.global)?;
    let out = match cli.command {
        Command::Values(a) => cmd::values(&cfg, a)?,
        Command::Charp(a) => cmd::charp(&cfg, a)?,
        Command::Witt(c) => cmd::witt(&cfg, c)?,
        Command::Untilt(c) => cmd::untilt(&cfg, c)?,
        Command::Gauss(c) => cmd::gauss(&cfg, c)?,
        Command::Tilt(c) => cmd::tilt(&cfg, c)?,
        Command::Zariski(c) => cmd::zariski(&cfg, c)?,
        Command::Spectra(c) => cmd::spectra(&cfg, c)?,
        Command::Selftest => {
            let rep = perfectoid_core::acceptance::run_all(&cfg)?;
            print!("{}", rep.render());
            return Ok(if rep.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    };
    print!("{}", emit(&out, cfg.output_format));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            println!("{}", error_json(&e));
            ExitCode::from(1)
        }
    }
}
