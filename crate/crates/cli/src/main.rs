//! `sumprodlab`: run seeded sum-product experiments and write CSV or JSONL.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sumprodlab_core::lab::{
    self, parse_k_list, parse_primes, Experiment, ExperimentConfig, Format, MethodChoice,
};
use sumprodlab_core::sumprod::Signs;

const EXIT_VALIDATION: u8 = 1;
const EXIT_ALL_FAILED: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "sumprodlab",
    version,
    about = "Exact sum-product experiments over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sum of the energy spectrum against its closed form.
    Bkt(Common),
    /// Every E(A, ξA) for ξ ≠ 0, one row per ξ.
    Spectrum(Common),
    /// Solution counts of (a±b)(c±d) = (a'±b')(c'±d').
    Count(Common),
    /// Coverage of (A±B)(C±D), solution counts and identity flags.
    Sweep(Common),
    /// Dyadic census of the spectrum for each K.
    Census(Common),
    /// Sums of E(A, xA) over x ∈ X against their bound expressions.
    Rudnev(Common),
    /// Sums of multiplicative energies E(A, A + x) over x ∈ X.
    Murphy(Common),
    /// Small/large split of the spectrum deviation sum for each K.
    Split(Common),
    /// Fourth moment of multiplicative character sums over A - A.
    Charmoment(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Prime or comma-separated list of primes.
    #[arg(long = "p", value_name = "LIST")]
    p: String,
    /// random | interval[:a0] | geometric[:r[,a0]] | subgroup[:d] | elements:x,y,...
    #[arg(long, default_value = "random")]
    family: String,
    /// Absolute size n, or alpha:α[,const:C] for n = ceil(C p^α).
    #[arg(long, default_value = "alpha:5/8,const:1")]
    size: String,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sign pattern of (A±B)(C±D).
    #[arg(long, default_value = "mm")]
    signs: String,
    /// Use random affine images of A for B, C and D.
    #[arg(long)]
    affine: bool,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Threshold list, e.g. 2,4,8 or 3/2,auto.
    #[arg(long = "K", value_name = "LIST")]
    k: Option<String>,
    /// first:m | random:m | all | large:K
    #[arg(long = "X", value_name = "RULE", default_value = "all")]
    x: String,
    /// brute | repfn | transform | all
    #[arg(long, default_value = "transform")]
    method: String,
}

impl Command {
    fn split(self) -> (Experiment, Common) {
        match self {
            Command::Bkt(c) => (Experiment::Bkt, c),
            Command::Spectrum(c) => (Experiment::Spectrum, c),
            Command::Count(c) => (Experiment::Count, c),
            Command::Sweep(c) => (Experiment::Sweep, c),
            Command::Census(c) => (Experiment::Census, c),
            Command::Rudnev(c) => (Experiment::Rudnev, c),
            Command::Murphy(c) => (Experiment::Murphy, c),
            Command::Split(c) => (Experiment::Split, c),
            Command::Charmoment(c) => (Experiment::CharMoment, c),
        }
    }
}

fn build_config(c: &Common) -> sumprodlab_core::Result<(ExperimentConfig, Format)> {
    let config = ExperimentConfig {
        primes: parse_primes(&c.p)?,
        family: c.family.parse()?,
        size: c.size.parse()?,
        trials: c.trials,
        base_seed: c.seed,
        signs: c.signs.parse::<Signs>()?,
        affine: c.affine,
        k_list: c
            .k
            .as_deref()
            .map(parse_k_list)
            .transpose()?
            .unwrap_or_default(),
        x_rule: c.x.parse()?,
        method: c.method.parse::<MethodChoice>()?,
    };
    Ok((config, c.format.parse()?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (experiment, common) = cli.command.split();
    let (config, format) = match build_config(&common) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let table = match lab::run(experiment, &config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let written = match &common.out {
        Some(path) => lab::emit(&table, path, format),
        None => table.render(format).and_then(|text| {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                // A closed pipe (e.g. `| head`) is not an error for us.
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_VALIDATION);
    }
    if table.all_failed() {
        eprintln!("error: every trial failed; see the error column");
        return ExitCode::from(EXIT_ALL_FAILED);
    }
    ExitCode::SUCCESS
}
