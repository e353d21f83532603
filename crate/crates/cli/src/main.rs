mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cycdec", version, about = "Exact cyclic and elementary decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Print one JSON document instead of line records.
    #[arg(long, global = true)]
    json: bool,
    /// Append rounded decimals to exact values, as comments.
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,
    /// Write to a file instead of stdout.
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
}

/// Which complex a field or rate file lives on. Defaults to the file header.
#[derive(Args, Clone, Default)]
pub struct ComplexArgs {
    /// Discrete torus, `N` or `N1xN2`.
    #[arg(long, value_name = "N|N1xN2")]
    pub torus: Option<String>,
    /// Surface file (`orientable`, `vertex`, `edge`, `face` records).
    #[arg(long, value_name = "FILE")]
    pub surface: Option<PathBuf>,
    /// Ring with N vertices.
    #[arg(long, value_name = "N")]
    pub ring: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CheckKind {
    /// Zero divergence of a weighted digraph.
    Graph,
    /// Zero mean of a lattice measure.
    Lattice,
    /// Unit row and column sums.
    Bistochastic,
    /// Membership of a field in the image of the face boundary.
    Homologous,
    /// Existence of an elementary decomposition.
    Elementary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Graph,
    Lattice,
    Birkhoff,
    Elementary,
    #[value(name = "1d")]
    OneD,
    #[value(name = "1d-heavy")]
    OneDHeavy,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property of an input file.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        input: PathBuf,
        #[command(flatten)]
        complex: ComplexArgs,
    },
    /// Decompose an input into cycles: `decompose MODE INPUT` or `decompose --mode MODE INPUT`.
    Decompose(DecomposeArgs),
    /// Split a torus field into gradient, homologous and harmonic parts.
    Hodge {
        input: PathBuf,
        #[command(flatten)]
        complex: ComplexArgs,
    },
    /// Full elementary-decomposition verdict with shift interval and diameter bound.
    Elementary {
        input: PathBuf,
        #[command(flatten)]
        complex: ComplexArgs,
    },
    /// Sample a potential on the N x N torus and write its field.
    Discretize(DiscretizeArgs),
    /// Generate a periodic random environment and its certificate.
    RandomEnv(RandomEnvArgs),
}

#[derive(Args)]
pub struct DecomposeArgs {
    /// `[MODE] INPUT`; for 1d-heavy, INPUT is `inverse-square:W`.
    #[arg(num_args = 1..=2, required = true)]
    pub positional: Vec<String>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[command(flatten)]
    pub complex: ComplexArgs,
    /// Re-check the emitted decomposition, or check FILE against INPUT instead of decomposing.
    #[arg(long, value_name = "FILE", num_args = 0..=1, require_equals = true, default_missing_value = "")]
    pub verify: Option<String>,
    /// Shift of the potential for elementary decompositions.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Parameter of the one-dimensional family.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Number of heavy-tail steps.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// How far the heavy-tail stream searches for the next atom.
    #[arg(long, default_value_t = 1_000_000)]
    pub search_limit: i64,
    /// Also list the periodic description on the infinite lattice.
    #[arg(long)]
    pub periodic: bool,
}

#[derive(Args)]
pub struct DiscretizeArgs {
    /// `zero`, `constant:C`, `band:LO:HI`, `sine`, `trig:SEED[:DEGREE]`.
    #[arg(long)]
    pub potential: String,
    #[arg(long, short)]
    pub n: usize,
    #[arg(long)]
    pub denominator: Option<i64>,
    /// Report whether this symmetric part is enough for an elementary decomposition.
    #[arg(long)]
    pub s_min: Option<String>,
    /// Also list the face samples.
    #[arg(long)]
    pub psi: bool,
}

#[derive(Args)]
pub struct RandomEnvArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long, value_name = "N|N1xN2")]
    pub torus: String,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub denominator: Option<i64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { kind, input, complex } => commands::check(kind, &input, &complex),
        Command::Decompose(args) => commands::decompose(&args),
        Command::Hodge { input, complex } => commands::hodge(&input, &complex),
        Command::Elementary { input, complex } => commands::elementary(&input, &complex),
        Command::Discretize(args) => commands::discretize(&args),
        Command::RandomEnv(args) => commands::random_env(&args),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let out = &cli.output;
    if let Err(e) = report::emit(&report, out.json, out.decimal, out.output.as_ref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if report.positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
