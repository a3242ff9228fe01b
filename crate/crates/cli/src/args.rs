use std::path::PathBuf;

use chaos_boundary::rational::parse_rational;
use chaos_boundary::{ClassLabel, Rational, SymbolSequence};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "chaosb", version, about = "Boundary of chaos for plateau maps of expanding double covers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compare two symbol sequences in the parity order of a class.
    Order {
        #[arg(long, value_parser = class)]
        class: ClassLabel,
        #[arg(value_parser = sequence)]
        s: SymbolSequence,
        #[arg(value_parser = sequence)]
        t: SymbolSequence,
    },
    /// Check whether a kneading pair is compatible.
    Compat {
        #[arg(long, value_parser = class)]
        class: ClassLabel,
        #[arg(value_parser = sequence)]
        minus: SymbolSequence,
        #[arg(value_parser = sequence)]
        plus: SymbolSequence,
    },
    /// Balanced word of rotation number p/q and its extremal shifts.
    Words {
        #[arg(long, value_parser = fraction)]
        pq: (u64, u64),
    },
    /// Anharmonic cascade periods and the replacement fixed point.
    Cascade {
        #[arg(long, value_parser = class)]
        class: ClassLabel,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Exact entropy verdict of a plateau map.
    Entropy(Point),
    /// Hausdorff dimension of the survivor set of the open map.
    Dimension {
        #[command(flatten)]
        point: Point,
        /// Also report the cylinder-count estimate at this word length.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Renormalisation boxes down to a depth.
    Boxes {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[command(flatten)]
        limits: Limits,
    },
    /// Bracket the boundary on the lines a + b = c.
    Trace {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, value_parser = rational)]
        cmin: Rational,
        #[arg(long, value_parser = rational)]
        cmax: Rational,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long, value_parser = rational, default_value = "1/4096")]
        tol: Rational,
    },
    /// Classify a boundary parameter.
    Classify {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[command(flatten)]
        limits: Limits,
    },
    /// Enclose the anharmonic point on a horizontal line.
    Anharmonic {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, value_parser = rational)]
        b: Rational,
        #[arg(long, value_parser = rational, default_value = "1/1048576")]
        tol: Rational,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CoverArgs {
    #[arg(long, value_parser = class)]
    pub class: ClassLabel,
    /// Integer slope of the canonical cover.
    #[arg(long, default_value_t = 2)]
    pub lambda: u32,
}

#[derive(Args, Debug, Clone)]
pub struct Point {
    #[command(flatten)]
    pub cover: CoverArgs,
    #[arg(long, value_parser = rational)]
    pub a: Rational,
    #[arg(long, value_parser = rational)]
    pub b: Rational,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Limits {
    /// Largest Farey denominator for class-A children.
    #[arg(long = "qmax", default_value_t = 5)]
    pub q_max: u64,
    /// Members of the infinite class-B/D family kept before truncating.
    #[arg(long = "nmax", default_value_t = 5)]
    pub n_max: usize,
}

fn class(s: &str) -> Result<ClassLabel, String> {
    s.parse().map_err(|e: chaos_boundary::Error| e.to_string())
}

fn sequence(s: &str) -> Result<SymbolSequence, String> {
    s.parse().map_err(|e: chaos_boundary::Error| e.to_string())
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn fraction(s: &str) -> Result<(u64, u64), String> {
    let (p, q) = s.split_once('/').ok_or_else(|| format!("expected p/q, got {s:?}"))?;
    let p = p.trim().parse().map_err(|e| format!("numerator: {e}"))?;
    let q = q.trim().parse().map_err(|e| format!("denominator: {e}"))?;
    Ok((p, q))
}
