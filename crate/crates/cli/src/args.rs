use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nomcorr::{Modulus, PermutationOrder, SweepOptions};

#[derive(Debug, Parser)]
#[command(
    name = "nomcorr",
    version,
    about = "Correlation analysis of nominal data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chi-square test of independence with expected frequencies and Cramér V.
    Chi2(Chi2Args),
    /// Print the numeric codes of both variables.
    Code(CodeArgs),
    /// Correlation coefficient, swept over every phase assignment.
    Corr(CorrArgs),
    /// Least-squares models of variable 2 on variable 1 and their correlations.
    Model(ModelArgs),
    /// Drop the fewest records that remove all equal-cardinality classes.
    #[command(name = "fix-ties")]
    FixTies(FixTiesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// One `v1,v2` pair per line after a header row.
    Records,
    /// Column labels in the first row, row labels in the first column.
    Contingency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Lex,
    Heap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModulusArg {
    Rank,
    Cardinality,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Input CSV file.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = InputFormat::Records)]
    pub format: InputFormat,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub out: OutputFormat,

    /// Decimals shown in text and CSV output.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=12))]
    pub decimals: u8,

    /// Treat the second column as variable 1 and the first as variable 2.
    #[arg(long)]
    pub swap: bool,

    /// Enumeration order of phase assignments.
    #[arg(long, value_enum, default_value_t = Order::Lex)]
    pub order: Order,

    /// Code modulus: tied rank or plain cardinality.
    #[arg(long, value_enum, default_value_t = ModulusArg::Rank)]
    pub modulus: ModulusArg,
}

impl CommonArgs {
    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            order: match self.order {
                Order::Lex => PermutationOrder::Lexicographic,
                Order::Heap => PermutationOrder::Heap,
            },
            modulus: match self.modulus {
                ModulusArg::Rank => Modulus::Rank,
                ModulusArg::Cardinality => Modulus::Cardinality,
            },
        }
    }

    pub fn decimals(&self) -> usize {
        self.decimals as usize
    }
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let alpha: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(format!("{alpha} is outside (0, 1)"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct Chi2Args {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Significance level.
    #[arg(long, default_value_t = 0.1, value_parser = parse_alpha)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Emit variable 1 once per phase assignment instead of the identity only.
    #[arg(long)]
    pub all_permutations: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CorrArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Write the coefficients and their center as CSV points.
    #[arg(long, value_name = "PATH")]
    pub emit_plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Polynomial degree; defaults to one less than the number of classes.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub degree: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct FixTiesArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Variable whose ties are broken.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub variable: u8,

    /// Write the corrected records here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Write the removal log here instead of stderr.
    #[arg(long, value_name = "PATH")]
    pub log: Option<PathBuf>,
}
