use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hindex_core::corpus::InputFormat;
use hindex_core::fitting::ModelFamily;

#[derive(Debug, Parser)]
#[command(
    name = "hindex",
    version,
    about = "h-index and h_m analysis of researcher citation profiles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-researcher P, C, h, h_m table.
    Indices(IndicesArgs),
    /// Fit a power-law family to a population of profiles.
    Fit(FitArgs),
    /// Score researchers against a reference curve and rank them.
    Deviations(DeviationsArgs),
    /// Citation distribution, Lorenz curve and age profile of a citation corpus.
    Stats(StatsArgs),
    /// Expected h as a function of P for a citation corpus.
    Expected(ExpectedArgs),
    /// Generate a synthetic profiles file.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for InputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => InputFormat::Csv,
            Format::Json => InputFormat::Json,
        }
    }
}

/// Output format: explicit choice, else from the `--out` extension, else CSV.
pub fn output_format(explicit: Option<Format>, out: Option<&Path>) -> Format {
    explicit.unwrap_or_else(|| match out.map(InputFormat::from_path) {
        Some(InputFormat::Json) => Format::Json,
        _ => Format::Csv,
    })
}

#[derive(Debug, Args)]
pub struct ProfilesInput {
    /// Profiles file (CSV or JSON).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl ProfilesInput {
    pub fn format(&self) -> InputFormat {
        self.format
            .map(Into::into)
            .unwrap_or_else(|| InputFormat::from_path(&self.input))
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Output format; `.json` output paths default to JSON, everything else to CSV.
    #[arg(long, value_enum)]
    pub emit: Option<Format>,
}

impl Output {
    pub fn format(&self) -> Format {
        output_format(self.emit, self.out.as_deref())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResponseArg {
    H,
    Hm,
}

#[derive(Debug, Args)]
pub struct IndicesArgs {
    #[command(flatten)]
    pub input: ProfilesInput,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: ProfilesInput,
    #[arg(long, value_parser = parse_family, default_value = "er")]
    pub family: ModelFamily,
    /// Exponent search interval `lo,hi`; the family default when omitted.
    #[arg(long, value_parser = parse_pair::<f64>)]
    pub bounds: Option<(f64, f64)>,
    /// Index used as the response.
    #[arg(long, value_enum, default_value = "h")]
    pub response: ResponseArg,
    /// Output file for the fit JSON; standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write χ²(exponent) as CSV to this path.
    #[arg(long)]
    pub chi2_profile: Option<PathBuf>,
    /// Number of exponent values in the χ² profile.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
    pub grid: u32,
}

/// How the deviation half-width and reference curve are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaMode {
    /// Published constants with the piecewise half-width.
    Standard,
    /// Fit the population and use its prediction band.
    Fit,
    /// Published curves with a constant half-width for h and h_m.
    Constant(f64, f64),
}

impl FromStr for DeltaMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" | "standard" => Ok(DeltaMode::Standard),
            "fit" => Ok(DeltaMode::Fit),
            other => {
                let (h, hm) = match other.split_once(',') {
                    Some((a, b)) => (positive(a)?, positive(b)?),
                    None => {
                        let v = positive(other)?;
                        (v, v)
                    }
                };
                Ok(DeltaMode::Constant(h, hm))
            }
        }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!(
            "expected `paper`, `fit`, a positive number or `h,hm` numbers, got `{s}`"
        )),
    }
}

#[derive(Debug, Args)]
pub struct DeviationsArgs {
    #[command(flatten)]
    pub input: ProfilesInput,
    #[command(flatten)]
    pub output: Output,
    /// `paper` (published constants), `fit` (population fit) or a half-width
    /// (`x` for both indices, `h,hm` for each).
    #[arg(long, default_value = "paper")]
    pub delta: DeltaMode,
    /// Prediction level for `--delta fit`.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
}

#[derive(Debug, Args)]
pub struct CorpusInput {
    /// Citation corpus CSV (`paper_id,year,citations`).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Per-year citations CSV (`paper_id,cite_year,count`).
    #[arg(long)]
    pub yearly: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: CorpusInput,
    /// Directory for ccdf.csv, lorenz.csv, age_profile.csv and summary.json;
    /// sections go to standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Leave the last (partial) citation year out of the age profile.
    #[arg(long)]
    pub drop_final_year: bool,
}

#[derive(Debug, Args)]
pub struct ExpectedArgs {
    #[command(flatten)]
    pub input: CorpusInput,
    #[arg(long, default_value_t = 3000, value_parser = clap::value_parser!(u64).range(1..))]
    pub p_max: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Lotka,
    Hirsch,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "lotka")]
    pub model: ModelArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of researchers.
    #[arg(long, short, default_value_t = 300)]
    pub n: usize,
    /// Lotka exponent θ.
    #[arg(long, default_value_t = 2.0)]
    pub theta: f64,
    /// Inclusive paper-count range `lo,hi` (Lotka model).
    #[arg(long, value_parser = parse_pair::<u32>, default_value = "10,1000")]
    pub papers: (u32, u32),
    /// Largest citation count a Lotka paper can receive.
    #[arg(long, default_value_t = hindex_core::synth::DEFAULT_CITATION_CAP)]
    pub cap: u64,
    /// Hirsch model publication rate.
    #[arg(long, default_value_t = 4.0)]
    pub papers_per_year: f64,
    /// Hirsch model citation rate per paper and year.
    #[arg(long, default_value_t = 3.0)]
    pub citations_per_paper_year: f64,
    /// Inclusive career-length range `lo,hi` in years (Hirsch model).
    #[arg(long, value_parser = parse_pair::<u32>, default_value = "5,40")]
    pub career: (u32, u32),
    /// Inclusive author-count range `lo,hi`.
    #[arg(long, value_parser = parse_pair::<u32>, default_value = "1,1")]
    pub authors: (u32, u32),
    #[arg(long, default_value_t = hindex_core::synth::DEFAULT_OBSERVATION_YEAR)]
    pub observation_year: i32,
    #[command(flatten)]
    pub output: Output,
}

fn parse_family(s: &str) -> Result<ModelFamily, String> {
    s.parse().map_err(|e: hindex_core::Error| e.to_string())
}

fn parse_pair<T>(s: &str) -> Result<(T, T), String>
where
    T: FromStr + PartialOrd + Copy,
    T::Err: fmt::Display,
{
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `lo,hi`, got `{s}`"))?;
    let lo: T = a.trim().parse().map_err(|e| format!("`{a}`: {e}"))?;
    let hi: T = b.trim().parse().map_err(|e| format!("`{b}`: {e}"))?;
    if !(lo <= hi) {
        return Err(format!("lower bound exceeds upper bound in `{s}`"));
    }
    Ok((lo, hi))
}
