#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde::Serialize;

use hindex_core::citestats::{
    age_profile, ccdf, expected_h_curve, lorenz, write_age_profile_csv, write_ccdf_csv,
    write_expected_h_csv, write_lorenz_csv,
};
use hindex_core::corpus::{
    apply_exclusions, ingest_profiles, read_citation_corpus, write_profiles_csv,
    write_profiles_json, Corpus,
};
use hindex_core::deviation::{
    deviation_report, write_deviation_csv, HalfwidthRule, ReferenceCurve,
};
use hindex_core::fitting::{
    chi2_profile, fit, linear_grid, points_from_corpus, FitResult, ModelFamily, PredictionBand,
    Response,
};
use hindex_core::indices::{index_set, write_index_csv};
use hindex_core::synth::{generate, CareerModel, GeneratorConfig};

use args::{
    Cli, Command, CorpusInput, DeltaMode, DeviationsArgs, ExpectedArgs, FitArgs, Format,
    IndicesArgs, ModelArg, ProfilesInput, ResponseArg, SimulateArgs, StatsArgs,
};

/// Below this many profiles a fitted reference curve is unreliable.
const MIN_FIT_PROFILES: usize = 30;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hindex: error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Indices(a) => cmd_indices(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Deviations(a) => cmd_deviations(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Expected(a) => cmd_expected(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

fn load_profiles(input: &ProfilesInput) -> Result<Corpus> {
    Ok(ingest_profiles(&input.input, input.format())?)
}

fn load_corpus(input: &CorpusInput) -> Result<hindex_core::corpus::CitationCorpus> {
    Ok(read_citation_corpus(&input.input, input.yearly.as_deref())?)
}

/// Writes `bytes` to `out`, or to standard output.
fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn report_exclusions(corpus: &Corpus) -> Corpus {
    let (kept, log) = apply_exclusions(corpus);
    for record in &log {
        eprintln!(
            "hindex: excluded {}: {}",
            record.researcher_id, record.reason
        );
    }
    kept
}

fn cmd_indices(args: IndicesArgs) -> Result<()> {
    let corpus = load_profiles(&args.input)?;
    let mut sets = Vec::with_capacity(corpus.len());
    for profile in &corpus.profiles {
        if profile.papers.is_empty() {
            eprintln!("hindex: skipped {}: no papers", profile.researcher_id);
            continue;
        }
        sets.push(index_set(profile).with_context(|| profile.researcher_id.clone())?);
    }
    let bytes = match args.output.format() {
        Format::Json => json_bytes(&sets)?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_index_csv(&sets, &mut buf)?;
            buf
        }
    };
    emit(args.output.out.as_deref(), &bytes)
}

#[derive(Serialize)]
struct FitReport<'a> {
    #[serde(flatten)]
    fit: &'a FitResult,
    response: &'static str,
    bounds: (f64, f64),
    /// Glänzel-Schubert fits only: exponents of P and C in `h ∝ P^a C^b`.
    power_form: Option<(f64, f64)>,
    excluded: usize,
}

fn cmd_fit(args: FitArgs) -> Result<()> {
    let corpus = load_profiles(&args.input)?;
    let kept = report_exclusions(&corpus);
    let (response, label) = match args.response {
        ResponseArg::H => (Response::H, "h"),
        ResponseArg::Hm => (Response::Hm, "h_m"),
    };
    let points = points_from_corpus(&kept, response);
    let bounds = args.bounds.unwrap_or_else(|| args.family.default_bounds());
    let result = fit(&points, args.family, bounds)?;
    if result.degenerate {
        eprintln!(
            "hindex: warning: degenerate fit, all responses equal and exponent pinned at {}",
            result.exponent
        );
    }
    if let Some(path) = &args.chi2_profile {
        let grid = linear_grid(bounds.0, bounds.1, args.grid as usize);
        let mut text = String::from("exponent,chi2\n");
        for (x, chi2) in chi2_profile(&points, args.family, &grid)? {
            text.push_str(&format!("{x:.6},{chi2:.6}\n"));
        }
        emit(Some(path), text.as_bytes())?;
    }
    let report = FitReport {
        fit: &result,
        response: label,
        bounds,
        power_form: result.gs_power_form(),
        excluded: corpus.len() - kept.len(),
    };
    emit(args.out.as_deref(), &json_bytes(&report)?)
}

fn fitted_curve(kept: &Corpus, response: Response, level: f64) -> Result<ReferenceCurve> {
    let family = ModelFamily::EggheRousseau;
    let points = points_from_corpus(kept, response);
    let result = fit(&points, family, family.default_bounds())?;
    let band = PredictionBand::new(&result, &points, level)?;
    Ok(ReferenceCurve::from_band(band)?)
}

fn cmd_deviations(args: DeviationsArgs) -> Result<()> {
    let corpus = load_profiles(&args.input)?;
    let (curve_h, curve_hm) = match args.delta {
        DeltaMode::Standard => (ReferenceCurve::standard_h(), ReferenceCurve::standard_hm()),
        DeltaMode::Constant(dh, dhm) => (
            ReferenceCurve::standard_h().with_halfwidth(HalfwidthRule::Constant(dh)),
            ReferenceCurve::standard_hm().with_halfwidth(HalfwidthRule::Constant(dhm)),
        ),
        DeltaMode::Fit => {
            if !(args.level > 0.0 && args.level < 1.0) {
                bail!("--level {} outside (0, 1)", args.level);
            }
            let kept = report_exclusions(&corpus);
            if kept.len() < MIN_FIT_PROFILES {
                eprintln!(
                    "hindex: warning: fitting the reference curve on {} profiles (fewer than {MIN_FIT_PROFILES})",
                    kept.len()
                );
            }
            (
                fitted_curve(&kept, Response::H, args.level).context("fitting h")?,
                fitted_curve(&kept, Response::Hm, args.level).context("fitting h_m")?,
            )
        }
    };
    let reports = deviation_report(&corpus, &curve_h, &curve_hm)?;
    let bytes = match args.output.format() {
        Format::Json => json_bytes(&reports)?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_deviation_csv(&reports, &mut buf)?;
            buf
        }
    };
    emit(args.output.out.as_deref(), &bytes)
}

#[derive(Serialize)]
struct StatsSummary {
    n_items: u64,
    total_citations: u64,
    max_citations: u64,
    publication_year: Option<i32>,
    gini: Option<f64>,
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let corpus = load_corpus(&args.input)?;
    let dist = ccdf(&corpus)?;
    let total: u64 = corpus.items.iter().map(|p| p.citations).sum();
    // The Lorenz curve is undefined when nothing is cited.
    let curve = if total > 0 {
        Some(lorenz(&corpus)?)
    } else {
        None
    };
    let ages = if args.input.yearly.is_some() {
        Some(age_profile(&corpus, args.drop_final_year)?)
    } else {
        if args.drop_final_year {
            eprintln!("hindex: warning: --drop-final-year has no effect without --yearly");
        }
        None
    };

    let mut sections: Vec<(&str, Vec<u8>)> = Vec::new();
    let mut buf = Vec::new();
    write_ccdf_csv(&dist, &mut buf)?;
    sections.push(("ccdf.csv", buf));
    if let Some(curve) = &curve {
        let mut buf = Vec::new();
        write_lorenz_csv(curve, &mut buf)?;
        sections.push(("lorenz.csv", buf));
    }
    if let Some(ages) = &ages {
        let mut buf = Vec::new();
        write_age_profile_csv(ages, &mut buf)?;
        sections.push(("age_profile.csv", buf));
    }
    let summary = StatsSummary {
        n_items: dist.n_items,
        total_citations: total,
        max_citations: dist.max_citations,
        publication_year: corpus.publication_year,
        gini: curve.as_ref().map(|c| c.gini()),
    };
    sections.push(("summary.json", json_bytes(&summary)?));

    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (name, bytes) in &sections {
                emit(Some(&dir.join(name)), bytes)?;
            }
            Ok(())
        }
        None => {
            let mut text = Vec::new();
            for (i, (name, bytes)) in sections.iter().enumerate() {
                if i > 0 {
                    text.push(b'\n');
                }
                text.extend_from_slice(format!("# {name}\n").as_bytes());
                text.extend_from_slice(bytes);
            }
            emit(None, &text)
        }
    }
}

fn cmd_expected(args: ExpectedArgs) -> Result<()> {
    let corpus = load_corpus(&args.input)?;
    let dist = ccdf(&corpus)?;
    let curve = expected_h_curve(&dist, args.p_max);
    let mut buf = Vec::new();
    write_expected_h_csv(&curve, &mut buf)?;
    emit(args.out.as_deref(), &buf)
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let model = match args.model {
        ModelArg::Lotka => CareerModel::Lotkaian {
            papers: args.papers,
            theta: args.theta,
            citation_cap: args.cap,
        },
        ModelArg::Hirsch => CareerModel::HirschConstantRate {
            papers_per_year: args.papers_per_year,
            citations_per_paper_year: args.citations_per_paper_year,
            career_years: args.career,
        },
    };
    let config = GeneratorConfig {
        seed: args.seed,
        n_researchers: args.n,
        model,
        authors: args.authors,
        observation_year: args.observation_year,
    };
    let corpus = generate(&config)?;
    let mut buf = Vec::new();
    match args.output.format() {
        Format::Json => write_profiles_json(&corpus, &mut buf)?,
        Format::Csv => write_profiles_csv(&corpus, &mut buf)?,
    }
    emit(args.output.out.as_deref(), &buf)
}
