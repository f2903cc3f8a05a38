//! Population-level power-law fits of h against P and C.
//!
//! Each model family predicts `h = amplitude * f(P, C; exponent)`. For a fixed
//! exponent the least-squares amplitude has the closed form
//! `Σ h f / Σ f²`, so fitting reduces to a bounded one-dimensional search over
//! the exponent. Residuals are taken on the linear scale.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::indices::index_set;
use crate::optimize::grid_then_golden;
use crate::quantile::student_t_quantile;

pub const GRID_POINTS: usize = 64;
/// Width of the final exponent bracket. Finer than strictly needed so the
/// amplitude of noiseless data is also recovered to better than 1e-6.
pub const EXPONENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelFamily {
    /// `h ∝ C^(1/α)`
    #[serde(rename = "hirsch")]
    Hirsch,
    /// `h ∝ P^(1/α)`
    #[serde(rename = "er")]
    EggheRousseau,
    /// `h ∝ P^(1/(α+1)) (C/P)^(α/(α+1))`
    #[serde(rename = "gs")]
    GlanzelSchubert,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 3] = [
        ModelFamily::Hirsch,
        ModelFamily::EggheRousseau,
        ModelFamily::GlanzelSchubert,
    ];

    pub fn predictor(self, papers: f64, citations: f64, exponent: f64) -> f64 {
        match self {
            ModelFamily::Hirsch => citations.powf(1.0 / exponent),
            ModelFamily::EggheRousseau => papers.powf(1.0 / exponent),
            ModelFamily::GlanzelSchubert => {
                let k = exponent + 1.0;
                papers.powf(1.0 / k) * (citations / papers).powf(exponent / k)
            }
        }
    }

    /// Derivative of [`predictor`](Self::predictor) with respect to the exponent.
    pub fn predictor_slope(self, papers: f64, citations: f64, exponent: f64) -> f64 {
        let f = self.predictor(papers, citations, exponent);
        match self {
            ModelFamily::Hirsch => -f * citations.ln() / (exponent * exponent),
            ModelFamily::EggheRousseau => -f * papers.ln() / (exponent * exponent),
            ModelFamily::GlanzelSchubert => {
                let k = exponent + 1.0;
                f * ((citations / papers).ln() - papers.ln()) / (k * k)
            }
        }
    }

    pub fn default_bounds(self) -> (f64, f64) {
        match self {
            ModelFamily::Hirsch | ModelFamily::EggheRousseau => (1.01, 10.0),
            ModelFamily::GlanzelSchubert => (0.05, 10.0),
        }
    }

    pub fn uses_papers(self) -> bool {
        !matches!(self, ModelFamily::Hirsch)
    }

    pub fn uses_citations(self) -> bool {
        !matches!(self, ModelFamily::EggheRousseau)
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelFamily::Hirsch => "hirsch",
            ModelFamily::EggheRousseau => "er",
            ModelFamily::GlanzelSchubert => "gs",
        })
    }
}

impl FromStr for ModelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hirsch" | "h" => Ok(ModelFamily::Hirsch),
            "er" | "egghe-rousseau" | "eggherousseau" => Ok(ModelFamily::EggheRousseau),
            "gs" | "glanzel-schubert" | "glanzelschubert" => Ok(ModelFamily::GlanzelSchubert),
            other => Err(Error::InvalidInput(format!(
                "unknown model family `{other}`"
            ))),
        }
    }
}

/// One researcher as seen by the fit: `(P, C, h)`. `h` is real so the same
/// machinery fits h_m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub papers: f64,
    pub citations: f64,
    pub h: f64,
}

impl Point {
    pub fn new(papers: f64, citations: f64, h: f64) -> Self {
        Self {
            papers,
            citations,
            h,
        }
    }
}

/// Which index a population of points should carry as its response.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Response {
    H,
    Hm,
}

/// Turn a corpus into fit points, skipping profiles whose response is zero.
pub fn points_from_corpus(corpus: &Corpus, response: Response) -> Vec<Point> {
    corpus
        .profiles
        .iter()
        .filter_map(|p| index_set(p).ok())
        .filter_map(|s| {
            let h = match response {
                Response::H => s.h as f64,
                Response::Hm => s.h_m,
            };
            (h > 0.0 && s.citations > 0).then(|| Point::new(s.papers as f64, s.citations as f64, h))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub family: ModelFamily,
    pub amplitude: f64,
    pub exponent: f64,
    pub chi2: f64,
    /// `None` when ln h or ln f has no variance.
    pub r_loglog: Option<f64>,
    pub n: usize,
    pub residual_sd: f64,
    /// All responses equal and the exponent pinned to a search bound.
    pub degenerate: bool,
}

impl FitResult {
    pub fn predict(&self, papers: f64, citations: f64) -> f64 {
        self.amplitude * self.family.predictor(papers, citations, self.exponent)
    }

    /// The Glänzel-Schubert fit rewritten as `h ∝ P^a C^b`.
    pub fn gs_power_form(&self) -> Option<(f64, f64)> {
        (self.family == ModelFamily::GlanzelSchubert).then(|| {
            let k = self.exponent + 1.0;
            ((1.0 - self.exponent) / k, self.exponent / k)
        })
    }
}

fn check_points(points: &[Point], min: usize) -> Result<()> {
    if points.len() < min {
        return Err(Error::TooFewPoints {
            needed: min,
            got: points.len(),
        });
    }
    for p in points {
        if !(p.papers >= 1.0 && p.citations >= 1.0 && p.h > 0.0 && p.h.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "fit point (P={}, C={}, h={}) needs P >= 1, C >= 1, h > 0",
                p.papers, p.citations, p.h
            )));
        }
    }
    Ok(())
}

/// Sorted copy so every accumulation below runs in one canonical order,
/// independent of how the caller ordered the population.
fn canonical(points: &[Point]) -> Vec<Point> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| {
        a.papers
            .total_cmp(&b.papers)
            .then(a.citations.total_cmp(&b.citations))
            .then(a.h.total_cmp(&b.h))
    });
    sorted
}

/// Closed-form least-squares amplitude and the resulting χ² for a fixed exponent.
pub fn optimal_amplitude(points: &[Point], family: ModelFamily, exponent: f64) -> (f64, f64) {
    let mut hf = 0.0;
    let mut ff = 0.0;
    for p in points {
        let f = family.predictor(p.papers, p.citations, exponent);
        hf += p.h * f;
        ff += f * f;
    }
    let amplitude = if ff > 0.0 { hf / ff } else { 0.0 };
    (amplitude, chi2_at(points, family, amplitude, exponent))
}

pub fn chi2_at(points: &[Point], family: ModelFamily, amplitude: f64, exponent: f64) -> f64 {
    points
        .iter()
        .map(|p| {
            let r = p.h - amplitude * family.predictor(p.papers, p.citations, exponent);
            r * r
        })
        .sum()
}

/// Least-squares fit of `family` over `exponent_bounds`: a 64-point scan
/// followed by golden-section refinement.
pub fn fit(
    points: &[Point],
    family: ModelFamily,
    exponent_bounds: (f64, f64),
) -> Result<FitResult> {
    check_points(points, 3)?;
    let (lo, hi) = exponent_bounds;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "exponent bounds ({lo}, {hi}) must satisfy 0 < lo < hi"
        )));
    }
    let pts = canonical(points);
    let objective = |x: f64| optimal_amplitude(&pts, family, x).1;
    let (exponent, _) = grid_then_golden(objective, lo, hi, GRID_POINTS, EXPONENT_TOL);
    let (amplitude, chi2) = optimal_amplitude(&pts, family, exponent);
    let n = pts.len();

    let all_equal = pts.iter().all(|p| p.h == pts[0].h);
    let pinned = (exponent - lo).abs() < 1e-6 || (hi - exponent).abs() < 1e-6;

    let mut result = FitResult {
        family,
        amplitude,
        exponent,
        chi2,
        r_loglog: None,
        n,
        residual_sd: (chi2 / (n - 2) as f64).sqrt(),
        degenerate: all_equal && pinned,
    };
    result.r_loglog = loglog_correlation(&pts, &result).ok();
    Ok(result)
}

fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    // Relative threshold: a constant column can still leave rounding residue.
    let scale_x = xs.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1.0);
    let scale_y = ys.iter().map(|y| y.abs()).fold(0.0, f64::max).max(1.0);
    if sxx <= 1e-24 * scale_x * scale_x * n {
        return Err(Error::ZeroVariance("model predictor"));
    }
    if syy <= 1e-24 * scale_y * scale_y * n {
        return Err(Error::ZeroVariance("h"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson correlation of `ln f` (at the fitted exponent) against `ln h`.
pub fn loglog_correlation(points: &[Point], fit: &FitResult) -> Result<f64> {
    check_points(points, 2)?;
    let pts = canonical(points);
    let xs: Vec<f64> = pts
        .iter()
        .map(|p| {
            fit.family
                .predictor(p.papers, p.citations, fit.exponent)
                .ln()
        })
        .collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.h.ln()).collect();
    pearson(&xs, &ys)
}

/// χ² with the optimal amplitude at each exponent in `grid`.
pub fn chi2_profile(
    points: &[Point],
    family: ModelFamily,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    check_points(points, 3)?;
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty exponent grid".into()));
    }
    if let Some(&bad) = grid.iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "grid exponent {bad} must be positive"
        )));
    }
    let pts = canonical(points);
    Ok(grid
        .iter()
        .map(|&x| (x, optimal_amplitude(&pts, family, x).1))
        .collect())
}

/// Evenly spaced grid of `n` exponents on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Where a prediction interval is evaluated. Families that ignore P or C
/// ignore the corresponding coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regressor {
    pub papers: f64,
    pub citations: f64,
}

impl Regressor {
    pub fn new(papers: f64, citations: f64) -> Self {
        Self { papers, citations }
    }

    /// For the Egghe-Rousseau family, which depends on P only.
    pub fn papers(papers: f64) -> Self {
        Self {
            papers,
            citations: f64::NAN,
        }
    }
}

/// Prediction interval around a fitted curve, from the first-order
/// linearisation in (amplitude, exponent) at the optimum:
///
/// `Δ(x₀) = t((1+level)/2, n-2) · s · sqrt(1 + 1/n + g₀ᵀ (JᵀJ)⁻¹ g₀)`
///
/// where the rows of `J` and `g₀` are `(f, amplitude · ∂f/∂exponent)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionBand {
    pub fit: FitResult,
    pub level: f64,
    pub t_quantile: f64,
    /// Inverse of `JᵀJ`, row-major `[[a, b], [b, d]]`.
    inverse_normal: [f64; 3],
}

impl PredictionBand {
    pub fn new(fit: &FitResult, points: &[Point], level: f64) -> Result<Self> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::InvalidInput(format!("level {level} outside (0, 1)")));
        }
        if points.len() <= 2 {
            return Err(Error::TooFewPoints {
                needed: 3,
                got: points.len(),
            });
        }
        check_points(points, 3)?;
        let pts = canonical(points);
        let (mut s_ff, mut s_fg, mut s_gg) = (0.0, 0.0, 0.0);
        for p in &pts {
            let (f, g) = design_row(fit, p.papers, p.citations);
            s_ff += f * f;
            s_fg += f * g;
            s_gg += g * g;
        }
        let det = s_ff * s_gg - s_fg * s_fg;
        if !(det > 1e-12 * s_ff * s_gg) {
            return Err(Error::InvalidInput(
                "singular design: the predictor does not vary across the population".into(),
            ));
        }
        let df = (pts.len() - 2) as f64;
        Ok(Self {
            fit: fit.clone(),
            level,
            t_quantile: student_t_quantile((1.0 + level) / 2.0, df),
            inverse_normal: [s_gg / det, -s_fg / det, s_ff / det],
        })
    }

    pub fn leverage(&self, at: Regressor) -> f64 {
        let (f, g) = design_row(&self.fit, at.papers, at.citations);
        let [a, b, d] = self.inverse_normal;
        f * f * a + 2.0 * f * g * b + g * g * d
    }

    pub fn halfwidth(&self, at: Regressor) -> f64 {
        let n = self.fit.n as f64;
        self.t_quantile * self.fit.residual_sd * (1.0 + 1.0 / n + self.leverage(at)).sqrt()
    }

    pub fn centre(&self, at: Regressor) -> f64 {
        self.fit.predict(at.papers, at.citations)
    }
}

fn design_row(fit: &FitResult, papers: f64, citations: f64) -> (f64, f64) {
    (
        fit.family.predictor(papers, citations, fit.exponent),
        fit.amplitude * fit.family.predictor_slope(papers, citations, fit.exponent),
    )
}

/// Half-width of the `level` prediction interval of `fit` at `at`.
pub fn prediction_halfwidth(
    fit: &FitResult,
    points: &[Point],
    at: Regressor,
    level: f64,
) -> Result<f64> {
    if (fit.family.uses_papers() && !(at.papers >= 1.0))
        || (fit.family.uses_citations() && !(at.citations >= 1.0))
    {
        return Err(Error::InvalidInput(format!(
            "the {} family needs P >= 1 and C >= 1 where it uses them",
            fit.family
        )));
    }
    Ok(PredictionBand::new(fit, points, level)?.halfwidth(at))
}
