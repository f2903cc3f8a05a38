//! Signed deviation of a researcher's h (or h_m) from a reference
//! Egghe-Rousseau curve, in units of the prediction-interval half-width:
//!
//! `δ = (h - amplitude · P^(1/exponent)) / Δ(P)`

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::fitting::{ModelFamily, PredictionBand, Regressor};
use crate::indices::index_set;

/// Profiles with P above this use the wide half-width of the piecewise rule.
pub const PIECEWISE_THRESHOLD: u64 = 1000;

pub const STANDARD_H_AMPLITUDE: f64 = 3.1;
pub const STANDARD_H_EXPONENT: f64 = 2.20;
pub const STANDARD_HM_AMPLITUDE: f64 = 1.05;
pub const STANDARD_HM_EXPONENT: f64 = 1.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexKind {
    H,
    Hm,
}

/// Published half-widths: 16 (h) / 10 (h_m) up to P = 1000, 19 / 12 above.
pub fn piecewise_halfwidth(papers: u64, kind: IndexKind) -> f64 {
    let wide = papers > PIECEWISE_THRESHOLD;
    match (kind, wide) {
        (IndexKind::H, false) => 16.0,
        (IndexKind::H, true) => 19.0,
        (IndexKind::Hm, false) => 10.0,
        (IndexKind::Hm, true) => 12.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HalfwidthRule {
    Constant(f64),
    Piecewise(IndexKind),
    /// Evaluate a live prediction band at each P.
    Band(Box<PredictionBand>),
}

impl HalfwidthRule {
    pub fn at(&self, papers: u64) -> f64 {
        match self {
            HalfwidthRule::Constant(d) => *d,
            HalfwidthRule::Piecewise(kind) => piecewise_halfwidth(papers, *kind),
            HalfwidthRule::Band(band) => band.halfwidth(Regressor::papers(papers as f64)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCurve {
    pub amplitude: f64,
    pub exponent: f64,
    pub halfwidth: HalfwidthRule,
}

impl ReferenceCurve {
    pub fn new(amplitude: f64, exponent: f64, halfwidth: HalfwidthRule) -> Result<Self> {
        if !(amplitude > 0.0 && exponent > 0.0) {
            return Err(Error::InvalidInput(format!(
                "reference curve needs positive amplitude and exponent, got ({amplitude}, {exponent})"
            )));
        }
        Ok(Self {
            amplitude,
            exponent,
            halfwidth,
        })
    }

    /// `3.1 · P^(1/2.20)` with the piecewise h half-width.
    pub fn standard_h() -> Self {
        Self {
            amplitude: STANDARD_H_AMPLITUDE,
            exponent: STANDARD_H_EXPONENT,
            halfwidth: HalfwidthRule::Piecewise(IndexKind::H),
        }
    }

    /// `1.05 · P^(1/1.95)` with the piecewise h_m half-width.
    pub fn standard_hm() -> Self {
        Self {
            amplitude: STANDARD_HM_AMPLITUDE,
            exponent: STANDARD_HM_EXPONENT,
            halfwidth: HalfwidthRule::Piecewise(IndexKind::Hm),
        }
    }

    /// Curve and live half-width from an Egghe-Rousseau population fit.
    pub fn from_band(band: PredictionBand) -> Result<Self> {
        if band.fit.family != ModelFamily::EggheRousseau {
            return Err(Error::InvalidInput(format!(
                "reference curve must come from an Egghe-Rousseau fit, got {}",
                band.fit.family
            )));
        }
        Self::new(
            band.fit.amplitude,
            band.fit.exponent,
            HalfwidthRule::Band(Box::new(band)),
        )
    }

    pub fn with_halfwidth(mut self, halfwidth: HalfwidthRule) -> Self {
        self.halfwidth = halfwidth;
        self
    }

    pub fn value(&self, papers: u64) -> f64 {
        self.amplitude * (papers as f64).powf(1.0 / self.exponent)
    }

    pub fn halfwidth(&self, papers: u64) -> f64 {
        self.halfwidth.at(papers)
    }
}

fn delta(value: f64, papers: u64, curve: &ReferenceCurve) -> Result<f64> {
    if papers < 1 {
        return Err(Error::InvalidInput("P must be at least 1".into()));
    }
    let width = curve.halfwidth(papers);
    if !(width > 0.0) {
        return Err(Error::NonPositiveHalfwidth(width));
    }
    Ok((value - curve.value(papers)) / width)
}

pub fn delta_h(h: u64, papers: u64, curve: &ReferenceCurve) -> Result<f64> {
    delta(h as f64, papers, curve)
}

pub fn delta_h_m(h_m: f64, papers: u64, curve: &ReferenceCurve) -> Result<f64> {
    delta(h_m, papers, curve)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub researcher_id: String,
    #[serde(rename = "P")]
    pub papers: u64,
    #[serde(rename = "C")]
    pub citations: u64,
    pub h: u64,
    pub h_m: f64,
    pub delta_h: f64,
    pub delta_h_m: f64,
    pub halfwidth_h: f64,
    pub halfwidth_h_m: f64,
    /// Above the upper band: `delta_h > 1`.
    pub outside_interval_h: bool,
    pub outside_interval_h_m: bool,
}

impl DeviationReport {
    /// Score one researcher from summary numbers alone.
    pub fn from_indices(
        researcher_id: impl Into<String>,
        papers: u64,
        citations: u64,
        h: u64,
        h_m: f64,
        curve_h: &ReferenceCurve,
        curve_hm: &ReferenceCurve,
    ) -> Result<Self> {
        let delta_h = delta_h(h, papers, curve_h)?;
        let delta_h_m = delta_h_m(h_m, papers, curve_hm)?;
        Ok(Self {
            researcher_id: researcher_id.into(),
            papers,
            citations,
            h,
            h_m,
            delta_h,
            delta_h_m,
            halfwidth_h: curve_h.halfwidth(papers),
            halfwidth_h_m: curve_hm.halfwidth(papers),
            outside_interval_h: delta_h > 1.0,
            outside_interval_h_m: delta_h_m > 1.0,
        })
    }
}

/// Orders reports by `delta_h` descending, ties by researcher_id.
pub fn sort_reports(reports: &mut [DeviationReport]) {
    reports.sort_by(|a, b| {
        b.delta_h
            .total_cmp(&a.delta_h)
            .then_with(|| a.researcher_id.cmp(&b.researcher_id))
    });
}

/// One report per profile with at least one paper, sorted by `delta_h`.
pub fn deviation_report(
    corpus: &Corpus,
    curve_h: &ReferenceCurve,
    curve_hm: &ReferenceCurve,
) -> Result<Vec<DeviationReport>> {
    let mut reports = Vec::with_capacity(corpus.len());
    for profile in corpus.profiles.iter().filter(|p| !p.papers.is_empty()) {
        let s = index_set(profile)?;
        reports.push(DeviationReport::from_indices(
            s.researcher_id,
            s.papers,
            s.citations,
            s.h,
            s.h_m,
            curve_h,
            curve_hm,
        )?);
    }
    sort_reports(&mut reports);
    Ok(reports)
}

pub const DEVIATION_CSV_HEADER: [&str; 9] = [
    "researcher_id",
    "P",
    "C",
    "h",
    "delta_h",
    "h_m",
    "delta_h_m",
    "flag_h",
    "flag_hm",
];

/// Table layout: h_m and both deltas at one decimal.
pub fn write_deviation_csv<W: Write>(reports: &[DeviationReport], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::InvalidInput(format!("csv write failed: {e}"));
    wtr.write_record(DEVIATION_CSV_HEADER).map_err(err)?;
    for r in reports {
        wtr.write_record([
            r.researcher_id.clone(),
            r.papers.to_string(),
            r.citations.to_string(),
            r.h.to_string(),
            format!("{:.1}", r.delta_h),
            format!("{:.1}", r.h_m),
            format!("{:.1}", r.delta_h_m),
            r.outside_interval_h.to_string(),
            r.outside_interval_h_m.to_string(),
        ])
        .map_err(err)?;
    }
    wtr.flush()
        .map_err(|e| Error::InvalidInput(format!("csv write failed: {e}")))
}
