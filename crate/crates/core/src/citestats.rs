//! Corpus-level citation statistics: the complementary cumulative
//! distribution p(c), the Lorenz concentration curve, the citation age
//! profile, and the expected h(P) obtained by publishing at random from p(c).

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::CitationCorpus;
use crate::error::{Error, Result};

/// p(c) = fraction of items with at least `c` citations.
///
/// Stored sparsely: one step per value where p changes, i.e. at `c = 0` and at
/// `v + 1` for every observed citation count `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitationDistribution {
    pub n_items: u64,
    pub max_citations: u64,
    /// `(c, number of items with at least c citations)`, strictly increasing in c.
    steps: Vec<(u64, u64)>,
}

impl CitationDistribution {
    pub fn from_citations(citations: &[u64]) -> Result<Self> {
        if citations.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for &c in citations {
            *counts.entry(c).or_default() += 1;
        }
        let n_items = citations.len() as u64;
        let max_citations = *counts.keys().next_back().unwrap_or(&0);
        let mut steps = vec![(0, n_items)];
        let mut remaining = n_items;
        for (&value, &count) in &counts {
            remaining -= count;
            let at = value + 1;
            match steps.last_mut() {
                Some(last) if last.0 == at => last.1 = remaining,
                _ => steps.push((at, remaining)),
            }
        }
        Ok(Self {
            n_items,
            max_citations,
            steps,
        })
    }

    pub fn at_least(&self, c: u64) -> u64 {
        let idx = self.steps.partition_point(|&(at, _)| at <= c);
        // steps[0] is at c = 0, so idx >= 1.
        self.steps[idx - 1].1
    }

    pub fn p(&self, c: u64) -> f64 {
        self.at_least(c) as f64 / self.n_items as f64
    }

    /// `(c, p(c))` at every change point; p is constant between them.
    pub fn steps(&self) -> Vec<(u64, f64)> {
        self.steps
            .iter()
            .map(|&(c, k)| (c, k as f64 / self.n_items as f64))
            .collect()
    }

    /// p(c) on every integer `0..=max_citations + 1`.
    pub fn dense(&self) -> Vec<(u64, f64)> {
        (0..=self.max_citations + 1)
            .map(|c| (c, self.p(c)))
            .collect()
    }
}

pub fn ccdf(corpus: &CitationCorpus) -> Result<CitationDistribution> {
    let cites: Vec<u64> = corpus.items.iter().map(|p| p.citations).collect();
    CitationDistribution::from_citations(&cites)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorenzCurve {
    /// `(fraction of papers, fraction of citations)`, starting at `(0, 0)`.
    pub points: Vec<(f64, f64)>,
}

impl LorenzCurve {
    /// Citation share of the least-cited `x` fraction of papers, by linear
    /// interpolation between curve points.
    pub fn share_at(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let i = self.points.partition_point(|&(px, _)| px < x);
        if i == 0 {
            return self.points[0].1;
        }
        if i >= self.points.len() {
            return 1.0;
        }
        let (x0, y0) = self.points[i - 1];
        let (x1, y1) = self.points[i];
        if x1 == x0 {
            y1
        } else {
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        }
    }

    /// Twice the area between the diagonal and the curve (trapezoidal).
    pub fn gini(&self) -> f64 {
        let area: f64 = self
            .points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
            .sum();
        1.0 - 2.0 * area
    }
}

pub fn lorenz(corpus: &CitationCorpus) -> Result<LorenzCurve> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut cites: Vec<u64> = corpus.items.iter().map(|p| p.citations).collect();
    cites.sort_unstable();
    let total: u64 = cites.iter().sum();
    if total == 0 {
        return Err(Error::NoCitations);
    }
    let n = cites.len() as f64;
    let mut points = Vec::with_capacity(cites.len() + 1);
    points.push((0.0, 0.0));
    let mut running = 0u64;
    for (k, c) in cites.iter().enumerate() {
        running += c;
        points.push(((k + 1) as f64 / n, running as f64 / total as f64));
    }
    Ok(LorenzCurve { points })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgeProfile {
    /// `(years since publication, citations received that year)`, ascending.
    pub points: Vec<(u32, u64)>,
}

impl AgeProfile {
    pub fn total(&self) -> u64 {
        self.points.iter().map(|&(_, c)| c).sum()
    }
}

/// Citations per year after publication, summed over the corpus. With
/// `drop_final_year`, the latest calendar year present (usually incomplete)
/// is left out.
pub fn age_profile(corpus: &CitationCorpus, drop_final_year: bool) -> Result<AgeProfile> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let pub_year = corpus
        .publication_year
        .ok_or(Error::MixedPublicationYears)?;
    let mut series = Vec::with_capacity(corpus.len());
    for item in &corpus.items {
        let yearly = item
            .yearly_citations
            .as_ref()
            .ok_or_else(|| Error::MissingYearlyData(item.paper_id.clone()))?;
        series.push(yearly);
    }
    let final_year = series.iter().flat_map(|s| s.iter().map(|&(y, _)| y)).max();
    let mut buckets: BTreeMap<u32, u64> = BTreeMap::new();
    for &(year, count) in series.iter().flat_map(|s| s.iter()) {
        if drop_final_year && Some(year) == final_year {
            continue;
        }
        if year < pub_year {
            return Err(Error::InvalidInput(format!(
                "citation year {year} precedes publication year {pub_year}"
            )));
        }
        if count > 0 {
            *buckets.entry((year - pub_year) as u32).or_default() += count;
        }
    }
    Ok(AgeProfile {
        points: buckets.into_iter().collect(),
    })
}

/// Expected number of papers needed to reach `h` when each paper independently
/// reaches `h` citations with probability `p(h)`: `h / p(h)`.
pub fn required_papers(h: u64, dist: &CitationDistribution) -> Result<f64> {
    let p = dist.p(h);
    if p <= 0.0 {
        return Err(Error::UnreachableH(h));
    }
    Ok(h as f64 / p)
}

/// Step curve h(P) for `P = 1..=p_max`: the largest h whose required paper
/// count does not exceed P (0 if none).
pub fn expected_h_curve(dist: &CitationDistribution, p_max: u64) -> Vec<(u64, u64)> {
    // Thresholds are non-decreasing in h because p is non-increasing.
    let thresholds: Vec<(u64, f64)> = (1..=dist.max_citations)
        .map_while(|h| required_papers(h, dist).ok().map(|r| (h, r)))
        .collect();
    let mut curve = Vec::with_capacity(p_max as usize);
    let mut idx = 0;
    let mut h = 0;
    for papers in 1..=p_max {
        while idx < thresholds.len() && thresholds[idx].1 <= papers as f64 {
            h = thresholds[idx].0;
            idx += 1;
        }
        curve.push((papers, h));
    }
    curve
}

fn write_pairs<W: Write, A: ToString, B: ToString>(
    writer: W,
    header: [&str; 2],
    rows: impl IntoIterator<Item = (A, B)>,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::InvalidInput(format!("csv write failed: {e}"));
    wtr.write_record(header).map_err(err)?;
    for (a, b) in rows {
        wtr.write_record([a.to_string(), b.to_string()])
            .map_err(err)?;
    }
    wtr.flush()
        .map_err(|e| Error::InvalidInput(format!("csv write failed: {e}")))
}

/// Dense `c,p` table on `0..=max+1`, p to six decimals.
pub fn write_ccdf_csv<W: Write>(dist: &CitationDistribution, writer: W) -> Result<()> {
    write_pairs(
        writer,
        ["c", "p"],
        dist.dense()
            .into_iter()
            .map(|(c, p)| (c, format!("{p:.6}"))),
    )
}

pub fn write_lorenz_csv<W: Write>(curve: &LorenzCurve, writer: W) -> Result<()> {
    write_pairs(
        writer,
        ["paper_fraction", "citation_fraction"],
        curve
            .points
            .iter()
            .map(|&(x, y)| (format!("{x:.6}"), format!("{y:.6}"))),
    )
}

pub fn write_age_profile_csv<W: Write>(profile: &AgeProfile, writer: W) -> Result<()> {
    write_pairs(
        writer,
        ["years_since_publication", "citations"],
        profile.points.iter().copied(),
    )
}

pub fn write_expected_h_csv<W: Write>(curve: &[(u64, u64)], writer: W) -> Result<()> {
    write_pairs(writer, ["P", "h"], curve.iter().copied())
}
