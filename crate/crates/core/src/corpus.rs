//! Researcher profiles and citation corpora: data model, file ingestion,
//! validation and the profile exclusion rules.
//!
//! Three on-disk schemas are supported:
//!
//! * profile CSV, header `researcher_id,display_name,paper_id,year,citations,n_authors`,
//!   one row per paper;
//! * profile JSON, an array of `{researcher_id, display_name, papers: [...]}` objects
//!   where each paper may carry `yearly_citations` as `[year, count]` pairs;
//! * citation-corpus CSV, header `paper_id,year,citations`, with an optional
//!   companion per-year file `paper_id,cite_year,count`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indices::h_index;

pub const PROFILE_CSV_HEADER: [&str; 6] = [
    "researcher_id",
    "display_name",
    "paper_id",
    "year",
    "citations",
    "n_authors",
];
pub const CORPUS_CSV_HEADER: [&str; 3] = ["paper_id", "year", "citations"];
pub const YEARLY_CSV_HEADER: [&str; 3] = ["paper_id", "cite_year", "count"];

pub const MIN_YEAR: i32 = 1800;
pub const MAX_YEAR: i32 = 2100;

/// One citable item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub year: i32,
    pub citations: u64,
    pub n_authors: u32,
    /// `(calendar year, citations received that year)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yearly_citations: Option<Vec<(i32, u64)>>,
}

/// A broken field invariant, before it is attached to a file location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldViolation {
    pub field: &'static str,
    pub message: String,
}

impl FieldViolation {
    fn new(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            field,
            message: message.into(),
        }
    }
}

impl PaperRecord {
    pub fn new(paper_id: impl Into<String>, year: i32, citations: u64, n_authors: u32) -> Self {
        Self {
            paper_id: paper_id.into(),
            year,
            citations,
            n_authors,
            yearly_citations: None,
        }
    }

    pub fn with_yearly(mut self, yearly: Vec<(i32, u64)>) -> Self {
        self.yearly_citations = Some(yearly);
        self
    }

    pub fn validate(&self) -> std::result::Result<(), FieldViolation> {
        if self.paper_id.is_empty() {
            return Err(FieldViolation::new("paper_id", "must not be empty"));
        }
        if !(MIN_YEAR..=MAX_YEAR).contains(&self.year) {
            return Err(FieldViolation::new(
                "year",
                format!("{} outside [{MIN_YEAR}, {MAX_YEAR}]", self.year),
            ));
        }
        if self.n_authors < 1 {
            return Err(FieldViolation::new("n_authors", "must be at least 1"));
        }
        if let Some(yearly) = &self.yearly_citations {
            let mut sum: u64 = 0;
            for &(year, count) in yearly {
                if year < self.year {
                    return Err(FieldViolation::new(
                        "yearly_citations",
                        format!(
                            "citation year {year} precedes publication year {}",
                            self.year
                        ),
                    ));
                }
                sum = sum.saturating_add(count);
            }
            if sum != self.citations {
                return Err(FieldViolation::new(
                    "yearly_citations",
                    format!("counts sum to {sum}, expected {}", self.citations),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResearcherProfile {
    pub researcher_id: String,
    #[serde(default)]
    pub display_name: Option<String>,
    pub papers: Vec<PaperRecord>,
}

impl ResearcherProfile {
    pub fn new(researcher_id: impl Into<String>, papers: Vec<PaperRecord>) -> Self {
        Self {
            researcher_id: researcher_id.into(),
            display_name: None,
            papers,
        }
    }

    /// Number of citable items, P.
    pub fn paper_count(&self) -> usize {
        self.papers.len()
    }

    /// Total citations, C.
    pub fn total_citations(&self) -> u64 {
        self.papers.iter().map(|p| p.citations).sum()
    }

    pub fn citation_counts(&self) -> Vec<u64> {
        self.papers.iter().map(|p| p.citations).collect()
    }

    pub fn h_index(&self) -> u64 {
        h_index(&self.citation_counts())
    }
}

/// Inclusive span in years between the first and the last citable item.
pub fn active_years(profile: &ResearcherProfile) -> Result<u32> {
    let years = profile.papers.iter().map(|p| p.year);
    let first = years.clone().min().ok_or(Error::EmptyProfile)?;
    let last = years.max().ok_or(Error::EmptyProfile)?;
    Ok((last - first) as u32 + 1)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Corpus {
    pub profiles: Vec<ResearcherProfile>,
    #[serde(default)]
    pub provenance: String,
}

impl Corpus {
    /// Fails if two profiles share a researcher_id.
    pub fn new(profiles: Vec<ResearcherProfile>, provenance: impl Into<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &profiles {
            if p.researcher_id.is_empty() {
                return Err(Error::InvalidInput("empty researcher_id".into()));
            }
            if !seen.insert(p.researcher_id.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate researcher_id `{}`",
                    p.researcher_id
                )));
            }
        }
        Ok(Self {
            profiles,
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    NoPapers,
    ZeroCitations,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionReason::NoPapers => f.write_str("no papers"),
            ExclusionReason::ZeroCitations => f.write_str("zero citations / h=0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionRecord {
    pub researcher_id: String,
    pub reason: ExclusionReason,
}

/// Drops profiles with no papers, no citations or h = 0.
///
/// For a profile with at least one paper, h = 0 exactly when C = 0, so both
/// land under [`ExclusionReason::ZeroCitations`].
pub fn apply_exclusions(corpus: &Corpus) -> (Corpus, Vec<ExclusionRecord>) {
    let mut kept = Vec::with_capacity(corpus.profiles.len());
    let mut log = Vec::new();
    for profile in &corpus.profiles {
        let reason = if profile.papers.is_empty() {
            Some(ExclusionReason::NoPapers)
        } else if profile.total_citations() == 0 || profile.h_index() == 0 {
            Some(ExclusionReason::ZeroCitations)
        } else {
            None
        };
        match reason {
            Some(reason) => log.push(ExclusionRecord {
                researcher_id: profile.researcher_id.clone(),
                reason,
            }),
            None => kept.push(profile.clone()),
        }
    }
    let retained = Corpus {
        profiles: kept,
        provenance: corpus.provenance.clone(),
    };
    (retained, log)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Json,
}

impl InputFormat {
    /// Guess from the file extension; anything other than `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => InputFormat::Json,
            _ => InputFormat::Csv,
        }
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "json" => Ok(InputFormat::Json),
            other => Err(Error::InvalidInput(format!("unknown format `{other}`"))),
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub fn ingest_profiles(path: &Path, format: InputFormat) -> Result<Corpus> {
    let origin = path.display().to_string();
    let reader = open(path)?;
    let mut corpus = match format {
        InputFormat::Csv => read_profiles_csv(reader, &origin)?,
        InputFormat::Json => read_profiles_json(reader, &origin)?,
    };
    corpus.provenance = origin;
    Ok(corpus)
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader)
}

fn check_header<R: Read>(
    rdr: &mut csv::Reader<R>,
    expected: &[&str],
    origin: &str,
) -> Result<bool> {
    let header = match rdr.headers() {
        Ok(h) => h.clone(),
        Err(e) => {
            return Err(Error::Malformed {
                origin: origin.to_string(),
                message: e.to_string(),
            })
        }
    };
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Ok(false);
    }
    let got: Vec<&str> = header.iter().collect();
    if got != expected {
        return Err(Error::Malformed {
            origin: origin.to_string(),
            message: format!(
                "unexpected header `{}`, expected `{}`",
                got.join(","),
                expected.join(",")
            ),
        });
    }
    Ok(true)
}

struct Row<'a> {
    record: &'a csv::StringRecord,
    line: u64,
    origin: &'a str,
    header: &'a [&'a str],
}

impl Row<'_> {
    fn violation(&self, field: &str, message: impl Into<String>) -> Error {
        Error::Validation {
            origin: self.origin.to_string(),
            location: format!("line {}", self.line),
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn text(&self, idx: usize) -> &str {
        self.record.get(idx).unwrap_or("")
    }

    fn parse<T: FromStr>(&self, idx: usize) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        let raw = self.text(idx);
        raw.parse::<T>()
            .map_err(|e| self.violation(self.header[idx], format!("cannot parse `{raw}`: {e}")))
    }
}

fn record_error(origin: &str, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Malformed {
        origin: origin.to_string(),
        message: format!("line {line}: {e}"),
    }
}

pub fn read_profiles_csv<R: Read>(reader: R, origin: &str) -> Result<Corpus> {
    let mut rdr = csv_reader(reader);
    if !check_header(&mut rdr, &PROFILE_CSV_HEADER, origin)? {
        return Err(Error::NoRecords {
            origin: origin.to_string(),
        });
    }

    let mut order: Vec<ResearcherProfile> = Vec::new();
    let mut index_of: HashMap<String, usize> = HashMap::new();
    let mut paper_ids: Vec<HashSet<String>> = Vec::new();

    for result in rdr.records() {
        let record = result.map_err(|e| record_error(origin, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row = Row {
            record: &record,
            line,
            origin,
            header: &PROFILE_CSV_HEADER,
        };
        let researcher_id = row.text(0).to_string();
        if researcher_id.is_empty() {
            return Err(row.violation("researcher_id", "must not be empty"));
        }
        let display_name = Some(row.text(1).to_string()).filter(|s| !s.is_empty());
        let paper = PaperRecord {
            paper_id: row.text(2).to_string(),
            year: row.parse(3)?,
            citations: row.parse(4)?,
            n_authors: row.parse(5)?,
            yearly_citations: None,
        };
        paper
            .validate()
            .map_err(|v| row.violation(v.field, v.message))?;

        let idx = *index_of.entry(researcher_id.clone()).or_insert_with(|| {
            order.push(ResearcherProfile {
                researcher_id,
                display_name: None,
                papers: Vec::new(),
            });
            paper_ids.push(HashSet::new());
            order.len() - 1
        });
        if !paper_ids[idx].insert(paper.paper_id.clone()) {
            return Err(row.violation(
                "paper_id",
                format!(
                    "duplicate paper_id `{}` for researcher `{}`",
                    paper.paper_id, order[idx].researcher_id
                ),
            ));
        }
        let profile = &mut order[idx];
        if profile.display_name.is_none() {
            profile.display_name = display_name;
        }
        profile.papers.push(paper);
    }

    if order.is_empty() {
        return Err(Error::NoRecords {
            origin: origin.to_string(),
        });
    }
    Corpus::new(order, origin)
}

pub fn read_profiles_json<R: Read>(reader: R, origin: &str) -> Result<Corpus> {
    let mut text = String::new();
    let mut reader = reader;
    reader
        .read_to_string(&mut text)
        .map_err(|e| Error::io(origin, e))?;
    if text.trim().is_empty() {
        return Err(Error::NoRecords {
            origin: origin.to_string(),
        });
    }
    let mut profiles: Vec<ResearcherProfile> =
        serde_json::from_str(&text).map_err(|e| Error::Malformed {
            origin: origin.to_string(),
            message: e.to_string(),
        })?;
    if profiles.is_empty() {
        return Err(Error::NoRecords {
            origin: origin.to_string(),
        });
    }

    let mut ids = HashSet::new();
    for (i, profile) in profiles.iter_mut().enumerate() {
        let violation = |location: String, field: &str, message: String| Error::Validation {
            origin: origin.to_string(),
            location,
            field: field.to_string(),
            message,
        };
        if profile.researcher_id.is_empty() {
            return Err(violation(
                format!("profile {i}"),
                "researcher_id",
                "must not be empty".into(),
            ));
        }
        if !ids.insert(profile.researcher_id.clone()) {
            return Err(violation(
                format!("profile {i}"),
                "researcher_id",
                format!("duplicate researcher_id `{}`", profile.researcher_id),
            ));
        }
        if profile.display_name.as_deref() == Some("") {
            profile.display_name = None;
        }
        let mut seen = HashSet::new();
        for (j, paper) in profile.papers.iter().enumerate() {
            let location = format!("profile {i} ({}) paper {j}", profile.researcher_id);
            paper
                .validate()
                .map_err(|v| violation(location.clone(), v.field, v.message))?;
            if !seen.insert(paper.paper_id.as_str()) {
                return Err(violation(
                    location,
                    "paper_id",
                    format!("duplicate paper_id `{}`", paper.paper_id),
                ));
            }
        }
    }
    Corpus::new(profiles, origin)
}

/// Writes the profile CSV schema. Profiles without papers have no row to
/// carry them and are skipped; per-year citation data is not part of the schema.
pub fn write_profiles_csv<W: Write>(corpus: &Corpus, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let io_err = |e: csv::Error| Error::InvalidInput(format!("csv write failed: {e}"));
    wtr.write_record(PROFILE_CSV_HEADER).map_err(io_err)?;
    for profile in &corpus.profiles {
        let name = profile.display_name.as_deref().unwrap_or("");
        for paper in &profile.papers {
            wtr.write_record([
                profile.researcher_id.as_str(),
                name,
                paper.paper_id.as_str(),
                &paper.year.to_string(),
                &paper.citations.to_string(),
                &paper.n_authors.to_string(),
            ])
            .map_err(io_err)?;
        }
    }
    wtr.flush()
        .map_err(|e| Error::InvalidInput(format!("csv write failed: {e}")))?;
    Ok(())
}

pub fn write_profiles_json<W: Write>(corpus: &Corpus, writer: W) -> Result<()> {
    serde_json::to_writer_pretty(writer, &corpus.profiles)
        .map_err(|e| Error::InvalidInput(format!("json write failed: {e}")))
}

/// A bag of papers with researcher identity stripped, e.g. every article of
/// one field published in one year.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationCorpus {
    pub items: Vec<PaperRecord>,
    /// The common publication year, when all items share one.
    pub publication_year: Option<i32>,
}

impl CitationCorpus {
    pub fn new(items: Vec<PaperRecord>) -> Self {
        let publication_year = match items.first() {
            Some(first) if items.iter().all(|p| p.year == first.year) => Some(first.year),
            _ => None,
        };
        Self {
            items,
            publication_year,
        }
    }

    pub fn from_citations(year: i32, citations: &[u64]) -> Self {
        let items = citations
            .iter()
            .enumerate()
            .map(|(i, &c)| PaperRecord::new(format!("p{i}"), year, c, 1))
            .collect();
        Self::new(items)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

pub fn read_citation_corpus_csv<R: Read>(reader: R, origin: &str) -> Result<CitationCorpus> {
    let mut rdr = csv_reader(reader);
    if !check_header(&mut rdr, &CORPUS_CSV_HEADER, origin)? {
        return Err(Error::NoRecords {
            origin: origin.to_string(),
        });
    }
    let mut items = Vec::new();
    let mut seen = HashSet::new();
    for result in rdr.records() {
        let record = result.map_err(|e| record_error(origin, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row = Row {
            record: &record,
            line,
            origin,
            header: &CORPUS_CSV_HEADER,
        };
        let paper = PaperRecord::new(row.text(0), row.parse(1)?, row.parse(2)?, 1);
        paper
            .validate()
            .map_err(|v| row.violation(v.field, v.message))?;
        if !seen.insert(paper.paper_id.clone()) {
            return Err(row.violation(
                "paper_id",
                format!("duplicate paper_id `{}`", paper.paper_id),
            ));
        }
        items.push(paper);
    }
    if items.is_empty() {
        return Err(Error::NoRecords {
            origin: origin.to_string(),
        });
    }
    Ok(CitationCorpus::new(items))
}

/// Attaches a per-year companion file to an already loaded corpus. Every item
/// receives a (possibly empty) yearly list whose counts must sum to its total.
pub fn attach_yearly_csv<R: Read>(
    corpus: &mut CitationCorpus,
    reader: R,
    origin: &str,
) -> Result<()> {
    let mut rdr = csv_reader(reader);
    let mut yearly: HashMap<String, Vec<(i32, u64)>> = HashMap::new();
    if check_header(&mut rdr, &YEARLY_CSV_HEADER, origin)? {
        let index: HashSet<&str> = corpus.items.iter().map(|p| p.paper_id.as_str()).collect();
        for result in rdr.records() {
            let record = result.map_err(|e| record_error(origin, e))?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let row = Row {
                record: &record,
                line,
                origin,
                header: &YEARLY_CSV_HEADER,
            };
            let paper_id = row.text(0);
            if !index.contains(paper_id) {
                return Err(row.violation("paper_id", format!("unknown paper_id `{paper_id}`")));
            }
            let cite_year: i32 = row.parse(1)?;
            let count: u64 = row.parse(2)?;
            yearly
                .entry(paper_id.to_string())
                .or_default()
                .push((cite_year, count));
        }
    }
    for paper in &mut corpus.items {
        let mut series = yearly.remove(&paper.paper_id).unwrap_or_default();
        series.sort_by_key(|&(y, _)| y);
        paper.yearly_citations = Some(series);
        paper.validate().map_err(|v| Error::Validation {
            origin: origin.to_string(),
            location: format!("paper `{}`", paper.paper_id),
            field: v.field.to_string(),
            message: v.message,
        })?;
    }
    Ok(())
}

pub fn read_citation_corpus(path: &Path, yearly: Option<&Path>) -> Result<CitationCorpus> {
    let mut corpus = read_citation_corpus_csv(open(path)?, &path.display().to_string())?;
    if let Some(yearly_path) = yearly {
        attach_yearly_csv(
            &mut corpus,
            open(yearly_path)?,
            &yearly_path.display().to_string(),
        )?;
    }
    Ok(corpus)
}
