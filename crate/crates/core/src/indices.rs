//! Per-researcher scalar indices: h, the fractionally counted h_m, and the
//! simple ratios built from P and C.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::ResearcherProfile;
use crate::error::{Error, Result};

/// Slack for comparing a citation count with an accumulated effective rank,
/// so that e.g. three papers with three authors each reach rank 1 exactly.
const RANK_EPS: f64 = 1e-9;

/// Largest `k` such that at least `k` entries are `>= k`.
pub fn h_index(citations: &[u64]) -> u64 {
    let mut sorted = citations.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c > i as u64)
        .count() as u64
}

/// `(citations, n_authors)` sorted by citations descending; ties put papers
/// with more authors first so the effective rank grows as slowly as possible.
fn hm_order(papers: &[(u64, u32)]) -> Result<Vec<(u64, u32)>> {
    if let Some(&(_, n)) = papers.iter().find(|&&(_, n)| n < 1) {
        return Err(Error::InvalidAuthorCount {
            paper_id: String::from("<unnamed>"),
            n_authors: n,
        });
    }
    let mut sorted = papers.to_vec();
    sorted.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
    Ok(sorted)
}

/// Position (1-based) and effective rank of the last paper in the h_m core,
/// or `None` when no paper qualifies.
fn hm_core(papers: &[(u64, u32)]) -> Result<Option<(usize, f64)>> {
    let sorted = hm_order(papers)?;
    let mut rank = 0.0;
    let mut best = None;
    for (i, &(cites, authors)) in sorted.iter().enumerate() {
        rank += 1.0 / f64::from(authors);
        if cites as f64 + RANK_EPS >= rank {
            best = Some((i + 1, rank));
        } else {
            // Citations only fall and the rank only grows from here on.
            break;
        }
    }
    Ok(best)
}

/// Multi-author h_m index: papers ranked by citations, each counting `1/n_authors`
/// towards the rank.
pub fn hm_index(papers: &[(u64, u32)]) -> Result<f64> {
    Ok(hm_core(papers)?.map_or(0.0, |(_, rank)| rank))
}

/// Number of papers in the h_m core.
pub fn hm_core_size(papers: &[(u64, u32)]) -> Result<usize> {
    Ok(hm_core(papers)?.map_or(0, |(size, _)| size))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSet {
    pub researcher_id: String,
    #[serde(rename = "P")]
    pub papers: u64,
    #[serde(rename = "C")]
    pub citations: u64,
    pub h: u64,
    pub h_m: f64,
    /// h / P
    pub h_n: f64,
    /// C / P
    pub mean_citations: f64,
}

pub fn index_set(profile: &ResearcherProfile) -> Result<IndexSet> {
    if profile.papers.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let pairs: Vec<(u64, u32)> = profile
        .papers
        .iter()
        .map(|p| (p.citations, p.n_authors))
        .collect();
    if let Some(bad) = profile.papers.iter().find(|p| p.n_authors < 1) {
        return Err(Error::InvalidAuthorCount {
            paper_id: bad.paper_id.clone(),
            n_authors: bad.n_authors,
        });
    }
    let papers = profile.paper_count() as u64;
    let citations = profile.total_citations();
    let h = profile.h_index();
    Ok(IndexSet {
        researcher_id: profile.researcher_id.clone(),
        papers,
        citations,
        h,
        h_m: hm_index(&pairs)?,
        h_n: h as f64 / papers as f64,
        mean_citations: citations as f64 / papers as f64,
    })
}

pub const INDEX_CSV_HEADER: [&str; 7] = [
    "researcher_id",
    "P",
    "C",
    "h",
    "h_m",
    "h_n",
    "mean_citations",
];

/// h_m at one decimal, h/P to three, C/P to two.
pub fn write_index_csv<W: Write>(sets: &[IndexSet], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::InvalidInput(format!("csv write failed: {e}"));
    wtr.write_record(INDEX_CSV_HEADER).map_err(err)?;
    for s in sets {
        wtr.write_record([
            s.researcher_id.clone(),
            s.papers.to_string(),
            s.citations.to_string(),
            s.h.to_string(),
            format!("{:.1}", s.h_m),
            format!("{:.3}", s.h_n),
            format!("{:.2}", s.mean_citations),
        ])
        .map_err(err)?;
    }
    wtr.flush()
        .map_err(|e| Error::InvalidInput(format!("csv write failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PaperRecord;
    use approx::assert_abs_diff_eq;

    #[test]
    fn h_examples() {
        assert_eq!(h_index(&[]), 0);
        assert_eq!(h_index(&[10, 8, 5, 4, 3]), 4);
        assert_eq!(h_index(&[1, 1, 1, 1]), 1);
        assert_eq!(h_index(&[0, 0]), 0);
        assert_eq!(h_index(&[100]), 1);
    }

    #[test]
    fn hm_examples() {
        assert_abs_diff_eq!(hm_index(&[(6, 2); 4]).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            hm_index(&[(3, 3), (2, 1)]).unwrap(),
            4.0 / 3.0,
            epsilon = 1e-12
        );
        assert_eq!(hm_index(&[]).unwrap(), 0.0);
        assert_eq!(hm_index(&[(0, 1)]).unwrap(), 0.0);
    }

    #[test]
    fn hm_single_author_is_h() {
        let cites = [10, 8, 5, 4, 3];
        let pairs: Vec<_> = cites.iter().map(|&c| (c, 1)).collect();
        assert_eq!(hm_index(&pairs).unwrap(), h_index(&cites) as f64);
    }

    #[test]
    fn hm_exact_fractional_boundary() {
        // 1/3 + 1/3 + 1/3 must reach 1 and still qualify with one citation each.
        assert_abs_diff_eq!(hm_index(&[(1, 3); 3]).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(hm_core_size(&[(1, 3); 4]).unwrap(), 3);
    }

    #[test]
    fn hm_tie_break_orders_more_authors_first() {
        // Equal citations: the five-author paper enters first at rank 0.2, the
        // single-author one would reach 1.2 > 1. Reverse order would give 1.0.
        let core = hm_core(&[(1, 1), (1, 5)]).unwrap();
        assert_eq!(core.map(|c| c.0), Some(1));
        assert_abs_diff_eq!(core.unwrap().1, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn hm_rejects_zero_authors() {
        assert!(matches!(
            hm_index(&[(3, 0)]),
            Err(Error::InvalidAuthorCount { .. })
        ));
    }

    fn profile(cites: &[u64]) -> ResearcherProfile {
        ResearcherProfile::new(
            "r",
            cites
                .iter()
                .enumerate()
                .map(|(i, &c)| PaperRecord::new(i.to_string(), 2000, c, 1))
                .collect(),
        )
    }

    #[test]
    fn index_set_example() {
        let set = index_set(&profile(&[10, 8, 5, 4, 3])).unwrap();
        assert_eq!((set.papers, set.citations, set.h), (5, 30, 4));
        assert_eq!(set.h_m, 4.0);
        assert_abs_diff_eq!(set.h_n, 0.8);
        assert_abs_diff_eq!(set.mean_citations, 6.0);
    }

    #[test]
    fn index_set_zero_citation_paper() {
        let set = index_set(&profile(&[0])).unwrap();
        assert_eq!(set.h, 0);
        assert_eq!(set.h_m, 0.0);
    }

    #[test]
    fn index_set_empty_profile() {
        assert!(matches!(index_set(&profile(&[])), Err(Error::EmptyProfile)));
    }

    #[test]
    fn index_csv_layout() {
        let profile = ResearcherProfile::new(
            "r,1",
            vec![
                PaperRecord::new("a", 2000, 6, 2),
                PaperRecord::new("b", 2001, 3, 1),
            ],
        );
        let mut buf = Vec::new();
        write_index_csv(&[index_set(&profile).unwrap()], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "researcher_id,P,C,h,h_m,h_n,mean_citations\n\"r,1\",2,9,2,1.5,1.000,4.50\n"
        );
    }
}
