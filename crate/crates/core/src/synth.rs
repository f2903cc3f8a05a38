//! Seeded synthetic careers under the two generative assumptions behind the
//! power-law models: constant publication and citation rates (Hirsch), and
//! i.i.d. power-law citation counts per paper (Egghe-Rousseau / Lotka).
//!
//! # Random stream
//!
//! Every researcher draws from its own ChaCha8 stream (`rand_chacha`): the key
//! is `ChaCha8Rng::seed_from_u64(seed)` and the stream id is the researcher's
//! index. Output is therefore a pure function of `(seed, index)` and does not
//! depend on the order in which researchers are generated. Uniform deviates
//! are `rng.random::<f64>()`, i.e. 53-bit floats in `[0, 1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, PaperRecord, ResearcherProfile};
use crate::error::{Error, Result};

pub const DEFAULT_CITATION_CAP: u64 = 100_000;
pub const DEFAULT_OBSERVATION_YEAR: i32 = 2018;
/// Lotkaian papers are spread uniformly over this many years before observation.
const LOTKA_PUBLICATION_SPAN: i32 = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CareerModel {
    /// Publishes `round(papers_per_year · t)` papers by career year `t`; each
    /// paper gains `citations_per_paper_year` citations per subsequent year.
    HirschConstantRate {
        papers_per_year: f64,
        citations_per_paper_year: f64,
        /// Inclusive bounds for the uniformly drawn career length in years.
        career_years: (u32, u32),
    },
    /// Paper count uniform in `papers`; citations i.i.d. with
    /// `Pr(c >= k) ∝ k^(1-θ)`, conditioned on `c <= citation_cap`.
    Lotkaian {
        papers: (u32, u32),
        theta: f64,
        citation_cap: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub n_researchers: usize,
    pub model: CareerModel,
    /// Inclusive bounds for the uniformly drawn author count of each paper.
    pub authors: (u32, u32),
    pub observation_year: i32,
}

impl GeneratorConfig {
    pub fn lotkaian(seed: u64, n_researchers: usize, papers: (u32, u32), theta: f64) -> Self {
        Self {
            seed,
            n_researchers,
            model: CareerModel::Lotkaian {
                papers,
                theta,
                citation_cap: DEFAULT_CITATION_CAP,
            },
            authors: (1, 1),
            observation_year: DEFAULT_OBSERVATION_YEAR,
        }
    }

    pub fn hirsch(
        seed: u64,
        n_researchers: usize,
        papers_per_year: f64,
        citations_per_paper_year: f64,
        career_years: (u32, u32),
    ) -> Self {
        Self {
            seed,
            n_researchers,
            model: CareerModel::HirschConstantRate {
                papers_per_year,
                citations_per_paper_year,
                career_years,
            },
            authors: (1, 1),
            observation_year: DEFAULT_OBSERVATION_YEAR,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n_researchers == 0 {
            return bad("n_researchers must be at least 1".into());
        }
        let (alo, ahi) = self.authors;
        if alo < 1 || alo > ahi {
            return bad(format!(
                "author range ({alo}, {ahi}) must satisfy 1 <= lo <= hi"
            ));
        }
        match &self.model {
            CareerModel::HirschConstantRate {
                papers_per_year,
                citations_per_paper_year,
                career_years: (lo, hi),
            } => {
                if !(*papers_per_year > 0.0 && papers_per_year.is_finite()) {
                    return bad(format!(
                        "papers_per_year {papers_per_year} must be positive"
                    ));
                }
                if !(*citations_per_paper_year > 0.0 && citations_per_paper_year.is_finite()) {
                    return bad(format!(
                        "citations_per_paper_year {citations_per_paper_year} must be positive"
                    ));
                }
                if *lo < 1 || lo > hi {
                    return bad(format!(
                        "career range ({lo}, {hi}) must satisfy 1 <= lo <= hi"
                    ));
                }
                let first = self.observation_year - *hi as i32;
                if first < crate::corpus::MIN_YEAR
                    || self.observation_year > crate::corpus::MAX_YEAR
                {
                    return bad("careers fall outside the supported calendar range".into());
                }
            }
            CareerModel::Lotkaian {
                papers: (lo, hi),
                theta,
                citation_cap,
            } => {
                if *lo < 1 || lo > hi {
                    return bad(format!(
                        "paper range ({lo}, {hi}) must satisfy 1 <= lo <= hi"
                    ));
                }
                if !(*theta > 1.0 && theta.is_finite()) {
                    return bad(format!("theta {theta} must exceed 1"));
                }
                if *citation_cap < 1 {
                    return bad("citation_cap must be at least 1".into());
                }
                let first = self.observation_year - LOTKA_PUBLICATION_SPAN + 1;
                if first < crate::corpus::MIN_YEAR
                    || self.observation_year > crate::corpus::MAX_YEAR
                {
                    return bad(
                        "publication years fall outside the supported calendar range".into(),
                    );
                }
            }
        }
        Ok(())
    }
}

/// The random stream of researcher `index`.
pub fn researcher_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform deviates in `[0, 1)` from researcher `index`'s stream.
pub fn uniform_stream(seed: u64, index: u64) -> impl Iterator<Item = f64> {
    let mut rng = researcher_rng(seed, index);
    std::iter::repeat_with(move || rng.random::<f64>())
}

/// Discrete power law with `Pr(c >= k) ∝ k^(1-θ)` on `1..=cap`, sampled by
/// exact inversion of its survival function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LotkaSampler {
    theta: f64,
    cap: u64,
    /// Unconditioned survival mass beyond the cap, `(cap+1)^(1-θ)`.
    tail: f64,
}

impl LotkaSampler {
    pub fn new(theta: f64, cap: u64) -> Result<Self> {
        if !(theta > 1.0 && theta.is_finite()) || cap < 1 {
            return Err(Error::InvalidConfig(format!(
                "Lotka sampler needs theta > 1 and cap >= 1, got ({theta}, {cap})"
            )));
        }
        Ok(Self {
            theta,
            cap,
            tail: ((cap + 1) as f64).powf(1.0 - theta),
        })
    }

    /// `Pr(c >= k)` under the capped distribution.
    pub fn survival(&self, k: u64) -> f64 {
        if k <= 1 {
            return 1.0;
        }
        if k > self.cap {
            return 0.0;
        }
        ((k as f64).powf(1.0 - self.theta) - self.tail) / (1.0 - self.tail)
    }

    /// Largest `k` with `survival(k) >= u`, for `u` in `(0, 1]`.
    pub fn invert(&self, u: f64) -> u64 {
        let v = u * (1.0 - self.tail) + self.tail;
        let guess = v.powf(-1.0 / (self.theta - 1.0)).floor();
        let mut k = if guess.is_finite() {
            (guess as u64).clamp(1, self.cap)
        } else {
            self.cap
        };
        while k < self.cap && self.survival(k + 1) >= u {
            k += 1;
        }
        while k > 1 && self.survival(k) < u {
            k -= 1;
        }
        k
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        // 1 - [0, 1) lies in (0, 1].
        self.invert(1.0 - rng.random::<f64>())
    }
}

fn researcher(config: &GeneratorConfig, index: usize) -> Result<ResearcherProfile> {
    let mut rng = researcher_rng(config.seed, index as u64);
    let id = format!("sim-{index:06}");
    let (alo, ahi) = config.authors;
    let mut papers = Vec::new();
    match &config.model {
        CareerModel::HirschConstantRate {
            papers_per_year,
            citations_per_paper_year,
            career_years: (lo, hi),
        } => {
            let career = rng.random_range(*lo..=*hi);
            let start = config.observation_year - career as i32;
            let mut published = 0u64;
            for t in 1..=career {
                let target = (papers_per_year * t as f64).round() as u64;
                let cites = (citations_per_paper_year * (career - t) as f64).round() as u64;
                while published < target {
                    published += 1;
                    let n_authors = rng.random_range(alo..=ahi);
                    papers.push(PaperRecord::new(
                        format!("{id}-p{published:05}"),
                        start + t as i32,
                        cites,
                        n_authors,
                    ));
                }
            }
        }
        CareerModel::Lotkaian {
            papers: (lo, hi),
            theta,
            citation_cap,
        } => {
            let sampler = LotkaSampler::new(*theta, *citation_cap)?;
            let count = rng.random_range(*lo..=*hi);
            for k in 1..=count {
                let citations = sampler.sample(&mut rng);
                let n_authors = rng.random_range(alo..=ahi);
                let year = config.observation_year - rng.random_range(0..LOTKA_PUBLICATION_SPAN);
                papers.push(PaperRecord::new(
                    format!("{id}-p{k:05}"),
                    year,
                    citations,
                    n_authors,
                ));
            }
        }
    }
    Ok(ResearcherProfile::new(id, papers))
}

pub fn generate(config: &GeneratorConfig) -> Result<Corpus> {
    config.validate()?;
    let profiles = (0..config.n_researchers)
        .map(|i| researcher(config, i))
        .collect::<Result<Vec<_>>>()?;
    let provenance = format!(
        "synthetic: {}",
        serde_json::to_string(config).unwrap_or_default()
    );
    Corpus::new(profiles, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_corpus() {
        let cfg = GeneratorConfig::lotkaian(7, 20, (5, 50), 2.0);
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        let other = GeneratorConfig {
            seed: 8,
            ..cfg.clone()
        };
        assert_ne!(generate(&cfg).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn researcher_independent_of_population_size() {
        let small = generate(&GeneratorConfig::lotkaian(3, 5, (5, 50), 2.5)).unwrap();
        let large = generate(&GeneratorConfig::lotkaian(3, 50, (5, 50), 2.5)).unwrap();
        assert_eq!(small.profiles[..], large.profiles[..5]);
    }

    #[test]
    fn sampler_inversion_is_exact() {
        let s = LotkaSampler::new(2.0, 100_000).unwrap();
        for &u in &[1.0, 0.999_999, 0.5, 0.25, 0.1, 1e-3, 1e-6, 1e-12] {
            let k = s.invert(u);
            assert!(s.survival(k) >= u, "u={u} k={k}");
            assert!(k == 100_000 || s.survival(k + 1) < u, "u={u} k={k}");
        }
        assert_eq!(s.invert(1.0), 1);
        assert_eq!(s.survival(1), 1.0);
        assert_eq!(s.survival(100_001), 0.0);
    }

    #[test]
    fn small_cap_hits_every_value() {
        let s = LotkaSampler::new(1.5, 3).unwrap();
        let mut rng = researcher_rng(1, 0);
        let mut seen = [false; 4];
        for _ in 0..2000 {
            let c = s.sample(&mut rng);
            assert!((1..=3).contains(&c));
            seen[c as usize] = true;
        }
        assert!(seen[1] && seen[2] && seen[3]);
    }

    #[test]
    fn hirsch_careers() {
        let cfg = GeneratorConfig::hirsch(11, 30, 3.0, 2.0, (5, 25));
        let corpus = generate(&cfg).unwrap();
        for p in &corpus.profiles {
            let h = p.h_index();
            assert!(h * h <= p.total_citations());
            assert!(p.paper_count() >= 15);
            for paper in &p.papers {
                paper.validate().unwrap();
            }
        }
    }

    #[test]
    fn hirsch_paper_counts_follow_rate() {
        let cfg = GeneratorConfig::hirsch(1, 1, 2.5, 1.0, (10, 10));
        let p = &generate(&cfg).unwrap().profiles[0];
        assert_eq!(p.paper_count(), 25);
        // Last-year papers have had no time to be cited.
        assert_eq!(p.papers.last().unwrap().citations, 0);
        assert_eq!(p.papers[0].citations, 9);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = GeneratorConfig::lotkaian(1, 10, (5, 50), 1.0);
        assert!(generate(&cfg).is_err());
        cfg = GeneratorConfig::lotkaian(1, 10, (50, 5), 2.0);
        assert!(generate(&cfg).is_err());
        cfg = GeneratorConfig::hirsch(1, 10, 0.0, 1.0, (1, 5));
        assert!(generate(&cfg).is_err());
        cfg = GeneratorConfig::hirsch(1, 10, 1.0, 1.0, (0, 5));
        assert!(generate(&cfg).is_err());
        cfg = GeneratorConfig::lotkaian(1, 10, (5, 50), 2.0);
        cfg.authors = (0, 3);
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn uniform_stream_reproducible() {
        let a: Vec<f64> = uniform_stream(42, 3).take(5).collect();
        let b: Vec<f64> = uniform_stream(42, 3).take(5).collect();
        let c: Vec<f64> = uniform_stream(42, 4).take(5).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|&u| (0.0..1.0).contains(&u)));
    }
}
