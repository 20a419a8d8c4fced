//! Bibliographic corpora: JSONL ingestion, paper filtering, ground-truth
//! label files and the seeded synthetic generator.

mod labels;
mod synth;

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use labels::{read_labels, write_labels, Clustering};
pub use synth::{generate_synthetic, SyntheticCorpus, SyntheticSpec};

/// Number of most frequent affiliation words removed before comparison.
pub const STOPLIST_SIZE: usize = 20;

/// Papers with fewer authors are dropped by [`filter_papers`].
pub const MIN_AUTHORS: usize = 2;
/// Papers with more authors are dropped by [`filter_papers`].
pub const MAX_AUTHORS: usize = 99;

/// One occurrence of an author name on a paper's byline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorMention {
    /// `paperId:index`, assigned when the corpus is built.
    #[serde(skip)]
    pub mention_id: String,
    #[serde(rename = "surname")]
    pub surname_raw: String,
    /// Given names as recorded, usually initials.
    #[serde(rename = "given", default)]
    pub given_raw: String,
    #[serde(
        rename = "given_full",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub given_full_raw: Option<String>,
    /// An empty list means the affiliation is unknown.
    #[serde(default)]
    pub affiliations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub email: Option<String>,
}

impl AuthorMention {
    pub fn new(surname: impl Into<String>, given: impl Into<String>) -> Self {
        AuthorMention {
            mention_id: String::new(),
            surname_raw: surname.into(),
            given_raw: given.into(),
            given_full_raw: None,
            affiliations: Vec::new(),
            email: None,
        }
    }

    pub fn with_full(mut self, given_full: impl Into<String>) -> Self {
        self.given_full_raw = Some(given_full.into());
        self
    }

    pub fn with_affiliation(mut self, affiliation: impl Into<String>) -> Self {
        self.affiliations.push(affiliation.into());
        self
    }

    pub fn with_email(mut self, email: impl Into<String>) -> Self {
        self.email = Some(email.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
    pub authors: Vec<AuthorMention>,
}

impl PaperRecord {
    pub fn new(paper_id: impl Into<String>, authors: Vec<AuthorMention>) -> Self {
        PaperRecord {
            paper_id: paper_id.into(),
            year: None,
            venue: None,
            authors,
        }
    }
}

/// A validated collection of papers. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    papers: Vec<PaperRecord>,
    affiliation_stoplist: Vec<String>,
}

impl Corpus {
    /// Validates ids, assigns `paperId:index` mention ids and computes the
    /// affiliation stoplist.
    pub fn new(mut papers: Vec<PaperRecord>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(papers.len());
        for paper in &mut papers {
            if !seen.insert(paper.paper_id.clone()) {
                return Err(Error::DuplicatePaper(paper.paper_id.clone()));
            }
            for (index, author) in paper.authors.iter_mut().enumerate() {
                if author.surname_raw.trim().is_empty() {
                    return Err(Error::EmptyName(format!(
                        "paper `{}` author {index} has an empty surname",
                        paper.paper_id
                    )));
                }
                author.mention_id = format!("{}:{}", paper.paper_id, index);
            }
        }
        let affiliation_stoplist = compute_stoplist(
            papers
                .iter()
                .flat_map(|p| &p.authors)
                .flat_map(|a| &a.affiliations)
                .map(String::as_str),
        );
        Ok(Corpus {
            papers,
            affiliation_stoplist,
        })
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn affiliation_stoplist(&self) -> &[String] {
        &self.affiliation_stoplist
    }

    /// All mentions with the index of their paper, in corpus order.
    pub fn mentions(&self) -> impl Iterator<Item = (usize, &AuthorMention)> + '_ {
        self.papers
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.authors.iter().map(move |a| (i, a)))
    }

    pub fn mention_count(&self) -> usize {
        self.papers.iter().map(|p| p.authors.len()).sum()
    }

    pub fn mention_ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.mentions().map(|(_, m)| m.mention_id.as_str())
    }

    /// Serializes the corpus as JSONL, one paper per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for paper in &self.papers {
            serde_json::to_writer(&mut out, paper)?;
            out.write_all(b"\n")
                .map_err(|e| Error::io("<corpus output>", e))?;
        }
        Ok(())
    }
}

/// Loads a JSONL corpus file.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut papers = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        papers.push(parse_paper_line(&line, i + 1)?);
    }
    Corpus::new(papers)
}

pub fn write_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    corpus.write_jsonl(&mut out)?;
    out.flush().map_err(|e| Error::io(path, e))
}

fn parse_paper_line(line: &str, line_no: usize) -> Result<PaperRecord> {
    let paper: PaperRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
        line: line_no,
        field: json_error_field(&e),
        message: e.to_string(),
    })?;
    for (i, author) in paper.authors.iter().enumerate() {
        if author.surname_raw.trim().is_empty() {
            return Err(Error::Parse {
                line: line_no,
                field: format!("authors[{i}].surname"),
                message: "surname is empty".into(),
            });
        }
    }
    Ok(paper)
}

fn json_error_field(err: &serde_json::Error) -> String {
    // serde reports missing/unknown fields inside backticks
    let msg = err.to_string();
    msg.split('`')
        .nth(1)
        .map(str::to_string)
        .unwrap_or_else(|| "<record>".to_string())
}

/// Keeps papers whose byline has between 2 and 99 authors.
pub fn filter_papers(corpus: &Corpus) -> Corpus {
    let papers = corpus
        .papers
        .iter()
        .filter(|p| (MIN_AUTHORS..=MAX_AUTHORS).contains(&p.authors.len()))
        .cloned()
        .collect::<Vec<_>>();
    let affiliation_stoplist = compute_stoplist(
        papers
            .iter()
            .flat_map(|p| &p.authors)
            .flat_map(|a| &a.affiliations)
            .map(String::as_str),
    );
    Corpus {
        papers,
        affiliation_stoplist,
    }
}

/// Lowercased alphabetic words of an affiliation string.
pub fn affiliation_words(affiliation: &str) -> impl Iterator<Item = String> + '_ {
    affiliation
        .split(|c: char| !c.is_alphabetic())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
}

/// The [`STOPLIST_SIZE`] most frequent words, ties broken lexicographically.
pub fn compute_stoplist<'a>(affiliations: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for aff in affiliations {
        for word in affiliation_words(aff) {
            *counts.entry(word).or_default() += 1;
        }
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
        .into_iter()
        .take(STOPLIST_SIZE)
        .map(|(w, _)| w)
        .collect()
}
