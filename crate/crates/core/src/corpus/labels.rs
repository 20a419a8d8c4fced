use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::Corpus;
use crate::error::{Error, Result};

/// A partition of mention ids into author identities.
///
/// Cluster ids are opaque; two mentions refer to the same author iff their
/// cluster ids are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Clustering {
    assignment: BTreeMap<String, String>,
}

impl Clustering {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a clustering, rejecting a mention id that appears twice.
    pub fn from_pairs<I, M, C>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, C)>,
        M: Into<String>,
        C: Into<String>,
    {
        let mut assignment = BTreeMap::new();
        for (m, c) in pairs {
            let m = m.into();
            if assignment.contains_key(&m) {
                return Err(Error::DuplicateMention(m));
            }
            assignment.insert(m, c.into());
        }
        Ok(Clustering { assignment })
    }

    /// Groups of mention ids, one per inner vector.
    pub fn from_groups<S: AsRef<str>>(groups: &[Vec<S>]) -> Result<Self> {
        Self::from_pairs(groups.iter().enumerate().flat_map(|(i, g)| {
            g.iter()
                .map(move |m| (m.as_ref().to_string(), format!("c{i}")))
        }))
    }

    pub fn insert(&mut self, mention_id: impl Into<String>, cluster_id: impl Into<String>) {
        self.assignment.insert(mention_id.into(), cluster_id.into());
    }

    pub fn cluster_of(&self, mention_id: &str) -> Option<&str> {
        self.assignment.get(mention_id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// `(mention_id, cluster_id)` in mention-id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.assignment
            .iter()
            .map(|(m, c)| (m.as_str(), c.as_str()))
    }

    /// Cluster id to its member mention ids, both sorted.
    pub fn clusters(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut out: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (m, c) in self.iter() {
            out.entry(c).or_default().push(m);
        }
        out
    }

    pub fn cluster_count(&self) -> usize {
        self.assignment.values().collect::<HashSet<_>>().len()
    }

    /// Partition as a set of mention sets, independent of cluster labels.
    pub fn partition(&self) -> BTreeSet<Vec<&str>> {
        self.clusters().into_values().collect()
    }

    /// Checks that every corpus mention is assigned and nothing else is.
    pub fn check_total(&self, corpus: &Corpus) -> Result<()> {
        let expected: HashSet<&str> = corpus.mention_ids().collect();
        if let Some(unknown) = self
            .assignment
            .keys()
            .find(|m| !expected.contains(m.as_str()))
        {
            return Err(Error::UnknownMention(unknown.clone()));
        }
        let mut missing: Vec<String> = corpus
            .mention_ids()
            .filter(|m| !self.assignment.contains_key(*m))
            .map(str::to_string)
            .collect();
        if !missing.is_empty() {
            missing.sort();
            return Err(Error::MissingMentions(missing));
        }
        Ok(())
    }

    /// Writes `mention_id<TAB>cluster_id` rows in mention-id order.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (m, c) in self.iter() {
            writeln!(out, "{m}\t{c}")?;
        }
        Ok(())
    }
}

pub(super) fn parse_labels<R: BufRead>(reader: R, origin: &Path) -> Result<Clustering> {
    let mut clustering = Clustering::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let (Some(m), Some(c), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(Error::Parse {
                line: i + 1,
                field: "row".into(),
                message: "expected `mention_id<TAB>cluster_id`".into(),
            });
        };
        if m.is_empty() || c.is_empty() {
            return Err(Error::Parse {
                line: i + 1,
                field: if m.is_empty() {
                    "mention_id"
                } else {
                    "cluster_id"
                }
                .into(),
                message: "empty value".into(),
            });
        }
        if clustering.assignment.contains_key(m) {
            return Err(Error::DuplicateMention(m.to_string()));
        }
        clustering.insert(m, c);
    }
    Ok(clustering)
}

impl Clustering {
    /// Reads a label file without checking it against a corpus.
    pub fn read_tsv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        parse_labels(BufReader::new(file), path)
    }
}

/// Reads a label file and checks it covers exactly the corpus mentions.
pub fn read_labels(path: impl AsRef<Path>, corpus: &Corpus) -> Result<Clustering> {
    let clustering = Clustering::read_tsv(path)?;
    clustering.check_total(corpus)?;
    Ok(clustering)
}

pub fn write_labels(clustering: &Clustering, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    clustering
        .write_tsv(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}
