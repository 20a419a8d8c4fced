//! Initial-based disambiguation baselines.
//!
//! All three methods compare the normalized surname (spaces removed)
//! exactly, together with the initials of the recorded (usually
//! initialized) given names:
//!
//! * first-initial (FD): surname plus first initial,
//! * all-initials (AD): surname plus the whole initial sequence,
//! * hybrid (HD): FD blocks split wherever initials conflict. A signature
//!   that is a proper prefix of others joins them only when every longer
//!   signature extending it is the same one.
//!
//! Mentions without given names stay singletons under every method.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{Clustering, Corpus};
use crate::names::{initial_signature, parse_name};
use crate::unionfind::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IbdMethod {
    FirstInitial,
    AllInitials,
    Hybrid,
}

impl IbdMethod {
    pub const ALL: [IbdMethod; 3] = [
        IbdMethod::FirstInitial,
        IbdMethod::AllInitials,
        IbdMethod::Hybrid,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            IbdMethod::FirstInitial => "fd",
            IbdMethod::AllInitials => "ad",
            IbdMethod::Hybrid => "hd",
        }
    }

    pub fn partition(self, corpus: &Corpus) -> Clustering {
        match self {
            IbdMethod::FirstInitial => fd_partition(corpus),
            IbdMethod::AllInitials => ad_partition(corpus),
            IbdMethod::Hybrid => hd_partition(corpus),
        }
    }
}

/// Surname key and initial signature of one mention, or `None` when the
/// mention cannot be blocked.
struct Keyed<'a> {
    mention_id: &'a str,
    key: Option<(String, String)>,
}

fn keyed(corpus: &Corpus) -> Vec<Keyed<'_>> {
    corpus
        .mentions()
        .map(|(_, m)| {
            let key = parse_name(&m.surname_raw, &m.given_raw)
                .ok()
                .filter(|n| !n.given_tokens.is_empty())
                .map(|n| {
                    (
                        n.joined_surname(),
                        initial_signature(&n).into_iter().collect(),
                    )
                });
            Keyed {
                mention_id: &m.mention_id,
                key,
            }
        })
        .collect()
}

fn singleton_id(mention_id: &str) -> String {
    format!("solo|{mention_id}")
}

pub fn fd_partition(corpus: &Corpus) -> Clustering {
    let mut out = Clustering::new();
    for k in keyed(corpus) {
        let cluster = match &k.key {
            Some((surname, sig)) => format!("fd|{surname}|{}", &sig[..sig_first_len(sig)]),
            None => singleton_id(k.mention_id),
        };
        out.insert(k.mention_id, cluster);
    }
    out
}

fn sig_first_len(sig: &str) -> usize {
    sig.chars().next().map_or(0, char::len_utf8)
}

pub fn ad_partition(corpus: &Corpus) -> Clustering {
    let mut out = Clustering::new();
    for k in keyed(corpus) {
        let cluster = match &k.key {
            Some((surname, sig)) => format!("ad|{surname}|{sig}"),
            None => singleton_id(k.mention_id),
        };
        out.insert(k.mention_id, cluster);
    }
    out
}

pub fn hd_partition(corpus: &Corpus) -> Clustering {
    let keyed = keyed(corpus);

    // FD block -> distinct signatures in it
    let mut blocks: BTreeMap<(&str, &str), BTreeSet<&str>> = BTreeMap::new();
    for k in &keyed {
        if let Some((surname, sig)) = &k.key {
            blocks
                .entry((surname.as_str(), &sig[..sig_first_len(sig)]))
                .or_default()
                .insert(sig.as_str());
        }
    }

    let mut representative: BTreeMap<(&str, &str), String> = BTreeMap::new();
    for ((surname, _), sigs) in &blocks {
        for (sig, rep) in hybrid_groups(sigs) {
            representative.insert((surname, sig), rep.to_string());
        }
    }

    let mut out = Clustering::new();
    for k in &keyed {
        let cluster = match &k.key {
            Some((surname, sig)) => {
                format!(
                    "hd|{surname}|{}",
                    representative[&(surname.as_str(), sig.as_str())]
                )
            }
            None => singleton_id(k.mention_id),
        };
        out.insert(k.mention_id, cluster);
    }
    out
}

/// Maps each signature of one FD block to the representative signature of
/// its hybrid cluster (the longest member).
fn hybrid_groups<'a>(sigs: &BTreeSet<&'a str>) -> Vec<(&'a str, &'a str)> {
    let sigs: Vec<&str> = sigs.iter().copied().collect();
    let mut uf = UnionFind::new(sigs.len());
    for (i, s) in sigs.iter().enumerate() {
        let mut extensions = sigs
            .iter()
            .enumerate()
            .filter(|(_, t)| t.len() > s.len() && t.starts_with(s));
        if let Some((j, _)) = extensions.next() {
            if extensions.next().is_none() {
                uf.union(i, j);
            }
        }
    }
    let mut rep: BTreeMap<usize, &str> = BTreeMap::new();
    for (i, s) in sigs.iter().enumerate() {
        let root = uf.find(i);
        let entry = rep.entry(root).or_insert(s);
        if (s.len(), *s) > (entry.len(), *entry) {
            *entry = s;
        }
    }
    sigs.iter()
        .enumerate()
        .map(|(i, s)| {
            let root = uf.find(i);
            (*s, rep[&root])
        })
        .collect()
}

/// True when every cluster of `fine` lies inside one cluster of `coarse`.
pub fn refines(fine: &Clustering, coarse: &Clustering) -> bool {
    let mut image: BTreeMap<&str, &str> = BTreeMap::new();
    for (m, c) in fine.iter() {
        let Some(target) = coarse.cluster_of(m) else {
            return false;
        };
        if *image.entry(c).or_insert(target) != target {
            return false;
        }
    }
    fine.len() == coarse.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AuthorMention, PaperRecord};

    /// Each name on its own two-author paper with a unique coauthor.
    fn corpus_of(names: &[(&str, &str)]) -> Corpus {
        let papers = names
            .iter()
            .enumerate()
            .map(|(i, (s, g))| {
                PaperRecord::new(
                    format!("p{i}"),
                    vec![
                        AuthorMention::new(*s, *g),
                        AuthorMention::new(format!("Coauthor{}", "x".repeat(i + 1)), "Z."),
                    ],
                )
            })
            .collect();
        Corpus::new(papers).unwrap()
    }

    fn same(c: &Clustering, a: usize, b: usize) -> bool {
        c.cluster_of(&format!("p{a}:0")) == c.cluster_of(&format!("p{b}:0"))
    }

    #[test]
    fn fd_merges_on_first_initial() {
        let c = corpus_of(&[
            ("Renear", "A. H."),
            ("Renear", "A. C."),
            ("Renear", "A."),
            ("Renear", "B."),
        ]);
        let fd = fd_partition(&c);
        assert!(same(&fd, 0, 1));
        assert!(same(&fd, 0, 2));
        assert!(!same(&fd, 0, 3));
    }

    #[test]
    fn ad_needs_identical_signatures() {
        let c = corpus_of(&[
            ("Renear", "A. H."),
            ("Renear", "A."),
            ("Renear", "A. C."),
            ("Renear", "Allen Henry"),
        ]);
        let ad = ad_partition(&c);
        assert!(!same(&ad, 0, 1));
        assert!(!same(&ad, 0, 2));
        assert!(same(&ad, 0, 3));
    }

    #[test]
    fn hd_three_names_three_clusters() {
        let c = corpus_of(&[("Renear", "A."), ("Renear", "A. H."), ("Renear", "A. C.")]);
        let hd = hd_partition(&c);
        assert!(!same(&hd, 0, 1));
        assert!(!same(&hd, 0, 2));
        assert!(!same(&hd, 1, 2));
    }

    #[test]
    fn hd_two_names_one_cluster() {
        let c = corpus_of(&[("Renear", "A."), ("Renear", "A. H.")]);
        assert!(same(&hd_partition(&c), 0, 1));
        let c = corpus_of(&[("Renear", "A. H.")]);
        let hd = hd_partition(&c);
        assert_eq!(hd.cluster_count(), 2);
    }

    #[test]
    fn hd_longer_chains_use_prefix_extension_rule() {
        // [a] has two distinct extensions; [a,h] has exactly one
        let c = corpus_of(&[
            ("Renear", "A."),
            ("Renear", "A. H."),
            ("Renear", "A. H. C."),
        ]);
        let hd = hd_partition(&c);
        assert!(!same(&hd, 0, 1));
        assert!(same(&hd, 1, 2));
        // [a] with a single three-letter extension merges with it
        let c = corpus_of(&[
            ("Renear", "A."),
            ("Renear", "A. H. C."),
            ("Renear", "A. H. C."),
        ]);
        let hd = hd_partition(&c);
        assert!(same(&hd, 0, 1) && same(&hd, 1, 2));
    }

    #[test]
    fn empty_given_names_are_singletons() {
        let c = corpus_of(&[("Renear", ""), ("Renear", "")]);
        for method in IbdMethod::ALL {
            let p = method.partition(&c);
            assert!(!same(&p, 0, 1), "{method:?}");
        }
    }

    #[test]
    fn surnames_compared_exactly() {
        let c = corpus_of(&[
            ("Renear", "A."),
            ("Renaer", "A."),
            ("RENEAR", "a"),
            ("Van der Berg", "H."),
            ("Vanderberg", "H."),
        ]);
        let fd = fd_partition(&c);
        assert!(!same(&fd, 0, 1));
        assert!(same(&fd, 0, 2));
        assert!(same(&fd, 3, 4));
    }

    #[test]
    fn refinement_chain_on_fixture() {
        let c = corpus_of(&[
            ("Renear", "A."),
            ("Renear", "A. H."),
            ("Renear", "A. C."),
            ("Renear", "A. H."),
            ("Kim", "J."),
            ("Kim", "J. W."),
        ]);
        let (fd, ad, hd) = (fd_partition(&c), ad_partition(&c), hd_partition(&c));
        assert!(refines(&ad, &hd));
        assert!(refines(&hd, &fd));
        assert!(!refines(&fd, &ad));
        assert!(fd.cluster_count() <= hd.cluster_count());
        assert!(hd.cluster_count() <= ad.cluster_count());
    }
}
