//! Clustering quality of a predicted author partition against a reference.
//!
//! * K-metric: geometric mean of average cluster purity (ACP, drops when
//!   predicted clusters merge identities) and average author purity (AAP,
//!   drops when identities are split).
//! * Cluster F1: exact-set cluster precision and recall.
//! * M-rate: share of reference identities that are split and/or merged.
//!   It always equals `1 - cR`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::Clustering;
use crate::error::{Error, Result};

/// Contingency counts between predicted clusters (rows) and reference
/// clusters (columns).
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapTable {
    pred_ids: Vec<String>,
    ref_ids: Vec<String>,
    pred_sizes: Vec<usize>,
    ref_sizes: Vec<usize>,
    /// Non-zero cells keyed by (pred index, ref index).
    cells: BTreeMap<(usize, usize), usize>,
    total: usize,
}

impl OverlapTable {
    /// Total number of mentions, `N`.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Number of predicted clusters, `q`.
    pub fn pred_count(&self) -> usize {
        self.pred_ids.len()
    }

    /// Number of reference clusters, `R`.
    pub fn ref_count(&self) -> usize {
        self.ref_ids.len()
    }

    pub fn pred_ids(&self) -> &[String] {
        &self.pred_ids
    }

    pub fn ref_ids(&self) -> &[String] {
        &self.ref_ids
    }

    pub fn pred_size(&self, i: usize) -> usize {
        self.pred_sizes[i]
    }

    pub fn ref_size(&self, j: usize) -> usize {
        self.ref_sizes[j]
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Non-zero cells `((i, j), n_ij)`.
    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.cells.iter().map(|(&k, &v)| (k, v))
    }
}

fn intern<'a>(ids: &mut Vec<String>, index: &mut HashMap<&'a str, usize>, id: &'a str) -> usize {
    *index.entry(id).or_insert_with(|| {
        ids.push(id.to_string());
        ids.len() - 1
    })
}

/// Builds the contingency table; both clusterings must cover the same
/// mentions.
pub fn overlap_table(pred: &Clustering, reference: &Clustering) -> Result<OverlapTable> {
    let (mut only_left, mut only_right) = (0, 0);
    let mut p_iter = pred.iter().peekable();
    let mut r_iter = reference.iter().peekable();
    let mut pairs = Vec::with_capacity(pred.len());
    loop {
        match (p_iter.peek(), r_iter.peek()) {
            (Some((pm, pc)), Some((rm, rc))) => match pm.cmp(rm) {
                std::cmp::Ordering::Equal => {
                    pairs.push((*pc, *rc));
                    p_iter.next();
                    r_iter.next();
                }
                std::cmp::Ordering::Less => {
                    only_left += 1;
                    p_iter.next();
                }
                std::cmp::Ordering::Greater => {
                    only_right += 1;
                    r_iter.next();
                }
            },
            (Some(_), None) => {
                only_left += 1;
                p_iter.next();
            }
            (None, Some(_)) => {
                only_right += 1;
                r_iter.next();
            }
            (None, None) => break,
        }
    }
    if only_left > 0 || only_right > 0 {
        return Err(Error::MentionSetMismatch {
            only_left,
            only_right,
        });
    }
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let (mut pred_ids, mut ref_ids) = (Vec::new(), Vec::new());
    let (mut pred_index, mut ref_index) = (HashMap::new(), HashMap::new());
    let mut cells: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (pc, rc) in pairs.iter().copied() {
        let i = intern(&mut pred_ids, &mut pred_index, pc);
        let j = intern(&mut ref_ids, &mut ref_index, rc);
        *cells.entry((i, j)).or_default() += 1;
    }
    let mut pred_sizes = vec![0; pred_ids.len()];
    let mut ref_sizes = vec![0; ref_ids.len()];
    for (&(i, j), &n) in &cells {
        pred_sizes[i] += n;
        ref_sizes[j] += n;
    }
    Ok(OverlapTable {
        pred_ids,
        ref_ids,
        pred_sizes,
        ref_sizes,
        cells,
        total: pairs.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMetric {
    pub acp: f64,
    pub aap: f64,
    pub k: f64,
}

pub fn k_metric(table: &OverlapTable) -> KMetric {
    let n = table.total as f64;
    let mut acp = 0.0;
    let mut aap = 0.0;
    for ((i, j), nij) in table.cells() {
        let sq = (nij * nij) as f64;
        acp += sq / table.pred_sizes[i] as f64;
        aap += sq / table.ref_sizes[j] as f64;
    }
    let (acp, aap) = (acp / n, aap / n);
    KMetric {
        acp,
        aap,
        k: (acp * aap).sqrt(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterF1 {
    pub cp: f64,
    pub cr: f64,
    pub cf1: f64,
}

/// Number of predicted clusters whose mention set equals a reference
/// cluster's.
pub fn correct_clusters(table: &OverlapTable) -> usize {
    table
        .cells()
        .filter(|&((i, j), n)| n == table.pred_sizes[i] && n == table.ref_sizes[j])
        .count()
}

pub fn cluster_f1(table: &OverlapTable) -> ClusterF1 {
    let a = correct_clusters(table) as f64;
    let cp = a / table.pred_count() as f64;
    let cr = a / table.ref_count() as f64;
    let cf1 = if cp + cr > 0.0 {
        2.0 * cp * cr / (cp + cr)
    } else {
        0.0
    };
    ClusterF1 { cp, cr, cf1 }
}

/// Split/merge status of one reference identity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Misidentification {
    /// Mentions spread over two or more predicted clusters.
    pub split: bool,
    /// Some predicted cluster holding its mentions also holds others'.
    pub merged: bool,
}

impl Misidentification {
    pub fn any(self) -> bool {
        self.split || self.merged
    }
}

/// Flags for every reference cluster, indexed like [`OverlapTable::ref_ids`].
pub fn reference_flags(table: &OverlapTable) -> Vec<Misidentification> {
    let mut spread = vec![0usize; table.ref_count()];
    let mut flags = vec![Misidentification::default(); table.ref_count()];
    for ((i, j), n) in table.cells() {
        spread[j] += 1;
        if table.pred_sizes[i] > n {
            flags[j].merged = true;
        }
    }
    for (f, s) in flags.iter_mut().zip(spread) {
        f.split = s >= 2;
    }
    flags
}

/// Number of reference identities that are split and/or merged.
pub fn misidentified_count(table: &OverlapTable) -> usize {
    reference_flags(table)
        .into_iter()
        .filter(|f| f.any())
        .count()
}

/// Shares of misidentified reference identities by error type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Breakdown {
    pub split_only: f64,
    pub merge_only: f64,
    pub split_and_merge: f64,
}

pub fn m_rate(table: &OverlapTable) -> (f64, Breakdown) {
    let flags = reference_flags(table);
    let (mut split, mut merge, mut both) = (0usize, 0usize, 0usize);
    for f in &flags {
        match (f.split, f.merged) {
            (true, true) => both += 1,
            (true, false) => split += 1,
            (false, true) => merge += 1,
            (false, false) => {}
        }
    }
    let bad = split + merge + both;
    let rate = bad as f64 / flags.len() as f64;
    let breakdown = if bad == 0 {
        Breakdown::default()
    } else {
        let d = bad as f64;
        Breakdown {
            split_only: split as f64 / d,
            merge_only: merge as f64 / d,
            split_and_merge: both as f64 / d,
        }
    };
    (rate, breakdown)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub acp: f64,
    pub aap: f64,
    pub k: f64,
    pub cp: f64,
    pub cr: f64,
    pub cf1: f64,
    pub m_rate: f64,
    pub breakdown: Breakdown,
}

/// All metrics of `pred` measured against `reference`.
pub fn evaluate(pred: &Clustering, reference: &Clustering) -> Result<EvalReport> {
    let table = overlap_table(pred, reference)?;
    let KMetric { acp, aap, k } = k_metric(&table);
    let ClusterF1 { cp, cr, cf1 } = cluster_f1(&table);
    let (m_rate, breakdown) = m_rate(&table);
    Ok(EvalReport {
        acp,
        aap,
        k,
        cp,
        cr,
        cf1,
        m_rate,
        breakdown,
    })
}
