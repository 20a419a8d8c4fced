//! Coauthorship graphs induced by a clustering and their statistics.
//!
//! Nodes are author clusters; two clusters are adjacent when they share at
//! least one byline. Repeated collaboration is ignored and a paper whose
//! mentions collapse into one cluster adds no self-loop.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{Clustering, Corpus};
use crate::error::{Error, Result};
use crate::evalmetrics::{overlap_table, reference_flags};
use crate::names::{in_origin_list, normalize_tokens, OriginList};

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoauthorGraph {
    nodes: Vec<String>,
    adj: Vec<Vec<usize>>,
}

impl CoauthorGraph {
    /// Builds a graph from node labels and index pairs. Self-loops and
    /// duplicate edges are dropped.
    pub fn from_edges(nodes: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); nodes.len()];
        for (a, b) in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        CoauthorGraph { nodes, adj }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Degree of every node keyed by cluster id.
    pub fn degrees(&self) -> BTreeMap<String, usize> {
        self.nodes
            .iter()
            .cloned()
            .zip(self.adj.iter().map(Vec::len))
            .collect()
    }
}

fn cluster_for<'a>(clustering: &'a Clustering, mention_id: &str) -> Result<&'a str> {
    clustering
        .cluster_of(mention_id)
        .ok_or_else(|| Error::MissingMentions(vec![mention_id.to_string()]))
}

pub fn build_graph(corpus: &Corpus, clustering: &Clustering) -> Result<CoauthorGraph> {
    let mut ids: BTreeSet<&str> = BTreeSet::new();
    for (_, m) in corpus.mentions() {
        ids.insert(cluster_for(clustering, &m.mention_id)?);
    }
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut edges = Vec::new();
    for paper in corpus.papers() {
        let mut members: Vec<usize> = paper
            .authors
            .iter()
            .map(|m| index[cluster_for(clustering, &m.mention_id).expect("checked above")])
            .collect();
        members.sort_unstable();
        members.dedup();
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k + 1..] {
                edges.push((a, b));
            }
        }
    }
    Ok(CoauthorGraph::from_edges(
        ids.into_iter().map(str::to_string).collect(),
        edges,
    ))
}

/// Distinct papers per cluster.
pub fn productivity(corpus: &Corpus, clustering: &Clustering) -> Result<BTreeMap<String, usize>> {
    let mut out: BTreeMap<String, usize> = BTreeMap::new();
    for paper in corpus.papers() {
        let clusters: BTreeSet<&str> = paper
            .authors
            .iter()
            .map(|m| cluster_for(clustering, &m.mention_id))
            .collect::<Result<_>>()?;
        for c in clusters {
            *out.entry(c.to_string()).or_default() += 1;
        }
    }
    Ok(out)
}

/// Sizes of the connected components, largest first.
pub fn component_sizes(graph: &CoauthorGraph) -> Vec<usize> {
    let n = graph.node_count();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in graph.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Number of components and the share of nodes in the largest one.
pub fn components(graph: &CoauthorGraph) -> (usize, f64) {
    let sizes = component_sizes(graph);
    let ratio = match sizes.first() {
        Some(&largest) => largest as f64 / graph.node_count() as f64,
        None => 0.0,
    };
    (sizes.len(), ratio)
}

/// `2E / (N (N - 1))`; undefined below two nodes.
pub fn density(graph: &CoauthorGraph) -> Option<f64> {
    let n = graph.node_count() as f64;
    (graph.node_count() >= 2).then(|| 2.0 * graph.edge_count() as f64 / (n * (n - 1.0)))
}

/// Mean geodesic length over unordered reachable pairs.
pub fn avg_shortest_path(graph: &CoauthorGraph) -> Option<f64> {
    let n = graph.node_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let mut visited = Vec::new();
    let (mut total, mut pairs) = (0u64, 0u64);
    for source in 0..n {
        if graph.degree(source) == 0 {
            continue;
        }
        dist[source] = 0;
        visited.push(source);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v];
            for &w in graph.neighbors(v) {
                if dist[w] == u32::MAX {
                    dist[w] = d + 1;
                    visited.push(w);
                    queue.push_back(w);
                    // each unordered pair once: count targets above the source
                    if w > source {
                        total += u64::from(d + 1);
                        pairs += 1;
                    }
                }
            }
        }
        for v in visited.drain(..) {
            dist[v] = u32::MAX;
        }
    }
    (pairs > 0).then(|| total as f64 / pairs as f64)
}

pub fn triangle_count(graph: &CoauthorGraph) -> u64 {
    let mut count = 0u64;
    for u in 0..graph.node_count() {
        let nu = graph.neighbors(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            // common neighbours w > v via sorted merge
            let nv = graph.neighbors(v);
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[i] > v {
                            count += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    count
}

/// Global clustering coefficient: 3 x triangles / connected triples.
pub fn transitivity(graph: &CoauthorGraph) -> Option<f64> {
    let triples: u64 = (0..graph.node_count())
        .map(|v| {
            let d = graph.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    (triples > 0).then(|| 3.0 * triangle_count(graph) as f64 / triples as f64)
}

/// Pearson correlation of endpoint degrees, each edge taken in both
/// directions; undefined when endpoint degrees do not vary.
pub fn assortativity(graph: &CoauthorGraph) -> Option<f64> {
    let (mut m, mut s1, mut s2, mut s11) = (0i128, 0i128, 0i128, 0i128);
    for (u, v) in graph.edges() {
        let (du, dv) = (graph.degree(u) as i128, graph.degree(v) as i128);
        m += 2;
        s1 += du + dv;
        s2 += du * du + dv * dv;
        s11 += 2 * du * dv;
    }
    let numerator = m * s11 - s1 * s1;
    let denominator = m * s2 - s1 * s1;
    (denominator > 0).then(|| numerator as f64 / denominator as f64)
}

fn mean_sd(values: impl Iterator<Item = usize> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    if n == 0.0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<usize>() as f64 / n;
    let var = values.map(|v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Network properties of one clustering. Undefined values serialize as
/// `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub unique_authors: usize,
    pub n_edges: usize,
    pub density: Option<f64>,
    pub avg_productivity: f64,
    pub sd_productivity: f64,
    pub avg_degree: f64,
    pub sd_degree: f64,
    pub n_components: usize,
    pub largest_component_ratio: f64,
    pub avg_shortest_path: Option<f64>,
    pub transitivity: Option<f64>,
    pub assortativity: Option<f64>,
}

pub fn compute_stats(corpus: &Corpus, clustering: &Clustering) -> Result<NetworkStats> {
    if corpus.mention_count() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let graph = build_graph(corpus, clustering)?;
    let prod = productivity(corpus, clustering)?;
    Ok(stats_of(&graph, &prod))
}

/// Assembles [`NetworkStats`] from a graph and the productivity map of
/// the same clustering.
pub fn stats_of(graph: &CoauthorGraph, prod: &BTreeMap<String, usize>) -> NetworkStats {
    let (avg_productivity, sd_productivity) = mean_sd(prod.values().copied());
    let (avg_degree, sd_degree) = mean_sd((0..graph.node_count()).map(|v| graph.degree(v)));
    let (n_components, largest_component_ratio) = components(graph);
    NetworkStats {
        unique_authors: graph.node_count(),
        n_edges: graph.edge_count(),
        density: density(graph),
        avg_productivity,
        sd_productivity,
        avg_degree,
        sd_degree,
        n_components,
        largest_component_ratio,
        avg_shortest_path: avg_shortest_path(graph),
        transitivity: transitivity(graph),
        assortativity: assortativity(graph),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub value: usize,
    pub count: usize,
    /// Share of authors whose value is at least `value`.
    pub cum_fraction: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DistributionCurve {
    pub points: Vec<CurvePoint>,
}

impl DistributionCurve {
    /// Writes `value,count,cum_fraction` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "value,count,cum_fraction")?;
        for p in &self.points {
            writeln!(out, "{},{},{}", p.value, p.count, p.cum_fraction)?;
        }
        Ok(())
    }
}

/// Complementary cumulative distribution over distinct values, ascending.
/// An empty input gives an empty curve.
pub fn cumulative_distribution(values: impl IntoIterator<Item = usize>) -> DistributionCurve {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_default() += 1;
    }
    let total: usize = counts.values().sum();
    let mut at_or_above = total;
    let points = counts
        .into_iter()
        .map(|(value, count)| {
            let p = CurvePoint {
                value,
                count,
                cum_fraction: at_or_above as f64 / total as f64,
            };
            at_or_above -= count;
            p
        })
        .collect();
    DistributionCurve { points }
}

/// Maps every reference cluster to the compared cluster holding most of
/// its mentions; ties go to the lexicographically smallest compared id.
pub fn crosswalk(reference: &Clustering, compared: &Clustering) -> BTreeMap<String, String> {
    let mut overlap: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for (m, r) in reference.iter() {
        if let Some(c) = compared.cluster_of(m) {
            *overlap.entry((r, c)).or_default() += 1;
        }
    }
    let mut best: BTreeMap<&str, (&str, usize)> = BTreeMap::new();
    // keys iterate with compared ids ascending, so strict `>` keeps the
    // smallest id on ties
    for ((r, c), n) in overlap {
        let entry = best.entry(r).or_insert((c, n));
        if n > entry.1 {
            *entry = (c, n);
        }
    }
    best.into_iter()
        .map(|(r, (c, _))| (r.to_string(), c.to_string()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopKReport {
    pub k: usize,
    /// k-th largest reference value; admits at least `k` reference authors.
    pub threshold: usize,
    /// Reference authors at or above the threshold, highest value first.
    pub authors_at_or_above: Vec<String>,
    pub ref_count_at_threshold: usize,
    pub cmp_count_at_threshold: usize,
    /// Reference top-10 authors whose counterpart is in the compared top 10.
    pub top10_overlap: usize,
    pub top1_changed: bool,
}

/// Ids ordered by value descending, then id ascending.
fn ranked(values: &BTreeMap<String, usize>) -> Vec<(&str, usize)> {
    let mut v: Vec<(&str, usize)> = values.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    v
}

pub fn top_k_report(
    ref_values: &BTreeMap<String, usize>,
    cmp_values: &BTreeMap<String, usize>,
    crosswalk: &BTreeMap<String, String>,
    k: usize,
) -> TopKReport {
    let ref_ranked = ranked(ref_values);
    let cmp_ranked = ranked(cmp_values);
    let threshold = match ref_ranked.get(k.saturating_sub(1)).or(ref_ranked.last()) {
        Some(&(_, v)) => v,
        None => 0,
    };
    let authors_at_or_above: Vec<String> = ref_ranked
        .iter()
        .take_while(|(_, v)| *v >= threshold)
        .map(|(id, _)| id.to_string())
        .collect();
    let cmp_count_at_threshold = cmp_ranked.iter().filter(|(_, v)| *v >= threshold).count();

    let cmp_top10: BTreeSet<&str> = cmp_ranked.iter().take(10).map(|(id, _)| *id).collect();
    let top10_overlap = ref_ranked
        .iter()
        .take(10)
        .filter(|(id, _)| {
            crosswalk
                .get(*id)
                .is_some_and(|c| cmp_top10.contains(c.as_str()))
        })
        .count();
    let top1_changed = match (ref_ranked.first(), cmp_ranked.first()) {
        (Some((r, _)), Some((c, _))) => crosswalk.get(*r).map(String::as_str) != Some(*c),
        _ => false,
    };
    TopKReport {
        k,
        threshold,
        ref_count_at_threshold: authors_at_or_above.len(),
        authors_at_or_above,
        cmp_count_at_threshold,
        top10_overlap,
        top1_changed,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MisattributionShare {
    /// Share of reference authors whose majority surname is on the list.
    pub population_share: f64,
    /// The same share among misidentified reference authors.
    pub misidentified_share: f64,
}

pub fn misattribution_share(
    reference: &Clustering,
    pred: &Clustering,
    corpus: &Corpus,
    origins: &OriginList,
) -> Result<MisattributionShare> {
    if origins.is_empty() {
        return Err(Error::EmptyOriginList);
    }
    let table = overlap_table(pred, reference)?;
    let flags = reference_flags(&table);

    let mut surnames: HashMap<&str, BTreeMap<String, usize>> = HashMap::new();
    for (_, m) in corpus.mentions() {
        let r = cluster_for(reference, &m.mention_id)?;
        let key = normalize_tokens(&m.surname_raw).join(" ");
        *surnames.entry(r).or_default().entry(key).or_default() += 1;
    }
    let (mut listed, mut bad, mut bad_listed) = (0usize, 0usize, 0usize);
    for (j, ref_id) in table.ref_ids().iter().enumerate() {
        let majority = surnames
            .get(ref_id.as_str())
            .and_then(|counts| {
                counts
                    .iter()
                    .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
                    .map(|(s, _)| s.clone())
            })
            .unwrap_or_default();
        let tokens: Vec<&str> = majority.split(' ').collect();
        let in_list = in_origin_list(&tokens, origins);
        listed += usize::from(in_list);
        if flags[j].any() {
            bad += 1;
            bad_listed += usize::from(in_list);
        }
    }
    Ok(MisattributionShare {
        population_share: listed as f64 / table.ref_count() as f64,
        misidentified_share: if bad == 0 {
            0.0
        } else {
            bad_listed as f64 / bad as f64
        },
    })
}
