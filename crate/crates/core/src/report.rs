//! Multi-method comparison against a reference clustering.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Clustering, Corpus};
use crate::error::{Error, Result};
use crate::evalmetrics::{evaluate, EvalReport};
use crate::heuristic::{cluster, HeuristicOutput};
use crate::ibd::IbdMethod;
use crate::names::{NicknameTable, OriginList};
use crate::netstats::{
    build_graph, crosswalk, cumulative_distribution, misattribution_share, productivity, stats_of,
    top_k_report, DistributionCurve, MisattributionShare, NetworkStats, TopKReport,
};

pub const TOP_K: [usize; 3] = [1, 10, 20];

/// A disambiguation method selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Ibd(IbdMethod),
    Heuristic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ibd(m) => m.short_name(),
            Method::Heuristic => "heuristic",
        }
    }
}

/// Clusters produced by one method plus the heuristic side outputs.
pub struct RunOutput {
    pub clustering: Clustering,
    pub heuristic: Option<HeuristicOutput>,
}

pub fn run_method(
    method: Method,
    corpus: &Corpus,
    nicknames: &NicknameTable,
    origins: &OriginList,
) -> RunOutput {
    match method {
        Method::Ibd(m) => RunOutput {
            clustering: m.partition(corpus),
            heuristic: None,
        },
        Method::Heuristic => {
            let out = cluster(corpus, nicknames, origins);
            RunOutput {
                clustering: out.clustering.clone(),
                heuristic: Some(out),
            }
        }
    }
}

/// `100 * (value - reference) / reference`; undefined for a zero or
/// missing reference.
pub fn percent_change(value: Option<f64>, reference: Option<f64>) -> Option<f64> {
    match (value, reference) {
        (Some(v), Some(r)) if r != 0.0 => Some(100.0 * (v - r) / r),
        _ => None,
    }
}

/// Percent change of every [`NetworkStats`] field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsChange {
    pub unique_authors: Option<f64>,
    pub n_edges: Option<f64>,
    pub density: Option<f64>,
    pub avg_productivity: Option<f64>,
    pub sd_productivity: Option<f64>,
    pub avg_degree: Option<f64>,
    pub sd_degree: Option<f64>,
    pub n_components: Option<f64>,
    pub largest_component_ratio: Option<f64>,
    pub avg_shortest_path: Option<f64>,
    pub transitivity: Option<f64>,
    pub assortativity: Option<f64>,
}

impl StatsChange {
    pub fn between(method: &NetworkStats, truth: &NetworkStats) -> Self {
        let n = |v: usize| Some(v as f64);
        StatsChange {
            unique_authors: percent_change(n(method.unique_authors), n(truth.unique_authors)),
            n_edges: percent_change(n(method.n_edges), n(truth.n_edges)),
            density: percent_change(method.density, truth.density),
            avg_productivity: percent_change(
                Some(method.avg_productivity),
                Some(truth.avg_productivity),
            ),
            sd_productivity: percent_change(
                Some(method.sd_productivity),
                Some(truth.sd_productivity),
            ),
            avg_degree: percent_change(Some(method.avg_degree), Some(truth.avg_degree)),
            sd_degree: percent_change(Some(method.sd_degree), Some(truth.sd_degree)),
            n_components: percent_change(n(method.n_components), n(truth.n_components)),
            largest_component_ratio: percent_change(
                Some(method.largest_component_ratio),
                Some(truth.largest_component_ratio),
            ),
            avg_shortest_path: percent_change(method.avg_shortest_path, truth.avg_shortest_path),
            transitivity: percent_change(method.transitivity, truth.transitivity),
            assortativity: percent_change(method.assortativity, truth.assortativity),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopKSection {
    pub productivity: Vec<TopKReport>,
    pub degree: Vec<TopKReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: String,
    pub unique_authors: usize,
    pub unique_authors_change_pct: Option<f64>,
    pub eval: EvalReport,
    pub stats: NetworkStats,
    pub stats_change_pct: StatsChange,
    pub top_k: TopKSection,
    /// Present when an origin list was supplied.
    pub misattribution: Option<MisattributionShare>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub papers: usize,
    pub mentions: usize,
    pub methods: Vec<MethodReport>,
}

/// Per-clustering measurements reused by the report and the curves.
pub struct Measured {
    pub stats: NetworkStats,
    pub productivity: BTreeMap<String, usize>,
    pub degree: BTreeMap<String, usize>,
}

pub fn measure(corpus: &Corpus, clustering: &Clustering) -> Result<Measured> {
    if corpus.mention_count() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let graph = build_graph(corpus, clustering)?;
    let productivity = productivity(corpus, clustering)?;
    Ok(Measured {
        stats: stats_of(&graph, &productivity),
        degree: graph.degrees(),
        productivity,
    })
}

impl Measured {
    pub fn productivity_curve(&self) -> DistributionCurve {
        cumulative_distribution(self.productivity.values().copied())
    }

    pub fn degree_curve(&self) -> DistributionCurve {
        cumulative_distribution(self.degree.values().copied())
    }
}

fn method_report(
    name: &str,
    corpus: &Corpus,
    truth: &Clustering,
    truth_measured: &Measured,
    clustering: &Clustering,
    measured: &Measured,
    origins: Option<&OriginList>,
) -> Result<MethodReport> {
    let walk = crosswalk(truth, clustering);
    let top = |reference: &BTreeMap<String, usize>, compared: &BTreeMap<String, usize>| {
        TOP_K
            .iter()
            .map(|&k| top_k_report(reference, compared, &walk, k))
            .collect()
    };
    let misattribution = match origins {
        Some(list) => Some(misattribution_share(truth, clustering, corpus, list)?),
        None => None,
    };
    Ok(MethodReport {
        method: name.to_string(),
        unique_authors: measured.stats.unique_authors,
        unique_authors_change_pct: percent_change(
            Some(measured.stats.unique_authors as f64),
            Some(truth_measured.stats.unique_authors as f64),
        ),
        eval: evaluate(clustering, truth)?,
        stats_change_pct: StatsChange::between(&measured.stats, &truth_measured.stats),
        stats: measured.stats.clone(),
        top_k: TopKSection {
            productivity: top(&truth_measured.productivity, &measured.productivity),
            degree: top(&truth_measured.degree, &measured.degree),
        },
        misattribution,
    })
}

/// Report and curves of one compared clustering.
pub struct Compared {
    pub report: MethodReport,
    pub productivity_curve: DistributionCurve,
    pub degree_curve: DistributionCurve,
}

/// Measures every named clustering against `truth`. The truth itself is
/// reported first under the name `truth`. Methods are measured on
/// separate threads; the output order follows `methods`.
pub fn compare(
    corpus: &Corpus,
    truth: &Clustering,
    methods: &[(String, Clustering)],
    origins: Option<&OriginList>,
) -> Result<(ComparisonReport, Vec<Compared>)> {
    truth.check_total(corpus)?;
    for (_, c) in methods {
        c.check_total(corpus)?;
    }
    let truth_measured = measure(corpus, truth)?;
    let one = |name: &str, clustering: &Clustering| -> Result<Compared> {
        let measured = measure(corpus, clustering)?;
        let report = method_report(
            name,
            corpus,
            truth,
            &truth_measured,
            clustering,
            &measured,
            origins,
        )?;
        Ok(Compared {
            report,
            productivity_curve: measured.productivity_curve(),
            degree_curve: measured.degree_curve(),
        })
    };
    let mut compared = vec![one("truth", truth)?];
    let results: Vec<Result<Compared>> = std::thread::scope(|s| {
        let handles: Vec<_> = methods
            .iter()
            .map(|(name, c)| s.spawn(|| one(name, c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("comparison thread panicked"))
            .collect()
    });
    for r in results {
        compared.push(r?);
    }
    let report = ComparisonReport {
        papers: corpus.papers().len(),
        mentions: corpus.mention_count(),
        methods: compared.iter().map(|c| c.report.clone()).collect(),
    };
    Ok((report, compared))
}

/// Writes `<method>_productivity.csv` and `<method>_degree.csv` for every
/// compared clustering.
pub fn write_curves(dir: &Path, compared: &[Compared]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for c in compared {
        for (measure, curve) in [
            ("productivity", &c.productivity_curve),
            ("degree", &c.degree_curve),
        ] {
            let path = dir.join(format!("{}_{measure}.csv", c.report.method));
            write_curve(curve, &path)?;
        }
    }
    Ok(())
}

pub fn write_curve(curve: &DistributionCurve, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    curve.write_csv(&mut buf).map_err(|e| Error::io(path, e))?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Keeps the labels of mentions present in `corpus` (for label files that
/// also cover filtered-out papers) and checks the result is total.
pub fn restrict_to_corpus(labels: &Clustering, corpus: &Corpus) -> Result<Clustering> {
    let mut out = Clustering::new();
    let mut missing = Vec::new();
    for id in corpus.mention_ids() {
        match labels.cluster_of(id) {
            Some(c) => out.insert(id, c),
            None => missing.push(id.to_string()),
        }
    }
    if missing.is_empty() {
        Ok(out)
    } else {
        Err(Error::MissingMentions(missing))
    }
}
