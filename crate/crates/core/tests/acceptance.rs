//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use authnet::corpus::{
    generate_synthetic, AuthorMention, Clustering, Corpus, PaperRecord, SyntheticSpec,
};
use authnet::evalmetrics::{correct_clusters, evaluate, misidentified_count, overlap_table};
use authnet::heuristic::{
    affiliation_similarity, candidate_pairs, cluster, coauthor_similarity, Outcome, PairKind,
};
use authnet::ibd::{refines, IbdMethod};
use authnet::names::{NicknameTable, OriginList};
use authnet::netstats::{
    assortativity, avg_shortest_path, components, compute_stats, density, misattribution_share,
    transitivity, CoauthorGraph,
};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn close_opt(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => close(x, y, tol),
        _ => false,
    }
}

// ---------------------------------------------------------------- 1

struct Brute {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl Brute {
    fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x).count()
    }

    fn edges(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    fn density(&self) -> Option<f64> {
        (self.n >= 2).then(|| 2.0 * self.edges() as f64 / (self.n * (self.n - 1)) as f64)
    }

    /// Floyd-Warshall hop distances.
    fn distances(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.n;
        let mut d = vec![vec![None; n]; n];
        for i in 0..n {
            d[i][i] = Some(0);
            for j in 0..n {
                if self.adj[i][j] {
                    d[i][j] = Some(1);
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|c| a + b < c) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        d
    }

    fn components(&self) -> (usize, f64) {
        let d = self.distances();
        let classes: BTreeSet<Vec<usize>> = (0..self.n)
            .map(|i| (0..self.n).filter(|&j| d[i][j].is_some()).collect())
            .collect();
        let largest = classes.iter().map(Vec::len).max().unwrap_or(0);
        let ratio = if self.n == 0 {
            0.0
        } else {
            largest as f64 / self.n as f64
        };
        (classes.len(), ratio)
    }

    fn avg_shortest_path(&self) -> Option<f64> {
        let d = self.distances();
        let (mut sum, mut pairs) = (0usize, 0usize);
        for i in 0..self.n {
            for j in i + 1..self.n {
                if let Some(x) = d[i][j] {
                    sum += x;
                    pairs += 1;
                }
            }
        }
        (pairs > 0).then(|| sum as f64 / pairs as f64)
    }

    fn transitivity(&self) -> Option<f64> {
        let a = &self.adj;
        let mut triangles = 0usize;
        let mut triples = 0usize;
        for i in 0..self.n {
            for j in i + 1..self.n {
                for k in j + 1..self.n {
                    if a[i][j] && a[j][k] && a[i][k] {
                        triangles += 1;
                    }
                }
            }
        }
        for c in 0..self.n {
            for u in 0..self.n {
                for w in u + 1..self.n {
                    if a[c][u] && a[c][w] {
                        triples += 1;
                    }
                }
            }
        }
        (triples > 0).then(|| 3.0 * triangles as f64 / triples as f64)
    }

    /// Pearson correlation over both orientations of every edge.
    fn assortativity(&self) -> Option<f64> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.adj[i][j] {
                    xs.push(self.degree(i) as f64);
                    ys.push(self.degree(j) as f64);
                }
            }
        }
        if xs.is_empty() {
            return None;
        }
        let m = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        (vx > 1e-12 && vy > 1e-12).then(|| cov / (vx * vy).sqrt())
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..200 {
        let n = rng.random_range(0..=12);
        let p: f64 = rng.random_range(0.0..0.7);
        let mut adj = vec![vec![false; n]; n];
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    adj[i][j] = true;
                    adj[j][i] = true;
                    edges.push((i, j));
                }
            }
        }
        let brute = Brute { n, adj };
        let g = CoauthorGraph::from_edges((0..n).map(|i| format!("v{i:02}")).collect(), edges);
        let tol = 1e-9;
        let (nc, ratio) = components(&g);
        let (bnc, bratio) = brute.components();
        let ok = close_opt(density(&g), brute.density(), tol)
            && nc == bnc
            && close(ratio, bratio, tol)
            && close_opt(avg_shortest_path(&g), brute.avg_shortest_path(), tol)
            && close_opt(transitivity(&g), brute.transitivity(), tol)
            && close_opt(assortativity(&g), brute.assortativity(), tol);
        check(ok, || {
            format!("graph {case} (n={n}) disagrees with brute force")
        })?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("200 graphs agree within 1e-9 in {elapsed:.2?}"))
}

// ---------------------------------------------------------------- 2

fn random_partition(rng: &mut ChaCha8Rng, n: usize, prefix: &str) -> Clustering {
    let k = rng.random_range(1..=n);
    let mut c = Clustering::new();
    for i in 0..n {
        c.insert(
            format!("m{i:02}"),
            format!("{prefix}{}", rng.random_range(0..k)),
        );
    }
    c
}

fn criterion_2() -> Verdict {
    let reference = Clustering::from_groups(&[vec!["a1", "a2"], vec!["a3", "a4"]]).unwrap();
    let pred = Clustering::from_groups(&[vec!["a1", "a2", "a3"], vec!["a4"]]).unwrap();
    let r = evaluate(&pred, &reference).map_err(|e| e.to_string())?;
    let exact = 4.0 * f64::EPSILON;
    check(close(r.acp, 2.0 / 3.0, exact), || format!("ACP {}", r.acp))?;
    check(close(r.aap, 0.75, exact), || format!("AAP {}", r.aap))?;
    check(close(r.k, 0.5f64.sqrt(), exact), || format!("K {}", r.k))?;
    check(r.cf1 == 0.0, || format!("cF1 {}", r.cf1))?;
    check(r.m_rate == 1.0, || format!("m_rate {}", r.m_rate))?;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..100 {
        let n = rng.random_range(1..=12);
        let p = random_partition(&mut rng, n, "p");
        let q = random_partition(&mut rng, n, "r");
        let table = overlap_table(&p, &q).map_err(|e| e.to_string())?;
        // misidentified / R == 1 - correct / R as rationals over R
        check(
            misidentified_count(&table) == table.ref_count() - correct_clusters(&table),
            || format!("pair {case}: m_rate numerator differs from 1 - cR"),
        )?;
        let r = evaluate(&p, &q).map_err(|e| e.to_string())?;
        check(close(r.m_rate, 1.0 - r.cr, exact), || {
            format!("pair {case}: m_rate {} vs 1 - cR {}", r.m_rate, 1.0 - r.cr)
        })?;
    }
    Ok("fixture exact; m_rate = 1 - cR on 100 random pairs".into())
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0;
    for i in 0..50 {
        let spec = SyntheticSpec {
            n_authors: rng.random_range(50..400),
            n_papers: rng.random_range(30..250),
            surname_pool_size: rng.random_range(10..200),
            collision_pool_share: rng.random_range(0.0..0.8),
            two_token_given_probability: rng.random_range(0.0..1.0),
            middle_initial_drop_probability: rng.random_range(0.0..0.5),
            mean_team_size: rng.random_range(2.0..6.0),
            seed: 1000 + i,
            ..SyntheticSpec::default()
        };
        let corpus = generate_synthetic(&spec).map_err(|e| e.to_string())?.corpus;
        let fd = IbdMethod::FirstInitial.partition(&corpus);
        let hd = IbdMethod::Hybrid.partition(&corpus);
        let ad = IbdMethod::AllInitials.partition(&corpus);
        let ok = refines(&ad, &hd)
            && refines(&hd, &fd)
            && fd.cluster_count() <= hd.cluster_count()
            && hd.cluster_count() <= ad.cluster_count();
        violations += usize::from(!ok);
    }
    check(violations == 0, || format!("{violations} violations"))?;
    Ok("AD refines HD refines FD on 50 corpora, 0 violations".into())
}

// ---------------------------------------------------------------- 4

fn default_corpus(
    seed: u64,
    collision_share: f64,
) -> Result<(Corpus, Clustering, OriginList), String> {
    let spec = SyntheticSpec {
        collision_pool_share: collision_share,
        seed,
        ..SyntheticSpec::default()
    };
    let s = generate_synthetic(&spec).map_err(|e| e.to_string())?;
    Ok((s.corpus, s.truth, OriginList::new(s.origins)))
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let (corpus, truth, _) = default_corpus(7, 0.3)?;
    let count = |m: IbdMethod| m.partition(&corpus).cluster_count();
    let (fd, hd, ad) = (
        count(IbdMethod::FirstInitial),
        count(IbdMethod::Hybrid),
        count(IbdMethod::AllInitials),
    );
    let t = truth.cluster_count();
    let elapsed = start.elapsed();
    let summary = format!(
        "{} papers, {} mentions: FD {fd} < HD {hd} < AD {ad} < truth {t} in {elapsed:.2?}",
        corpus.papers().len(),
        corpus.mention_count()
    );
    check(fd < hd && hd < ad && ad < t, || {
        format!("ordering broken: {summary}")
    })?;
    check(elapsed < Duration::from_secs(60), || {
        format!("too slow: {summary}")
    })?;
    Ok(summary)
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Verdict {
    for seed in 1..=5 {
        let (corpus, truth, _) = default_corpus(seed, 0.3)?;
        let fd = IbdMethod::FirstInitial.partition(&corpus);
        let t = compute_stats(&corpus, &truth).map_err(|e| e.to_string())?;
        let f = compute_stats(&corpus, &fd).map_err(|e| e.to_string())?;
        let up = [
            ("density", t.density, f.density),
            (
                "avg_productivity",
                Some(t.avg_productivity),
                Some(f.avg_productivity),
            ),
            ("avg_degree", Some(t.avg_degree), Some(f.avg_degree)),
            (
                "largest_component_ratio",
                Some(t.largest_component_ratio),
                Some(f.largest_component_ratio),
            ),
        ];
        let down = [
            (
                "n_components",
                Some(t.n_components as f64),
                Some(f.n_components as f64),
            ),
            ("transitivity", t.transitivity, f.transitivity),
            ("assortativity", t.assortativity, f.assortativity),
        ];
        for (name, truth_v, fd_v) in up {
            check(
                matches!((truth_v, fd_v), (Some(a), Some(b)) if b > a),
                || format!("seed {seed}: {name} did not increase ({truth_v:?} -> {fd_v:?})"),
            )?;
        }
        for (name, truth_v, fd_v) in down {
            check(
                matches!((truth_v, fd_v), (Some(a), Some(b)) if b < a),
                || format!("seed {seed}: {name} did not decrease ({truth_v:?} -> {fd_v:?})"),
            )?;
        }
    }
    Ok("FD vs truth: all 7 directions hold on seeds 1-5".into())
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Verdict {
    let mut lines = Vec::new();
    for seed in 1..=5 {
        let (corpus, truth, origins) = default_corpus(seed, 0.4)?;
        for method in IbdMethod::ALL {
            let pred = method.partition(&corpus);
            let s = misattribution_share(&truth, &pred, &corpus, &origins)
                .map_err(|e| e.to_string())?;
            check(s.misidentified_share > s.population_share, || {
                format!(
                    "seed {seed} {}: misidentified share {:.3} <= population share {:.3}",
                    method.short_name(),
                    s.misidentified_share,
                    s.population_share
                )
            })?;
            if seed == 1 {
                lines.push(format!(
                    "{} {:.3}>{:.3}",
                    method.short_name(),
                    s.misidentified_share,
                    s.population_share
                ));
            }
        }
    }
    Ok(format!("holds on seeds 1-5 (seed 1: {})", lines.join(", ")))
}

// ---------------------------------------------------------------- 7

fn single_author_papers(names: &[AuthorMention]) -> Corpus {
    let papers = names
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let filler = AuthorMention::new("Filler", char::from(b'a' + i as u8).to_string());
            PaperRecord::new(format!("p{i}"), vec![a.clone(), filler])
        })
        .collect();
    Corpus::new(papers).unwrap()
}

fn full(surname: &str, given: &str) -> AuthorMention {
    let initials: Vec<String> = given
        .split_whitespace()
        .map(|t| format!("{}.", &t[..1]))
        .collect();
    AuthorMention::new(surname, initials.join(" ")).with_full(given)
}

fn case_of(corpus: &Corpus, origins: &OriginList) -> Vec<(u8, Option<u8>)> {
    candidate_pairs(corpus, &NicknameTable::bundled(), origins)
        .into_iter()
        .filter(|p| p.a == "p0:0" && p.b == "p1:0")
        .map(|p| (p.step, p.case))
        .collect()
}

fn criterion_7() -> Verdict {
    let a = AuthorMention::new("X", "Y.").with_affiliation("alpha beta gamma delta epsilon");
    let b = AuthorMention::new("X", "Y.").with_affiliation("alpha beta gamma delta zeta eta theta");
    let aff = affiliation_similarity(&a, &b, &[]);
    check(aff == 0.8, || format!("affiliation similarity {aff}"))?;

    let c = Corpus::new(vec![
        PaperRecord::new(
            "p1",
            vec![AuthorMention::new("Wang", "S."), full("Renear", "Allen")],
        ),
        PaperRecord::new(
            "p2",
            vec![AuthorMention::new("Wang", "S."), full("Renear", "Allen")],
        ),
        PaperRecord::new(
            "p3",
            vec![
                AuthorMention::new("Wang", "S."),
                AuthorMention::new("Renear", "A."),
            ],
        ),
    ])
    .unwrap();
    let (c_full, c_init) = (
        coauthor_similarity(&c, "p1:0", "p2:0"),
        coauthor_similarity(&c, "p1:0", "p3:0"),
    );
    check(c_full == 1.0 && c_init == 0.3, || {
        format!("coauthor scores {c_full}, {c_init}")
    })?;

    let renear = single_author_papers(&[
        AuthorMention::new("Renear", "A."),
        AuthorMention::new("Renear", "A. H."),
        AuthorMention::new("Renear", "A. C."),
    ]);
    let hd = IbdMethod::Hybrid.partition(&renear);
    let ids: BTreeSet<&str> = (0..3)
        .map(|i| hd.cluster_of(&format!("p{i}:0")).unwrap())
        .collect();
    check(ids.len() == 3, || {
        format!("HD gave {} Renear clusters", ids.len())
    })?;

    let none = OriginList::default();
    let cases = [
        (
            full("Dupont", "Jeanfrancois"),
            full("Dupont", "Jean Francois"),
            1,
        ),
        (full("Ahmed", "Zak"), full("Ahmed", "Zakaria"), 2),
        (full("Larsen", "Bjoern"), full("Larsen", "Bjorn"), 3),
        (full("Kim", "Jin"), full("Jin", "Kim"), 4),
    ];
    for (x, y, case) in cases {
        let got = case_of(&single_author_papers(&[x, y]), &none);
        check(got == [(4, Some(case))], || {
            format!("case {case} gave {got:?}")
        })?;
    }
    let liu_li = single_author_papers(&[full("Liu", "John"), full("Li", "John")]);
    let asian = OriginList::new(["liu", "li"]);
    let got = candidate_pairs(&liu_li, &NicknameTable::bundled(), &asian);
    check(got.is_empty(), || format!("Liu/Li produced {got:?}"))?;
    Ok(
        "affiliation 0.8, coauthor 1.0/0.3, HD Renear 3 clusters, cases 1-4, Liu/Li excluded"
            .into(),
    )
}

// ---------------------------------------------------------------- 8

/// Base-26 digits written as doubled letters, so generated names survive
/// normalization and any two differ by at least two edits.
fn letters(mut n: usize) -> String {
    let mut s = String::new();
    loop {
        let c = char::from(b'a' + (n % 26) as u8);
        s.insert(0, c);
        s.insert(0, c);
        n /= 26;
        if n == 0 {
            return s;
        }
    }
}

fn criterion_8() -> Verdict {
    // distinct authors rarely share a name, and every mention carries the
    // author's email
    let spec = SyntheticSpec {
        n_authors: 3000,
        n_papers: 1500,
        surname_pool_size: 20_000,
        surname_zipf_exponent: 0.01,
        collision_pool_share: 0.0,
        email_coverage: 1.0,
        affiliation_coverage: 0.0,
        seed: 11,
        ..SyntheticSpec::default()
    };
    let s = generate_synthetic(&spec).map_err(|e| e.to_string())?;
    let out = cluster(&s.corpus, &NicknameTable::bundled(), &OriginList::default());
    let r = evaluate(&out.clustering, &s.truth).map_err(|e| e.to_string())?;
    check(r.k == 1.0 && r.cf1 == 1.0, || {
        format!("email corpus: K {}, cF1 {}", r.k, r.cf1)
    })?;

    // conservatism: no email, no affiliation, every coauthor unique
    let spec = SyntheticSpec {
        email_coverage: 0.0,
        affiliation_coverage: 0.0,
        seed: 12,
        ..SyntheticSpec::default()
    };
    let s = generate_synthetic(&spec).map_err(|e| e.to_string())?;
    let mut next = 0;
    let papers: Vec<PaperRecord> = s
        .corpus
        .papers()
        .iter()
        .map(|p| {
            let mut p = p.clone();
            for a in p.authors.iter_mut().skip(1) {
                *a = AuthorMention::new(format!("Solo{}", letters(next)), "Q.");
                next += 1;
            }
            p
        })
        .collect();
    let corpus = Corpus::new(papers).map_err(|e| e.to_string())?;
    let out = cluster(&corpus, &NicknameTable::bundled(), &OriginList::default());
    let synonym_merges = out
        .merges
        .iter()
        .filter(|m| m.pair.kind == PairKind::Synonym)
        .count();
    let above = out
        .merges
        .iter()
        .chain(&out.blocked_merges)
        .filter(|m| m.decision.outcome == Outcome::Match)
        .count();
    check(synonym_merges == 0 && above == 0, || {
        format!("{synonym_merges} synonym merges, {above} pairs above threshold without evidence")
    })?;
    Ok(format!(
        "email corpus K = 1, cF1 = 1; no merges without evidence ({} candidates)",
        out.candidate_count
    ))
}

// ---------------------------------------------------------------- 9

fn authnet(dir: &Path, args: &[&str]) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_authnet"))
        .current_dir(dir)
        .args(args)
        .status()
        .map_err(|e| e.to_string())?;
    check(status.success(), || {
        format!("authnet {} failed: {status}", args.join(" "))
    })
}

fn pipeline(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    authnet(
        dir,
        &[
            "gen",
            "--papers",
            "500",
            "--authors",
            "800",
            "--seed",
            "7",
            "-o",
            "corpus.jsonl",
        ],
    )?;
    for method in ["fd", "ad", "hd", "heuristic"] {
        let out = format!("{method}.tsv");
        authnet(
            dir,
            &[
                "run",
                "corpus.jsonl",
                "--method",
                method,
                "-o",
                &out,
                "--origins",
                "corpus.origins.txt",
            ],
        )?;
    }
    authnet(
        dir,
        &[
            "compare",
            "corpus.jsonl",
            "--truth",
            "corpus.truth.tsv",
            "--origins",
            "corpus.origins.txt",
            "--heuristic",
            "-o",
            "report.json",
            "--curves",
            "curves",
        ],
    )?;
    let mut files = BTreeMap::new();
    for sub in [dir.to_path_buf(), dir.join("curves")] {
        for entry in std::fs::read_dir(&sub).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.is_file() {
                let rel = path.strip_prefix(dir).unwrap().display().to_string();
                files.insert(rel, std::fs::read(&path).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok(files)
}

fn criterion_9() -> Verdict {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = pipeline(a.path())?;
    let second = pipeline(b.path())?;
    check(first.keys().eq(second.keys()), || {
        "different file sets".into()
    })?;
    for (name, bytes) in &first {
        check(&second[name] == bytes, || {
            format!("{name} differs between runs")
        })?;
    }
    Ok(format!(
        "{} output files byte-identical across two runs",
        first.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("metric oracle equivalence", criterion_1),
        ("K-metric fixture and m_rate = 1 - cR", criterion_2),
        ("refinement chain", criterion_3),
        ("off-upper-bound ordering", criterion_4),
        ("FD distortion directions", criterion_5),
        ("misattribution concentration", criterion_6),
        ("micro-examples", criterion_7),
        ("heuristic sanity", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
