use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use authnet::corpus::{
    filter_papers, generate_synthetic, load_corpus, write_corpus, write_labels, Clustering, Corpus,
    SyntheticSpec,
};
use authnet::evalmetrics::evaluate;
use authnet::heuristic::write_pairs_tsv;
use authnet::ibd::IbdMethod;
use authnet::names::{NicknameTable, OriginList};
use authnet::report::{
    compare, measure, restrict_to_corpus, run_method, to_json, write_curve, write_curves, Method,
};

#[derive(Parser)]
#[command(
    name = "authnet",
    version,
    about = "Author name disambiguation and coauthorship network statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus with ground-truth labels.
    Gen(GenArgs),
    /// Disambiguate a corpus with one method.
    Run(RunArgs),
    /// Score predicted labels against truth labels.
    Eval(EvalArgs),
    /// Coauthorship network statistics of one clustering.
    Stats(StatsArgs),
    /// Compare FD, AD, HD (and optionally the heuristic) against truth.
    Compare(CompareArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Corpus JSONL output.
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    /// Truth labels TSV [default: <output stem>.truth.tsv].
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Collision-pool surname list [default: <output stem>.origins.txt].
    #[arg(long)]
    origins: Option<PathBuf>,
    /// JSON file with generator settings; flags below override it.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    papers: Option<usize>,
    #[arg(long)]
    authors: Option<usize>,
    #[arg(long)]
    mean_team_size: Option<f64>,
    #[arg(long)]
    surname_pool: Option<usize>,
    #[arg(long)]
    collision_share: Option<f64>,
    #[arg(long)]
    full_name_prob: Option<f64>,
    #[arg(long)]
    email_coverage: Option<f64>,
    #[arg(long)]
    affiliation_coverage: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fd,
    Ad,
    Hd,
    Heuristic,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Fd => Method::Ibd(IbdMethod::FirstInitial),
            MethodArg::Ad => Method::Ibd(IbdMethod::AllInitials),
            MethodArg::Hd => Method::Ibd(IbdMethod::Hybrid),
            MethodArg::Heuristic => Method::Heuristic,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Corpus JSONL.
    corpus: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Cluster labels TSV output.
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    /// Review pairs TSV [default: <output stem>.review.tsv].
    #[arg(long)]
    review: Option<PathBuf>,
    /// Blocked merges TSV [default: <output stem>.blocked.tsv].
    #[arg(long)]
    blocked: Option<PathBuf>,
    /// Nickname table TSV (nickname, full name) [default: bundled table].
    #[arg(long)]
    nicknames: Option<PathBuf>,
    /// Surnames excluded from one-character variant matching.
    #[arg(long)]
    origins: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// Report JSON output [default: stdout].
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Corpus JSONL.
    corpus: PathBuf,
    #[arg(long)]
    clusters: PathBuf,
    /// Statistics JSON output [default: stdout].
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Writes <stem>.productivity.csv and <stem>.degree.csv.
    #[arg(long)]
    dist: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Corpus JSONL.
    corpus: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Report JSON output.
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    /// Directory for per-method distribution CSVs.
    #[arg(long)]
    curves: Option<PathBuf>,
    /// Origin surname list; enables misattribution shares.
    #[arg(long)]
    origins: Option<PathBuf>,
    /// Also run the heuristic disambiguator.
    #[arg(long)]
    heuristic: bool,
    #[arg(long)]
    nicknames: Option<PathBuf>,
}

/// `dir/stem.<suffix>` for an output path `dir/stem.ext`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_filtered(path: &Path) -> Result<Corpus> {
    Ok(filter_papers(&load_corpus(path)?))
}

fn load_labels(path: &Path, corpus: &Corpus) -> Result<Clustering> {
    let labels = Clustering::read_tsv(path)?;
    restrict_to_corpus(&labels, corpus).with_context(|| format!("labels {}", path.display()))
}

fn load_nicknames(path: Option<&Path>) -> Result<NicknameTable> {
    Ok(match path {
        Some(p) => NicknameTable::load(p)?,
        None => NicknameTable::bundled(),
    })
}

fn load_origins(path: Option<&Path>) -> Result<OriginList> {
    Ok(match path {
        Some(p) => OriginList::load(p)?,
        None => OriginList::default(),
    })
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    let mut spec = match &a.spec {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => SyntheticSpec::default(),
    };
    macro_rules! set {
        ($($flag:ident => $field:ident),*) => {
            $(if let Some(v) = a.$flag { spec.$field = v; })*
        };
    }
    set!(seed => seed, papers => n_papers, authors => n_authors,
         mean_team_size => mean_team_size, surname_pool => surname_pool_size,
         collision_share => collision_pool_share, full_name_prob => full_given_name_probability,
         email_coverage => email_coverage, affiliation_coverage => affiliation_coverage);

    let synthetic = generate_synthetic(&spec)?;
    write_corpus(&synthetic.corpus, &a.output)?;
    let truth = a
        .truth
        .clone()
        .unwrap_or_else(|| sibling(&a.output, "truth.tsv"));
    write_labels(&synthetic.truth, &truth)?;
    let origins = a
        .origins
        .clone()
        .unwrap_or_else(|| sibling(&a.output, "origins.txt"));
    let mut list = String::new();
    for s in &synthetic.origins {
        list.push_str(s);
        list.push('\n');
    }
    write_file(&origins, list)
}

fn cmd_run(a: &RunArgs) -> Result<()> {
    let corpus = load_filtered(&a.corpus)?;
    let nicknames = load_nicknames(a.nicknames.as_deref())?;
    let origins = load_origins(a.origins.as_deref())?;
    let out = run_method(a.method.into(), &corpus, &nicknames, &origins);
    write_labels(&out.clustering, &a.output)?;
    if let Some(h) = out.heuristic {
        for (path, default, pairs) in [
            (&a.review, "review.tsv", &h.review_pairs),
            (&a.blocked, "blocked.tsv", &h.blocked_merges),
        ] {
            let path = path.clone().unwrap_or_else(|| sibling(&a.output, default));
            let mut buf = Vec::new();
            write_pairs_tsv(pairs, &mut buf)?;
            write_file(&path, buf)?;
        }
    }
    Ok(())
}

fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let truth = Clustering::read_tsv(&a.truth)?;
    let pred = Clustering::read_tsv(&a.pred)?;
    let report = evaluate(&pred, &truth)?;
    write_or_print(a.output.as_deref(), &to_json(&report)?)
}

fn cmd_stats(a: &StatsArgs) -> Result<()> {
    let corpus = load_filtered(&a.corpus)?;
    let clusters = load_labels(&a.clusters, &corpus)?;
    let measured = measure(&corpus, &clusters)?;
    write_or_print(a.output.as_deref(), &to_json(&measured.stats)?)?;
    if let Some(dist) = &a.dist {
        write_curve(
            &measured.productivity_curve(),
            &sibling(dist, "productivity.csv"),
        )?;
        write_curve(&measured.degree_curve(), &sibling(dist, "degree.csv"))?;
    }
    Ok(())
}

fn cmd_compare(a: &CompareArgs) -> Result<()> {
    let corpus = load_filtered(&a.corpus)?;
    let truth = load_labels(&a.truth, &corpus)?;
    let origins = match &a.origins {
        Some(p) => Some(OriginList::load(p)?),
        None => None,
    };
    let mut methods: Vec<Method> = IbdMethod::ALL.iter().map(|&m| Method::Ibd(m)).collect();
    if a.heuristic {
        methods.push(Method::Heuristic);
    }
    let nicknames = load_nicknames(a.nicknames.as_deref())?;
    let no_origins = OriginList::default();
    let clusterings: Vec<(String, Clustering)> = methods
        .iter()
        .map(|&m| {
            let run = run_method(
                m,
                &corpus,
                &nicknames,
                origins.as_ref().unwrap_or(&no_origins),
            );
            (m.name().to_string(), run.clustering)
        })
        .collect();
    let (report, compared) = compare(&corpus, &truth, &clusterings, origins.as_ref())?;
    write_file(&a.output, to_json(&report)?)?;
    if let Some(dir) = &a.curves {
        write_curves(dir, &compared)?;
    }
    Ok(())
}

/// Clap's multi-line message folded onto one line.
fn one_line(message: &str) -> String {
    message
        .lines()
        .map(str::trim)
        .filter(|l| {
            !l.is_empty() && !l.starts_with("Usage:") && !l.starts_with("For more information")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", one_line(&e.to_string()));
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Compare(a) => cmd_compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
