//! Similarity-based disambiguation used as a proxy for ground truth.
//!
//! Candidate pairs come from four string-matching steps over normalized
//! names (full given names are used when recorded):
//!
//! 1. identical names (homonym candidates),
//! 2. same token count, every differing given token an initialized match,
//! 3. different token counts, the shorter name matching position by
//!    position inside the longer one,
//! 4. fuzzy variants: spacing (case 1), nickname or partial name (case 2),
//!    one-character difference (case 3, skipped for surnames on the origin
//!    list) and permuted tokens (case 4).
//!
//! Each pair is scored on shared coauthors, affiliation overlap and email
//! local part. Pairs above the threshold merge in descending score order
//! unless the merge would join a homonym pair already judged distinct.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{affiliation_words, AuthorMention, Clustering, Corpus};
use crate::names::{
    edit_distance_one, in_origin_list, initial_signature, nickname_match, parse_name, token_match,
    NicknameTable, OriginList, ParsedName, TokenMatch,
};
use crate::unionfind::UnionFind;

pub const HOMONYM_THRESHOLD: f64 = 0.50;
pub const SYNONYM_THRESHOLD: f64 = 0.75;
/// Lower edge of the manual-review band.
pub const REVIEW_FLOOR: f64 = 0.40;

pub const FULL_COAUTHOR_SCORE: f64 = 1.0;
pub const INITIAL_COAUTHOR_SCORE: f64 = 0.3;
pub const ZIP_BONUS: f64 = 0.5;
/// Shortest digit run treated as a zip code.
pub const ZIP_MIN_DIGITS: usize = 4;
/// Permutation matching is skipped for names with more tokens.
pub const MAX_PERMUTED_TOKENS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Homonym,
    Synonym,
}

impl PairKind {
    pub fn threshold(self) -> f64 {
        match self {
            PairKind::Homonym => HOMONYM_THRESHOLD,
            PairKind::Synonym => SYNONYM_THRESHOLD,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairKind::Homonym => "homonym",
            PairKind::Synonym => "synonym",
        }
    }
}

/// Which matching rule produced a candidate pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatchRule {
    Identical,
    EqualTokens,
    Subset,
    Spacing,
    Nickname,
    EditDistance,
    Permuted,
}

impl MatchRule {
    pub fn step(self) -> u8 {
        match self {
            MatchRule::Identical => 1,
            MatchRule::EqualTokens => 2,
            MatchRule::Subset => 3,
            _ => 4,
        }
    }

    /// Fuzzy-match case for step-4 rules.
    pub fn case(self) -> Option<u8> {
        match self {
            MatchRule::Spacing => Some(1),
            MatchRule::Nickname => Some(2),
            MatchRule::EditDistance => Some(3),
            MatchRule::Permuted => Some(4),
            _ => None,
        }
    }

    pub fn kind(self) -> PairKind {
        if self == MatchRule::Identical {
            PairKind::Homonym
        } else {
            PairKind::Synonym
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidatePair {
    /// The lexicographically smaller mention id.
    pub a: String,
    pub b: String,
    pub kind: PairKind,
    pub step: u8,
    pub case: Option<u8>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SimilarityProfile {
    pub coauthor_score: f64,
    pub affiliation_score: f64,
    pub email_score: f64,
    pub total: f64,
}

impl SimilarityProfile {
    /// Unweighted sum of the three parts.
    pub fn new(coauthor_score: f64, affiliation_score: f64, email_score: f64) -> Self {
        SimilarityProfile {
            coauthor_score,
            affiliation_score,
            email_score,
            total: coauthor_score + affiliation_score + email_score,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Match,
    NonMatch,
    Review,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub outcome: Outcome,
    pub threshold_used: f64,
}

/// Match strictly above the threshold, review in `[0.40, threshold]`.
pub fn decide(profile: &SimilarityProfile, kind: PairKind) -> Decision {
    let threshold = kind.threshold();
    let outcome = if profile.total > threshold {
        Outcome::Match
    } else if profile.total >= REVIEW_FLOOR {
        Outcome::Review
    } else {
        Outcome::NonMatch
    };
    Decision {
        outcome,
        threshold_used: threshold,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoredPair {
    pub pair: CandidatePair,
    pub profile: SimilarityProfile,
    pub decision: Decision,
}

/// Writes `mention_a<TAB>mention_b<TAB>kind<TAB>total_score` rows.
pub fn write_pairs_tsv<W: Write>(pairs: &[ScoredPair], mut out: W) -> std::io::Result<()> {
    for p in pairs {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            p.pair.a,
            p.pair.b,
            p.pair.kind.as_str(),
            p.profile.total
        )?;
    }
    Ok(())
}

struct AffiliationInfo {
    words: BTreeSet<String>,
    zips: BTreeSet<String>,
}

fn digit_runs(s: &str, min_len: usize) -> BTreeSet<String> {
    s.split(|c: char| !c.is_ascii_digit())
        .filter(|run| run.len() >= min_len)
        .map(str::to_string)
        .collect()
}

fn affiliation_info(affiliation: &str, stoplist: &BTreeSet<&str>) -> AffiliationInfo {
    AffiliationInfo {
        words: affiliation_words(affiliation)
            .filter(|w| !stoplist.contains(w.as_str()))
            .collect(),
        zips: digit_runs(affiliation, ZIP_MIN_DIGITS),
    }
}

fn affiliation_pair_score(a: &AffiliationInfo, b: &AffiliationInfo) -> f64 {
    let shorter = a.words.len().min(b.words.len());
    let words = if shorter == 0 {
        0.0
    } else {
        a.words.intersection(&b.words).count() as f64 / shorter as f64
    };
    let zip = if a.zips.intersection(&b.zips).next().is_some() {
        ZIP_BONUS
    } else {
        0.0
    };
    words + zip
}

fn max_affiliation_score(a: &[AffiliationInfo], b: &[AffiliationInfo]) -> f64 {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| affiliation_pair_score(x, y)))
        .fold(0.0, f64::max)
}

/// Word overlap over the shorter affiliation (stoplist removed), plus a
/// bonus for a shared zip code; the best affiliation pair counts. Missing
/// affiliations score zero.
pub fn affiliation_similarity(a: &AuthorMention, b: &AuthorMention, stoplist: &[String]) -> f64 {
    let stop: BTreeSet<&str> = stoplist.iter().map(String::as_str).collect();
    let a: Vec<_> = a
        .affiliations
        .iter()
        .map(|s| affiliation_info(s, &stop))
        .collect();
    let b: Vec<_> = b
        .affiliations
        .iter()
        .map(|s| affiliation_info(s, &stop))
        .collect();
    max_affiliation_score(&a, &b)
}

fn email_local(email: &str) -> Option<String> {
    let local = email.split('@').next().unwrap_or("").trim().to_lowercase();
    (!local.is_empty()).then_some(local)
}

/// 1 when both emails exist and agree before the `@`, else 0.
pub fn email_similarity(a: &AuthorMention, b: &AuthorMention) -> f64 {
    match (
        a.email.as_deref().and_then(email_local),
        b.email.as_deref().and_then(email_local),
    ) {
        (Some(x), Some(y)) if x == y => 1.0,
        _ => 0.0,
    }
}

/// Name forms of one mention used for matching.
#[derive(Clone, Debug)]
struct NameInfo {
    /// Full given names when recorded, else the recorded form.
    name: ParsedName,
    /// Initials of the recorded given names.
    signature: Vec<char>,
    has_full: bool,
}

fn name_info(m: &AuthorMention) -> Option<NameInfo> {
    let recorded = parse_name(&m.surname_raw, &m.given_raw).ok()?;
    let full = m
        .given_full_raw
        .as_deref()
        .and_then(|g| parse_name(&m.surname_raw, g).ok())
        .filter(|n| !n.given_tokens.is_empty());
    let mut signature = initial_signature(&recorded);
    if signature.is_empty() {
        if let Some(f) = &full {
            signature = initial_signature(f);
        }
    }
    Some(NameInfo {
        has_full: full.is_some(),
        name: full.unwrap_or(recorded),
        signature,
    })
}

fn coauthor_match(x: &NameInfo, y: &NameInfo) -> TokenMatch {
    if x.name.surname_tokens != y.name.surname_tokens {
        return TokenMatch::None;
    }
    if x.has_full && y.has_full {
        if x.name.given_texts().eq(y.name.given_texts()) {
            TokenMatch::Full
        } else {
            TokenMatch::None
        }
    } else if !x.signature.is_empty() && x.signature == y.signature {
        TokenMatch::Initialized
    } else {
        TokenMatch::None
    }
}

/// Greedy one-to-one coauthor matching, full matches first.
fn coauthor_score(a_side: &[&NameInfo], b_side: &[&NameInfo]) -> f64 {
    let mut used_a = vec![false; a_side.len()];
    let mut used_b = vec![false; b_side.len()];
    let mut score = 0.0;
    for (wanted, value) in [
        (TokenMatch::Full, FULL_COAUTHOR_SCORE),
        (TokenMatch::Initialized, INITIAL_COAUTHOR_SCORE),
    ] {
        for (i, x) in a_side.iter().enumerate() {
            if used_a[i] {
                continue;
            }
            if let Some(j) =
                (0..b_side.len()).find(|&j| !used_b[j] && coauthor_match(x, b_side[j]) == wanted)
            {
                used_a[i] = true;
                used_b[j] = true;
                score += value;
            }
        }
    }
    score
}

/// Coauthor evidence between two mentions on different papers: 1.0 per
/// coauthor recorded with matching full given names on both sides, 0.3 per
/// coauthor matching only on initials.
pub fn coauthor_similarity(corpus: &Corpus, a: &str, b: &str) -> f64 {
    let coauthors = |id: &str| -> Vec<NameInfo> {
        corpus
            .papers()
            .iter()
            .find(|p| p.authors.iter().any(|m| m.mention_id == id))
            .map(|p| {
                p.authors
                    .iter()
                    .filter(|m| m.mention_id != id)
                    .filter_map(name_info)
                    .collect()
            })
            .unwrap_or_default()
    };
    let (xa, xb) = (coauthors(a), coauthors(b));
    coauthor_score(
        &xa.iter().collect::<Vec<_>>(),
        &xb.iter().collect::<Vec<_>>(),
    )
}

fn given(n: &ParsedName) -> Vec<&str> {
    n.given_texts().collect()
}

fn all_positional(short: &[&str], long: &[&str]) -> bool {
    short
        .iter()
        .zip(long)
        .all(|(x, y)| token_match(x, y).is_match())
}

/// Given tokens of equal count where exactly the differing positions satisfy
/// `special` (at least one) and every other position is a full or
/// initialized match.
fn equal_count_with(a: &[&str], b: &[&str], special: impl Fn(&str, &str) -> bool) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = 0;
    for (x, y) in a.iter().zip(b) {
        if token_match(x, y).is_match() {
            continue;
        }
        if special(x, y) {
            used += 1;
        } else {
            return false;
        }
    }
    used > 0
}

fn assign_tokens(a: &[&str], b: &[&str], used: &mut [bool], i: usize, full: usize) -> bool {
    if i == a.len() {
        return full > 0;
    }
    for j in 0..b.len() {
        if used[j] {
            continue;
        }
        let m = token_match(a[i], b[j]);
        if !m.is_match() {
            continue;
        }
        let full_here = usize::from(m == TokenMatch::Full && a[i].chars().count() > 1);
        used[j] = true;
        let ok = assign_tokens(a, b, used, i + 1, full + full_here);
        used[j] = false;
        if ok {
            return true;
        }
    }
    false
}

fn permutations<'a>(tokens: &[&'a str]) -> Vec<Vec<&'a str>> {
    if tokens.len() <= 1 {
        return vec![tokens.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..tokens.len() {
        let mut rest = tokens.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Tokens match after reordering across positions and across the
/// surname/given boundary: either a one-to-one full/initial assignment with
/// at least one full multi-letter token, or equal concatenations of some
/// orderings of the multi-letter tokens.
fn permuted_match(a: &ParsedName, b: &ParsedName) -> bool {
    let (ta, tb) = (a.all_tokens(), b.all_tokens());
    if ta.len() > MAX_PERMUTED_TOKENS || tb.len() > MAX_PERMUTED_TOKENS {
        return false;
    }
    if ta.len() == tb.len() && assign_tokens(&ta, &tb, &mut vec![false; tb.len()], 0, 0) {
        return true;
    }
    let multi = |t: &[&str]| t.iter().all(|x| x.chars().count() > 1);
    if multi(&ta) && multi(&tb) && letter_key(&ta) == letter_key(&tb) {
        let joined: BTreeSet<String> = permutations(&ta).iter().map(|p| p.concat()).collect();
        return permutations(&tb)
            .iter()
            .any(|p| joined.contains(&p.concat()));
    }
    false
}

fn letter_key(tokens: &[&str]) -> String {
    let mut chars: Vec<char> = tokens.iter().flat_map(|t| t.chars()).collect();
    chars.sort_unstable();
    chars.into_iter().collect()
}

/// Rule for two names with identical surname tokens.
fn classify_same_surname(
    a: &ParsedName,
    b: &ParsedName,
    nicknames: &NicknameTable,
    origin_excluded: bool,
) -> Option<MatchRule> {
    let (ga, gb) = (given(a), given(b));
    if ga == gb {
        return Some(MatchRule::Identical);
    }
    if ga.len() == gb.len() && all_positional(&ga, &gb) {
        return Some(MatchRule::EqualTokens);
    }
    if ga.len() != gb.len() && !ga.is_empty() && !gb.is_empty() {
        let (short, long) = if ga.len() < gb.len() {
            (&ga, &gb)
        } else {
            (&gb, &ga)
        };
        if all_positional(short, long) {
            return Some(MatchRule::Subset);
        }
    }
    if ga.concat() == gb.concat() {
        return Some(MatchRule::Spacing);
    }
    if equal_count_with(&ga, &gb, |x, y| nickname_match(x, y, nicknames)) {
        return Some(MatchRule::Nickname);
    }
    if !origin_excluded && equal_count_with(&ga, &gb, fuzzy_token) {
        return Some(MatchRule::EditDistance);
    }
    permuted_match(a, b).then_some(MatchRule::Permuted)
}

fn fuzzy_token(x: &str, y: &str) -> bool {
    x.chars().count() > 1 && y.chars().count() > 1 && edit_distance_one(x, y)
}

/// Rule for two names whose surname tokens differ.
fn classify_cross_surname(
    a: &ParsedName,
    b: &ParsedName,
    origin_excluded: bool,
) -> Option<MatchRule> {
    let (ga, gb) = (given(a), given(b));
    let given_aligned = ga.len() == gb.len() && all_positional(&ga, &gb);
    let (sa, sb) = (a.joined_surname(), b.joined_surname());
    if sa == sb && (given_aligned || ga.concat() == gb.concat()) {
        return Some(MatchRule::Spacing);
    }
    if !origin_excluded && given_aligned && fuzzy_token(&sa, &sb) {
        return Some(MatchRule::EditDistance);
    }
    permuted_match(a, b).then_some(MatchRule::Permuted)
}

/// Per-corpus data shared by candidate generation and scoring.
struct Prepared<'a> {
    ids: Vec<&'a str>,
    paper_of: Vec<usize>,
    names: Vec<Option<NameInfo>>,
    emails: Vec<Option<String>>,
    affiliations: Vec<Vec<AffiliationInfo>>,
    by_paper: Vec<Vec<usize>>,
    origin_listed: Vec<bool>,
}

impl<'a> Prepared<'a> {
    fn new(corpus: &'a Corpus, origins: &OriginList) -> Self {
        let stop: BTreeSet<&str> = corpus
            .affiliation_stoplist()
            .iter()
            .map(String::as_str)
            .collect();
        let mut p = Prepared {
            ids: Vec::new(),
            paper_of: Vec::new(),
            names: Vec::new(),
            emails: Vec::new(),
            affiliations: Vec::new(),
            by_paper: vec![Vec::new(); corpus.papers().len()],
            origin_listed: Vec::new(),
        };
        for (idx, (paper, m)) in corpus.mentions().enumerate() {
            let info = name_info(m);
            p.origin_listed.push(
                info.as_ref()
                    .is_some_and(|n| in_origin_list(&n.name.surname_tokens, origins)),
            );
            p.ids.push(&m.mention_id);
            p.paper_of.push(paper);
            p.names.push(info);
            p.emails.push(m.email.as_deref().and_then(email_local));
            p.affiliations.push(
                m.affiliations
                    .iter()
                    .map(|a| affiliation_info(a, &stop))
                    .collect(),
            );
            p.by_paper[paper].push(idx);
        }
        p
    }

    fn profile(&self, a: usize, b: usize) -> SimilarityProfile {
        let side = |m: usize| -> Vec<&NameInfo> {
            self.by_paper[self.paper_of[m]]
                .iter()
                .filter(|&&x| x != m)
                .filter_map(|&x| self.names[x].as_ref())
                .collect()
        };
        let coauthor = coauthor_score(&side(a), &side(b));
        let affiliation = max_affiliation_score(&self.affiliations[a], &self.affiliations[b]);
        let email = match (&self.emails[a], &self.emails[b]) {
            (Some(x), Some(y)) if x == y => 1.0,
            _ => 0.0,
        };
        SimilarityProfile::new(coauthor, affiliation, email)
    }
}

/// Candidate generation over blocks of the prepared corpus.
struct CandidateFinder<'p, 'a> {
    prep: &'p Prepared<'a>,
    nicknames: &'p NicknameTable,
    found: HashMap<(usize, usize), MatchRule>,
}

impl CandidateFinder<'_, '_> {
    fn record(&mut self, a: usize, b: usize, rule: MatchRule) {
        let key = if self.prep.ids[a] < self.prep.ids[b] {
            (a, b)
        } else {
            (b, a)
        };
        let slot = self.found.entry(key).or_insert(rule);
        if rule < *slot {
            *slot = rule;
        }
    }

    fn name(&self, m: usize) -> &ParsedName {
        &self.prep.names[m]
            .as_ref()
            .expect("indexed mentions have names")
            .name
    }

    fn try_same(&mut self, a: usize, b: usize) {
        if self.prep.paper_of[a] == self.prep.paper_of[b] {
            return;
        }
        let excluded = self.prep.origin_listed[a] || self.prep.origin_listed[b];
        if let Some(rule) =
            classify_same_surname(self.name(a), self.name(b), self.nicknames, excluded)
        {
            self.record(a, b, rule);
        }
    }

    fn try_cross(&mut self, a: usize, b: usize) {
        if self.prep.paper_of[a] == self.prep.paper_of[b]
            || self.name(a).surname_tokens == self.name(b).surname_tokens
        {
            return;
        }
        let excluded = self.prep.origin_listed[a] || self.prep.origin_listed[b];
        if let Some(rule) = classify_cross_surname(self.name(a), self.name(b), excluded) {
            self.record(a, b, rule);
        }
    }

    fn run(mut self) -> HashMap<(usize, usize), MatchRule> {
        let prep = self.prep;
        let indexed: Vec<usize> = (0..prep.ids.len())
            .filter(|&m| prep.names[m].is_some())
            .collect();

        // surname blocks
        let mut blocks: BTreeMap<Vec<String>, Vec<usize>> = BTreeMap::new();
        for &m in &indexed {
            blocks
                .entry(self.name(m).surname_tokens.clone())
                .or_default()
                .push(m);
        }
        for members in blocks.values() {
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    self.try_same(a, b);
                }
            }
        }

        let surnames: Vec<&Vec<String>> = blocks.keys().collect();
        let block_members: Vec<&Vec<usize>> = blocks.values().collect();
        let mut cross_blocks: BTreeSet<(usize, usize)> = BTreeSet::new();

        // spacing variants of the surname
        let mut by_joined: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        // one-character variants: all single deletions share a key with the
        // original when two strings are at distance one
        let mut by_deletion: HashMap<String, BTreeSet<usize>> = HashMap::new();
        for (s, tokens) in surnames.iter().enumerate() {
            let joined = tokens.concat();
            by_joined.entry(joined.clone()).or_default().push(s);
            let chars: Vec<char> = joined.chars().collect();
            by_deletion.entry(joined.clone()).or_default().insert(s);
            for i in 0..chars.len() {
                let variant: String = chars[..i].iter().chain(&chars[i + 1..]).collect();
                by_deletion.entry(variant).or_default().insert(s);
            }
        }
        for group in by_joined.values() {
            for (k, &x) in group.iter().enumerate() {
                for &y in &group[k + 1..] {
                    cross_blocks.insert((x, y));
                }
            }
        }
        let mut deletion_keys: Vec<&String> = by_deletion.keys().collect();
        deletion_keys.sort();
        for key in deletion_keys {
            let group: Vec<usize> = by_deletion[key].iter().copied().collect();
            for (k, &x) in group.iter().enumerate() {
                for &y in &group[k + 1..] {
                    cross_blocks.insert((x, y));
                }
            }
        }
        for (x, y) in cross_blocks {
            for &a in block_members[x] {
                for &b in block_members[y] {
                    self.try_cross(a, b);
                }
            }
        }

        // permuted tokens: a surname token reused as a given name elsewhere
        let mut by_given_token: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for &m in &indexed {
            let tokens: BTreeSet<&str> = prep.names[m]
                .as_ref()
                .expect("indexed mentions have names")
                .name
                .given_texts()
                .filter(|t| t.chars().count() > 1)
                .collect();
            for t in tokens {
                by_given_token.entry(t).or_default().push(m);
            }
        }
        for (s, tokens) in surnames.iter().enumerate() {
            let partners: BTreeSet<usize> = tokens
                .iter()
                .filter_map(|t| by_given_token.get(t.as_str()))
                .flatten()
                .copied()
                .collect();
            for &b in &partners {
                for &a in block_members[s] {
                    self.try_cross(a, b);
                }
            }
        }

        // permuted tokens with joined parts: same multiset of letters
        let mut by_letters: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for &m in &indexed {
            let tokens = self.name(m).all_tokens();
            if tokens.len() <= MAX_PERMUTED_TOKENS && tokens.iter().all(|t| t.chars().count() > 1) {
                by_letters.entry(letter_key(&tokens)).or_default().push(m);
            }
        }
        for group in by_letters.values() {
            for (k, &a) in group.iter().enumerate() {
                for &b in &group[k + 1..] {
                    self.try_cross(a, b);
                }
            }
        }
        self.found
    }
}

fn find_candidates(
    prep: &Prepared<'_>,
    nicknames: &NicknameTable,
) -> Vec<(usize, usize, MatchRule)> {
    let found = CandidateFinder {
        prep,
        nicknames,
        found: HashMap::new(),
    }
    .run();
    let mut out: Vec<(usize, usize, MatchRule)> =
        found.into_iter().map(|((a, b), r)| (a, b, r)).collect();
    out.sort_by(|x, y| (prep.ids[x.0], prep.ids[x.1]).cmp(&(prep.ids[y.0], prep.ids[y.1])));
    out
}

fn to_pair(prep: &Prepared<'_>, a: usize, b: usize, rule: MatchRule) -> CandidatePair {
    CandidatePair {
        a: prep.ids[a].to_string(),
        b: prep.ids[b].to_string(),
        kind: rule.kind(),
        step: rule.step(),
        case: rule.case(),
    }
}

/// Every candidate pair with the earliest step that produced it, sorted
/// by mention ids.
pub fn candidate_pairs(
    corpus: &Corpus,
    nicknames: &NicknameTable,
    origins: &OriginList,
) -> Vec<CandidatePair> {
    let prep = Prepared::new(corpus, origins);
    find_candidates(&prep, nicknames)
        .into_iter()
        .map(|(a, b, r)| to_pair(&prep, a, b, r))
        .collect()
}

fn pairs_of_step(
    corpus: &Corpus,
    nicknames: &NicknameTable,
    origins: &OriginList,
    step: u8,
) -> Vec<CandidatePair> {
    candidate_pairs(corpus, nicknames, origins)
        .into_iter()
        .filter(|p| p.step == step)
        .collect()
}

/// Identical-name pairs.
pub fn step1_homonym_pairs(corpus: &Corpus) -> Vec<CandidatePair> {
    pairs_of_step(corpus, &NicknameTable::empty(), &OriginList::default(), 1)
}

pub fn step2_equal_token_pairs(corpus: &Corpus) -> Vec<CandidatePair> {
    pairs_of_step(corpus, &NicknameTable::empty(), &OriginList::default(), 2)
}

pub fn step3_subset_pairs(corpus: &Corpus) -> Vec<CandidatePair> {
    pairs_of_step(corpus, &NicknameTable::empty(), &OriginList::default(), 3)
}

pub fn step4_fuzzy_pairs(
    corpus: &Corpus,
    nicknames: &NicknameTable,
    origins: &OriginList,
) -> Vec<CandidatePair> {
    pairs_of_step(corpus, nicknames, origins, 4)
}

/// Result of [`cluster`].
#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicOutput {
    pub clustering: Clustering,
    /// Pairs inside the review band; never merged automatically.
    pub review_pairs: Vec<ScoredPair>,
    /// Matching pairs whose merge would have joined a cannot-link pair.
    pub blocked_merges: Vec<ScoredPair>,
    /// Matching pairs that joined two clusters, in merge order.
    pub merges: Vec<ScoredPair>,
    pub candidate_count: usize,
}

/// Disambiguates a filtered corpus.
pub fn cluster(
    corpus: &Corpus,
    nicknames: &NicknameTable,
    origins: &OriginList,
) -> HeuristicOutput {
    let prep = Prepared::new(corpus, origins);
    let candidates = find_candidates(&prep, nicknames);
    let n = prep.ids.len();

    let mut scored: Vec<(usize, usize, ScoredPair)> = candidates
        .iter()
        .map(|&(a, b, rule)| {
            let pair = to_pair(&prep, a, b, rule);
            let profile = prep.profile(a, b);
            let decision = decide(&profile, pair.kind);
            (
                a,
                b,
                ScoredPair {
                    pair,
                    profile,
                    decision,
                },
            )
        })
        .collect();

    // distinct homonyms may never share a cluster
    let mut cannot_link: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b, s) in &scored {
        if s.pair.kind == PairKind::Homonym && s.decision.outcome != Outcome::Match {
            cannot_link[*a].push(*b);
            cannot_link[*b].push(*a);
        }
    }

    let review_pairs: Vec<ScoredPair> = scored
        .iter()
        .filter(|(_, _, s)| s.decision.outcome == Outcome::Review)
        .map(|(_, _, s)| s.clone())
        .collect();

    scored.retain(|(_, _, s)| s.decision.outcome == Outcome::Match);
    scored.sort_by(|x, y| {
        y.2.profile
            .total
            .total_cmp(&x.2.profile.total)
            .then_with(|| (&x.2.pair.a, &x.2.pair.b).cmp(&(&y.2.pair.a, &y.2.pair.b)))
    });

    let mut uf = UnionFind::new(n);
    let mut blocked_merges = Vec::new();
    let mut merges = Vec::new();
    for (a, b, s) in scored {
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra == rb {
            continue;
        }
        let (small, other) = if cannot_link[ra].len() <= cannot_link[rb].len() {
            (ra, rb)
        } else {
            (rb, ra)
        };
        let conflict = cannot_link[small]
            .clone()
            .into_iter()
            .any(|x| uf.find(x) == other);
        if conflict {
            blocked_merges.push(s);
            continue;
        }
        let root = uf.union(ra, rb).expect("distinct roots");
        let absorbed = if root == ra { rb } else { ra };
        let moved = std::mem::take(&mut cannot_link[absorbed]);
        cannot_link[root].extend(moved);
        merges.push(s);
    }

    // cluster id: smallest member mention id
    let mut label: HashMap<usize, &str> = HashMap::new();
    for m in 0..n {
        let root = uf.find(m);
        let entry = label.entry(root).or_insert(prep.ids[m]);
        if prep.ids[m] < *entry {
            *entry = prep.ids[m];
        }
    }
    let mut clustering = Clustering::new();
    for m in 0..n {
        let root = uf.find(m);
        clustering.insert(prep.ids[m], format!("h|{}", label[&root]));
    }

    HeuristicOutput {
        clustering,
        review_pairs,
        blocked_merges,
        merges,
        candidate_count: candidates.len(),
    }
}

/// Every pair of mentions in one cluster of `clustering` that is a
/// cannot-link in `output`'s candidate set. Empty for a valid output.
pub fn cannot_link_violations(
    corpus: &Corpus,
    nicknames: &NicknameTable,
    origins: &OriginList,
    clustering: &Clustering,
) -> Vec<(String, String)> {
    let prep = Prepared::new(corpus, origins);
    find_candidates(&prep, nicknames)
        .into_iter()
        .filter(|&(_, _, rule)| rule == MatchRule::Identical)
        .filter(|&(a, b, _)| {
            decide(&prep.profile(a, b), PairKind::Homonym).outcome != Outcome::Match
        })
        .filter(|&(a, b, _)| {
            clustering.cluster_of(prep.ids[a]) == clustering.cluster_of(prep.ids[b])
        })
        .map(|(a, b, _)| (prep.ids[a].to_string(), prep.ids[b].to_string()))
        .collect()
}
