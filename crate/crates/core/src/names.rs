//! Name normalization and the token-level comparisons used by the
//! disambiguators.
//!
//! A raw name is split into a surname part and a given-name part. Every
//! character that is neither alphabetic nor whitespace is deleted (so
//! `O'Brien` becomes `obrien` and `Mary-Jane` becomes `maryjane`), the rest
//! is lowercased and split on whitespace. Given-name tokens keep their
//! position; single-letter tokens are initials.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NameToken {
    pub text: String,
    pub position: usize,
    pub is_initial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParsedName {
    pub surname_tokens: Vec<String>,
    pub given_tokens: Vec<NameToken>,
}

impl ParsedName {
    pub fn given_texts(&self) -> impl Iterator<Item = &str> + '_ {
        self.given_tokens.iter().map(|t| t.text.as_str())
    }

    /// Surname tokens joined by single spaces.
    pub fn surname_key(&self) -> String {
        self.surname_tokens.join(" ")
    }

    /// Surname tokens concatenated without separators.
    pub fn joined_surname(&self) -> String {
        self.surname_tokens.concat()
    }

    pub fn initial_signature(&self) -> Vec<char> {
        initial_signature(self)
    }

    /// Total number of tokens, surname included.
    pub fn token_count(&self) -> usize {
        self.surname_tokens.len() + self.given_tokens.len()
    }

    /// All tokens, surname first.
    pub fn all_tokens(&self) -> Vec<&str> {
        self.surname_tokens
            .iter()
            .map(String::as_str)
            .chain(self.given_texts())
            .collect()
    }
}

/// Lowercased alphabetic tokens of `raw`; other characters are deleted.
pub fn normalize_tokens(raw: &str) -> Vec<String> {
    let mut cleaned = String::with_capacity(raw.len());
    for c in raw.chars() {
        if c.is_whitespace() {
            cleaned.push(' ');
        } else if c.is_alphabetic() {
            cleaned.extend(c.to_lowercase());
        }
    }
    cleaned.split_whitespace().map(str::to_string).collect()
}

pub fn parse_name(surname_raw: &str, given_raw: &str) -> Result<ParsedName> {
    let surname_tokens = normalize_tokens(surname_raw);
    if surname_tokens.is_empty() {
        return Err(Error::EmptyName(format!(
            "surname `{surname_raw}` has no alphabetic characters"
        )));
    }
    let given_tokens = normalize_tokens(given_raw)
        .into_iter()
        .enumerate()
        .map(|(position, text)| NameToken {
            is_initial: text.chars().count() == 1,
            text,
            position,
        })
        .collect();
    Ok(ParsedName {
        surname_tokens,
        given_tokens,
    })
}

/// First letters of the given-name tokens, in order.
pub fn initial_signature(name: &ParsedName) -> Vec<char> {
    name.given_tokens
        .iter()
        .filter_map(|t| t.text.chars().next())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TokenMatch {
    Full,
    Initialized,
    None,
}

impl TokenMatch {
    pub fn is_match(self) -> bool {
        self != TokenMatch::None
    }
}

/// Compares two given-name tokens occupying the same position.
///
/// Surname tokens must only be compared for equality; an initial never
/// stands in for a surname.
pub fn token_match(a: &str, b: &str) -> TokenMatch {
    if a == b {
        return TokenMatch::Full;
    }
    let (short, long) = if a.chars().count() <= b.chars().count() {
        (a, b)
    } else {
        (b, a)
    };
    let mut short_chars = short.chars();
    match (short_chars.next(), short_chars.next()) {
        (Some(c), None) if long.chars().count() > 1 && long.starts_with(c) => {
            TokenMatch::Initialized
        }
        _ => TokenMatch::None,
    }
}

/// Nickname and full-name links, usable in both directions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NicknameTable {
    links: HashMap<String, BTreeSet<String>>,
}

const BUNDLED_NICKNAMES: &str = include_str!("../data/nicknames.tsv");

impl NicknameTable {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The table shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_NICKNAMES.as_bytes(), Path::new("<bundled>"))
            .expect("bundled nickname table is well formed")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(BufReader::new(file), path)
    }

    /// Parses `nickname<TAB>fullname` rows.
    pub fn parse<R: BufRead>(reader: R, origin: &Path) -> Result<Self> {
        let mut table = NicknameTable::default();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(origin, e))?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(nick), Some(full)) = (cols.next(), cols.next()) else {
                return Err(Error::Parse {
                    line: i + 1,
                    field: "row".into(),
                    message: "expected `nickname<TAB>fullname`".into(),
                });
            };
            let (nick, full) = (
                normalize_tokens(nick).concat(),
                normalize_tokens(full).concat(),
            );
            if nick.is_empty() || full.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    field: "row".into(),
                    message: "empty name".into(),
                });
            }
            table.insert(&nick, &full);
        }
        Ok(table)
    }

    pub fn insert(&mut self, nickname: &str, full: &str) {
        self.links
            .entry(nickname.to_string())
            .or_default()
            .insert(full.to_string());
        self.links
            .entry(full.to_string())
            .or_default()
            .insert(nickname.to_string());
    }

    pub fn linked(&self, a: &str, b: &str) -> bool {
        self.links.get(a).is_some_and(|s| s.contains(b))
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

/// Minimum length of the shorter token for the partial-name rule.
pub const MIN_PARTIAL_LEN: usize = 2;

/// True when two distinct tokens are nickname-linked or one is a prefix of
/// the other of at least [`MIN_PARTIAL_LEN`] characters.
pub fn nickname_match(a: &str, b: &str, table: &NicknameTable) -> bool {
    if a == b {
        return false;
    }
    if table.linked(a, b) {
        return true;
    }
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    short.chars().count() >= MIN_PARTIAL_LEN && long.starts_with(short)
}

/// True iff the Levenshtein distance between `a` and `b` is exactly one.
pub fn edit_distance_one(a: &str, b: &str) -> bool {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let (short, long) = if a.len() <= b.len() {
        (&a, &b)
    } else {
        (&b, &a)
    };
    match long.len() - short.len() {
        0 => {
            short
                .iter()
                .zip(long.iter())
                .filter(|(x, y)| x != y)
                .count()
                == 1
        }
        1 => {
            let prefix = short
                .iter()
                .zip(long.iter())
                .take_while(|(x, y)| x == y)
                .count();
            short[prefix..] == long[prefix + 1..]
        }
        _ => false,
    }
}

/// Case-folded surnames marking a high-ambiguity origin group.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OriginList {
    surnames: BTreeSet<String>,
}

impl OriginList {
    pub fn new<I, S>(surnames: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        OriginList {
            surnames: surnames
                .into_iter()
                .map(|s| normalize_tokens(s.as_ref()).join(" "))
                .filter(|s| !s.is_empty())
                .collect(),
        }
    }

    /// One surname per line; blank lines are ignored.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::new(text.lines()))
    }

    pub fn contains(&self, surname: &str) -> bool {
        self.surnames.contains(surname)
    }

    pub fn is_empty(&self) -> bool {
        self.surnames.is_empty()
    }

    pub fn len(&self) -> usize {
        self.surnames.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.surnames.iter().map(String::as_str)
    }
}

/// True iff any surname token, the space-joined surname or the concatenated
/// surname is on the list.
pub fn in_origin_list<S: AsRef<str>>(surname_tokens: &[S], list: &OriginList) -> bool {
    if list.is_empty() {
        return false;
    }
    let tokens: Vec<String> = surname_tokens
        .iter()
        .map(|t| t.as_ref().to_lowercase())
        .collect();
    tokens.iter().any(|t| list.contains(t))
        || list.contains(&tokens.join(" "))
        || list.contains(&tokens.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(n: &ParsedName) -> Vec<&str> {
        n.given_texts().collect()
    }

    #[test]
    fn parses_initialized_name() {
        let n = parse_name("Renear", "A. H.").unwrap();
        assert_eq!(n.surname_tokens, ["renear"]);
        assert_eq!(texts(&n), ["a", "h"]);
        assert!(n.given_tokens.iter().all(|t| t.is_initial));
        assert_eq!(
            n.given_tokens
                .iter()
                .map(|t| t.position)
                .collect::<Vec<_>>(),
            [0, 1]
        );
    }

    #[test]
    fn parses_full_name() {
        let n = parse_name("Smith", "John Loy").unwrap();
        assert_eq!(texts(&n), ["john", "loy"]);
        assert!(n.given_tokens.iter().all(|t| !t.is_initial));
    }

    #[test]
    fn deletes_apostrophes_and_hyphens() {
        let n = parse_name("O'Brien", "Mary-Jane").unwrap();
        assert_eq!(n.surname_tokens, ["obrien"]);
        assert_eq!(texts(&n), ["maryjane"]);
        let n = parse_name("van der Berg", "").unwrap();
        assert_eq!(n.surname_tokens, ["van", "der", "berg"]);
        assert_eq!(n.joined_surname(), "vanderberg");
        assert!(n.given_tokens.is_empty());
    }

    #[test]
    fn keeps_diacritics_and_rejects_empty_surname() {
        let n = parse_name("Müller", "Björn").unwrap();
        assert_eq!(n.surname_tokens, ["müller"]);
        assert_eq!(texts(&n), ["björn"]);
        assert!(matches!(parse_name("--", "A."), Err(Error::EmptyName(_))));
        assert!(parse_name("   ", "A.").is_err());
    }

    #[test]
    fn signatures() {
        let sig = |s, g| initial_signature(&parse_name(s, g).unwrap());
        assert_eq!(sig("Smith", "John Loy"), ['j', 'l']);
        assert_eq!(sig("Renear", "A. H."), ['a', 'h']);
        assert_eq!(sig("Renear", ""), Vec::<char>::new());
    }

    #[test]
    fn token_matches() {
        assert_eq!(token_match("allen", "a"), TokenMatch::Initialized);
        assert_eq!(token_match("a", "allen"), TokenMatch::Initialized);
        assert_eq!(token_match("allen", "allen"), TokenMatch::Full);
        assert_eq!(token_match("allen", "p"), TokenMatch::None);
        assert_eq!(token_match("a", "a"), TokenMatch::Full);
        assert_eq!(token_match("a", "b"), TokenMatch::None);
        assert_eq!(token_match("al", "allen"), TokenMatch::None);
    }

    #[test]
    fn nicknames_and_partials() {
        let table = NicknameTable::bundled();
        assert!(nickname_match("zak", "zakaria", &table));
        assert!(nickname_match("dave", "david", &table));
        assert!(nickname_match("david", "dave", &table));
        assert!(!nickname_match("dave", "john", &table));
        assert!(nickname_match("bill", "william", &table));
        let empty = NicknameTable::empty();
        assert!(!nickname_match("dave", "david", &empty));
        assert!(nickname_match("zak", "zakaria", &empty));
        assert!(!nickname_match("z", "zakaria", &empty));
        assert!(!nickname_match("zak", "zak", &empty));
    }

    #[test]
    fn nickname_tsv_is_symmetric() {
        let t = NicknameTable::parse("Peg\tMargaret\n".as_bytes(), Path::new("t")).unwrap();
        assert!(t.linked("peg", "margaret"));
        assert!(t.linked("margaret", "peg"));
        assert!(NicknameTable::parse("nocolumns\n".as_bytes(), Path::new("t")).is_err());
    }

    #[test]
    fn edit_distance_examples() {
        assert!(edit_distance_one("bjoern", "bjorn"));
        assert!(edit_distance_one("bjoern", "bjaern"));
        assert!(!edit_distance_one("kim", "kim"));
        assert!(edit_distance_one("liu", "li"));
        assert!(!edit_distance_one("kim", "kmi"));
        assert!(edit_distance_one("", "a"));
    }

    #[test]
    fn origin_lookup() {
        let asian = OriginList::new(["Liu", "Li", "Kim", "Wang"]);
        assert!(in_origin_list(&["liu"], &asian));
        assert!(in_origin_list(&["LIU"], &asian));
        assert!(!in_origin_list(&["newman"], &asian));
        assert!(!in_origin_list(&["liu"], &OriginList::default()));
        let compound = OriginList::new(["de la cruz"]);
        assert!(in_origin_list(&["de", "la", "cruz"], &compound));
    }

    fn levenshtein(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in dp.iter_mut().enumerate() {
            row[0] = i;
        }
        for (j, cell) in dp[0].iter_mut().enumerate() {
            *cell = j;
        }
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let sub = dp[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
                dp[i][j] = sub.min(dp[i - 1][j] + 1).min(dp[i][j - 1] + 1);
            }
        }
        dp[a.len()][b.len()]
    }

    proptest! {
        #[test]
        fn edit_distance_one_agrees_with_dp(a in "[a-d]{0,12}", b in "[a-d]{0,12}") {
            prop_assert_eq!(edit_distance_one(&a, &b), levenshtein(&a, &b) == 1);
        }

        #[test]
        fn edit_distance_one_on_near_pairs(a in "[a-z]{1,12}", pos in 0usize..12, c in "[a-z]") {
            // single edits of `a` exercise the distance-one branch often
            let pos = pos % a.len();
            let mut b = a.clone();
            b.replace_range(pos..pos + 1, &c);
            prop_assert_eq!(edit_distance_one(&a, &b), levenshtein(&a, &b) == 1);
            let mut d = a.clone();
            d.remove(pos);
            prop_assert_eq!(edit_distance_one(&a, &d), levenshtein(&a, &d) == 1);
        }

        #[test]
        fn parse_is_idempotent(s in "[A-Za-z'\\- ]{1,20}", g in "[A-Za-z.\\- ]{0,20}") {
            prop_assume!(s.chars().any(|c| c.is_alphabetic()));
            let first = parse_name(&s, &g).unwrap();
            let again = parse_name(&first.surname_key(), &texts(&first).join(" ")).unwrap();
            prop_assert_eq!(first, again);
        }

        #[test]
        fn token_match_symmetric(a in "[a-c]{1,4}", b in "[a-c]{1,4}") {
            let ab = token_match(&a, &b);
            prop_assert_eq!(ab, token_match(&b, &a));
            prop_assert_eq!(ab == TokenMatch::Full, a == b);
        }
    }
}
