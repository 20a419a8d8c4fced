//! Seeded synthetic bibliographic corpora with exact ground truth.
//!
//! Authors are grouped into small labs that publish together, which gives
//! the ground-truth coauthorship network many tightly clustered components.
//! A configurable share of authors draws names from a small collision pool
//! of surnames and given names so that initial-based methods conflate them
//! far more often than authors from the Zipf-distributed main pool.

use std::collections::BTreeSet;

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Geometric, Pareto, Zipf};
use serde::{Deserialize, Serialize};

use super::{AuthorMention, Clustering, Corpus, PaperRecord, MAX_AUTHORS, MIN_AUTHORS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub n_authors: usize,
    pub n_papers: usize,
    /// Mean of the truncated geometric team-size law.
    pub mean_team_size: f64,
    pub team_size_min: usize,
    pub team_size_max: usize,
    pub surname_pool_size: usize,
    pub surname_zipf_exponent: f64,
    pub collision_pool_share: f64,
    /// Number of surnames in the collision pool.
    pub collision_surnames: usize,
    /// Number of given names in the collision pool.
    pub collision_given_names: usize,
    pub full_given_name_probability: f64,
    pub email_coverage: f64,
    pub affiliation_coverage: f64,
    pub two_token_given_probability: f64,
    /// Per-mention chance that a middle initial is left off the byline.
    pub middle_initial_drop_probability: f64,
    pub mean_lab_size: f64,
    /// Per-member chance that a coauthor comes from outside the lead lab.
    pub cross_lab_probability: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_authors: 12_000,
            n_papers: 5_000,
            mean_team_size: 4.0,
            team_size_min: MIN_AUTHORS,
            team_size_max: MAX_AUTHORS,
            surname_pool_size: 4_000,
            surname_zipf_exponent: 1.0,
            collision_pool_share: 0.3,
            collision_surnames: 12,
            collision_given_names: 16,
            full_given_name_probability: 0.6,
            email_coverage: 0.3,
            affiliation_coverage: 0.8,
            two_token_given_probability: 0.4,
            middle_initial_drop_probability: 0.1,
            mean_lab_size: 6.0,
            cross_lab_probability: 0.05,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let probabilities = [
            ("collision_pool_share", self.collision_pool_share),
            (
                "full_given_name_probability",
                self.full_given_name_probability,
            ),
            ("email_coverage", self.email_coverage),
            ("affiliation_coverage", self.affiliation_coverage),
            (
                "two_token_given_probability",
                self.two_token_given_probability,
            ),
            (
                "middle_initial_drop_probability",
                self.middle_initial_drop_probability,
            ),
            ("cross_lab_probability", self.cross_lab_probability),
        ];
        for (name, p) in probabilities {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidSpec(format!(
                    "{name} = {p} is outside [0, 1]"
                )));
            }
        }
        if self.n_authors == 0 || self.n_papers == 0 {
            return Err(Error::InvalidSpec(
                "n_authors and n_papers must be at least 1".into(),
            ));
        }
        if self.team_size_min < MIN_AUTHORS || self.team_size_max > MAX_AUTHORS {
            return Err(Error::InvalidSpec(format!(
                "team sizes must lie in {MIN_AUTHORS}..={MAX_AUTHORS}"
            )));
        }
        if self.team_size_max < self.team_size_min {
            return Err(Error::InvalidSpec(format!(
                "team_size_max {} is below team_size_min {}",
                self.team_size_max, self.team_size_min
            )));
        }
        if self.n_authors < self.team_size_min {
            return Err(Error::InvalidSpec(format!(
                "{} authors cannot fill a team of {}",
                self.n_authors, self.team_size_min
            )));
        }
        if self.mean_team_size.is_nan() || self.mean_team_size < self.team_size_min as f64 {
            return Err(Error::InvalidSpec(format!(
                "mean_team_size {} is below team_size_min {}",
                self.mean_team_size, self.team_size_min
            )));
        }
        if self.mean_lab_size.is_nan() || self.mean_lab_size < 1.0 {
            return Err(Error::InvalidSpec(
                "mean_lab_size must be at least 1".into(),
            ));
        }
        if self.surname_pool_size == 0
            || self.surname_zipf_exponent.is_nan()
            || self.surname_zipf_exponent <= 0.0
        {
            return Err(Error::InvalidSpec(
                "surname pool needs a positive size and exponent".into(),
            ));
        }
        if self.collision_pool_share > 0.0
            && (self.collision_surnames == 0 || self.collision_given_names == 0)
        {
            return Err(Error::InvalidSpec(
                "a non-empty collision pool needs surnames and given names".into(),
            ));
        }
        if self.collision_surnames > COLLISION_SURNAMES.len()
            || self.collision_given_names > COLLISION_GIVEN.len()
        {
            return Err(Error::InvalidSpec(format!(
                "collision pool is limited to {} surnames and {} given names",
                COLLISION_SURNAMES.len(),
                COLLISION_GIVEN.len()
            )));
        }
        Ok(())
    }
}

/// Output of [`generate_synthetic`].
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    pub truth: Clustering,
    /// Lowercased surnames of the collision pool, sorted.
    pub origins: Vec<String>,
}

const COLLISION_SURNAMES: &[&str] = &[
    "Kim", "Lee", "Wang", "Li", "Zhang", "Liu", "Chen", "Park", "Yang", "Huang", "Zhao", "Wu",
    "Zhou", "Xu", "Sun", "Ma", "Zhu", "Hu", "Guo", "Lin", "Choi", "Jung", "Nguyen", "Tran",
];

const COLLISION_GIVEN: &[&str] = &[
    "Jin", "Jun", "Jing", "Jie", "Xin", "Xiao", "Yan", "Ying", "Hui", "Hong", "Min", "Ming", "Wei",
    "Wen", "Sung", "Seung", "Ji", "Jae", "Hyun", "Yong", "Li", "Lei", "Yu", "Yi",
];

const FIRST_NAMES: &[&str] = &[
    "Aaron",
    "Abigail",
    "Adam",
    "Adrian",
    "Alan",
    "Albert",
    "Alexander",
    "Alice",
    "Allen",
    "Amanda",
    "Amy",
    "Andrea",
    "Andrew",
    "Angela",
    "Anna",
    "Anthony",
    "Barbara",
    "Benjamin",
    "Bernard",
    "Beth",
    "Bjorn",
    "Brian",
    "Bruce",
    "Carl",
    "Carlos",
    "Caroline",
    "Catherine",
    "Charles",
    "Christina",
    "Christopher",
    "Claire",
    "Daniel",
    "David",
    "Deborah",
    "Dennis",
    "Diana",
    "Donald",
    "Dorothy",
    "Edward",
    "Elena",
    "Elizabeth",
    "Emily",
    "Emma",
    "Eric",
    "Eva",
    "Fernando",
    "Frank",
    "Frederick",
    "Gabriel",
    "George",
    "Gerald",
    "Gregory",
    "Hannah",
    "Harold",
    "Helen",
    "Henry",
    "Hugo",
    "Ian",
    "Isabel",
    "Jacob",
    "James",
    "Janet",
    "Jason",
    "Jean",
    "Jeffrey",
    "Jennifer",
    "Jessica",
    "Joan",
    "John",
    "Jonathan",
    "Joseph",
    "Joshua",
    "Julia",
    "Karen",
    "Katherine",
    "Kenneth",
    "Kevin",
    "Laura",
    "Lawrence",
    "Leonard",
    "Linda",
    "Lisa",
    "Louis",
    "Lucas",
    "Margaret",
    "Maria",
    "Mark",
    "Martin",
    "Mary",
    "Matthew",
    "Michael",
    "Michelle",
    "Nancy",
    "Nathan",
    "Nicholas",
    "Nicole",
    "Oliver",
    "Olivia",
    "Oscar",
    "Patricia",
    "Patrick",
    "Paul",
    "Peter",
    "Philip",
    "Rachel",
    "Ralph",
    "Raymond",
    "Rebecca",
    "Richard",
    "Robert",
    "Roger",
    "Ronald",
    "Rose",
    "Ruth",
    "Samuel",
    "Sandra",
    "Sarah",
    "Scott",
    "Sharon",
    "Simon",
    "Sophie",
    "Stephen",
    "Steven",
    "Susan",
    "Thomas",
    "Timothy",
    "Ursula",
    "Valerie",
    "Victor",
    "Vincent",
    "Walter",
    "William",
    "Xavier",
    "Yvonne",
    "Zachary",
    "Zoe",
];

const ONSETS: &[&str] = &[
    "b", "br", "c", "ch", "d", "dr", "f", "g", "gr", "h", "k", "l", "m", "n", "p", "pr", "r", "s",
    "sh", "st", "t", "tr", "v", "w", "z",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ea", "ou"];
const CODAS: &[&str] = &["", "", "n", "r", "s", "l", "m", "t", "ck", "nd", "rt", "ll"];

const FIELDS: &[&str] = &[
    "Biology",
    "Chemistry",
    "Physics",
    "Computer Science",
    "Neuroscience",
    "Medicine",
    "Materials Science",
    "Mathematics",
    "Ecology",
    "Genetics",
];
const UNIT_KINDS: &[&str] = &["Department", "School", "Institute", "Laboratory", "Center"];

struct Author {
    surname: String,
    given: Vec<String>,
    email_local: String,
    institution: usize,
}

struct Institution {
    name: String,
    domain: String,
}

/// Generates a corpus and its exact ground-truth clustering.
///
/// Equal specs (including the seed) produce byte-identical output.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let collision_surnames = &COLLISION_SURNAMES[..spec.collision_surnames];
    let collision_given = &COLLISION_GIVEN[..spec.collision_given_names];
    let surname_pool = synthetic_surnames(&mut rng, spec.surname_pool_size, collision_surnames);
    let zipf = Zipf::new(spec.surname_pool_size as f64, spec.surname_zipf_exponent)
        .map_err(|e| Error::InvalidSpec(format!("surname law: {e}")))?;

    // labs: consecutive runs of a shuffled author order
    let mut order: Vec<usize> = (0..spec.n_authors).collect();
    order.shuffle(&mut rng);
    let lab_len = Geometric::new(1.0 / spec.mean_lab_size)
        .map_err(|e| Error::InvalidSpec(format!("lab size law: {e}")))?;
    let mut labs: Vec<Vec<usize>> = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let len = (lab_len.sample(&mut rng) as usize + 1).min(order.len() - start);
        labs.push(order[start..start + len].to_vec());
        start += len;
    }
    let mut lab_of = vec![0usize; spec.n_authors];
    for (l, lab) in labs.iter().enumerate() {
        for &a in lab {
            lab_of[a] = l;
        }
    }

    let institutions = synthetic_institutions(&mut rng, labs.len().div_ceil(4).max(1));
    let lab_institution: Vec<usize> = (0..labs.len())
        .map(|_| rng.random_range(0..institutions.len()))
        .collect();

    let mut authors = Vec::with_capacity(spec.n_authors);
    let mut in_collision_pool = vec![false; spec.n_authors];
    for (id, in_pool) in in_collision_pool.iter_mut().enumerate() {
        let collision = rng.random_bool(spec.collision_pool_share);
        *in_pool = collision;
        let (surname, first) = if collision {
            (
                collision_surnames[rng.random_range(0..collision_surnames.len())].to_string(),
                collision_given[rng.random_range(0..collision_given.len())].to_string(),
            )
        } else {
            let rank = zipf.sample(&mut rng) as usize;
            (
                surname_pool[rank.clamp(1, surname_pool.len()) - 1].clone(),
                FIRST_NAMES[rng.random_range(0..FIRST_NAMES.len())].to_string(),
            )
        };
        let mut given = vec![first];
        if rng.random_bool(spec.two_token_given_probability) {
            let middle = if collision {
                collision_given[rng.random_range(0..collision_given.len())]
            } else {
                FIRST_NAMES[rng.random_range(0..FIRST_NAMES.len())]
            };
            given.push(middle.to_string());
        }
        let email_local = format!(
            "{}{}{}",
            given[0][..1].to_lowercase(),
            surname.to_lowercase(),
            id
        );
        authors.push(Author {
            surname,
            given,
            email_local,
            institution: lab_institution[lab_of[id]],
        });
    }

    // heavy-tailed activity drives productivity
    let pareto = Pareto::new(1.0_f64, 1.6).expect("valid pareto");
    let activity: Vec<f64> = (0..spec.n_authors)
        .map(|_| pareto.sample(&mut rng).min(200.0))
        .collect();
    let lab_weights: Vec<f64> = labs
        .iter()
        .map(|lab| lab.iter().map(|&a| activity[a]).sum())
        .collect();
    let pick_lab = WeightedIndex::new(&lab_weights).expect("positive lab weights");
    let pick_any = WeightedIndex::new(&activity).expect("positive activity");
    let team_law = Geometric::new(1.0 / (spec.mean_team_size - spec.team_size_min as f64 + 1.0))
        .map_err(|e| Error::InvalidSpec(format!("team size law: {e}")))?;
    let team_cap = spec.team_size_max.min(spec.n_authors);

    let mut papers = Vec::with_capacity(spec.n_papers);
    let mut truth = Vec::new();
    for p in 0..spec.n_papers {
        let size = loop {
            let s = spec.team_size_min + team_law.sample(&mut rng) as usize;
            if s <= team_cap {
                break s;
            }
        };
        let lab = &labs[pick_lab.sample(&mut rng)];
        let mut team: Vec<usize> = Vec::with_capacity(size);
        let local: Vec<usize> = lab.clone();
        let mut local_weights: Vec<f64> = local.iter().map(|&a| activity[a]).collect();
        while team.len() < size {
            let from_outside = team.len() >= lab.len()
                || (!team.is_empty() && rng.random_bool(spec.cross_lab_probability));
            let candidate = if from_outside {
                pick_any.sample(&mut rng)
            } else {
                let idx = WeightedIndex::new(&local_weights)
                    .expect("lab has remaining members")
                    .sample(&mut rng);
                local_weights[idx] = 0.0;
                local[idx]
            };
            if !team.contains(&candidate) {
                team.push(candidate);
            }
        }
        team.shuffle(&mut rng);

        let paper_id = format!("P{p:06}");
        let mut byline = Vec::with_capacity(team.len());
        for (index, &a) in team.iter().enumerate() {
            let author = &authors[a];
            let drop_middle =
                author.given.len() > 1 && rng.random_bool(spec.middle_initial_drop_probability);
            let given: &[String] = if drop_middle {
                &author.given[..1]
            } else {
                &author.given
            };
            let mut mention = AuthorMention::new(author.surname.clone(), initials(given));
            if rng.random_bool(spec.full_given_name_probability) {
                mention.given_full_raw = Some(given.join(" "));
            }
            if rng.random_bool(spec.affiliation_coverage) {
                mention
                    .affiliations
                    .push(institutions[author.institution].name.clone());
            }
            if rng.random_bool(spec.email_coverage) {
                let domain = if rng.random_bool(0.2) {
                    "gmail.com"
                } else {
                    institutions[author.institution].domain.as_str()
                };
                mention.email = Some(format!("{}@{}", author.email_local, domain));
            }
            byline.push(mention);
            truth.push((format!("{paper_id}:{index}"), format!("A{a:06}")));
        }
        let mut record = PaperRecord::new(paper_id, byline);
        record.year = Some(2012);
        papers.push(record);
    }

    let mut origins: Vec<String> = collision_surnames
        .iter()
        .map(|s| s.to_lowercase())
        .collect();
    origins.sort();
    Ok(SyntheticCorpus {
        corpus: Corpus::new(papers)?,
        truth: Clustering::from_pairs(truth)?,
        origins,
    })
}

fn initials(given: &[String]) -> String {
    given
        .iter()
        .map(|g| format!("{}.", g.chars().next().expect("non-empty given name")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn synthetic_surnames(rng: &mut ChaCha8Rng, n: usize, reserved: &[&str]) -> Vec<String> {
    let reserved: BTreeSet<String> = reserved.iter().map(|s| s.to_lowercase()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let syllables = rng.random_range(2..=3);
        let mut s = String::new();
        for _ in 0..syllables {
            s.push_str(ONSETS[rng.random_range(0..ONSETS.len())]);
            s.push_str(VOWELS[rng.random_range(0..VOWELS.len())]);
            s.push_str(CODAS[rng.random_range(0..CODAS.len())]);
        }
        if reserved.contains(&s) || !seen.insert(s.clone()) {
            continue;
        }
        let mut chars = s.chars();
        let first = chars.next().expect("non-empty").to_ascii_uppercase();
        out.push(std::iter::once(first).chain(chars).collect());
    }
    out
}

fn synthetic_institutions(rng: &mut ChaCha8Rng, n: usize) -> Vec<Institution> {
    let names = synthetic_surnames(rng, n, &[]);
    names
        .into_iter()
        .map(|name| {
            let field = FIELDS[rng.random_range(0..FIELDS.len())];
            let unit = UNIT_KINDS[rng.random_range(0..UNIT_KINDS.len())];
            let zip = rng.random_range(10_000..100_000);
            Institution {
                domain: format!("{}.edu", name.to_lowercase()),
                name: format!("{unit} of {field}, {name} University, {name}ville {zip}"),
            }
        })
        .collect()
}
