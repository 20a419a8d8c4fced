use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: invalid field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("duplicate paper_id `{0}`")]
    DuplicatePaper(String),

    #[error("duplicate mention_id `{0}` in label file")]
    DuplicateMention(String),

    #[error("unknown mention_id `{0}` in label file")]
    UnknownMention(String),

    #[error("label file is missing {} mention(s): {}", .0.len(), .0.join(", "))]
    MissingMentions(Vec<String>),

    #[error("clusterings cover different mention sets ({only_left} only in first, {only_right} only in second)")]
    MentionSetMismatch { only_left: usize, only_right: usize },

    #[error("empty name: {0}")]
    EmptyName(String),

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("corpus has no mentions")]
    EmptyCorpus,

    #[error("origin list is empty")]
    EmptyOriginList,

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
