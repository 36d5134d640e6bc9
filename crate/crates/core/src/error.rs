use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("IRI `{0}` is not absolute")]
    RelativeIri(String),
    #[error("IRI `{0}` contains forbidden character {1:?}")]
    InvalidIriChar(String, char),
    #[error("invalid language tag `{0}`")]
    InvalidLanguageTag(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: blank nodes are not supported")]
    BlankNodeError { line: usize },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::SyntaxError { line, .. } | ParseError::BlankNodeError { line } => *line,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("malformed pattern: {0}")]
    MalformedPattern(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LanguageError {
    #[error("a change named `{0}` is already registered")]
    DuplicateName(String),
    #[error("parameter ?{param} of `{change}` does not occur in its body")]
    UnboundParam { change: String, param: String },
    #[error("`{0}` is not a registered simple change")]
    UnknownSimpleChange(String),
    #[error("`{name}` takes {expected} arguments, got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("`{change}` consumes nothing: both added and deleted patterns are empty")]
    EmptyDelta { change: String },
    #[error("`{change}` and `{other}` share the parameter-property prefix `{abbrev}`")]
    AbbrevCollision {
        change: String,
        other: String,
        abbrev: String,
    },
    #[error("variable ?{var} in `{change}` uses the reserved `__` prefix")]
    ReservedVariable { change: String, var: String },
    #[error("invalid association in `{change}`: {reason}")]
    InvalidAssociation { change: String, reason: String },
    #[error("`{change}`: {source}")]
    Pattern {
        change: String,
        #[source]
        source: PatternError,
    },
    #[error("invalid change name `{0}`")]
    InvalidName(String),
}

#[derive(Debug, Error)]
pub enum DefinitionFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
    #[error(transparent)]
    Language(#[from] LanguageError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectionError {
    #[error("the ontology holds no simple-change layer for {old} -> {new}")]
    MissingSimpleLayer { old: String, new: String },
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OntologyError {
    #[error("`{0}` is not a change class of this ontology")]
    UnknownChange(String),
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Detection(#[from] DetectionError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
