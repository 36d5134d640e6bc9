use std::fmt;
use std::sync::Arc;

use crate::error::TermError;

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(Arc<str>);

impl Iri {
    /// Builds an IRI, rejecting strings without a scheme separator or with
    /// characters that cannot appear between `<` and `>` in N-Triples.
    pub fn new(value: impl AsRef<str>) -> Result<Self, TermError> {
        let value = value.as_ref();
        let scheme_end = value
            .find(':')
            .ok_or_else(|| TermError::RelativeIri(value.to_owned()))?;
        let scheme = &value[..scheme_end];
        let scheme_ok = !scheme.is_empty()
            && scheme.starts_with(|c: char| c.is_ascii_alphabetic())
            && scheme
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
        if !scheme_ok {
            return Err(TermError::RelativeIri(value.to_owned()));
        }
        if let Some(bad) = value.chars().find(|c| {
            matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') || *c <= ' '
        }) {
            return Err(TermError::InvalidIriChar(value.to_owned(), bad));
        }
        Ok(Iri(Arc::from(value)))
    }

    pub(crate) fn new_unchecked(value: &str) -> Self {
        Iri(Arc::from(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

/// Annotation carried by a literal besides its lexical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiteralTag {
    Plain,
    Language(Arc<str>),
    Datatype(Iri),
}

/// An RDF literal. Equality is syntactic: lexical form plus tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: Arc<str>,
    tag: LiteralTag,
}

impl Literal {
    pub fn plain(lexical: impl AsRef<str>) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            tag: LiteralTag::Plain,
        }
    }

    pub fn lang(lexical: impl AsRef<str>, language: impl AsRef<str>) -> Result<Self, TermError> {
        let language = language.as_ref();
        let valid = !language.is_empty()
            && language
                .split('-')
                .all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric()))
            && language.starts_with(|c: char| c.is_ascii_alphabetic());
        if !valid {
            return Err(TermError::InvalidLanguageTag(language.to_owned()));
        }
        Ok(Literal {
            lexical: Arc::from(lexical.as_ref()),
            tag: LiteralTag::Language(Arc::from(language)),
        })
    }

    pub fn typed(lexical: impl AsRef<str>, datatype: Iri) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            tag: LiteralTag::Datatype(datatype),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn tag(&self) -> &LiteralTag {
        &self.tag
    }

    pub fn language(&self) -> Option<&str> {
        match &self.tag {
            LiteralTag::Language(l) => Some(l),
            _ => None,
        }
    }

    pub fn datatype(&self) -> Option<&Iri> {
        match &self.tag {
            LiteralTag::Datatype(d) => Some(d),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        for c in self.lexical.chars() {
            match c {
                '"' => f.write_str("\\\"")?,
                '\\' => f.write_str("\\\\")?,
                '\n' => f.write_str("\\n")?,
                '\r' => f.write_str("\\r")?,
                '\t' => f.write_str("\\t")?,
                '\u{8}' => f.write_str("\\b")?,
                '\u{c}' => f.write_str("\\f")?,
                c if c < ' ' || c == '\u{7f}' => write!(f, "\\u{:04X}", c as u32)?,
                c => write!(f, "{c}")?,
            }
        }
        f.write_str("\"")?;
        match &self.tag {
            LiteralTag::Plain => Ok(()),
            LiteralTag::Language(l) => write!(f, "@{l}"),
            LiteralTag::Datatype(d) => write!(f, "^^{d}"),
        }
    }
}

/// A URI or a literal. Blank nodes are deliberately not representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl AsRef<str>) -> Result<Self, TermError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            Term::Literal(_) => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

impl From<Iri> for Term {
    fn from(value: Iri) -> Self {
        Term::Iri(value)
    }
}

impl From<Literal> for Term {
    fn from(value: Literal) -> Self {
        Term::Literal(value)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => i.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

/// `T = U × U × (U ∪ L)`: subject and predicate are always IRIs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject,
            predicate,
            object: object.into(),
        }
    }

    /// The canonical N-Triples line, without the trailing newline.
    pub fn to_ntriples(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
