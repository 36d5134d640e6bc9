use std::io::{self, BufRead, Write};

use crate::error::ParseError;

use super::dataset::Dataset;
use super::term::{Iri, Literal, Term, Triple};
use super::universe::Universe;

/// Parses W3C N-Triples into a fresh dataset over `universe`.
pub fn parse_ntriples<R: BufRead>(input: R, universe: &Universe) -> Result<Dataset, ParseError> {
    let mut ds = Dataset::new(universe);
    parse_into(input, &mut ds)?;
    Ok(ds)
}

pub fn parse_ntriples_str(input: &str, universe: &Universe) -> Result<Dataset, ParseError> {
    parse_ntriples(input.as_bytes(), universe)
}

/// Adds every parsed triple to `ds`, returning the number of new triples.
pub fn parse_into<R: BufRead>(mut input: R, ds: &mut Dataset) -> Result<usize, ParseError> {
    let mut buf = Vec::new();
    let mut line_no = 0;
    let mut added = 0;
    loop {
        buf.clear();
        let n = input
            .read_until(b'\n', &mut buf)
            .map_err(|e| syntax(line_no + 1, 1, format!("read failed: {e}")))?;
        if n == 0 {
            break;
        }
        line_no += 1;
        let text = std::str::from_utf8(&buf)
            .map_err(|e| syntax(line_no, e.valid_up_to() + 1, "invalid UTF-8".into()))?;
        let text = text.trim_end_matches(['\n', '\r']);
        if let Some(t) = parse_line(text, line_no)? {
            if ds.insert(&t) {
                added += 1;
            }
        }
    }
    Ok(added)
}

fn syntax(line: usize, column: usize, message: String) -> ParseError {
    ParseError::SyntaxError {
        line,
        column,
        message,
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        syntax(self.line, self.pos + 1, message.into())
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            Some(got) => {
                self.pos -= 1;
                Err(self.err(format!("expected `{c}`, found `{got}`")))
            }
            None => Err(self.err(format!("expected `{c}`, found end of line"))),
        }
    }

    fn iri(&mut self) -> Result<Iri, ParseError> {
        let start = self.pos;
        self.expect('<')?;
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err("unterminated IRI")),
                Some('>') => break,
                Some('\\') => value.push(self.unicode_escape()?),
                Some(c) => value.push(c),
            }
        }
        Iri::new(&value).map_err(|e| syntax(self.line, start + 1, e.to_string()))
    }

    fn unicode_escape(&mut self) -> Result<char, ParseError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.err("invalid escape in IRI")),
        };
        self.hex(width)
    }

    fn hex(&mut self, width: usize) -> Result<char, ParseError> {
        let mut code = 0u32;
        for _ in 0..width {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.err("invalid hex digit in escape"))?;
            code = code * 16 + d;
        }
        char::from_u32(code)
            .ok_or_else(|| self.err(format!("escape U+{code:X} is not a scalar value")))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        self.expect('"')?;
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err("unterminated string literal")),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex(4)?,
                        Some('U') => self.hex(8)?,
                        _ => return Err(self.err("invalid escape in string literal")),
                    };
                    lexical.push(c);
                }
                Some(c) => lexical.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                    self.pos += 1;
                }
                let tag: String = self.chars[start..self.pos].iter().collect();
                Literal::lang(lexical, &tag)
                    .map_err(|e| syntax(self.line, start + 1, e.to_string()))
            }
            Some('^') => {
                self.pos += 1;
                self.expect('^')?;
                let dt = self.iri()?;
                Ok(Literal::typed(lexical, dt))
            }
            _ => Ok(Literal::plain(lexical)),
        }
    }

    fn blank_node_ahead(&self) -> bool {
        self.peek() == Some('_') && self.chars.get(self.pos + 1) == Some(&':')
    }
}

fn parse_line(text: &str, line: usize) -> Result<Option<Triple>, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().collect(),
        pos: 0,
        line,
    };
    cur.skip_ws();
    match cur.peek() {
        None | Some('#') => return Ok(None),
        _ => {}
    }
    if cur.blank_node_ahead() {
        return Err(ParseError::BlankNodeError { line });
    }
    if cur.peek() != Some('<') {
        return Err(cur.err("subject must be an IRI"));
    }
    let subject = cur.iri()?;
    cur.skip_ws();
    if cur.peek() != Some('<') {
        return Err(cur.err("predicate must be an IRI"));
    }
    let predicate = cur.iri()?;
    cur.skip_ws();
    let object = match cur.peek() {
        Some('<') => Term::Iri(cur.iri()?),
        Some('"') => Term::Literal(cur.literal()?),
        Some('_') if cur.blank_node_ahead() => return Err(ParseError::BlankNodeError { line }),
        Some(c) => return Err(cur.err(format!("unexpected `{c}` in object position"))),
        None => return Err(cur.err("missing object")),
    };
    cur.skip_ws();
    cur.expect('.')?;
    cur.skip_ws();
    match cur.peek() {
        None | Some('#') => Ok(Some(Triple::new(subject, predicate, object))),
        Some(c) => Err(cur.err(format!("trailing `{c}` after triple"))),
    }
}

/// Parses a single N-Triples term: `<iri>` or a literal with optional
/// language tag or datatype.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
    };
    let term = match cur.peek() {
        Some('<') => Term::Iri(cur.iri()?),
        Some('"') => Term::Literal(cur.literal()?),
        _ if cur.blank_node_ahead() => return Err(ParseError::BlankNodeError { line: 1 }),
        _ => return Err(cur.err("expected `<iri>` or a quoted literal")),
    };
    match cur.peek() {
        None => Ok(term),
        Some(c) => Err(cur.err(format!("trailing `{c}` after term"))),
    }
}

/// Canonical N-Triples: one `\n`-terminated line per triple, sorted.
pub fn serialize_ntriples<W: Write>(ds: &Dataset, mut out: W) -> io::Result<()> {
    for t in ds.sorted_triples() {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

pub fn to_ntriples_string(ds: &Dataset) -> String {
    let mut buf = Vec::new();
    serialize_ntriples(ds, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("serializer emits UTF-8")
}
