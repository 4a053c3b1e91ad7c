use thiserror::Error;

use super::model::{is_absolute_iri, xsd, Graph, Literal, NodeRef, Triple, RDF};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("N-Triples syntax error at line {line}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub message: String,
}

/// Canonical N-Triples: one triple per line, lines sorted bytewise,
/// each terminated by `\n`. The empty graph yields the empty document.
pub fn to_ntriples(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph.iter().map(Triple::to_ntriples).collect();
    lines.sort_unstable();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn parse_ntriples(input: &str) -> Result<Graph, SyntaxError> {
    let mut graph = Graph::new();
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| SyntaxError { line, message };
        let mut cur = Cursor { s: raw, pos: 0 };
        cur.skip_ws();
        if cur.done() || cur.peek() == Some('#') {
            continue;
        }
        let subject = cur.term().map_err(err)?;
        cur.skip_ws();
        let predicate = cur.term().map_err(err)?;
        cur.skip_ws();
        let object = cur.term().map_err(err)?;
        cur.skip_ws();
        if cur.peek() != Some('.') {
            return Err(err("expected '.' after object".into()));
        }
        cur.pos += 1;
        cur.skip_ws();
        if !cur.done() && cur.peek() != Some('#') {
            return Err(err(format!("trailing content {:?}", cur.rest())));
        }
        graph
            .insert(Triple::new(subject, predicate, object))
            .map_err(|e| err(e.to_string()))?;
    }
    Ok(graph)
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn done(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<NodeRef, String> {
        match self.peek() {
            Some('<') => self.iri().map(NodeRef::Iri),
            Some('"') => self.literal(),
            Some('_') => Err("blank nodes are not supported".into()),
            Some(c) => Err(format!("unexpected character {c:?}")),
            None => Err("unexpected end of line".into()),
        }
    }

    fn iri(&mut self) -> Result<String, String> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => out.push(self.unicode_escape()?),
                Some(c) => out.push(c),
                None => return Err("unterminated IRI".into()),
            }
        }
        if !is_absolute_iri(&out) {
            return Err(format!("not an absolute IRI: {out:?}"));
        }
        Ok(out)
    }

    fn unicode_escape(&mut self) -> Result<char, String> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            other => return Err(format!("invalid escape {other:?}")),
        };
        let end = self.pos + width;
        let hex = self.s.get(self.pos..end).ok_or("truncated unicode escape")?;
        let code = u32::from_str_radix(hex, 16).map_err(|_| format!("invalid unicode escape {hex}"))?;
        self.pos = end;
        char::from_u32(code).ok_or_else(|| format!("invalid code point {code:X}"))
    }

    fn literal(&mut self) -> Result<NodeRef, String> {
        self.bump();
        let mut lexical = String::new();
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => {
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u' | 'U') => {
                            lexical.push(self.unicode_escape()?);
                            continue;
                        }
                        other => return Err(format!("invalid escape {other:?}")),
                    };
                    self.pos += 1;
                    lexical.push(c);
                }
                Some(c) => lexical.push(c),
                None => return Err("unterminated literal".into()),
            }
        }
        if self.rest().starts_with("^^") {
            self.pos += 2;
            if self.peek() != Some('<') {
                return Err("expected datatype IRI".into());
            }
            let datatype = self.iri()?;
            return Ok(NodeRef::Literal(Literal { lexical, datatype, language: None }));
        }
        if self.peek() == Some('@') {
            self.pos += 1;
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                self.pos += 1;
            }
            let lang = &self.s[start..self.pos];
            if lang.is_empty() {
                return Err("empty language tag".into());
            }
            return Ok(NodeRef::Literal(Literal {
                lexical,
                datatype: format!("{RDF}langString"),
                language: Some(lang.to_string()),
            }));
        }
        Ok(NodeRef::Literal(Literal { lexical, datatype: xsd("string"), language: None }))
    }
}
