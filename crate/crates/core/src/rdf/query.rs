//! Basic graph patterns: conjunctions of triple patterns with `?variables`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::model::{rdf_type, xsd, Graph, Literal, NodeRef, Triple, RDF};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed query: {0}")]
pub struct MalformedQuery(pub String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternTerm {
    Var(String),
    Node(NodeRef),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternQuery {
    patterns: Vec<TriplePattern>,
}

/// Rows of a query result; `rows[i][j]` is the binding of `variables[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solutions {
    pub variables: Vec<String>,
    pub rows: Vec<Vec<NodeRef>>,
}

impl PatternQuery {
    pub fn new(patterns: Vec<TriplePattern>) -> Result<Self, MalformedQuery> {
        if patterns.is_empty() {
            return Err(MalformedQuery("at least one triple pattern is required".into()));
        }
        for p in &patterns {
            if let PatternTerm::Node(n) = &p.subject {
                if n.is_literal() {
                    return Err(MalformedQuery(format!("literal in subject position: {n}")));
                }
            }
            if let PatternTerm::Node(n) = &p.predicate {
                if n.is_literal() {
                    return Err(MalformedQuery(format!("literal in predicate position: {n}")));
                }
            }
        }
        Ok(PatternQuery { patterns })
    }

    /// Parses `?s <p> ex:o . ?o a ex:C` style text.
    ///
    /// Terms: `?name`, `<iri>`, `prefix:local`, `a`, `"literal"` with an
    /// optional `^^datatype` or `@lang`, and bare integers.
    pub fn parse(text: &str, prefixes: &BTreeMap<String, String>) -> Result<Self, MalformedQuery> {
        let tokens = tokenize(text)?;
        let mut patterns = Vec::new();
        let mut current: Vec<PatternTerm> = Vec::new();
        for tok in tokens {
            if tok == "." {
                if current.is_empty() {
                    continue;
                }
                patterns.push(close_pattern(&mut current)?);
                continue;
            }
            current.push(parse_term(&tok, prefixes)?);
            if current.len() > 3 {
                return Err(MalformedQuery("missing '.' between triple patterns".into()));
            }
        }
        if !current.is_empty() {
            patterns.push(close_pattern(&mut current)?);
        }
        Self::new(patterns)
    }

    pub fn patterns(&self) -> &[TriplePattern] {
        &self.patterns
    }

    /// Variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = Vec::new();
        for p in &self.patterns {
            for t in [&p.subject, &p.predicate, &p.object] {
                if let PatternTerm::Var(v) = t {
                    if !vars.contains(v) {
                        vars.push(v.clone());
                    }
                }
            }
        }
        vars
    }
}

fn close_pattern(current: &mut Vec<PatternTerm>) -> Result<TriplePattern, MalformedQuery> {
    if current.len() != 3 {
        return Err(MalformedQuery(format!("triple pattern needs 3 terms, found {}", current.len())));
    }
    let object = current.pop().unwrap();
    let predicate = current.pop().unwrap();
    let subject = current.pop().unwrap();
    Ok(TriplePattern { subject, predicate, object })
}

fn tokenize(text: &str) -> Result<Vec<String>, MalformedQuery> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            '<' => {
                while i < chars.len() && chars[i] != '>' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(MalformedQuery("unterminated IRI".into()));
                }
                i += 1;
            }
            '"' => {
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    if chars[i] == '\\' {
                        i += 1;
                    }
                    i += 1;
                }
                if i >= chars.len() {
                    return Err(MalformedQuery("unterminated literal".into()));
                }
                i += 1;
                while i < chars.len() && !chars[i].is_whitespace() && !(chars[i] == '.' && ends_term(&chars, i)) {
                    i += 1;
                }
            }
            _ => {
                while i < chars.len() && !chars[i].is_whitespace() && !(chars[i] == '.' && ends_term(&chars, i)) {
                    i += 1;
                }
                if i == start {
                    i += 1;
                }
            }
        }
        out.push(chars[start..i].iter().collect());
    }
    Ok(out)
}

/// A `.` terminates a term when followed by whitespace or end of input.
fn ends_term(chars: &[char], i: usize) -> bool {
    chars.get(i + 1).is_none_or(|c| c.is_whitespace())
}

fn parse_term(tok: &str, prefixes: &BTreeMap<String, String>) -> Result<PatternTerm, MalformedQuery> {
    let bad = |why: &str| MalformedQuery(format!("{why}: {tok:?}"));
    if let Some(name) = tok.strip_prefix('?') {
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(bad("invalid variable name"));
        }
        return Ok(PatternTerm::Var(name.to_string()));
    }
    if tok == "a" {
        return Ok(PatternTerm::Node(rdf_type()));
    }
    if let Some(iri) = tok.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return check_iri(iri.to_string()).map(PatternTerm::Node).map_err(|_| bad("invalid IRI"));
    }
    if let Some(body) = tok.strip_prefix('"') {
        let close = body.rfind('"').ok_or_else(|| bad("unterminated literal"))?;
        let lexical = unescape(&body[..close]);
        let suffix = &body[close + 1..];
        let literal = if let Some(dt) = suffix.strip_prefix("^^") {
            let datatype = match parse_term(dt, prefixes)? {
                PatternTerm::Node(NodeRef::Iri(i)) => i,
                _ => return Err(bad("invalid datatype")),
            };
            Literal { lexical, datatype, language: None }
        } else if let Some(lang) = suffix.strip_prefix('@') {
            Literal { lexical, datatype: format!("{RDF}langString"), language: Some(lang.to_string()) }
        } else if suffix.is_empty() {
            Literal { lexical, datatype: xsd("string"), language: None }
        } else {
            return Err(bad("unexpected literal suffix"));
        };
        return Ok(PatternTerm::Node(NodeRef::Literal(literal)));
    }
    if !tok.is_empty() && tok.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) && tok != "-" {
        return Ok(PatternTerm::Node(NodeRef::integer(tok)));
    }
    if let Some((prefix, local)) = tok.split_once(':') {
        let ns = prefixes.get(prefix).ok_or_else(|| bad("unknown prefix"))?;
        return check_iri(format!("{ns}{local}")).map(PatternTerm::Node).map_err(|_| bad("invalid IRI"));
    }
    Err(bad("unrecognised term"))
}

fn check_iri(iri: String) -> Result<NodeRef, ()> {
    if super::model::is_absolute_iri(&iri) {
        Ok(NodeRef::Iri(iri))
    } else {
        Err(())
    }
}

fn unescape(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some('r') => out.push('\r'),
                Some(other) => out.push(other),
                None => {}
            }
        } else {
            out.push(c);
        }
    }
    out
}

type Binding = BTreeMap<String, NodeRef>;

/// Every binding satisfying all patterns, rows sorted by the N-Triples
/// rendering of their values in variable order.
pub fn match_pattern(graph: &Graph, query: &PatternQuery) -> Solutions {
    let variables = query.variables();
    let mut results: Vec<Binding> = Vec::new();
    solve(graph, query.patterns(), &mut Binding::new(), &mut results);
    let mut rows: Vec<(Vec<String>, Vec<NodeRef>)> = results
        .into_iter()
        .map(|b| {
            let row: Vec<NodeRef> = variables.iter().map(|v| b[v].clone()).collect();
            (row.iter().map(NodeRef::to_ntriples).collect(), row)
        })
        .collect();
    rows.sort();
    rows.dedup();
    Solutions { variables, rows: rows.into_iter().map(|(_, r)| r).collect() }
}

fn solve(graph: &Graph, patterns: &[TriplePattern], binding: &mut Binding, out: &mut Vec<Binding>) {
    let Some((first, rest)) = patterns.split_first() else {
        out.push(binding.clone());
        return;
    };
    let resolve = |t: &PatternTerm, b: &Binding| -> Option<NodeRef> {
        match t {
            PatternTerm::Node(n) => Some(n.clone()),
            PatternTerm::Var(v) => b.get(v).cloned(),
        }
    };
    let s = resolve(&first.subject, binding);
    let p = resolve(&first.predicate, binding);
    let o = resolve(&first.object, binding);
    let candidates: Vec<Triple> = graph.matching(s.as_ref(), p.as_ref(), o.as_ref()).cloned().collect();
    for t in candidates {
        let mut added: Vec<String> = Vec::new();
        let mut ok = true;
        for (term, value) in [(&first.subject, &t.subject), (&first.predicate, &t.predicate), (&first.object, &t.object)] {
            if let PatternTerm::Var(v) = term {
                match binding.get(v) {
                    Some(bound) if bound != value => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        binding.insert(v.clone(), value.clone());
                        added.push(v.clone());
                    }
                }
            }
        }
        if ok {
            solve(graph, rest, binding, out);
        }
        for v in added {
            binding.remove(&v);
        }
    }
}
