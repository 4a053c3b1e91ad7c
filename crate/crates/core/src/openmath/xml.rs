//! OpenMath XML encoding: `OMOBJ`, `OMA`, `OMS`, `OMV`, `OMI`, `OMF`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use quick_xml::events::{BytesStart, Event};
use quick_xml::name::ResolveResult;
use quick_xml::NsReader;
use thiserror::Error;

use super::expr::{format_float, parse_float, OmExpr};

pub const OPENMATH_NS: &str = "http://www.openmath.org/OpenMath";

const UNSUPPORTED: &[&str] = &["OMBIND", "OMSTR", "OMB", "OME", "OMATTR", "OMR", "OMFOREIGN", "OMBVAR"];

#[derive(Debug, Error)]
pub enum OpenMathError {
    #[error("malformed XML at byte {position}: {message}")]
    XmlSyntax { position: u64, message: String },
    #[error("invalid OpenMath structure: {0}")]
    OmStructure(String),
}

fn structure(msg: impl Into<String>) -> OpenMathError {
    OpenMathError::OmStructure(msg.into())
}

/// Result of a parse, with any elements skipped in lenient mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedObject {
    pub expr: OmExpr,
    pub warnings: Vec<String>,
}

/// Configurable OpenMath XML reader.
///
/// Strict mode (the default) rejects elements outside the supported subset;
/// lenient mode drops them and records a warning.
#[derive(Debug, Clone, Copy, Default)]
pub struct OpenMathReader {
    lenient: bool,
}

impl OpenMathReader {
    pub fn strict() -> Self {
        OpenMathReader { lenient: false }
    }

    pub fn lenient() -> Self {
        OpenMathReader { lenient: true }
    }

    pub fn parse(&self, input: &[u8]) -> Result<ParsedObject, OpenMathError> {
        let root = read_tree(input)?;
        if root.name != "OMOBJ" {
            return Err(structure(format!("root element must be OMOBJ, found {}", root.name)));
        }
        let mut warnings = Vec::new();
        let mut objects = Vec::new();
        for child in &root.children {
            if let Some(expr) = self.convert(child, &mut warnings)? {
                objects.push(expr);
            }
        }
        if !root.text.trim().is_empty() {
            return Err(structure("unexpected text inside OMOBJ"));
        }
        match objects.len() {
            1 => Ok(ParsedObject { expr: objects.pop().unwrap(), warnings }),
            0 => Err(structure("OMOBJ contains no object")),
            n => Err(structure(format!("OMOBJ must contain exactly one object, found {n}"))),
        }
    }

    fn convert(&self, el: &Element, warnings: &mut Vec<String>) -> Result<Option<OmExpr>, OpenMathError> {
        let expr = match el.name.as_str() {
            "OMA" => {
                let mut parts = Vec::with_capacity(el.children.len());
                for child in &el.children {
                    if let Some(e) = self.convert(child, warnings)? {
                        parts.push(e);
                    }
                }
                if parts.is_empty() {
                    return Err(structure("OMA requires an operator child"));
                }
                let operator = parts.remove(0);
                OmExpr::apply(operator, parts)
            }
            "OMS" => {
                el.expect_leaf()?;
                let cd = el.required_attr("cd")?;
                let name = el.required_attr("name")?;
                OmExpr::symbol(cd, name)
            }
            "OMV" => {
                el.expect_leaf()?;
                let name = el.required_attr("name")?;
                if name.chars().any(char::is_whitespace) {
                    return Err(structure(format!("OMV name {name:?} contains whitespace")));
                }
                OmExpr::var(name)
            }
            "OMI" => {
                el.expect_no_children()?;
                OmExpr::Integer(parse_omi(el.text.trim())?)
            }
            "OMF" => {
                el.expect_leaf()?;
                OmExpr::Float(parse_omf(el)?)
            }
            other if UNSUPPORTED.contains(&other) && self.lenient => {
                warnings.push(format!("skipped unsupported element {other}"));
                return Ok(None);
            }
            other if UNSUPPORTED.contains(&other) => {
                return Err(structure(format!("unsupported element {other}")));
            }
            other => return Err(structure(format!("unknown element {other}"))),
        };
        Ok(Some(expr))
    }
}

/// Parses a strict-mode OpenMath XML document.
pub fn parse_openmath_xml(input: &[u8]) -> Result<OmExpr, OpenMathError> {
    OpenMathReader::strict().parse(input).map(|p| p.expr)
}

fn parse_omi(text: &str) -> Result<BigInt, OpenMathError> {
    let bad = || structure(format!("invalid OMI content {text:?}"));
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let magnitude = if let Some(hex) = digits.strip_prefix('x') {
        if hex.is_empty() || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(bad());
        }
        BigInt::parse_bytes(hex.as_bytes(), 16).ok_or_else(bad)?
    } else {
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(digits).map_err(|_| bad())?
    };
    Ok(if negative { -magnitude } else { magnitude })
}

fn parse_omf(el: &Element) -> Result<f64, OpenMathError> {
    match (el.attr("dec"), el.attr("hex")) {
        (Some(dec), None) => {
            parse_float(dec.trim()).ok_or_else(|| structure(format!("invalid OMF dec value {dec:?}")))
        }
        (None, Some(hex)) => {
            let hex = hex.trim();
            if hex.len() != 16 {
                return Err(structure(format!("OMF hex value must have 16 digits: {hex:?}")));
            }
            u64::from_str_radix(hex, 16)
                .map(f64::from_bits)
                .map_err(|_| structure(format!("invalid OMF hex value {hex:?}")))
        }
        (Some(_), Some(_)) => Err(structure("OMF has both dec and hex")),
        (None, None) => Err(structure("OMF requires dec or hex")),
    }
}

#[derive(Debug, Default)]
struct Element {
    name: String,
    attrs: Vec<(String, String)>,
    children: Vec<Element>,
    text: String,
}

impl Element {
    fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn required_attr(&self, key: &str) -> Result<&str, OpenMathError> {
        match self.attr(key) {
            Some(v) if !v.is_empty() => Ok(v),
            Some(_) => Err(structure(format!("{} attribute {key} is empty", self.name))),
            None => Err(structure(format!("{} missing {key} attribute", self.name))),
        }
    }

    fn expect_no_children(&self) -> Result<(), OpenMathError> {
        if self.children.is_empty() {
            Ok(())
        } else {
            Err(structure(format!("{} must not have child elements", self.name)))
        }
    }

    fn expect_leaf(&self) -> Result<(), OpenMathError> {
        self.expect_no_children()?;
        if self.text.trim().is_empty() {
            Ok(())
        } else {
            Err(structure(format!("{} must be empty", self.name)))
        }
    }
}

fn read_tree(input: &[u8]) -> Result<Element, OpenMathError> {
    let mut reader = NsReader::from_reader(input);
    reader.config_mut().trim_text(true);
    reader.config_mut().check_end_names = true;
    let syntax = |reader: &NsReader<&[u8]>, message: String| OpenMathError::XmlSyntax {
        position: reader.buffer_position(),
        message,
    };

    let mut stack: Vec<Element> = Vec::new();
    let mut root: Option<Element> = None;
    loop {
        let (is_om, event) = match reader.read_resolved_event() {
            Ok((ResolveResult::Unbound, event)) => (true, event),
            Ok((ResolveResult::Bound(n), event)) => (n.as_ref() == OPENMATH_NS.as_bytes(), event),
            Ok((ResolveResult::Unknown(p), _)) => {
                let prefix = String::from_utf8_lossy(&p).into_owned();
                return Err(syntax(&reader, format!("unknown namespace prefix {prefix}")));
            }
            Err(e) => return Err(syntax(&reader, e.to_string())),
        };
        match event {
            Event::Start(start) => {
                let el = start_element(&start, is_om).map_err(|m| syntax(&reader, m))?;
                if root.is_some() {
                    return Err(syntax(&reader, "content after root element".into()));
                }
                stack.push(el);
            }
            Event::Empty(start) => {
                let el = start_element(&start, is_om).map_err(|m| syntax(&reader, m))?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(el),
                    None if root.is_none() => root = Some(el),
                    None => return Err(syntax(&reader, "content after root element".into())),
                }
            }
            Event::End(_) => {
                let el = stack.pop().ok_or_else(|| syntax(&reader, "unbalanced end tag".into()))?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(el),
                    None => root = Some(el),
                }
            }
            Event::Text(text) => {
                let text = text.unescape().map_err(|e| syntax(&reader, e.to_string()))?;
                match stack.last_mut() {
                    Some(el) => el.text.push_str(&text),
                    None if text.trim().is_empty() => {}
                    None => return Err(syntax(&reader, "text outside root element".into())),
                }
            }
            Event::CData(data) => {
                let text = String::from_utf8_lossy(&data).into_owned();
                if let Some(el) = stack.last_mut() {
                    el.text.push_str(&text);
                }
            }
            Event::Eof => break,
            Event::Decl(_) | Event::Comment(_) | Event::PI(_) | Event::DocType(_) => {}
        }
    }
    if !stack.is_empty() {
        return Err(OpenMathError::XmlSyntax {
            position: reader.buffer_position(),
            message: format!("unclosed element {}", stack.last().unwrap().name),
        });
    }
    root.ok_or_else(|| structure("missing OMOBJ root element"))
}

fn start_element(start: &BytesStart<'_>, is_om: bool) -> Result<Element, String> {
    let name = String::from_utf8_lossy(start.local_name().as_ref()).into_owned();
    if !is_om {
        return Err(format!("element {name} is not in the OpenMath namespace"));
    }
    let mut attrs = Vec::new();
    for attr in start.attributes() {
        let attr = attr.map_err(|e| e.to_string())?;
        if attr.key.as_namespace_binding().is_some() {
            continue;
        }
        let key = String::from_utf8_lossy(attr.key.local_name().as_ref()).into_owned();
        let value = attr.unescape_value().map_err(|e| e.to_string())?.into_owned();
        attrs.push((key, value));
    }
    Ok(Element { name, attrs, ..Default::default() })
}

/// Canonical OpenMath XML: `OMOBJ` root in the OpenMath namespace,
/// two-space indentation, `cd` before `name`, floats as shortest `dec`.
pub fn serialize_openmath_xml(expr: &OmExpr) -> String {
    let mut out = String::new();
    out.push_str(&format!("<OMOBJ xmlns=\"{OPENMATH_NS}\">\n"));
    write_element(&mut out, expr, 1);
    out.push_str("</OMOBJ>\n");
    out
}

fn write_element(out: &mut String, expr: &OmExpr, depth: usize) {
    let indent = "  ".repeat(depth);
    match expr {
        OmExpr::Application { operator, arguments } => {
            let _ = writeln!(out, "{indent}<OMA>");
            write_element(out, operator, depth + 1);
            for arg in arguments {
                write_element(out, arg, depth + 1);
            }
            let _ = writeln!(out, "{indent}</OMA>");
        }
        OmExpr::Symbol { cd, name } => {
            let _ = writeln!(out, "{indent}<OMS cd=\"{}\" name=\"{}\"/>", escape(cd), escape(name));
        }
        OmExpr::Variable(name) => {
            let _ = writeln!(out, "{indent}<OMV name=\"{}\"/>", escape(name));
        }
        OmExpr::Integer(i) => {
            let _ = writeln!(out, "{indent}<OMI>{i}</OMI>");
        }
        OmExpr::Float(f) => {
            let _ = writeln!(out, "{indent}<OMF dec=\"{}\"/>", format_float(*f));
        }
    }
}

fn escape(s: &str) -> std::borrow::Cow<'_, str> {
    quick_xml::escape::escape(s)
}
