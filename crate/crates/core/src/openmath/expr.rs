use std::fmt;

use num_bigint::BigInt;

/// An OpenMath object: the in-memory form of every expression and equation.
///
/// Float literals compare by bit pattern, so `-0.0 != 0.0` and a NaN equals
/// itself. That is what structural identity needs.
#[derive(Debug, Clone)]
pub enum OmExpr {
    Application { operator: Box<OmExpr>, arguments: Vec<OmExpr> },
    Symbol { cd: String, name: String },
    Variable(String),
    Integer(BigInt),
    Float(f64),
}

impl PartialEq for OmExpr {
    fn eq(&self, other: &Self) -> bool {
        use OmExpr::*;
        match (self, other) {
            (
                Application { operator: a, arguments: xs },
                Application { operator: b, arguments: ys },
            ) => a == b && xs == ys,
            (Symbol { cd: c1, name: n1 }, Symbol { cd: c2, name: n2 }) => c1 == c2 && n1 == n2,
            (Variable(a), Variable(b)) => a == b,
            (Integer(a), Integer(b)) => a == b,
            (Float(a), Float(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for OmExpr {}

impl OmExpr {
    pub fn symbol(cd: impl Into<String>, name: impl Into<String>) -> Self {
        OmExpr::Symbol { cd: cd.into(), name: name.into() }
    }

    pub fn var(name: impl Into<String>) -> Self {
        OmExpr::Variable(name.into())
    }

    pub fn int(value: impl Into<BigInt>) -> Self {
        OmExpr::Integer(value.into())
    }

    pub fn float(value: f64) -> Self {
        OmExpr::Float(value)
    }

    pub fn apply(operator: OmExpr, arguments: Vec<OmExpr>) -> Self {
        OmExpr::Application { operator: Box::new(operator), arguments }
    }

    /// Applies the symbol `cd#name` to `arguments`.
    pub fn call(cd: &str, name: &str, arguments: Vec<OmExpr>) -> Self {
        Self::apply(Self::symbol(cd, name), arguments)
    }

    /// `relation1#eq` applied to both sides.
    pub fn equation(lhs: OmExpr, rhs: OmExpr) -> Self {
        Self::call("relation1", "eq", vec![lhs, rhs])
    }

    pub fn is_symbol(&self, cd: &str, name: &str) -> bool {
        matches!(self, OmExpr::Symbol { cd: c, name: n } if c == cd && n == name)
    }

    /// The operator symbol of an application, if the operator is a symbol.
    pub fn head_symbol(&self) -> Option<(&str, &str)> {
        match self {
            OmExpr::Application { operator, .. } => match operator.as_ref() {
                OmExpr::Symbol { cd, name } => Some((cd, name)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Splits an `relation1#eq` application into its two sides.
    pub fn as_equation(&self) -> Option<(&OmExpr, &OmExpr)> {
        match self {
            OmExpr::Application { operator, arguments }
                if operator.is_symbol("relation1", "eq") && arguments.len() == 2 =>
            {
                Some((&arguments[0], &arguments[1]))
            }
            _ => None,
        }
    }

    /// Distinct variable names in first-occurrence (pre-order) order.
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        self.walk(&mut |e| {
            if let OmExpr::Variable(name) = e {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
        });
        out
    }

    /// Every (cd, name) pair appearing anywhere in the tree.
    pub fn symbols(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let OmExpr::Symbol { cd, name } = e {
                if !out.contains(&(cd.as_str(), name.as_str())) {
                    out.push((cd, name));
                }
            }
        });
        out
    }

    /// Pre-order traversal, operator before arguments.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a OmExpr)) {
        f(self);
        if let OmExpr::Application { operator, arguments } = self {
            operator.walk(f);
            for arg in arguments {
                arg.walk(f);
            }
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Deterministic prefix rendering, injective on structure.
    ///
    /// `arith1.plus($x, 1)`; variables carry a `$` sigil; floats always show a
    /// decimal point or exponent so `1` and `1.0` stay distinct.
    pub fn canonical_form(&self) -> String {
        let mut out = String::new();
        self.write_canonical(&mut out);
        out
    }

    fn write_canonical(&self, out: &mut String) {
        match self {
            OmExpr::Application { operator, arguments } => {
                if matches!(operator.as_ref(), OmExpr::Application { .. }) {
                    out.push('(');
                    operator.write_canonical(out);
                    out.push(')');
                } else {
                    operator.write_canonical(out);
                }
                out.push('(');
                for (i, arg) in arguments.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    arg.write_canonical(out);
                }
                out.push(')');
            }
            OmExpr::Symbol { cd, name } => {
                push_name(out, cd);
                out.push('.');
                push_name(out, name);
            }
            OmExpr::Variable(name) => {
                out.push('$');
                push_name(out, name);
            }
            OmExpr::Integer(i) => out.push_str(&i.to_string()),
            OmExpr::Float(f) => out.push_str(&format_float(*f)),
        }
    }
}

impl fmt::Display for OmExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_form())
    }
}

fn push_name(out: &mut String, name: &str) {
    let plain = !name.is_empty()
        && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-');
    if plain {
        out.push_str(name);
    } else {
        out.push_str(&format!("{name:?}"));
    }
}

/// Shortest decimal string that reads back to the same double.
///
/// Always contains `.`, `e`, or is one of `INF`, `-INF`, `NaN`.
pub fn format_float(value: f64) -> String {
    if value.is_nan() {
        "NaN".to_string()
    } else if value.is_infinite() {
        if value > 0.0 { "INF" } else { "-INF" }.to_string()
    } else {
        format!("{value:?}")
    }
}

/// Inverse of [`format_float`]; also accepts any plain Rust float syntax.
pub fn parse_float(text: &str) -> Option<f64> {
    match text {
        "INF" => Some(f64::INFINITY),
        "-INF" => Some(f64::NEG_INFINITY),
        "NaN" => Some(f64::NAN),
        _ => {
            let ok = !text.is_empty()
                && text.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
            if ok {
                text.parse().ok()
            } else {
                None
            }
        }
    }
}
