//! Floating-point evaluation of the arithmetic and transcendental subset.
//!
//! `relation1.eq` evaluates to the residual `|lhs - rhs|`, so a binding set
//! satisfies an equation when the result is (close to) zero. Derivatives,
//! integrals and statistics are not evaluated.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Deserialize;
use thiserror::Error;

use crate::openmath::OmExpr;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("UnboundVariable: {0}")]
    UnboundVariable(String),
    #[error("UnsupportedOperator: {cd}.{name} cannot be evaluated")]
    UnsupportedOperator { cd: String, name: String },
    #[error("ArityMismatch: {cd}.{name} expects {expected} argument(s), got {found}")]
    Arity { cd: String, name: String, expected: String, found: usize },
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("DomainError: {0}")]
    DomainError(String),
    #[error("NotANumber: bare symbol {0} has no numeric value")]
    NotANumber(String),
}

/// A named value with an optional unit (free text, not checked).
#[derive(Debug, Clone, PartialEq)]
pub struct VariableBinding {
    pub name: String,
    pub value: f64,
    pub unit: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bindings {
    values: BTreeMap<String, VariableBinding>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BindingValue {
    Number(f64),
    WithUnit { value: f64, #[serde(default)] unit: Option<String> },
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        let name = name.into();
        self.values.insert(name.clone(), VariableBinding { name, value, unit: None });
        self
    }

    pub fn insert(&mut self, binding: VariableBinding) {
        self.values.insert(binding.name.clone(), binding);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).map(|b| b.value)
    }

    pub fn iter(&self) -> impl Iterator<Item = &VariableBinding> {
        self.values.values()
    }

    /// A JSON object mapping names to numbers or to `{"value": n, "unit": "..."}`.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let raw: BTreeMap<String, BindingValue> = serde_json::from_str(text)?;
        let mut out = Bindings::new();
        for (name, v) in raw {
            let (value, unit) = match v {
                BindingValue::Number(n) => (n, None),
                BindingValue::WithUnit { value, unit } => (value, unit),
            };
            out.insert(VariableBinding { name, value, unit });
        }
        Ok(out)
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for Bindings {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        let mut b = Bindings::new();
        for (k, v) in iter {
            b.set(k, v);
        }
        b
    }
}

pub fn evaluate(expr: &OmExpr, bindings: &Bindings) -> Result<f64, EvalError> {
    match expr {
        OmExpr::Integer(i) => Ok(i.to_f64().unwrap_or(f64::NAN)),
        OmExpr::Float(f) => Ok(*f),
        OmExpr::Variable(name) => bindings.get(name).ok_or_else(|| EvalError::UnboundVariable(name.clone())),
        OmExpr::Symbol { cd, name } => Err(EvalError::NotANumber(format!("{cd}.{name}"))),
        OmExpr::Application { operator, arguments } => {
            let OmExpr::Symbol { cd, name } = operator.as_ref() else {
                return Err(EvalError::UnsupportedOperator { cd: String::new(), name: operator.canonical_form() });
            };
            apply(cd, name, arguments, bindings)
        }
    }
}

fn apply(cd: &str, name: &str, args: &[OmExpr], bindings: &Bindings) -> Result<f64, EvalError> {
    let arity = |expected: &str, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(EvalError::Arity { cd: cd.into(), name: name.into(), expected: expected.into(), found: args.len() })
        }
    };
    // Reject unsupported operators before touching the arguments so that
    // e.g. diff(x^2, x) reports the operator, not a missing binding.
    let supported = matches!(
        (cd, name),
        ("arith1", "plus" | "minus" | "times" | "divide" | "power" | "unary_minus")
            | ("transc1", "sin" | "cos" | "tan" | "exp" | "ln")
            | ("relation1", "eq")
    );
    if !supported {
        return Err(EvalError::UnsupportedOperator { cd: cd.into(), name: name.into() });
    }
    let v = args.iter().map(|a| evaluate(a, bindings)).collect::<Result<Vec<f64>, _>>()?;
    let value = match (cd, name) {
        ("arith1", "plus") => {
            arity("at least 1", !v.is_empty())?;
            v.iter().sum()
        }
        ("arith1", "times") => {
            arity("at least 1", !v.is_empty())?;
            v.iter().product()
        }
        ("arith1", "minus") => {
            arity("2", v.len() == 2)?;
            v[0] - v[1]
        }
        ("arith1", "divide") => {
            arity("2", v.len() == 2)?;
            if v[1] == 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            v[0] / v[1]
        }
        ("arith1", "power") => {
            arity("2", v.len() == 2)?;
            if v[0] == 0.0 && v[1] < 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            let r = v[0].powf(v[1]);
            if r.is_nan() && !v[0].is_nan() && !v[1].is_nan() {
                return Err(EvalError::DomainError(format!("{} ^ {}", v[0], v[1])));
            }
            r
        }
        ("arith1", "unary_minus") => {
            arity("1", v.len() == 1)?;
            -v[0]
        }
        ("relation1", "eq") => {
            arity("2", v.len() == 2)?;
            (v[0] - v[1]).abs()
        }
        ("transc1", f) => {
            arity("1", v.len() == 1)?;
            let x = v[0];
            match f {
                "sin" => x.sin(),
                "cos" => x.cos(),
                "tan" => x.tan(),
                "exp" => x.exp(),
                _ => {
                    if x <= 0.0 {
                        return Err(EvalError::DomainError(format!("ln of non-positive value {x}")));
                    }
                    x.ln()
                }
            }
        }
        _ => unreachable!("filtered above"),
    };
    Ok(value)
}

/// Renders a result with 15 significant digits, dropping representation
/// noise such as `0.14999999999999997`.
pub fn format_result(value: f64) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    let rounded: f64 = format!("{value:.14e}").parse().expect("valid float");
    format!("{rounded}")
}
