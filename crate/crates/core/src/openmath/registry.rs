use std::collections::BTreeMap;

/// How a symbol is written in infix text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfixForm {
    /// Binary operator token with a binding strength; higher binds tighter.
    Binary { token: &'static str, precedence: u8, right_assoc: bool },
    /// Prefix operator token.
    Prefix { token: &'static str, precedence: u8 },
    /// Statement-level relation (`=`).
    Relation { token: &'static str },
    /// Function-call spelling `name(args…)`.
    Function(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolInfo {
    pub arity: Option<usize>,
    pub evaluable: bool,
    pub infix: Option<InfixForm>,
}

impl SymbolInfo {
    pub fn opaque() -> Self {
        SymbolInfo { arity: None, evaluable: false, infix: None }
    }

    pub fn function(name: &str, arity: Option<usize>, evaluable: bool) -> Self {
        SymbolInfo { arity, evaluable, infix: Some(InfixForm::Function(name.to_string())) }
    }
}

pub const PREC_RELATION: u8 = 0;
pub const PREC_ADDITIVE: u8 = 1;
pub const PREC_MULTIPLICATIVE: u8 = 2;
pub const PREC_PREFIX: u8 = 3;
pub const PREC_POWER: u8 = 4;

/// Content-dictionary symbols known to the toolchain.
///
/// Built once and then only read. Use [`SymbolRegistry::with_symbol`] to
/// extend the default set before sharing it.
#[derive(Debug, Clone)]
pub struct SymbolRegistry {
    entries: BTreeMap<(String, String), SymbolInfo>,
}

impl Default for SymbolRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

impl SymbolRegistry {
    pub fn empty() -> Self {
        SymbolRegistry { entries: BTreeMap::new() }
    }

    /// arith1, relation1, weylalgebra1, calculus1, transc1 and stats1.
    pub fn standard() -> Self {
        let binary = |token, precedence, right_assoc| SymbolInfo {
            arity: Some(2),
            evaluable: true,
            infix: Some(InfixForm::Binary { token, precedence, right_assoc }),
        };
        let mut reg = Self::empty()
            .with_symbol("arith1", "plus", binary("+", PREC_ADDITIVE, false))
            .with_symbol("arith1", "minus", binary("-", PREC_ADDITIVE, false))
            .with_symbol("arith1", "times", binary("*", PREC_MULTIPLICATIVE, false))
            .with_symbol("arith1", "divide", binary("/", PREC_MULTIPLICATIVE, false))
            .with_symbol("arith1", "power", binary("^", PREC_POWER, true))
            .with_symbol(
                "arith1",
                "unary_minus",
                SymbolInfo {
                    arity: Some(1),
                    evaluable: true,
                    infix: Some(InfixForm::Prefix { token: "-", precedence: PREC_PREFIX }),
                },
            )
            .with_symbol(
                "relation1",
                "eq",
                SymbolInfo {
                    arity: Some(2),
                    evaluable: true,
                    infix: Some(InfixForm::Relation { token: "=" }),
                },
            )
            // diff(expr, var) and partialdiff(expr, var, ...): expression first.
            .with_symbol("weylalgebra1", "diff", SymbolInfo::function("diff", Some(2), false))
            .with_symbol("weylalgebra1", "partialdiff", SymbolInfo::function("partialdiff", None, false))
            .with_symbol("calculus1", "int", SymbolInfo::function("int", None, false));
        for name in ["sin", "cos", "tan", "exp", "ln"] {
            reg = reg.with_symbol("transc1", name, SymbolInfo::function(name, Some(1), true));
        }
        for name in ["mean", "sdev", "variance", "median", "mode", "moment"] {
            reg = reg.with_symbol("stats1", name, SymbolInfo::opaque());
        }
        reg
    }

    pub fn with_symbol(mut self, cd: &str, name: &str, info: SymbolInfo) -> Self {
        self.entries.insert((cd.to_string(), name.to_string()), info);
        self
    }

    pub fn get(&self, cd: &str, name: &str) -> Option<&SymbolInfo> {
        self.entries.get(&(cd.to_string(), name.to_string()))
    }

    pub fn contains(&self, cd: &str, name: &str) -> bool {
        self.get(cd, name).is_some()
    }

    pub fn has_cd(&self, cd: &str) -> bool {
        self.entries.keys().any(|(c, _)| c == cd)
    }

    pub fn is_evaluable(&self, cd: &str, name: &str) -> bool {
        self.get(cd, name).is_some_and(|info| info.evaluable)
    }

    /// Resolves an infix function name (`sin`, `diff`, …) to its symbol.
    pub fn function_symbol(&self, spelling: &str) -> Option<(&str, &str)> {
        self.entries.iter().find_map(|((cd, name), info)| match &info.infix {
            Some(InfixForm::Function(f)) if f == spelling => Some((cd.as_str(), name.as_str())),
            _ => None,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = ((&str, &str), &SymbolInfo)> {
        self.entries.iter().map(|((cd, name), info)| ((cd.as_str(), name.as_str()), info))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_registry_contents() {
        let reg = SymbolRegistry::standard();
        for (cd, name) in [
            ("arith1", "plus"),
            ("arith1", "unary_minus"),
            ("relation1", "eq"),
            ("weylalgebra1", "diff"),
            ("weylalgebra1", "partialdiff"),
            ("calculus1", "int"),
            ("transc1", "ln"),
            ("stats1", "mean"),
        ] {
            assert!(reg.contains(cd, name), "{cd}#{name}");
        }
        assert!(reg.is_evaluable("transc1", "exp"));
        assert!(!reg.is_evaluable("weylalgebra1", "diff"));
        assert!(!reg.is_evaluable("stats1", "mean"));
        assert!(!reg.contains("nums1", "pi"));
    }

    #[test]
    fn function_spellings_resolve() {
        let reg = SymbolRegistry::standard();
        assert_eq!(reg.function_symbol("partialdiff"), Some(("weylalgebra1", "partialdiff")));
        assert_eq!(reg.function_symbol("sin"), Some(("transc1", "sin")));
        assert_eq!(reg.function_symbol("mean"), None);
    }

    #[test]
    fn extension_leaves_original_intact() {
        let base = SymbolRegistry::standard();
        let extended = base.clone().with_symbol("nums1", "pi", SymbolInfo::opaque());
        assert!(extended.contains("nums1", "pi"));
        assert!(!base.contains("nums1", "pi"));
    }
}
