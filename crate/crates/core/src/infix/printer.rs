use crate::openmath::{
    format_float, InfixForm, OmExpr, SymbolRegistry, PREC_POWER, PREC_PREFIX,
};

const ATOM: u8 = 10;

/// Renders `expr` as one line of infix text.
///
/// Symbols without an infix spelling, and operators used at an arity their
/// spelling cannot express, fall back to `cd.name(args…)`.
pub fn print_infix_with(expr: &OmExpr, registry: &SymbolRegistry) -> String {
    let printer = Printer { registry };
    if let Some((lhs, rhs)) = expr.as_equation() {
        return format!("{} = {}", printer.render(lhs).0, printer.render(rhs).0);
    }
    printer.render(expr).0
}

struct Printer<'r> {
    registry: &'r SymbolRegistry,
}

impl Printer<'_> {
    fn render(&self, expr: &OmExpr) -> (String, u8) {
        match expr {
            OmExpr::Variable(name) => (name.clone(), ATOM),
            OmExpr::Integer(i) => (i.to_string(), ATOM),
            OmExpr::Float(f) => (format_float(*f), ATOM),
            OmExpr::Symbol { cd, name } => (format!("{cd}.{name}"), ATOM),
            OmExpr::Application { operator, arguments } => match operator.as_ref() {
                OmExpr::Symbol { cd, name } => self.render_symbol_application(cd, name, arguments),
                other => {
                    let op = self.render(other).0;
                    (format!("({op})({})", self.render_args(arguments)), ATOM)
                }
            },
        }
    }

    fn render_symbol_application(&self, cd: &str, name: &str, args: &[OmExpr]) -> (String, u8) {
        match self.registry.get(cd, name).and_then(|info| info.infix.as_ref()) {
            Some(InfixForm::Binary { token, precedence, right_assoc }) if args.len() == 2 => {
                let p = *precedence;
                let (left, lp) = self.render(&args[0]);
                let (right, rp) = self.render(&args[1]);
                let (left_paren, right_paren) = if *right_assoc {
                    // Base binds tighter than any operator; the exponent is a
                    // unary-level operand.
                    (lp <= p, rp < PREC_PREFIX)
                } else {
                    (lp < p, rp <= p)
                };
                let left = wrap(left, left_paren);
                let right = wrap(right, right_paren);
                let text = if p <= crate::openmath::PREC_ADDITIVE {
                    format!("{left} {token} {right}")
                } else {
                    format!("{left}{token}{right}")
                };
                (text, if *right_assoc { PREC_POWER } else { p })
            }
            Some(InfixForm::Prefix { token, precedence }) if args.len() == 1 => {
                let (operand, op_prec) = self.render(&args[0]);
                let literal = matches!(&args[0], OmExpr::Integer(_) | OmExpr::Float(_));
                let operand = wrap(operand, op_prec < PREC_PREFIX || literal);
                (format!("{token}{operand}"), *precedence)
            }
            Some(InfixForm::Function(spelling)) => {
                (format!("{spelling}({})", self.render_args(args)), ATOM)
            }
            _ => (format!("{cd}.{name}({})", self.render_args(args)), ATOM),
        }
    }

    fn render_args(&self, args: &[OmExpr]) -> String {
        args.iter().map(|a| self.render(a).0).collect::<Vec<_>>().join(", ")
    }
}

fn wrap(text: String, paren: bool) -> String {
    if paren {
        format!("({text})")
    } else {
        text
    }
}
