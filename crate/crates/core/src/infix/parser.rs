use std::str::FromStr;

use num_bigint::BigInt;

use super::lexer::{tokenize, Tok, Token};
use super::InfixError;
use crate::openmath::{OmExpr, SymbolRegistry};

/// Infix-to-OpenMath parser.
///
/// Unknown function names are errors unless a fallback content dictionary
/// is configured with [`InfixParser::lenient`].
#[derive(Debug, Clone)]
pub struct InfixParser<'r> {
    registry: &'r SymbolRegistry,
    fallback_cd: Option<String>,
}

impl<'r> InfixParser<'r> {
    pub fn new(registry: &'r SymbolRegistry) -> Self {
        InfixParser { registry, fallback_cd: None }
    }

    pub fn lenient(mut self, fallback_cd: impl Into<String>) -> Self {
        self.fallback_cd = Some(fallback_cd.into());
        self
    }

    pub fn parse(&self, text: &str) -> Result<OmExpr, InfixError> {
        if text.trim().is_empty() {
            return Err(InfixError::Parse { position: 0, message: "empty input".into() });
        }
        let tokens = tokenize(text)?;
        let mut state = State { tokens, pos: 0, end: text.len(), config: self };
        let lhs = state.expr()?;
        let result = if state.eat(&Tok::Equals) {
            let rhs = state.expr()?;
            OmExpr::equation(lhs, rhs)
        } else {
            lhs
        };
        match state.peek() {
            None => Ok(result),
            Some(t) => Err(state.unexpected(t)),
        }
    }
}

struct State<'a, 'r> {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    config: &'a InfixParser<'r>,
}

fn arith(name: &str, args: Vec<OmExpr>) -> OmExpr {
    OmExpr::call("arith1", name, args)
}

impl State<'_, '_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_tok(&self) -> Option<&Tok> {
        self.peek().map(|t| &t.tok)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek_tok() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn next(&mut self) -> Result<Token, InfixError> {
        let t = self.tokens.get(self.pos).cloned().ok_or(InfixError::Parse {
            position: self.end,
            message: "unexpected end of input".into(),
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn unexpected(&self, t: &Token) -> InfixError {
        let message = match &t.tok {
            Tok::RParen => "unbalanced ')'".to_string(),
            other => format!("unexpected {}", describe(other)),
        };
        InfixError::Parse { position: t.start, message }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), InfixError> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(InfixError::Parse {
                position: t.start,
                message: format!("expected {}, found {}", describe(&tok), describe(&t.tok)),
            }),
            None => Err(InfixError::Parse {
                position: self.end,
                message: format!("expected {} before end of input", describe(&tok)),
            }),
        }
    }

    fn expr(&mut self) -> Result<OmExpr, InfixError> {
        let mut lhs = self.term()?;
        loop {
            let name = match self.peek_tok() {
                Some(Tok::Plus) => "plus",
                Some(Tok::Minus) => "minus",
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = arith(name, vec![lhs, rhs]);
        }
    }

    fn term(&mut self) -> Result<OmExpr, InfixError> {
        let mut lhs = self.unary()?;
        loop {
            let name = match self.peek_tok() {
                Some(Tok::Star) => "times",
                Some(Tok::Slash) => "divide",
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = arith(name, vec![lhs, rhs]);
        }
    }

    /// A `-` glued to a following number literal in operand position.
    fn negative_literal_ahead(&self) -> bool {
        match (self.tokens.get(self.pos), self.tokens.get(self.pos + 1)) {
            (Some(m), Some(n)) => {
                m.tok == Tok::Minus
                    && m.end == n.start
                    && matches!(n.tok, Tok::Int(_) | Tok::Float(_))
            }
            _ => false,
        }
    }

    fn unary(&mut self) -> Result<OmExpr, InfixError> {
        if self.peek_tok() == Some(&Tok::Minus) && !self.negative_literal_ahead() {
            self.pos += 1;
            let operand = self.unary()?;
            return Ok(arith("unary_minus", vec![operand]));
        }
        self.power()
    }

    fn power(&mut self) -> Result<OmExpr, InfixError> {
        let base = self.postfix()?;
        if self.eat(&Tok::Caret) {
            let exponent = self.unary()?;
            return Ok(arith("power", vec![base, exponent]));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<OmExpr, InfixError> {
        let (mut expr, callable) = self.primary()?;
        if callable {
            while self.peek_tok() == Some(&Tok::LParen) {
                self.pos += 1;
                let args = self.arguments()?;
                expr = OmExpr::apply(expr, args);
            }
        }
        Ok(expr)
    }

    /// Returns the primary and whether a following `(` applies it.
    fn primary(&mut self) -> Result<(OmExpr, bool), InfixError> {
        if self.negative_literal_ahead() {
            self.pos += 1;
            let t = self.next()?;
            return Ok((number(&t, true)?, false));
        }
        let t = self.next()?;
        match &t.tok {
            Tok::Int(_) | Tok::Float(_) => Ok((number(&t, false)?, false)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok((inner, true))
            }
            Tok::Ident(first) => {
                if self.eat(&Tok::Dot) {
                    let second = self.next()?;
                    let Tok::Ident(name) = &second.tok else {
                        return Err(InfixError::Parse {
                            position: second.start,
                            message: "expected symbol name after '.'".into(),
                        });
                    };
                    let symbol = OmExpr::symbol(first.clone(), name.clone());
                    if self.eat(&Tok::LParen) {
                        let args = self.arguments()?;
                        return Ok((OmExpr::apply(symbol, args), true));
                    }
                    return Ok((symbol, false));
                }
                if self.eat(&Tok::LParen) {
                    let operator = self.function(first)?;
                    let args = self.arguments()?;
                    return Ok((OmExpr::apply(operator, args), true));
                }
                Ok((OmExpr::var(first.clone()), false))
            }
            _ => Err(self.unexpected(&t)),
        }
    }

    fn function(&self, spelling: &str) -> Result<OmExpr, InfixError> {
        if let Some((cd, name)) = self.config.registry.function_symbol(spelling) {
            return Ok(OmExpr::symbol(cd, name));
        }
        match &self.config.fallback_cd {
            Some(cd) => Ok(OmExpr::symbol(cd.clone(), spelling)),
            None => Err(InfixError::UnknownFunction(spelling.to_string())),
        }
    }

    /// Arguments after an opening `(`, through the closing `)`.
    fn arguments(&mut self) -> Result<Vec<OmExpr>, InfixError> {
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(Tok::RParen)?;
            return Ok(args);
        }
    }
}

fn number(t: &Token, negative: bool) -> Result<OmExpr, InfixError> {
    let bad = || InfixError::Parse { position: t.start, message: "invalid number".into() };
    match &t.tok {
        Tok::Int(s) => {
            let v = BigInt::from_str(s).map_err(|_| bad())?;
            Ok(OmExpr::Integer(if negative { -v } else { v }))
        }
        Tok::Float(s) => {
            let v: f64 = s.parse().map_err(|_| bad())?;
            Ok(OmExpr::Float(if negative { -v } else { v }))
        }
        _ => Err(bad()),
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Int(s) | Tok::Float(s) => format!("number {s}"),
        Tok::Ident(s) => format!("identifier {s}"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::Equals => "'='".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Dot => "'.'".into(),
    }
}
