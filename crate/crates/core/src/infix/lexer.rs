use super::InfixError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Int(String),
    Float(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Equals,
    LParen,
    RParen,
    Comma,
    Dot,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, InfixError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'=' => Some(Tok::Equals),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b'.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push(Token { tok, start, end: i });
            continue;
        }
        if c.is_ascii_digit() {
            let mut is_float = false;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                is_float = true;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    is_float = true;
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lexeme = text[start..i].to_string();
            let tok = if is_float { Tok::Float(lexeme) } else { Tok::Int(lexeme) };
            out.push(Token { tok, start, end: i });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(text[start..i].to_string()), start, end: i });
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('\u{fffd}');
        return Err(InfixError::Lex { position: start, found: ch });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<Tok> {
        tokenize(text).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers() {
        assert_eq!(kinds("12"), vec![Tok::Int("12".into())]);
        assert_eq!(kinds("1.5"), vec![Tok::Float("1.5".into())]);
        assert_eq!(kinds("1e-7"), vec![Tok::Float("1e-7".into())]);
        assert_eq!(kinds("2e"), vec![Tok::Int("2".into()), Tok::Ident("e".into())]);
    }

    #[test]
    fn identifiers_and_operators() {
        assert_eq!(
            kinds("xR_dot*A"),
            vec![Tok::Ident("xR_dot".into()), Tok::Star, Tok::Ident("A".into())]
        );
    }

    #[test]
    fn illegal_character() {
        assert_eq!(tokenize("a # b"), Err(InfixError::Lex { position: 2, found: '#' }));
    }
}
