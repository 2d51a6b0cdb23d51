use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// Unsigned integer or finite decimal, verbatim.
    Num(String),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const SYMBOLS: &[&str] =
    &["->", "/\\", "\\/", "(", ")", "[", "]", "{", "}", ",", ";", ".", ":", "=", "&", "|", "~", "/", "@"];

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == b'_' {
            let s = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            col += i - s;
            out.push(Token { tok: Tok::Ident(src[s..i].to_string()), line, col: start_col });
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            col += i - s;
            out.push(Token { tok: Tok::Num(src[s..i].to_string()), line, col: start_col });
            continue;
        }
        let rest = &src[i..];
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                i += sym.len();
                col += sym.len();
                out.push(Token { tok: Tok::Sym(sym), line, col: start_col });
            }
            None => {
                let ch = rest.chars().next().unwrap_or('?');
                return Err(Error::Parse { line, col, msg: format!("unexpected character `{ch}`") });
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Cursor over a token stream with positioned errors.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self> {
        Ok(Cursor { toks: tokenize(src)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Parse { line: t.line, col: t.col, msg: msg.into() })
    }

    pub fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    pub fn at_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn eat_ident(&mut self, s: &str) -> bool {
        if self.at_ident(s) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", describe(self.peek())))
        }
    }

    pub fn expect_keyword(&mut self, s: &str) -> Result<()> {
        if self.eat_ident(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", describe(self.peek())))
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {}", describe(&other))),
        }
    }

    pub fn usize(&mut self) -> Result<usize> {
        match self.peek().clone() {
            Tok::Num(s) if !s.contains('.') => match s.parse() {
                Ok(n) => {
                    self.next();
                    Ok(n)
                }
                Err(_) => self.error(format!("number `{s}` out of range")),
            },
            other => self.error(format!("expected integer, found {}", describe(&other))),
        }
    }

    /// `p/q`, an integer, or a decimal.
    pub fn rational(&mut self) -> Result<crate::algebra::Rational> {
        let num = match self.peek().clone() {
            Tok::Num(s) => {
                self.next();
                s
            }
            other => return self.error(format!("expected number, found {}", describe(&other))),
        };
        let text = if self.at_sym("/") {
            self.next();
            match self.peek().clone() {
                Tok::Num(d) => {
                    self.next();
                    format!("{num}/{d}")
                }
                other => return self.error(format!("expected denominator, found {}", describe(&other))),
            }
        } else {
            num
        };
        match crate::algebra::parse_rational(&text) {
            Ok(r) => Ok(r),
            Err(e) => self.error(e.to_string()),
        }
    }

    pub fn truth_value(&mut self) -> Result<crate::algebra::TruthValue> {
        let r = self.rational()?;
        match crate::algebra::TruthValue::new(r) {
            Ok(v) => Ok(v),
            Err(e) => self.error(e.to_string()),
        }
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(s) => format!("`{s}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_operators_and_positions() {
        let toks = tokenize("forall x. P(x) /\\ Q\n  -> c(1/2)").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Ident("forall".into()));
        assert_eq!(kinds[2], Tok::Sym("."));
        assert!(kinds.contains(&Tok::Sym("/\\")));
        let arrow = toks.iter().find(|t| t.tok == Tok::Sym("->")).unwrap();
        assert_eq!((arrow.line, arrow.col), (2, 3));
    }

    #[test]
    fn decimals_do_not_swallow_binder_dots() {
        let toks = tokenize("0.5 x. 3").unwrap();
        assert_eq!(toks[0].tok, Tok::Num("0.5".into()));
        assert_eq!(toks[2].tok, Tok::Sym("."));
        assert_eq!(toks[3].tok, Tok::Num("3".into()));
    }

    #[test]
    fn rejects_stray_characters() {
        assert!(matches!(tokenize("P $ Q"), Err(Error::Parse { col: 3, .. })));
    }
}
