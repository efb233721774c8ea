//! Parser for homogeneous map components: comma-separated polynomial
//! expressions in `x0..xk` with integer coefficients, `+ - * ^` and
//! parentheses. Errors carry the byte position of the offending token.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    Int(BigInt),
    Var(usize),
}

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        while self.pos < self.text.len() {
            let c = self.text[self.pos];
            let start = self.pos;
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'+' => {
                    out.push((start, Tok::Plus));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((start, Tok::Minus));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((start, Tok::Star));
                    self.pos += 1;
                }
                b'^' => {
                    out.push((start, Tok::Caret));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((start, Tok::LParen));
                    self.pos += 1;
                }
                b')' => {
                    out.push((start, Tok::RParen));
                    self.pos += 1;
                }
                b',' => {
                    out.push((start, Tok::Comma));
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let mut end = self.pos;
                    while end < self.text.len() && self.text[end].is_ascii_digit() {
                        end += 1;
                    }
                    let s = std::str::from_utf8(&self.text[self.pos..end]).unwrap();
                    out.push((start, Tok::Int(s.parse::<BigInt>().unwrap())));
                    self.pos = end;
                }
                b'x' => {
                    let mut end = self.pos + 1;
                    while end < self.text.len() && self.text[end].is_ascii_digit() {
                        end += 1;
                    }
                    if end == self.pos + 1 {
                        return Err(Error::Parse {
                            position: start,
                            message: "variable name needs an index, like x0".into(),
                        });
                    }
                    let s = std::str::from_utf8(&self.text[self.pos + 1..end]).unwrap();
                    let idx: usize = s.parse().map_err(|_| Error::Parse {
                        position: start,
                        message: "variable index too large".into(),
                    })?;
                    out.push((start, Tok::Var(idx)));
                    self.pos = end;
                }
                other => {
                    return Err(Error::Parse {
                        position: start,
                        message: format!("unexpected character '{}'", other as char),
                    });
                }
            }
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    nvars: usize,
    text_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.text_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let at = self.here();
            match self.bump() {
                Some(Tok::Int(e)) => {
                    let e = e.to_u64().ok_or_else(|| Error::Parse {
                        position: at,
                        message: "exponent out of range".into(),
                    })?;
                    return Ok(base.pow(e));
                }
                _ => {
                    return Err(Error::Parse {
                        position: at,
                        message: "expected an integer exponent after '^'".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(MPoly::constant(self.nvars, v)),
            Some(Tok::Var(i)) => {
                if i >= self.nvars {
                    return Err(Error::Parse {
                        position: at,
                        message: format!(
                            "variable x{i} out of range: expected x0..x{}",
                            self.nvars - 1
                        ),
                    });
                }
                Ok(MPoly::var(self.nvars, i))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let at = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse {
                        position: at,
                        message: "expected ')'".into(),
                    }),
                }
            }
            other => Err(Error::Parse {
                position: at,
                message: format!("expected a value, found {other:?}"),
            }),
        }
    }
}

/// Parses a single polynomial in variables `x0..x{nvars-1}`.
pub fn parse_polynomial(text: &str, nvars: usize) -> Result<MPoly> {
    let mut components = parse_component_list(text, nvars)?;
    if components.len() != 1 {
        return Err(Error::Parse {
            position: 0,
            message: format!("expected one expression, found {}", components.len()),
        });
    }
    Ok(components.remove(0))
}

/// Parses a comma-separated list of polynomials in `x0..x{nvars-1}`.
pub fn parse_component_list(text: &str, nvars: usize) -> Result<Vec<MPoly>> {
    let tokens = Lexer::new(text).tokens()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        nvars,
        text_len: text.len(),
    };
    let mut out = Vec::new();
    loop {
        out.push(parser.expr()?);
        match parser.bump() {
            Some(Tok::Comma) => continue,
            None => break,
            Some(t) => {
                return Err(Error::Parse {
                    position: parser.tokens[parser.pos - 1].0,
                    message: format!("unexpected token {t:?}"),
                })
            }
        }
    }
    Ok(out)
}
