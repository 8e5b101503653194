//! Text grammars: group-ring polynomials such as `1 + 3*g0 - 3*g0^2*g1`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::grpring::{GroupRingElem, GroupTable};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Gen(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..=i].iter().collect();
                out.push(Tok::Num(text.parse().expect("digits")));
            }
            'g' => {
                let start = i + 1;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                if start > i {
                    return Err(Error::Parse("generator needs an index, e.g. g0".into()));
                }
                let text: String = chars[start..=i].iter().collect();
                out.push(Tok::Gen(
                    text.parse().map_err(|_| Error::Parse(text.clone()))?,
                ));
            }
            _ => return Err(Error::Parse(format!("unexpected character '{c}'"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    table: &'a Arc<GroupTable>,
    prec: i64,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<GroupRingElem> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GroupRingElem> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GroupRingElem> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if self.peek() != Some(&Tok::Caret) {
                    return Ok(base);
                }
                self.pos += 1;
                let neg = if self.peek() == Some(&Tok::Minus) {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let e = match self.next() {
                    Some(Tok::Num(n)) => {
                        u64::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?
                    }
                    _ => return Err(Error::Parse("expected exponent after '^'".into())),
                };
                let base = if neg { base.inverse()? } else { base };
                base.pow(e)
            }
        }
    }

    fn atom(&mut self) -> Result<GroupRingElem> {
        match self.next() {
            Some(Tok::Num(n)) => GroupRingElem::scalar(self.table, self.prec, n),
            Some(Tok::Gen(i)) => {
                let shape = self.table.shape();
                if i >= shape.rank() {
                    return Err(Error::Parse(format!("unknown generator g{i}")));
                }
                GroupRingElem::monomial(self.table, self.prec, &shape.generator(i), 1)
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an integer polynomial in `g0, g1, ...` into `Z_p[G]` at precision `prec`.
pub fn parse_element(table: &Arc<GroupTable>, prec: i64, s: &str) -> Result<GroupRingElem> {
    let mut parser = Parser {
        toks: tokenize(s)?,
        pos: 0,
        table,
        prec,
    };
    if parser.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(Error::Parse(format!("trailing input in '{s}'")));
    }
    Ok(e.truncated(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(s: &str) -> Arc<GroupTable> {
        GroupTable::new(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn polynomials() {
        let t = table("C4xC2");
        let x = parse_element(&t, 8, "1 + 3*g0 - 3*g0^2*g1").unwrap();
        assert_eq!(x.to_string(), "1 + 3*g0 - 3*g0^2*g1 + O(2^8)");
        let y = parse_element(&t, 8, "1+2*(g0-1)").unwrap();
        assert_eq!(y.to_string(), "-1 + 2*g0 + O(2^8)");
        let z = parse_element(&t, 8, "(g0 + g1)^2").unwrap();
        assert_eq!(z.to_string(), "1 + 2*g0*g1 + g0^2 + O(2^8)");
        assert_eq!(
            parse_element(&t, 8, "g0^-1").unwrap().to_string(),
            "g0^3 + O(2^8)"
        );
        assert_eq!(
            parse_element(&t, 8, "-g1").unwrap().to_string(),
            "-g1 + O(2^8)"
        );
    }

    #[test]
    fn errors() {
        let t = table("C3");
        assert!(parse_element(&t, 8, "g1").is_err());
        assert!(parse_element(&t, 8, "(1 + g0").is_err());
        assert!(parse_element(&t, 8, "1 +").is_err());
        assert!(parse_element(&t, 8, "x").is_err());
        assert!(parse_element(&t, 8, "").is_err());
    }
}
