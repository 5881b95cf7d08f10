//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace insignificant, no implicit multiplication):
//!
//! ```text
//! expr       := term (('+'|'-') term)*
//! term       := factor ('*' factor)*
//! factor     := base ('^' uint)?
//! base       := rational | identifier | '(' expr ')' | '-' base
//! rational   := int ('/' uint)?
//! identifier := letter (letter|digit|'_')*
//! ```
//!
//! Note that `^` applies to the parsed base, so `-u^2` is `(-u)^2 = u^2`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use thiserror::Error;

use crate::poly::Polynomial;
use crate::vars::VarTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { position: usize, name: String },
    #[error("exponent at position {position} is not a nonnegative integer literal")]
    BadExponent { position: usize },
    #[error("zero denominator at position {position}")]
    ZeroDenominator { position: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigUint),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut lexer = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut tokens = Vec::new();
        while let Some((pos, tok)) = lexer.next_token()? {
            tokens.push((pos, tok));
        }
        Ok(tokens)
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>, ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                return Ok(Some((start, Tok::Int(digits.parse().unwrap()))));
            }
            c if c.is_ascii_alphabetic() => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                return Ok(Some((start, Tok::Ident(name.to_string()))));
            }
            other => {
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        self.pos += 1;
        Ok(Some((start, tok)))
    }
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    cursor: usize,
    table: &'a VarTable,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.cursor).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens
            .get(self.cursor)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add_ref(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub_ref(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = acc.mul_ref(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.position();
            match self.bump() {
                Some((_, Tok::Int(digits))) => {
                    let exp: u32 = digits
                        .try_into()
                        .map_err(|_| ParseError::BadExponent { position: pos })?;
                    return Ok(base.pow(exp));
                }
                _ => return Err(ParseError::BadExponent { position: pos }),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        let pos = self.position();
        match self.bump() {
            Some((_, Tok::Int(numer))) => {
                let numer = BigInt::from(numer);
                let mut denom = BigInt::from(1u8);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dpos = self.position();
                    match self.bump() {
                        Some((_, Tok::Int(d))) => {
                            denom = BigInt::from(d);
                            if denom == BigInt::from(0u8) {
                                return Err(ParseError::ZeroDenominator { position: dpos });
                            }
                        }
                        _ => {
                            return Err(ParseError::Syntax {
                                position: dpos,
                                message: "expected denominator after `/`".into(),
                            })
                        }
                    }
                }
                Ok(Polynomial::constant(
                    self.table,
                    BigRational::new(numer, denom),
                ))
            }
            Some((p, Tok::Ident(name))) => match self.table.position(&name) {
                Some(index) => Ok(Polynomial::var(self.table, index)),
                None => Err(ParseError::UnknownIdentifier { position: p, name }),
            },
            Some((_, Tok::LParen)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    other => Err(ParseError::Syntax {
                        position: other.map(|(p, _)| p).unwrap_or(self.end),
                        message: "expected `)`".into(),
                    }),
                }
            }
            Some((_, Tok::Minus)) => Ok(self.base()?.neg_ref()),
            Some((p, tok)) => Err(ParseError::Syntax {
                position: p,
                message: format!("unexpected token `{:?}`", tok),
            }),
            None => Err(ParseError::Syntax {
                position: pos,
                message: "unexpected end of expression".into(),
            }),
        }
    }
}

/// Parse `text` into the canonical polynomial over `table`.
pub fn poly_parse(text: &str, table: &VarTable) -> Result<Polynomial, ParseError> {
    let tokens = Lexer::tokenize(text)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        table,
        end: text.len(),
    };
    let poly = parser.expr()?;
    if let Some((p, tok)) = parser.tokens.get(parser.cursor) {
        return Err(ParseError::Syntax {
            position: *p,
            message: format!("unexpected trailing token `{:?}`", tok),
        });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Binding;
    use crate::rational::{rat, rat_int};

    fn table() -> VarTable {
        VarTable::coordinates(&["x", "y", "u", "u2", "u3", "v2"]).unwrap()
    }

    #[test]
    fn literal_translation() {
        let t = table();
        let p = poly_parse("-1/3*u^3", &t).unwrap();
        let u = Polynomial::var_named(&t, "u").unwrap();
        assert_eq!(p, u.pow(3).scale(&rat(-1, 3)));
    }

    #[test]
    fn zero_coefficient_elimination() {
        let t = table();
        let p = poly_parse("x + 0*y", &t).unwrap();
        assert_eq!(p, Polynomial::var_named(&t, "x").unwrap());
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn distributes_products() {
        let t = table();
        let p = poly_parse("(u2+v2)*u3^2", &t).unwrap();
        let q = poly_parse("u2*u3^2 + v2*u3^2", &t).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn exponent_binds_to_signed_base() {
        // factor := base ('^' uint)? and base := '-' base, so -u^2 == (-u)^2.
        let t = table();
        let p = poly_parse("-u^2", &t).unwrap();
        let u = Polynomial::var_named(&t, "u").unwrap();
        assert_eq!(p, u.pow(2));
        assert_eq!(poly_parse("-(u^2)", &t).unwrap(), u.pow(2).neg_ref());
    }

    #[test]
    fn error_positions() {
        let t = table();
        match poly_parse("x + ", &t) {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected syntax error, got {:?}", other),
        }
        match poly_parse("x + q", &t) {
            Err(ParseError::UnknownIdentifier { position, name }) => {
                assert_eq!(position, 4);
                assert_eq!(name, "q");
            }
            other => panic!("expected unknown identifier, got {:?}", other),
        }
        assert_eq!(
            poly_parse("u^-2", &t),
            Err(ParseError::BadExponent { position: 2 })
        );
        assert_eq!(
            poly_parse("1/0", &t),
            Err(ParseError::ZeroDenominator { position: 2 })
        );
        assert!(poly_parse("2 u", &t).is_err(), "no implicit multiplication");
        assert!(poly_parse("", &t).is_err());
    }

    #[test]
    fn whitespace_insignificant() {
        let t = table();
        assert_eq!(
            poly_parse("  2 / 3 * u ^ 2 ", &t).unwrap(),
            poly_parse("2/3*u^2", &t).unwrap()
        );
    }

    #[test]
    fn render_parse_fixed_point() {
        let t = table();
        for src in [
            "-1/3*u^3 + x*y - 2",
            "u2^2*v2 + 1/7",
            "0",
            "-x",
            "x - y + u - 5/3",
        ] {
            let p = poly_parse(src, &t).unwrap();
            let rendered = p.render();
            let reparsed = poly_parse(&rendered, &t).unwrap();
            assert_eq!(p, reparsed, "render `{}` not a fixed point", rendered);
        }
    }

    #[test]
    fn substitution_of_direction_component() {
        let t = VarTable::coordinates(&["xi1"]).unwrap();
        let p = poly_parse("xi1^3", &t).unwrap();
        let v = p
            .substitute(&[("xi1", Binding::Value(rat_int(2)))])
            .unwrap();
        assert_eq!(v.as_constant(), Some(rat_int(8)));
    }
}
