//! Expressions in `t` over `Q`: integers, `t`, `+ - * / ^` and parentheses.
//!
//! ```
//! use mwsplit::expr::{parse_poly, parse_ratfunc};
//!
//! let a6 = parse_poly("36*t^2*(t-2025)^2").unwrap();
//! assert_eq!(a6.degree(), Some(4));
//! assert_eq!(parse_ratfunc("1/t - 1/t").unwrap().to_string(), "0");
//! assert!(parse_poly("1/t").is_err());
//! ```

use std::fmt;

use thiserror::Error;

use crate::qfield::{QPoly, QRatFunc, Rat, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("division by zero at byte {offset}")]
    DivisionByZero { offset: usize },
    #[error("exponent at byte {offset} is too large")]
    ExponentTooLarge { offset: usize },
    #[error("expected a polynomial, got {0}")]
    NotPolynomial(String),
}

/// Largest accepted exponent; keeps accidental inputs like `t^99999999` cheap to reject.
const MAX_EXPONENT: u32 = 10_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tok<'a> {
    Int(&'a str),
    Var,
    Op(u8),
    Open,
    Close,
    End,
}

impl fmt::Display for Tok<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(s) => write!(f, "integer {s}"),
            Tok::Var => write!(f, "'t'"),
            Tok::Op(c) => write!(f, "'{}'", *c as char),
            Tok::Open => write!(f, "'('"),
            Tok::Close => write!(f, "')'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self
            .src
            .as_bytes()
            .get(self.pos)
            .is_some_and(u8::is_ascii_whitespace)
        {
            self.pos += 1;
        }
    }

    /// Next token and its byte offset, without consuming it.
    fn peek(&mut self) -> Result<(Tok<'a>, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let Some(&c) = bytes.get(start) else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            b'0'..=b'9' => {
                let end = bytes[start..]
                    .iter()
                    .position(|b| !b.is_ascii_digit())
                    .map_or(bytes.len(), |k| start + k);
                Tok::Int(&self.src[start..end])
            }
            b't' => Tok::Var,
            b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c),
            b'(' => Tok::Open,
            b')' => Tok::Close,
            _ => {
                let ch = self.src[start..].chars().next().expect("nonempty");
                return Err(ParseError::Syntax {
                    offset: start,
                    expected: vec!["integer", "'t'", "operator", "parenthesis"],
                    found: format!("'{ch}'"),
                });
            }
        };
        Ok((tok, start))
    }

    fn bump(&mut self, tok: Tok<'a>) {
        self.pos += match tok {
            Tok::Int(s) => s.len(),
            Tok::End => 0,
            _ => 1,
        };
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
}

const OPERAND: &[&str] = &["integer", "'t'", "'('", "'-'"];

impl Parser<'_> {
    fn syntax(&self, offset: usize, expected: &[&'static str], found: Tok<'_>) -> ParseError {
        ParseError::Syntax {
            offset,
            expected: expected.to_vec(),
            found: found.to_string(),
        }
    }

    // sum := product (('+' | '-') product)*
    fn sum(&mut self) -> Result<QRatFunc, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.lex.peek()?.0 {
                Tok::Op(b'+') => {
                    self.lex.bump(Tok::Op(b'+'));
                    acc = &acc + &self.product()?;
                }
                Tok::Op(b'-') => {
                    self.lex.bump(Tok::Op(b'-'));
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // product := unary (('*' | '/') unary)*
    fn product(&mut self) -> Result<QRatFunc, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let (tok, at) = self.lex.peek()?;
            match tok {
                Tok::Op(b'*') => {
                    self.lex.bump(tok);
                    acc = &acc * &self.unary()?;
                }
                Tok::Op(b'/') => {
                    self.lex.bump(tok);
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        return Err(ParseError::DivisionByZero { offset: at });
                    }
                    acc = &acc / &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<QRatFunc, ParseError> {
        let (tok, _) = self.lex.peek()?;
        if tok == Tok::Op(b'-') {
            self.lex.bump(tok);
            return Ok(self.unary()?.neg_ref());
        }
        self.power()
    }

    // power := atom ('^' integer)?
    fn power(&mut self) -> Result<QRatFunc, ParseError> {
        let base = self.atom()?;
        let (tok, _) = self.lex.peek()?;
        if tok != Tok::Op(b'^') {
            return Ok(base);
        }
        self.lex.bump(tok);
        let (tok, at) = self.lex.peek()?;
        let Tok::Int(digits) = tok else {
            return Err(self.syntax(at, &["nonnegative integer exponent"], tok));
        };
        self.lex.bump(tok);
        let e: u32 = digits
            .parse()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or(ParseError::ExponentTooLarge { offset: at })?;
        Ok(Ring::pow(&base, e))
    }

    // atom := integer | 't' | '(' sum ')'
    fn atom(&mut self) -> Result<QRatFunc, ParseError> {
        let (tok, at) = self.lex.peek()?;
        match tok {
            Tok::Int(digits) => {
                self.lex.bump(tok);
                let n: num_bigint::BigInt = digits.parse().expect("decimal digits");
                Ok(QRatFunc::constant(Rat::from_integer(n)))
            }
            Tok::Var => {
                self.lex.bump(tok);
                Ok(QRatFunc::var())
            }
            Tok::Open => {
                self.lex.bump(tok);
                let inner = self.sum()?;
                let (close, at) = self.lex.peek()?;
                if close != Tok::Close {
                    return Err(self.syntax(at, &["')'", "operator"], close));
                }
                self.lex.bump(close);
                Ok(inner)
            }
            _ => Err(self.syntax(at, OPERAND, tok)),
        }
    }
}

pub fn parse_ratfunc(src: &str) -> Result<QRatFunc, ParseError> {
    let mut p = Parser {
        lex: Lexer { src, pos: 0 },
    };
    let value = p.sum()?;
    let (tok, at) = p.lex.peek()?;
    if tok != Tok::End {
        return Err(p.syntax(at, &["operator", "end of input"], tok));
    }
    Ok(value)
}

pub fn parse_poly(src: &str) -> Result<QPoly, ParseError> {
    let r = parse_ratfunc(src)?;
    r.as_poly()
        .cloned()
        .ok_or_else(|| ParseError::NotPolynomial(r.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::ratio;

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse_poly("-t^2").unwrap(), QPoly::from_ints(&[0, 0, -1]));
        assert_eq!(parse_poly("1-2-3").unwrap(), QPoly::from_ints(&[-4]));
        assert_eq!(parse_poly("12/2/3").unwrap(), QPoly::from_ints(&[2]));
        assert_eq!(parse_poly("2*3^2").unwrap(), QPoly::from_ints(&[18]));
        assert_eq!(
            parse_poly("1/36*t^2").unwrap(),
            QPoly::from_rats(&[ratio(0, 1), ratio(0, 1), ratio(1, 36)])
        );
        assert_eq!(
            parse_poly(" ( 25 * t + 9 ) ").unwrap(),
            QPoly::from_ints(&[9, 25])
        );
        assert!(parse_poly("0").unwrap().is_zero());
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_poly("t + * 2") {
            Err(ParseError::Syntax {
                offset, expected, ..
            }) => {
                assert_eq!(offset, 4);
                assert!(expected.contains(&"'t'"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_poly("(t"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse_poly("t^-1"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse_poly("1/(t-t)"),
            Err(ParseError::DivisionByZero { offset: 1 })
        ));
        assert!(matches!(
            parse_poly("2t"),
            Err(ParseError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_poly("x"),
            Err(ParseError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse_poly("t/(t+1)"),
            Err(ParseError::NotPolynomial(_))
        ));
    }
}
