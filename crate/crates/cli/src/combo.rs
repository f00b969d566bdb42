//! Integer combinations of named sections: `2*s0`, `s1+s2`, `-s0`, `0*s1`,
//! `3 s1 - 2*s2`, `O`.

use std::fmt;

use crate::CliError;

/// A normalized combination: names in first-appearance order, nonzero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combo {
    source: String,
    terms: Vec<(i64, String)>,
}

pub(crate) fn check_name(name: &str) -> Result<(), String> {
    let mut chars = name.chars();
    let ok_start = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    if !ok_start || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err("names are letters, digits and '_', starting with a letter or '_'".into());
    }
    if name == "O" {
        return Err("'O' is reserved for the zero section".into());
    }
    Ok(())
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl Cursor<'_> {
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

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &str {
        let start = self.pos;
        while self.src.as_bytes().get(self.pos).is_some_and(|&b| f(b)) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn error(&self, message: impl Into<String>) -> CliError {
        CliError::Combo {
            expr: self.src.to_string(),
            offset: self.pos,
            message: message.into(),
        }
    }
}

impl Combo {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        let mut cur = Cursor { src, pos: 0 };
        let mut raw: Vec<(i64, String)> = Vec::new();
        let mut first = true;
        loop {
            let mut sign = 1i64;
            match cur.peek() {
                Some(b'+') if !first => cur.pos += 1,
                Some(b'-') => {
                    cur.pos += 1;
                    sign = -1;
                }
                None if first => return Err(cur.error("empty combination")),
                _ if !first => return Err(cur.error("expected '+' or '-'")),
                _ => {}
            }
            first = false;
            let mut coeff = 1i64;
            if cur.peek().is_some_and(|b| b.is_ascii_digit()) {
                let digits = cur.take_while(|b| b.is_ascii_digit());
                coeff = digits
                    .parse()
                    .map_err(|_| cur.error("coefficient out of range"))?;
                if cur.peek() == Some(b'*') {
                    cur.pos += 1;
                }
            }
            cur.peek();
            let name = cur.take_while(|b| b.is_ascii_alphanumeric() || b == b'_');
            if name.is_empty() || name.as_bytes()[0].is_ascii_digit() {
                return Err(cur.error("expected a section name"));
            }
            let name = name.to_string();
            if name != "O" {
                raw.push((sign * coeff, name));
            }
            if cur.peek().is_none() {
                break;
            }
        }
        let mut terms: Vec<(i64, String)> = Vec::new();
        for (n, name) in raw {
            match terms.iter_mut().find(|(_, m)| *m == name) {
                Some(t) => {
                    t.0 =
                        t.0.checked_add(n)
                            .ok_or_else(|| cur.error("coefficient out of range"))?
                }
                None => terms.push((n, name)),
            }
        }
        terms.retain(|(n, _)| *n != 0);
        Ok(Combo {
            source: src.trim().to_string(),
            terms,
        })
    }

    pub fn terms(&self) -> &[(i64, String)] {
        &self.terms
    }

    /// The combination as written.
    pub fn source(&self) -> &str {
        &self.source
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}
