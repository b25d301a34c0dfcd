//! Parser for the textual polynomial syntax (`2*v7-v5-v3`, `(w1)-m*(v11)`,
//! `-1/2*(-2*v9-1)`, `-w1+(v13+v12)^1`).

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("polynomial syntax error at offset {offset}: {message}")]
pub struct PolyParseError {
    pub offset: usize,
    pub message: String,
}

pub fn parse_poly(src: &str) -> Result<Polynomial, PolyParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let out = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a comma-separated list, respecting parentheses.
pub fn parse_poly_list(src: &str) -> Result<Vec<Polynomial>, PolyParseError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in src.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(parse_piece(src, start, i)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !src[start..].trim().is_empty() || !out.is_empty() {
        out.push(parse_piece(src, start, src.len())?);
    }
    Ok(out)
}

fn parse_piece(src: &str, start: usize, end: usize) -> Result<Polynomial, PolyParseError> {
    parse_poly(&src[start..end]).map_err(|e| PolyParseError {
        offset: e.offset + start,
        message: e.message,
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyParseError {
        PolyParseError {
            offset: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Polynomial, PolyParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.product()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial, PolyParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.power()?;
                    let c = d.as_constant().ok_or_else(|| PolyParseError {
                        offset: at,
                        message: "division by a non-constant".into(),
                    })?;
                    if c.is_zero() {
                        return Err(PolyParseError {
                            offset: at,
                            message: "division by zero".into(),
                        });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a non-negative integer exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(Polynomial::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Polynomial::var(name))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a rational literal such as `3/2`, `-7` or `0`.
pub fn parse_rational(src: &str) -> Option<Rational> {
    let p = parse_poly(src).ok()?;
    p.as_constant()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_log_style_terms() {
        let p = parse_poly("-w1+(v13+v12)^1").unwrap();
        assert_eq!(p.to_string(), "v12+v13-w1");
        let q = parse_poly("-1/2*(-2*v9-1)").unwrap();
        assert_eq!(q.to_string(), "v9+1/2");
        let r = parse_poly("(w1)-m*(v11)").unwrap();
        assert_eq!(r.to_string(), "-m*v11+w1");
    }

    #[test]
    fn list_splits_at_top_level_commas() {
        let v = parse_poly_list("2*v7-v5-v3,(a+b)*(c-1),x").unwrap();
        assert_eq!(v.len(), 3);
        assert!(parse_poly_list("").unwrap().is_empty());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_poly("x^^2").is_err());
        assert!(parse_poly("x+").is_err());
        assert!(parse_poly("x/y").is_err());
        assert!(parse_poly("(x").is_err());
        let e = parse_poly_list("x,y^^2").unwrap_err();
        assert_eq!(e.offset, 4);
    }
}
