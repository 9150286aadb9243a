//! Text format for rational functions, e.g. `(q^2 - u1*u2)/(q - q^-1)`.
//!
//! Grammar (whitespace is ignored everywhere):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' exponent)?
//! exponent := '-'? integer | '(' '-'? integer ')'
//! atom   := integer | variable | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::poly::Var;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { s: &chars, pos: 0 };
    let v = p.expr()?;
    if p.pos != chars.len() {
        return Err(Error::Parse(format!(
            "unexpected '{}' at position {}",
            chars[p.pos], p.pos
        )));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc
                    .div(&d)
                    .map_err(|_| Error::Parse("division by zero in expression".into()))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let digits = self.digits();
        if digits.is_empty() {
            return Err(Error::Parse(format!("expected exponent at position {}", self.pos)));
        }
        if paren && !self.eat(')') {
            return Err(Error::Parse("unclosed exponent parenthesis".into()));
        }
        let mut e: i32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("exponent too large: {digits}")))?;
        if neg {
            e = -e;
        }
        base.pow(e)
            .map_err(|_| Error::Parse("negative power of zero".into()))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.s[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse(format!("expected ')' at position {}", self.pos)));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().map_err(|_| Error::Parse(d.clone()))?;
                Ok(RatFunc::from_rational(num_rational::BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name: String = self.s[start..self.pos].iter().collect();
                let v = Var::parse(&name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable '{name}'")))?;
                Ok(RatFunc::var(v))
            }
            Some(c) => Err(Error::Parse(format!("unexpected '{c}' at position {}", self.pos))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_style_input() {
        let f = parse_ratfunc("(q^2 - u1*u2)/(q - q^-1)").unwrap();
        let g = parse_ratfunc("  ( q ^ 2-u1 * u2 ) * q / ( q^2 - 1 ) ").unwrap();
        assert_eq!(f, g);
        assert_eq!(f.to_string(), "(q^3 - q*u1*u2)/(q^2 - 1)");
    }

    #[test]
    fn printing_round_trips() {
        for s in ["u1^-3*q^(-2) - 7", "1/(1-u1) + 1/(1+u1)", "-t^2/(t^2-1)", "0", "3/6"] {
            let f = parse_ratfunc(s).unwrap();
            let g = parse_ratfunc(&f.to_string()).unwrap();
            assert_eq!(f, g, "{s}");
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_ratfunc("").is_err());
        assert!(parse_ratfunc("q +").is_err());
        assert!(parse_ratfunc("x1").is_err());
        assert!(parse_ratfunc("1/0").is_err());
        assert!(parse_ratfunc("(q").is_err());
    }
}
