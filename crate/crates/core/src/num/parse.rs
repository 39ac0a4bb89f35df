//! Small exact expression grammar for scalar literals.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | atom
//! atom   := number | 'sqrt' '(' expr ')' | '(' expr ')'
//! number := digits ['.' digits] | digits '/' digits
//! ```
//!
//! `sqrt` accepts non-negative integer arguments only; everything stays in
//! one quadratic field or the rationals.

use super::{NumError, Rational, Scalar};

pub fn parse_scalar(input: &str) -> Result<Scalar, NumError> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(NumError::Parse(format!(
            "trailing input at byte {}: {input}",
            p.pos
        )));
    }
    Ok(v.reduce())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), NumError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(NumError::Parse(format!(
                "expected '{}' at byte {}",
                c as char, self.pos
            )))
        }
    }

    fn expr(&mut self) -> Result<Scalar, NumError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.checked_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, NumError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.checked_mul(&self.unary()?)?;
            } else if self.eat(b'/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, NumError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Scalar, NumError> {
        match self.peek() {
            Some(b'(') => {
                self.expect(b'(')?;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b's') => {
                let rest = &self.src[self.pos..];
                if !rest.starts_with(b"sqrt") {
                    return Err(NumError::Parse(format!(
                        "unknown token at byte {}",
                        self.pos
                    )));
                }
                self.pos += 4;
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                let n = match &inner {
                    Scalar::Rat(r) if r.is_integer() => {
                        use num_traits::ToPrimitive;
                        r.numer()
                            .to_i64()
                            .ok_or_else(|| NumError::Parse("sqrt argument too large".into()))?
                    }
                    _ => return Err(NumError::Parse("sqrt takes a non-negative integer".into())),
                };
                Scalar::sqrt_int(n)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            _ => Err(NumError::Parse(format!(
                "unexpected input at byte {}",
                self.pos
            ))),
        }
    }

    fn number(&mut self) -> Result<Scalar, NumError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos])
            .map_err(|_| NumError::Parse("non-utf8".into()))?;
        Ok(Scalar::Rat(Rational::parse(text)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_literals() {
        let x = parse_scalar("sqrt(6)-2").unwrap();
        assert_eq!(x, Scalar::sqrt_int(6).unwrap() - Scalar::from_int(2));
        let y = parse_scalar("(4-sqrt(6))/5").unwrap();
        assert_eq!(
            y,
            (Scalar::from_int(4) - Scalar::sqrt_int(6).unwrap()) / Scalar::from_int(5)
        );
        assert_eq!(
            parse_scalar("7/10").unwrap(),
            Scalar::Rat(Rational::new(7, 10))
        );
        assert_eq!(
            parse_scalar("1.3").unwrap(),
            Scalar::Rat(Rational::new(13, 10))
        );
        assert_eq!(
            parse_scalar("1/2*(3-sqrt(5))").unwrap(),
            (Scalar::from_int(3) - Scalar::sqrt_int(5).unwrap()) / Scalar::from_int(2)
        );
    }

    #[test]
    fn rejects_mixed_fields() {
        assert!(parse_scalar("sqrt(2)+sqrt(3)").is_err());
        // sqrt(8) reduces to 2 sqrt(2), same field as sqrt(2)
        assert!(parse_scalar("sqrt(8)+sqrt(2)").is_ok());
    }

    #[test]
    fn rejects_trailing_garbage() {
        assert!(parse_scalar("1/2)").is_err());
        assert!(parse_scalar("sqrt(-1)").is_err());
    }
}
