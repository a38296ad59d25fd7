//! Exact-expression coefficients such as `"sqrt(3)/2"` or `"-1/2"`.
//!
//! ```text
//! COEFF    := TERM (('+' | '-') TERM)*
//! TERM     := ['-'] (RATIONAL ['*'] SQRT | RATIONAL | SQRT ['/' UINT])
//! RATIONAL := UINT ['/' UINT]
//! SQRT     := 'sqrt(' UINT ')'
//! ```
//!
//! Whitespace between tokens is ignored.

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CoefficientError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("division by zero at position {position}")]
    DivisionByZero { position: usize },
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, CoefficientError> {
        Err(CoefficientError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), CoefficientError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected '{}'", c as char))
        }
    }

    fn uint(&mut self) -> Result<f64, CoefficientError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an unsigned integer");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(text.parse::<f64>().expect("digits parse"))
    }

    fn divisor(&mut self) -> Result<f64, CoefficientError> {
        let position = {
            self.skip_ws();
            self.pos
        };
        let d = self.uint()?;
        if d == 0.0 {
            return Err(CoefficientError::DivisionByZero { position });
        }
        Ok(d)
    }

    fn at_sqrt(&mut self) -> bool {
        self.skip_ws();
        self.bytes[self.pos..].starts_with(b"sqrt")
    }

    fn sqrt(&mut self) -> Result<f64, CoefficientError> {
        self.skip_ws();
        if !self.at_sqrt() {
            return self.error("expected 'sqrt('");
        }
        self.pos += 4;
        self.expect(b'(')?;
        let x = self.uint()?;
        self.expect(b')')?;
        Ok(x.sqrt())
    }

    fn term(&mut self) -> Result<f64, CoefficientError> {
        let sign = if self.eat(b'-') { -1.0 } else { 1.0 };
        if self.at_sqrt() {
            let mut v = self.sqrt()?;
            if self.eat(b'/') {
                v /= self.divisor()?;
            }
            return Ok(sign * v);
        }
        let mut v = self.uint()?;
        if self.eat(b'/') {
            v /= self.divisor()?;
        }
        let star = self.eat(b'*');
        if star || self.at_sqrt() {
            v *= self.sqrt()?;
        }
        Ok(sign * v)
    }

    fn coefficient(&mut self) -> Result<f64, CoefficientError> {
        let mut total = self.term()?;
        loop {
            match self.peek() {
                None => return Ok(total),
                Some(b'+') => {
                    self.pos += 1;
                    total += self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    total -= self.term()?;
                }
                Some(c) => return self.error(format!("unexpected '{}'", c as char)),
            }
        }
    }
}

/// Evaluates a coefficient string.
pub fn parse_coefficient(text: &str) -> Result<f64, CoefficientError> {
    if let Some(position) = text.find(|c: char| !c.is_ascii()) {
        return Err(CoefficientError::Syntax {
            position,
            message: "non-ASCII character".into(),
        });
    }
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return p.error("empty coefficient");
    }
    p.coefficient()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(parse_coefficient("sqrt(3)/2").unwrap(), 0.8660254037844386);
        assert_eq!(parse_coefficient("1/2*sqrt(3)").unwrap(), parse_coefficient("sqrt(3)/2").unwrap());
        assert_eq!(parse_coefficient("1/2").unwrap(), 0.5);
        assert_eq!(parse_coefficient("0").unwrap(), 0.0);
        assert_eq!(parse_coefficient("-1/2").unwrap(), -0.5);
        assert_eq!(parse_coefficient(" 1 - 1/4 ").unwrap(), 0.75);
        assert_eq!(parse_coefficient("2sqrt(4)").unwrap(), 4.0);
        assert_eq!(parse_coefficient("-sqrt(9) + 1").unwrap(), -2.0);
    }

    #[test]
    fn rejects() {
        for bad in ["", "1.5", "sqrt(-3)", "sqrt(3", "1/", "e", "1 2", "1+", "√3", "1//2", "1/2/3"] {
            assert!(parse_coefficient(bad).is_err(), "{bad}");
        }
        assert_eq!(
            parse_coefficient("1/0"),
            Err(CoefficientError::DivisionByZero { position: 2 })
        );
        assert_eq!(
            parse_coefficient("sqrt(2)/ 0"),
            Err(CoefficientError::DivisionByZero { position: 9 })
        );
        match parse_coefficient("1 + x") {
            Err(CoefficientError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn rationals_evaluate(p in 0u32..10_000, q in 1u32..10_000, neg in any::<bool>()) {
            let text = format!("{}{p}/{q}", if neg { "-" } else { "" });
            let expect = if neg { -(p as f64) / q as f64 } else { p as f64 / q as f64 };
            prop_assert_eq!(parse_coefficient(&text).unwrap(), expect);
        }

        #[test]
        fn never_panics(s in "\\PC{0,16}") {
            let _ = parse_coefficient(&s);
        }
    }
}
