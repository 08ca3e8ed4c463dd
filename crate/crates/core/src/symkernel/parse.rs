//! Recursive-descent parser for the polynomial grammar
//!
//! ```text
//! poly     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := atom ('^' uint)?
//! atom     := rational | ident | '(' poly ')' | '-' atom
//! rational := int ('/' uint)?
//! ident    := letter (letter|digit)*
//! ```
//!
//! Whitespace is ignored. A `/` inside a term must be followed by a factor
//! that evaluates to a nonzero constant. Columns in errors are 1-based.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Poly, PolyError, Ring};

pub fn parse_poly(text: &str, ring: &Ring) -> Result<Poly, PolyError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, ring };
    let out = p.poly()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(out)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn syntax(&self, message: impl Into<String>) -> PolyError {
        PolyError::Syntax { column: self.column(), message: message.into() }
    }

    fn poly(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                '/' => {
                    self.pos += 1;
                    self.skip_ws();
                    let column = self.column();
                    let divisor = self.factor()?;
                    let c = divisor.as_constant().ok_or(PolyError::DivisionByNonConstant { column })?;
                    if c.is_zero() {
                        return Err(PolyError::DivisionByZero { column });
                    }
                    acc = acc.scale(&(BigRational::from_integer(1.into()) / c));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.uint().ok_or_else(|| self.syntax("expected a nonnegative integer exponent"))?;
            let e: u32 = e.try_into().map_err(|_| self.syntax("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if self.peek() != Some(')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint().expect("digit present");
                // rational := int ('/' uint)?  -- only when a digit follows the slash
                let save = self.pos;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    if let Some(d) = self.uint() {
                        if d.is_zero() {
                            return Err(PolyError::DivisionByZero { column: save + 1 });
                        }
                        return Ok(self.ring.constant(BigRational::new(n, d)));
                    }
                    self.pos = save;
                }
                Ok(self.ring.constant(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.ring.index_of(&name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(PolyError::UnknownVariable { name, column: start + 1 }),
                }
            }
            Some(c) => Err(self.syntax(format!("unexpected `{c}`"))),
        }
    }

    fn uint(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symkernel::ratio;

    fn r() -> Ring {
        Ring::numbered("x", 2)
    }

    #[test]
    fn reports_unknown_variable_with_column() {
        let err = parse_poly("x1 + z", &r()).unwrap_err();
        assert_eq!(err, PolyError::UnknownVariable { name: "z".into(), column: 6 });
    }

    #[test]
    fn rejects_division_by_variable() {
        let err = parse_poly("x1 / x2", &r()).unwrap_err();
        assert_eq!(err, PolyError::DivisionByNonConstant { column: 6 });
    }

    #[test]
    fn rejects_zero_denominators() {
        assert!(matches!(parse_poly("1/0", &r()), Err(PolyError::DivisionByZero { .. })));
        assert!(matches!(parse_poly("x1/(2-2)", &r()), Err(PolyError::DivisionByZero { .. })));
    }

    #[test]
    fn accepts_division_by_constant_expression() {
        let p = parse_poly("x1/(1+1)", &r()).unwrap();
        assert_eq!(p, r().var(0).scale(&ratio(1, 2)));
    }

    #[test]
    fn unary_minus_binds_to_atom() {
        // (-x1)^2, not -(x1^2)
        assert_eq!(parse_poly("-x1^2", &r()).unwrap(), r().var(0).pow(2));
        assert_eq!(parse_poly("- - x2", &r()).unwrap(), r().var(1));
    }

    #[test]
    fn syntax_errors_point_at_offender() {
        match parse_poly("x1 + * x2", &r()) {
            Err(PolyError::Syntax { column, .. }) => assert_eq!(column, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("(x1", &r()), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("x1 x2", &r()), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("", &r()), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse_poly(" 3 / 4 * x1 ^ 2 ", &r()).unwrap(), parse_poly("3/4*x1^2", &r()).unwrap());
    }
}
