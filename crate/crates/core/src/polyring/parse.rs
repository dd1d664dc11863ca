use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use super::{IntLaurentPoly, PolyError};

/// Parses sums of terms such as `-t + 3 - t^-1`, `2*t^2 - 5t + 2` or
/// `t^(-3)`. The variable is `t`; coefficients are integers.
impl FromStr for IntLaurentPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let text: Vec<char> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '\u{2212}' { '-' } else { c })
            .collect();
        if text.is_empty() {
            return Err(PolyError::Parse("empty expression".into()));
        }
        let mut p = Scanner { s: &text, pos: 0 };
        let mut out = IntLaurentPoly::zero();
        let mut first = true;
        while p.pos < text.len() {
            let negative = match p.peek() {
                Some('+') => {
                    p.pos += 1;
                    false
                }
                Some('-') => {
                    p.pos += 1;
                    true
                }
                _ if first => false,
                Some(c) => return Err(p.error(&format!("expected '+' or '-', found '{c}'"))),
                None => unreachable!(),
            };
            first = false;
            let (c, e) = p.term()?;
            out.add_term(e, if negative { -c } else { c });
        }
        Ok(out)
    }
}

struct Scanner<'a> {
    s: &'a [char],
    pos: usize,
}

impl Scanner<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.s[start..self.pos].iter().collect())
    }

    fn term(&mut self) -> Result<(BigInt, i64), PolyError> {
        let digits = self.digits();
        let had_digits = digits.is_some();
        let coeff = match digits {
            Some(d) => {
                let c = BigInt::from_str(&d).map_err(|e| self.error(&e.to_string()))?;
                if self.peek() == Some('*') {
                    self.pos += 1;
                    if self.peek() != Some('t') {
                        return Err(self.error("expected 't' after '*'"));
                    }
                }
                c
            }
            None => BigInt::one(),
        };
        if self.peek() != Some('t') {
            if !had_digits {
                return Err(self.error("expected a term"));
            }
            return Ok((coeff, 0));
        }
        self.pos += 1;
        if self.peek() != Some('^') {
            return Ok((coeff, 1));
        }
        self.pos += 1;
        let paren = self.peek() == Some('(');
        if paren {
            self.pos += 1;
        }
        let negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let d = self
            .digits()
            .ok_or_else(|| self.error("expected exponent"))?;
        let e: i64 = d.parse().map_err(|_| self.error("exponent out of range"))?;
        if paren {
            if self.peek() != Some(')') {
                return Err(self.error("expected ')'"));
            }
            self.pos += 1;
        }
        Ok((coeff, if negative { -e } else { e }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> IntLaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn figure_eight() {
        assert_eq!(
            parse("-t + 3 - t^-1"),
            IntLaurentPoly::from_dense(-1, &[-1, 3, -1])
        );
    }

    #[test]
    fn coefficients_and_parens() {
        assert_eq!(
            parse("2*t^2 - 5t + 2"),
            IntLaurentPoly::from_dense(0, &[2, -5, 2])
        );
        assert_eq!(parse("t^(-3) + t^(+3)"), parse("t^3 + t^-3"));
        assert_eq!(parse("1 - 1"), IntLaurentPoly::zero());
        assert_eq!(parse("\u{2212}t"), IntLaurentPoly::monomial(-1, 1));
    }

    #[test]
    fn display_round_trip() {
        for s in ["-t + 3 - t^-1", "2*t^2 - 5*t + 2", "t^5", "-7", "0"] {
            let p = parse(s);
            assert_eq!(parse(&p.to_string()), p, "{s}");
        }
    }

    #[test]
    fn malformed() {
        for s in ["", "t^", "3 t t", "2*", "t^(2", "+-t", "x"] {
            assert!(s.parse::<IntLaurentPoly>().is_err(), "{s}");
        }
    }
}
