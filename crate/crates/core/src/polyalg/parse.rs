use num_bigint::BigInt;
use num_traits::One;

use super::monomial::Monomial;
use super::poly::Poly;
use crate::error::{CentraError, Result};
use crate::exactla::Rational;

const MAX_EXPONENT: u32 = 1024;

struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn error(&self, what: &str) -> CentraError {
        CentraError::Parse(format!("{what} at offset {} in polynomial {:?}", self.pos, self.src))
    }
}

/// `poly := ['+'|'-'] term (('+'|'-') term)*`, `term := factor ('*' factor)*`,
/// `factor := int ['/' int] | 'x' index ['^' exponent]`.
pub(super) fn parse_poly(n: usize, s: &str) -> Result<Poly> {
    let mut cur = Cursor { src: s, bytes: s.as_bytes(), pos: 0 };
    let mut out = Poly::zero(n);
    cur.skip_ws();
    let mut sign = if cur.eat(b'-') {
        -Rational::one()
    } else {
        cur.eat(b'+');
        Rational::one()
    };
    loop {
        cur.skip_ws();
        let (m, c) = parse_term(n, &mut cur)?;
        out.add_term(m, c * &sign);
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some(b'+') => {
                cur.pos += 1;
                sign = Rational::one();
            }
            Some(b'-') => {
                cur.pos += 1;
                sign = -Rational::one();
            }
            Some(_) => return Err(cur.error("unexpected character")),
        }
    }
    Ok(out)
}

fn parse_term(n: usize, cur: &mut Cursor<'_>) -> Result<(Monomial, Rational)> {
    let mut exps = vec![0u32; n];
    let mut coeff = Rational::one();
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(b'x') => {
                cur.pos += 1;
                let idx: usize = cur
                    .digits()
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| cur.error("expected variable index"))?;
                if idx == 0 || idx > n {
                    return Err(cur.error(&format!("variable x{idx} outside 1..={n}")));
                }
                cur.skip_ws();
                let e = if cur.eat(b'^') {
                    cur.skip_ws();
                    cur.digits()
                        .and_then(|d| d.parse::<u32>().ok())
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or_else(|| cur.error("expected exponent"))?
                } else {
                    1
                };
                exps[idx - 1] = exps[idx - 1]
                    .checked_add(e)
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or_else(|| cur.error("exponent too large"))?;
            }
            Some(b) if b.is_ascii_digit() => {
                let num: BigInt = cur.digits().expect("digit present").parse().expect("ascii digits");
                cur.skip_ws();
                let den: BigInt = if cur.eat(b'/') {
                    cur.skip_ws();
                    cur.digits()
                        .ok_or_else(|| cur.error("expected denominator"))?
                        .parse()
                        .expect("ascii digits")
                } else {
                    BigInt::one()
                };
                if den == BigInt::from(0) {
                    return Err(cur.error("zero denominator"));
                }
                coeff *= Rational::new(num, den);
            }
            _ => return Err(cur.error("expected a factor")),
        }
        cur.skip_ws();
        if !cur.eat(b'*') {
            break;
        }
    }
    Ok((Monomial::new(exps), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_products_and_repeated_variables() {
        let p = parse_poly(2, "2*x1*x1*x2 + 1/2 * x2^3").unwrap();
        assert_eq!(p.to_string(), "2*x1^2*x2 + 1/2*x2^3");
        assert!(parse_poly(2, "0").unwrap().is_zero());
        assert!(parse_poly(2, "x1 - x1").unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "x3", "x0", "x", "x1^", "1/0", "x1 + ", "2x1", "x1**2", "x1^99999", "1.5*x1", "(x1)"] {
            assert!(parse_poly(2, bad).is_err(), "{bad:?} should fail");
        }
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u32..4, 3), -5i64..6, 1i64..4), 0..6).prop_map(|terms| {
            Poly::from_terms(
                3,
                terms.into_iter().map(|(e, n, d)| (Monomial::new(e), crate::exactla::ratio(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn display_parses_back(p in arb_poly()) {
            prop_assert_eq!(parse_poly(3, &p.to_string()).unwrap(), p);
        }
    }
}
