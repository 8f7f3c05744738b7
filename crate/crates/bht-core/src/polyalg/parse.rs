//! Text grammar for polynomials: monomials `c`, `c*t^k`, `t^k`, `t` joined
//! by `+`/`-`; coefficients are integers, fractions `p/q`, or finite
//! decimals. ASCII `-` and the unicode minus sign are both accepted.

use super::{Polynomial, PolyError, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().map_or(false, |c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '\u{2212}'
}

fn parse_uint(cur: &mut Cursor) -> Result<BigInt, PolyError> {
    let start = cur.pos;
    while cur.peek().map_or(false, |c| c.is_ascii_digit()) {
        cur.bump();
    }
    if cur.pos == start {
        return Err(cur.err("expected a digit"));
    }
    Ok(cur.text[start..cur.pos].parse::<BigInt>().expect("digits"))
}

/// Number: integer, `p/q`, or finite decimal like `1.25`.
fn parse_number(cur: &mut Cursor) -> Result<Rat, PolyError> {
    let int_part = parse_uint(cur)?;
    match cur.peek() {
        Some('/') => {
            cur.bump();
            let denom_pos = cur.pos;
            let den = parse_uint(cur)?;
            if den.is_zero() {
                return Err(PolyError::Parse {
                    pos: denom_pos,
                    msg: "zero denominator".into(),
                });
            }
            Ok(Rat::new(int_part, den))
        }
        Some('.') => {
            cur.bump();
            let start = cur.pos;
            let frac = parse_uint(cur)?;
            let digits = cur.pos - start;
            let den = BigInt::from(10u32).pow(digits as u32);
            Ok(Rat::from_integer(int_part) + Rat::new(frac, den))
        }
        _ => Ok(Rat::from_integer(int_part)),
    }
}

/// One monomial after its sign: `c`, `c*t^k`, `c t^k`, `t^k`, `t`.
fn parse_monomial(cur: &mut Cursor) -> Result<(usize, Rat), PolyError> {
    let coeff = match cur.peek() {
        Some(c) if c.is_ascii_digit() => {
            let n = parse_number(cur)?;
            cur.skip_ws();
            if cur.peek() == Some('*') {
                cur.bump();
                cur.skip_ws();
            }
            Some(n)
        }
        _ => None,
    };

    let power = if cur.peek() == Some('t') {
        cur.bump();
        if cur.peek() == Some('^') {
            cur.bump();
            if cur.peek() == Some('^') {
                return Err(cur.err("repeated '^'"));
            }
            let exp_pos = cur.pos;
            let e = parse_uint(cur)?;
            usize::try_from(e).map_err(|_| PolyError::Parse {
                pos: exp_pos,
                msg: "exponent too large".into(),
            })?
        } else {
            1
        }
    } else if coeff.is_none() {
        return Err(cur.err("expected a coefficient or 't'"));
    } else {
        0
    };

    Ok((power, coeff.unwrap_or_else(Rat::one)))
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial, PolyError> {
    let mut cur = Cursor { text, pos: 0 };
    let mut terms: Vec<(usize, Rat)> = Vec::new();
    cur.skip_ws();
    if cur.peek().is_none() {
        return Err(cur.err("empty input"));
    }
    let mut first = true;
    while cur.peek().is_some() {
        let mut negative = false;
        if first {
            if let Some(c) = cur.peek() {
                if is_minus(c) {
                    cur.bump();
                    negative = true;
                } else if c == '+' {
                    cur.bump();
                }
            }
            first = false;
        } else {
            match cur.peek() {
                Some(c) if is_minus(c) => {
                    cur.bump();
                    negative = true;
                }
                Some('+') => {
                    cur.bump();
                }
                _ => return Err(cur.err("expected '+' or '-' between terms")),
            }
        }
        cur.skip_ws();
        let (k, mut c) = parse_monomial(&mut cur)?;
        if negative {
            c = -c;
        }
        terms.push((k, c));
        cur.skip_ws();
    }

    let deg = terms.iter().map(|(k, _)| *k).max().unwrap_or(0);
    let mut coeffs = vec![Rat::zero(); deg + 1];
    for (k, c) in terms {
        coeffs[k] += c;
    }
    Ok(Polynomial::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn reads_the_spec_examples() {
        let p = parse_polynomial("t^2 - 3t").unwrap();
        assert_eq!(p, Polynomial::from_ints(&[0, -3, 1]));

        let q = parse_polynomial("3t^4 - 3t^2").unwrap();
        assert_eq!(q, Polynomial::from_ints(&[0, 0, -3, 0, 3]));
    }

    #[test]
    fn rejects_malformed_input_with_position() {
        match parse_polynomial("t^^2") {
            Err(PolyError::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_polynomial("").is_err());
        assert!(parse_polynomial("t^2 + + t").is_err());
        assert!(parse_polynomial("x^2").is_err());
        assert!(parse_polynomial("1/0").is_err());
    }

    #[test]
    fn accepts_rationals_and_decimals() {
        let p = parse_polynomial("1/2*t^2 + 0.25t - 3").unwrap();
        assert_eq!(p.coeff(2), Rat::new(1.into(), 2.into()));
        assert_eq!(p.coeff(1), Rat::new(1.into(), 4.into()));
        assert_eq!(p.coeff(0), Rat::new((-3).into(), 1.into()));
    }

    #[test]
    fn accepts_unicode_minus_and_merges_terms() {
        let p = parse_polynomial("t\u{2212}t").unwrap();
        assert!(p.is_zero());
        let q = parse_polynomial("2t + 3t").unwrap();
        assert_eq!(q.coeff(1), Rat::new(5.into(), 1.into()));
        assert!(!q.coeff(1).is_negative());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["t^2 - 3t", "3t^4 - 3t^2", "1/2*t^3 + t - 5"] {
            let p = parse_polynomial(s).unwrap();
            let q = parse_polynomial(&p.to_string()).unwrap();
            assert_eq!(p, q, "roundtrip of {s} via {p}");
        }
    }
}
