//! Text form `c0 + c1*z(n)^k1 + ...`.
//!
//! The printer emits the canonical basis terms by increasing exponent. The
//! parser accepts any exponents and conductors and reduces them, so
//! `z(8)^5` and `-z(8)^1` read back to the same value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::value::{conductor_cap, Cyclotomic};
use crate::CycloError;

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn format(x: &Cyclotomic) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let n = x.conductor();
    let mut out = String::new();
    for (i, (k, c)) in x.terms().into_iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if k == 0 {
            out.push_str(&fmt_rational(&mag));
        } else {
            if !mag.is_one() {
                out.push_str(&fmt_rational(&mag));
                out.push('*');
            }
            out.push_str(&format!("z({n})^{k}"));
        }
    }
    out
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: &str) -> CycloError {
        CycloError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), CycloError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn digits(&mut self) -> Result<BigInt, CycloError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn small(&mut self, what: &str) -> Result<i64, CycloError> {
        let start = self.pos;
        let neg = self.eat(b'-');
        let v = self.digits()?;
        let v: i64 = v.try_into().map_err(|_| CycloError::Parse {
            pos: start,
            msg: format!("{what} out of range"),
        })?;
        Ok(if neg { -v } else { v })
    }

    fn rational(&mut self) -> Result<BigRational, CycloError> {
        let num = self.digits()?;
        self.ws();
        if self.eat(b'/') {
            self.ws();
            let at = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(CycloError::Parse { pos: at, msg: "zero denominator".into() });
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn zpow(&mut self) -> Result<Cyclotomic, CycloError> {
        self.expect(b'z')?;
        self.ws();
        self.expect(b'(')?;
        self.ws();
        let at = self.pos;
        let n = self.small("conductor")?;
        if n < 1 {
            return Err(CycloError::Parse { pos: at, msg: "conductor must be positive".into() });
        }
        let cap = conductor_cap() as i64;
        // ζ_{2m} with m odd lives at conductor m
        let eff = if n % 4 == 2 { n / 2 } else { n };
        if eff > cap {
            return Err(CycloError::ConductorCap { needed: eff.min(u32::MAX as i64) as u32, cap: cap as u32 });
        }
        self.ws();
        self.expect(b')')?;
        self.ws();
        let k = if self.eat(b'^') {
            self.ws();
            self.small("exponent")?
        } else {
            1
        };
        Cyclotomic::try_root_of_unity(n as u32, k)
    }

    fn term(&mut self) -> Result<Cyclotomic, CycloError> {
        match self.peek() {
            Some(b'z') => self.zpow(),
            Some(c) if c.is_ascii_digit() => {
                let q = Cyclotomic::from_rational(&self.rational()?);
                self.ws();
                if self.eat(b'*') {
                    self.ws();
                    let z = self.zpow()?;
                    q.checked_mul(&z)
                } else {
                    Ok(q)
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

pub fn parse(s: &str) -> Result<Cyclotomic, CycloError> {
    let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
    cur.ws();
    let mut acc = Cyclotomic::zero();
    let mut first = true;
    loop {
        cur.ws();
        if cur.peek().is_none() {
            if first {
                return Err(cur.err("empty input"));
            }
            return Ok(acc);
        }
        let neg = if cur.eat(b'-') {
            true
        } else if cur.eat(b'+') {
            false
        } else if first {
            false
        } else {
            return Err(cur.err("expected '+' or '-'"));
        };
        cur.ws();
        let t = cur.term()?;
        acc = if neg { acc.checked_sub(&t)? } else { acc.checked_add(&t)? };
        first = false;
    }
}

impl std::str::FromStr for Cyclotomic {
    type Err = CycloError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_forms() {
        assert_eq!(Cyclotomic::zero().to_string(), "0");
        assert_eq!(Cyclotomic::from_ratio(-3, 4).to_string(), "-3/4");
        let i_sqrt2 = Cyclotomic::root_of_unity(8, 1) + Cyclotomic::root_of_unity(8, 3);
        assert_eq!(i_sqrt2.to_string(), "z(8)^1 + z(8)^3");
        let x = Cyclotomic::from_integer(-1) - Cyclotomic::root_of_unity(4, 1).scale(2);
        assert_eq!(x.to_string(), "-1 - 2*z(4)^1");
    }

    #[test]
    fn parse_reduces() {
        let a: Cyclotomic = "z(8)^5".parse().unwrap();
        let b: Cyclotomic = "-z(8)^1".parse().unwrap();
        assert_eq!(a, b);
        let c: Cyclotomic = "z(3) + z(3)^2".parse().unwrap();
        assert_eq!(c, Cyclotomic::from_integer(-1));
        let d: Cyclotomic = " 1/2 +  3/2 * z(6)^-1 ".parse().unwrap();
        assert_eq!(d.conductor(), 3);
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse("1 + ") {
            Err(CycloError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse("1/0").is_err());
        assert!(parse("z(0)").is_err());
        assert!(parse("2 3").is_err());
        assert!(parse("").is_err());
        assert!(parse("z(99999999)").is_err());
    }

    #[test]
    fn roundtrip_text() {
        for s in ["0", "7/3", "z(5)^1 - 2*z(5)^3", "-1 + z(8)^1 + z(8)^3"] {
            let x = parse(s).unwrap();
            assert_eq!(parse(&x.to_string()).unwrap(), x);
        }
    }
}
