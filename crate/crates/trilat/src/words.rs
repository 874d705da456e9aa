//! Words in the generators, in the ASCII notation `1 2 3 J P Q`, `~` for
//! inverses and `(w)^k` for powers.
//!
//! ```text
//! word := atom*
//! atom := '~'? SYMBOL ('^' INT)? | '(' word ')' '^' INT
//! ```
//! `INT` is a nonzero integer, optionally negative. Whitespace is ignored.
//! A bare symbol may carry an exponent (`P^7`, `Q^-1`); the printer uses
//! that short form whenever the body of a power is a single letter.

use std::fmt;
use std::str::FromStr;

use crate::catalog::GroupInstance;
use crate::forms::Mat3;
use crate::TrilatError;

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    R1,
    R2,
    R3,
    J,
    P,
    Q,
}

impl Sym {
    pub fn from_char(c: char) -> Option<Sym> {
        Some(match c {
            '1' => Sym::R1,
            '2' => Sym::R2,
            '3' => Sym::R3,
            'J' => Sym::J,
            'P' => Sym::P,
            'Q' => Sym::Q,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Sym::R1 => '1',
            Sym::R2 => '2',
            Sym::R3 => '3',
            Sym::J => 'J',
            Sym::P => 'P',
            Sym::Q => 'Q',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Gen { sym: Sym, inv: bool },
    Pow { body: Word, exp: i64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Atom>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn gen(sym: Sym, inv: bool) -> Word {
        Word(vec![Atom::Gen { sym, inv }])
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(s: &str) -> Result<Word, TrilatError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let w = p.word(0)?;
        p.ws();
        if p.pos < p.s.len() {
            return Err(p.err(if p.s[p.pos] == b')' {
                "unbalanced ')'"
            } else {
                "unexpected character"
            }));
        }
        Ok(w)
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(o.0.iter().cloned());
        Word(v)
    }

    pub fn pow(&self, exp: i64) -> Word {
        assert_ne!(exp, 0);
        Word(vec![Atom::Pow { body: self.clone(), exp }])
    }

    pub fn invert(&self) -> Word {
        Word(
            self.0
                .iter()
                .rev()
                .map(|a| match a {
                    Atom::Gen { sym, inv } => Atom::Gen { sym: *sym, inv: !inv },
                    Atom::Pow { body, exp } => Atom::Pow { body: body.clone(), exp: -exp },
                })
                .collect(),
        )
    }

    /// Flat sequence of letters with powers unrolled.
    pub fn letters(&self) -> Vec<(Sym, bool)> {
        let mut out = Vec::new();
        self.push_letters(false, &mut out);
        out
    }

    fn push_letters(&self, inverted: bool, out: &mut Vec<(Sym, bool)>) {
        let atoms: Box<dyn Iterator<Item = &Atom>> =
            if inverted { Box::new(self.0.iter().rev()) } else { Box::new(self.0.iter()) };
        for a in atoms {
            match a {
                Atom::Gen { sym, inv } => out.push((*sym, *inv != inverted)),
                Atom::Pow { body, exp } => {
                    let inner_inv = inverted != (*exp < 0);
                    for _ in 0..exp.unsigned_abs() {
                        body.push_letters(inner_inv, out);
                    }
                }
            }
        }
    }

    /// Number of letters after unrolling powers.
    pub fn length(&self) -> u64 {
        self.0
            .iter()
            .map(|a| match a {
                Atom::Gen { .. } => 1,
                Atom::Pow { body, exp } => body.length().saturating_mul(exp.unsigned_abs()),
            })
            .fold(0u64, u64::saturating_add)
    }

    /// Unrolled word with adjacent inverse pairs cancelled. Group relations
    /// are never used.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<(Sym, bool)> = Vec::new();
        for (s, i) in self.letters() {
            if stack.last() == Some(&(s, !i)) {
                stack.pop();
            } else {
                stack.push((s, i));
            }
        }
        Word(stack.into_iter().map(|(sym, inv)| Atom::Gen { sym, inv }).collect())
    }

    pub fn symbols(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = Vec::new();
        for a in &self.0 {
            match a {
                Atom::Gen { sym, .. } => v.push(*sym),
                Atom::Pow { body, .. } => v.extend(body.symbols()),
            }
        }
        v.sort();
        v.dedup();
        v
    }

    pub fn evaluate(&self, g: &GroupInstance) -> Result<Mat3, TrilatError> {
        let mut acc: Option<Mat3> = None;
        for a in &self.0 {
            let m = match a {
                Atom::Gen { sym, inv } => g.generator(*sym, *inv)?.clone(),
                Atom::Pow { body, exp } => {
                    let b = body.evaluate(g)?;
                    let b = if *exp < 0 { g.invert(&b)? } else { b };
                    b.pow(exp.unsigned_abs() as u32)
                }
            };
            acc = Some(match acc {
                None => m,
                Some(x) => &x * &m,
            });
        }
        Ok(acc.unwrap_or_else(Mat3::identity))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            match a {
                Atom::Gen { sym, inv } => {
                    if *inv {
                        f.write_str("~")?;
                    }
                    write!(f, "{}", sym.as_char())?;
                }
                Atom::Pow { body, exp } => {
                    if let [Atom::Gen { .. }] = body.0.as_slice() {
                        write!(f, "{body}^{exp}")?;
                        // keep `P^7 2` from reading back as `P^72`
                        let digit_next = matches!(
                            self.0.get(i + 1),
                            Some(Atom::Gen { sym: Sym::R1 | Sym::R2 | Sym::R3, inv: false })
                        );
                        if digit_next {
                            f.write_str(" ")?;
                        }
                    } else {
                        write!(f, "({body})^{exp}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = TrilatError;
    fn from_str(s: &str) -> Result<Word, TrilatError> {
        Word::parse(s)
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> TrilatError {
        TrilatError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn exponent(&mut self) -> Result<i64, TrilatError> {
        self.ws();
        let start = self.pos;
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
            self.ws();
        }
        let digits = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits == self.pos {
            return Err(self.err("expected an exponent"));
        }
        let txt = std::str::from_utf8(&self.s[digits..self.pos]).unwrap();
        let v: i64 = match txt.parse::<i64>() {
            Ok(v) if v <= MAX_EXPONENT => v,
            _ => return Err(TrilatError::Parse { pos: start, msg: "exponent too large".into() }),
        };
        if v == 0 {
            return Err(TrilatError::Parse { pos: start, msg: "exponent 0".into() });
        }
        Ok(if neg { -v } else { v })
    }

    fn word(&mut self, depth: usize) -> Result<Word, TrilatError> {
        if depth > MAX_DEPTH {
            return Err(self.err("nesting too deep"));
        }
        let mut atoms = Vec::new();
        loop {
            match self.peek() {
                None | Some(b')') => return Ok(Word(atoms)),
                Some(b'(') => {
                    let open = self.pos;
                    self.pos += 1;
                    let body = self.word(depth + 1)?;
                    if self.peek() != Some(b')') {
                        return Err(TrilatError::Parse { pos: open, msg: "unclosed '('".into() });
                    }
                    self.pos += 1;
                    if self.peek() != Some(b'^') {
                        return Err(self.err("a parenthesised word needs an exponent"));
                    }
                    self.pos += 1;
                    let exp = self.exponent()?;
                    atoms.push(Atom::Pow { body, exp });
                }
                Some(c) => {
                    let inv = c == b'~';
                    if inv {
                        self.pos += 1;
                    }
                    let Some(sym) = self.peek().and_then(|c| Sym::from_char(c as char)) else {
                        return Err(self.err("expected a generator"));
                    };
                    self.pos += 1;
                    let gen = Atom::Gen { sym, inv };
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let exp = self.exponent()?;
                        atoms.push(Atom::Pow { body: Word(vec![gen]), exp });
                    } else {
                        atoms.push(gen);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn grammar() {
        assert!(w("").is_identity());
        let x = w("(12~3)^2");
        assert_eq!(
            x,
            Word(vec![Atom::Pow {
                body: Word(vec![
                    Atom::Gen { sym: Sym::R1, inv: false },
                    Atom::Gen { sym: Sym::R2, inv: false },
                    Atom::Gen { sym: Sym::R3, inv: true },
                ]),
                exp: 2
            }])
        );
        assert_eq!(w("~2~31312").letters().len(), 6);
        assert_eq!(w("J^-1P^7 23~2P^3J").to_string(), "J^-1P^7 23~2P^3J");
        assert_eq!(w("P^72").to_string(), "P^72");
        assert_eq!(w("(P)^7").to_string(), "P^7");
        assert_eq!(w(" (1 \t2)^3 ").to_string(), "(12)^3");
    }

    #[test]
    fn errors_have_positions() {
        let cases = [("(12", 0), ("12)", 2), ("(12)", 4), ("(12)^0", 5), ("1x", 1), ("~", 1), ("(1)^", 4)];
        for (s, at) in cases {
            match Word::parse(s) {
                Err(TrilatError::Parse { pos, .. }) => assert_eq!(pos, at, "{s}"),
                other => panic!("{s}: {other:?}"),
            }
        }
        assert!(Word::parse(&"(".repeat(100)).is_err());
        assert!(Word::parse("(1)^99999999999999999999").is_err());
    }

    #[test]
    fn inversion_and_reduction() {
        assert_eq!(w("12").invert().to_string(), "~2~1");
        assert!(w("1~1").free_reduce().is_identity());
        assert_eq!(w("(12)^-2").free_reduce().to_string(), "~2~1~2~1");
        let x = w("(123~2)^2(12)^3");
        assert!(x.concat(&x.invert()).free_reduce().is_identity());
        assert_eq!(x.length(), 14);
    }
}
