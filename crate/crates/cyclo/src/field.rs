//! Galois-theoretic queries: orbits, generated subfields, membership.
//!
//! A subfield of Q(ζ_n) is recorded by the subgroup H of (Z/n)^× fixing it.
//! Descriptors are always reduced to the field's own conductor, so two
//! descriptors of the same field compare equal.

use std::collections::{BTreeSet, HashMap};

use crate::layout::{euler_phi, factor, gcd, lcm, normalize_conductor};
use crate::value::Cyclotomic;
use crate::CycloError;

/// (Z/n)^× as a sorted list; for n = 1 this is `[1]`.
pub fn units(n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![1];
    }
    (1..n).filter(|&k| gcd(k as u64, n as u64) == 1).collect()
}

fn reduce_unit(k: u32, m: u32) -> u32 {
    if m == 1 {
        1
    } else {
        k % m
    }
}

/// Distinct Galois conjugates of `x`, starting with `x` itself.
pub fn galois_orbit(x: &Cyclotomic) -> Vec<Cyclotomic> {
    let mut out: Vec<Cyclotomic> = Vec::new();
    for k in units(x.conductor()) {
        let y = x.galois(k as i64);
        if !out.contains(&y) {
            out.push(y);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    /// conductor of the field itself
    pub conductor: u32,
    /// subgroup of (Z/conductor)^× fixing the field, sorted
    pub fixing_set: Vec<u32>,
    pub degree: u32,
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor { conductor: 1, fixing_set: vec![1], degree: 1 }
    }

    /// The field cut out by `h` inside Q(ζ_n).
    fn from_subgroup(n: u32, h: BTreeSet<u32>) -> Self {
        let (mut n, mut h) = (n, h);
        'shrink: loop {
            for (p, _) in factor(n) {
                let m = normalize_conductor(n / p);
                if m == n {
                    continue;
                }
                let kernel_inside = units(n)
                    .into_iter()
                    .filter(|&k| reduce_unit(k, m) == 1)
                    .all(|k| h.contains(&k));
                if kernel_inside {
                    h = h.iter().map(|&k| reduce_unit(k, m)).collect();
                    n = m;
                    continue 'shrink;
                }
            }
            break;
        }
        let degree = euler_phi(n) / h.len() as u32;
        FieldDescriptor { conductor: n, fixing_set: h.into_iter().collect(), degree }
    }

    /// Preimage of the fixing group in (Z/n)^× for a multiple n.
    fn fixing_at(&self, n: u32) -> BTreeSet<u32> {
        let h: BTreeSet<u32> = self.fixing_set.iter().copied().collect();
        units(n)
            .into_iter()
            .filter(|&k| h.contains(&reduce_unit(k, self.conductor)))
            .collect()
    }

    pub fn is_real(&self) -> bool {
        self.conductor <= 2 || self.fixing_set.contains(&(self.conductor - 1))
    }

    pub fn contains(&self, x: &Cyclotomic) -> bool {
        let n = lcm(self.conductor as u64, x.conductor() as u64) as u32;
        let m = x.conductor();
        let mut seen = HashMap::new();
        self.fixing_at(n).into_iter().all(|k| {
            let r = reduce_unit(k, m);
            *seen.entry(r).or_insert_with(|| x.galois(r as i64) == *x)
        })
    }

    pub fn is_subfield_of(&self, other: &FieldDescriptor) -> bool {
        let n = lcm(self.conductor as u64, other.conductor as u64) as u32;
        other.fixing_at(n).is_subset(&self.fixing_at(n))
    }

    /// Whether a square root of the integer `d` lies in the field.
    pub fn contains_sqrt(&self, d: i64) -> Result<bool, CycloError> {
        Ok(self.contains(&sqrt_of_integer(d)?))
    }

    /// Smallest subfield containing every element of `elems`.
    pub fn generated_by<'a>(
        elems: impl IntoIterator<Item = &'a Cyclotomic>,
    ) -> Result<Self, CycloError> {
        let elems: Vec<&Cyclotomic> = elems.into_iter().collect();
        let mut n: u64 = 1;
        for x in &elems {
            n = lcm(n, x.conductor() as u64);
        }
        let cap = crate::value::conductor_cap();
        if n > cap as u64 {
            return Err(CycloError::ConductorCap { needed: n.min(u32::MAX as u64) as u32, cap });
        }
        let n = n as u32;
        let mut h: BTreeSet<u32> = units(n).into_iter().collect();
        for x in elems {
            if h.len() == 1 {
                break;
            }
            let m = x.conductor();
            let mut seen: HashMap<u32, bool> = HashMap::new();
            h.retain(|&k| {
                let r = reduce_unit(k, m);
                *seen.entry(r).or_insert_with(|| x.galois(r as i64) == *x)
            });
        }
        Ok(Self::from_subgroup(n, h))
    }
}

/// Smallest subfield containing every element of `elems`.
pub fn field_generated<'a>(
    elems: impl IntoIterator<Item = &'a Cyclotomic>,
) -> Result<FieldDescriptor, CycloError> {
    FieldDescriptor::generated_by(elems)
}

/// Whether a square root of `d` lies in `f`.
pub fn contains_named_sqrt(f: &FieldDescriptor, d: i64) -> Result<bool, CycloError> {
    f.contains_sqrt(d)
}

fn legendre(a: u32, q: u32) -> i64 {
    let mut r: u64 = 1;
    let mut b = a as u64 % q as u64;
    let mut e = (q - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q as u64;
        }
        b = b * b % q as u64;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// The quadratic Gauss sum at an odd prime q, a square root of ±q with the
/// sign making it ≡ 1 mod 4 (that is, √q or i√q).
fn gauss_sum(q: u32) -> Cyclotomic {
    let mut g = Cyclotomic::zero();
    for a in 1..q {
        let z = Cyclotomic::root_of_unity(q, a as i64);
        if legendre(a, q) > 0 {
            g += &z;
        } else {
            g -= &z;
        }
    }
    g
}

/// A square root of the integer `d` as a cyclotomic number.
pub fn sqrt_of_integer(d: i64) -> Result<Cyclotomic, CycloError> {
    if d == 0 {
        return Ok(Cyclotomic::zero());
    }
    let mag = d.unsigned_abs();
    let mut square: u64 = 1;
    let mut free: u64 = 1;
    let mut m = mag;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    free *= m;
    let mut cond: u64 = if free % 2 == 0 { 8 } else { 4 };
    let mut odd = free;
    while odd % 2 == 0 {
        odd /= 2;
    }
    cond = lcm(cond, odd);
    let cap = crate::value::conductor_cap();
    if cond > cap as u64 {
        return Err(CycloError::ConductorCap { needed: cond.min(u32::MAX as u64) as u32, cap });
    }
    let mut val = Cyclotomic::one();
    // sign of the product of the q* = (-1)^{(q-1)/2} q
    let mut star = 1i64;
    for (q, _) in factor(odd as u32) {
        val = &val * &gauss_sum(q);
        if q % 4 == 3 {
            star = -star;
        }
    }
    let two = if free % 2 == 0 { 2 } else { 1 };
    let want = d.signum() * star * two;
    let fix = match want {
        1 => Cyclotomic::one(),
        -1 => Cyclotomic::root_of_unity(4, 1),
        2 => Cyclotomic::root_of_unity(8, 1) + Cyclotomic::root_of_unity(8, 7),
        -2 => Cyclotomic::root_of_unity(8, 1) + Cyclotomic::root_of_unity(8, 3),
        _ => unreachable!(),
    };
    let square = i64::try_from(square).expect("square part fits");
    Ok(&(&val * &fix) * &Cyclotomic::from_integer(square))
}
