//! Dense integer coefficient vectors with a machine-word fast path.
//!
//! Vectors stay in `Small` while every entry fits in an i64; any operation
//! that would overflow redoes the work on `Big`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::layout::Layout;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Coeffs {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

fn shrink_i128(v: Vec<i128>) -> Coeffs {
    if v.iter().all(|&x| i64::try_from(x).is_ok()) {
        Coeffs::Small(v.into_iter().map(|x| x as i64).collect())
    } else {
        Coeffs::Big(v.into_iter().map(BigInt::from).collect())
    }
}

impl Coeffs {

    pub fn from_big(v: Vec<BigInt>) -> Coeffs {
        if v.iter().all(|x| x.to_i64().is_some()) {
            Coeffs::Small(v.iter().map(|x| x.to_i64().unwrap()).collect())
        } else {
            Coeffs::Big(v)
        }
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        match self {
            Coeffs::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            Coeffs::Big(v) => v.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Coeffs::Small(v) => v.len(),
            Coeffs::Big(v) => v.len(),
        }
    }

    pub fn is_zero_at(&self, i: usize) -> bool {
        match self {
            Coeffs::Small(v) => v[i] == 0,
            Coeffs::Big(v) => v[i].is_zero(),
        }
    }

    pub fn get(&self, i: usize) -> BigInt {
        match self {
            Coeffs::Small(v) => BigInt::from(v[i]),
            Coeffs::Big(v) => v[i].clone(),
        }
    }

    pub fn get_f64(&self, i: usize) -> f64 {
        match self {
            Coeffs::Small(v) => v[i] as f64,
            Coeffs::Big(v) => v[i].to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn all_zero(&self) -> bool {
        match self {
            Coeffs::Small(v) => v.iter().all(|&x| x == 0),
            Coeffs::Big(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub fn nonzero(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_zero_at(i)).collect()
    }

    pub fn neg(&self) -> Coeffs {
        match self {
            Coeffs::Small(v) if v.iter().all(|&x| x != i64::MIN) => {
                Coeffs::Small(v.iter().map(|&x| -x).collect())
            }
            _ => Coeffs::from_big(self.to_big().into_iter().map(|x| -x).collect()),
        }
    }

    /// gcd of all entries (non-negative).
    pub fn content(&self) -> BigInt {
        match self {
            Coeffs::Small(v) => {
                let mut g: u64 = 0;
                for &x in v {
                    g = crate::layout::gcd(g, x.unsigned_abs());
                    if g == 1 {
                        break;
                    }
                }
                BigInt::from(g)
            }
            Coeffs::Big(v) => {
                let mut g = BigInt::zero();
                for x in v {
                    g = g.gcd(x);
                    if g.is_one() {
                        break;
                    }
                }
                g
            }
        }
    }

    pub fn div_exact(&self, g: &BigInt) -> Coeffs {
        if g.is_one() {
            return self.clone();
        }
        match (self, g.to_i64()) {
            (Coeffs::Small(v), Some(d)) => Coeffs::Small(v.iter().map(|&x| x / d).collect()),
            _ => Coeffs::from_big(self.to_big().into_iter().map(|x| x / g).collect()),
        }
    }

    /// `a*sa + b*sb`, entrywise.
    pub fn lin_comb(a: &Coeffs, sa: &BigInt, b: &Coeffs, sb: &BigInt) -> Coeffs {
        if let (Coeffs::Small(x), Coeffs::Small(y), Some(s), Some(t)) =
            (a, b, sa.to_i64(), sb.to_i64())
        {
            let (s, t) = (s as i128, t as i128);
            let mut out = Vec::with_capacity(x.len());
            let mut ok = true;
            for (&u, &v) in x.iter().zip(y) {
                match (u as i128 * s).checked_add(v as i128 * t) {
                    Some(r) => out.push(r),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return shrink_i128(out);
            }
        }
        let x = a.to_big();
        let y = b.to_big();
        Coeffs::from_big(x.iter().zip(&y).map(|(u, v)| u * sa + v * sb).collect())
    }

    /// Scatter entries into a vector of length `len` through `map`.
    pub fn reindex(&self, map: impl Fn(usize) -> usize, len: usize) -> Coeffs {
        match self {
            Coeffs::Small(v) => {
                let mut out = vec![0i64; len];
                for (i, &x) in v.iter().enumerate() {
                    if x != 0 {
                        out[map(i)] = x;
                    }
                }
                Coeffs::Small(out)
            }
            Coeffs::Big(v) => {
                let mut out = vec![BigInt::zero(); len];
                for (i, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        out[map(i)] = x.clone();
                    }
                }
                Coeffs::Big(out)
            }
        }
    }

    pub fn mul(l: &Layout, a: &Coeffs, b: &Coeffs) -> Coeffs {
        if let (Coeffs::Small(x), Coeffs::Small(y)) = (a, b) {
            if let Some(r) = mul_small(l, x, y) {
                return r;
            }
        }
        mul_big(l, &a.to_big(), &b.to_big())
    }

    /// Apply ζ_n ↦ ζ_n^k (k a unit mod n).
    pub fn galois(l: &Layout, a: &Coeffs, k: u32) -> Coeffs {
        let n = l.n as u64;
        let target = |idx: usize| (l.exps[idx] as u64 * k as u64 % n) as u32;
        if let Coeffs::Small(x) = a {
            let mut out = vec![0i128; l.phi];
            let mut ok = true;
            'outer: for (idx, &c) in x.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &(j, s) in l.expand(target(idx)) {
                    let slot = &mut out[j as usize];
                    let r = if s > 0 {
                        slot.checked_add(c as i128)
                    } else {
                        slot.checked_sub(c as i128)
                    };
                    match r {
                        Some(r) => *slot = r,
                        None => {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                return shrink_i128(out);
            }
        }
        let x = a.to_big();
        let mut out = vec![BigInt::zero(); l.phi];
        for (idx, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(j, s) in l.expand(target(idx)) {
                if s > 0 {
                    out[j as usize] += c;
                } else {
                    out[j as usize] -= c;
                }
            }
        }
        Coeffs::from_big(out)
    }

    pub fn max_abs_f64(&self) -> f64 {
        match self {
            Coeffs::Small(v) => v.iter().map(|x| x.unsigned_abs() as f64).fold(0.0, f64::max),
            Coeffs::Big(v) => v
                .iter()
                .map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max),
        }
    }
}

fn mul_small(l: &Layout, x: &[i64], y: &[i64]) -> Option<Coeffs> {
    let n = l.n;
    let mut acc = vec![0i128; n as usize];
    let ys: Vec<(u32, i128)> = y
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(i, &v)| (l.exps[i], v as i128))
        .collect();
    for (i, &u) in x.iter().enumerate() {
        if u == 0 {
            continue;
        }
        let eu = l.exps[i];
        let u = u as i128;
        for &(ev, v) in &ys {
            let mut k = eu + ev;
            if k >= n {
                k -= n;
            }
            let slot = &mut acc[k as usize];
            *slot = slot.checked_add(u * v)?;
        }
    }
    let mut out = vec![0i128; l.phi];
    for (k, &v) in acc.iter().enumerate() {
        if v == 0 {
            continue;
        }
        for &(j, s) in l.expand(k as u32) {
            let slot = &mut out[j as usize];
            *slot = if s > 0 {
                slot.checked_add(v)?
            } else {
                slot.checked_sub(v)?
            };
        }
    }
    Some(shrink_i128(out))
}

fn mul_big(l: &Layout, x: &[BigInt], y: &[BigInt]) -> Coeffs {
    let n = l.n;
    let mut acc = vec![BigInt::zero(); n as usize];
    let ys: Vec<(u32, &BigInt)> = y
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (l.exps[i], v))
        .collect();
    for (i, u) in x.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        let eu = l.exps[i];
        for &(ev, v) in &ys {
            let mut k = eu + ev;
            if k >= n {
                k -= n;
            }
            acc[k as usize] += u * v;
        }
    }
    let mut out = vec![BigInt::zero(); l.phi];
    for (k, v) in acc.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        for &(j, s) in l.expand(k as u32) {
            if s > 0 {
                out[j as usize] += v;
            } else {
                out[j as usize] -= v;
            }
        }
    }
    Coeffs::from_big(out)
}
