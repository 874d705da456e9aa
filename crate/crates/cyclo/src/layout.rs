//! Basis bookkeeping for a fixed conductor.
//!
//! Q(ζ_n) is the tensor product of the Q(ζ_q) over the prime powers q ‖ n.
//! Each factor carries its power basis ζ_q^j, 0 ≤ j < φ(q), and a basis
//! element of Q(ζ_n) is a tuple of such exponents packed in mixed radix
//! (first prime varies fastest). Because 1 = ζ_q^0 is always a basis
//! element, lifting to a multiple conductor and descending to a divisor are
//! both pure re-indexings.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

#[derive(Debug, Clone)]
pub(crate) struct Comp {
    pub p: u32,
    pub e: u32,
    /// p^e
    pub q: u32,
    /// φ(q), the number of basis exponents in this factor
    pub radix: u32,
    pub stride: u32,
    /// n / q, so that ζ_n^{n/q} = ζ_q
    pub cofactor: u32,
    /// (n/q)^{-1} mod q
    pub inv: u32,
}

#[derive(Debug)]
pub(crate) struct Layout {
    pub n: u32,
    pub phi: usize,
    pub comps: Vec<Comp>,
    /// basis index -> exponent of ζ_n
    pub exps: Vec<u32>,
    /// exponent k -> expansion of ζ_n^k in the basis, as (index, sign)
    offsets: Vec<u32>,
    terms: Vec<(u32, i8)>,
}

pub(crate) fn factor(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m as i64, (a % m) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} not invertible mod {m}");
    t.rem_euclid(m as i64) as u64
}

pub fn euler_phi(n: u32) -> u32 {
    factor(n)
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Q(ζ_n) = Q(ζ_{n/2}) when n ≡ 2 mod 4; conductors are kept off that class.
pub fn normalize_conductor(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

impl Layout {
    fn build(n: u32) -> Layout {
        debug_assert!(n >= 1 && n % 4 != 2);
        let mut comps = Vec::new();
        let mut stride = 1;
        for (p, e) in factor(n) {
            let q = p.pow(e);
            let radix = (p - 1) * p.pow(e - 1);
            let cofactor = n / q;
            let inv = mod_inverse(cofactor as u64, q as u64) as u32;
            comps.push(Comp { p, e, q, radix, stride, cofactor, inv });
            stride *= radix;
        }
        let phi = stride as usize;
        let mut exps = vec![0u32; phi];
        for (idx, slot) in exps.iter_mut().enumerate() {
            let mut k: u64 = 0;
            for c in &comps {
                let j = (idx as u32 / c.stride) % c.radix;
                k += j as u64 * c.cofactor as u64;
            }
            *slot = (k % n as u64) as u32;
        }
        let mut offsets = Vec::with_capacity(n as usize + 1);
        let mut terms = Vec::new();
        offsets.push(0);
        for k in 0..n {
            let mut acc: Vec<(u32, i8)> = vec![(0, 1)];
            for c in &comps {
                let a = ((k % c.q) as u64 * c.inv as u64 % c.q as u64) as u32;
                let part: Vec<(u32, i8)> = if a < c.radix {
                    vec![(a, 1)]
                } else {
                    let step = c.q / c.p;
                    let r = a - c.radix;
                    (0..c.p - 1).map(|b| (b * step + r, -1)).collect()
                };
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for &(i, s) in &acc {
                    for &(j, t) in &part {
                        next.push((i + j * c.stride, s * t));
                    }
                }
                acc = next;
            }
            terms.extend(acc);
            offsets.push(terms.len() as u32);
        }
        Layout { n, phi, comps, exps, offsets, terms }
    }

    /// Expansion of ζ_n^k (k reduced mod n) in the basis.
    #[inline]
    pub fn expand(&self, k: u32) -> &[(u32, i8)] {
        let k = k as usize;
        &self.terms[self.offsets[k] as usize..self.offsets[k + 1] as usize]
    }

    /// Digit of basis index `idx` in component `c`.
    #[inline]
    pub fn digit(&self, idx: usize, c: usize) -> u32 {
        let comp = &self.comps[c];
        (idx as u32 / comp.stride) % comp.radix
    }
}

thread_local! {
    static CACHE: RefCell<HashMap<u32, Rc<Layout>>> = RefCell::new(HashMap::new());
}

/// Per-thread memo of layouts; values are immutable once built.
pub(crate) fn layout(n: u32) -> Rc<Layout> {
    CACHE.with(|cache| {
        if let Some(l) = cache.borrow().get(&n) {
            return l.clone();
        }
        let l = Rc::new(Layout::build(n));
        cache.borrow_mut().insert(n, l.clone());
        l
    })
}

/// Map from basis indices of conductor `m` to those of a multiple `n`.
pub(crate) fn lift_map(m: u32, n: u32) -> Vec<u32> {
    debug_assert_eq!(n % m, 0);
    let lm = layout(m);
    let ln = layout(n);
    (0..lm.phi)
        .map(|idx| {
            let mut out = 0u32;
            for (ci, c) in lm.comps.iter().enumerate() {
                let j = lm.digit(idx, ci);
                let target = ln
                    .comps
                    .iter()
                    .find(|d| d.p == c.p)
                    .expect("conductor must divide");
                out += j * c.p.pow(target.e - c.e) * target.stride;
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_sizes() {
        for n in [1u32, 3, 4, 5, 8, 9, 12, 15, 36, 84, 180, 252] {
            let l = layout(n);
            assert_eq!(l.phi as u32, euler_phi(n), "n={n}");
            // basis exponents are distinct
            let mut e = l.exps.clone();
            e.sort();
            e.dedup();
            assert_eq!(e.len(), l.phi);
        }
    }

    #[test]
    fn basis_elements_expand_to_themselves() {
        for n in [4u32, 7, 9, 20, 63] {
            let l = layout(n);
            for idx in 0..l.phi {
                assert_eq!(l.expand(l.exps[idx]), &[(idx as u32, 1)]);
            }
        }
    }

    #[test]
    fn normalize() {
        assert_eq!(normalize_conductor(6), 3);
        assert_eq!(normalize_conductor(2), 1);
        assert_eq!(normalize_conductor(12), 12);
    }
}
