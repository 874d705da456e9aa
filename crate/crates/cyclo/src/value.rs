use std::cell::Cell;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coeffs::Coeffs;
use crate::layout::{self, layout, lcm, normalize_conductor};
use crate::CycloError;

pub const DEFAULT_CONDUCTOR_CAP: u32 = 10080;

thread_local! {
    static CAP: Cell<u32> = const { Cell::new(DEFAULT_CONDUCTOR_CAP) };
}

/// Largest conductor arithmetic on this thread will produce.
pub fn conductor_cap() -> u32 {
    CAP.with(|c| c.get())
}

/// Run `f` with a different conductor cap on the current thread.
pub fn with_conductor_cap<T>(cap: u32, f: impl FnOnce() -> T) -> T {
    let old = CAP.with(|c| c.replace(cap));
    let out = f();
    CAP.with(|c| c.set(old));
    out
}

/// An element of Q(ζ_n) stored at its minimal conductor.
///
/// The coefficient vector is dense over the mixed-radix basis of
/// [`crate::layout`], with a common positive denominator coprime to the
/// numerators, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    n: u32,
    num: Coeffs,
    den: BigInt,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { n: 1, num: Coeffs::Small(vec![0]), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Cyclotomic { n: 1, num: Coeffs::Small(vec![v]), den: BigInt::one() }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Cyclotomic { n: 1, num: Coeffs::from_big(vec![v]), den: BigInt::one() }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_parts(1, Coeffs::from_big(vec![q.numer().clone()]), q.denom().clone())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    /// ζ_n^k. Panics only if `n` is zero or exceeds the conductor cap.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        Self::try_root_of_unity(n, k).expect("root_of_unity")
    }

    pub fn try_root_of_unity(n: u32, k: i64) -> Result<Self, CycloError> {
        if n == 0 {
            return Err(CycloError::ZeroConductor);
        }
        let k = k.rem_euclid(n as i64) as u64;
        let g = layout::gcd(n as u64, k);
        let (n, k) = ((n as u64 / g.max(1)) as u32, k / g.max(1));
        if n == 1 {
            return Ok(Self::one());
        }
        let (m, k, negate) = if n % 4 == 2 {
            // ζ_{2m}^k = -ζ_m^{(k + m)/2} for odd m, odd k
            let m = n / 2;
            (m, ((k + m as u64) / 2) % m as u64, true)
        } else {
            (n, k, false)
        };
        if m > conductor_cap() {
            return Err(CycloError::ConductorCap { needed: m, cap: conductor_cap() });
        }
        let l = layout(m);
        let mut v = vec![0i64; l.phi];
        let s = if negate { -1 } else { 1 };
        for &(idx, sign) in l.expand(k as u32) {
            v[idx as usize] += s * sign as i64;
        }
        Ok(Self::from_parts(m, Coeffs::Small(v), BigInt::one()))
    }

    /// Build from raw parts at conductor `n` and normalise.
    pub(crate) fn from_parts(n: u32, num: Coeffs, den: BigInt) -> Self {
        debug_assert!(n % 4 != 2);
        if num.all_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_one() {
            (num, den)
        } else {
            let g = num.content().gcd(&den);
            let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den / &g) };
            if den.is_negative() {
                (num.neg(), -den)
            } else {
                (num, den)
            }
        };
        let (n, num) = descend(n, num);
        Cyclotomic { n, num, den }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.n == 1 && self.num.is_zero_at(0)
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.den.is_one() && self.num == Coeffs::Small(vec![1])
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.n == 1 {
            Some(BigRational::new(self.num.get(0), self.den.clone()))
        } else {
            None
        }
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Nonzero terms as (exponent of ζ_n, coefficient), by increasing exponent.
    pub fn terms(&self) -> Vec<(u32, BigRational)> {
        let l = layout(self.n);
        let mut out: Vec<(u32, BigRational)> = self
            .num
            .nonzero()
            .into_iter()
            .map(|i| (l.exps[i], BigRational::new(self.num.get(i), self.den.clone())))
            .collect();
        out.sort_by_key(|t| t.0);
        out
    }

    /// Number of nonzero basis coefficients.
    pub fn support(&self) -> usize {
        self.num.nonzero().len()
    }

    pub(crate) fn raw(&self) -> (&Coeffs, &BigInt) {
        (&self.num, &self.den)
    }

    /// Coefficient vector lifted to conductor `n` (a multiple of ours).
    pub(crate) fn lifted(&self, n: u32) -> Coeffs {
        if n == self.n {
            return self.num.clone();
        }
        let map = layout::lift_map(self.n, n);
        let len = layout(n).phi;
        self.num.reindex(|i| map[i] as usize, len)
    }

    fn common(&self, other: &Self) -> Result<u32, CycloError> {
        let n = normalize_conductor(lcm(self.n as u64, other.n as u64) as u32);
        if n > conductor_cap() {
            return Err(CycloError::ConductorCap { needed: n, cap: conductor_cap() });
        }
        Ok(n)
    }

    fn lin(&self, other: &Self, sign: i64) -> Result<Self, CycloError> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(if sign > 0 { other.clone() } else { other.neg_ref() });
        }
        let n = self.common(other)?;
        let a = self.lifted(n);
        let b = other.lifted(n);
        let (sa, sb, den) = if self.den == other.den {
            (BigInt::one(), BigInt::from(sign), self.den.clone())
        } else {
            let d = self.den.lcm(&other.den);
            (&d / &self.den, BigInt::from(sign) * (&d / &other.den), d)
        };
        Ok(Self::from_parts(n, Coeffs::lin_comb(&a, &sa, &b, &sb), den))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.lin(other, 1)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.lin(other, -1)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycloError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if self.n == 1 || other.n == 1 {
            // scalar times vector: no convolution needed
            let (r, v) = if self.n == 1 { (self, other) } else { (other, self) };
            let s = r.num.get(0);
            let num = Coeffs::lin_comb(&v.num, &s, &v.num, &BigInt::zero());
            return Ok(Self::from_parts(v.n, num, &r.den * &v.den));
        }
        let n = self.common(other)?;
        let l = layout(n);
        let num = Coeffs::mul(&l, &self.lifted(n), &other.lifted(n));
        Ok(Self::from_parts(n, num, &self.den * &other.den))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.checked_mul(&other.inverse()?)
    }

    /// Multiplicative inverse: the product of the other Galois conjugates
    /// divided by the (rational) norm.
    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(&q.recip()));
        }
        let orbit = crate::field::galois_orbit(self);
        let mut rest = Self::one();
        for c in orbit.iter().skip(1) {
            rest = rest.checked_mul(c)?;
        }
        let norm = self.checked_mul(&rest)?;
        let q = norm.to_rational().expect("norm of a cyclotomic is rational");
        rest.checked_mul(&Self::from_rational(&q.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Self, CycloError> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs() as u32))
        }
    }

    fn neg_ref(&self) -> Self {
        Cyclotomic { n: self.n, num: self.num.neg(), den: self.den.clone() }
    }

    /// Image under ζ ↦ ζ^k; `k` must be coprime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        let k = k.rem_euclid(self.n as i64) as u32;
        assert_eq!(
            layout::gcd(k as u64, self.n as u64),
            1,
            "galois exponent {k} not a unit mod {}",
            self.n
        );
        let l = layout(self.n);
        Self::from_parts(self.n, Coeffs::galois(&l, &self.num, k), self.den.clone())
    }

    /// Complex conjugate, i.e. ζ ↦ ζ^{-1}.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// x·x̄, a non-negative real.
    pub fn abs_sq(&self) -> Self {
        self * &self.conjugate()
    }

    /// (x + x̄)/2
    pub fn real_part(&self) -> Self {
        &(self + &self.conjugate()) * &Self::from_ratio(1, 2)
    }

    /// Multiply by an integer.
    pub fn scale(&self, k: i64) -> Self {
        self * &Self::from_integer(k)
    }

    /// Rough size of the coefficients, used only for diagnostics.
    pub fn height(&self) -> f64 {
        self.num.max_abs_f64()
    }
}

/// Strip prime factors from the conductor while the value allows it.
fn descend(mut n: u32, mut num: Coeffs) -> (u32, Coeffs) {
    'outer: loop {
        if n == 1 {
            return (n, num);
        }
        let l = layout(n);
        let nz = num.nonzero();
        for (ci, c) in l.comps.iter().enumerate() {
            let drop_whole = c.e == 1 || (c.p == 2 && c.e == 2);
            let ok = nz.iter().all(|&i| {
                let d = l.digit(i, ci);
                if drop_whole {
                    d == 0
                } else {
                    d % c.p == 0
                }
            });
            if !ok {
                continue;
            }
            let m = if drop_whole { n / c.q } else { n / c.p };
            let lm = layout(m);
            let len = lm.phi;
            let map = |i: usize| -> usize {
                let mut out = 0u32;
                for (cj, d) in l.comps.iter().enumerate() {
                    let mut dig = l.digit(i, cj);
                    if cj == ci {
                        if drop_whole {
                            continue;
                        }
                        dig /= c.p;
                    }
                    let target = lm.comps.iter().find(|t| t.p == d.p).unwrap();
                    out += dig * target.stride;
                }
                out as usize
            };
            num = num.reindex(map, len);
            n = m;
            continue 'outer;
        }
        return (n, num);
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $checked:ident, $atr:ident, $af:ident) => {
        impl $tr<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: &Cyclotomic) -> Cyclotomic {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$f(rhs)
            }
        }
        impl $tr<Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: Cyclotomic) -> Cyclotomic {
                self.$f(&rhs)
            }
        }
        impl $atr<&Cyclotomic> for Cyclotomic {
            fn $af(&mut self, rhs: &Cyclotomic) {
                *self = (&*self).$f(rhs);
            }
        }
        impl $atr<Cyclotomic> for Cyclotomic {
            fn $af(&mut self, rhs: Cyclotomic) {
                *self = (&*self).$f(&rhs);
            }
        }
    };
}

binop!(Add, add, checked_add, AddAssign, add_assign);
binop!(Sub, sub, checked_sub, SubAssign, sub_assign);
binop!(Mul, mul, checked_mul, MulAssign, mul_assign);

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.neg_ref()
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.neg_ref()
    }
}

impl From<i64> for Cyclotomic {
    fn from(v: i64) -> Self {
        Cyclotomic::from_integer(v)
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Cyclotomic::zero()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format(self))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}
