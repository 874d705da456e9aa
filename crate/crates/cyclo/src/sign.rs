//! Rigorous sign of real cyclotomic numbers, and numerical embedding.
//!
//! Each basis root ζ_n^k is evaluated in binary fixed point with an explicit
//! error bound; a sign is reported only once the enclosure of the value
//! excludes zero. Precision doubles until it does (exact zero is decided
//! symbolically beforehand, so the loop terminates).

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::layout::layout;
use crate::value::Cyclotomic;
use crate::CycloError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Fixed-point reals scaled by 2^bits.
struct Fixed {
    bits: u64,
    pi: BigInt,
}

fn arctan_inv(x: u64, bits: u64) -> BigInt {
    // Σ (-1)^j / ((2j+1) x^{2j+1})
    let one = BigInt::from(1) << bits;
    let x2 = BigInt::from(x * x);
    let mut power = &one / x;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !power.is_zero() {
        let term = &power / (2 * j + 1);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        j += 1;
    }
    sum
}

impl Fixed {
    fn new(bits: u64) -> Fixed {
        let pi = arctan_inv(5, bits) * 16 - arctan_inv(239, bits) * 4;
        Fixed { bits, pi }
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }

    /// (cos x, sin x) for |x| ≤ π/4 by Taylor series.
    fn cos_sin_small(&self, x: &BigInt) -> (BigInt, BigInt) {
        let one = BigInt::from(1) << self.bits;
        let x2 = self.mul(x, x);
        let mut c = one.clone();
        let mut term = one;
        let mut k: u64 = 0;
        loop {
            term = self.mul(&term, &x2) / ((k + 1) * (k + 2));
            if term.is_zero() {
                break;
            }
            k += 2;
            if k % 4 == 2 {
                c -= &term;
            } else {
                c += &term;
            }
        }
        let mut s = x.clone();
        let mut term = x.clone();
        let mut k: u64 = 1;
        loop {
            term = self.mul(&term, &x2) / ((k + 1) * (k + 2));
            if term.is_zero() {
                break;
            }
            k += 2;
            if k % 4 == 3 {
                s -= &term;
            } else {
                s += &term;
            }
        }
        (c, s)
    }

    /// (cos, sin) of 2πk/n.
    fn root(&self, k: u32, n: u32) -> (BigInt, BigInt) {
        // 4k = m n + t with |t| ≤ n/2, so 2πk/n = mπ/2 + πt/(2n)
        let (k, n) = (k as i64, n as i64);
        let m = (4 * k + n / 2).div_euclid(n);
        let t = 4 * k - m * n;
        let x = (&self.pi * t) / (2 * n);
        let (c, s) = self.cos_sin_small(&x);
        match m.rem_euclid(4) {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        }
    }

    /// Bound on the error of `root`, in units of 2^-bits.
    fn root_error(&self) -> BigInt {
        BigInt::from(64 * (self.bits + 64))
    }
}

/// Enclosures (centre, radius) for the real and imaginary parts of the
/// numerator sum, all scaled by 2^bits.
fn enclose(x: &Cyclotomic, bits: u64) -> (BigInt, BigInt, BigInt) {
    let n = x.conductor();
    let (num, _) = x.raw();
    let fx = Fixed::new(bits);
    let l = layout(n);
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    let mut mass = BigInt::zero();
    for idx in num.nonzero() {
        let c = num.get(idx);
        let (co, si) = fx.root(l.exps[idx], n);
        re += &c * co;
        im += &c * si;
        mass += c.abs();
    }
    (re, im, mass * fx.root_error())
}

static START_BITS: AtomicU64 = AtomicU64::new(DEFAULT_START_BITS);

pub const DEFAULT_START_BITS: u64 = 64;

/// Precision at which [`real_sign`] starts refining, process-wide.
pub fn set_sign_start_bits(bits: u64) {
    START_BITS.store(bits.max(16), Ordering::Relaxed);
}

pub fn sign_start_bits() -> u64 {
    START_BITS.load(Ordering::Relaxed)
}

pub fn real_sign(x: &Cyclotomic) -> Result<Sign, CycloError> {
    real_sign_with(x, sign_start_bits())
}

/// Sign of a real element, starting the refinement at `start_bits`.
pub fn real_sign_with(x: &Cyclotomic, start_bits: u64) -> Result<Sign, CycloError> {
    if !x.is_real() {
        return Err(CycloError::NotReal);
    }
    if x.is_zero() {
        return Ok(Sign::Zero);
    }
    if let Some(q) = x.to_rational() {
        return Ok(if q.is_positive() { Sign::Positive } else { Sign::Negative });
    }
    let mut bits = start_bits.max(16);
    loop {
        let (re, _, err) = enclose(x, bits + 32);
        if re.abs() > err {
            // the denominator is positive
            return Ok(if re.is_positive() { Sign::Positive } else { Sign::Negative });
        }
        bits *= 2;
    }
}

/// Complex value at `bits` of working precision.
pub fn embed(x: &Cyclotomic, bits: u64) -> (f64, f64) {
    let bits = bits.max(16) + 32;
    let (re, im, _) = enclose(x, bits);
    let den = x.raw().1.to_f64().unwrap_or(f64::INFINITY);
    let scale = |v: BigInt| -> f64 {
        // drop to ~60 significant bits before converting
        let extra = v.bits().saturating_sub(60);
        let head = (v >> extra).to_f64().unwrap_or(0.0);
        head * 2f64.powi(extra as i32 - bits as i32) / den
    };
    (scale(re), scale(im))
}

/// Plain double-precision evaluation, for diagnostics and oracles.
pub fn embed_f64(x: &Cyclotomic) -> (f64, f64) {
    let n = x.conductor();
    let (num, den) = x.raw();
    let l = layout(n);
    let den = den.to_f64().unwrap_or(f64::INFINITY);
    let mut re = 0.0;
    let mut im = 0.0;
    for idx in num.nonzero() {
        let c = num.get_f64(idx);
        let a = std::f64::consts::TAU * l.exps[idx] as f64 / n as f64;
        re += c * a.cos();
        im += c * a.sin();
    }
    (re / den, im / den)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn pi_digits() {
        let f = Fixed::new(200);
        let approx = f.pi.to_f64().unwrap() / 2f64.powi(200);
        assert!((approx - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn signs_of_small_reals() {
        // 2cos(2π/5) = (√5 - 1)/2 > 0, 2cos(4π/5) < 0
        assert_eq!(real_sign(&(z(5, 1) + z(5, 4))).unwrap(), Sign::Positive);
        assert_eq!(real_sign(&(z(5, 2) + z(5, 3))).unwrap(), Sign::Negative);
        assert_eq!(real_sign(&Cyclotomic::zero()).unwrap(), Sign::Zero);
        assert!(real_sign(&z(4, 1)).is_err());
        // √2 - 1.4142 > 0 ; √2 - 1.4143 < 0
        let s2 = z(8, 1) + z(8, 7);
        assert_eq!(real_sign(&(&s2 - &Cyclotomic::from_ratio(14142, 10000))).unwrap(), Sign::Positive);
        assert_eq!(real_sign(&(&s2 - &Cyclotomic::from_ratio(14143, 10000))).unwrap(), Sign::Negative);
    }

    #[test]
    fn tiny_differences_need_refinement() {
        // (1+√2)^40 is within 2^-100 of an integer from above? use the
        // conjugate: (1-√2)^40 = a - b√2 > 0 but tiny
        let s2 = z(8, 1) + z(8, 7);
        let t = (Cyclotomic::one() - s2).pow(40);
        assert_eq!(real_sign(&t).unwrap(), Sign::Positive);
        assert_eq!(real_sign(&-t).unwrap(), Sign::Negative);
    }

    #[test]
    fn embedding_matches_f64() {
        let x = z(7, 1) + z(7, 3).scale(3) - Cyclotomic::from_ratio(1, 3);
        let (a, b) = embed(&x, 80);
        let (c, d) = embed_f64(&x);
        assert!((a - c).abs() < 1e-12 && (b - d).abs() < 1e-12);
    }
}
