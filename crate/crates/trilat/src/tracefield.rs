//! Q(Tr Γ²) of a mirror stabilizer and the arithmeticity of triangle groups.
//!
//! For a restricted matrix M, tr(M)²/det(M) equals tr(γ)² for the
//! determinant-one lift γ, so the samples generate the tr² field without
//! square roots.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use cyclo::{embed_f64, euler_phi, units, Cyclotomic, FieldDescriptor};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::catalog::{Arith, GroupInstance, StabilizerRow};
use crate::stabilizer::{self, Ball, ConeOrder, FuchsianSignature, Mat2};
use crate::words::Word;
use crate::TrilatError;

type C = Cyclotomic;

/// A field as written in the tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldClaim {
    Rationals,
    /// Q(√d1, √d2, ...)
    Sqrt(Vec<i64>),
    /// Q(cos 2π/n)
    Cos(u32),
    /// Q(√((a + √b)/d))
    NestedSqrt { a: i64, b: i64, d: i64 },
}

impl FieldClaim {
    pub fn parse(s: &str) -> Result<FieldClaim, TrilatError> {
        let err = || TrilatError::Parse { pos: 0, msg: format!("unrecognised field {s:?}") };
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldClaim::Rationals);
        }
        let inner = s.strip_prefix("Q(").and_then(|t| t.strip_suffix(')')).ok_or_else(err)?;
        if let Some(n) = inner.strip_prefix("cos(2pi/").and_then(|t| t.strip_suffix(')')) {
            let n: u32 = n.parse().map_err(|_| err())?;
            return if n >= 3 { Ok(FieldClaim::Cos(n)) } else { Err(err()) };
        }
        if let Some(body) = inner.strip_prefix("sqrt((").and_then(|t| t.strip_suffix(')')) {
            let (num, d) = body.split_once(")/").ok_or_else(err)?;
            let (a, b) = num.split_once("+sqrt").ok_or_else(err)?;
            let parse = |x: &str| x.parse::<i64>().map_err(|_| err());
            let (a, b, d) = (parse(a)?, parse(b)?, parse(d)?);
            if d <= 0 || b <= 1 {
                return Err(err());
            }
            return Ok(FieldClaim::NestedSqrt { a, b, d });
        }
        let ds = inner
            .split(',')
            .map(|t| t.trim().strip_prefix("sqrt").and_then(|x| x.parse::<i64>().ok()).filter(|&d| d != 0 && d != 1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(err)?;
        Ok(FieldClaim::Sqrt(ds))
    }

    /// Degree over Q, assuming the named square roots are independent.
    pub fn degree(&self) -> u32 {
        match self {
            FieldClaim::Rationals => 1,
            FieldClaim::Sqrt(ds) => 1 << ds.len(),
            FieldClaim::Cos(n) => (euler_phi(*n) / 2).max(1),
            FieldClaim::NestedSqrt { .. } => 4,
        }
    }

    /// Quadratic and biquadratic claims are decided exactly; the others
    /// are reported as findings.
    pub fn is_multiquadratic(&self) -> bool {
        matches!(self, FieldClaim::Rationals | FieldClaim::Sqrt(_))
    }
}

impl fmt::Display for FieldClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldClaim::Rationals => f.write_str("Q"),
            FieldClaim::Sqrt(ds) => {
                let parts: Vec<String> = ds.iter().map(|d| format!("sqrt{d}")).collect();
                write!(f, "Q({})", parts.join(","))
            }
            FieldClaim::Cos(n) => write!(f, "Q(cos(2pi/{n}))"),
            FieldClaim::NestedSqrt { a, b, d } => write!(f, "Q(sqrt(({a}+sqrt{b})/{d}))"),
        }
    }
}

impl FromStr for FieldClaim {
    type Err = TrilatError;
    fn from_str(s: &str) -> Result<Self, TrilatError> {
        FieldClaim::parse(s)
    }
}

impl Serialize for FieldClaim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldClaim {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceSample {
    pub word: Word,
    #[serde(serialize_with = "ser_display")]
    pub trace_sq: C,
}

fn ser_display<S: serde::Serializer>(x: &C, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// The field generated by a growing set of elements.
#[derive(Clone, Debug)]
pub struct FieldAccumulator {
    gens: Vec<C>,
    field: FieldDescriptor,
}

impl Default for FieldAccumulator {
    fn default() -> Self {
        FieldAccumulator { gens: vec![], field: FieldDescriptor::rationals() }
    }
}

impl FieldAccumulator {
    pub fn add(&mut self, x: &C) -> Result<bool, TrilatError> {
        if x.is_rational() || self.field.contains(x) {
            return Ok(false);
        }
        self.gens.push(x.clone());
        self.field = FieldDescriptor::generated_by(&self.gens)?;
        Ok(true)
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn generators(&self) -> &[C] {
        &self.gens
    }
}

#[derive(Clone, Debug)]
pub struct TraceFieldResult {
    pub field: FieldDescriptor,
    /// degree after each word length
    pub degrees: Vec<u32>,
    pub stabilized: bool,
    pub samples: usize,
    pub generators: Vec<TraceSample>,
}

/// Field of tr²/det over a ball of restricted matrices.
pub fn field_of_ball(ball: &Ball, words: &[Word]) -> Result<TraceFieldResult, TrilatError> {
    let mut acc = FieldAccumulator::default();
    let mut degrees = Vec::new();
    let mut generators = Vec::new();
    let mut samples = 0;
    for level in &ball.levels {
        for e in level {
            if !e.t.is_real() {
                return Err(TrilatError::Invariant(format!("trace sample {} is not real", e.t)));
            }
            samples += 1;
            if acc.add(&e.t)? {
                generators.push(TraceSample { word: stabilizer::ball_word(words, &e.word), trace_sq: e.t.clone() });
            }
        }
        degrees.push(acc.field().degree);
    }
    let n = degrees.len();
    let stabilized = n >= 2 && degrees[n - 1] == degrees[n - 2];
    Ok(TraceFieldResult { field: acc.field().clone(), degrees, stabilized, samples, generators })
}

/// Q(Tr Γ²) for the stabilizer of the mirror of `mirror`, generated by
/// `generators`, from words up to `max_len`.
pub fn trace_field(
    g: &GroupInstance,
    mirror: &Word,
    pair: Option<&[Word; 2]>,
    generators: &[Word],
    max_len: usize,
    per_level: usize,
) -> Result<TraceFieldResult, TrilatError> {
    let (polar, _) = stabilizer::row_mirror_polar(g, mirror, pair)?;
    let f = stabilizer::frame(&g.form, &polar)?;
    let restricted = generators
        .iter()
        .map(|w| stabilizer::restrict(&w.evaluate(g)?, &f))
        .collect::<Result<Vec<Mat2>, _>>()?;
    let ball = Ball::build(&restricted, max_len, per_level)?;
    field_of_ball(&ball, generators)
}

pub fn row_trace_field(g: &GroupInstance, row: &StabilizerRow, max_len: usize, per_level: usize) -> Result<TraceFieldResult, TrilatError> {
    trace_field(g, &row.reflection_word, row.pair.as_ref(), &row.generator_words, max_len, per_level)
}

/// Outcome of comparing a computed field with a claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    pub degree_matches: bool,
    /// membership of the named generators; None when not decided
    pub generators_inside: Option<bool>,
    pub notes: String,
}

impl ClaimCheck {
    pub fn holds(&self) -> bool {
        self.degree_matches && self.generators_inside != Some(false)
    }
}

pub fn check_claim(field: &FieldDescriptor, claim: &FieldClaim) -> Result<ClaimCheck, TrilatError> {
    let degree_matches = field.degree == claim.degree();
    Ok(match claim {
        FieldClaim::Rationals => ClaimCheck { degree_matches, generators_inside: Some(true), notes: String::new() },
        FieldClaim::Sqrt(ds) => {
            let mut missing = Vec::new();
            for &d in ds {
                if !field.contains_sqrt(d)? {
                    missing.push(format!("sqrt{d}"));
                }
            }
            let notes = if missing.is_empty() { String::new() } else { format!("missing {}", missing.join(", ")) };
            ClaimCheck { degree_matches, generators_inside: Some(missing.is_empty()), notes }
        }
        FieldClaim::Cos(n) => {
            let z = C::root_of_unity(*n, 1);
            let c = &z + &z.conjugate();
            let inside = field.contains(&c);
            ClaimCheck {
                degree_matches,
                generators_inside: Some(inside),
                notes: if inside { String::new() } else { format!("2cos(2pi/{n}) not in the field") },
            }
        }
        FieldClaim::NestedSqrt { a, b, d } => {
            let radicand = (&C::from_integer(*a) + &cyclo::sqrt_of_integer(*b)?).checked_div(&C::from_integer(*d))?;
            if !field.contains(&radicand) {
                return Ok(ClaimCheck {
                    degree_matches,
                    generators_inside: Some(false),
                    notes: "the radicand is not in the field".into(),
                });
            }
            match sqrt_in_field(field, &radicand)? {
                Some(x) => ClaimCheck { degree_matches, generators_inside: Some(true), notes: format!("square root {x}") },
                None => ClaimCheck {
                    degree_matches,
                    generators_inside: None,
                    notes: "radicand lies in the field; no square root found by the numerical search".into(),
                },
            }
        }
    })
}

/// One representative k per coset of the fixing group: the embeddings of
/// the field.
fn embeddings(field: &FieldDescriptor) -> Vec<u32> {
    let n = field.conductor.max(1);
    let fix: BTreeSet<u32> = field.fixing_set.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for k in units(n) {
        if seen.contains(&k) {
            continue;
        }
        reps.push(k);
        for &h in &fix {
            seen.insert(((k as u64 * h as u64) % n as u64) as u32);
        }
    }
    reps
}

fn rational_near(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    // continued fraction convergents
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if ((h1 as f64) / (k1 as f64) - x).abs() < 1e-9 * x.abs().max(1.0) || frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 != 0).then(|| BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Square root of `a` inside a totally real field, found numerically and
/// confirmed exactly.
pub fn sqrt_in_field(field: &FieldDescriptor, a: &C) -> Result<Option<C>, TrilatError> {
    let deg = field.degree as usize;
    let emb = embeddings(field);
    if emb.len() != deg || deg > 8 {
        return Ok(None);
    }
    // a primitive element from the cyclotomic generators of the field
    let n = field.conductor;
    let mut theta = None;
    'search: for j in 1..n as i64 {
        let z = C::root_of_unity(n, j);
        let mut cand = C::zero();
        for &h in &field.fixing_set {
            cand += &z.galois(h as i64);
        }
        let vals: Vec<f64> = emb.iter().map(|&k| embed_f64(&cand.galois(k as i64)).0).collect();
        for i in 0..deg {
            for l in 0..i {
                if (vals[i] - vals[l]).abs() < 1e-6 {
                    continue 'search;
                }
            }
        }
        theta = Some(cand);
        break;
    }
    let Some(theta) = theta else { return Ok(None) };
    let th: Vec<(f64, f64)> = emb.iter().map(|&k| embed_f64(&theta.galois(k as i64))).collect();
    let av: Vec<(f64, f64)> = emb.iter().map(|&k| embed_f64(&a.galois(k as i64))).collect();
    if th.iter().chain(&av).any(|z| z.1.abs() > 1e-9) || av.iter().any(|z| z.0 < 0.0) {
        return Ok(None);
    }
    let powers: Vec<C> = (0..deg as u32).map(|i| theta.pow(i)).collect();
    for signs in 0u32..(1 << (deg - 1)) {
        let rhs: Vec<f64> = av
            .iter()
            .enumerate()
            .map(|(i, z)| if i > 0 && signs >> (i - 1) & 1 == 1 { -z.0.sqrt() } else { z.0.sqrt() })
            .collect();
        let m: Vec<Vec<f64>> = th.iter().map(|t| (0..deg).map(|i| t.0.powi(i as i32)).collect()).collect();
        let Some(coef) = solve(m, rhs) else { continue };
        let mut x = C::zero();
        let mut ok = true;
        for (c, p) in coef.iter().zip(&powers) {
            match rational_near(*c, 1 << 20) {
                Some(q) => x += &(&C::from_rational(&q) * p),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && &x * &x == *a {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    Some(x)
}

/// Arithmetic hyperbolic triangle groups, as sorted cone orders; 0 is ∞.
pub const ARITHMETIC_TRIANGLES: [[u32; 3]; 85] = [
    [2, 3, 7], [2, 3, 8], [2, 3, 9], [2, 3, 10], [2, 3, 11], [2, 3, 12], [2, 3, 14], [2, 3, 16], [2, 3, 18],
    [2, 3, 24], [2, 3, 30], [2, 3, 0], [2, 4, 5], [2, 4, 6], [2, 4, 7], [2, 4, 8], [2, 4, 10], [2, 4, 12],
    [2, 4, 18], [2, 4, 0], [2, 5, 5], [2, 5, 6], [2, 5, 8], [2, 5, 10], [2, 5, 20], [2, 5, 30], [2, 6, 6],
    [2, 6, 8], [2, 6, 12], [2, 6, 0], [2, 7, 7], [2, 7, 14], [2, 8, 8], [2, 8, 16], [2, 9, 18], [2, 10, 10],
    [2, 12, 12], [2, 12, 24], [2, 15, 30], [2, 18, 18], [2, 0, 0], [3, 3, 4], [3, 3, 5], [3, 3, 6], [3, 3, 7],
    [3, 3, 8], [3, 3, 9], [3, 3, 12], [3, 3, 15], [3, 3, 0], [3, 4, 4], [3, 4, 6], [3, 4, 12], [3, 5, 5],
    [3, 6, 6], [3, 6, 18], [3, 8, 8], [3, 8, 24], [3, 10, 30], [3, 12, 12], [3, 0, 0], [4, 4, 4], [4, 4, 5],
    [4, 4, 6], [4, 4, 9], [4, 4, 0], [4, 5, 5], [4, 6, 6], [4, 8, 8], [4, 16, 16], [5, 5, 5], [5, 5, 10],
    [5, 5, 15], [5, 10, 10], [6, 6, 6], [6, 6, 0], [6, 12, 12], [6, 24, 24], [7, 7, 7], [8, 8, 8], [9, 9, 9],
    [9, 18, 18], [12, 12, 12], [15, 15, 15], [0, 0, 0],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleArith {
    Arithmetic,
    NonArithmetic,
    NotApplicable,
}

impl TriangleArith {
    pub fn agrees(self, claim: Arith) -> Option<bool> {
        match self {
            TriangleArith::Arithmetic => Some(claim == Arith::A),
            TriangleArith::NonArithmetic => Some(claim == Arith::NA),
            TriangleArith::NotApplicable => None,
        }
    }
}

fn sort_key(o: ConeOrder) -> u32 {
    match o {
        ConeOrder::Finite(k) => k,
        ConeOrder::Infinite => u32::MAX,
    }
}

pub fn takeuchi_triangle_check(sig: &FuchsianSignature) -> TriangleArith {
    let Some(t) = sig.triangle() else { return TriangleArith::NotApplicable };
    let key = t.map(sort_key);
    let listed = ARITHMETIC_TRIANGLES.iter().any(|row| {
        let mut r = row.map(|k| if k == 0 { u32::MAX } else { k });
        r.sort();
        r == key
    });
    if listed {
        TriangleArith::Arithmetic
    } else {
        TriangleArith::NonArithmetic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Catalog, Family};

    #[test]
    fn claims_round_trip() {
        for s in ["Q", "Q(sqrt2,sqrt7)", "Q(cos(2pi/15))", "Q(sqrt((5+sqrt5)/14))", "Q(sqrt21)"] {
            assert_eq!(FieldClaim::parse(s).unwrap().to_string(), s);
        }
        for s in ["", "Q(sqrt1)", "Q(cos(2pi/2))", "Q(sqrt((5+sqrt5)/0))", "R"] {
            assert!(FieldClaim::parse(s).is_err(), "{s}");
        }
        assert_eq!(FieldClaim::parse("Q(cos(2pi/7))").unwrap().degree(), 3);
    }

    #[test]
    fn sigma1_r1_field() {
        let g = Catalog::embedded().unwrap().build(Family::S, "sigma1", 3).unwrap();
        let gens: Vec<Word> = ["(12)^3", "(123~2)^2", "(1232~3~2)^3"].iter().map(|s| s.parse().unwrap()).collect();
        let r = trace_field(&g, &"1".parse().unwrap(), None, &gens, 6, 100).unwrap();
        let c = check_claim(&r.field, &FieldClaim::Sqrt(vec![6])).unwrap();
        assert!(c.holds(), "{:?} {:?}", r.field, c);
        assert!(r.stabilized);
    }

    #[test]
    fn one_elliptic_generator() {
        // a rotation by 2π/7 gives Q(cos 2π/7)
        let z = C::root_of_unity(7, 1);
        let m = Mat2([[z.clone(), C::zero()], [C::zero(), C::one()]]);
        let ball = Ball::build(&[m], 8, 50).unwrap();
        let r = field_of_ball(&ball, &["1".parse().unwrap()]).unwrap();
        assert!(check_claim(&r.field, &FieldClaim::Cos(7)).unwrap().holds());
    }

    #[test]
    fn nested_radical() {
        let a = (&C::from_integer(5) + &cyclo::sqrt_of_integer(5).unwrap()).checked_div(&C::from_integer(2)).unwrap();
        // (5+√5)/2 = (2cos(π/10)·... )²-type: its root lies in Q(ζ20)⁺
        let f = FieldDescriptor::generated_by([&a]).unwrap();
        assert_eq!(f.degree, 2);
        let z = C::root_of_unity(20, 1);
        let big = FieldDescriptor::generated_by([&(&z + &z.conjugate())]).unwrap();
        let x = sqrt_in_field(&big, &a).unwrap().expect("root exists");
        assert_eq!(&x * &x, a);
        assert_eq!(sqrt_in_field(&big, &C::from_integer(3)).unwrap(), None);
    }

    #[test]
    fn takeuchi_examples() {
        let s = |t: &str| FuchsianSignature::parse(t).unwrap();
        assert_eq!(takeuchi_triangle_check(&s("(0;2,3,8)")), TriangleArith::Arithmetic);
        assert_eq!(takeuchi_triangle_check(&s("(0;8,3,2)")), TriangleArith::Arithmetic);
        assert_eq!(takeuchi_triangle_check(&s("(0;4,5,12)")), TriangleArith::NonArithmetic);
        assert_eq!(takeuchi_triangle_check(&s("(0;inf,inf,inf)")), TriangleArith::Arithmetic);
        assert_eq!(takeuchi_triangle_check(&s("(0;2,2,6,6)")), TriangleArith::NotApplicable);
        assert_eq!(takeuchi_triangle_check(&s("(1;2)")), TriangleArith::NotApplicable);
    }
}
