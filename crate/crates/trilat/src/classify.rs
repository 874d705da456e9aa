//! Isometry classification, projective orders and braid relations.
//!
//! Everything is projective: a matrix stands for its class in PU(2,1).

use std::fmt;

use cyclo::{real_sign, Cyclotomic, Sign};
use serde::Serialize;

use crate::catalog::GroupInstance;
use crate::forms::{HermitianForm, Mat3, Position, Vec3};
use crate::words::Word;
use crate::TrilatError;

type C = Cyclotomic;

pub const DEFAULT_ORDER_CAP: u32 = 200;

/// Projective order of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
    /// Elliptic, but no power up to the cap was scalar.
    AboveCap(u32),
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("inf"),
            Order::AboveCap(c) => write!(f, ">{c}"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Scalar matrix: the identity of PU(2,1).
    Trivial,
    RegularElliptic,
    ComplexReflection { mirror_polar: Vec3, multiplier: C },
    PointReflection { fixed: Vec3 },
    Parabolic,
    Loxodromic,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Trivial => "trivial",
            Kind::RegularElliptic => "regular_elliptic",
            Kind::ComplexReflection { .. } => "complex_reflection",
            Kind::PointReflection { .. } => "point_reflection",
            Kind::Parabolic => "parabolic",
            Kind::Loxodromic => "loxodromic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryClass {
    pub kind: Kind,
    pub order: Order,
}

impl IsometryClass {
    pub fn mirror_polar(&self) -> Option<&Vec3> {
        match &self.kind {
            Kind::ComplexReflection { mirror_polar, .. } => Some(mirror_polar),
            _ => None,
        }
    }
}

impl Serialize for IsometryClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("kind", self.kind.name())?;
        m.serialize_entry("order", &self.order)?;
        match &self.kind {
            Kind::ComplexReflection { mirror_polar, multiplier } => {
                m.serialize_entry("mirror", mirror_polar)?;
                m.serialize_entry("multiplier", &multiplier.to_string())?;
            }
            Kind::PointReflection { fixed } => m.serialize_entry("fixed", fixed)?,
            _ => {}
        }
        m.end()
    }
}

/// Smallest k ≤ cap with m^k scalar.
pub fn projective_order(m: &Mat3, cap: u32) -> Option<u32> {
    let mut acc = m.clone();
    for k in 1..=cap {
        if acc.is_scalar() {
            return Some(k);
        }
        acc = &acc * m;
    }
    None
}

fn elliptic_order(m: &Mat3, cap: u32) -> Order {
    projective_order(m, cap).map_or(Order::AboveCap(cap), Order::Finite)
}

fn re(x: &C) -> C {
    &(x + &x.conjugate()) * &C::from_ratio(1, 2)
}

/// Goldman's discriminant |t|⁴ − 8 Re(t³ δ̄) + 18|t|² − 27 for trace t and
/// unimodular determinant δ. Positive: loxodromic; negative: regular
/// elliptic; zero: a repeated eigenvalue.
pub fn goldman_discriminant(m: &Mat3) -> C {
    let t = m.trace();
    let d = m.det();
    let t2 = t.abs_sq();
    let t3 = &(&t * &t) * &t;
    &(&(&(&t2 * &t2) - &re(&(&t3 * &d.conjugate())).scale(8)) + &t2.scale(18)) - &C::from_integer(27)
}

fn rank(m: &Mat3) -> usize {
    if m.0.iter().flatten().all(C::is_zero) {
        return 0;
    }
    if m.adjugate().0.iter().flatten().all(C::is_zero) {
        return 1;
    }
    if m.det().is_zero() {
        2
    } else {
        3
    }
}

/// Exact classification of an isometry of the form.
pub fn classify(m: &Mat3, h: &HermitianForm) -> Result<IsometryClass, TrilatError> {
    classify_with_cap(m, h, DEFAULT_ORDER_CAP)
}

pub fn classify_with_cap(m: &Mat3, h: &HermitianForm, cap: u32) -> Result<IsometryClass, TrilatError> {
    let det = m.det();
    if det.is_zero() {
        return Err(TrilatError::Singular);
    }
    // group elements preserve H exactly, no rescaling needed
    if !h.preserves(m) {
        return Err(TrilatError::Degenerate("matrix does not preserve the form".into()));
    }
    if m.is_scalar() {
        return Ok(IsometryClass { kind: Kind::Trivial, order: Order::Finite(1) });
    }
    let f = goldman_discriminant(m);
    match real_sign(&f)? {
        Sign::Positive => return Ok(IsometryClass { kind: Kind::Loxodromic, order: Order::Infinite }),
        Sign::Negative => return Ok(IsometryClass { kind: Kind::RegularElliptic, order: elliptic_order(m, cap) }),
        Sign::Zero => {}
    }
    // characteristic polynomial x³ + a x² + b x + c
    let a = -&m.trace();
    let b = m.minor_sum();
    let c = -&det;
    let disc = &(&a * &a) - &b.scale(3);
    if disc.is_zero() {
        // triple eigenvalue and not scalar
        return Ok(IsometryClass { kind: Kind::Parabolic, order: Order::Infinite });
    }
    let lambda = (&c.scale(9) - &(&a * &b)).checked_div(&disc.scale(2))?;
    let n = m - &Mat3::scalar(lambda.clone());
    match rank(&n) {
        1 => {
            let u = (0..3).map(|j| n.col(j)).find(|v| !v.is_zero()).expect("rank one");
            let zeta = det.checked_div(&lambda.pow(3))?;
            let order = elliptic_order(m, cap);
            match h.point_position(&u)? {
                Position::Positive => Ok(IsometryClass {
                    kind: Kind::ComplexReflection { mirror_polar: u, multiplier: zeta },
                    order,
                }),
                Position::Negative => Ok(IsometryClass { kind: Kind::PointReflection { fixed: u }, order }),
                Position::Null => Err(TrilatError::Inconsistent(
                    "diagonalizable isometry with a null eigenvector off its eigenplane".into(),
                )),
            }
        }
        2 => Ok(IsometryClass { kind: Kind::Parabolic, order: Order::Infinite }),
        r => Err(TrilatError::Inconsistent(format!("repeated eigenvalue with eigenspace of codimension {r}"))),
    }
}

/// Projective order, using the classification to short-cut parabolic and
/// loxodromic elements.
pub fn order(m: &Mat3, h: &HermitianForm, cap: u32) -> Result<Order, TrilatError> {
    Ok(classify_with_cap(m, h, cap)?.order)
}

/// Alternating product a b a b ... with `n` factors.
fn alternating(a: &Mat3, b: &Mat3, n: u32) -> Mat3 {
    let mut acc = Mat3::identity();
    for k in 0..n {
        acc = &acc * if k % 2 == 0 { a } else { b };
    }
    acc
}

/// br_n(a, b) holds projectively.
pub fn braid_holds(a: &Mat3, b: &Mat3, n: u32) -> bool {
    alternating(a, b, n).proj_eq(&alternating(b, a, n))
}

/// Least n ≤ nmax with br_n(a, b).
pub fn braids(a: &Mat3, b: &Mat3, nmax: u32) -> Option<u32> {
    let mut ab = Mat3::identity();
    let mut ba = Mat3::identity();
    for n in 1..=nmax {
        let odd = n % 2 == 1;
        ab = &ab * if odd { a } else { b };
        ba = &ba * if odd { b } else { a };
        if ab.proj_eq(&ba) {
            return Some(n);
        }
    }
    None
}

/// Central element of a braiding pair of reflections, checked against the
/// position of the box product of their polars.
#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub n: u32,
    #[serde(skip)]
    pub z: Mat3,
    pub class: IsometryClass,
    pub box_position: Position,
    pub agrees: bool,
    pub note: Option<String>,
}

pub fn center_element(a: &Mat3, b: &Mat3, n: u32, h: &HermitianForm) -> Result<CenterReport, TrilatError> {
    if n == 0 || !braid_holds(a, b, n) {
        return Err(TrilatError::Inconsistent(format!("br_{n} does not hold")));
    }
    let polar = |m: &Mat3| -> Result<Vec3, TrilatError> {
        match classify(m, h)?.kind {
            Kind::ComplexReflection { mirror_polar, .. } => Ok(mirror_polar),
            k => Err(TrilatError::Degenerate(format!("expected a complex reflection, got {}", k.name()))),
        }
    };
    let (ua, ub) = (polar(a)?, polar(b)?);
    if ua.proportional(&ub) {
        return Err(TrilatError::Degenerate("reflections share a mirror".into()));
    }
    let ab = a * b;
    let z = if n % 2 == 1 { ab.pow(n) } else { ab.pow(n / 2) };
    for (m, name) in [(a, "a"), (b, "b")] {
        if !(&z * m).proj_eq(&(m * &z)) {
            return Err(TrilatError::Inconsistent(format!("center element does not commute with {name}")));
        }
    }
    let x = h.boxprod(&ua, &ub)?;
    let pos = h.point_position(&x)?;
    let class = classify(&z, h)?;
    let (agrees, note) = match (&class.kind, pos) {
        (Kind::Trivial, Position::Positive | Position::Negative) => {
            (true, Some("center element is scalar; the trichotomy holds degenerately".to_string()))
        }
        (Kind::ComplexReflection { mirror_polar, .. }, Position::Positive) => (mirror_polar.proportional(&x), None),
        (Kind::PointReflection { fixed }, Position::Negative) => (fixed.proportional(&x), None),
        (Kind::Parabolic, Position::Null) => ((&z * &x).proportional(&x), None),
        (k, p) => (false, Some(format!("{} center element but box product is {:?}", k.name(), p))),
    };
    Ok(CenterReport { n, z, class, box_position: pos, agrees, note })
}

/// For odd n with br_n(a, b): the word k = (ab)^((n-1)/2) with
/// b = k a k⁻¹, verified projectively.
pub fn reflection_conjugacy_witness(g: &GroupInstance, a: &Word, b: &Word, n: u32) -> Result<Word, TrilatError> {
    if n % 2 == 0 {
        return Err(TrilatError::Degenerate(format!("braid length {n} is even")));
    }
    let k = if n == 1 { Word::identity() } else { a.concat(b).pow(((n - 1) / 2) as i64) };
    let am = a.evaluate(g)?;
    let bm = b.evaluate(g)?;
    let km = k.evaluate(g)?;
    let conj = &(&km * &am) * &km.inverse()?;
    if !conj.proj_eq(&bm) {
        return Err(TrilatError::Inconsistent(format!("{b} is not ({k}) {a} ({k})^-1")));
    }
    Ok(k)
}
