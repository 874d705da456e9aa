//! Mirror stabilizers: restriction to a mirror, rotation orders, Fuchsian
//! signatures, vertex cycles and side vertices.
//!
//! Restricted maps are 2×2 matrices in a basis of the mirror, kept up to
//! scalar. The scalar-free invariant t = tr²/det decides everything:
//! t = 4 cos²(θ/2) for a rotation by θ, t = 4 for parabolics, t > 4 for
//! hyperbolics.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use cyclo::{embed_f64, real_sign, Cyclotomic, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::catalog::{CycleData, GroupInstance, SideDescriptor, StabilizerRow};
use crate::classify::{self, Kind, Order};
use crate::forms::{inertia, HermitianForm, Mat3, Position, Signature, Vec3};
use crate::report::{Check, Status};
use crate::words::Word;
use crate::TrilatError;

type C = Cyclotomic;

/// Cone point order; `Infinite` marks a cusp.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConeOrder {
    Finite(u32),
    Infinite,
}

impl fmt::Display for ConeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeOrder::Finite(k) => write!(f, "{k}"),
            ConeOrder::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ConeOrder {
    type Err = TrilatError;
    fn from_str(s: &str) -> Result<ConeOrder, TrilatError> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(ConeOrder::Infinite);
        }
        match s.parse::<u32>() {
            Ok(k) if k >= 1 => Ok(ConeOrder::Finite(k)),
            _ => Err(TrilatError::Parse { pos: 0, msg: format!("bad order {s:?}") }),
        }
    }
}

impl Serialize for ConeOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConeOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<ConeOrder, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl From<Order> for Option<ConeOrder> {
    fn from(o: Order) -> Option<ConeOrder> {
        match o {
            Order::Finite(k) => Some(ConeOrder::Finite(k)),
            Order::Infinite => Some(ConeOrder::Infinite),
            Order::AboveCap(_) => None,
        }
    }
}

/// (g; m1, ..., mk) with ∞ allowed among the m_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuchsianSignature {
    pub genus: u32,
    pub cone_orders: Vec<ConeOrder>,
}

impl FuchsianSignature {
    pub fn parse(s: &str) -> Result<FuchsianSignature, TrilatError> {
        let err = |msg: &str| TrilatError::Parse { pos: 0, msg: format!("signature {s:?}: {msg}") };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| err("expected parentheses"))?;
        let (g, rest) = match inner.split_once(';') {
            Some((g, r)) => (g, Some(r)),
            None => (inner, None),
        };
        let genus = g.trim().parse::<u32>().map_err(|_| err("bad genus"))?;
        let mut cone_orders = Vec::new();
        if let Some(r) = rest {
            for part in r.split(',') {
                let o: ConeOrder = part.parse().map_err(|_| err("bad cone order"))?;
                if o == ConeOrder::Finite(1) {
                    return Err(err("cone orders are at least 2"));
                }
                cone_orders.push(o);
            }
        }
        Ok(FuchsianSignature { genus, cone_orders })
    }

    /// 2 − 2g − Σ (1 − 1/m), with 1/∞ = 0.
    pub fn chi(&self) -> BigRational {
        let mut x = BigRational::from_integer(BigInt::from(2) - BigInt::from(2 * self.genus as u64));
        for m in &self.cone_orders {
            x -= BigRational::one();
            if let ConeOrder::Finite(k) = m {
                x += BigRational::new(BigInt::one(), BigInt::from(*k));
            }
        }
        x
    }

    /// Area of the quotient in units of π for curvature −1.
    pub fn area_over_pi(&self) -> BigRational {
        -self.chi() * BigRational::from_integer(BigInt::from(2))
    }

    /// The three cone orders of a genus-0 triangle signature.
    pub fn triangle(&self) -> Option<[ConeOrder; 3]> {
        if self.genus != 0 || self.cone_orders.len() != 3 {
            return None;
        }
        let mut t = [self.cone_orders[0], self.cone_orders[1], self.cone_orders[2]];
        t.sort();
        Some(t)
    }
}

impl fmt::Display for FuchsianSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.genus)?;
        for (i, m) in self.cone_orders.iter().enumerate() {
            f.write_str(if i == 0 { ";" } else { "," })?;
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for FuchsianSignature {
    type Err = TrilatError;
    fn from_str(s: &str) -> Result<Self, TrilatError> {
        FuchsianSignature::parse(s)
    }
}

impl Serialize for FuchsianSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FuchsianSignature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A 2×2 matrix over cyclotomic numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[C; 2]; 2]);

impl Mat2 {
    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &(&self.0[i][0] * &o.0[0][j]) + &(&self.0[i][1] * &o.0[1][j]);
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn det(&self) -> C {
        &(&self.0[0][0] * &self.0[1][1]) - &(&self.0[0][1] * &self.0[1][0])
    }

    pub fn trace(&self) -> C {
        &self.0[0][0] + &self.0[1][1]
    }

    /// Inverse up to the scalar det.
    pub fn adjugate(&self) -> Mat2 {
        let [[a, b], [c, d]] = &self.0;
        Mat2([[d.clone(), -b], [-c, a.clone()]])
    }

    pub fn is_scalar(&self) -> bool {
        self.0[0][1].is_zero() && self.0[1][0].is_zero() && self.0[0][0] == self.0[1][1] && !self.0[0][0].is_zero()
    }

    pub fn proj_eq(&self, o: &Mat2) -> bool {
        let piv = (0..4).map(|k| (k / 2, k % 2)).find(|&(i, j)| !self.0[i][j].is_zero());
        let Some((pi, pj)) = piv else { return false };
        let (a, b) = (&self.0[pi][pj], &o.0[pi][pj]);
        if b.is_zero() {
            return false;
        }
        (0..2).all(|i| (0..2).all(|j| &self.0[i][j] * b == &o.0[i][j] * a))
    }

    /// tr²/det, invariant under scaling.
    pub fn trace_sq_over_det(&self) -> Result<C, TrilatError> {
        let t = self.trace();
        Ok((&t * &t).checked_div(&self.det())?)
    }

    /// Float key that agrees on projectively equal matrices away from
    /// rounding boundaries.
    fn fingerprint(&self) -> [i64; 6] {
        let v: Vec<(f64, f64)> = self.0.iter().flatten().map(embed_f64).collect();
        let norm = |z: &(f64, f64)| z.0.hypot(z.1);
        let big = v.iter().map(norm).fold(0.0, f64::max);
        let piv = v.iter().find(|z| norm(z) > 1e-6 * big).copied().unwrap_or((1.0, 0.0));
        let d = piv.0 * piv.0 + piv.1 * piv.1;
        let mut key = [0i64; 6];
        let mut k = 0;
        for z in &v {
            if *z == piv && k == 0 {
                continue;
            }
            if k >= 6 {
                break;
            }
            let q = ((z.0 * piv.0 + z.1 * piv.1) / d, (z.1 * piv.0 - z.0 * piv.1) / d);
            key[k] = (q.0 * 1e6).round() as i64;
            if k + 1 < 6 {
                key[k + 1] = (q.1 * 1e6).round() as i64;
            }
            k += 2;
        }
        key
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1])
    }
}

/// A mirror with a basis of its orthogonal complement.
#[derive(Clone, Debug)]
pub struct MirrorFrame {
    pub polar: Vec3,
    pub basis: [Vec3; 2],
    pub restricted_form: [[C; 2]; 2],
    /// covector X ↦ ⟨X, polar⟩
    w: Vec3,
    /// pivot coordinate of w, then the two others
    coords: [usize; 3],
}

pub fn frame(h: &HermitianForm, polar: &Vec3) -> Result<MirrorFrame, TrilatError> {
    if h.point_position(polar)? != Position::Positive {
        return Err(TrilatError::Degenerate("mirror polar vector is not positive".into()));
    }
    let uc = polar.conj();
    let w = Vec3(std::array::from_fn(|k| {
        (0..3).fold(C::zero(), |acc, j| &acc + &(&uc.0[j] * &h.matrix.0[j][k]))
    }));
    let p0 = w.pivot().expect("positive vector has nonzero covector");
    let others: Vec<usize> = (0..3).filter(|&k| k != p0).collect();
    let coords = [p0, others[0], others[1]];
    let make = |j: usize| {
        let mut v = Vec3::zero();
        v.0[j] = w.0[p0].clone();
        v.0[p0] = -&w.0[j];
        v
    };
    let basis = [make(coords[1]), make(coords[2])];
    let restricted_form = std::array::from_fn(|i| std::array::from_fn(|j| h.inner(&basis[j], &basis[i])));
    let f = MirrorFrame { polar: polar.clone(), basis, restricted_form, w, coords };
    let sig = inertia(f.restricted_form.iter().map(|r| r.to_vec()).collect())?;
    if sig != (Signature { pos: 1, null: 0, neg: 1 }) {
        return Err(TrilatError::Inconsistent(format!("restricted form has signature {sig}")));
    }
    Ok(f)
}

impl MirrorFrame {
    /// ⟨x, polar⟩ for every basis vector is zero by construction; this
    /// recomputes it.
    pub fn basis_orthogonal(&self, h: &HermitianForm) -> bool {
        self.basis.iter().all(|b| h.inner(b, &self.polar).is_zero())
    }

    fn covector_at(&self, x: &Vec3) -> C {
        (0..3).fold(C::zero(), |acc, k| &acc + &(&self.w.0[k] * &x.0[k]))
    }
}

pub fn stabilizes(m: &Mat3, f: &MirrorFrame) -> bool {
    (m * &f.polar).proportional(&f.polar)
}

/// Induced linear map on the mirror in the frame basis.
pub fn restrict(m: &Mat3, f: &MirrorFrame) -> Result<Mat2, TrilatError> {
    if !stabilizes(m, f) {
        return Err(TrilatError::Degenerate("element does not stabilize the mirror".into()));
    }
    let [p0, j1, j2] = f.coords;
    // basis vector k has w[p0] at coordinate j_k
    let s = f.w.0[p0].inverse()?;
    let img = [m * &f.basis[0], m * &f.basis[1]];
    debug_assert!(img.iter().all(|v| f.covector_at(v).is_zero()));
    let e = |v: &Vec3, j: usize| &v.0[j] * &s;
    Ok(Mat2([[e(&img[0], j1), e(&img[1], j1)], [e(&img[0], j2), e(&img[1], j2)]]))
}

/// How an element acts on a mirror it stabilizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MirrorAction {
    Trivial,
    Elliptic(Order),
    Parabolic,
    Hyperbolic,
}

impl MirrorAction {
    pub fn order(self) -> Option<Order> {
        match self {
            MirrorAction::Trivial => Some(Order::Finite(1)),
            MirrorAction::Elliptic(o) => Some(o),
            MirrorAction::Parabolic => Some(Order::Infinite),
            MirrorAction::Hyperbolic => None,
        }
    }
}

/// Classify from the scalar test and t = tr²/det.
pub fn action_from_invariant(scalar: bool, t: &C, cap: u32) -> Result<MirrorAction, TrilatError> {
    if scalar {
        return Ok(MirrorAction::Trivial);
    }
    if !t.is_real() {
        return Err(TrilatError::Inconsistent(format!("tr²/det = {t} is not real")));
    }
    let four = C::from_integer(4);
    match real_sign(&(t - &four))? {
        Sign::Positive => return Ok(MirrorAction::Hyperbolic),
        Sign::Zero => return Ok(MirrorAction::Parabolic),
        Sign::Negative => {}
    }
    if real_sign(t)? == Sign::Negative {
        return Err(TrilatError::Inconsistent(format!("tr²/det = {t} is negative")));
    }
    // s_k = 2 cos(kθ) by the Chebyshev recursion; the order is the least k with s_k = 2
    let c = t - &C::from_integer(2);
    let two = C::from_integer(2);
    let (mut prev, mut cur) = (two.clone(), c.clone());
    for k in 1..=cap {
        if cur == two {
            return Ok(MirrorAction::Elliptic(Order::Finite(k)));
        }
        let next = &(&c * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(MirrorAction::Elliptic(Order::AboveCap(cap)))
}

pub fn mirror_action(r: &Mat2, cap: u32) -> Result<MirrorAction, TrilatError> {
    if r.is_scalar() {
        return Ok(MirrorAction::Trivial);
    }
    action_from_invariant(false, &r.trace_sq_over_det()?, cap)
}

/// Order of the rotation induced on the mirror; ∞ for parabolic action.
pub fn rotation_order(m: &Mat3, f: &MirrorFrame, cap: u32) -> Result<Order, TrilatError> {
    match mirror_action(&restrict(m, f)?, cap)? {
        MirrorAction::Hyperbolic => Err(TrilatError::Degenerate("element acts on the mirror as a hyperbolic".into())),
        a => Ok(a.order().expect("non-hyperbolic")),
    }
}

/// Polar vector of the mirror of a reflection word.
pub fn reflection_polar(g: &GroupInstance, w: &Word) -> Result<Vec3, TrilatError> {
    let m = w.evaluate(g)?;
    match classify::classify(&m, &g.form)?.kind {
        Kind::ComplexReflection { mirror_polar, .. } => Ok(mirror_polar),
        k => Err(TrilatError::Degenerate(format!("{w} is {} in {}, not a complex reflection", k.name(), g.id()))),
    }
}

/// Polar of a row's mirror: the box product of the pair's polars when a pair
/// is given, else the polar of the reflection word. When both exist they
/// are cross-checked.
pub fn row_mirror_polar(g: &GroupInstance, reflection: &Word, pair: Option<&[Word; 2]>) -> Result<(Vec3, String), TrilatError> {
    let own = reflection_polar(g, reflection);
    match pair {
        None => own.map(|v| (v, format!("polar of {reflection}"))),
        Some([a, b]) => {
            let x = g.form.boxprod(&reflection_polar(g, a)?, &reflection_polar(g, b)?)?;
            if g.form.point_position(&x)? != Position::Positive {
                return Err(TrilatError::Inconsistent(format!("mirrors of {a} and {b} have no common perpendicular")));
            }
            match own {
                Ok(v) if !v.proportional(&x) => Err(TrilatError::Inconsistent(format!(
                    "{reflection} does not fix the common perpendicular of {a} and {b}"
                ))),
                Ok(_) => Ok((x, format!("box of {a} and {b}, equal to the polar of {reflection}"))),
                Err(_) => {
                    let m = reflection.evaluate(g)?;
                    if !m.is_scalar() {
                        return Err(TrilatError::Inconsistent(format!("{reflection} is neither a reflection nor trivial")));
                    }
                    Ok((x, format!("box of {a} and {b}; {reflection} is trivial in {}", g.id())))
                }
            }
        }
    }
}

/// Elements of a finitely generated group of 2×2 matrices, by word length,
/// deduplicated projectively and capped per level.
pub struct Ball {
    pub letters: usize,
    pub levels: Vec<Vec<BallElement>>,
}

#[derive(Clone, Debug)]
pub struct BallElement {
    /// letter 2i is generator i, 2i+1 its inverse
    pub word: Vec<u16>,
    pub m: Mat2,
    /// tr²/det
    pub t: C,
}

impl Ball {
    pub fn build(gens: &[Mat2], max_len: usize, per_level: usize) -> Result<Ball, TrilatError> {
        let mut letters: Vec<(Mat2, C)> = Vec::new();
        for g in gens {
            let inv_det = g.det().inverse()?;
            letters.push((g.clone(), inv_det.clone()));
            letters.push((g.adjugate(), inv_det));
        }
        let id = Mat2([[C::one(), C::zero()], [C::zero(), C::one()]]);
        let mut seen: HashMap<[i64; 6], Vec<Mat2>> = HashMap::new();
        seen.entry(id.fingerprint()).or_default().push(id.clone());
        let mut levels = vec![vec![BallElement { word: vec![], m: id, t: C::from_integer(4) }]];
        let mut inv_dets: Vec<C> = vec![C::one()];
        for _ in 1..=max_len {
            let prev = levels.last().expect("level 0");
            let mut next = Vec::new();
            let mut next_inv = Vec::new();
            'fill: for (e, inv_det) in prev.iter().zip(&inv_dets) {
                for (li, (lm, ld)) in letters.iter().enumerate() {
                    if let Some(&last) = e.word.last() {
                        if last as usize ^ 1 == li {
                            continue;
                        }
                    }
                    let m = e.m.mul(lm);
                    let bucket = seen.entry(m.fingerprint()).or_default();
                    if bucket.iter().any(|x| x.proj_eq(&m)) {
                        continue;
                    }
                    bucket.push(m.clone());
                    let d = inv_det * ld;
                    let tr = m.trace();
                    let t = &(&tr * &tr) * &d;
                    let mut word = e.word.clone();
                    word.push(li as u16);
                    next.push(BallElement { word, m, t });
                    next_inv.push(d);
                    if next.len() >= per_level {
                        break 'fill;
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
            inv_dets = next_inv;
        }
        Ok(Ball { letters: letters.len(), levels })
    }

    pub fn elements(&self) -> impl Iterator<Item = &BallElement> {
        self.levels.iter().flatten()
    }
}

/// Word in the original generators for a ball element.
pub fn ball_word(gens: &[Word], letters: &[u16]) -> Word {
    let mut w = Word::identity();
    for &l in letters {
        let g = &gens[l as usize / 2];
        w = w.concat(&if l % 2 == 1 { g.invert() } else { g.clone() });
    }
    w
}

pub fn ambient_of(gens: &[Mat3], gens_inv: &[Mat3], letters: &[u16]) -> Mat3 {
    letters.iter().fold(Mat3::identity(), |acc, &l| {
        let i = l as usize / 2;
        &acc * if l % 2 == 1 { &gens_inv[i] } else { &gens[i] }
    })
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub order_cap: u32,
    /// word length explored for witnesses and trace samples
    pub max_len: usize,
    /// new elements kept per word length
    pub per_level: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { order_cap: classify::DEFAULT_ORDER_CAP, max_len: 8, per_level: 150 }
    }
}

/// Everything computed for one stabilizer row, with one check per cell.
pub struct RowAnalysis {
    pub checks: Vec<Check>,
    pub frame: Option<MirrorFrame>,
    pub generator_orders: Vec<(Word, Option<Order>)>,
    pub ball: Option<Ball>,
    /// Generator words the ball was built from.
    pub words: Vec<Word>,
}

fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// Checks (a)-(e) for one row: generators stabilize the mirror and the
/// named reflection acts trivially; cone orders are witnessed; χ and area
/// agree; the fixed-point stabilizer order is witnessed.
pub fn signature_report(row: &StabilizerRow, g: &GroupInstance, opts: &VerifyOptions) -> RowAnalysis {
    let base = format!("{}/p{}", row.block_id, row.p);
    let id = |cell: &str| format!("{base}/{cell}");
    let mut checks = Vec::new();
    let mut out = RowAnalysis { checks: vec![], frame: None, generator_orders: vec![], ball: None, words: vec![] };

    let chi = row.signature.chi();
    checks.push(Check::compare(id("chi"), &chi, &row.chi, "chi from the signature"));
    let area = &row.chi * BigRational::from_integer(BigInt::from(-2));
    checks.push(Check::new(
        id("area"),
        if row.area_over_pi == area && row.signature.area_over_pi() == row.area_over_pi { Status::Pass } else { Status::Fail },
        format!("table area {}π, -2χ = {}π, from signature {}π", row.area_over_pi, area, row.signature.area_over_pi()),
    ));

    let polar = row_mirror_polar(g, &row.reflection_word, row.pair.as_ref());
    let (polar, how) = match polar {
        Ok(x) => x,
        Err(e) => {
            checks.push(Check::new(id("mirror"), Status::Fail, e.to_string()));
            for cell in ["generators", "trivial_action", "cone_orders", "fixstab"] {
                checks.push(Check::new(id(cell), Status::Fail, "no mirror".into()));
            }
            out.checks = checks;
            return out;
        }
    };
    let f = match frame(&g.form, &polar) {
        Ok(f) => f,
        Err(e) => {
            checks.push(Check::new(id("mirror"), Status::Fail, e.to_string()));
            out.checks = checks;
            return out;
        }
    };
    checks.push(Check::new(id("mirror"), Status::Pass, how));

    // (a)
    let refl = row.reflection_word.evaluate(g);
    let trivial = refl
        .as_ref()
        .map_err(|e| e.to_string())
        .and_then(|m| restrict(m, &f).map_err(|e| e.to_string()))
        .map(|r| r.is_scalar());
    checks.push(match trivial {
        Ok(true) => Check::new(id("trivial_action"), Status::Pass, format!("{} fixes its mirror pointwise", row.reflection_word)),
        Ok(false) => Check::new(id("trivial_action"), Status::Fail, format!("{} moves points of the mirror", row.reflection_word)),
        Err(e) => Check::new(id("trivial_action"), Status::Fail, e),
    });

    let stabilizing = |words: &[Word]| {
        let mut mats = Vec::new();
        let mut bad = Vec::new();
        for w in words {
            match w.evaluate(g) {
                Ok(m) if stabilizes(&m, &f) => mats.push(m),
                Ok(_) => bad.push(w.to_string()),
                Err(e) => bad.push(format!("{w} ({e})")),
            }
        }
        (mats, bad)
    };
    let (mut gen_mats, bad) = stabilizing(&row.generator_words);
    let mut words = row.generator_words.clone();
    if bad.is_empty() {
        checks.push(Check::new(id("generators"), Status::Pass, format!("{} generators stabilize the mirror", gen_mats.len())));
    } else {
        let details = format!("not stabilizing the mirror: {}", bad.join(", "));
        let fallback = row.corrected_generators.as_ref().map(|c| (c, stabilizing(c)));
        match fallback {
            Some((c, (mats, still_bad))) if still_bad.is_empty() => {
                let list: Vec<String> = c.iter().map(Word::to_string).collect();
                checks.push(Check::new(
                    id("generators"),
                    Status::Fail,
                    format!("{details}; continuing with [{}], which do", list.join(", ")),
                ));
                gen_mats = mats;
                words = c.clone();
            }
            _ => {
                checks.push(Check::new(id("generators"), Status::Fail, details));
                for cell in ["cone_orders", "fixstab"] {
                    checks.push(Check::new(id(cell), Status::Unverified, "generators do not all stabilize the mirror".into()));
                }
                out.checks = checks;
                out.frame = Some(f);
                return out;
            }
        }
    }

    let restricted: Vec<Mat2> = gen_mats.iter().map(|m| restrict(m, &f).expect("stabilizes")).collect();
    out.generator_orders = words
        .iter()
        .zip(&restricted)
        .map(|(w, r)| (w.clone(), mirror_action(r, opts.order_cap).ok().and_then(MirrorAction::order)))
        .collect();

    // (b) and (e) over a ball of short words
    let ball = match Ball::build(&restricted, opts.max_len, opts.per_level) {
        Ok(b) => b,
        Err(e) => {
            checks.push(Check::new(id("cone_orders"), Status::Fail, e.to_string()));
            out.checks = checks;
            return out;
        }
    };
    let mut witnessed: BTreeSet<ConeOrder> = BTreeSet::new();
    let mut problems = Vec::new();
    let mut trivial_elems: Vec<&BallElement> = Vec::new();
    for e in ball.elements().skip(1) {
        let scalar = e.m.is_scalar();
        match action_from_invariant(scalar, &e.t, opts.order_cap) {
            Ok(MirrorAction::Trivial) => trivial_elems.push(e),
            Ok(MirrorAction::Elliptic(Order::Finite(k))) => {
                witnessed.insert(ConeOrder::Finite(k));
            }
            Ok(MirrorAction::Elliptic(o)) => {
                problems.push(format!("{} has rotation order {o}", ball_word(&words, &e.word)))
            }
            Ok(MirrorAction::Parabolic) => {
                witnessed.insert(ConeOrder::Infinite);
            }
            Ok(MirrorAction::Hyperbolic) => {}
            Err(err) => problems.push(err.to_string()),
        }
    }
    let claimed: BTreeSet<ConeOrder> = row.signature.cone_orders.iter().copied().collect();
    for w in &witnessed {
        let fits = match w {
            ConeOrder::Infinite => claimed.contains(&ConeOrder::Infinite),
            ConeOrder::Finite(k) => claimed.iter().any(|c| matches!(c, ConeOrder::Finite(m) if m % k == 0)),
        };
        if !fits {
            problems.push(format!("an element of order {w} fits no cone point"));
        }
    }
    let missing: Vec<String> = claimed.difference(&witnessed).map(|c| c.to_string()).collect();
    let found: Vec<String> = witnessed.iter().map(|c| c.to_string()).collect();
    let gen_ord: Vec<String> = out
        .generator_orders
        .iter()
        .map(|(w, o)| format!("{w}:{}", o.map_or("hyperbolic".to_string(), |o| o.to_string())))
        .collect();
    let summary = format!(
        "claimed {}; rotation orders found {{{}}}; generators [{}]; {} elements up to length {}",
        row.signature,
        found.join(","),
        gen_ord.join(", "),
        ball.elements().count(),
        ball.levels.len() - 1
    );
    checks.push(if !problems.is_empty() {
        Check::new(id("cone_orders"), Status::Fail, format!("{summary}; {}", problems.join("; ")))
    } else if missing.is_empty() {
        Check::new(id("cone_orders"), Status::Pass, summary)
    } else {
        Check::new(id("cone_orders"), Status::Unverified, format!("{summary}; no witness for {}", missing.join(",")))
    });

    // (e)
    let gens_inv: Vec<Mat3> = gen_mats.iter().map(Mat3::adjugate).collect();
    let mut fix_orders = Vec::new();
    let mut fix_lcm = 1u32;
    let mut fix_problem = None;
    if let Ok(m) = &refl {
        match classify::projective_order(m, opts.order_cap) {
            Some(k) => {
                fix_lcm = lcm(fix_lcm, k);
                fix_orders.push(format!("{}:{k}", row.reflection_word));
            }
            None => fix_problem = Some(format!("{} has order above {}", row.reflection_word, opts.order_cap)),
        }
    }
    for e in trivial_elems.iter().take(64) {
        let m = ambient_of(&gen_mats, &gens_inv, &e.word);
        match classify::projective_order(&m, opts.order_cap) {
            Some(k) => {
                if k > 1 && fix_lcm % k != 0 {
                    fix_orders.push(format!("{}:{k}", ball_word(&words, &e.word)));
                }
                fix_lcm = lcm(fix_lcm, k);
            }
            None => fix_problem = Some("trivially acting element of unbounded order".into()),
        }
    }
    let claim = row.fixstab_order;
    let details = format!(
        "claimed {claim}; lcm of orders of elements fixing the mirror pointwise = {fix_lcm} [{}]",
        fix_orders.join(", ")
    );
    checks.push(if let Some(p) = fix_problem {
        Check::new(id("fixstab"), Status::Fail, format!("{details}; {p}"))
    } else if fix_lcm == claim {
        Check::new(id("fixstab"), Status::Pass, details)
    } else if claim % fix_lcm == 0 {
        Check::new(id("fixstab"), Status::Unverified, format!("{details}; only a divisor is witnessed"))
    } else {
        Check::new(id("fixstab"), Status::Fail, details)
    });

    out.checks = checks;
    out.frame = Some(f);
    out.ball = Some(ball);
    out.words = words;
    out
}

/// Presentation of the stabilizer as a central extension: a central z of
/// the fixed-point stabilizer order and one torsion relation per generator
/// of finite rotation order. Generators of infinite order get no relation.
pub fn presentation_emit(row: &StabilizerRow, generator_orders: &[(Word, Option<Order>)]) -> String {
    let names: Vec<String> = generator_orders.iter().map(|(w, _)| format!("a[{w}]")).collect();
    let mut rels = vec!["z central".to_string(), format!("z^{}", row.fixstab_order)];
    for ((_, o), name) in generator_orders.iter().zip(&names) {
        if let Some(Order::Finite(k)) = o {
            rels.push(format!("{name}^{k}"));
        }
    }
    let mut gens = vec!["z".to_string()];
    gens.extend(names);
    format!("< {} | {} >", gens.join(", "), rels.join(", "))
}

/// Result of checking a vertex cycle.
pub struct CycleReport {
    pub checks: Vec<Check>,
    pub rotation_order: Option<Order>,
}

/// Check a vertex cycle on a mirror: each map carries its vertex to the
/// next, the composite is the stated cycle transformation, it is conjugate
/// to the stated element, and its rotation order matches.
pub fn verify_cycle(g: &GroupInstance, data: &CycleData, cap: u32) -> Result<CycleReport, TrilatError> {
    let base = format!("{}/p{}", data.id, g.p);
    let mut checks = Vec::new();
    let mirror = reflection_polar(g, &data.mirror)?;
    let f = frame(&g.form, &mirror)?;
    let vertex = |w: &Word| -> Result<Vec3, TrilatError> { g.form.boxprod(&mirror, &reflection_polar(g, w)?) };

    let chain = |labels: &[Word], maps: &[Word]| -> Result<Vec<bool>, TrilatError> {
        let vs = labels.iter().map(vertex).collect::<Result<Vec<_>, _>>()?;
        let mut ok = Vec::new();
        for (i, w) in maps.iter().enumerate() {
            let m = w.evaluate(g)?;
            ok.push(stabilizes(&m, &f) && (&m * &vs[i]).proportional(&vs[(i + 1) % vs.len()]));
        }
        Ok(ok)
    };
    let steps = chain(&data.labels, &data.maps)?;
    checks.push(Check::new(
        format!("{base}/chain"),
        if steps.iter().all(|&b| b) { Status::Pass } else { Status::Fail },
        format!("vertex maps in order: {steps:?}"),
    ));

    let t = data.transform.evaluate(g)?;
    let composite = data.maps.iter().try_fold(Mat3::identity(), |acc, w| Ok::<_, TrilatError>(&w.evaluate(g)? * &acc))?;
    let c = data.conjugator.evaluate(g)?;
    let x = data.conjugate.evaluate(g)?;
    let conj = &(&c.inverse()? * &x) * &c;
    let v0 = vertex(&data.labels[0])?;
    let ok = t.proj_eq(&composite) && t.proj_eq(&conj) && (&t * &v0).proportional(&v0);
    checks.push(Check::new(
        format!("{base}/transform"),
        if ok { Status::Pass } else { Status::Fail },
        format!(
            "composite of maps = {}: {}; equals ({})^-1 ({}) ({}): {}; fixes the vertex: {}",
            data.transform,
            t.proj_eq(&composite),
            data.conjugator,
            data.conjugate,
            data.conjugator,
            t.proj_eq(&conj),
            (&t * &v0).proportional(&v0)
        ),
    ));

    let rot = rotation_order(&t, &f, cap);
    let expected = data.rotation_orders.get(&g.p);
    let got: Option<ConeOrder> = rot.as_ref().ok().and_then(|o| (*o).into());
    checks.push(Check::new(
        format!("{base}/rotation"),
        match (expected, got) {
            (Some(e), Some(o)) if *e == o => Status::Pass,
            (None, _) => Status::Unverified,
            _ => Status::Fail,
        },
        format!(
            "expected {}, got {}",
            expected.map_or("-".to_string(), |e| e.to_string()),
            match &rot {
                Ok(o) => o.to_string(),
                Err(e) => e.to_string(),
            }
        ),
    ));

    // the printed variants should break the chain
    let mut labels = data.labels.clone();
    labels[0] = data.printed_first_label.clone();
    let printed_label = chain(&labels, &data.maps).map(|v| v.iter().all(|&b| b)).unwrap_or(false);
    let mut maps = data.maps.clone();
    maps[2] = data.printed_third_map.clone();
    let printed_map = chain(&data.labels, &maps).map(|v| v.iter().all(|&b| b)).unwrap_or(false);
    checks.push(Check::new(
        format!("{base}/printed_variants"),
        Status::Pass,
        format!(
            "label {} closes the cycle: {printed_label}; map {} closes the cycle: {printed_map}",
            data.printed_first_label, data.printed_third_map
        ),
    ));
    Ok(CycleReport { checks, rotation_order: rot.ok() })
}

#[derive(Clone, Debug, Serialize)]
pub struct Vertex {
    pub label: String,
    pub vector: Vec3,
    pub position: Position,
}

/// Vertices of a side `[n] a; b, c`: the base polygon in the mirror of `a`
/// cut by the n mirrors of the dihedral group of b and c, and the apex
/// b⊠c. Positive intersections are replaced by truncation vertices.
pub fn vertex_vectors(g: &GroupInstance, side: &SideDescriptor) -> Result<Vec<Vertex>, TrilatError> {
    let h = &g.form;
    let ua = reflection_polar(g, &side.base_word)?;
    let ub = reflection_polar(g, &side.b_word)?;
    let uc = reflection_polar(g, &side.c_word)?;
    let bc = &side.b_word.evaluate(g)? * &side.c_word.evaluate(g)?;
    let n = side.braid_length as usize;
    let mut orbit: Vec<(String, Vec3)> = Vec::new();
    let mut power = Mat3::identity();
    let mut k = 0;
    while orbit.len() < n && k <= n {
        for (name, u) in [(&side.b_word, &ub), (&side.c_word, &uc)] {
            let v = &power * u;
            if !orbit.iter().any(|(_, x)| x.proportional(&v)) && orbit.len() < n {
                orbit.push((format!("(({})({}))^{k} U[{name}]", side.b_word, side.c_word), v));
            }
        }
        power = &power * &bc;
        k += 1;
    }
    if orbit.len() != n {
        return Err(TrilatError::Inconsistent(format!("dihedral orbit has {} mirrors, expected {n}", orbit.len())));
    }
    let mut out = Vec::new();
    let push = |out: &mut Vec<Vertex>, label: String, v: Vec3| -> Result<(), TrilatError> {
        let position = h.point_position(&v)?;
        if position == Position::Positive {
            return Err(TrilatError::Inconsistent(format!("vertex {label} is positive")));
        }
        out.push(Vertex { label, vector: v, position });
        Ok(())
    };
    for (name, w) in &orbit {
        let x = h.boxprod(&ua, w)?;
        if h.point_position(&x)? == Position::Positive {
            push(&mut out, format!("U[a] x (U[a] x {name})"), h.boxprod(&ua, &x)?)?;
            push(&mut out, format!("{name} x (U[a] x {name})"), h.boxprod(w, &x)?)?;
        } else {
            push(&mut out, format!("U[a] x {name}"), x)?;
        }
    }
    let apex = h.boxprod(&ub, &uc)?;
    if h.point_position(&apex)? == Position::Positive {
        for (name, w) in &orbit {
            push(&mut out, format!("(U[b] x U[c]) x {name}"), h.boxprod(&apex, w)?)?;
        }
    } else {
        push(&mut out, "U[b] x U[c]".into(), apex)?;
    }
    Ok(out)
}

/// Whether b⊠c is positive, i.e. the top of the side is truncated.
pub fn apex_truncated(g: &GroupInstance, side: &SideDescriptor) -> Result<bool, TrilatError> {
    let ub = reflection_polar(g, &side.b_word)?;
    let uc = reflection_polar(g, &side.c_word)?;
    Ok(g.form.point_position(&g.form.boxprod(&ub, &uc)?)? == Position::Positive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Catalog, Family};

    fn group(f: Family, name: &str, p: u32) -> GroupInstance {
        Catalog::embedded().unwrap().build(f, name, p).unwrap()
    }

    #[test]
    fn signature_text() {
        let s = FuchsianSignature::parse("(0;2,2,6,6,inf,inf)").unwrap();
        assert_eq!(s.to_string(), "(0;2,2,6,6,inf,inf)");
        assert_eq!(s.chi(), BigRational::new((-8).into(), 3.into()));
        assert_eq!(s.area_over_pi(), BigRational::new(16.into(), 3.into()));
        assert!(FuchsianSignature::parse("(0;1,2)").is_err());
        assert!(FuchsianSignature::parse("0;2,3").is_err());
        assert_eq!(FuchsianSignature::parse("(2)").unwrap().chi(), BigRational::from_integer((-2).into()));
        assert_eq!(s.triangle(), None);
        let t = FuchsianSignature::parse("(0;8,2,3)").unwrap();
        assert_eq!(t.triangle(), Some([ConeOrder::Finite(2), ConeOrder::Finite(3), ConeOrder::Finite(8)]));
    }

    #[test]
    fn frame_of_e1() {
        let g = group(Family::S, "sigma1", 3);
        let f = frame(&g.form, &Vec3::basis(0)).unwrap();
        assert!(f.basis_orthogonal(&g.form));
        assert!(frame(&g.form, &Vec3::zero()).is_err());
        let r = restrict(&g.r[0], &f).unwrap();
        assert!(r.is_scalar());
        assert!(!stabilizes(&g.r[1], &f));
        assert!(restrict(&g.r[1], &f).is_err());
    }

    #[test]
    fn rotation_orders_on_r1_mirror() {
        let f = |p| {
            let g = group(Family::S, "sigma1", p);
            let fr = frame(&g.form, &Vec3::basis(0)).unwrap();
            rotation_order(&g.eval("(1232~3~2)^3").unwrap(), &fr, 200).unwrap()
        };
        assert_eq!(f(3), Order::Finite(2));
        assert_eq!(f(4), Order::Finite(4));
        assert_eq!(f(6), Order::Infinite);
    }

    #[test]
    fn null_vertex_for_p6() {
        let g = group(Family::S, "sigma1", 6);
        let v = &g.eval("~2~1").unwrap() * &Vec3::basis(2);
        let x = g.form.boxprod(&Vec3::basis(0), &v).unwrap();
        assert_eq!(g.form.point_position(&x).unwrap(), Position::Null);
    }

    #[test]
    fn chebyshev_orders() {
        // t = 4cos²(π/k)
        let t = |n: u32| {
            let z = C::root_of_unity(2 * n, 1);
            let c = &z + &z.conjugate();
            &c * &c
        };
        for k in [2, 3, 5, 7, 12] {
            assert_eq!(action_from_invariant(false, &t(k), 200).unwrap(), MirrorAction::Elliptic(Order::Finite(k)));
        }
        assert_eq!(action_from_invariant(false, &C::from_integer(4), 200).unwrap(), MirrorAction::Parabolic);
        assert_eq!(action_from_invariant(false, &C::from_integer(5), 200).unwrap(), MirrorAction::Hyperbolic);
        assert!(action_from_invariant(false, &C::from_integer(-1), 200).is_err());
    }
}
