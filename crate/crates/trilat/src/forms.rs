//! Three-dimensional Hermitian linear algebra over cyclotomic numbers.
//!
//! The form is ⟨X, Y⟩ = Y* H X, linear in the first slot. Vectors are never
//! normalised; every predicate here is invariant under rescaling.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use cyclo::{real_sign, Cyclotomic, Sign};
use serde::Serialize;

use crate::TrilatError;

type C = Cyclotomic;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vec3(pub [C; 3]);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat3(pub [[C; 3]; 3]);

impl Vec3 {
    pub fn new(a: C, b: C, c: C) -> Self {
        Vec3([a, b, c])
    }

    pub fn zero() -> Self {
        Vec3::new(C::zero(), C::zero(), C::zero())
    }

    /// Standard basis vector e_{i+1}.
    pub fn basis(i: usize) -> Self {
        let mut v = Vec3::zero();
        v.0[i] = C::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(C::is_zero)
    }

    pub fn scale(&self, s: &C) -> Vec3 {
        Vec3(std::array::from_fn(|i| &self.0[i] * s))
    }

    pub fn conj(&self) -> Vec3 {
        Vec3(std::array::from_fn(|i| self.0[i].conjugate()))
    }

    /// Plain bilinear cross product.
    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a1, a2, a3] = &self.0;
        let [b1, b2, b3] = &o.0;
        Vec3::new(a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
    }

    /// Index of the first nonzero entry.
    pub fn pivot(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// Equal up to a nonzero scalar (both nonzero).
    pub fn proportional(&self, o: &Vec3) -> bool {
        match (self.pivot(), o.pivot()) {
            (Some(i), Some(j)) if i == j => {
                (0..3).all(|k| &self.0[k] * &o.0[i] == &o.0[k] * &self.0[i])
            }
            _ => false,
        }
    }
}

impl Add for &Vec3 {
    type Output = Vec3;
    fn add(self, o: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }
}

impl Sub for &Vec3 {
    type Output = Vec3;
    fn sub(self, o: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }
}

impl Neg for &Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(std::array::from_fn(|i| -&self.0[i]))
    }
}

impl Mat3 {
    pub fn from_fn(f: impl Fn(usize, usize) -> C) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn identity() -> Self {
        Self::scalar(C::one())
    }

    pub fn scalar(s: C) -> Self {
        Self::from_fn(|i, j| if i == j { s.clone() } else { C::zero() })
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.0[i][j]
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3(std::array::from_fn(|i| self.0[i][j].clone()))
    }

    pub fn trace(&self) -> C {
        &(&self.0[0][0] + &self.0[1][1]) + &self.0[2][2]
    }

    pub fn det(&self) -> C {
        let m = &self.0;
        let t1 = &m[0][0] * &(&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]);
        let t2 = &m[0][1] * &(&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0]);
        let t3 = &m[0][2] * &(&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
        &(&t1 - &t2) + &t3
    }

    /// Sum of the principal 2×2 minors.
    pub fn minor_sum(&self) -> C {
        let m = &self.0;
        let a = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        let b = &m[0][0] * &m[2][2] - &m[0][2] * &m[2][0];
        let c = &m[1][1] * &m[2][2] - &m[1][2] * &m[2][1];
        &(&a + &b) + &c
    }

    pub fn adjugate(&self) -> Mat3 {
        let m = &self.0;
        let cof = |r: usize, c: usize| {
            let (r0, r1) = match r {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match c {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let v = &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
            if (r + c) % 2 == 0 {
                v
            } else {
                -v
            }
        };
        Mat3::from_fn(|i, j| cof(j, i))
    }

    pub fn inverse(&self) -> Result<Mat3, TrilatError> {
        let d = self.det();
        if d.is_zero() {
            return Err(TrilatError::Singular);
        }
        if d.is_one() {
            return Ok(self.adjugate());
        }
        let inv = d.inverse().map_err(TrilatError::from)?;
        Ok(self.adjugate().scale(&inv))
    }

    pub fn conj_transpose(&self) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[j][i].conjugate())
    }

    pub fn scale(&self, s: &C) -> Mat3 {
        Mat3::from_fn(|i, j| &self.0[i][j] * s)
    }

    pub fn pow(&self, e: u32) -> Mat3 {
        let mut acc = Mat3::identity();
        let mut base = self.clone();
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

    pub fn is_scalar(&self) -> bool {
        let d = &self.0[0][0];
        !d.is_zero()
            && (0..3).all(|i| {
                (0..3).all(|j| if i == j { &self.0[i][j] == d } else { self.0[i][j].is_zero() })
            })
    }

    /// Position of the first nonzero entry in row-major order.
    fn pivot(&self) -> Option<(usize, usize)> {
        (0..9).map(|k| (k / 3, k % 3)).find(|&(i, j)| !self.0[i][j].is_zero())
    }

    /// Equality up to a nonzero scalar.
    pub fn proj_eq(&self, o: &Mat3) -> bool {
        match (self.pivot(), o.pivot()) {
            (Some(p), Some(q)) if p == q => {
                let (a, b) = (&self.0[p.0][p.1], &o.0[p.0][p.1]);
                (0..3).all(|i| (0..3).all(|j| &self.0[i][j] * b == &o.0[i][j] * a))
            }
            _ => false,
        }
    }

    /// Smallest conductor holding every entry.
    pub fn conductor(&self) -> u32 {
        self.0
            .iter()
            .flatten()
            .map(C::conductor)
            .fold(1, |a, b| a / gcd(a, b) * b)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Mul for &Mat3 {
    type Output = Mat3;
    fn mul(self, o: &Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| {
            let mut acc = C::zero();
            for k in 0..3 {
                if !self.0[i][k].is_zero() && !o.0[k][j].is_zero() {
                    acc += &self.0[i][k] * &o.0[k][j];
                }
            }
            acc
        })
    }
}

impl Mul<&Vec3> for &Mat3 {
    type Output = Vec3;
    fn mul(self, v: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| {
            let mut acc = C::zero();
            for k in 0..3 {
                if !self.0[i][k].is_zero() && !v.0[k].is_zero() {
                    acc += &self.0[i][k] * &v.0[k];
                }
            }
            acc
        }))
    }
}

impl Sub for &Mat3 {
    type Output = Mat3;
    fn sub(self, o: &Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| &self.0[i][j] - &o.0[i][j])
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.0[0], self.0[1], self.0[2])
    }
}

impl Serialize for Vec3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl Serialize for Mat3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> =
            self.0.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        v.serialize(s)
    }
}

/// Inertia (positive, null, negative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub pos: u32,
    pub null: u32,
    pub neg: u32,
}

impl Signature {
    pub const LORENTZ: Signature = Signature { pos: 2, null: 0, neg: 1 };
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.pos, self.null, self.neg)
    }
}

/// Inertia of a square Hermitian matrix, by Schur complements on nonzero
/// diagonal pivots. When the diagonal vanishes, a congruence e_i += t e_j
/// with t ∈ {1, i} creates a nonzero pivot from an off-diagonal entry.
pub fn inertia(m: Vec<Vec<C>>) -> Result<Signature, TrilatError> {
    let mut m = m;
    let mut sig = Signature { pos: 0, null: 0, neg: 0 };
    while !m.is_empty() {
        let n = m.len();
        let piv = (0..n).find(|&i| !m[i][i].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                let off = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !m[i][j].is_zero());
                let Some((i, j)) = off else {
                    sig.null += n as u32;
                    break;
                };
                // new diagonal entry is 2 Re(t m_ji) for the basis change e_i + t e_j
                let t = if m[j][i].real_part().is_zero() {
                    C::root_of_unity(4, 1)
                } else {
                    C::one()
                };
                let tc = t.conjugate();
                // rows then columns: row_i += t̄ row_j, col_i += t col_j
                let row_j = m[j].clone();
                for (k, x) in row_j.iter().enumerate() {
                    m[i][k] = &m[i][k] + &(&tc * x);
                }
                for row in m.iter_mut() {
                    let x = &row[j] * &t;
                    row[i] = &row[i] + &x;
                }
                i
            }
        };
        let d = m[piv][piv].clone();
        match real_sign(&d)? {
            Sign::Positive => sig.pos += 1,
            Sign::Negative => sig.neg += 1,
            Sign::Zero => unreachable!("pivot is nonzero"),
        }
        let dinv = d.inverse()?;
        let rest: Vec<usize> = (0..n).filter(|&k| k != piv).collect();
        let next: Vec<Vec<C>> = rest
            .iter()
            .map(|&a| {
                rest.iter()
                    .map(|&b| &m[a][b] - &(&(&m[a][piv] * &dinv) * &m[piv][b]))
                    .collect()
            })
            .collect();
        m = next;
    }
    Ok(sig)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    pub matrix: Mat3,
    pub signature: Signature,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Negative,
    Null,
    Positive,
}

impl From<Sign> for Position {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Negative => Position::Negative,
            Sign::Zero => Position::Null,
            Sign::Positive => Position::Positive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MirrorRelation {
    Intersecting { cos_sq: C },
    Asymptotic,
    Ultraparallel,
}

impl HermitianForm {
    pub fn new(matrix: Mat3) -> Result<Self, TrilatError> {
        if matrix.conj_transpose() != matrix {
            return Err(TrilatError::NotHermitian);
        }
        let rows = matrix.0.iter().map(|r| r.to_vec()).collect();
        let signature = inertia(rows)?;
        Ok(HermitianForm { matrix, signature })
    }

    pub fn inner(&self, x: &Vec3, y: &Vec3) -> C {
        let hx = &self.matrix * x;
        let mut acc = C::zero();
        for i in 0..3 {
            if !y.0[i].is_zero() && !hx.0[i].is_zero() {
                acc += &y.0[i].conjugate() * &hx.0[i];
            }
        }
        acc
    }

    pub fn norm(&self, x: &Vec3) -> C {
        self.inner(x, x)
    }

    /// The row vector U* H.
    fn covector(&self, u: &Vec3) -> Vec3 {
        let uc = u.conj();
        Vec3(std::array::from_fn(|k| {
            let mut acc = C::zero();
            for j in 0..3 {
                if !uc.0[j].is_zero() {
                    acc += &uc.0[j] * &self.matrix.0[j][k];
                }
            }
            acc
        }))
    }

    /// U1 ⊠ U2: orthogonal to both inputs.
    pub fn boxprod(&self, u1: &Vec3, u2: &Vec3) -> Result<Vec3, TrilatError> {
        let x = self.covector(u1).cross(&self.covector(u2));
        if x.is_zero() {
            return Err(TrilatError::Degenerate("box product of proportional vectors".into()));
        }
        Ok(x)
    }

    pub fn point_position(&self, x: &Vec3) -> Result<Position, TrilatError> {
        if x.is_zero() {
            return Err(TrilatError::Degenerate("zero vector".into()));
        }
        Ok(real_sign(&self.norm(x))?.into())
    }

    /// cosh²(d/2) between two negative points.
    pub fn cosh_half_dist_sq(&self, x: &Vec3, y: &Vec3) -> Result<C, TrilatError> {
        for v in [x, y] {
            if self.point_position(v)? != Position::Negative {
                return Err(TrilatError::Degenerate("point outside the ball".into()));
            }
        }
        let xy = self.inner(x, y);
        Ok(xy.abs_sq().checked_div(&(&self.norm(x) * &self.norm(y)))?)
    }

    /// How the mirrors of two positive vectors meet, cross-checked against
    /// the position of their box product.
    pub fn mirror_relation(&self, u1: &Vec3, u2: &Vec3) -> Result<MirrorRelation, TrilatError> {
        for v in [u1, u2] {
            if self.point_position(v)? != Position::Positive {
                return Err(TrilatError::Degenerate("polar vector is not positive".into()));
            }
        }
        let cos_sq = self
            .inner(u1, u2)
            .abs_sq()
            .checked_div(&(&self.norm(u1) * &self.norm(u2)))?;
        let by_angle = real_sign(&(&cos_sq - &C::one()))?;
        let by_box = self.point_position(&self.boxprod(u1, u2)?)?;
        let rel = match (by_angle, by_box) {
            (Sign::Negative, Position::Negative) => MirrorRelation::Intersecting { cos_sq },
            (Sign::Zero, Position::Null) => MirrorRelation::Asymptotic,
            (Sign::Positive, Position::Positive) => MirrorRelation::Ultraparallel,
            (a, b) => {
                return Err(TrilatError::Inconsistent(format!(
                    "angle test gives {a:?} but box product is {b:?}"
                )))
            }
        };
        Ok(rel)
    }

    /// R_{U,ζ}: X ↦ X + (ζ − 1)⟨X,U⟩/⟨U,U⟩ U.
    pub fn reflection(&self, u: &Vec3, zeta: &C) -> Result<Mat3, TrilatError> {
        let nu = self.norm(u);
        if nu.is_zero() {
            return Err(TrilatError::Degenerate("null polar vector".into()));
        }
        let k = (zeta - &C::one()).checked_div(&nu)?;
        let row = self.covector(u);
        Ok(Mat3::from_fn(|i, j| {
            let e = &(&k * &u.0[i]) * &row.0[j];
            if i == j {
                &e + &C::one()
            } else {
                e
            }
        }))
    }

    /// M* H M = H
    pub fn preserves(&self, m: &Mat3) -> bool {
        &(&m.conj_transpose() * &self.matrix) * m == self.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> C {
        C::root_of_unity(n, k)
    }

    fn diag(a: i64, b: i64, c: i64) -> Mat3 {
        Mat3::from_fn(|i, j| if i != j { C::zero() } else { C::from_integer([a, b, c][i]) })
    }

    #[test]
    fn inertia_of_diagonal_and_hyperbolic() {
        assert_eq!(HermitianForm::new(Mat3::identity()).unwrap().signature, Signature { pos: 3, null: 0, neg: 0 });
        assert_eq!(HermitianForm::new(diag(1, 0, -1)).unwrap().signature, Signature { pos: 1, null: 1, neg: 1 });
        // [[0, i, 0], [-i, 0, 0], [0, 0, 1]] needs the imaginary shear
        let i = z(4, 1);
        let mut m = diag(0, 0, 1);
        m.0[0][1] = i.clone();
        m.0[1][0] = -&i;
        assert_eq!(HermitianForm::new(m).unwrap().signature, Signature { pos: 2, null: 0, neg: 1 });
    }

    #[test]
    fn box_is_orthogonal() {
        let h = HermitianForm::new(diag(1, 1, -1)).unwrap();
        let u1 = Vec3::new(C::one(), z(3, 1), C::zero());
        let u2 = Vec3::new(C::zero(), C::one(), z(8, 1));
        let x = h.boxprod(&u1, &u2).unwrap();
        assert!(h.inner(&x, &u1).is_zero());
        assert!(h.inner(&x, &u2).is_zero());
        assert!(h.boxprod(&u1, &u1.scale(&z(5, 2))).is_err());
    }

    #[test]
    fn reflections_preserve_the_form() {
        let h = HermitianForm::new(diag(1, 1, -1)).unwrap();
        let u = Vec3::new(C::one(), z(3, 1), C::from_ratio(1, 2));
        let r = h.reflection(&u, &z(5, 1)).unwrap();
        assert!(h.preserves(&r));
        assert!((&r * &u).proportional(&u));
        assert!(r.pow(5).is_scalar());
        assert_eq!(r.pow(5), Mat3::identity());
    }

    #[test]
    fn mirror_relations() {
        let h = HermitianForm::new(diag(1, 1, -1)).unwrap();
        let e1 = Vec3::basis(0);
        let e2 = Vec3::basis(1);
        assert_eq!(
            h.mirror_relation(&e1, &e2).unwrap(),
            MirrorRelation::Intersecting { cos_sq: C::zero() }
        );
        // u = (0, 2, 1) has norm 3 and |⟨e2,u⟩|² = 4 > 3
        let u = Vec3::new(C::zero(), C::from_integer(2), C::one());
        assert_eq!(h.mirror_relation(&e2, &u).unwrap(), MirrorRelation::Ultraparallel);
    }

    #[test]
    fn projective_equality() {
        let a = Mat3::from_fn(|i, j| C::from_integer((i * 3 + j) as i64 + 1));
        assert!(a.proj_eq(&a.scale(&z(7, 3))));
        assert!(!a.proj_eq(&Mat3::identity()));
        assert!(Mat3::scalar(z(3, 1)).is_scalar());
        let inv = a.adjugate();
        assert!((&a * &inv).is_scalar() || a.det().is_zero());
    }
}
