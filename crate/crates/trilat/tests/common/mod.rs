//! Strategies and property bodies shared by the property suite and the
//! acceptance run.
#![allow(dead_code)]

use cyclo::Cyclotomic as C;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use trilat::catalog::{Family, GroupInstance};
use trilat::stabilizer::{frame, restrict, row_mirror_polar, stabilizes};
use trilat::{catalog, classify, Mat3, Vec3};

const CONDUCTORS: &[u32] = &[1, 3, 4, 5, 7, 8, 12, 15, 20, 24];

pub fn elem() -> impl Strategy<Value = C> {
    prop::sample::select(CONDUCTORS).prop_flat_map(|n| {
        prop::collection::vec((0..n as i64, -5i64..=5, 1i64..=3), 0..5).prop_map(move |terms| {
            terms.iter().fold(C::zero(), |acc, &(k, a, b)| &acc + &(&C::root_of_unity(n, k) * &C::from_ratio(a, b)))
        })
    })
}

/// Small vectors over Q(ζ_12), where all the forms' fields can meet them cheaply.
pub fn vector() -> impl Strategy<Value = Vec3> {
    let entry = prop::collection::vec((0..12i64, -3i64..=3), 1..3).prop_map(|terms| {
        terms.iter().fold(C::zero(), |acc, &(k, a)| &acc + &(&C::root_of_unity(12, k) * &C::from_integer(a)))
    });
    [entry.clone(), entry.clone(), entry].prop_map(|[a, b, c]| Vec3::new(a, b, c))
}

/// Words in the three reflections and their inverses.
pub fn word(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec((1..=3u8, any::<bool>()), 0..=max).prop_map(|letters| {
        letters.iter().map(|&(j, inv)| format!("{}{j}", if inv { "~" } else { "" })).collect()
    })
}

pub fn group_index() -> impl Strategy<Value = usize> {
    0..catalog().unwrap().triples().len()
}

pub fn group(i: usize) -> GroupInstance {
    let (f, q, p) = catalog().unwrap().triples()[i].clone();
    catalog().unwrap().build(f, &q, p).unwrap()
}

pub fn ring_axioms(a: C, b: C, c: C) -> Result<(), TestCaseError> {
    prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    prop_assert_eq!(&a * &b, &b * &a);
    prop_assert_eq!(&(&a - &b) + &b, a.clone());
    if !b.is_zero() {
        prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a);
    }
    Ok(())
}

pub fn conjugation_involution(a: C, b: C) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.conjugate().conjugate(), a.clone());
    prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
    prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
    Ok(())
}

pub fn box_orthogonality(g: usize, u1: Vec3, u2: Vec3) -> Result<(), TestCaseError> {
    prop_assume!(!u1.is_zero() && !u2.is_zero() && !u1.proportional(&u2));
    let h = &group(g).form;
    let b = h.boxprod(&u1, &u2).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(!b.is_zero());
    prop_assert!(h.inner(&b, &u1).is_zero());
    prop_assert!(h.inner(&b, &u2).is_zero());
    Ok(())
}

pub fn isometry_invariance(g: usize, w: String, x: Vec3, y: Vec3) -> Result<(), TestCaseError> {
    let g = group(g);
    let m = g.eval(&w).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(g.form.inner(&(&m * &x), &(&m * &y)), g.form.inner(&x, &y));
    prop_assert_eq!(&(&m.conj_transpose() * &g.form.matrix) * &m, g.form.matrix.clone());
    Ok(())
}

/// Restriction to a mirror is a homomorphism on its stabilizer; checked on
/// random products of the generators of the R1 mirror stabilizer in the σ1
/// groups.
pub fn restriction_multiplicativity(p_index: usize, a: Vec<(usize, bool)>, b: Vec<(usize, bool)>) -> Result<(), TestCaseError> {
    let cat = catalog().unwrap();
    let p = [3, 4, 6][p_index];
    let g = cat.build(Family::S, "sigma1", p).unwrap();
    let row = cat.stabilizer_rows(&g).into_iter().find(|r| r.block_id == "s1-R1").unwrap();
    let (polar, _) = row_mirror_polar(&g, &row.reflection_word, row.pair.as_ref()).unwrap();
    let f = frame(&g.form, &polar).unwrap();
    let gens: Vec<Mat3> = row.generator_words.iter().map(|w| w.evaluate(&g).unwrap()).collect();
    let product = |letters: &[(usize, bool)]| {
        letters.iter().fold(Mat3::identity(), |acc, &(i, inv)| {
            let m = &gens[i % gens.len()];
            if inv {
                &acc * &m.adjugate()
            } else {
                &acc * m
            }
        })
    };
    let (ma, mb) = (product(&a), product(&b));
    let ab = &ma * &mb;
    prop_assert!(stabilizes(&ab, &f));
    let ra = restrict(&ma, &f).unwrap();
    let rb = restrict(&mb, &f).unwrap();
    prop_assert_eq!(restrict(&ab, &f).unwrap(), ra.mul(&rb));
    Ok(())
}

/// A braiding pair from the side tables, conjugated by a random word,
/// still braids with the same length and its center element matches the
/// position of the box product.
pub fn center_trichotomy(side: usize, w: String) -> Result<(), TestCaseError> {
    let cat = catalog().unwrap();
    let (g, s) = &all_sides()[side % all_sides().len()];
    let g = cat.build(g.0, &g.1, g.2).unwrap();
    let s = &cat.sides(&g)[*s];
    let k = g.eval(&w).unwrap();
    let k_inv = k.adjugate();
    let conj = |m: Mat3| &(&k * &m) * &k_inv;
    let b = conj(s.b_word.evaluate(&g).unwrap());
    let c = conj(s.c_word.evaluate(&g).unwrap());
    prop_assert!(classify::braid_holds(&b, &c, s.braid_length));
    let r = classify::center_element(&b, &c, s.braid_length, &g.form).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(r.agrees, "{} at {}: {:?} vs {:?}", s.label(), g.id(), r.class.kind, r.box_position);
    Ok(())
}

type Triple = (Family, String, u32);

pub fn all_sides() -> &'static [(Triple, usize)] {
    static SIDES: std::sync::OnceLock<Vec<(Triple, usize)>> = std::sync::OnceLock::new();
    SIDES.get_or_init(|| {
        let cat = catalog().unwrap();
        let mut out = Vec::new();
        for t in cat.triples() {
            let g = cat.build(t.0, &t.1, t.2).unwrap();
            for i in 0..cat.sides(&g).len() {
                out.push((t.clone(), i));
            }
        }
        out
    })
}

fn run<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&s, f).map_err(|e| e.to_string())
}

/// Every property suite with the given number of cases.
pub fn run_all(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("ring axioms", run(cases, (elem(), elem(), elem()), |(a, b, c)| ring_axioms(a, b, c))),
        ("conjugation involution", run(cases, (elem(), elem()), |(a, b)| conjugation_involution(a, b))),
        ("box-product orthogonality", run(cases, (group_index(), vector(), vector()), |(g, a, b)| box_orthogonality(g, a, b))),
        (
            "isometry invariance of the form",
            run(cases, (group_index(), word(6), vector(), vector()), |(g, w, x, y)| isometry_invariance(g, w, x, y)),
        ),
        (
            "restriction multiplicativity",
            run(cases, (0..3usize, letters(), letters()), |(p, a, b)| restriction_multiplicativity(p, a, b)),
        ),
        ("center trichotomy", run(cases, (0..all_sides().len(), word(3)), |(s, w)| center_trichotomy(s, w))),
    ]
}

pub fn letters() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0..8usize, any::<bool>()), 0..5)
}
