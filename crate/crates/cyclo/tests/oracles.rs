//! Checks against an independent model: Q[x]/(Φ_n(x)) with Φ_n computed by
//! polynomial division, and plain floating-point evaluation.

use cyclo::{
    contains_named_sqrt, embed_f64, field_generated, galois_orbit, real_sign, Cyclotomic,
    FieldDescriptor, Sign,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = trim(a.clone());
    let b = trim(b.clone());
    let lead = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &c * y;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn cyclotomic_poly(n: usize) -> Poly {
    let mut num = vec![BigRational::zero(); n + 1];
    num[0] = -BigRational::one();
    num[n] = BigRational::one();
    for d in 1..n {
        if n % d == 0 {
            num = poly_divmod(&num, &cyclotomic_poly(d)).0;
        }
    }
    num
}

/// Σ c_k x^k reduced mod Φ_n.
fn model(n: usize, terms: &[(usize, i64)]) -> Poly {
    let mut p = vec![BigRational::zero(); n];
    for &(k, c) in terms {
        p[k % n] += BigRational::from_integer(BigInt::from(c));
    }
    poly_divmod(&trim(p), &cyclotomic_poly(n)).1
}

fn exact(n: u32, terms: &[(usize, i64)]) -> Cyclotomic {
    let mut x = Cyclotomic::zero();
    for &(k, c) in terms {
        x += Cyclotomic::root_of_unity(n, k as i64).scale(c);
    }
    x
}

/// The model and the library agree on zero-ness of a - b.
fn agree(n: u32, a: &[(usize, i64)], b: &[(usize, i64)]) {
    let mut diff: Vec<(usize, i64)> = a.to_vec();
    diff.extend(b.iter().map(|&(k, c)| (k, -c)));
    let m = model(n as usize, &diff);
    let e = exact(n, a) - exact(n, b);
    assert_eq!(m.is_empty(), e.is_zero(), "n={n} a={a:?} b={b:?}");
}

#[test]
fn minimal_polynomial_of_zeta3() {
    assert!(model(3, &[(1, 1), (2, 1), (0, 1)]).is_empty());
    let x = Cyclotomic::root_of_unity(3, 1) + Cyclotomic::root_of_unity(3, 2);
    assert_eq!(x, Cyclotomic::from_integer(-1));
}

#[test]
fn golden_ratio_product() {
    // (ζ5 + ζ5^4)(ζ5^2 + ζ5^3) = ζ5^3 + ζ5^4 + ζ5^6 + ζ5^7
    let prod = vec![(3, 1), (4, 1), (6, 1), (7, 1)];
    agree(5, &prod, &[(0, -1)]);
    let a = exact(5, &[(1, 1), (4, 1)]);
    let b = exact(5, &[(2, 1), (3, 1)]);
    assert_eq!(&a * &b, Cyclotomic::from_integer(-1));
}

#[test]
fn i_sqrt2_squares_to_minus_two() {
    // (ζ8 + ζ8^3)^2 = ζ8^2 + 2ζ8^4 + ζ8^6
    agree(8, &[(2, 1), (4, 2), (6, 1)], &[(0, -2)]);
    let r = exact(8, &[(1, 1), (3, 1)]);
    assert_eq!(&r * &r, Cyclotomic::from_integer(-2));
    // the other combination ζ8 - ζ8^5 is 2ζ8, whose square is 4i
    let s = exact(8, &[(1, 1), (5, -1)]);
    assert_eq!(&s * &s, Cyclotomic::root_of_unity(4, 1).scale(4));
}

#[test]
fn random_identities_match_model() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for &n in &[5u32, 7, 8, 9, 12, 15, 16, 20, 21] {
        for _ in 0..10 {
            let a: Vec<(usize, i64)> =
                (0..4).map(|_| (rng.gen_range(0..n as usize), rng.gen_range(-3..=3))).collect();
            let b: Vec<(usize, i64)> =
                (0..4).map(|_| (rng.gen_range(0..n as usize), rng.gen_range(-3..=3))).collect();
            agree(n, &a, &b);
            agree(n, &a, &a);
            // products: compare exact product against the model of the expanded product
            let mut prod = Vec::new();
            for &(i, c) in &a {
                for &(j, d) in &b {
                    prod.push((i + j, c * d));
                }
            }
            let m = model(n as usize, &prod);
            let lhs = &exact(n, &a) * &exact(n, &b);
            let rhs = exact(n, &prod);
            assert_eq!(lhs, rhs);
            assert_eq!(m.is_empty(), lhs.is_zero());
        }
    }
}

#[test]
fn conjugate_of_sigma1() {
    let sigma1: Cyclotomic = "-1 + z(8)^1 + z(8)^3".parse().unwrap();
    let c = sigma1.conjugate();
    let (re, im) = embed_f64(&c);
    let (re0, im0) = embed_f64(&sigma1);
    assert!((re - -1.0).abs() < 1e-12 && (re0 - -1.0).abs() < 1e-12);
    assert!((im + im0).abs() < 1e-12);
    assert!((im0 - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn sign_examples() {
    let g = exact(5, &[(1, 1), (4, 1)]);
    assert_eq!(real_sign(&g).unwrap(), Sign::Positive);
    assert!((embed_f64(&g).0 - 0.618_033_988_749_895).abs() < 1e-12);
    // α = 2 - u^3 - ū^3 with u = ζ9
    let u3 = Cyclotomic::root_of_unity(9, 3);
    let alpha = Cyclotomic::from_integer(2) - &u3 - u3.conjugate();
    assert_eq!(alpha, Cyclotomic::from_integer(3));
    assert_eq!(real_sign(&alpha).unwrap(), Sign::Positive);
}

#[test]
fn orbits_and_fields() {
    let q = Cyclotomic::from_ratio(2, 3);
    assert_eq!(galois_orbit(&q), vec![q.clone()]);
    let z3 = Cyclotomic::root_of_unity(3, 1);
    assert_eq!(galois_orbit(&z3), vec![z3.clone(), Cyclotomic::root_of_unity(3, 2)]);
    let g = exact(5, &[(1, 1), (4, 1)]);
    assert_eq!(galois_orbit(&g).len(), 2);

    let empty: [&Cyclotomic; 0] = [];
    assert_eq!(field_generated(empty).unwrap(), FieldDescriptor::rationals());
    let f = field_generated([&g]).unwrap();
    assert_eq!(f.degree, 2);
    assert!(contains_named_sqrt(&f, 5).unwrap());
    let i2 = exact(8, &[(1, 1), (3, 1)]);
    let f = field_generated([&i2]).unwrap();
    assert_eq!(f.degree, 2);
    assert!(!f.is_real());
    assert!(contains_named_sqrt(&f, -2).unwrap());
    let qf = FieldDescriptor::rationals();
    assert!(contains_named_sqrt(&qf, 1).unwrap());
    assert!(contains_named_sqrt(&qf, 4).unwrap());
    assert!(!contains_named_sqrt(&qf, 2).unwrap());
}

#[test]
fn biquadratic_membership() {
    let s2 = cyclo::sqrt_of_integer(2).unwrap();
    let s7 = cyclo::sqrt_of_integer(7).unwrap();
    let f = field_generated([&(&s2 + &s7)]).unwrap();
    assert_eq!(f.degree, 4);
    for (d, inside) in [(2, true), (7, true), (14, true), (3, false), (-1, false), (-14, false)] {
        assert_eq!(contains_named_sqrt(&f, d).unwrap(), inside, "d={d}");
    }
}
