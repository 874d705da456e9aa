mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cyclotomic_ring_axioms(a in elem(), b in elem(), c in elem()) {
        ring_axioms(a, b, c)?;
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in elem(), b in elem()) {
        conjugation_involution(a, b)?;
    }

    #[test]
    fn box_product_is_orthogonal(g in group_index(), u1 in vector(), u2 in vector()) {
        box_orthogonality(g, u1, u2)?;
    }

    #[test]
    fn words_preserve_the_form(g in group_index(), w in word(6), x in vector(), y in vector()) {
        isometry_invariance(g, w, x, y)?;
    }

    #[test]
    fn restriction_is_multiplicative(p in 0..3usize, a in letters(), b in letters()) {
        restriction_multiplicativity(p, a, b)?;
    }

    #[test]
    fn conjugated_braids_keep_their_center(s in 0..all_sides().len(), w in word(3)) {
        center_trichotomy(s, w)?;
    }
}
