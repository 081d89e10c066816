use zhat::dagcat::{fragment_left, Bits, Color, ColoredDag, FragmentFamily};
use zhat::kgroup::{
    char, tree_rhs, verify_defrag, verify_felder, verify_fubini, verify_projective_dominance,
    verify_star_identity, verify_tree_identity, KElement,
};

fn b(s: &str) -> Bits {
    s.parse().unwrap()
}

#[test]
fn star_identity_and_dominance_up_to_three_coordinates() {
    for lambda in [b("+"), b("-")] {
        for m in 1..=3 {
            assert!(verify_star_identity(lambda, m, 16).unwrap(), "{lambda} m={m}");
            assert!(verify_projective_dominance(lambda, m, 12).unwrap(), "{lambda} m={m}");
        }
    }
}

#[test]
fn tree_identity_with_a_four_coordinate_node() {
    assert!(verify_tree_identity(&[3, 1], 12).unwrap());
    assert!(verify_tree_identity(&[4], 12).unwrap());
}

#[test]
fn felder_in_a_wide_window() {
    for lambda in [b("+"), b("-")] {
        assert!(verify_felder(lambda, -10, 10, 20).unwrap());
    }
}

#[test]
fn defragmentation_of_four_coordinates() {
    assert!(verify_defrag(4, &[0, 2, 3], 10).unwrap());
    assert!(verify_fubini(4, &[3], &[1, 3], 10).unwrap());
}

#[test]
fn tree_rhs_is_a_finite_character() {
    let rhs = tree_rhs(&[1], 8).unwrap();
    assert_eq!(rhs.bit_len(), 1);
    assert!(rhs.iter().all(|(c, _)| c.depth <= 8));
}

#[test]
fn character_of_a_left_fragment_of_the_even_chain() {
    let even = ColoredDag::even_chain(12);
    let q = fragment_left(&even, b("-"), 10).unwrap();
    let t = q.truncation();
    // [-|±): the even chain with colors (-, 2k+1) and (+, 2k+2)
    let terms = (0..=5).flat_map(|k| [(Color::new(b("-"), 2 * k + 1), 1), (Color::new(b("+"), 2 * k + 2), 1)]);
    let expected = KElement::from_terms(1, terms.filter(|(c, _)| c.depth <= t), t).unwrap();
    assert_eq!(char(&q, t).unwrap(), expected);
    let fam = FragmentFamily::full(&even, 2, 10).unwrap();
    assert_eq!(fam.m(), 2);
}
