mod common;

use proptest::prelude::*;
use qtem_core::exact::{exact_element_matrix, ExactFields};
use qtem_core::matrices::closed_form;
use qtem_core::verify::random_triangle;
use qtem_core::MatrixKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_forms_equal_exact_integrals(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tri = common::random_rational_triangle(&mut rng);
        let inputs = tri.stripped_inputs();
        let fields = ExactFields::new(&tri);
        for kind in MatrixKind::ALL {
            prop_assert_eq!(closed_form(kind, &inputs), fields.matrix(kind), "{}", kind);
        }
    }

    #[test]
    fn algebraic_identities_hold(seed in any::<u64>()) {
        let t = random_triangle(&mut ChaCha8Rng::seed_from_u64(seed));
        for (name, dev) in common::algebraic_invariants(&t) {
            prop_assert!(dev <= 1e-13, "{} = {:e}", name, dev);
        }
    }

    #[test]
    fn structural_properties_hold(seed in any::<u64>()) {
        let t = random_triangle(&mut ChaCha8Rng::seed_from_u64(seed));
        let s = common::structure(&t);
        prop_assert!(s.curl_rank_ratio <= 1e-12);
        prop_assert!(s.annihilation < 1e-11);
        prop_assert!(s.vector_mass_pd);
        prop_assert_eq!(s.gradient_rank(), 5);
    }
}

#[test]
fn mirror_pairing_is_an_involution() {
    for kind in MatrixKind::ALL {
        let (p, s, t) = kind.mirror_partner();
        let (back, s2, t2) = p.mirror_partner();
        assert_eq!(back, kind);
        assert_eq!(s * s2, 1.0);
        assert_eq!(t, t2);
        assert_eq!(kind.vector_sides(), p.vector_sides());
    }
}

#[test]
fn listed_curl_entry_differs_from_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tri = common::random_rational_triangle(&mut rng);
    let inputs = tri.stripped_inputs();
    let truth = exact_element_matrix(MatrixKind::DVxDVx, &tri);
    let listed = qtem_core::matrices::dvx_dvx_listed(&inputs);
    for i in 0..6 {
        for j in 0..6 {
            assert_eq!(listed[i][j] == truth[i][j], (i, j) != (2, 2), "({i},{j})");
        }
    }
}
