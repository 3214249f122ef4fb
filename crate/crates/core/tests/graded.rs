mod common;

use kuranishi_core::contraction::{build_contraction, validate_contraction};
use kuranishi_core::graded::homology;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..4, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_characteristic_of_homology(seed in any::<u64>(), dims in dims()) {
        let c = common::random_complex(&mut common::rng(seed), &dims);
        let h = homology(&c);
        let chi_h: i64 = h
            .space
            .degrees()
            .into_iter()
            .map(|j| if j.rem_euclid(2) == 0 { 1 } else { -1 } * h.space.dim(j) as i64)
            .sum();
        prop_assert_eq!(c.euler_characteristic(), chi_h);
    }

    #[test]
    fn double_suspension(seed in any::<u64>(), dims in dims()) {
        let c = common::random_complex(&mut common::rng(seed), &dims);
        let ss = c.suspend().suspend();
        prop_assert_eq!(ss.d.to_dense(), c.d.to_dense());
        for j in c.space.degrees() {
            prop_assert_eq!(ss.space.dim(j + 2), c.space.dim(j));
            for (a, b) in ss.space.labels(j + 2).iter().zip(c.space.labels(j)) {
                prop_assert_eq!(a, &format!("s·s·{b}"));
            }
        }
        prop_assert_eq!(ss.euler_characteristic(), c.euler_characteristic());
    }

    #[test]
    fn built_contractions_satisfy_side_conditions(seed in any::<u64>(), dims in dims()) {
        let c = common::random_complex(&mut common::rng(seed), &dims);
        let (k, split) = build_contraction(&c);
        let r = validate_contraction(&k);
        prop_assert!(r.is_ok(), "{:?}", r);
        prop_assert!(validate_contraction(&k.suspend()).is_ok());
        // the splitting read back from (∇, π, h) spans the same summands
        let back = k.splitting();
        for (a, b) in [
            (&back.boundaries, &split.boundaries),
            (&back.harmonic, &split.harmonic),
            (&back.complement, &split.complement),
        ] {
            for (j, m) in a {
                let n = &b[j];
                prop_assert_eq!(m.rank(), n.rank());
                prop_assert_eq!(m.hstack(n).rank(), n.rank());
            }
        }
        let h = homology(&c);
        for j in c.space.degrees() {
            prop_assert_eq!(k.small.space.dim(j), h.space.dim(j));
        }
    }
}
