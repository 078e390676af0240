use num_bigint::BigInt;
use proptest::prelude::*;
use tqft_core::repvar::{brute_force_unbounded, builtin, Axiom, FiniteGroup, RepvarError, SurfaceCounter};

const BUILTINS: [&str; 10] = ["trivial", "C2", "C3", "C5", "D3", "D4", "D5", "S3", "Q8", "S4"];

#[test]
fn convolution_matches_enumeration() {
    for name in BUILTINS {
        let g = builtin(name).unwrap();
        let counter = SurfaceCounter::new(&g);
        for genus in 0..=3 {
            if (g.order() as u64).pow(2 * genus as u32) > 300_000 {
                continue;
            }
            assert_eq!(
                counter.genus_count(genus),
                BigInt::from(brute_force_unbounded(&g, genus)),
                "{name} genus {genus}"
            );
        }
    }
}

#[test]
fn split_law() {
    for name in BUILTINS {
        let g = builtin(name).unwrap();
        let counter = SurfaceCounter::new(&g);
        let n = BigInt::from(g.order());
        for genus in 0..=3 {
            let closed = counter.genus_count(genus);
            for k in 1..=3u32 {
                assert_eq!(counter.pointed_count(genus, k as usize), &closed * n.pow(k - 1), "{name} g={genus} k={k}");
            }
        }
    }
}

#[test]
fn abelian_counts_are_powers() {
    for m in [2usize, 3, 4, 7] {
        let g = builtin(&format!("C{m}")).unwrap();
        let counter = SurfaceCounter::new(&g);
        for genus in 0..5 {
            assert_eq!(counter.genus_count(genus), BigInt::from(m).pow(2 * genus as u32));
        }
    }
}

#[test]
fn known_values() {
    let s3 = builtin("S3").unwrap();
    let counter = SurfaceCounter::new(&s3);
    assert_eq!(counter.genus_count(1), BigInt::from(18));
    assert_eq!(counter.genus_count(2), BigInt::from(486));
    let q8 = builtin("Q8").unwrap();
    assert_eq!(SurfaceCounter::new(&q8).commuting_pairs(), BigInt::from(40));
}

#[test]
fn broken_table_names_the_axiom() {
    // Row 1 makes 1·1 = 1, so 1 has no inverse.
    let err = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
    assert!(matches!(err, RepvarError::NotAGroup { axiom: Axiom::Inverse, .. }), "{err:?}");
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_groups_satisfy_identities(a in permutation(5), b in permutation(5)) {
        let g = FiniteGroup::from_permutations(&[a, b], 200).unwrap();
        let counter = SurfaceCounter::new(&g);
        let n = g.order();
        let c = counter.classes().class_count();
        let twist = counter.twist();
        prop_assert_eq!(&twist.trace, &BigInt::from(n * c));
        prop_assert_eq!(counter.commuting_pairs(), twist.trace.clone());
        prop_assert_ne!(twist.idempotent_up_to_order, Some(false));
        if n <= 24 {
            prop_assert_eq!(counter.genus_count(2), BigInt::from(brute_force_unbounded(&g, 2)));
        }
    }
}
