use proptest::prelude::*;
use tqft_core::exactmath::{Field, Rational};
use tqft_core::frobenius::WideFrobeniusAlgebra;
use tqft_core::linalg::{congruence_diagonalize, Matrix};
use tqft_core::quantize::{build_algebra, extract_recurrence, predict, InvariantSequence};

fn small() -> impl Strategy<Value = Rational> {
    (-6i64..7, 1i64..4).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

/// A wide algebra whose Gram matrix is nondegenerate, so its `η`-sequence
/// has minimal order exactly `dim`.
fn minimal_algebra() -> impl Strategy<Value = WideFrobeniusAlgebra<Rational>> {
    (1usize..=4)
        .prop_flat_map(|n| (prop::collection::vec(small(), n), prop::collection::vec(small(), n)))
        .prop_filter_map("degenerate pairing", |(rec, eta)| {
            let alg = WideFrobeniusAlgebra::new(rec, eta).ok()?;
            (!alg.gram_matrix().determinant().is_zero()).then_some(alg)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extraction_recovers_generator(alg in minimal_algebra()) {
        let n = alg.dim();
        let seq = InvariantSequence::new(alg.eta_sequence(2 * n));
        let rec = extract_recurrence(&seq).unwrap();
        prop_assert_eq!(rec.order, n);
        prop_assert_eq!(&rec.coefficients[..], alg.recurrence());
        prop_assert!(rec.certified);
        let rebuilt = build_algebra(&seq).unwrap();
        prop_assert_eq!(rebuilt.gram_matrix(), alg.gram_matrix());
        let far = alg.eta_sequence(5 * n);
        for g in 2 * n..5 * n {
            prop_assert_eq!(&predict(&seq, g).unwrap(), &far[g]);
        }
    }

    #[test]
    fn pairing_is_invariant(alg in minimal_algebra()) {
        let n = alg.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (alg.unit_vector(i), alg.unit_vector(j), alg.unit_vector(k));
                    prop_assert_eq!(
                        alg.pairing(&alg.multiply(&x, &y), &z),
                        alg.pairing(&x, &alg.multiply(&y, &z))
                    );
                }
            }
        }
    }

    #[test]
    fn shift_drops_the_first_value(alg in minimal_algebra()) {
        let n = alg.dim();
        let seq = InvariantSequence::new(alg.eta_sequence(2 * n + 2));
        let shifted = seq.shifted();
        prop_assert_eq!(shifted.genus_offset, 1);
        let a = extract_recurrence(&seq).unwrap();
        let b = extract_recurrence(&shifted).unwrap();
        // Dropping a value can only lower the order.
        prop_assert!(b.order <= a.order);
        if b.order == a.order {
            prop_assert_eq!(a.coefficients, b.coefficients);
        }
    }

    #[test]
    fn congruence_postconditions(entries in prop::collection::vec(-3i64..4, 10), zero_diag in any::<bool>()) {
        let mut g = Matrix::<Rational>::zeros(4, 4);
        let mut it = entries.iter();
        for i in 0..4 {
            for j in i..4 {
                let v = if i == j && zero_diag { 0 } else { *it.next().unwrap() };
                g[(i, j)] = Rational::from(v);
                g[(j, i)] = Rational::from(v);
            }
        }
        let (c, d) = congruence_diagonalize(&g);
        let diag = c.transpose().mul(&g).mul(&c);
        prop_assert!(diag.is_diagonal());
        prop_assert_eq!(diag.diagonal(), d.clone());
        prop_assert!(!c.determinant().is_zero());
        prop_assert_eq!(d.iter().filter(|x| !x.is_zero()).count(), g.rank());
    }
}
