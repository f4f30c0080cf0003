mod common;

use common::{in_integer_span, kernel_vectors_in_box};
use freefield::linalg::{hermite_normal_form, integer_kernel_basis, ActionMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=2, 2usize..=3).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-3i64..=3, n), m))
}

fn to_i64(rows: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, rng_seed: RngSeed::Fixed(7), failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn hnf_shape_and_lattice(rows in small_matrix()) {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let h = hermite_normal_form(&big);
        let mut last_pivot = None;
        for (i, row) in h.iter().enumerate() {
            let p = row.iter().position(|x| !x.is_zero()).expect("no zero rows");
            prop_assert!(last_pivot.is_none_or(|q| p > q));
            prop_assert!(row[p].is_positive());
            for above in &h[..i] {
                prop_assert!(!above[p].is_negative() && above[p] < row[p]);
            }
            last_pivot = Some(p);
        }
        // same row lattice both ways
        let hi = to_i64(&h);
        for r in &rows {
            prop_assert!(in_integer_span(&hi, r));
        }
        for r in &hi {
            prop_assert!(combination_exists(&rows, r), "{:?} not generated by {:?}", r, rows);
        }
    }

    #[test]
    fn kernel_bases_match_brute_force(rows in small_matrix()) {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let a = ActionMatrix::from_ints(&refs).unwrap();
        prop_assume!(a.is_full_rank());
        let basis = integer_kernel_basis(&a).unwrap().vectors;
        prop_assert_eq!(basis.len(), a.n() - a.m());
        let found = kernel_vectors_in_box(&a, 3);
        for b in &basis {
            let zero = a.rows().iter().all(|row| {
                row.iter().zip(b).fold(freefield::Scalar::zero(), |acc, (c, x)| &acc + &(c * &freefield::Scalar::from_int(*x))).is_zero()
            });
            prop_assert!(zero);
        }
        for k in &found {
            prop_assert!(in_integer_span(&basis, k), "{:?} not generated by {:?}", k, basis);
        }
    }
}

/// Brute force search for integer coefficients in `[-20, 20]` with
/// `Σ c_i rows_i = target`.
fn combination_exists(rows: &[Vec<i64>], target: &[i64]) -> bool {
    fn go(rows: &[Vec<i64>], acc: Vec<i64>, target: &[i64]) -> bool {
        match rows.split_first() {
            None => acc == target,
            Some((r, rest)) => (-20..=20).any(|c| {
                let next: Vec<i64> = acc.iter().zip(r).map(|(a, x)| a + c * x).collect();
                go(rest, next, target)
            }),
        }
    }
    go(rows, vec![0; target.len()], target)
}
