use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;
use tensor_rigidity::exactlinalg::{bareiss_rank, random_62bit_prime, rank_mod, smith_normal_form};
use tensor_rigidity::rng::seeded;
use tensor_rigidity::{Integers, KernelSide, Matrix, PrimeField, Rationals, Ring};

fn int_matrix(rows: usize, cols: usize, entries: &[i64]) -> Matrix<Integers> {
    let data: Vec<Vec<i64>> = (0..rows).map(|i| entries[i * cols..(i + 1) * cols].to_vec()).collect();
    Matrix::from_i64_rows(Integers, &data)
}

fn matrix_strategy(max: usize, lo: i64, hi: i64) -> impl Strategy<Value = Matrix<Integers>> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(lo..=hi, r * c).prop_map(move |v| int_matrix(r, c, &v))
    })
}

/// Ranks over GF(P) never exceed ranks over Q, and agree on random 0/1
/// matrices; a strict case is re-checked with a second prime.
#[test]
fn schwartz_zippel_rank_agreement() {
    let mut rng = seeded(41);
    let p1 = random_62bit_prime(&mut rng);
    let p2 = random_62bit_prime(&mut rng);
    let mut strict = 0;
    for _ in 0..10_000 {
        let (r, c) = (rng.random_range(1..=40), rng.random_range(1..=40));
        let entries: Vec<i64> = (0..r * c).map(|_| i64::from(rng.random_bool(0.5))).collect();
        let m = int_matrix(r, c, &entries);
        let exact = bareiss_rank(&m);
        let modular = rank_mod(&m, &p1);
        assert!(modular <= exact);
        if modular < exact {
            strict += 1;
            assert_eq!(rank_mod(&m, &p2), exact, "second prime also drops rank");
        }
    }
    assert_eq!(strict, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn kernels_annihilate(m in matrix_strategy(8, -3, 3)) {
        let q = m.reduce(&Rationals);
        let rank = q.rank();
        let right = q.kernel_basis(KernelSide::Right);
        prop_assert_eq!(right.dim(), q.cols() - rank);
        for v in &right.vectors {
            prop_assert!(q.mul_vec(v).iter().all(|x| Rationals.is_zero(x)));
        }
        let left = q.kernel_basis(KernelSide::Left);
        prop_assert_eq!(left.dim(), q.rows() - rank);
        for v in &left.vectors {
            prop_assert!(q.left_mul_vec(v).iter().all(|x| Rationals.is_zero(x)));
        }
        let f = PrimeField::new(7).unwrap();
        let m7 = m.reduce(&f);
        for v in m7.kernel_basis(KernelSide::Right).vectors {
            prop_assert!(m7.mul_vec(&v).iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn snf_predicts_prime_ranks(m in matrix_strategy(12, -5, 5)) {
        let snf = smith_normal_form(&m);
        for q in [2u64, 3, 5, 7, 11] {
            prop_assert_eq!(m.reduce(&PrimeField::new(q).unwrap()).rank(), snf.rank_mod(q));
        }
        prop_assert_eq!(snf.rank(), m.reduce(&Rationals).rank());
        prop_assert!(snf.elementary_divisors.windows(2).all(|w| (&w[1] % &w[0]) == BigInt::from(0)));
    }

    #[test]
    fn bareiss_agrees_with_rational_elimination(m in matrix_strategy(10, -9, 9)) {
        // fraction-freeness is asserted inside bareiss_rank at every division
        prop_assert_eq!(bareiss_rank(&m), m.reduce(&Rationals).echelon().pivots.len());
    }

    #[test]
    fn stacking_a_matrix_with_its_negation(a in matrix_strategy(5, -2, 2)) {
        let b = a.reduce(&Rationals);
        let neg = Matrix::from_vec(Rationals, b.rows(), b.cols(), b.entries().iter().map(|x| -x).collect()).unwrap();
        prop_assert_eq!(tensor_rigidity::stack_rank(&[b.clone(), neg]).unwrap(), b.rank());
    }

    #[test]
    fn dump_round_trip(m in matrix_strategy(6, -4, 4)) {
        let q = m.reduce(&Rationals);
        prop_assert_eq!(Matrix::from_dump(Rationals, &q.to_dump()).unwrap(), q);
    }
}
