//! Exact rank over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::field::{Integers, PrimeField, Rationals};
use super::matrix::Matrix;
use crate::rng;

/// Largest dimension handled by Bareiss elimination before switching to the
/// two-prime modular scheme.
pub const BAREISS_MAX_DIM: usize = 200;

/// Fraction-free (Bareiss) elimination. Every intermediate division is
/// checked to be exact.
pub fn bareiss_rank(m: &Matrix<Integers>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let num = &row[j] * pivot - &lead * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                assert!(rem.is_zero(), "Bareiss step produced a non-integer entry");
                row[j] = q;
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Rank modulo a prime of an integer matrix.
pub fn rank_mod(m: &Matrix<Integers>, field: &PrimeField) -> usize {
    m.reduce(field).echelon().pivots.len()
}

/// Random prime in `[2^61, 2^62)`.
pub fn random_62bit_prime(rng: &mut impl Rng) -> PrimeField {
    loop {
        let candidate = rng.random_range((1u64 << 61)..(1u64 << 62)) | 1;
        if let Some(f) = PrimeField::new(candidate) {
            return f;
        }
    }
}

/// Exact rank of an integer matrix: Bareiss up to [`BAREISS_MAX_DIM`], above
/// that the ranks modulo two independent random 62-bit primes, falling back
/// to Bareiss when they disagree.
pub fn integer_rank(m: &Matrix<Integers>) -> usize {
    if m.rows().max(m.cols()) <= BAREISS_MAX_DIM {
        return bareiss_rank(m);
    }
    let mut rng = rng::stream(0x6261_7265_6973_7300, (m.rows() as u64) << 32 | m.cols() as u64);
    let p1 = random_62bit_prime(&mut rng);
    let mut p2 = random_62bit_prime(&mut rng);
    while p2 == p1 {
        p2 = random_62bit_prime(&mut rng);
    }
    let (r1, r2) = (rank_mod(m, &p1), rank_mod(m, &p2));
    if r1 == r2 {
        r1
    } else {
        bareiss_rank(m)
    }
}

/// Scales each row by the lcm of its denominators.
pub fn clear_denominators(m: &Matrix<Rationals>) -> Matrix<Integers> {
    let mut data = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        let row = m.row(i);
        let lcm = row.iter().fold(BigInt::one(), |acc, x: &BigRational| acc.lcm(x.denom()));
        data.extend(row.iter().map(|x| x.numer() * (&lcm / x.denom())));
    }
    Matrix::from_vec(Integers, m.rows(), m.cols(), data).expect("shape preserved")
}

pub(crate) fn rational_rank(m: &Matrix<Rationals>) -> usize {
    integer_rank(&clear_denominators(m))
}
