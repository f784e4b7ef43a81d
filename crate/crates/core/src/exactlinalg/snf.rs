//! Smith normal form of integer matrices.
//!
//! The elementary divisors `d_1 | d_2 | ... | d_r` determine the rank over
//! every prime field at once: `rank_GF(p) = #{i : p ∤ d_i}`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::field::Integers;
use super::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    /// Positive elementary divisors, each dividing the next. Their count is
    /// the rank over the rationals.
    #[serde(serialize_with = "serialize_bigints")]
    pub elementary_divisors: Vec<BigInt>,
    /// Primes dividing some elementary divisor, ascending. These are exactly
    /// the primes over which the rank drops below the rational rank.
    #[serde(serialize_with = "serialize_bigints")]
    pub bad_primes: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.elementary_divisors.len()
    }

    pub fn rank_mod(&self, q: u64) -> usize {
        let q = BigInt::from(q);
        self.elementary_divisors.iter().filter(|d| !(*d % &q).is_zero()).count()
    }

    /// Whether all elementary divisors are 1 (full rank modulo every prime).
    pub fn is_unimodular(&self) -> bool {
        self.bad_primes.is_empty()
    }
}

/// Integers as JSON numbers when they fit in `u64`/`i64`, strings otherwise.
pub fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use num_traits::ToPrimitive;
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(i) => seq.serialize_element(&i)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

pub fn smith_normal_form(m: &Matrix<Integers>) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut divisors = Vec::new();

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t..rows, t..cols) else {
            break;
        };
        move_to(&mut a, t, pi, pj);
        loop {
            clear_column_and_row(&mut a, t);
            let in_line = (t + 1..rows)
                .map(|i| (i, t))
                .chain((t + 1..cols).map(|j| (t, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i1, j1), &(i2, j2)| a[i1][j1].abs().cmp(&a[i2][j2].abs()));
            if let Some((i, j)) = in_line {
                // a remainder smaller than the pivot survived; make it the pivot
                move_to(&mut a, t, i, j);
                continue;
            }
            let pivot = a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let src = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&src) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        divisors.push(a[t][t].abs());
    }

    let bad_primes = divisors.last().map_or_else(Vec::new, prime_factors);
    debug_assert!(divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    SnfResult { elementary_divisors: divisors, bad_primes }
}

fn min_abs_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn move_to(a: &mut [Vec<BigInt>], t: usize, i: usize, j: usize) {
    a.swap(t, i);
    if j != t {
        for row in a.iter_mut() {
            row.swap(t, j);
        }
    }
}

/// Euclidean steps that reduce column `t` and row `t` modulo the pivot.
fn clear_column_and_row(a: &mut [Vec<BigInt>], t: usize) {
    let pivot = a[t][t].clone();
    let (top, rest) = a.split_at_mut(t + 1);
    let pivot_row = &top[t];
    for row in rest.iter_mut() {
        if row[t].is_zero() {
            continue;
        }
        let q = row[t].div_floor(&pivot);
        for (x, y) in row.iter_mut().zip(pivot_row).skip(t) {
            *x -= &q * y;
        }
    }
    let cols = a[t].len();
    for j in t + 1..cols {
        if a[t][j].is_zero() {
            continue;
        }
        let q = a[t][j].div_floor(&pivot);
        for row in a.iter_mut().skip(t) {
            let y = row[t].clone();
            row[j] -= &q * y;
        }
    }
}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    if n.is_one() || n.is_zero() {
        return Vec::new();
    }
    let (_, digits) = n.to_u32_digits();
    let n = BigUint::new(digits);
    num_prime::nt_funcs::factorize(n)
        .into_keys()
        .map(|p| BigInt::from_biguint(Sign::Plus, p))
        .collect()
}
