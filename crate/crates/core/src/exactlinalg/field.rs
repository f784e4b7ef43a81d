use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::Matrix;

/// Coefficient ring of a [`Matrix`].
///
/// The ring is a value (not just a type) so that prime fields can carry
/// their modulus. Two matrices can only be combined when their rings
/// compare equal.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_integer(&self, v: &BigInt) -> Self::Elem;
    /// Tag used in matrix dumps: `Z`, `Q`, `GF(q)` or `R`.
    fn tag(&self) -> String;
    fn parse_elem(&self, s: &str) -> Option<Self::Elem>;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Exact rank. Fields with a faster exact route override this.
    fn rank_of(&self, m: &Matrix<Self>) -> usize
    where
        Self: Sized,
    {
        m.echelon().pivots.len()
    }
}

/// The integers, with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn from_integer(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn tag(&self) -> String {
        "Z".to_string()
    }
    fn parse_elem(&self, s: &str) -> Option<BigInt> {
        s.trim().parse().ok()
    }
}

/// The rationals, with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_integer(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn tag(&self) -> String {
        "Q".to_string()
    }
    fn parse_elem(&self, s: &str) -> Option<BigRational> {
        s.trim().parse().ok()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn rank_of(&self, m: &Matrix<Self>) -> usize {
        super::bareiss::rational_rank(m)
    }
}

/// The prime field `GF(p)` for a prime `p < 2^63`, elements kept in `[0, p)`.
///
/// Primality of `p` is the caller's responsibility; [`PrimeField::new`]
/// checks it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Option<Self> {
        (p < (1 << 63) && num_prime::nt_funcs::is_prime64(p)).then_some(Self { p })
    }

    /// The fixed large field used for pseudo-generic evaluation.
    pub fn large() -> Self {
        Self { p: LARGE_PRIME }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

/// Largest prime below `2^62`.
pub const LARGE_PRIME: u64 = (1 << 62) - 57;

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }
    fn from_integer(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = ((v % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }
    fn tag(&self) -> String {
        format!("GF({})", self.p)
    }
    fn parse_elem(&self, s: &str) -> Option<u64> {
        let v: BigInt = s.trim().parse().ok()?;
        Some(self.from_integer(&v))
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }
}

/// Double-precision reals. Only the ring operations are provided; this ring
/// exists so that the rigidity map and its Jacobian can be evaluated in
/// floating point by the completion oracle.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Reals;

impl Ring for Reals {
    type Elem = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn is_zero(&self, a: &f64) -> bool {
        *a == 0.0
    }
    fn from_i64(&self, v: i64) -> f64 {
        v as f64
    }
    fn from_integer(&self, v: &BigInt) -> f64 {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn tag(&self) -> String {
        "R".to_string()
    }
    fn parse_elem(&self, s: &str) -> Option<f64> {
        s.trim().parse().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_prime_is_prime_and_62_bit() {
        assert!(num_prime::nt_funcs::is_prime64(LARGE_PRIME));
        const { assert!(LARGE_PRIME < 1 << 62 && LARGE_PRIME > 1 << 61) };
        // no prime strictly between LARGE_PRIME and 2^62
        assert!(((LARGE_PRIME + 1)..(1 << 62)).all(|x| !num_prime::nt_funcs::is_prime64(x)));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.from_integer(&BigInt::from(-15)), 6);
        assert!(PrimeField::new(9).is_none());
        let big = PrimeField::large();
        let a = big.from_i64(-123456789);
        assert_eq!(big.mul(&a, &big.inv(&a).unwrap()), 1);
    }
}
