//! Scalar fields used by every exact computation in the crate.
//!
//! A [`Field`] is a small context value (the prime modulus for `F_p`, nothing
//! for `Q`) that knows how to do arithmetic on its element type. Keeping the
//! context outside the elements lets the same generic code run over a prime
//! chosen at runtime and over arbitrary-precision rationals.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Field elements `λ` with `det(m - λ) = 0`, in a deterministic order.
    /// Only eigenvalues lying in the field itself are reported.
    fn eigenvalues(&self, m: &super::ExactMatrix<Self>) -> Vec<Self::Elem>;

    /// Reduce an exact rational into this field.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;

    /// Characteristic, `0` for the rationals.
    fn characteristic(&self) -> u64;

    /// Short human-readable rendering of an element.
    fn render(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// The prime field `F_p` with canonical representatives `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not a supported prime modulus")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// All elements `0..p` in order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn eigenvalues(&self, m: &super::ExactMatrix<Self>) -> Vec<u64> {
        self.elements()
            .filter(|lam| {
                let shifted = m.sub(&super::ExactMatrix::identity(*self, m.rows()).scale(lam));
                shifted.rank() < m.rows()
            })
            .collect()
    }

    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let p = BigInt::from(self.p);
        let num = (q.numer() % &p + &p) % &p;
        let den = (q.denom() % &p + &p) % &p;
        let den = den.to_u64().unwrap_or(0);
        if den == 0 {
            return Err(Error::BadReduction { prime: self.p });
        }
        let num = num.to_u64().unwrap_or(0);
        Ok(self.mul(&num, &self.inv(&den).expect("nonzero")))
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
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
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn eigenvalues(&self, m: &super::ExactMatrix<Self>) -> Vec<BigRational> {
        rational_eigenvalues(m)
    }

    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// Rational roots of the characteristic polynomial. The polynomial is
/// recovered exactly by evaluating `det(m - t)` at `n + 1` integers and
/// interpolating; candidates then come from the rational root test.
fn rational_eigenvalues(m: &super::ExactMatrix<Rationals>) -> Vec<BigRational> {
    let n = m.rows();
    if n == 0 {
        return Vec::new();
    }
    let f = Rationals;
    let points: Vec<(BigRational, BigRational)> = (0..=n as i64)
        .map(|t| {
            let t = f.from_i64(t);
            let shifted = m.sub(&super::ExactMatrix::identity(f, n).scale(&t));
            (t, shifted.determinant().expect("square"))
        })
        .collect();
    let coeffs = super::interp::lagrange_coefficients(&points);
    // Clear denominators to get an integer polynomial.
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer_lcm(&acc, c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    // Strip factors of t (zero roots).
    let mut roots = Vec::new();
    let mut low = 0;
    while low < ints.len() && ints[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(BigRational::zero());
    }
    let poly = &ints[low..];
    if poly.len() <= 1 {
        return roots;
    }
    let a0 = poly[0].abs();
    let an = poly[poly.len() - 1].abs();
    let eval = |x: &BigRational| {
        poly.iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    };
    let mut candidates = Vec::new();
    for pn in small_divisors(&a0) {
        for qd in small_divisors(&an) {
            let r = BigRational::new(pn.clone(), qd.clone());
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();
    for c in candidates {
        if eval(&c).is_zero() {
            roots.push(c);
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.lcm(b)
}

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    // Characteristic polynomials here have tiny coefficients; trial division is fine.
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `count` primes that are at least 5.
pub fn sampling_primes(count: usize) -> Vec<u64> {
    (5u64..).filter(|&n| is_prime(n)).take(count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.sub(&2, &5), 4);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.from_i64(-1), 6);
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn reduction_of_rationals() {
        let f = PrimeField::new(5).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half).unwrap(), 3);
        let fifth = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert!(f.from_rational(&fifth).is_err());
    }

    #[test]
    fn first_sampling_primes() {
        assert_eq!(sampling_primes(5), vec![5, 7, 11, 13, 17]);
    }

    #[test]
    fn rational_eigenvalues_of_diagonal() {
        let f = Rationals;
        let m = super::super::ExactMatrix::from_i64(f, &[vec![2, 0, 0], vec![0, -1, 0], vec![0, 0, 2]]);
        assert_eq!(f.eigenvalues(&m), vec![f.from_i64(-1), f.from_i64(2)]);
        let rot = super::super::ExactMatrix::from_i64(f, &[vec![0, -1], vec![1, 0]]);
        assert!(f.eigenvalues(&rot).is_empty());
    }
}
