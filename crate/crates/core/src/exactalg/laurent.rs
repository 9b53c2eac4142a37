use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a Laurent monomial.
pub type Exponent = Vec<i64>;

/// Multivariate Laurent polynomial with integer coefficients. Terms are kept
/// in a `BTreeMap`, so iteration is lexicographic on exponent vectors, and
/// zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], 1)
    }

    pub fn monomial(exps: Exponent, coeff: i64) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        p.add_term(exps, BigInt::from(coeff));
        p
    }

    /// The variable `x_{i+1}` (zero-based index).
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[i64]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, exps: Exponent, coeff: BigInt) {
        assert_eq!(exps.len(), self.nvars, "exponent length");
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        let mut out = Self::zero(self.nvars);
        if s.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * s);
        }
        out
    }

    /// Multiply by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        assert_eq!(shift.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPoly { nvars: self.nvars, terms }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    /// Evaluate at a point with all coordinates nonzero rationals.
    pub fn evaluate(&self, point: &[num_rational::BigRational]) -> num_rational::BigRational {
        use num_rational::BigRational;
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for (x, &k) in point.iter().zip(e) {
                let base = if k < 0 { x.recip() } else { x.clone() };
                for _ in 0..k.unsigned_abs() {
                    term *= &base;
                }
            }
            acc += term;
        }
        acc
    }
}

/// Exact equality of canonical term maps.
pub fn laurent_eq(a: &LaurentPoly, b: &LaurentPoly) -> Result<bool> {
    a.check_vars(b)?;
    Ok(a.terms == b.terms)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("variable count")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(&-rhs).expect("variable count")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("variable count")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical rendering, e.g. `x1^-1 + x1^-1*x2`, terms in lexicographic
    /// order of exponent vectors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p != 0)
                .map(|(i, &p)| if p == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, p) })
                .collect();
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_and_expanded_agree() {
        let x1inv = LaurentPoly::monomial(vec![-1, 0], 1);
        let x2 = LaurentPoly::variable(2, 1);
        let expanded = &x1inv + &LaurentPoly::monomial(vec![-1, 1], 1);
        let factored = &x1inv * &(&LaurentPoly::one(2) + &x2);
        assert!(laurent_eq(&expanded, &factored).unwrap());
    }

    #[test]
    fn zero_polys_equal() {
        assert!(laurent_eq(&LaurentPoly::zero(3), &LaurentPoly::zero(3)).unwrap());
    }

    #[test]
    fn distinct_variables_differ() {
        assert!(!laurent_eq(&LaurentPoly::variable(2, 0), &LaurentPoly::variable(2, 1)).unwrap());
    }

    #[test]
    fn variable_count_mismatch_is_an_error() {
        assert!(laurent_eq(&LaurentPoly::zero(2), &LaurentPoly::zero(3)).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = LaurentPoly::variable(2, 0);
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).num_terms(), 0);
    }

    #[test]
    fn canonical_rendering() {
        let p = &LaurentPoly::monomial(vec![-1, 0], 1) + &LaurentPoly::monomial(vec![-1, 1], 1);
        assert_eq!(p.to_string(), "x1^-1 + x1^-1*x2");
        let q = &LaurentPoly::monomial(vec![0, 0], -2) + &LaurentPoly::monomial(vec![2, -1], 3);
        assert_eq!(q.to_string(), "-2 + 3*x1^2*x2^-1");
        assert_eq!(LaurentPoly::zero(1).to_string(), "0");
    }
}
