//! Counting polynomials: fit point counts over several prime fields with an
//! exact Lagrange interpolant, confirm it on held-out primes, and read off the
//! Euler characteristic as the value at `q = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Number of samples beyond the fit points that must agree with the fit.
pub const HELD_OUT: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingPolynomial {
    pub samples: Vec<(u64, BigInt)>,
    /// Coefficients in increasing degree.
    pub coeffs: Vec<BigRational>,
    pub degree_bound: usize,
    pub verified: bool,
}

impl CountingPolynomial {
    pub fn evaluate(&self, q: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * q + c)
    }

    /// Value at `q = 1`.
    pub fn chi(&self) -> BigInt {
        let v = self.evaluate(&BigRational::one());
        debug_assert!(v.is_integer());
        v.to_integer()
    }

    /// Render as `c0 + c1*q + ...` with zero coefficients omitted.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*q"),
                _ => format!("{c}*q^{k}"),
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Coefficients (increasing degree) of the unique polynomial of degree
/// `< points.len()` through the given points. Abscissae must be distinct.
pub fn lagrange_coefficients(points: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let n = points.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        // basis polynomial prod_{j != i} (q - xj) / (xi - xj)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = yi / denom;
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += b * &scale;
        }
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

/// Fit the first `degree_bound + 1` samples and check the rest.
pub fn interpolate_counts(samples: &[(u64, BigInt)], degree_bound: usize) -> Result<CountingPolynomial> {
    let needed = degree_bound + 1 + HELD_OUT;
    if samples.len() < needed {
        return Err(Error::InsufficientSamples { have: samples.len(), need: needed });
    }
    let mut primes: Vec<u64> = samples.iter().map(|s| s.0).collect();
    primes.sort_unstable();
    primes.dedup();
    if primes.len() != samples.len() {
        return Err(Error::InvalidInput("sampling primes must be pairwise distinct".into()));
    }
    let points: Vec<(BigRational, BigRational)> = samples[..=degree_bound]
        .iter()
        .map(|(p, c)| (BigRational::from_integer(BigInt::from(*p)), BigRational::from_integer(c.clone())))
        .collect();
    let coeffs = lagrange_coefficients(&points);
    let poly = CountingPolynomial { samples: samples.to_vec(), coeffs, degree_bound, verified: false };
    for (p, c) in &samples[degree_bound + 1..] {
        let predicted = poly.evaluate(&BigRational::from_integer(BigInt::from(*p)));
        if predicted != BigRational::from_integer(c.clone()) {
            return Err(Error::NonPolynomialCount {
                prime: *p,
                predicted: predicted.to_string(),
                observed: c.to_string(),
            });
        }
    }
    let at_one = poly.evaluate(&BigRational::one());
    if !at_one.is_integer() {
        return Err(Error::NonPolynomialCount {
            prime: 1,
            predicted: at_one.to_string(),
            observed: "integral Euler characteristic".into(),
        });
    }
    Ok(CountingPolynomial { verified: true, ..poly })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::sampling_primes;

    fn samples_of(f: impl Fn(i64) -> i64, count: usize) -> Vec<(u64, BigInt)> {
        sampling_primes(count).into_iter().map(|p| (p, BigInt::from(f(p as i64)))).collect()
    }

    #[test]
    fn projective_line() {
        let poly = interpolate_counts(&samples_of(|p| p + 1, 4), 1).unwrap();
        assert!(poly.verified);
        assert_eq!(poly.chi(), BigInt::from(2));
        assert_eq!(poly.render(), "1 + 1*q");
    }

    #[test]
    fn constant_count() {
        let poly = interpolate_counts(&samples_of(|_| 1, 3), 0).unwrap();
        assert_eq!(poly.chi(), BigInt::from(1));
    }

    #[test]
    fn projective_plane() {
        let poly = interpolate_counts(&samples_of(|p| p * p + p + 1, 5), 2).unwrap();
        assert_eq!(poly.chi(), BigInt::from(3));
    }

    #[test]
    fn held_out_mismatch_is_reported() {
        let s = samples_of(|p| p * p, 3);
        assert!(matches!(interpolate_counts(&s, 0), Err(Error::NonPolynomialCount { .. })));
    }

    #[test]
    fn too_few_samples() {
        let s = samples_of(|p| p, 3);
        assert!(matches!(interpolate_counts(&s, 1), Err(Error::InsufficientSamples { .. })));
    }
}
