//! Dense univariate polynomials with exact integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial over `BigInt`, stored lowest degree first with trailing zeros
/// trimmed. The zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Coefficients lowest degree first; trailing zeros are trimmed.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c * t^degree`.
    pub fn monomial(c: BigInt, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest degree first, no trailing zeros.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl fmt::Display for IntPolynomial {
    /// Ascending powers, e.g. `1 + 12 t + 66 t^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            if i == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs} ")?;
                }
                if i == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// Polynomial over `BigRational`; only what the closed-form counts need.
/// Kept crate private: every public result is integral.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct RatPolynomial {
    coeffs: Vec<BigRational>,
}

impl RatPolynomial {
    pub(crate) fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub(crate) fn from_int(p: &IntPolynomial) -> Self {
        Self {
            coeffs: p
                .coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    pub(crate) fn add_scaled(&mut self, other: &Self, factor: &BigRational) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), BigRational::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            self.coeffs[i] += c * factor;
        }
    }

    pub(crate) fn scale(&mut self, factor: &BigRational) {
        for c in &mut self.coeffs {
            *c *= factor;
        }
    }

    /// `None` if any coefficient has a nontrivial denominator.
    pub(crate) fn into_int(self) -> Option<IntPolynomial> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs {
            if !c.is_integer() {
                return None;
            }
            coeffs.push(c.to_integer());
        }
        Some(IntPolynomial::from_coeffs(coeffs))
    }
}
