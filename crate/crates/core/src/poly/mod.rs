//! Exact univariate polynomials with arbitrary-precision integer coefficients.

mod roots;

pub use roots::{complex_roots, ComplexInterval};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("polynomial of degree {degree} does not fit the transform with n = {n}")]
    DegreeExceeds { degree: usize, n: usize },
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("root iteration did not converge (worst residual {residual:e}, tolerance {tolerance:e})")]
    NoConvergence { residual: f64, tolerance: f64 },
}

/// Unit roundoff of `f64`.
pub(crate) const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Coefficients lowest power first; the highest stored coefficient is nonzero
/// (the zero polynomial stores nothing).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial::monomial(BigInt::one(), 0)
    }

    /// `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        IntPolynomial::new(coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: i64) -> Self {
        IntPolynomial::from_i64(&[-r, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    /// `p(-x)`.
    pub fn negate_argument(&self) -> Self {
        IntPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// `x^n p(-1/x)`: coefficient `k` moves to power `n - k` with sign `(-1)^k`.
    ///
    /// Maps the broken-circuit-free forest polynomial of an `n`-vertex graph
    /// to its chromatic polynomial. Applying it twice multiplies by `(-1)^n`;
    /// see [`IntPolynomial::inverse_whitney_transform`].
    pub fn whitney_transform(&self, n: usize) -> Result<Self, PolyError> {
        if self.degree() > n {
            return Err(PolyError::DegreeExceeds {
                degree: self.degree(),
                n,
            });
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[n - k] = if k % 2 == 1 { -c } else { c.clone() };
        }
        Ok(IntPolynomial::new(coeffs))
    }

    /// `(-x)^n p(-1/x)`, the inverse of [`IntPolynomial::whitney_transform`]
    /// for the same `n`. Recovers the forest polynomial from a chromatic one.
    pub fn inverse_whitney_transform(&self, n: usize) -> Result<Self, PolyError> {
        let t = self.whitney_transform(n)?;
        Ok(if n % 2 == 1 { -t } else { t })
    }

    pub fn derivative(&self) -> Self {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Horner evaluation at a complex point with a running error bound: the
    /// returned `(value, bound)` satisfies `|p(z) - value| <= bound`,
    /// including the rounding of coefficients to `f64`.
    pub fn eval_complex(&self, z: Complex64) -> (Complex64, f64) {
        let c: Vec<f64> = self
            .coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
            .collect();
        horner_with_bound(&c, z)
    }

    /// Divide by `x - r`; returns the quotient and remainder `p(r)`.
    pub fn div_linear(&self, r: &BigInt) -> (Self, BigInt) {
        if self.is_zero() {
            return (IntPolynomial::zero(), BigInt::zero());
        }
        let mut quotient = vec![BigInt::zero(); self.coeffs.len() - 1];
        let mut acc = BigInt::zero();
        for k in (0..self.coeffs.len()).rev() {
            acc = acc * r + &self.coeffs[k];
            if k > 0 {
                quotient[k - 1] = acc.clone();
            }
        }
        (IntPolynomial::new(quotient), acc)
    }

    /// Whether every coefficient of `self` is at most the matching one of `other`.
    pub fn coefficientwise_le(&self, other: &IntPolynomial) -> bool {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).all(|k| self.coeff(k) <= other.coeff(k))
    }

    /// Whether the coefficients alternate in sign (zeros allowed) from the
    /// leading term down.
    pub fn signs_alternate(&self) -> bool {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| c.is_zero() || (c.is_positive() == (d - k).is_multiple_of(2)))
    }
}

/// Horner's rule on `f64` coefficients with an a-priori bound accumulated
/// alongside the value.
pub(crate) fn horner_with_bound(coeffs: &[f64], z: Complex64) -> (Complex64, f64) {
    let r = z.norm();
    let mut value = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0f64;
    for &c in coeffs.iter().rev() {
        value = value * z + c;
        magnitude = magnitude * r + c.abs();
    }
    let n = coeffs.len() as f64;
    // complex multiply-add is within a few units of roundoff per step
    let bound = 8.0 * (n + 1.0) * UNIT_ROUNDOFF * magnitude;
    (value, bound * (1.0 + 1e-6))
}

impl fmt::Display for IntPolynomial {
    /// `[c0, c1, ...]`, lowest power first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        if self.is_zero() {
            f.write_str("0")?;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = if self.is_zero() {
            vec!["0".to_string()]
        } else {
            self.coeffs.iter().map(BigInt::to_string).collect()
        };
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        let coeffs = strings
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| D::Error::custom(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

fn zip_coeffs(a: &IntPolynomial, b: &IntPolynomial, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> IntPolynomial {
    let len = a.coeffs.len().max(b.coeffs.len());
    let zero = BigInt::zero();
    IntPolynomial::new(
        (0..len)
            .map(|k| op(a.coeffs.get(k).unwrap_or(&zero), b.coeffs.get(k).unwrap_or(&zero)))
            .collect(),
    )
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        zip_coeffs(self, rhs, |a, b| a + b)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        zip_coeffs(self, rhs, |a, b| a - b)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
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

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPolynomial> for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: &IntPolynomial) -> IntPolynomial {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -&self
    }
}

impl std::iter::Sum for IntPolynomial {
    fn sum<I: Iterator<Item = IntPolynomial>>(iter: I) -> Self {
        iter.fold(IntPolynomial::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for IntPolynomial {
    fn product<I: Iterator<Item = IntPolynomial>>(iter: I) -> Self {
        iter.fold(IntPolynomial::one(), |acc, p| acc * p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn ring_arithmetic() {
        assert_eq!(p(&[0, 1]) * p(&[-1, 1]), p(&[0, -1, 1]));
        assert_eq!(p(&[3, 0, 2]) + IntPolynomial::zero(), p(&[3, 0, 2]));
        assert_eq!(p(&[1, 2, 3]) - p(&[1, 2, 3]), IntPolynomial::zero());
        assert_eq!(p(&[1, 1]).shift(2), p(&[0, 0, 1, 1]));
        assert_eq!(p(&[1, 2, 3]).negate_argument(), p(&[1, -2, 3]));
        assert_eq!(p(&[5, 0, 0]).degree(), 0);
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn whitney_transform_examples() {
        let triangle = p(&[1, 3, 2]);
        assert_eq!(triangle.whitney_transform(3).unwrap(), p(&[0, 2, -3, 1]));
        assert_eq!(p(&[1]).whitney_transform(2).unwrap(), p(&[0, 0, 1]));
        assert_eq!(
            p(&[1, 3, 2]).whitney_transform(1),
            Err(PolyError::DegreeExceeds { degree: 2, n: 1 })
        );
    }

    #[test]
    fn evaluation() {
        let k3 = p(&[0, 2, -3, 1]);
        assert_eq!(k3.eval_complex(Complex64::new(2.0, 0.0)).0, Complex64::new(0.0, 0.0));
        assert_eq!(k3.eval_complex(Complex64::new(3.0, 0.0)).0, Complex64::new(6.0, 0.0));
        let q = p(&[7, -4, 9, 1]);
        assert_eq!(q.eval_complex(Complex64::new(0.0, 0.0)).0.re, 7.0);
        assert_eq!(q.eval_int(&BigInt::from(2)), BigInt::from(7 - 8 + 36 + 8));
    }

    #[test]
    fn synthetic_division() {
        let (q, r) = p(&[0, 2, -3, 1]).div_linear(&BigInt::from(2));
        assert_eq!(q, p(&[0, -1, 1]));
        assert!(r.is_zero());
        let (_, r) = p(&[1, 0, 1]).div_linear(&BigInt::from(1));
        assert_eq!(r, BigInt::from(2));
    }

    #[test]
    fn json_round_trip() {
        let big = IntPolynomial::new(vec![BigInt::from(-3), BigInt::from(10).pow(30)]);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(s, r#"["-3","1000000000000000000000000000000"]"#);
        assert_eq!(serde_json::from_str::<IntPolynomial>(&s).unwrap(), big);
        assert!(serde_json::from_str::<IntPolynomial>(r#"["x"]"#).is_err());
    }

    #[test]
    fn display_and_signs() {
        assert_eq!(p(&[0, 2, -3, 1]).to_string(), "[0, 2, -3, 1]");
        assert_eq!(IntPolynomial::zero().to_string(), "[0]");
        assert!(p(&[0, 2, -3, 1]).signs_alternate());
        assert!(!p(&[1, 2, 1]).signs_alternate());
    }

    fn arb_poly() -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-50i64..50, 0..7).prop_map(|c| p(&c))
    }

    proptest! {
        #[test]
        fn whitney_transform_twice_is_sign_flip(q in arb_poly(), extra in 0usize..3) {
            let n = q.degree() + extra;
            let twice = q.whitney_transform(n).unwrap().whitney_transform(n).unwrap();
            let expected = if n % 2 == 0 { q.clone() } else { -&q };
            prop_assert_eq!(twice, expected);
            let back = q.whitney_transform(n).unwrap().inverse_whitney_transform(n).unwrap();
            prop_assert_eq!(back, q);
        }

        #[test]
        fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn eval_is_a_ring_homomorphism(a in arb_poly(), b in arb_poly(), x in -5i64..5) {
            let x = BigInt::from(x);
            prop_assert_eq!((&a * &b).eval_int(&x), a.eval_int(&x) * b.eval_int(&x));
        }
    }
}
