//! Dense polynomials in one variable over [`Scalar`].
//!
//! The zero polynomial is the empty coefficient vector; otherwise the
//! top coefficient is nonzero. Constructors normalize, so equality is
//! plain structural equality.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        // normalize on the way in so trailing zeros can't sneak past
        Ok(Polynomial::from_coeffs(Vec::<Scalar>::deserialize(de)?))
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Polynomial::constant(Scalar::one())
    }

    /// `c x^deg`.
    pub fn monomial(c: Scalar, deg: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        coeffs[deg] = c;
        Polynomial::from_coeffs(coeffs)
    }

    /// Ascending coefficients; trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        Polynomial::from_coeffs(coeffs)
    }

    /// Argument scaling `p(x) -> p(a x)`.
    pub fn scale_arg(&self, a: &Scalar) -> Polynomial {
        let mut power = Scalar::one();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    power *= a;
                }
                c * &power
            })
            .collect();
        Polynomial::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64();
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(Scalar::to_f64).collect()
    }
}

impl std::fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn s(txt: &str) -> Scalar {
        Scalar::from_str(txt).unwrap()
    }

    fn p(txts: &[&str]) -> Polynomial {
        Polynomial::from_coeffs(txts.iter().map(|t| s(t)).collect())
    }

    #[test]
    fn normalization() {
        assert_eq!(p(&["0", "0"]), Polynomial::zero());
        assert!(p(&[]).is_zero());
        assert_eq!(p(&["1", "2", "0"]).degree(), Some(1));
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(Polynomial::monomial(s("3"), 2).coeff(2), s("3"));
        assert_eq!(Polynomial::monomial(s("3"), 2).coeff(5), s("0"));
    }

    #[test]
    fn ring_ops() {
        let a = p(&["1", "2"]); // 1 + 2x
        let b = p(&["-1", "2"]); // -1 + 2x
        assert_eq!(a.add(&b), p(&["0", "4"]));
        assert_eq!(a.sub(&a), Polynomial::zero());
        assert_eq!(a.mul(&b), p(&["-1", "0", "4"]));
        assert_eq!(a.scale(&s("1/2")), p(&["1/2", "1"]));
        assert_eq!(a.scale(&s("0")), Polynomial::zero());
        // cancellation in the top coefficient renormalizes
        assert_eq!(p(&["0", "1"]).add(&p(&["1", "-1"])).degree(), Some(0));
    }

    #[test]
    fn eval_and_arg_scaling() {
        let q = p(&["-2", "0", "4"]); // 4x^2 - 2
        assert_eq!(q.eval(&s("1/2")), s("-1"));
        assert_eq!(q.scale_arg(&s("2")), p(&["-2", "0", "16"]));
        assert!((q.eval_f64(0.5) + 1.0).abs() < 1e-15);
    }
}
