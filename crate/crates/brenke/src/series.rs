//! Dense truncated power series over [`Scalar`].
//!
//! A series carries its coefficients through an explicit truncation order
//! (`coeffs.len() == order + 1`). Nothing here extrapolates: any request
//! for coefficients beyond the stated order is an `InsufficientOrder`
//! error rather than a silently padded zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries")]
pub struct PowerSeries {
    order: usize,
    coeffs: Vec<Scalar>,
}

#[derive(Deserialize)]
struct RawSeries {
    order: usize,
    coeffs: Vec<Scalar>,
}

impl TryFrom<RawSeries> for PowerSeries {
    type Error = String;

    fn try_from(raw: RawSeries) -> std::result::Result<Self, String> {
        if raw.coeffs.len() != raw.order + 1 {
            return Err(format!(
                "series of order {} must carry {} coefficients, found {}",
                raw.order,
                raw.order + 1,
                raw.coeffs.len()
            ));
        }
        Ok(PowerSeries {
            order: raw.order,
            coeffs: raw.coeffs,
        })
    }
}

impl std::fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PowerSeries(order {}; {:?})", self.order, self.coeffs)
    }
}

impl PowerSeries {
    /// Wraps an explicit coefficient vector; the truncation order is
    /// `coeffs.len() - 1`. Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        PowerSeries {
            order: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries::from_coeffs(vec![Scalar::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = PowerSeries::zero(order);
        s.coeffs[0] = Scalar::one();
        s
    }

    /// Builds a series from a coefficient-of-`t^n` rule.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Scalar) -> Self {
        PowerSeries::from_coeffs((0..=order).map(f).collect())
    }

    /// `exp(c t^p)` truncated at `order`: the coefficient of `t^{kp}` is
    /// `c^k / k!`, everything else zero. `p` must be positive.
    pub fn exp_monomial(c: &Scalar, p: usize, order: usize) -> Self {
        assert!(p > 0, "monomial exponent must be positive");
        let mut s = PowerSeries::zero(order);
        let mut term = Scalar::one();
        let mut k = 0usize;
        loop {
            let deg = k * p;
            if deg > order {
                break;
            }
            s.coeffs[deg] = term.clone();
            k += 1;
            term = term * c / Scalar::int(k as i64);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> &Scalar {
        assert!(
            n <= self.order,
            "coefficient {} beyond stated order {}",
            n,
            self.order
        );
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    fn require(&self, order: usize) -> Result<()> {
        if order > self.order {
            Err(Error::InsufficientOrder {
                required: order,
                available: self.order,
            })
        } else {
            Ok(())
        }
    }

    /// Copy truncated to a lower (or equal) order.
    pub fn truncated(&self, order: usize) -> Result<PowerSeries> {
        self.require(order)?;
        Ok(PowerSeries::from_coeffs(self.coeffs[..=order].to_vec()))
    }

    /// Sum, valid to the smaller of the two orders.
    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order.min(other.order);
        PowerSeries::from_fn(order, |n| &self.coeffs[n] + &other.coeffs[n])
    }

    /// Cauchy product through `order`. Both factors must be valid that far.
    pub fn mul(&self, other: &PowerSeries, order: usize) -> Result<PowerSeries> {
        self.require(order)?;
        other.require(order)?;
        let mut out = PowerSeries::zero(order);
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] += &(a * b);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse through `order`; the constant term must be
    /// nonzero and the source must itself be valid through `order`.
    pub fn reciprocal(&self, order: usize) -> Result<PowerSeries> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        self.require(order)?;
        let inv0 = self.coeffs[0].recip()?;
        let mut out = PowerSeries::zero(order);
        out.coeffs[0] = inv0.clone();
        for n in 1..=order {
            let mut acc = Scalar::zero();
            for k in 1..=n {
                acc += &(&self.coeffs[k] * &out.coeffs[n - k]);
            }
            out.coeffs[n] = -acc * &inv0;
        }
        Ok(out)
    }

    /// Argument scaling `t -> a t`: coefficient `c_n` becomes `a^n c_n`.
    pub fn scale_arg(&self, a: &Scalar) -> PowerSeries {
        let mut power = Scalar::one();
        PowerSeries::from_fn(self.order, |n| {
            if n > 0 {
                power *= a;
            }
            &self.coeffs[n] * &power
        })
    }

    /// Multiplication by `t^m`, truncated at `order`. The source must be
    /// valid through `order - m` so no unknown coefficient is invented.
    pub fn shifted_up(&self, m: usize, order: usize) -> Result<PowerSeries> {
        if order >= m {
            self.require(order - m)?;
        }
        Ok(PowerSeries::from_fn(order, |n| {
            if n >= m {
                self.coeffs[n - m].clone()
            } else {
                Scalar::zero()
            }
        }))
    }

    /// Applies a diagonal operator `t^n -> f(n) t^n`.
    pub fn map_coeffs(&self, mut f: impl FnMut(usize, &Scalar) -> Scalar) -> PowerSeries {
        PowerSeries::from_fn(self.order, |n| f(n, &self.coeffs[n]))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn s(txt: &str) -> Scalar {
        Scalar::from_str(txt).unwrap()
    }

    fn sv(txts: &[&str]) -> Vec<Scalar> {
        txts.iter().map(|t| s(t)).collect()
    }

    #[test]
    fn exp_monomial_coeffs() {
        // e^t to order 3: 1, 1, 1/2, 1/6
        let e = PowerSeries::exp_monomial(&s("1"), 1, 3);
        assert_eq!(e.coeffs(), &sv(&["1", "1", "1/2", "1/6"])[..]);
        // e^{-t^2} to order 5: gaps at odd powers
        let g = PowerSeries::exp_monomial(&s("-1"), 2, 5);
        assert_eq!(g.coeffs(), &sv(&["1", "0", "-1", "0", "1/2", "0"])[..]);
        // zero coefficient collapses to the constant series
        let z = PowerSeries::exp_monomial(&s("0"), 3, 4);
        assert_eq!(z, PowerSeries::one(4));
    }

    #[test]
    fn add_truncates_to_min_order() {
        // e^t + e^{-t} to order 4: [2, 0, 1, 0, 1/12]
        let a = PowerSeries::exp_monomial(&s("1"), 1, 4);
        let b = PowerSeries::exp_monomial(&s("-1"), 1, 6);
        let sum = a.add(&b);
        assert_eq!(sum.order(), 4);
        assert_eq!(sum.coeffs(), &sv(&["2", "0", "1", "0", "1/12"])[..]);
    }

    #[test]
    fn mul_is_cauchy_product() {
        // e^t * e^t = e^{2t} to order 3: [1, 2, 2, 4/3]
        let e = PowerSeries::exp_monomial(&s("1"), 1, 3);
        let prod = e.mul(&e, 3).unwrap();
        assert_eq!(prod.coeffs(), &sv(&["1", "2", "2", "4/3"])[..]);

        let short = PowerSeries::one(2);
        assert_eq!(
            e.mul(&short, 3),
            Err(Error::InsufficientOrder {
                required: 3,
                available: 2
            })
        );
    }

    #[test]
    fn reciprocal_inverts() {
        // 1 / e^{-t^2} = e^{t^2}
        let a = PowerSeries::exp_monomial(&s("-1"), 2, 6);
        let r = a.reciprocal(6).unwrap();
        assert_eq!(r, PowerSeries::exp_monomial(&s("1"), 2, 6));
        // round trip at shared order
        assert_eq!(a.mul(&r, 6).unwrap(), PowerSeries::one(6));

        let t_only = PowerSeries::from_coeffs(sv(&["0", "1"]));
        assert_eq!(t_only.reciprocal(1), Err(Error::NotInvertible));
    }

    #[test]
    fn scale_arg_scales_geometrically() {
        // e^{-t^2} with t -> 2t gives e^{-4t^2}
        let a = PowerSeries::exp_monomial(&s("-1"), 2, 4);
        assert_eq!(
            a.scale_arg(&s("2")),
            PowerSeries::exp_monomial(&s("-4"), 2, 4)
        );
    }

    #[test]
    fn shift_respects_order() {
        let e = PowerSeries::exp_monomial(&s("1"), 1, 3);
        let shifted = e.shifted_up(2, 5).unwrap();
        assert_eq!(shifted.coeffs(), &sv(&["0", "0", "1", "1", "1/2", "1/6"])[..]);
        // shifting to order 6 would need e through t^4
        assert!(e.shifted_up(2, 6).is_err());
    }

    #[test]
    fn serde_shape() {
        let e = PowerSeries::exp_monomial(&s("1"), 1, 2);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"order":2,"coeffs":["1","1","1/2"]}"#);
        let back: PowerSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
    }
}
