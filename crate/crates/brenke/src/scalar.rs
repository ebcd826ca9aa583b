//! Exact rational scalar plus the handful of combinatorial primitives
//! (factorial, binomial, Pochhammer, terminating hypergeometric sums)
//! the rest of the crate is built from.
//!
//! Invariants: values are always in lowest terms with a positive
//! denominator (the backing `BigRational` normalizes on construction),
//! and the textual form is `p` or `p/q`, never a float.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn int<T: Into<BigInt>>(n: T) -> Self {
        Scalar(BigRational::from_integer(n.into()))
    }

    /// Builds `p/q`. Panics if `q == 0`; use [`Scalar::from_str`] for
    /// fallible parsing of untrusted input.
    pub fn ratio<P: Into<BigInt>, Q: Into<BigInt>>(p: P, q: Q) -> Self {
        Scalar(BigRational::new(p.into(), q.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// True when the value is an integer `<= 0`. These are the values at
    /// which Pochhammer symbols eventually vanish.
    pub fn is_nonpositive_integer(&self) -> bool {
        self.0.is_integer() && !self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// For an integer value, returns it as `BigInt`.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.0.is_integer() {
            Some(self.0.to_integer())
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(Scalar(self.0.recip()))
    }

    /// Integer power. Negative exponents require a nonzero base.
    pub fn pow(&self, exp: i32) -> Self {
        if exp == 0 {
            return Scalar::one();
        }
        let mag = self.0.pow(exp.abs());
        if exp < 0 {
            Scalar(mag.recip())
        } else {
            Scalar(mag)
        }
    }

    /// Nearest `f64`; exact values far outside the double range saturate.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |what: &str| Error::InvalidParameter(format!("{what}: {s:?}"));
        match s.split_once('/') {
            None => {
                let p = BigInt::from_str(s).map_err(|_| bad("not a rational"))?;
                Ok(Scalar::int(p))
            }
            Some((ps, qs)) => {
                let p = BigInt::from_str(ps.trim()).map_err(|_| bad("bad numerator"))?;
                let q = BigInt::from_str(qs.trim()).map_err(|_| bad("bad denominator"))?;
                if q.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(Scalar(BigRational::new(p, q)))
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        Scalar::from_str(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        self.0 *= &rhs.0;
    }
}

/// `n!` as an exact scalar.
pub fn factorial(n: usize) -> Scalar {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Scalar::int(acc)
}

/// Binomial coefficient `C(n, k)`, zero for `k > n`.
pub fn binomial(n: usize, k: usize) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    Scalar::int(acc)
}

/// Pochhammer symbol `(a)_n = a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &Scalar, n: usize) -> Scalar {
    let mut acc = Scalar::one();
    let mut factor = a.clone();
    for _ in 0..n {
        acc *= &factor;
        factor += &Scalar::one();
    }
    acc
}

/// Terminating hypergeometric sum
/// `sum_k prod_i (numer_i)_k / prod_j (denom_j)_k * x^k / k!`.
///
/// At least one numerator parameter must be a nonpositive integer -N;
/// the sum then runs over `k = 0..=N` for the smallest such N. A
/// denominator parameter whose Pochhammer factor vanishes inside that
/// range is a pole and is rejected.
pub fn hypergeometric_terminating(
    numer: &[Scalar],
    denom: &[Scalar],
    x: &Scalar,
) -> Result<Scalar> {
    let cutoff = numer
        .iter()
        .filter(|a| a.is_nonpositive_integer())
        .filter_map(|a| (-a).to_integer()?.to_usize())
        .min()
        .ok_or(Error::NonTerminating)?;
    // (cutoff is the smallest N with some numerator parameter equal to -N;
    // every term past k = N carries that vanished Pochhammer factor)

    let mut sum = Scalar::one();
    let mut term = Scalar::one();
    for k in 0..cutoff {
        let step = Scalar::int(k as i64);
        for b in denom {
            if (b + &step).is_zero() {
                return Err(Error::PoleInDenominator {
                    param: b.clone(),
                    term: k + 1,
                });
            }
        }
        for a in numer {
            term *= &(a + &step);
        }
        for b in denom {
            term = term / (b + &step);
        }
        term = term * x / Scalar::int(k as i64 + 1);
        sum += &term;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(txt: &str) -> Scalar {
        Scalar::from_str(txt).unwrap()
    }

    #[test]
    fn construction_normalizes() {
        assert_eq!(Scalar::ratio(2, 4), s("1/2"));
        assert_eq!(Scalar::ratio(1, -2), s("-1/2"));
        assert_eq!(Scalar::ratio(-3, -6), s("1/2"));
        assert_eq!(Scalar::ratio(0, 7), Scalar::zero());
    }

    #[test]
    fn display_round_trips() {
        for txt in ["0", "5", "-5", "1/2", "-22/7", "1000000000000/7"] {
            assert_eq!(s(txt).to_string(), txt);
        }
        assert_eq!(s(" 3 / 6 "), s("1/2"));
        assert!(Scalar::from_str("1/0").is_err());
        assert!(Scalar::from_str("x").is_err());
        assert!(Scalar::from_str("1.5").is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(s("1/2") + s("1/3"), s("5/6"));
        assert_eq!(s("1/2") - s("1/3"), s("1/6"));
        assert_eq!(s("2/3") * s("9/4"), s("3/2"));
        assert_eq!(s("2/3") / s("4/3"), s("1/2"));
        assert_eq!(-s("2/3"), s("-2/3"));
        assert_eq!(s("-3/2").abs(), s("3/2"));
        assert_eq!(s("2/3").pow(-2), s("9/4"));
        assert_eq!(s("5").pow(0), s("1"));
        assert!(Scalar::zero().recip().is_err());
    }

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), s("1"));
        assert_eq!(factorial(5), s("120"));
        assert_eq!(binomial(6, 2), s("15"));
        assert_eq!(binomial(6, 0), s("1"));
        assert_eq!(binomial(4, 7), s("0"));
    }

    #[test]
    fn pochhammer_values() {
        // (1/2)_2 = 1/2 * 3/2
        assert_eq!(pochhammer(&s("1/2"), 2), s("3/4"));
        assert_eq!(pochhammer(&s("-3"), 5), s("0"));
        assert_eq!(pochhammer(&s("7"), 0), s("1"));
        // (-k)_m = (-1)^m k!/(k-m)! for m <= k
        assert_eq!(pochhammer(&s("-4"), 3), s("-24"));
    }

    #[test]
    fn hypergeometric_chu_vandermonde() {
        // 2F1(-k, g; d; 1) = (d-g)_k / (d)_k
        for k in 0..8i64 {
            for (g, d) in [(s("1"), s("2")), (s("1/2"), s("3/2")), (s("2"), s("7/2"))] {
                let lhs = hypergeometric_terminating(
                    &[Scalar::int(-k), g.clone()],
                    std::slice::from_ref(&d),
                    &Scalar::one(),
                )
                .unwrap();
                let rhs = pochhammer(&(&d - &g), k as usize) / pochhammer(&d, k as usize);
                assert_eq!(lhs, rhs, "k={k}");
            }
        }
        // worked case: 2F1(-3, 1; 2; 1) = 1/4
        let v = hypergeometric_terminating(&[s("-3"), s("1")], &[s("2")], &Scalar::one()).unwrap();
        assert_eq!(v, s("1/4"));
    }

    #[test]
    fn hypergeometric_errors() {
        let err = hypergeometric_terminating(&[s("1/2")], &[s("2")], &Scalar::one());
        assert_eq!(err, Err(Error::NonTerminating));

        // denominator hits zero at term 3 before the numerator cuts off at 5
        let err = hypergeometric_terminating(&[s("-5")], &[s("-2")], &Scalar::one());
        assert!(matches!(err, Err(Error::PoleInDenominator { term: 3, .. })));

        // pole at or beyond the cutoff never fires
        let ok = hypergeometric_terminating(&[s("-2")], &[s("-2")], &Scalar::one());
        assert!(ok.is_ok());
    }

    #[test]
    fn serde_as_strings() {
        let v: Vec<Scalar> = vec![s("1/2"), s("-3")];
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"["1/2","-3"]"#);
        let back: Vec<Scalar> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<Scalar>("\"1/0\"").is_err());
    }
}
