//! Brenke families and the operators attached to them.
//!
//! A family is the pair `(A, B)` of its generating series: `A` is held as
//! a truncated [`PowerSeries`] (explicit order, nothing extrapolated),
//! `B` as a coefficient generator `k -> b_k` so polynomials of any degree
//! can be formed as long as `A` reaches far enough. The polynomials are
//!
//! `P_n(x) = n! * sum_{m=0}^{n} b_m a_{n-m} x^m`,
//!
//! so `deg P_n = n` with leading coefficient `n! b_n a_0`.
//!
//! Attached operators:
//! * the lowering operator `D_B`, acting on monomials by
//!   `x^n -> (b_{n-1}/b_n) x^{n-1}` and satisfying `D_B P_{n+1} = (n+1) P_n`;
//! * the translation `T_y = B(y D_B)`;
//! * the transfer operator between two families sharing nothing but the
//!   variable, `theta(x^n) = (b_n^{(2)}/b_n^{(1)}) x^n`, together with its
//!   `X^k D^k` expansion coefficients `phi_k`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{binomial, factorial, hypergeometric_terminating, pochhammer, Scalar};
use crate::series::PowerSeries;

/// Coefficient generator `k -> b_k` (or a ratio `n -> r_n`).
pub type CoeffGen = Arc<dyn Fn(usize) -> Scalar + Send + Sync>;

#[derive(Clone)]
pub struct BrenkeFamily {
    label: String,
    a: PowerSeries,
    b: CoeffGen,
}

impl std::fmt::Debug for BrenkeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BrenkeFamily({}, A order {})",
            self.label,
            self.a.order()
        )
    }
}

impl BrenkeFamily {
    /// `a` is the A-series at its working truncation order; `b` generates
    /// the B-series coefficients. Requires `a_0 != 0`; each `b_k` must be
    /// nonzero (checked on access, since `b` is a black box).
    pub fn new(label: impl Into<String>, a: PowerSeries, b: CoeffGen) -> Result<Self> {
        let label = label.into();
        if a.coeff(0).is_zero() {
            return Err(Error::InvalidFamily(format!(
                "{label}: A-series must have nonzero constant term"
            )));
        }
        Ok(BrenkeFamily { label, a, b })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn a(&self) -> &PowerSeries {
        &self.a
    }

    /// Highest degree this family can produce exactly.
    pub fn max_degree(&self) -> usize {
        self.a.order()
    }

    pub fn b(&self, k: usize) -> Scalar {
        let v = (self.b)(k);
        assert!(
            !v.is_zero(),
            "family {}: b_{k} = 0 violates the Brenke condition",
            self.label
        );
        v
    }

    pub fn b_gen(&self) -> CoeffGen {
        self.b.clone()
    }

    /// The B-series as a truncated series.
    pub fn b_series(&self, order: usize) -> PowerSeries {
        PowerSeries::from_fn(order, |k| self.b(k))
    }

    fn require_a(&self, order: usize) -> Result<()> {
        if order > self.a.order() {
            Err(Error::InsufficientOrder {
                required: order,
                available: self.a.order(),
            })
        } else {
            Ok(())
        }
    }

    /// `P_n`, exact. Fails if the A-series is too short.
    pub fn poly(&self, n: usize) -> Result<Polynomial> {
        self.require_a(n)?;
        let nf = factorial(n);
        let coeffs = (0..=n)
            .map(|m| &nf * &self.b(m) * self.a.coeff(n - m))
            .collect();
        Ok(Polynomial::from_coeffs(coeffs))
    }

    /// Coefficients `v_m` of the monomial expansion
    /// `b_n x^n = sum_m v_m P_m / m!`; `v_m` is the coefficient `ahat_{n-m}`
    /// of the reciprocal A-series.
    pub fn inversion_coeffs(&self, n: usize) -> Result<Vec<Scalar>> {
        let ahat = self.a.reciprocal(n)?;
        Ok((0..=n).map(|m| ahat.coeff(n - m).clone()).collect())
    }

    /// Lowering operator `D_B`: monomials drop one degree with weight
    /// `b_{n-1}/b_n`; constants map to zero.
    pub fn lowering_apply(&self, p: &Polynomial) -> Polynomial {
        let Some(deg) = p.degree() else {
            return Polynomial::zero();
        };
        let coeffs = (1..=deg)
            .map(|n| p.coeff(n) * self.b(n - 1) / self.b(n))
            .collect();
        Polynomial::from_coeffs(coeffs)
    }

    /// `A(D_B)` applied to `p`: the series `sum_k a_k D_B^k` collapses to a
    /// finite sum because `D_B` strictly lowers degree.
    pub fn a_lowering_apply(&self, p: &Polynomial) -> Result<Polynomial> {
        let Some(deg) = p.degree() else {
            return Ok(Polynomial::zero());
        };
        self.require_a(deg)?;
        let mut acc = Polynomial::zero();
        let mut power = p.clone();
        for k in 0..=deg {
            acc = acc.add(&power.scale(self.a.coeff(k)));
            power = self.lowering_apply(&power);
        }
        Ok(acc)
    }

    /// Translation `T_y = B(y D_B)` applied to `p` at a fixed `y`.
    pub fn translation_apply(&self, p: &Polynomial, y: &Scalar) -> Polynomial {
        let Some(deg) = p.degree() else {
            return Polynomial::zero();
        };
        let mut acc = Polynomial::zero();
        let mut power = p.clone();
        let mut y_pow = Scalar::one();
        for k in 0..=deg {
            acc = acc.add(&power.scale(&(self.b(k) * &y_pow)));
            power = self.lowering_apply(&power);
            y_pow *= y;
        }
        acc
    }
}

/// Diagonal transfer operator between two Brenke bases:
/// `theta(x^n) = r_n x^n` with `r_n = b_n^{(2)} / b_n^{(1)}`. It maps the
/// first family's basis onto the second's (`theta(B_1(xt)) = B_2(xt)`).
#[derive(Clone)]
pub struct TransferOperator {
    ratio: CoeffGen,
}

impl TransferOperator {
    pub fn between(from: &BrenkeFamily, to: &BrenkeFamily) -> Self {
        let b1 = from.b.clone();
        let b2 = to.b.clone();
        let tag = format!("{} -> {}", from.label, to.label);
        TransferOperator {
            ratio: Arc::new(move |n| {
                let d = b1(n);
                assert!(!d.is_zero(), "transfer {tag}: b_{n} = 0 in source family");
                b2(n) / d
            }),
        }
    }

    pub fn identity() -> Self {
        TransferOperator {
            ratio: Arc::new(|_| Scalar::one()),
        }
    }

    pub fn from_fn(f: impl Fn(usize) -> Scalar + Send + Sync + 'static) -> Self {
        TransferOperator { ratio: Arc::new(f) }
    }

    /// Ratio `r_n = prod_i (gamma_i)_n / prod_j (delta_j)_n`. Parameters
    /// must avoid the nonpositive integers so no `r_n` vanishes or blows up.
    pub fn hypergeometric(gammas: &[Scalar], deltas: &[Scalar]) -> Result<Self> {
        for p in gammas.iter().chain(deltas) {
            if p.is_nonpositive_integer() {
                return Err(Error::InvalidParameter(format!(
                    "transfer ratio parameter {p} is a nonpositive integer"
                )));
            }
        }
        let gammas = gammas.to_vec();
        let deltas = deltas.to_vec();
        Ok(TransferOperator::from_fn(move |n| {
            let mut r = Scalar::one();
            for g in &gammas {
                r *= &pochhammer(g, n);
            }
            for d in &deltas {
                r = r / pochhammer(d, n);
            }
            r
        }))
    }

    pub fn inverse(&self) -> Self {
        let r = self.ratio.clone();
        TransferOperator {
            ratio: Arc::new(move |n| {
                r(n).recip().expect("transfer ratio must be nonzero")
            }),
        }
    }

    pub fn ratio(&self, n: usize) -> Scalar {
        (self.ratio)(n)
    }

    pub fn apply_poly(&self, p: &Polynomial) -> Polynomial {
        Polynomial::from_coeffs(
            (0..p.coeffs().len())
                .map(|n| p.coeff(n) * self.ratio(n))
                .collect(),
        )
    }

    pub fn apply_series(&self, s: &PowerSeries) -> PowerSeries {
        s.map_coeffs(|n, c| c * self.ratio(n))
    }

    /// Coefficient `phi_k` of the expansion `theta = sum_k phi_k/k! X^k D^k`,
    /// computed from its defining finite sum
    /// `phi_k = (-1)^k sum_{m=0}^{k} (-k)_m / m! * r_m`.
    pub fn xd_phi(&self, k: usize) -> Scalar {
        let neg_k = Scalar::int(-(k as i64));
        let mut acc = Scalar::zero();
        for m in 0..=k {
            acc += &(pochhammer(&neg_k, m) / factorial(m) * self.ratio(m));
        }
        if k % 2 == 1 {
            -acc
        } else {
            acc
        }
    }

    /// Resumming the `phi` coefficients against a monomial must return the
    /// original ratio: `sum_{k<=n} C(n,k) phi_k = r_n`.
    pub fn xd_reconstruct(&self, n: usize) -> Scalar {
        let mut acc = Scalar::zero();
        for k in 0..=n {
            acc += &(binomial(n, k) * self.xd_phi(k));
        }
        acc
    }
}

/// `phi_k` for a ratio of Pochhammer products, evaluated through the
/// terminating hypergeometric sum
/// `phi_k = (-1)^k {}_{p+1}F_q(-k, gammas; deltas; 1)`.
pub fn xd_phi_hypergeometric(gammas: &[Scalar], deltas: &[Scalar], k: usize) -> Result<Scalar> {
    let mut numer = Vec::with_capacity(gammas.len() + 1);
    numer.push(Scalar::int(-(k as i64)));
    numer.extend_from_slice(gammas);
    let f = hypergeometric_terminating(&numer, deltas, &Scalar::one())?;
    Ok(if k % 2 == 1 { -f } else { f })
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

    fn hermite(order: usize) -> BrenkeFamily {
        let a = PowerSeries::exp_monomial(&s("-1"), 2, order);
        BrenkeFamily::new(
            "hermite",
            a,
            Arc::new(|k| Scalar::int(2i64.pow(k as u32)) / factorial(k)),
        )
        .unwrap()
    }

    fn monomial(order: usize) -> BrenkeFamily {
        BrenkeFamily::new("monomial", PowerSeries::one(order), Arc::new(|_| Scalar::one()))
            .unwrap()
    }

    #[test]
    fn polynomials_come_out_right() {
        let h = hermite(8);
        assert_eq!(h.poly(0).unwrap(), p(&["1"]));
        assert_eq!(h.poly(1).unwrap(), p(&["0", "2"]));
        assert_eq!(h.poly(2).unwrap(), p(&["-2", "0", "4"]));
        assert_eq!(h.poly(3).unwrap(), p(&["0", "-12", "0", "8"]));

        let m = monomial(8);
        assert_eq!(m.poly(5).unwrap(), Polynomial::monomial(s("120"), 5));

        assert_eq!(
            h.poly(9),
            Err(Error::InsufficientOrder {
                required: 9,
                available: 8
            })
        );
    }

    #[test]
    fn leading_coefficient_shape() {
        let h = hermite(10);
        for n in 0..=10 {
            let pn = h.poly(n).unwrap();
            assert_eq!(pn.degree(), Some(n));
            let expected = factorial(n) * h.b(n) * h.a().coeff(0);
            assert_eq!(pn.leading().unwrap(), &expected);
        }
    }

    #[test]
    fn rejects_vanishing_a0() {
        let a = PowerSeries::from_coeffs(vec![Scalar::zero(), Scalar::one()]);
        assert!(BrenkeFamily::new("bad", a, Arc::new(|_| Scalar::one())).is_err());
    }

    #[test]
    fn lowering_steps_down_the_family() {
        let h = hermite(9);
        for n in 0..=8 {
            let lhs = h.lowering_apply(&h.poly(n + 1).unwrap());
            let rhs = h.poly(n).unwrap().scale(&Scalar::int(n as i64 + 1));
            assert_eq!(lhs, rhs, "n = {n}");
        }
        assert_eq!(h.lowering_apply(&Polynomial::one()), Polynomial::zero());
    }

    #[test]
    fn translation_on_hermite() {
        // T_y H_1 = H_1 + 2y H_0
        let h = hermite(4);
        let h1 = h.poly(1).unwrap();
        for y in ["0", "1", "-2/3"] {
            let y = s(y);
            let t = h.translation_apply(&h1, &y);
            let expected = h1.add(&Polynomial::constant(s("2") * &y));
            assert_eq!(t, expected);
        }
    }

    #[test]
    fn inversion_reassembles_monomials() {
        let h = hermite(8);
        for n in 0..=8 {
            let v = h.inversion_coeffs(n).unwrap();
            let mut sum = Polynomial::zero();
            for (m, vm) in v.iter().enumerate() {
                sum = sum.add(&h.poly(m).unwrap().scale(&(vm / factorial(m))));
            }
            assert_eq!(sum, Polynomial::monomial(h.b(n), n), "n = {n}");
        }
        // n = 2 concretely: 2x^2 = H_0 + H_2/2
        assert_eq!(
            h.inversion_coeffs(2).unwrap(),
            vec![s("1"), s("0"), s("1")]
        );
    }

    #[test]
    fn transfer_maps_b_series() {
        let m = monomial(6);
        let h = hermite(6);
        let theta = TransferOperator::between(&m, &h);
        // theta(B_1) = B_2 coefficientwise
        assert_eq!(theta.apply_series(&m.b_series(6)), h.b_series(6));
        // and on polynomials: x^3 -> (2^3/3!) x^3
        let out = theta.apply_poly(&Polynomial::monomial(Scalar::one(), 3));
        assert_eq!(out, Polynomial::monomial(s("4/3"), 3));
        // round trip through the inverse
        let back = theta.inverse().apply_poly(&out);
        assert_eq!(back, Polynomial::monomial(Scalar::one(), 3));
    }

    #[test]
    fn xd_identity_collapses() {
        let id = TransferOperator::identity();
        assert_eq!(id.xd_phi(0), Scalar::one());
        for k in 1..=10 {
            assert_eq!(id.xd_phi(k), Scalar::zero(), "k = {k}");
        }
    }

    #[test]
    fn xd_phi_pochhammer_ratio() {
        // r_n = (1)_n/(2)_n = 1/(n+1); phi_k = (-1)^k (d-g)_k/(d)_k = (-1)^k/(k+1)
        let theta = TransferOperator::hypergeometric(&[s("1")], &[s("2")]).unwrap();
        for k in 0..=12 {
            let direct = theta.xd_phi(k);
            let via_2f1 = xd_phi_hypergeometric(&[s("1")], &[s("2")], k).unwrap();
            let closed = Scalar::ratio(if k % 2 == 0 { 1 } else { -1 }, k as i64 + 1);
            assert_eq!(direct, via_2f1, "k = {k}");
            assert_eq!(direct, closed, "k = {k}");
        }
        // worked value from the same ratio family
        assert_eq!(xd_phi_hypergeometric(&[s("1")], &[s("2")], 2).unwrap(), s("1/3"));
    }

    #[test]
    fn xd_reconstruction_recovers_ratio() {
        let theta = TransferOperator::hypergeometric(&[s("1/2")], &[s("3/2")]).unwrap();
        for n in 0..=16 {
            assert_eq!(theta.xd_reconstruct(n), theta.ratio(n), "n = {n}");
        }
    }

    #[test]
    fn hypergeometric_transfer_rejects_bad_params() {
        assert!(TransferOperator::hypergeometric(&[s("-2")], &[s("1")]).is_err());
        assert!(TransferOperator::hypergeometric(&[s("1")], &[s("0")]).is_err());
    }
}
