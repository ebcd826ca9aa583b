//! Built-in families: monomials, Appell sets, Hermite, Gould-Hopper,
//! generalized Gould-Hopper (GGHPS) and generalized Hermite sets, plus a
//! hypergeometric B-series family. The Dunkl calculus lives here too: the
//! generalized factorial `gamma_mu`, the kernel `exp_mu`, the Dunkl
//! operator, and the closed-form expansion coefficients special to the
//! GGHPS and generalized Hermite cases.
//!
//! Conventions. The Dunkl factorial is
//! `gamma_mu(2p + eps) = 2^{2p+eps} p! (mu + 1/2)_{p+eps}` for `eps` in
//! {0, 1}; it vanishes for no `n` exactly when `mu` avoids the negative
//! half-integers, which [`DunklParameter`] enforces. A GGHPS family with
//! parameters `(d, a, mu)` is generated by `exp(a t^{d+1}) exp_mu(x t)`,
//! i.e. `A = exp(a t^{d+1})` and `b_k = 1/gamma_mu(k)`; its polynomials
//! carry only degrees congruent to `n` mod `d+1` below `n` in their
//! expansions (the `(d+1)-fold` symmetry). Generalized Hermite sets use
//! `A = exp(-t^2)` and `b_k = 2^k / gamma_mu(k)`, so `mu = 0` is the
//! classical Hermite family.

use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{BrenkeFamily, TransferOperator};
use crate::poly::Polynomial;
use crate::scalar::{binomial, factorial, pochhammer, Scalar};
use crate::series::PowerSeries;

/// Dunkl parameter `mu`, kept away from the poles of `1/gamma_mu`
/// (the negative half-integers -1/2, -3/2, ...).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DunklParameter(Scalar);

impl DunklParameter {
    pub fn new(mu: Scalar) -> Result<Self> {
        let two_mu = &mu * &Scalar::int(2);
        if two_mu.is_integer() && two_mu.is_negative() {
            let odd = two_mu
                .to_integer()
                .map(|z| z.is_odd())
                .unwrap_or(false);
            if odd {
                return Err(Error::DunklPole { mu });
            }
        }
        Ok(DunklParameter(mu))
    }

    pub fn zero() -> Self {
        DunklParameter(Scalar::zero())
    }

    pub fn value(&self) -> &Scalar {
        &self.0
    }
}

impl std::str::FromStr for DunklParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DunklParameter::new(s.parse()?)
    }
}

/// Generalized factorial `gamma_mu(n)`; `gamma_0(n) = n!`.
pub fn gamma_mu(mu: &DunklParameter, n: usize) -> Scalar {
    let p = n / 2;
    let eps = n % 2;
    let half = Scalar::ratio(1, 2);
    Scalar::int(2).pow(n as i32) * factorial(p) * pochhammer(&(mu.value() + &half), p + eps)
}

/// Coefficients of the Dunkl kernel `exp_mu(t) = sum_n t^n / gamma_mu(n)`.
pub fn exp_mu_coeffs(mu: &DunklParameter, order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |n| gamma_mu(mu, n).recip().expect("gamma_mu nonzero"))
}

/// Dunkl operator on polynomials, via its action on monomials:
/// `x^n -> n x^{n-1}` for even `n`, `x^n -> (n + 2 mu) x^{n-1}` for odd `n`.
/// Equivalently `gamma_mu(n)/gamma_mu(n-1) x^{n-1}`.
pub fn dunkl_apply(mu: &DunklParameter, p: &Polynomial) -> Polynomial {
    let Some(deg) = p.degree() else {
        return Polynomial::zero();
    };
    let two_mu = mu.value() * &Scalar::int(2);
    let coeffs = (1..=deg)
        .map(|n| {
            let weight = if n % 2 == 0 {
                Scalar::int(n as i64)
            } else {
                Scalar::int(n as i64) + &two_mu
            };
            p.coeff(n) * weight
        })
        .collect();
    Polynomial::from_coeffs(coeffs)
}

/// The same operator from its definition
/// `D_mu f = f' + mu (f(x) - f(-x))/x`, assembled coefficientwise.
pub fn dunkl_apply_definitional(mu: &DunklParameter, p: &Polynomial) -> Polynomial {
    let Some(deg) = p.degree() else {
        return Polynomial::zero();
    };
    let derivative = Polynomial::from_coeffs(
        (1..=deg)
            .map(|n| p.coeff(n) * Scalar::int(n as i64))
            .collect(),
    );
    // (f(x) - f(-x))/x keeps exactly the odd coefficients, doubled, one
    // degree down
    let reflected = Polynomial::from_coeffs(
        (1..=deg)
            .map(|n| {
                if n % 2 == 1 {
                    p.coeff(n) * Scalar::int(2)
                } else {
                    Scalar::zero()
                }
            })
            .collect(),
    );
    derivative.add(&reflected.scale(mu.value()))
}

/// Declarative family description; deserializes from JSON like
/// `{"family":"gghps","d":1,"a":"-1","mu":"1/2"}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `A = 1`, `b_k = 1`: `P_n = n! x^n`.
    Monomial,
    /// Explicit A-series, `b_k = 1/k!`.
    Appell {
        #[serde(rename = "A")]
        a: Vec<Scalar>,
        order: usize,
    },
    /// `A = exp(-t^2)`, `b_k = 2^k/k!`.
    Hermite,
    /// Gould-Hopper `g_n^m(x, h)`: same as GGHPS with `d = m-1`, `a = h`,
    /// `mu = 0`.
    GouldHopper { m: usize, h: Scalar },
    /// Generalized Gould-Hopper: `A = exp(a t^{d+1})`, `b_k = 1/gamma_mu(k)`.
    Gghps { d: usize, a: Scalar, mu: Scalar },
    /// `A = exp(-t^2)`, `b_k = 2^k/gamma_mu(k)`; `mu = 0` is Hermite.
    GeneralizedHermite { mu: Scalar },
    /// `A = 1`, `b_k = prod (gammas)_k / (prod (deltas)_k k!)`.
    HypergeometricB {
        gammas: Vec<Scalar>,
        deltas: Vec<Scalar>,
    },
}

impl FamilySpec {
    /// Shorthand names accepted on the command line.
    pub fn by_name(name: &str) -> Option<FamilySpec> {
        match name {
            "monomial" => Some(FamilySpec::Monomial),
            "hermite" => Some(FamilySpec::Hermite),
            _ => None,
        }
    }

    /// Instantiates the family with its A-series truncated at `order`.
    pub fn build(&self, order: usize) -> Result<BrenkeFamily> {
        make_family(self, order)
    }
}

fn dunkl_b_gen(mu: DunklParameter) -> Arc<dyn Fn(usize) -> Scalar + Send + Sync> {
    Arc::new(move |k| gamma_mu(&mu, k).recip().expect("gamma_mu nonzero"))
}

/// Builds a [`BrenkeFamily`] from its spec, truncating the A-series at
/// `order` (the highest polynomial degree the instance can produce).
pub fn make_family(spec: &FamilySpec, order: usize) -> Result<BrenkeFamily> {
    match spec {
        FamilySpec::Monomial => BrenkeFamily::new(
            "monomial",
            PowerSeries::one(order),
            Arc::new(|_| Scalar::one()),
        ),
        FamilySpec::Appell { a, order: decl } => {
            if a.len() != decl + 1 {
                return Err(Error::InvalidFamily(format!(
                    "appell: declared order {decl} but {} coefficients",
                    a.len()
                )));
            }
            if *decl < order {
                return Err(Error::InsufficientOrder {
                    required: order,
                    available: *decl,
                });
            }
            let series = PowerSeries::from_coeffs(a.clone()).truncated(order)?;
            BrenkeFamily::new(
                "appell",
                series,
                Arc::new(|k| factorial(k).recip().expect("k! nonzero")),
            )
        }
        FamilySpec::Hermite => hermite_family(order),
        FamilySpec::GouldHopper { m, h } => {
            if *m < 2 {
                return Err(Error::InvalidFamily(
                    "gould_hopper: monomial exponent m must be at least 2".into(),
                ));
            }
            let inner = FamilySpec::Gghps {
                d: m - 1,
                a: h.clone(),
                mu: Scalar::zero(),
            };
            let fam = make_family(&inner, order)?;
            BrenkeFamily::new(format!("gould_hopper(m={m},h={h})"), fam.a().clone(), fam.b_gen())
        }
        FamilySpec::Gghps { d, a, mu } => {
            if *d < 1 {
                return Err(Error::InvalidFamily(
                    "gghps: d must be a positive integer".into(),
                ));
            }
            let mu = DunklParameter::new(mu.clone())?;
            let label = format!("gghps(d={d},a={a},mu={})", mu.value());
            BrenkeFamily::new(
                label,
                PowerSeries::exp_monomial(a, d + 1, order),
                dunkl_b_gen(mu),
            )
        }
        FamilySpec::GeneralizedHermite { mu } => {
            let mu = DunklParameter::new(mu.clone())?;
            let label = format!("generalized_hermite(mu={})", mu.value());
            let two_pow = Arc::new({
                let mu = mu.clone();
                move |k: usize| {
                    Scalar::int(2).pow(k as i32) / gamma_mu(&mu, k)
                }
            });
            BrenkeFamily::new(
                label,
                PowerSeries::exp_monomial(&Scalar::int(-1), 2, order),
                two_pow,
            )
        }
        FamilySpec::HypergeometricB { gammas, deltas } => {
            for p in gammas.iter().chain(deltas) {
                if p.is_nonpositive_integer() {
                    return Err(Error::InvalidFamily(format!(
                        "hypergeometric_b: parameter {p} is a nonpositive integer"
                    )));
                }
            }
            let gs = gammas.clone();
            let ds = deltas.clone();
            BrenkeFamily::new(
                "hypergeometric_b",
                PowerSeries::one(order),
                Arc::new(move |k| {
                    let mut v = factorial(k).recip().expect("k! nonzero");
                    for g in &gs {
                        v *= &pochhammer(g, k);
                    }
                    for dd in &ds {
                        v = v / pochhammer(dd, k);
                    }
                    v
                }),
            )
        }
    }
}

/// Classical Hermite family `H_n`: `A = exp(-t^2)`, `b_k = 2^k/k!`.
pub fn hermite_family(order: usize) -> Result<BrenkeFamily> {
    BrenkeFamily::new(
        "hermite",
        PowerSeries::exp_monomial(&Scalar::int(-1), 2, order),
        Arc::new(|k| Scalar::int(2).pow(k as i32) / factorial(k)),
    )
}

/// Appell family with the given A-series.
pub fn appell_family(a: PowerSeries, label: impl Into<String>) -> Result<BrenkeFamily> {
    BrenkeFamily::new(label, a, Arc::new(|k| factorial(k).recip().expect("k! nonzero")))
}

/// Convenience constructor for a GGHPS family instance with validated
/// parameters.
pub fn gghps_family(d: usize, a: &Scalar, mu: &DunklParameter, order: usize) -> BrenkeFamily {
    make_family(
        &FamilySpec::Gghps {
            d,
            a: a.clone(),
            mu: mu.value().clone(),
        },
        order,
    )
    .expect("validated gghps parameters")
}

/// GGHPS polynomial by its explicit sum:
/// `Q_n(x; a, mu) = n! sum_k a^k x^{n-(d+1)k} / (k! gamma_mu(n-(d+1)k))`.
pub fn gghps_explicit(d: usize, a: &Scalar, mu: &DunklParameter, n: usize) -> Polynomial {
    let mut coeffs = vec![Scalar::zero(); n + 1];
    let nf = factorial(n);
    let mut a_pow = Scalar::one();
    for k in 0..=(n / (d + 1)) {
        let deg = n - (d + 1) * k;
        coeffs[deg] = &nf * &a_pow / (factorial(k) * gamma_mu(mu, deg));
        a_pow *= a;
    }
    Polynomial::from_coeffs(coeffs)
}

/// Monomial inversion: `x^n = sum_k c_k Q_{n-(d+1)k}(x; a, mu)` with
/// `c_k = gamma_mu(n) (-a)^k / (k! (n-(d+1)k)!)`. Returned indexed by `k`.
pub fn gghps_inversion(d: usize, a: &Scalar, mu: &DunklParameter, n: usize) -> Vec<Scalar> {
    let g = gamma_mu(mu, n);
    let neg_a = -a;
    let mut pow = Scalar::one();
    (0..=(n / (d + 1)))
        .map(|k| {
            let deg = n - (d + 1) * k;
            let c = &g * &pow / (factorial(k) * factorial(deg));
            pow *= &neg_a;
            c
        })
        .collect()
}

/// Closed-form connection coefficient: expanding `Q_n(x; b, mu2)` in the
/// basis `{Q_m(x; a, mu1)}` (same `d`), the only nonzero coefficients sit
/// at `m = n - i(d+1)` and equal
/// `n!/m! sum_{k<=i} (-a)^{i-k} b^k / ((i-k)! k!)
///        * gamma_mu1(n-k(d+1)) / gamma_mu2(n-k(d+1))`.
pub fn gghps_connection_closed(
    n: usize,
    i: usize,
    a: &Scalar,
    b: &Scalar,
    mu1: &DunklParameter,
    mu2: &DunklParameter,
    d: usize,
) -> Result<Scalar> {
    if i * (d + 1) > n {
        return Err(Error::InvalidParameter(format!(
            "connection index i = {i} exceeds n/(d+1) with n = {n}, d = {d}"
        )));
    }
    let m = n - i * (d + 1);
    let mut acc = Scalar::zero();
    for k in 0..=i {
        let sign_a = (-a).pow((i - k) as i32);
        let term = sign_a * b.pow(k as i32) / (factorial(i - k) * factorial(k))
            * gamma_mu(mu1, n - k * (d + 1))
            / gamma_mu(mu2, n - k * (d + 1));
        acc += &term;
    }
    Ok(factorial(n) / factorial(m) * acc)
}

/// Closed-form duplication: `Q_n(alpha x; a, mu) = sum_k c_k Q_{n-(d+1)k}(x; a, mu)`
/// with `c_k = n!/(n-(d+1)k)! alpha^{n-(d+1)k} a^k (1-alpha^{d+1})^k / k!`.
/// Returned indexed by `k`.
pub fn gghps_duplication(
    d: usize,
    a: &Scalar,
    mu: &DunklParameter,
    alpha: &Scalar,
    n: usize,
) -> Result<Vec<Scalar>> {
    let _ = mu; // the coefficients do not involve mu; it identifies the family
    if alpha.is_zero() {
        return Err(Error::DuplicationUndefined);
    }
    let nf = factorial(n);
    let shrink = Scalar::one() - alpha.pow((d + 1) as i32);
    Ok((0..=(n / (d + 1)))
        .map(|k| {
            let deg = n - (d + 1) * k;
            &nf / factorial(deg) * alpha.pow(deg as i32) * a.pow(k as i32) * shrink.pow(k as i32)
                / factorial(k)
        })
        .collect())
}

/// Addition coefficients for `T_y = exp_mu(y D_mu)`:
/// `T_y Q_n(x) = sum_m (n!/m!) y^{n-m}/gamma_mu(n-m) Q_m(x)`. Returned
/// indexed by `m`; only `mu` enters the values, `d` and `a` identify the
/// family the expansion lives in.
pub fn gghps_addition(d: usize, a: &Scalar, mu: &DunklParameter, n: usize) -> Vec<Scalar> {
    let _ = (d, a);
    let nf = factorial(n);
    (0..=n)
        .map(|m| &nf / factorial(m) / gamma_mu(mu, n - m))
        .collect()
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn dunkl_apply_f64(two_mu: f64, coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    (1..coeffs.len())
        .map(|n| {
            let w = if n % 2 == 0 {
                n as f64
            } else {
                n as f64 + two_mu
            };
            coeffs[n] * w
        })
        .collect()
}

/// Tolerance for the floating-point convolution check.
pub const GGHPS_CONVOLUTION_TOL: f64 = 1e-10;

/// Floating-point check of the convolution identity
/// `2^{n/(d+1)} T_y [Q_n(2^{-1/(d+1)} .)](x) = sum_m C(n,m) Q_{n-m}(y) Q_m(x)`
/// at the given `(x, y)` sample pairs; at `mu = 0, d = 1` this is the
/// classical Hermite argument-sum formula. Returns true when every
/// sample agrees within [`GGHPS_CONVOLUTION_TOL`].
pub fn gghps_convolution_check(
    d: usize,
    a: &Scalar,
    mu: &DunklParameter,
    n: usize,
    x_samples: &[f64],
    y_samples: &[f64],
) -> bool {
    assert_eq!(
        x_samples.len(),
        y_samples.len(),
        "sample lists must pair up"
    );
    let polys: Vec<Vec<f64>> = (0..=n)
        .map(|m| gghps_explicit(d, a, mu, m).to_f64_coeffs())
        .collect();
    let two_mu = 2.0 * mu.value().to_f64();
    let c = 2f64.powf(-1.0 / (d as f64 + 1.0));
    let scale = 2f64.powf(n as f64 / (d as f64 + 1.0));

    // Q_n(c x), then all Dunkl powers of it
    let mut scaled: Vec<f64> = polys[n]
        .iter()
        .enumerate()
        .map(|(k, v)| v * c.powi(k as i32))
        .collect();
    let mut dunkl_powers = vec![scaled.clone()];
    for _ in 0..n {
        scaled = dunkl_apply_f64(two_mu, &scaled);
        dunkl_powers.push(scaled.clone());
    }
    let gammas: Vec<f64> = (0..=n).map(|l| gamma_mu(mu, l).to_f64()).collect();
    let binoms: Vec<f64> = (0..=n).map(|m| binomial(n, m).to_f64()).collect();

    for (&x, &y) in x_samples.iter().zip(y_samples) {
        let mut lhs = 0.0;
        let mut y_pow = 1.0;
        for l in 0..=n {
            lhs += y_pow / gammas[l] * poly_eval(&dunkl_powers[l], x);
            y_pow *= y;
        }
        lhs *= scale;

        let mut rhs = 0.0;
        for m in 0..=n {
            rhs += binoms[m] * poly_eval(&polys[n - m], y) * poly_eval(&polys[m], x);
        }
        if (lhs - rhs).abs() > GGHPS_CONVOLUTION_TOL {
            return false;
        }
    }
    true
}

/// Closed-form linearization of two GGHPS factors against a GGHPS basis,
/// all sharing `d`: with `I = i + j`, the coefficient of `Q_{I-r(d+1)}`
/// (basis parameters `(a3, mu3)`) in `Q_i(x; a1, mu1) Q_j(x; a2, mu2)` is
///
/// `i! j!/(I-r(d+1))! sum_{n,m} a1^n a2^m (-a3)^{r-n-m} /
///    (n! m! (r-n-m)!) * gamma_mu3(I-(n+m)(d+1)) /
///    (gamma_mu1(i-n(d+1)) gamma_mu2(j-m(d+1)))`
///
/// over `n <= i/(d+1)`, `m <= j/(d+1)`, `n + m <= r`.
#[allow(clippy::too_many_arguments)]
pub fn gghps_linearization_closed(
    i: usize,
    j: usize,
    r: usize,
    a1: &Scalar,
    mu1: &DunklParameter,
    a2: &Scalar,
    mu2: &DunklParameter,
    a3: &Scalar,
    mu3: &DunklParameter,
    d: usize,
) -> Result<Scalar> {
    if r * (d + 1) > i + j {
        return Err(Error::InvalidParameter(format!(
            "linearization index r = {r} exceeds (i+j)/(d+1) with i = {i}, j = {j}, d = {d}"
        )));
    }
    let big_i = i + j;
    let k = big_i - r * (d + 1);
    let neg_a3 = -a3;
    let mut acc = Scalar::zero();
    for n in 0..=(i / (d + 1)) {
        for m in 0..=(j / (d + 1)) {
            if n + m > r {
                continue;
            }
            let q = r - n - m;
            let term = a1.pow(n as i32) * a2.pow(m as i32) * neg_a3.pow(q as i32)
                / (factorial(n) * factorial(m) * factorial(q))
                * gamma_mu(mu3, big_i - (n + m) * (d + 1))
                / (gamma_mu(mu1, i - n * (d + 1)) * gamma_mu(mu2, j - m * (d + 1)));
            acc += &term;
        }
    }
    Ok(factorial(i) * factorial(j) / factorial(k) * acc)
}

/// N-fold GGHPS product linearization: expands
/// `prod_s Q_{i_s}(x; a_s, mu_s)` (all sharing `d`) in the GGHPS basis
/// with parameters `target = (a, mu)`. Returns the full coefficient
/// vector indexed by basis degree `0..=sum i_s`; entries off the lattice
/// `sum i_s - r(d+1)` are zero.
pub fn gghps_multi_linearization(
    factors: &[(usize, Scalar, DunklParameter)],
    d: usize,
    target: &(Scalar, DunklParameter),
) -> Vec<Scalar> {
    let big_i: usize = factors.iter().map(|(i, _, _)| i).sum();
    let (a_t, mu_t) = target;
    let neg_a_t = -a_t;
    let prefactor: Scalar = factors
        .iter()
        .fold(Scalar::one(), |acc, (i, _, _)| acc * factorial(*i));

    let mut out = vec![Scalar::zero(); big_i + 1];
    for r in 0..=(big_i / (d + 1)) {
        let k = big_i - r * (d + 1);
        // enumerate exponent tuples (s_1..s_N) with s_l (d+1) <= i_l and
        // sum s_l <= r
        let mut acc = Scalar::zero();
        let mut tuple = vec![0usize; factors.len()];
        sum_over_tuples(factors, d, r, 0, &mut tuple, &mut |tuple| {
            let used: usize = tuple.iter().sum();
            let q = r - used;
            let mut term = neg_a_t.pow(q as i32) / factorial(q)
                * gamma_mu(mu_t, big_i - used * (d + 1));
            for (l, (i_l, a_l, mu_l)) in factors.iter().enumerate() {
                let s_l = tuple[l];
                term = term * a_l.pow(s_l as i32)
                    / (factorial(s_l) * gamma_mu(mu_l, i_l - s_l * (d + 1)));
            }
            acc += &term;
        });
        out[k] = &prefactor / factorial(k) * acc;
    }
    out
}

fn sum_over_tuples(
    factors: &[(usize, Scalar, DunklParameter)],
    d: usize,
    budget: usize,
    pos: usize,
    tuple: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if pos == factors.len() {
        visit(tuple);
        return;
    }
    let used: usize = tuple[..pos].iter().sum();
    let cap = (factors[pos].0 / (d + 1)).min(budget - used);
    for s in 0..=cap {
        tuple[pos] = s;
        sum_over_tuples(factors, d, budget, pos + 1, tuple, visit);
    }
    tuple[pos] = 0;
}

/// Generalized Hermite polynomial `H_n^mu` (family `A = exp(-t^2)`,
/// `b_k = 2^k/gamma_mu(k)`), un-normalized.
pub fn genhermite_poly(mu: &DunklParameter, n: usize) -> Polynomial {
    let fam = make_family(
        &FamilySpec::GeneralizedHermite {
            mu: mu.value().clone(),
        },
        n,
    )
    .expect("validated mu");
    fam.poly(n).expect("A-series built to order n")
}

/// Normalized generalized Hermite polynomial
/// `Hhat_n^mu = gamma_mu(n)/(n! floor(n/2)!) H_n^mu`; its connection
/// coefficients across `mu` take the closed form of
/// [`genhermite_connection_closed`].
pub fn genhermite_normalized(mu: &DunklParameter, n: usize) -> Polynomial {
    let weight = gamma_mu(mu, n) / (factorial(n) * factorial(n / 2));
    genhermite_poly(mu, n).scale(&weight)
}

/// Connection coefficient of `Hhat_{n-2k}^{mu1}` in `Hhat_n^{mu2}`:
/// `(-1)^k 4^k (mu2 - mu1)_k / k!` for `0 <= k <= floor(n/2)`.
pub fn genhermite_connection_closed(
    mu1: &DunklParameter,
    mu2: &DunklParameter,
    n: usize,
    k: usize,
) -> Result<Scalar> {
    if 2 * k > n {
        return Err(Error::InvalidParameter(format!(
            "connection index k = {k} exceeds floor(n/2) with n = {n}"
        )));
    }
    let diff = mu2.value() - mu1.value();
    let magnitude = Scalar::int(4).pow(k as i32) * pochhammer(&diff, k) / factorial(k);
    Ok(if k % 2 == 1 { -magnitude } else { magnitude })
}

/// Feldheim linearization coefficient for classical Hermite:
/// `H_i H_j = sum_k C(i,k) C(j,k) 2^k k! H_{i+j-2k}`. Zero for
/// `k > min(i,j)`.
pub fn feldheim_coeff(i: usize, j: usize, k: usize) -> Scalar {
    binomial(i, k) * binomial(j, k) * Scalar::int(2).pow(k as i32) * factorial(k)
}

/// Transfer operator between two Dunkl kernels:
/// `theta(x^n) = gamma_mu1(n)/gamma_mu2(n) x^n`, mapping `exp_mu1` onto
/// `exp_mu2` coefficientwise.
pub fn dunkl_transfer(mu1: &DunklParameter, mu2: &DunklParameter) -> TransferOperator {
    let mu1 = mu1.clone();
    let mu2 = mu2.clone();
    TransferOperator::from_fn(move |n| gamma_mu(&mu1, n) / gamma_mu(&mu2, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{
        addition_coeffs, connection_explicit, duplication_coeffs, linearization_explicit,
    };
    use crate::oracle;
    use std::str::FromStr;

    fn s(txt: &str) -> Scalar {
        Scalar::from_str(txt).unwrap()
    }

    fn mu(txt: &str) -> DunklParameter {
        DunklParameter::from_str(txt).unwrap()
    }

    #[test]
    fn dunkl_parameter_poles() {
        assert!(DunklParameter::new(s("-1/2")).is_err());
        assert!(DunklParameter::new(s("-3/2")).is_err());
        assert!(DunklParameter::new(s("-7/2")).is_err());
        assert!(DunklParameter::new(s("0")).is_ok());
        assert!(DunklParameter::new(s("-1")).is_ok());
        assert!(DunklParameter::new(s("1/2")).is_ok());
        assert!(DunklParameter::new(s("-2/3")).is_ok());
    }

    #[test]
    fn gamma_mu_values() {
        let zero = mu("0");
        for n in 0..=10 {
            assert_eq!(gamma_mu(&zero, n), factorial(n), "gamma_0({n})");
        }
        for m in ["1/2", "1", "3/2", "-1/4"] {
            let m = mu(m);
            assert_eq!(gamma_mu(&m, 0), Scalar::one());
            // gamma(1) = 2 mu + 1, gamma(2) = 4 mu + 2
            assert_eq!(gamma_mu(&m, 1), s("2") * m.value() + s("1"));
            assert_eq!(gamma_mu(&m, 2), s("4") * m.value() + s("2"));
            // recurrence gamma(n)/gamma(n-1): n even -> n, n odd -> n + 2 mu
            for n in 1..=9usize {
                let ratio = gamma_mu(&m, n) / gamma_mu(&m, n - 1);
                let expected = if n % 2 == 0 {
                    Scalar::int(n as i64)
                } else {
                    Scalar::int(n as i64) + s("2") * m.value()
                };
                assert_eq!(ratio, expected, "mu={} n={n}", m.value());
            }
        }
        let half = mu("1/2");
        assert_eq!(gamma_mu(&half, 2), s("4"));
        assert_eq!(gamma_mu(&half, 3), s("16"));
        assert_eq!(gamma_mu(&half, 4), s("64"));
    }

    #[test]
    fn exp_mu_series() {
        assert_eq!(
            exp_mu_coeffs(&mu("0"), 3).coeffs(),
            &[s("1"), s("1"), s("1/2"), s("1/6")][..]
        );
        // mu = 1/2: gamma = 1, 2, 4, 16 so coefficients 1, 1/2, 1/4, 1/16
        assert_eq!(
            exp_mu_coeffs(&mu("1/2"), 3).coeffs(),
            &[s("1"), s("1/2"), s("1/4"), s("1/16")][..]
        );
    }

    #[test]
    fn dunkl_operator_routes_agree() {
        let p = Polynomial::from_coeffs(vec![s("3"), s("-1/2"), s("0"), s("7"), s("2")]);
        for m in ["0", "1/2", "1", "-1/4", "5"] {
            let m = mu(m);
            assert_eq!(dunkl_apply(&m, &p), dunkl_apply_definitional(&m, &p));
        }
        // D_mu x = (2 mu + 1), D_mu x^2 = 2x
        let m = mu("1/2");
        let x = Polynomial::monomial(Scalar::one(), 1);
        assert_eq!(dunkl_apply(&m, &x), Polynomial::constant(s("2")));
        let x2 = Polynomial::monomial(Scalar::one(), 2);
        assert_eq!(dunkl_apply(&m, &x2), Polynomial::monomial(s("2"), 1));
        // mu = 0 reduces to d/dx
        assert_eq!(
            dunkl_apply(&mu("0"), &x2),
            Polynomial::monomial(s("2"), 1)
        );
    }

    #[test]
    fn gghps_reduces_to_hermite() {
        // H_n(x) = Q_n(2x; -1, 0) at d = 1
        let m0 = mu("0");
        let h = hermite_family(8).unwrap();
        for n in 0..=8 {
            let q = gghps_explicit(1, &s("-1"), &m0, n);
            assert_eq!(q.scale_arg(&s("2")), h.poly(n).unwrap(), "n = {n}");
        }
        // and the family built from its FamilySpec matches the explicit sum
        let fam = make_family(
            &FamilySpec::Gghps {
                d: 1,
                a: s("-1"),
                mu: s("0"),
            },
            8,
        )
        .unwrap();
        for n in 0..=8 {
            assert_eq!(fam.poly(n).unwrap(), gghps_explicit(1, &s("-1"), &m0, n));
        }
    }

    #[test]
    fn gghps_fold_symmetry() {
        // d = 2: only degrees n, n-3, n-6, ... appear
        let fam = gghps_family(2, &s("2"), &mu("1/2"), 9);
        for n in 0..=9usize {
            let q = fam.poly(n).unwrap();
            for deg in 0..=n {
                if (n - deg) % 3 != 0 {
                    assert!(q.coeff(deg).is_zero(), "n={n} deg={deg}");
                }
            }
        }
    }

    #[test]
    fn gghps_inversion_rebuilds_monomials() {
        let m = mu("1/2");
        for (d, a) in [(1usize, s("-1")), (2, s("3/2"))] {
            for n in 0..=7usize {
                let coeffs = gghps_inversion(d, &a, &m, n);
                let mut sum = Polynomial::zero();
                for (k, c) in coeffs.iter().enumerate() {
                    let q = gghps_explicit(d, &a, &m, n - (d + 1) * k);
                    sum = sum.add(&q.scale(c));
                }
                assert_eq!(sum, Polynomial::monomial(Scalar::one(), n), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn gghps_connection_against_generic() {
        let d = 1usize;
        let (a, mu1) = (s("-1"), mu("0"));
        let (b, mu2) = (s("1"), mu("1/2"));
        let n_max = 8;
        let src = gghps_family(d, &b, &mu2, n_max);
        let basis = gghps_family(d, &a, &mu1, n_max);
        let table = connection_explicit(&src, &basis, n_max).unwrap();
        for n in 0..=n_max {
            for m in 0..=n {
                let entry = table.entry(n, m);
                if (n - m) % (d + 1) == 0 {
                    let i = (n - m) / (d + 1);
                    let closed = gghps_connection_closed(n, i, &a, &b, &mu1, &mu2, d).unwrap();
                    assert_eq!(entry, &closed, "n={n} m={m}");
                } else {
                    assert!(entry.is_zero(), "off-lattice n={n} m={m}");
                }
            }
        }
        // worked case: d=1, a=b=-1, mu1=0, mu2=1, n=2, i=1
        let (a, b) = (s("-1"), s("-1"));
        let (m1, m2) = (mu("0"), mu("1"));
        let src = gghps_family(d, &b, &m2, 4);
        let basis = gghps_family(d, &a, &m1, 4);
        let table = connection_explicit(&src, &basis, 4).unwrap();
        let closed = gghps_connection_closed(2, 1, &a, &b, &m1, &m2, d).unwrap();
        assert_eq!(table.entry(2, 0), &closed);

        // degenerate mu1 = mu2: n!(b-a)^i/(i!(n-i(d+1))!)
        let closed = gghps_connection_closed(6, 2, &s("-1"), &s("2"), &m1, &m1, 1).unwrap();
        let expected = factorial(6) * s("3").pow(2) / (factorial(2) * factorial(2));
        assert_eq!(closed, expected);

        assert!(gghps_connection_closed(3, 2, &a, &b, &m1, &m2, 1).is_err());
    }

    #[test]
    fn gghps_duplication_against_generic() {
        let d = 1usize;
        let m = mu("1/2");
        let a = s("-1");
        let fam = gghps_family(d, &a, &m, 8);
        for alpha in ["2", "1/2", "-1"] {
            let alpha = s(alpha);
            let table = duplication_coeffs(&fam, &alpha, 8).unwrap();
            for n in 0..=8usize {
                let closed = gghps_duplication(d, &a, &m, &alpha, n).unwrap();
                for mm in 0..=n {
                    if (n - mm) % (d + 1) == 0 {
                        let k = (n - mm) / (d + 1);
                        assert_eq!(table.entry(n, mm), &closed[k], "alpha={alpha} n={n} m={mm}");
                    } else {
                        assert!(table.entry(n, mm).is_zero());
                    }
                }
            }
        }
        assert!(gghps_duplication(1, &a, &m, &Scalar::zero(), 4).is_err());
    }

    #[test]
    fn gghps_addition_matches_generic_and_samples() {
        let d = 2usize;
        let m = mu("1/2");
        let a = s("2");
        let fam = gghps_family(d, &a, &m, 7);
        for n in 0..=7usize {
            assert_eq!(gghps_addition(d, &a, &m, n), addition_coeffs(&fam, n));
        }
        // direct translation check at sampled y
        let n = 5usize;
        let coeffs = gghps_addition(d, &a, &m, n);
        let pn = fam.poly(n).unwrap();
        for y in ["0", "1", "-1/2", "3", "2/5", "-4"] {
            let y = s(y);
            let lhs = fam.translation_apply(&pn, &y);
            let mut rhs = Polynomial::zero();
            for (mm, c) in coeffs.iter().enumerate() {
                rhs = rhs.add(&fam.poly(mm).unwrap().scale(&(c * &y.pow((n - mm) as i32))));
            }
            assert_eq!(lhs, rhs, "y = {y}");
        }
    }

    #[test]
    fn gghps_convolution_float() {
        let xs = [0.3, -0.7, 0.95, -0.2, 0.5];
        let ys = [-0.4, 0.8, -0.9, 0.1, 0.6];
        for m in ["0", "1/2"] {
            let m = mu(m);
            for n in 0..=6 {
                assert!(
                    gghps_convolution_check(1, &s("-1"), &m, n, &xs, &ys),
                    "mu={} n={n}",
                    m.value()
                );
            }
        }
    }

    #[test]
    fn gghps_linearization_closed_matches_explicit() {
        let d = 1usize;
        let (a1, m1) = (s("-1"), mu("0"));
        let (a2, m2) = (s("1"), mu("1/2"));
        let (a3, m3) = (s("2"), mu("1"));
        let order = 8;
        let f1 = gghps_family(d, &a3, &m3, order);
        let f2 = gghps_family(d, &a1, &m1, order);
        let f3 = gghps_family(d, &a2, &m2, order);
        for i in 0..=4usize {
            for j in 0..=4usize {
                let table = linearization_explicit(&f1, &f2, &f3, i, j).unwrap();
                for k in 0..=(i + j) {
                    if (i + j - k) % (d + 1) == 0 {
                        let r = (i + j - k) / (d + 1);
                        let closed = gghps_linearization_closed(
                            i, j, r, &a1, &m1, &a2, &m2, &a3, &m3, d,
                        )
                        .unwrap();
                        assert_eq!(table.entry(k), &closed, "i={i} j={j} k={k}");
                    } else {
                        assert!(table.entry(k).is_zero(), "i={i} j={j} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn multi_linearization_reduces_and_extends() {
        let d = 1usize;
        let (a1, m1) = (s("-1"), mu("0"));
        let (a2, m2) = (s("1"), mu("1/2"));
        let target = (s("2"), mu("1"));
        // N = 2 agrees with the pairwise closed form
        for i in 0..=4usize {
            for j in 0..=4usize {
                let factors = vec![(i, a1.clone(), m1.clone()), (j, a2.clone(), m2.clone())];
                let multi = gghps_multi_linearization(&factors, d, &target);
                for k in 0..=(i + j) {
                    if (i + j - k) % (d + 1) == 0 {
                        let r = (i + j - k) / (d + 1);
                        let closed = gghps_linearization_closed(
                            i, j, r, &a1, &m1, &a2, &m2, &target.0, &target.1, d,
                        )
                        .unwrap();
                        assert_eq!(multi[k], closed, "i={i} j={j} k={k}");
                    } else {
                        assert!(multi[k].is_zero());
                    }
                }
            }
        }

        // N = 3 Hermite-type worked case: x * x * x = Q_3 + 6 Q_1 in the
        // same basis (Q_1 = x, Q_3 = x^3 - 6x at a = -1, mu = 0)
        let factors = vec![
            (1usize, s("-1"), mu("0")),
            (1, s("-1"), mu("0")),
            (1, s("-1"), mu("0")),
        ];
        let coeffs = gghps_multi_linearization(&factors, 1, &(s("-1"), mu("0")));
        assert_eq!(coeffs, vec![s("0"), s("6"), s("0"), s("1")]);
    }

    #[test]
    fn normalized_genhermite() {
        // Hhat_2^mu = 4x^2 - 2(2mu + 1)
        for m in ["0", "1/2", "1", "3/2"] {
            let m = mu(m);
            let expected = Polynomial::from_coeffs(vec![
                s("-2") * (s("2") * m.value() + s("1")),
                s("0"),
                s("4"),
            ]);
            assert_eq!(genhermite_normalized(&m, 2), expected);
        }
        // mu = 0: Hhat_n = H_n / floor(n/2)!
        let m0 = mu("0");
        let h = hermite_family(6).unwrap();
        for n in 0..=6usize {
            let expected = h
                .poly(n)
                .unwrap()
                .scale(&factorial(n / 2).recip().unwrap());
            assert_eq!(genhermite_normalized(&m0, n), expected, "n = {n}");
        }
    }

    #[test]
    fn genhermite_connection_closed_form() {
        // oracle expansion of Hhat_n^{mu2} in {Hhat_m^{mu1}}
        let (m1, m2) = (mu("1/2"), mu("3/2"));
        let n_max = 7;
        let basis = crate::oracle::BasisSet::new(
            (0..=n_max).map(|m| genhermite_normalized(&m1, m)).collect(),
        )
        .unwrap();
        for n in 0..=n_max {
            let target = genhermite_normalized(&m2, n);
            let coeffs = oracle::expand_in_basis(&target, &basis).unwrap();
            for m in 0..=n {
                if (n - m) % 2 == 0 {
                    let k = (n - m) / 2;
                    let closed = genhermite_connection_closed(&m1, &m2, n, k).unwrap();
                    assert_eq!(coeffs[m], closed, "n={n} m={m}");
                } else {
                    assert!(coeffs[m].is_zero());
                }
            }
        }
        // identity when mu1 = mu2
        assert_eq!(
            genhermite_connection_closed(&m1, &m1, 6, 0).unwrap(),
            Scalar::one()
        );
        assert_eq!(
            genhermite_connection_closed(&m1, &m1, 6, 2).unwrap(),
            Scalar::zero()
        );
        assert!(genhermite_connection_closed(&m1, &m2, 3, 2).is_err());
    }

    #[test]
    fn feldheim_matches_linearization() {
        let h = hermite_family(8).unwrap();
        for i in 0..=4usize {
            for j in 0..=4usize {
                let table = linearization_explicit(&h, &h, &h, i, j).unwrap();
                for k in 0..=(i + j) {
                    if (i + j - k) % 2 == 0 {
                        let kk = (i + j - k) / 2;
                        assert_eq!(table.entry(k), &feldheim_coeff(i, j, kk), "i={i} j={j} k={k}");
                    } else {
                        assert!(table.entry(k).is_zero());
                    }
                }
            }
        }
        // H_1^2 = H_2 + 2 H_0
        assert_eq!(feldheim_coeff(1, 1, 0), s("1"));
        assert_eq!(feldheim_coeff(1, 1, 1), s("2"));
    }

    #[test]
    fn dunkl_transfer_maps_kernels() {
        let (m1, m2) = (mu("0"), mu("1"));
        let theta = dunkl_transfer(&m1, &m2);
        let e1 = exp_mu_coeffs(&m1, 10);
        let e2 = exp_mu_coeffs(&m2, 10);
        assert_eq!(theta.apply_series(&e1), e2);
        for n in 0..=12 {
            assert_eq!(theta.xd_reconstruct(n), theta.ratio(n), "n = {n}");
        }
    }

    #[test]
    fn family_spec_json() {
        let spec: FamilySpec =
            serde_json::from_str(r#"{"family":"gghps","d":1,"a":"-1","mu":"1/2"}"#).unwrap();
        assert_eq!(
            spec,
            FamilySpec::Gghps {
                d: 1,
                a: s("-1"),
                mu: s("1/2")
            }
        );
        let fam = spec.build(6).unwrap();
        assert_eq!(fam.poly(2).unwrap(), gghps_explicit(1, &s("-1"), &mu("1/2"), 2));

        let spec: FamilySpec =
            serde_json::from_str(r#"{"family":"appell","A":["1","0","-1"],"order":2}"#).unwrap();
        let fam = spec.build(2).unwrap();
        assert_eq!(fam.poly(2).unwrap(), Polynomial::from_coeffs(vec![s("-2"), s("0"), s("1")]));
        // asking beyond the declared coefficients fails
        assert!(spec.build(3).is_err());

        // gould_hopper(m=2, h=-1) coincides with gghps(d=1, a=-1, mu=0)
        let gh: FamilySpec =
            serde_json::from_str(r#"{"family":"gould_hopper","m":2,"h":"-1"}"#).unwrap();
        let gh = gh.build(6).unwrap();
        for n in 0..=6 {
            assert_eq!(gh.poly(n).unwrap(), gghps_explicit(1, &s("-1"), &mu("0"), n));
        }

        // pole and parameter validation at build time
        let bad: FamilySpec =
            serde_json::from_str(r#"{"family":"generalized_hermite","mu":"-1/2"}"#).unwrap();
        assert!(matches!(bad.build(4), Err(Error::DunklPole { .. })));
        let bad: FamilySpec =
            serde_json::from_str(r#"{"family":"gghps","d":0,"a":"1","mu":"0"}"#).unwrap();
        assert!(bad.build(4).is_err());
        let bad: FamilySpec =
            serde_json::from_str(r#"{"family":"hypergeometric_b","gammas":["-1"],"deltas":["2"]}"#)
                .unwrap();
        assert!(bad.build(4).is_err());

        assert_eq!(FamilySpec::by_name("hermite"), Some(FamilySpec::Hermite));
        assert_eq!(FamilySpec::by_name("monomial"), Some(FamilySpec::Monomial));
        assert_eq!(FamilySpec::by_name("nope"), None);
    }

    #[test]
    fn hypergeometric_b_ratio_against_appell() {
        // transfer from an Appell family to the hypergeometric-B family has
        // ratio prod (gammas)_n / prod (deltas)_n
        let spec = FamilySpec::HypergeometricB {
            gammas: vec![s("1")],
            deltas: vec![s("2")],
        };
        let hb = spec.build(8).unwrap();
        let ap = appell_family(PowerSeries::one(8), "appell(1)").unwrap();
        let theta = TransferOperator::between(&ap, &hb);
        for n in 0..=8usize {
            assert_eq!(
                theta.ratio(n),
                pochhammer(&s("1"), n) / pochhammer(&s("2"), n)
            );
        }
    }
}
