//! Floating-point validation of the integral representations.
//!
//! The transfer operator between suitable pairs of families has an
//! integral form: a beta-type average for hypergeometric coefficient
//! ratios, and a Dunkl-kernel average for the `gamma_mu` ratios. This
//! module evaluates those integrals numerically so the exact coefficient
//! routes can be checked against them.
//!
//! The integrands carry endpoint singularities `(t - lo)^alpha` and
//! `(hi - t)^beta` with exponents in `(-1, 0)` in the interesting cases,
//! so the integrator substitutes `t = lo + h u^{1/(1+alpha)}` on the half
//! interval adjacent to each singular endpoint, which turns the weight
//! into a constant Jacobian factor; the remaining smooth integrand goes
//! through adaptive Gauss-Kronrod 7-15 bisection. Exponents that are
//! nonnegative integers are left in place (the factor is already a
//! polynomial). An exponent `<= -1` is rejected as non-integrable.

use crate::error::{Error, Result};
use crate::families::DunklParameter;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Default absolute tolerance used by the representation checks.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 48;

// Gauss-Kronrod 7-15 abscissae (positive half) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 7-15 panel: returns the Kronrod estimate and the
/// (conservative) error estimate `|kronrod - gauss|`.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        resk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    (resk * h, (resk - resg).abs() * h.abs())
}

fn adapt(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
    let (val, err) = gk15(f, a, b);
    if err <= tol || depth >= MAX_DEPTH {
        return (val, err);
    }
    let m = 0.5 * (a + b);
    let (lv, le) = adapt(f, a, m, 0.5 * tol, depth + 1);
    let (rv, re) = adapt(f, m, b, 0.5 * tol, depth + 1);
    (lv + rv, le + re)
}

/// Adaptive Gauss-Kronrod integration of a smooth integrand over `[a, b]`
/// to absolute tolerance `tol`.
pub fn adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (val, err) = adapt(&f, a, b, tol, 0);
    if err > tol {
        return Err(Error::QuadratureNoConvergence {
            requested: tol,
            achieved: err,
        });
    }
    Ok(val)
}

fn is_nonnegative_integer(e: f64) -> bool {
    e >= -0.5 && (e - e.round()).abs() < 1e-12
}

/// Integrates `(t - lo)^alpha (hi - t)^beta g(t)` over `[lo, hi]` for a
/// smooth `g`, with `exponents = (alpha, beta)`. Exponents `<= -1` are
/// rejected as [`Error::NonIntegrable`]; nonnegative integer exponents are
/// folded into the integrand, fractional ones are removed by the power
/// substitution described in the module docs.
pub fn integrate_endpoint_singular(
    g: impl Fn(f64) -> f64,
    interval: (f64, f64),
    exponents: (f64, f64),
    tol: f64,
) -> Result<f64> {
    let (lo, hi) = interval;
    let (alpha, beta) = exponents;
    for e in [alpha, beta] {
        if e <= -1.0 {
            return Err(Error::NonIntegrable { exponent: e });
        }
    }
    if lo == hi {
        return Ok(0.0);
    }
    let mid = 0.5 * (lo + hi);
    let h = mid - lo;
    let half_tol = 0.5 * tol;

    // left half [lo, mid]: only the alpha factor is singular here
    let left = if is_nonnegative_integer(alpha) {
        let k = alpha.round() as i32;
        adaptive(
            |t| (t - lo).powi(k) * (hi - t).powf(beta) * g(t),
            lo,
            mid,
            half_tol,
        )?
    } else {
        let s = 1.0 / (1.0 + alpha);
        let jac = h.powf(1.0 + alpha) * s;
        jac * adaptive(
            |u| {
                let t = lo + h * u.powf(s);
                (hi - t).powf(beta) * g(t)
            },
            0.0,
            1.0,
            half_tol / jac.abs(),
        )?
    };

    // right half [mid, hi]: only the beta factor is singular here
    let right = if is_nonnegative_integer(beta) {
        let k = beta.round() as i32;
        adaptive(
            |t| (t - lo).powf(alpha) * (hi - t).powi(k) * g(t),
            mid,
            hi,
            half_tol,
        )?
    } else {
        let s = 1.0 / (1.0 + beta);
        let jac = h.powf(1.0 + beta) * s;
        jac * adaptive(
            |u| {
                let t = hi - h * u.powf(s);
                (t - lo).powf(alpha) * g(t)
            },
            0.0,
            1.0,
            half_tol / jac.abs(),
        )?
    };

    Ok(left + right)
}

// Lanczos approximation, g = 7, 9 coefficients.
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.5203681218851,
    -1259.1392167224028,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507343278686905,
    -0.13857109526572012,
    9.984_369_578_019_572e-6,
    1.5056327351493116e-7,
];

/// Natural log of the gamma function for positive arguments (reflection
/// for `x < 1/2`).
pub fn ln_gamma(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        PI.ln() - (PI * x).sin().ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + 7.5;
        0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
    }
}

/// Euler beta function `B(a, b)` for positive arguments.
pub fn beta(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

fn require_positive(value: &Scalar, what: &str) -> Result<()> {
    if value.is_zero() || value.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "{what} must be positive, got {value}"
        )));
    }
    Ok(())
}

/// Beta-average realization of the transfer operator with coefficient
/// ratio `r_n = (gamma)_n / (delta)_n`:
///
/// `(theta p)(x) = (1/B(gamma, delta-gamma))
///     int_0^1 t^{gamma-1} (1-t)^{delta-gamma-1} p(xt) dt`,
///
/// valid for `0 < gamma < delta`.
pub fn theta_integral_beta(
    gamma: &Scalar,
    delta: &Scalar,
    p: &Polynomial,
    x: f64,
) -> Result<f64> {
    require_positive(gamma, "gamma")?;
    require_positive(&(delta - gamma), "delta - gamma")?;
    let g = gamma.to_f64();
    let d = delta.to_f64();
    let b = beta(g, d - g);
    // request the raw integral tightly enough that the normalized value
    // meets DEFAULT_TOL
    let tol = (DEFAULT_TOL * b.min(1.0)).max(1e-14);
    let raw = integrate_endpoint_singular(
        |t| p.eval_f64(x * t),
        (0.0, 1.0),
        (g - 1.0, d - g - 1.0),
        tol,
    )?;
    Ok(raw / b)
}

/// Dunkl-kernel realization of the transfer operator with ratio
/// `r_n = gamma_mu1(n) / gamma_mu2(n)`:
///
/// `(theta p)(x) = (1/B(mu1+1/2, mu2-mu1)) int_{-1}^1 p(xt) |t|^{2 mu1}
///     (1-t)^{mu2-mu1-1} (1+t)^{mu2-mu1} dt`,
///
/// valid for `-1/2 < mu1 < mu2`. At `mu1 = 0` this is the classical
/// intertwining average.
pub fn theta_integral_dunkl(
    mu1: &DunklParameter,
    mu2: &DunklParameter,
    p: &Polynomial,
    x: f64,
) -> Result<f64> {
    let (m1, m2) = dunkl_pair(mu1, mu2)?;
    let c = m2 - m1;
    let b = beta(m1 + 0.5, c);
    let tol = (0.5 * DEFAULT_TOL * b.min(1.0)).max(1e-14);
    // [-1, 0]: exponent c at -1 (from (1+t)^c), exponent 2 mu1 at 0
    // (|t| = -t there); the (1-t)^{c-1} factor is smooth on this half
    let neg = integrate_endpoint_singular(
        |t| p.eval_f64(x * t) * (1.0 - t).powf(c - 1.0),
        (-1.0, 0.0),
        (c, 2.0 * m1),
        tol,
    )?;
    // [0, 1]: exponent 2 mu1 at 0, exponent c - 1 at 1; (1+t)^c smooth
    let pos = integrate_endpoint_singular(
        |t| p.eval_f64(x * t) * (1.0 + t).powf(c),
        (0.0, 1.0),
        (2.0 * m1, c - 1.0),
        tol,
    )?;
    Ok((neg + pos) / b)
}

/// GGHPS connection coefficient by its integral representation: for the
/// expansion of `Q_n(x; b, mu2)` in `{Q_m(x; a, mu1)}` (same `d`,
/// `-1/2 < mu1 < mu2`), the coefficient at `m = n - i(d+1)` equals
///
/// `n!/(i! m!) (1/B(mu1+1/2, mu2-mu1)) int_{-1}^1 t^m (b - a t^{d+1})^i
///     |t|^{2 mu1} (1-t)^{mu2-mu1-1} (1+t)^{mu2-mu1} dt`.
#[allow(clippy::too_many_arguments)]
pub fn gghps_cc_integral(
    n: usize,
    i: usize,
    a: &Scalar,
    b: &Scalar,
    mu1: &DunklParameter,
    mu2: &DunklParameter,
    d: usize,
) -> Result<f64> {
    if i * (d + 1) > n {
        return Err(Error::InvalidParameter(format!(
            "connection index i = {i} exceeds n/(d+1) with n = {n}, d = {d}"
        )));
    }
    let (m1, m2) = dunkl_pair(mu1, mu2)?;
    let c = m2 - m1;
    let m = n - i * (d + 1);
    let af = a.to_f64();
    let bf = b.to_f64();
    let payload = |t: f64| t.powi(m as i32) * (bf - af * t.powi((d + 1) as i32)).powi(i as i32);

    let prefactor = (crate::scalar::factorial(n)
        / (crate::scalar::factorial(i) * crate::scalar::factorial(m)))
    .to_f64();
    let bval = beta(m1 + 0.5, c);
    // the raw integrals get multiplied by prefactor/bval, so request them
    // proportionally tighter (floored near machine precision)
    let scale = (prefactor / bval).abs().max(1.0);
    let tol = (0.5 * DEFAULT_TOL / scale).max(1e-14);

    let neg = integrate_endpoint_singular(
        |t| payload(t) * (1.0 - t).powf(c - 1.0),
        (-1.0, 0.0),
        (c, 2.0 * m1),
        tol,
    )?;
    let pos = integrate_endpoint_singular(
        |t| payload(t) * (1.0 + t).powf(c),
        (0.0, 1.0),
        (2.0 * m1, c - 1.0),
        tol,
    )?;

    Ok(prefactor * (neg + pos) / bval)
}

/// Validates `-1/2 < mu1 < mu2` and returns the pair as floats.
fn dunkl_pair(mu1: &DunklParameter, mu2: &DunklParameter) -> Result<(f64, f64)> {
    let lower = mu1.value() + &Scalar::ratio(1, 2);
    require_positive(&lower, "mu1 + 1/2")?;
    require_positive(&(mu2.value() - mu1.value()), "mu2 - mu1")?;
    Ok((mu1.value().to_f64(), mu2.value().to_f64()))
}
