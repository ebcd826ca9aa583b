//! Expansion coefficients between Brenke families.
//!
//! Connection: `Q_n = sum_{m<=n} C_m(n) P_m` for two families `{P}` (the
//! basis) and `{Q}` (the expanded set). Linearization: `R_i S_j =
//! sum_{k<=i+j} L_ij(k) P_k` for a product of two sets against a third.
//! Both come in two independent flavors: an explicit finite double sum,
//! and a generating-function route that manipulates truncated series and
//! reads coefficients off. The two must agree exactly; the test suites
//! hold them against each other and against the linear-algebra oracle.
//!
//! Also here: duplication (`P_n(ax)` in `{P_m(x)}`), addition
//! (`T_y P_n` as a bivariate expansion) and the convolution identity
//! `A(D_B) T_y P_n = sum_m C(n,m) P_{n-m}(y) P_m(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{BrenkeFamily, TransferOperator};
use crate::poly::Polynomial;
use crate::scalar::{binomial, factorial, Scalar};
use crate::series::PowerSeries;

/// Lower-triangular table of connection coefficients: row `n` holds
/// `C_m(n)` for `m = 0..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct ConnectionTable {
    entries: Vec<Vec<Scalar>>,
}

impl ConnectionTable {
    pub fn from_rows(entries: Vec<Vec<Scalar>>) -> Result<Self> {
        for (n, row) in entries.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::InvalidParameter(format!(
                    "connection row {n} must have {} entries, found {}",
                    n + 1,
                    row.len()
                )));
            }
        }
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "connection table needs at least row 0".into(),
            ));
        }
        Ok(ConnectionTable { entries })
    }

    pub fn identity(n_max: usize) -> Self {
        let entries = (0..=n_max)
            .map(|n| {
                let mut row = vec![Scalar::zero(); n + 1];
                row[n] = Scalar::one();
                row
            })
            .collect();
        ConnectionTable { entries }
    }

    pub fn n_max(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entry(&self, n: usize, m: usize) -> &Scalar {
        &self.entries[n][m]
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.entries
    }

    /// Chained change of basis: if `self` expands F in G and `other`
    /// expands G in H, the result expands F in H.
    pub fn compose(&self, other: &ConnectionTable) -> ConnectionTable {
        let n_max = self.n_max().min(other.n_max());
        let entries = (0..=n_max)
            .map(|n| {
                (0..=n)
                    .map(|p| {
                        let mut acc = Scalar::zero();
                        for m in p..=n {
                            acc += &(&self.entries[n][m] * &other.entries[m][p]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        ConnectionTable { entries }
    }

    /// Applies the table to a coefficient vector in the expanded family:
    /// given `q` with `poly = sum_n q_n Q_n`, returns `p` with
    /// `poly = sum_m p_m P_m`.
    pub fn apply(&self, q: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.entries.len()];
        for (n, qn) in q.iter().enumerate().take(self.entries.len()) {
            if qn.is_zero() {
                continue;
            }
            for m in 0..=n {
                out[m] += &(qn * &self.entries[n][m]);
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,value\n");
        for (n, row) in self.entries.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                out.push_str(&format!("{n},{m},{v}\n"));
            }
        }
        out
    }
}

impl std::fmt::Debug for ConnectionTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ConnectionTable(n_max {})", self.n_max())?;
        for row in &self.entries {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ConnectionRepr {
    kind: String,
    n_max: usize,
    entries: Vec<Vec<Scalar>>,
}

impl Serialize for ConnectionTable {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ConnectionRepr {
            kind: "connection".into(),
            n_max: self.n_max(),
            entries: self.entries.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ConnectionTable {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = ConnectionRepr::deserialize(de)?;
        if repr.kind != "connection" {
            return Err(serde::de::Error::custom(format!(
                "expected kind \"connection\", found {:?}",
                repr.kind
            )));
        }
        let table = ConnectionTable::from_rows(repr.entries).map_err(serde::de::Error::custom)?;
        if table.n_max() != repr.n_max {
            return Err(serde::de::Error::custom("n_max does not match entries"));
        }
        Ok(table)
    }
}

/// Linearization coefficients of one product `R_i S_j`: entry `k` holds
/// `L_ij(k)` for `k = 0..=i+j`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearizationTable {
    i: usize,
    j: usize,
    entries: Vec<Scalar>,
}

impl LinearizationTable {
    pub fn new(i: usize, j: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != i + j + 1 {
            return Err(Error::InvalidParameter(format!(
                "linearization of degrees ({i},{j}) must have {} entries, found {}",
                i + j + 1,
                entries.len()
            )));
        }
        Ok(LinearizationTable { i, j, entries })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn entry(&self, k: usize) -> &Scalar {
        &self.entries[k]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,value\n");
        for (k, v) in self.entries.iter().enumerate() {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

impl std::fmt::Debug for LinearizationTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "LinearizationTable(i {}, j {}; {:?})",
            self.i, self.j, self.entries
        )
    }
}

#[derive(Serialize, Deserialize)]
struct LinearizationRepr {
    kind: String,
    i: usize,
    j: usize,
    entries: Vec<Scalar>,
}

impl Serialize for LinearizationTable {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        LinearizationRepr {
            kind: "linearization".into(),
            i: self.i,
            j: self.j,
            entries: self.entries.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for LinearizationTable {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = LinearizationRepr::deserialize(de)?;
        if repr.kind != "linearization" {
            return Err(serde::de::Error::custom(format!(
                "expected kind \"linearization\", found {:?}",
                repr.kind
            )));
        }
        LinearizationTable::new(repr.i, repr.j, repr.entries).map_err(serde::de::Error::custom)
    }
}

/// Dense triangular array of bivariate series coefficients: `entry(i, j)`
/// for `i + j <= order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BivariateTable {
    order: usize,
    rows: Vec<Vec<Scalar>>,
}

impl BivariateTable {
    fn zero(order: usize) -> Self {
        BivariateTable {
            order,
            rows: (0..=order)
                .map(|i| vec![Scalar::zero(); order - i + 1])
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }
}

/// Connection coefficients of `src`'s polynomials in `dst_basis`, via the
/// explicit double sum
/// `C_m(n) = n!/m! sum_k r_{n-k} a^{src}_k ahat^{basis}_{n-m-k}`
/// with `r_q = b^{src}_q / b^{basis}_q`.
pub fn connection_explicit(
    src: &BrenkeFamily,
    dst_basis: &BrenkeFamily,
    n_max: usize,
) -> Result<ConnectionTable> {
    let ahat = dst_basis.a().reciprocal(n_max)?;
    let a2 = src.a().truncated(n_max)?;
    let ratio: Vec<Scalar> = (0..=n_max)
        .map(|q| src.b(q) / dst_basis.b(q))
        .collect();
    let facts: Vec<Scalar> = (0..=n_max).map(factorial).collect();

    let mut entries = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut acc = Scalar::zero();
            for k in 0..=(n - m) {
                let term = &ratio[n - k] * a2.coeff(k) * ahat.coeff(n - m - k);
                acc += &term;
            }
            row.push(&facts[n] / &facts[m] * acc);
        }
        entries.push(row);
    }
    ConnectionTable::from_rows(entries)
}

/// One column of the connection table through the generating function:
/// `A_src(t) * theta(t^m / A_basis(t)) = sum_{n>=m} (m!/n!) C_m(n) t^n`,
/// where `theta` transfers the basis B-series onto the source's. Returns
/// `C_m(n)` indexed by `n` (zero for `n < m`).
pub fn connection_gf(
    src: &BrenkeFamily,
    dst_basis: &BrenkeFamily,
    m: usize,
    n_max: usize,
) -> Result<Vec<Scalar>> {
    let ahat = dst_basis.a().reciprocal(n_max)?;
    let shifted = ahat.shifted_up(m, n_max)?;
    let theta = TransferOperator::between(dst_basis, src);
    let transferred = theta.apply_series(&shifted);
    let prod = src.a().mul(&transferred, n_max)?;
    let m_fact = factorial(m);
    Ok((0..=n_max)
        .map(|n| {
            if n < m {
                Scalar::zero()
            } else {
                factorial(n) / &m_fact * prod.coeff(n)
            }
        })
        .collect())
}

/// Connection table for two families sharing the same B-series; only the
/// quotient `A_src / A_basis` enters: `C_m(n) = (n!/m!) [t^{n-m}] A2/A1`.
pub fn connection_same_b(
    src_a: &PowerSeries,
    basis_a: &PowerSeries,
    n_max: usize,
) -> Result<ConnectionTable> {
    let quotient = src_a.mul(&basis_a.reciprocal(n_max)?, n_max)?;
    let facts: Vec<Scalar> = (0..=n_max).map(factorial).collect();
    let entries = (0..=n_max)
        .map(|n| {
            (0..=n)
                .map(|m| &facts[n] / &facts[m] * quotient.coeff(n - m))
                .collect()
        })
        .collect();
    ConnectionTable::from_rows(entries)
}

/// Duplication table: `P_n(a x) = sum_m C_m(n) P_m(x)` with
/// `C_m(n) = (n!/m!) a^m beta_{n-m}` and `beta = A(t)/A(at)`.
pub fn duplication_coeffs(
    fam: &BrenkeFamily,
    a: &Scalar,
    n_max: usize,
) -> Result<ConnectionTable> {
    if a.is_zero() {
        return Err(Error::DuplicationUndefined);
    }
    let scaled = fam.a().scale_arg(a);
    let beta = fam.a().mul(&scaled.reciprocal(n_max)?, n_max)?;
    let facts: Vec<Scalar> = (0..=n_max).map(factorial).collect();
    let entries = (0..=n_max)
        .map(|n| {
            let mut a_pow = Scalar::one();
            (0..=n)
                .map(|m| {
                    if m > 0 {
                        a_pow *= a;
                    }
                    &facts[n] / &facts[m] * &a_pow * beta.coeff(n - m)
                })
                .collect()
        })
        .collect();
    ConnectionTable::from_rows(entries)
}

/// Addition coefficients: `T_y P_n(x) = sum_m c_m y^{n-m} P_m(x)` with
/// `c_m = (n!/m!) b_{n-m}`. Returned indexed by `m`; the attached power
/// of `y` is `n - m`.
pub fn addition_coeffs(fam: &BrenkeFamily, n: usize) -> Vec<Scalar> {
    let nf = factorial(n);
    (0..=n)
        .map(|m| &nf / factorial(m) * fam.b(n - m))
        .collect()
}

fn require_distinct_samples(n: usize, ys: &[Scalar]) -> Result<()> {
    let mut seen = ys.to_vec();
    seen.sort();
    seen.dedup();
    if seen.len() < n + 1 {
        return Err(Error::TooFewSamples {
            degree: n,
            required: n + 1,
            got: seen.len(),
        });
    }
    Ok(())
}

/// Confirms the addition expansion of `T_y P_n` by exact evaluation at the
/// given `y` samples. Both sides are degree `n` in `y`, so `n + 1` distinct
/// sample points certify the bivariate identity.
pub fn addition_check(fam: &BrenkeFamily, n: usize, ys: &[Scalar]) -> Result<bool> {
    require_distinct_samples(n, ys)?;
    let coeffs = addition_coeffs(fam, n);
    let pn = fam.poly(n)?;
    let basis: Vec<Polynomial> = (0..=n).map(|m| fam.poly(m)).collect::<Result<_>>()?;
    for y in ys {
        let lhs = fam.translation_apply(&pn, y);
        let mut rhs = Polynomial::zero();
        for (m, c) in coeffs.iter().enumerate() {
            rhs = rhs.add(&basis[m].scale(&(c * &y.pow((n - m) as i32))));
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Confirms the convolution identity
/// `A(D_B) T_y P_n(x) = sum_m C(n,m) P_{n-m}(y) P_m(x)`
/// by exact evaluation at each `y` sample (needs `n + 1` distinct points
/// to certify the degree-`n` dependence on `y`).
pub fn convolution_check(fam: &BrenkeFamily, n: usize, ys: &[Scalar]) -> Result<bool> {
    require_distinct_samples(n, ys)?;
    let pn = fam.poly(n)?;
    let basis: Vec<Polynomial> = (0..=n).map(|m| fam.poly(m)).collect::<Result<_>>()?;
    for y in ys {
        let lhs = fam.a_lowering_apply(&fam.translation_apply(&pn, y))?;
        let mut rhs = Polynomial::zero();
        for m in 0..=n {
            let weight = binomial(n, m) * basis[n - m].eval(y);
            rhs = rhs.add(&basis[m].scale(&weight));
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Linearization coefficients of `f2`'s `R_i` times `f3`'s `S_j` in the
/// `basis` family, via the explicit double sum
/// `L_ij(k) = (i! j!/k!) sum_{n<=i} sum_{m<=j}
///     (b2_n b3_m / b1_{n+m}) a2_{i-n} a3_{j-m} ahat1_{n+m-k}`
/// with `ahat1_{q} = 0` for `q < 0`.
pub fn linearization_explicit(
    basis: &BrenkeFamily,
    f2: &BrenkeFamily,
    f3: &BrenkeFamily,
    i: usize,
    j: usize,
) -> Result<LinearizationTable> {
    let ahat = basis.a().reciprocal(i + j)?;
    let a2 = f2.a().truncated(i)?;
    let a3 = f3.a().truncated(j)?;
    let fact_i = factorial(i);
    let fact_j = factorial(j);

    let mut entries = Vec::with_capacity(i + j + 1);
    for k in 0..=(i + j) {
        let mut acc = Scalar::zero();
        for n in 0..=i {
            for m in 0..=j {
                if n + m < k {
                    continue;
                }
                let term = f2.b(n) * f3.b(m) / basis.b(n + m)
                    * a2.coeff(i - n)
                    * a3.coeff(j - m)
                    * ahat.coeff(n + m - k);
                acc += &term;
            }
        }
        entries.push(&fact_i * &fact_j / factorial(k) * acc);
    }
    LinearizationTable::new(i, j, entries)
}

/// Linearization through the bivariate generating function: for a fixed
/// `k`, the table entry `(i, j)` is `L_ij(k)`, read off
/// `A2(s) A3(t)/k! * theta2_s theta3_t (theta1_{s+t})^{-1} ((s+t)^k / A1(s+t))
///   = sum_{i,j} L_ij(k)/(i! j!) s^i t^j`,
/// where `theta_u^{(r)}(u^n) = n! b_r(n) u^n` acts diagonally in its slot.
pub fn linearization_gf(
    basis: &BrenkeFamily,
    f2: &BrenkeFamily,
    f3: &BrenkeFamily,
    k: usize,
    order: usize,
) -> Result<BivariateTable> {
    let ahat = basis.a().reciprocal(order)?;
    let a2 = f2.a().truncated(order)?;
    let a3 = f3.a().truncated(order)?;

    // univariate in w = s + t: coefficient of w^n after inverting theta1
    let mut g = vec![Scalar::zero(); order + 1];
    for (n, gn) in g.iter_mut().enumerate() {
        if n >= k {
            *gn = ahat.coeff(n - k) / (factorial(n) * basis.b(n));
        }
    }

    // binomial expansion of w^n into s^l t^m, then the diagonal transfers
    let mut biv = BivariateTable::zero(order);
    for l in 0..=order {
        for m in 0..=(order - l) {
            let n = l + m;
            if g[n].is_zero() {
                continue;
            }
            let expanded = &g[n] * binomial(n, l);
            biv.rows[l][m] = expanded * factorial(l) * f2.b(l) * factorial(m) * f3.b(m);
        }
    }

    // multiply by A2(s) (convolution down each column index l)
    let mut with_a2 = BivariateTable::zero(order);
    for l in 0..=order {
        for m in 0..=(order - l) {
            let mut acc = Scalar::zero();
            for lp in 0..=l {
                let c = a2.coeff(l - lp);
                if c.is_zero() || biv.rows[lp][m].is_zero() {
                    continue;
                }
                acc += &(c * &biv.rows[lp][m]);
            }
            with_a2.rows[l][m] = acc;
        }
    }

    // multiply by A3(t) and normalize to L_ij(k) = i! j!/k! [s^i t^j]
    let k_fact = factorial(k);
    let mut out = BivariateTable::zero(order);
    for i in 0..=order {
        for j in 0..=(order - i) {
            let mut acc = Scalar::zero();
            for jp in 0..=j {
                let c = a3.coeff(j - jp);
                if c.is_zero() || with_a2.rows[i][jp].is_zero() {
                    continue;
                }
                acc += &(c * &with_a2.rows[i][jp]);
            }
            out.rows[i][j] = factorial(i) * factorial(j) / &k_fact * acc;
        }
    }
    Ok(out)
}
