//! Brute-force reference computations.
//!
//! Nothing here knows any closed form: expansion coefficients are found
//! by exact back-substitution against a strictly graded basis. The point
//! is independence — the routines the rest of the crate checks itself
//! against share no code path with the explicit-sum or generating-function
//! implementations.

use crate::error::{Error, Result};
use crate::family::BrenkeFamily;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// A strictly graded basis: element `m` has degree exactly `m`.
pub struct BasisSet {
    polys: Vec<Polynomial>,
}

impl BasisSet {
    pub fn new(polys: Vec<Polynomial>) -> Result<Self> {
        for (index, p) in polys.iter().enumerate() {
            if p.degree() != Some(index) {
                return Err(Error::DegenerateBasis { index });
            }
        }
        Ok(BasisSet { polys })
    }

    /// Basis made of `P_0 .. P_{n_max}` of a Brenke family.
    pub fn from_family(fam: &BrenkeFamily, n_max: usize) -> Result<Self> {
        let polys = (0..=n_max).map(|m| fam.poly(m)).collect::<Result<_>>()?;
        BasisSet::new(polys)
    }

    pub fn n_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, m: usize) -> &Polynomial {
        &self.polys[m]
    }
}

/// Expands `target` in the basis by back-substitution from the top degree
/// down. Exact; the residual after the last step must be identically zero,
/// which the strict grading guarantees.
pub fn expand_in_basis(target: &Polynomial, basis: &BasisSet) -> Result<Vec<Scalar>> {
    let Some(deg) = target.degree() else {
        return Ok(vec![Scalar::zero(); basis.n_max() + 1]);
    };
    if deg > basis.n_max() {
        return Err(Error::DegreeOverflow {
            degree: deg,
            n_max: basis.n_max(),
        });
    }
    let mut coeffs = vec![Scalar::zero(); basis.n_max() + 1];
    let mut residual = target.clone();
    for m in (0..=deg).rev() {
        let c = residual.coeff(m);
        if c.is_zero() {
            continue;
        }
        let lead = basis.poly(m).leading().expect("graded basis element");
        let q = c / lead.clone();
        residual = residual.sub(&basis.poly(m).scale(&q));
        coeffs[m] = q;
    }
    debug_assert!(residual.is_zero());
    Ok(coeffs)
}

/// Connection table by expansion: row `n` holds the coefficients of
/// `src`'s `P_n` in the `dst` basis.
pub fn oracle_connection(
    src: &BrenkeFamily,
    dst: &BrenkeFamily,
    n_max: usize,
) -> Result<Vec<Vec<Scalar>>> {
    let basis = BasisSet::from_family(dst, n_max)?;
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = expand_in_basis(&src.poly(n)?, &basis)?;
        row.truncate(n + 1);
        rows.push(row);
    }
    Ok(rows)
}

/// Coefficients of `f2`'s `P_i` times `f3`'s `P_j` in the `basis` family,
/// indexed `0..=i+j`.
pub fn oracle_linearization(
    basis: &BrenkeFamily,
    f2: &BrenkeFamily,
    f3: &BrenkeFamily,
    i: usize,
    j: usize,
) -> Result<Vec<Scalar>> {
    let product = f2.poly(i)?.mul(&f3.poly(j)?);
    let basis_set = BasisSet::from_family(basis, i + j)?;
    expand_in_basis(&product, &basis_set)
}
