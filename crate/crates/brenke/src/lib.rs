//! Exact expansion objects for Brenke polynomial sets.
//!
//! A Brenke set is generated by `A(t) B(xt) = sum_n P_n(x) t^n / n!` where
//! `A(t) = sum a_k t^k` and `B(t) = sum b_k t^k` with `a_0 != 0` and
//! `b_k != 0` for every `k`. This crate computes, in exact rational
//! arithmetic, the coefficient families attached to such sets:
//!
//! * connection coefficients between two Brenke sets,
//! * linearization coefficients of a product of two (or more) sets,
//! * inversion, duplication, addition and convolution formulas,
//! * the `phi_k` coefficients of the X^k D^k expansion of a transfer
//!   operator between two Brenke bases.
//!
//! Every coefficient family is available through at least two independent
//! routes (an explicit finite sum and a generating-function route), plus a
//! brute-force oracle that expands polynomials in a graded basis by linear
//! algebra. The [`verify`] module bundles the cross-checks; [`quadrature`]
//! validates the integral representations of the transfer operator in
//! floating point.
//!
//! Specialized closed forms are provided for generalized Gould-Hopper sets
//! (`exp(a t^{d+1}) exp_mu(xt)`, Dunkl kernel) and generalized Hermite sets;
//! see [`families`].

pub mod error;
pub mod expansion;
pub mod families;
pub mod family;
pub mod oracle;
pub mod poly;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use expansion::{ConnectionTable, LinearizationTable};
pub use families::{DunklParameter, FamilySpec};
pub use family::{BrenkeFamily, TransferOperator};
pub use poly::Polynomial;
pub use scalar::Scalar;
pub use series::PowerSeries;
