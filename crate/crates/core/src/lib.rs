//! Exact symbolic engine for quantum hypermatrix algebras.
//!
//! Coefficients live in the fraction field of Laurent polynomials in
//! `v = q^(1/2)` ([`qseries`]). Algebra elements are free noncommutative
//! polynomials ([`ncalg`]); relations are imposed only by the membership
//! tests of [`verify`] or, for quantum matrices, by PBW rewriting
//! ([`qmatrix`]).

pub mod extalg;
pub mod hyperalg;
pub mod ncalg;
pub mod pfaffian;
pub mod qmatrix;
pub mod qseries;
pub mod verify;

pub use ncalg::{GenId, NCPoly, NcError, Perm, Word};
pub use qseries::{qbinom, qfact, qnum, LaurentV, QSeriesError, RationalFn};
