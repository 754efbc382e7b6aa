//! Exact resultants, arbitrary-order derivatives of resultants with respect
//! to polynomial coefficients, and certified recovery of multiple and common
//! roots as ratios of those derivatives.
//!
//! All arithmetic is over exact rationals; every identity is checked with
//! `==`, never a tolerance.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod jet;
pub mod poly;
pub mod recovery;
pub mod resultant;

pub use calculus::{
    closed_form_partial_a, closed_form_partial_b, gradient, partial, partial_rowsum,
    partials_up_to, DerivativeRequest,
};
pub use error::{Error, Result};
pub use poly::{parse_rational, Polynomial, Rational, RootSpec};
pub use recovery::{
    analyze, common_multiple_root, detect_multiplicity, recover_first_order, recover_higher_order,
    simple_common_root, Analysis, Condition, MultiplicityReport, RootCertificate, Route,
};
pub use resultant::{
    determinant, discriminant, resultant, resultant_from_roots, sylvester_matrix, Side,
    SylvesterMatrix,
};
