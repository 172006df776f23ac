//! Exact algebra for rational period functions on Hecke groups.
pub mod bqf;
pub mod budget;
pub mod cfrac;
pub mod error;
pub mod heckegroup;
pub mod json;
pub mod latex;
pub mod numfield;
pub mod ratfun;
pub mod rpf;

pub use bqf::{FormClassCycle, PoleSet, QuadraticForm};
pub use budget::Budget;
pub use error::{Error, Result};
pub use heckegroup::{ExtendedPoint, GroupElement};
pub use numfield::{
    make_field, Field, FieldDescriptor, FieldElement, QuadExtElement, QuadField, Scalar,
};
pub use ratfun::{Polynomial, RationalFunction};
pub use rpf::{RpfExpression, RpfTerm, RpfVerdict};
