//! Reducibility of depth-zero representations parabolically induced from the
//! Siegel Levi of `U(n,n)`, made computable at desk scale.

pub mod chars;
pub mod classify;
pub mod dihecke;
pub mod error;
pub mod fingrp;
pub mod finhecke;
pub mod finrep;
pub mod gf;
pub mod scalar;

pub use error::{Error, Result};
pub use gf::{build_field, Field, FieldDescriptor, FieldElement, PrimePower};
pub use scalar::{ExactJson, QScalar, Scalar};
pub use chars::{Case, CharContext, CharExponent, CharFilter};
pub use classify::{classify, ReducibilityReport};
