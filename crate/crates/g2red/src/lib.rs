//! Reduction theory of binary quintics and sextics, and minimal models of
//! genus-2 curves with extra involutions.
//!
//! The toolkit computes Julia quadratics and Julia invariants via convex
//! minimization over root weights, reduces forms to the SL2(Z) fundamental
//! domain through the zero map, extracts Julia quadratics from the exact
//! `G_f` covariant for totally real forms, computes Igusa-type invariants
//! with canonical moduli keys, minimizes discriminants of integral models,
//! and regenerates the height-bounded database of genus-2 curves of the
//! shape `y^2 = x^6 + a x^4 + b x^2 + 1`.

pub mod covariants;
pub mod database;
pub mod dd;
pub mod forms;
pub mod genus2;
pub mod julia;
pub mod minimality;
pub mod mpoly;
pub mod numerics;
pub mod reduce;

pub use forms::{BinaryForm, Int, LinearMap, Rat, UnimodularMap};
pub use genus2::{AutLabel, Genus2Invariants, ModuliKey};
pub use julia::{JuliaResult, JuliaWeights};
pub use numerics::{RootSet, Signature};
pub use reduce::ReductionTrace;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("form has no nonzero coefficients or degree 0")]
    ZeroForm,
    #[error("matrix is singular")]
    SingularMap,
    #[error("input must be squarefree (discriminant is zero)")]
    NonSquarefree,
    #[error("leading coefficient is zero (root at infinity); apply a unimodular shift first")]
    RootAtInfinity,
    #[error("integral form required")]
    NonIntegral,
    #[error("expected degree {expected}, got {got}")]
    WrongDegree { expected: String, got: usize },
    #[error("form is not a polynomial in x^2")]
    NotEven,
    #[error("form does not have the required shape: {0}")]
    WrongShape(String),
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("numerical anomaly: {0}")]
    Anomaly(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
