use thiserror::Error;

use crate::minkowski::Vec4;
use crate::surface::PointCase;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A scalar function was evaluated outside its natural domain.
    #[error("domain error: {op} undefined at t = {t}")]
    Domain { op: &'static str, t: f64 },

    #[error("parameter {value} outside the domain [{start}, {end}] of {what}")]
    OutOfDomain { what: &'static str, value: f64, start: f64, end: f64 },

    #[error("parse error at position {position}: {message} (token `{token}`)")]
    Parse { message: String, token: String, position: usize },

    #[error("degenerate directrix at v = {v}: phi'^2 + phi^2 vanishes")]
    DegenerateDirectrix { v: f64 },

    #[error("profile invariant violated: {0}")]
    ProfileInvariant(String),

    #[error("adaptive quadrature exceeded the subdivision cap of {cap} intervals")]
    QuadratureCap { cap: usize },

    #[error("marginally trapped point at (u, v) = ({u}, {v}): <H, H> = 0")]
    MarginallyTrapped { u: f64, v: f64 },

    #[error("flat point at (u, v) = ({u}, {v}) ({case:?}): geometric normal frame undefined")]
    FlatPoint { u: f64, v: f64, case: PointCase, n1: Vec4, n2: Vec4 },

    #[error("invalid family spec: {0}")]
    InvalidSpec(String),

    #[error("directrix does not match the family: {0}")]
    SpecMismatch(String),

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
