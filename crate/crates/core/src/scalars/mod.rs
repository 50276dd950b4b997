//! Exact coefficient ring.

pub mod atom;
pub mod expr;
pub mod gauss;
pub mod group;
pub mod text;

pub use atom::{Atom, Deriv, FuncBase, GeomKind, DEFAULT_DERIV_CAP, DERIV_CAPACITY};
pub use expr::{Monomial, ScalarExpr};
pub use gauss::GaussRational;
pub use text::{grad_dot, laplacian, parse_expr, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("derivative of order {order} on `{atom}` exceeds the cap {cap}")]
    DerivativeOrder {
        atom: String,
        order: usize,
        cap: usize,
    },
    #[error("`{0}` is not invertible")]
    NonInvertible(String),
    #[error("coordinate index {0} out of range 1..=6")]
    BadCoordinate(u8),
}
