//! Substitutions for the rescaling functions `f` and `h`.
//!
//! A substitution acts on atoms: `∂^α f` becomes `∂^α` of the image of `f`,
//! so it can be applied to any expression at any stage.

use std::fmt;
use std::str::FromStr;

use crate::scalars::{Atom, FuncBase, ScalarError, ScalarExpr, DERIV_CAPACITY};
use crate::symbols::{SymbolError, SymbolExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Specialization {
    /// `f = 1, h = 1`.
    Trivial,
    /// `h = f⁻¹`, so `fh = 1`.
    Reciprocal,
    /// `f = u^p, h = u^q`.
    Powers { p: i32, q: i32 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported specialization `{0}` (expected `f=1,h=1`, `fh=1` or `f=u^p,h=u^q` with integers p,q)")]
pub struct SpecializationError(pub String);

impl Specialization {
    /// Images of `f` and `h`.
    pub fn images(&self) -> (ScalarExpr, ScalarExpr) {
        let u = |p| ScalarExpr::atom_pow(Atom::U, p);
        match *self {
            Specialization::Trivial => (ScalarExpr::one(), ScalarExpr::one()),
            Specialization::Reciprocal => (ScalarExpr::f(), ScalarExpr::fh_monomial(-1, 0)),
            Specialization::Powers { p, q } => (u(p), u(q)),
        }
    }

    pub fn apply(&self, e: &ScalarExpr) -> Result<ScalarExpr, ScalarError> {
        let (fi, hi) = self.images();
        // images of derivative atoms, computed lazily per atom
        let image = |a: &Atom| -> Option<Result<ScalarExpr, ScalarError>> {
            match a {
                Atom::Func(FuncBase::F, d) => Some(fi.derive_multi(d.indices(), DERIV_CAPACITY)),
                Atom::Func(FuncBase::H, d) => Some(hi.derive_multi(d.indices(), DERIV_CAPACITY)),
                _ => None,
            }
        };
        // substitute() wants an infallible map, so surface the first error here
        for (m, _) in e.terms() {
            for (a, _) in m.factors() {
                if let Some(Err(err)) = image(a) {
                    return Err(err);
                }
            }
        }
        e.substitute(&|a| image(a).map(|r| r.expect("checked above")))
    }

    pub fn apply_symbol(&self, s: &SymbolExpr) -> Result<SymbolExpr, SymbolError> {
        s.map_coefficients(|c| Ok(self.apply(c)?))
    }
}

impl fmt::Display for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Specialization::Trivial => write!(f, "f=1,h=1"),
            Specialization::Reciprocal => write!(f, "fh=1"),
            Specialization::Powers { p, q } => write!(f, "f=u^{p},h=u^{q}"),
        }
    }
}

impl FromStr for Specialization {
    type Err = SpecializationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SpecializationError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "f=1,h=1" | "h=1,f=1" => return Ok(Specialization::Trivial),
            "fh=1" | "hf=1" => return Ok(Specialization::Reciprocal),
            _ => {}
        }
        let mut p = None;
        let mut q = None;
        for part in compact.split(',') {
            let (lhs, rhs) = part.split_once('=').ok_or_else(err)?;
            let exp = rhs.strip_prefix("u^").ok_or_else(err)?;
            let exp = exp.trim_start_matches('(').trim_end_matches(')');
            let k: i32 = exp.parse().map_err(|_| err())?;
            let slot = match lhs {
                "f" => &mut p,
                "h" => &mut q,
                _ => return Err(err()),
            };
            if slot.replace(k).is_some() {
                return Err(err());
            }
        }
        match (p, q) {
            (Some(p), Some(q)) => Ok(Specialization::Powers { p, q }),
            _ => Err(err()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_expr;

    fn sp(s: &str) -> Specialization {
        s.parse().unwrap()
    }

    #[test]
    fn parses_the_three_forms() {
        assert_eq!(sp("f=1,h=1"), Specialization::Trivial);
        assert_eq!(sp("fh=1"), Specialization::Reciprocal);
        assert_eq!(sp("f=u^3,h=u^-2"), Specialization::Powers { p: 3, q: -2 });
        assert_eq!(sp("f=u^3, h=u^(-2)").to_string(), "f=u^3,h=u^-2");
        for bad in ["f=u^-7/2,h=u^1", "f=2", "f=u^1", "g=u^1,h=u^1", "f=u^1,f=u^2"] {
            assert!(bad.parse::<Specialization>().is_err(), "{bad}");
        }
    }

    #[test]
    fn trivial_kills_derivatives() {
        let e = parse_expr("d[1]f*d[1]h + (fh)^-4*s + lap[h]").unwrap();
        assert_eq!(sp("f=1,h=1").apply(&e).unwrap(), parse_expr("s").unwrap());
    }

    #[test]
    fn reciprocal_collapses_fh() {
        let e = parse_expr("(fh)^-4*s + |grad[fh]|^2 + f*d[2]h").unwrap();
        let got = sp("fh=1").apply(&e).unwrap();
        assert_eq!(got, parse_expr("s - f^-1*d[2]f").unwrap());
    }

    #[test]
    fn powers_follow_the_chain_rule() {
        let e = parse_expr("d[1,1]f").unwrap();
        let got = sp("f=u^3,h=u^-2").apply(&e).unwrap();
        assert_eq!(got, parse_expr("6*u*d[1]u^2 + 3*u^2*d[1,1]u").unwrap());
    }
}
