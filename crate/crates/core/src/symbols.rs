//! Graded symbols in `ξ` with scalar and Clifford coefficients, and the
//! point-context rules for x-derivatives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::clifford::{CliffordElement, Word};
use crate::scalars::{
    Atom, GaussRational, GeomKind, Monomial, ScalarError, ScalarExpr, DEFAULT_DERIV_CAP,
};
use crate::DIM;

/// Index of the normal coordinate at a boundary point.
pub const NORMAL: u8 = DIM as u8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("boundary context: {0}")]
    Boundary(String),
    #[error("truncation bound {lowest} lies above the top order {top}")]
    Truncation { lowest: i32, top: i32 },
    #[error("leading symbol is not invertible: {0}")]
    NotInvertible(String),
}

/// `ξ_1^{a_1} … ξ_6^{a_6} · |ξ|^{2p}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct XiMonomial {
    exps: [u8; DIM],
    norm: i32,
}

impl XiMonomial {
    pub const ONE: XiMonomial = XiMonomial {
        exps: [0; DIM],
        norm: 0,
    };

    pub fn new(exps: [u8; DIM], norm: i32) -> Self {
        Self { exps, norm }
    }

    /// `ξ_k`.
    pub fn xi(k: u8) -> Self {
        let mut exps = [0; DIM];
        exps[k as usize - 1] = 1;
        Self { exps, norm: 0 }
    }

    /// `|ξ|^{2p}`.
    pub fn norm_pow(p: i32) -> Self {
        Self {
            exps: [0; DIM],
            norm: p,
        }
    }

    pub fn exps(&self) -> [u8; DIM] {
        self.exps
    }

    pub fn exp(&self, k: u8) -> u8 {
        self.exps[k as usize - 1]
    }

    /// Power `p` of `|ξ|^{2p}`.
    pub fn norm(&self) -> i32 {
        self.norm
    }

    pub fn degree(&self) -> i32 {
        self.exps.iter().map(|&e| e as i32).sum::<i32>() + 2 * self.norm
    }

    pub fn mul(&self, o: &XiMonomial) -> XiMonomial {
        let mut exps = self.exps;
        for (e, x) in exps.iter_mut().zip(o.exps) {
            *e += x;
        }
        XiMonomial {
            exps,
            norm: self.norm + o.norm,
        }
    }

    pub fn with_norm(&self, norm: i32) -> XiMonomial {
        XiMonomial { norm, ..*self }
    }

    fn shift(&self, k: u8, by: i32) -> XiMonomial {
        let mut out = *self;
        let e = &mut out.exps[k as usize - 1];
        *e = (*e as i32 + by) as u8;
        out
    }
}

/// `ξ1^1*|ξ|^-4`; `|ξ|^q` carries the actual exponent `q = 2p`.
impl fmt::Display for XiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = (1..=DIM)
            .filter(|&k| self.exps[k - 1] > 0)
            .map(|k| format!("ξ{k}^{}", self.exps[k - 1]))
            .collect();
        if self.norm != 0 {
            parts.push(format!("|ξ|^{}", 2 * self.norm));
        }
        if parts.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for XiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// Interior point in normal coordinates, flat connection sector: every
    /// connection atom and every metric derivative vanishes.
    Interior,
    /// Boundary point of the warped metric `dx_n² + w(x_n)^{-1} g_∂`.
    Boundary,
    /// Interior point with `g(x₀) = δ` but metric derivatives and connection
    /// atoms kept symbolic. Supports first-order symbols only.
    Symbolic,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PointContext {
    pub mode: Mode,
    /// Cap on derivative orders of atoms.
    pub max_deriv: usize,
}

impl PointContext {
    pub fn interior() -> Self {
        Self {
            mode: Mode::Interior,
            max_deriv: DEFAULT_DERIV_CAP,
        }
    }

    pub fn boundary() -> Self {
        Self {
            mode: Mode::Boundary,
            max_deriv: DEFAULT_DERIV_CAP,
        }
    }

    pub fn symbolic() -> Self {
        Self {
            mode: Mode::Symbolic,
            max_deriv: DEFAULT_DERIV_CAP,
        }
    }

    pub fn with_max_deriv(self, max_deriv: usize) -> Self {
        Self { max_deriv, ..self }
    }

    /// `∂_{x_j}|ξ|²` at the point.
    pub fn d_norm_sq(&self, j: u8) -> SymbolExpr {
        match self.mode {
            Mode::Interior => SymbolExpr::zero(),
            Mode::Boundary if j == NORMAL => {
                let wp = ScalarExpr::geom(GeomKind::WarpDeriv);
                let mut out = SymbolExpr::zero();
                out.add_term(XiMonomial::norm_pow(1), Word::ID, wp.clone());
                out.add_term(XiMonomial::xi(NORMAL).mul(&XiMonomial::xi(NORMAL)), Word::ID, -wp);
                out
            }
            Mode::Boundary => SymbolExpr::zero(),
            Mode::Symbolic => {
                let mut out = SymbolExpr::zero();
                for a in 1..=DIM as u8 {
                    for b in a..=DIM as u8 {
                        let g = ScalarExpr::atom(Atom::Geom(
                            GeomKind::metric(a, b),
                            crate::scalars::Deriv::from_indices(&[j]).unwrap(),
                        ));
                        let mult = if a == b { 1 } else { 2 };
                        out.add_term(
                            XiMonomial::xi(a).mul(&XiMonomial::xi(b)),
                            Word::ID,
                            g.scale(&GaussRational::from_int(mult)),
                        );
                    }
                }
                out
            }
        }
    }

    /// Replaces connection atoms by their values at the point. Spin-connection
    /// atoms become Clifford elements, so they may only sit on the identity word.
    pub fn apply(&self, s: &SymbolExpr) -> Result<SymbolExpr, SymbolError> {
        match self.mode {
            Mode::Symbolic => Ok(s.clone()),
            Mode::Interior => {
                let mut out = SymbolExpr::zero();
                if !s.terms().any(|(_, c)| c.any_atom(|a| matches!(a, Atom::Geom(k, _) if is_connection(*k)))) {
                    return Ok(s.clone());
                }
                for ((xi, w), c) in s.terms() {
                    let c = c.substitute(&|a: &Atom| match a {
                        Atom::Geom(k, _) if is_connection(*k) => Some(ScalarExpr::zero()),
                        _ => None,
                    })?;
                    out.add_term(*xi, *w, c);
                }
                Ok(out)
            }
            Mode::Boundary => {
                let mut out = SymbolExpr::zero();
                for ((xi, w), c) in s.terms() {
                    for (m, k) in c.terms() {
                        let el = boundary_monomial(m, k)?;
                        if !el.terms().all(|(ww, _)| ww.is_identity()) && !w.is_identity() {
                            return Err(SymbolError::Boundary(format!(
                                "spin connection next to the word {w}"
                            )));
                        }
                        for (ww, cc) in el.terms() {
                            let (sign, word) = ww.mul(*w);
                            out.add_term(*xi, word, cc.scale(&GaussRational::from_int(sign as i64)));
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

fn is_connection(k: GeomKind) -> bool {
    matches!(
        k,
        GeomKind::Gamma(_)
            | GeomKind::SpinConn(_)
            | GeomKind::FrameConn(..)
            | GeomKind::Metric(..)
            | GeomKind::ConnQuadratic
            | GeomKind::WarpDeriv
    )
}

/// Value of one scalar monomial at the boundary point, as a Clifford element.
fn boundary_monomial(m: &Monomial, k: &GaussRational) -> Result<CliffordElement, SymbolError> {
    let wp = ScalarExpr::geom(GeomKind::WarpDeriv);
    let half_wp = wp.scale(&GaussRational::ratio(1, 2));
    let mut acc = CliffordElement::scalar(ScalarExpr::constant(k.clone()));
    let mut kept = Monomial::one();
    for &(a, p) in m.factors() {
        let Atom::Geom(kind, d) = a else {
            kept = kept.with_factor(a, p);
            continue;
        };
        let value = match kind {
            GeomKind::ScalarCurvature | GeomKind::Ricci(..) | GeomKind::ConnQuadratic => None,
            GeomKind::AreaS6 | GeomKind::Omega4 | GeomKind::Pi => None,
            GeomKind::WarpDeriv if d.is_empty() => None,
            _ if !d.is_empty() && !matches!(kind, GeomKind::Metric(..)) => {
                return Err(SymbolError::Boundary(format!(
                    "second derivatives of the metric are not available ({a})"
                )))
            }
            GeomKind::Metric(x, y) => {
                if d.order() != 1 {
                    return Err(SymbolError::Boundary(format!("no value for {a}")));
                }
                let tangential = x == y && x != NORMAL && d.indices()[0] == NORMAL;
                Some(CliffordElement::scalar(if tangential {
                    wp.clone()
                } else {
                    ScalarExpr::zero()
                }))
            }
            GeomKind::Gamma(mu) => Some(CliffordElement::scalar(if mu == NORMAL {
                wp.scale(&GaussRational::ratio(5, 2))
            } else {
                ScalarExpr::zero()
            })),
            GeomKind::SpinConn(mu) => Some(if mu == NORMAL {
                CliffordElement::zero()
            } else {
                CliffordElement::product_of(&[mu, NORMAL])
                    .scale(&wp.scale(&GaussRational::ratio(1, 4)))
            }),
            GeomKind::FrameConn(s, t, i) => {
                let v = if s == NORMAL && t == i && i != NORMAL {
                    half_wp.clone()
                } else if t == NORMAL && s == i && i != NORMAL {
                    -&half_wp
                } else {
                    ScalarExpr::zero()
                };
                Some(CliffordElement::scalar(v))
            }
            GeomKind::WarpDeriv => unreachable!(),
        };
        match value {
            None => kept = kept.with_factor(a, p),
            Some(v) => {
                if p < 0 {
                    return Err(SymbolError::Boundary(format!("negative power of {a}")));
                }
                for _ in 0..p {
                    acc = &acc * &v;
                }
            }
        }
    }
    Ok(acc.scale(&ScalarExpr::term(GaussRational::from_int(1), kept)))
}

/// Graded symbol: a sum of `coef · ξ-monomial · word`, with the order of each
/// term given by the degree of its ξ-monomial.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolExpr {
    terms: BTreeMap<(XiMonomial, Word), ScalarExpr>,
}

impl SymbolExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(ScalarExpr::one())
    }

    pub fn scalar(c: ScalarExpr) -> Self {
        Self::term(c, XiMonomial::ONE, Word::ID)
    }

    pub fn term(c: ScalarExpr, xi: XiMonomial, w: Word) -> Self {
        let mut out = Self::zero();
        out.add_term(xi, w, c);
        out
    }

    pub fn from_clifford(el: &CliffordElement, xi: XiMonomial) -> Self {
        let mut out = Self::zero();
        for (w, c) in el.terms() {
            out.add_term(xi, *w, c.clone());
        }
        out
    }

    /// `|ξ|²`.
    pub fn norm_sq() -> Self {
        Self::term(ScalarExpr::one(), XiMonomial::norm_pow(1), Word::ID)
    }

    /// `ξ_k`.
    pub fn xi(k: u8) -> Self {
        Self::term(ScalarExpr::one(), XiMonomial::xi(k), Word::ID)
    }

    /// `c(ξ) = Σ_k ξ_k c(dx_k)`.
    pub fn c_xi() -> Self {
        let mut out = Self::zero();
        for k in 1..=DIM as u8 {
            out.add_term(XiMonomial::xi(k), Word::generator(k), ScalarExpr::one());
        }
        out
    }

    /// `c(du) = Σ_k ∂_k u · c(dx_k)`.
    pub fn c_d(u: &ScalarExpr, cap: usize) -> Result<Self, SymbolError> {
        let mut out = Self::zero();
        for k in 1..=DIM as u8 {
            out.add_term(XiMonomial::ONE, Word::generator(k), u.derive_x_capped(k, cap)?);
        }
        Ok(out)
    }

    pub fn add_term(&mut self, xi: XiMonomial, w: Word, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((xi, w)).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&(xi, w));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(XiMonomial, Word), &ScalarExpr)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn orders(&self) -> BTreeSet<i32> {
        self.terms.keys().map(|(xi, _)| xi.degree()).collect()
    }

    pub fn top_order(&self) -> Option<i32> {
        self.terms.keys().map(|(xi, _)| xi.degree()).max()
    }

    /// Homogeneous part of order `k`.
    pub fn part(&self, k: i32) -> SymbolExpr {
        self.filter(|xi, _| xi.degree() == k)
    }

    /// Parts of order `≥ lowest`.
    pub fn truncate(&self, lowest: i32) -> SymbolExpr {
        self.filter(|xi, _| xi.degree() >= lowest)
    }

    pub fn filter<P: Fn(&XiMonomial, &Word) -> bool>(&self, pred: P) -> SymbolExpr {
        SymbolExpr {
            terms: self
                .terms
                .iter()
                .filter(|((xi, w), _)| pred(xi, w))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &ScalarExpr) -> SymbolExpr {
        let mut out = SymbolExpr::zero();
        for ((xi, w), k) in self.terms() {
            out.add_term(*xi, *w, k * c);
        }
        out
    }

    pub fn scale_const(&self, c: &GaussRational) -> SymbolExpr {
        let mut out = SymbolExpr::zero();
        for ((xi, w), k) in self.terms() {
            out.add_term(*xi, *w, k.scale(c));
        }
        out
    }

    pub fn map_coefficients<F>(&self, f: F) -> Result<SymbolExpr, SymbolError>
    where
        F: Fn(&ScalarExpr) -> Result<ScalarExpr, SymbolError>,
    {
        let mut out = SymbolExpr::zero();
        for ((xi, w), c) in self.terms() {
            out.add_term(*xi, *w, f(c)?);
        }
        Ok(out)
    }

    /// `∂_{ξ_μ}`: `∂ξ^a|ξ|^{2p} = a_μ ξ^{a−e_μ}|ξ|^{2p} + 2p ξ^{a+e_μ}|ξ|^{2p−2}`.
    pub fn derive_xi(&self, mu: u8) -> SymbolExpr {
        assert!((1..=DIM as u8).contains(&mu), "ξ index {mu} out of range");
        let mut out = SymbolExpr::zero();
        for ((xi, w), c) in self.terms() {
            let a = xi.exp(mu);
            if a > 0 {
                out.add_term(xi.shift(mu, -1), *w, c.scale(&GaussRational::from_int(a as i64)));
            }
            if xi.norm() != 0 {
                let nx = xi.shift(mu, 1).with_norm(xi.norm() - 1);
                out.add_term(nx, *w, c.scale(&GaussRational::from_int(2 * xi.norm() as i64)));
            }
        }
        out
    }

    /// `∂_{ξ^α}` for a multi-index given as a list of directions.
    pub fn derive_xi_multi(&self, mus: &[u8]) -> SymbolExpr {
        mus.iter().fold(self.clone(), |s, &m| s.derive_xi(m))
    }

    /// `∂_{x_j}` at the point described by `ctx`.
    pub fn derive_x(&self, j: u8, ctx: &PointContext) -> Result<SymbolExpr, SymbolError> {
        let dn = ctx.d_norm_sq(j);
        let mut out = SymbolExpr::zero();
        for ((xi, w), c) in self.terms() {
            out.add_term(*xi, *w, c.derive_x_capped(j, ctx.max_deriv)?);
            if xi.norm() != 0 && !dn.is_zero() {
                if ctx.mode == Mode::Boundary && !w.is_identity() {
                    return Err(SymbolError::Boundary(format!(
                        "x-derivative of a Clifford-valued term ({w})"
                    )));
                }
                let base = SymbolExpr::term(
                    c.scale(&GaussRational::from_int(xi.norm() as i64)),
                    xi.with_norm(xi.norm() - 1),
                    *w,
                );
                out += &(&base * &dn);
            }
        }
        ctx.apply(&out)
    }

    pub fn derive_x_multi(&self, js: &[u8], ctx: &PointContext) -> Result<SymbolExpr, SymbolError> {
        let mut s = self.clone();
        for &j in js {
            s = s.derive_x(j, ctx)?;
        }
        Ok(s)
    }

    /// Canonical form modulo `Σ_k ξ_k² = |ξ|²`: no term keeps `ξ_6^{≥2}`.
    pub fn reduce(&self) -> SymbolExpr {
        let mut out = SymbolExpr::zero();
        let mut work: Vec<((XiMonomial, Word), ScalarExpr)> =
            self.terms().map(|(k, c)| (*k, c.clone())).collect();
        while let Some(((xi, w), c)) = work.pop() {
            if xi.exp(NORMAL) < 2 {
                out.add_term(xi, w, c);
                continue;
            }
            let base = xi.shift(NORMAL, -2);
            work.push(((base.with_norm(base.norm() + 1), w), c.clone()));
            for k in 1..NORMAL {
                work.push(((base.shift(k, 2), w), -&c));
            }
        }
        out
    }

    /// Equality modulo `Σ_k ξ_k² = |ξ|²`.
    pub fn equiv(&self, other: &SymbolExpr) -> bool {
        (self - other).reduce().is_zero()
    }

    /// Product keeping only terms whose order lies in `lo..=hi`.
    pub fn mul_window(&self, o: &SymbolExpr, lo: i32, hi: i32) -> SymbolExpr {
        let mut out = SymbolExpr::zero();
        for ((xa, wa), ca) in self.terms() {
            let da = xa.degree();
            for ((xb, wb), cb) in o.terms() {
                let d = da + xb.degree();
                if d < lo || d > hi {
                    continue;
                }
                let (s, w) = wa.mul(*wb);
                let c = ca * cb;
                out.add_term(xa.mul(xb), w, if s < 0 { -c } else { c });
            }
        }
        out
    }

    /// Parts of order at most `highest`.
    pub fn truncate_above(&self, highest: i32) -> SymbolExpr {
        self.filter(|xi, _| xi.degree() <= highest)
    }

    pub fn bottom_order(&self) -> Option<i32> {
        self.terms.keys().map(|(xi, _)| xi.degree()).min()
    }

    /// Symbol dump lines, ordered by order (descending), then coefficient,
    /// ξ-monomial and word.
    pub fn dump_lines(&self) -> Vec<String> {
        let mut rows: Vec<(i32, &ScalarExpr, &XiMonomial, &Word)> = self
            .terms()
            .map(|((xi, w), c)| (xi.degree(), c, xi, w))
            .collect();
        rows.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| (a.1, a.2, a.3).cmp(&(b.1, b.2, b.3))));
        rows.into_iter()
            .map(|(k, c, xi, w)| format!("order={k} | {c} | xi={xi} | cliff={w}"))
            .collect()
    }
}

impl<'a> Add<&'a SymbolExpr> for &'a SymbolExpr {
    type Output = SymbolExpr;
    fn add(self, o: &SymbolExpr) -> SymbolExpr {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl AddAssign<&SymbolExpr> for SymbolExpr {
    fn add_assign(&mut self, o: &SymbolExpr) {
        for ((xi, w), c) in o.terms() {
            self.add_term(*xi, *w, c.clone());
        }
    }
}

impl<'a> Sub<&'a SymbolExpr> for &'a SymbolExpr {
    type Output = SymbolExpr;
    fn sub(self, o: &SymbolExpr) -> SymbolExpr {
        let mut out = self.clone();
        for ((xi, w), c) in o.terms() {
            out.add_term(*xi, *w, -c);
        }
        out
    }
}

impl Neg for &SymbolExpr {
    type Output = SymbolExpr;
    fn neg(self) -> SymbolExpr {
        self.scale_const(&GaussRational::from_int(-1))
    }
}

/// Pointwise product: ξ-parts commute, words multiply left to right.
impl<'a> Mul<&'a SymbolExpr> for &'a SymbolExpr {
    type Output = SymbolExpr;
    fn mul(self, o: &SymbolExpr) -> SymbolExpr {
        let mut out = SymbolExpr::zero();
        for ((xa, wa), ca) in self.terms() {
            for ((xb, wb), cb) in o.terms() {
                let (s, w) = wa.mul(*wb);
                let c = ca * cb;
                out.add_term(xa.mul(xb), w, if s < 0 { -c } else { c });
            }
        }
        out
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.dump_lines().join("\n"))
    }
}

impl fmt::Debug for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FuncBase;

    #[test]
    fn derive_xi_of_norm_and_c_xi() {
        let d = SymbolExpr::norm_sq().derive_xi(3);
        assert_eq!(d, SymbolExpr::xi(3).scale_const(&GaussRational::from_int(2)));
        assert_eq!(
            SymbolExpr::c_xi().derive_xi(2),
            SymbolExpr::from_clifford(&CliffordElement::gen(2), XiMonomial::ONE)
        );
    }

    #[test]
    fn second_xi_derivative_of_inverse_norm() {
        // ∂²_{ξ6} |ξ|^-2 = (6ξ6² − 2|ξ|²)|ξ|^-6 ... on the slice (6ξ_n² − 2)/(1+ξ_n²)^3 after |ξ'|=1
        let s = SymbolExpr::term(ScalarExpr::fh_pow(-2), XiMonomial::norm_pow(-1), Word::ID);
        let d = s.derive_xi(6).derive_xi(6);
        let mut want = SymbolExpr::zero();
        want.add_term(XiMonomial::norm_pow(-2), Word::ID, ScalarExpr::fh_pow(-2).scale(&(-2).into()));
        want.add_term(
            XiMonomial::new([0, 0, 0, 0, 0, 2], -3),
            Word::ID,
            ScalarExpr::fh_pow(-2).scale(&8.into()),
        );
        assert_eq!(d, want);
    }

    #[test]
    fn interior_x_derivative_only_hits_coefficients() {
        let s = SymbolExpr::term(ScalarExpr::fh_pow(-2), XiMonomial::norm_pow(-1), Word::ID);
        let d = s.derive_x(2, &PointContext::interior()).unwrap();
        let want = SymbolExpr::term(
            ScalarExpr::fh_pow(-2).derive_x(2).unwrap(),
            XiMonomial::norm_pow(-1),
            Word::ID,
        );
        assert_eq!(d, want);
        assert!(SymbolExpr::c_xi().derive_x(1, &PointContext::interior()).unwrap().is_zero());
    }

    #[test]
    fn boundary_normal_derivative_of_norm() {
        let s = SymbolExpr::term(ScalarExpr::fh_pow(-2), XiMonomial::norm_pow(-1), Word::ID);
        let d = s.derive_x(NORMAL, &PointContext::boundary()).unwrap();
        let wp = ScalarExpr::geom(GeomKind::WarpDeriv);
        let mut want = SymbolExpr::term(
            ScalarExpr::fh_pow(-2).derive_x(6).unwrap(),
            XiMonomial::norm_pow(-1),
            Word::ID,
        );
        // −(fh)^-2 |ξ|^-4 · w'(|ξ|² − ξ6²)
        let c = &ScalarExpr::fh_pow(-2) * &wp;
        want.add_term(XiMonomial::norm_pow(-1), Word::ID, -&c);
        want.add_term(XiMonomial::new([0, 0, 0, 0, 0, 2], -2), Word::ID, c);
        assert_eq!(d, want);
        assert!(d.derive_x(NORMAL, &PointContext::boundary()).is_err());
    }

    #[test]
    fn boundary_spin_connection_is_clifford_valued() {
        let s = SymbolExpr::scalar(ScalarExpr::geom(GeomKind::SpinConn(2)));
        let v = PointContext::boundary().apply(&s).unwrap();
        let want = SymbolExpr::from_clifford(
            &CliffordElement::product_of(&[2, 6])
                .scale(&ScalarExpr::geom(GeomKind::WarpDeriv).scale(&GaussRational::ratio(1, 4))),
            XiMonomial::ONE,
        );
        assert_eq!(v, want);
        let g = SymbolExpr::scalar(ScalarExpr::geom(GeomKind::Gamma(6)));
        assert_eq!(
            PointContext::boundary().apply(&g).unwrap(),
            SymbolExpr::scalar(ScalarExpr::geom(GeomKind::WarpDeriv).scale(&GaussRational::ratio(5, 2)))
        );
    }

    #[test]
    fn reduce_applies_sphere_relation() {
        let lhs = (1..=6u8).fold(SymbolExpr::zero(), |acc, k| &acc + &(&SymbolExpr::xi(k) * &SymbolExpr::xi(k)));
        assert!(lhs.equiv(&SymbolExpr::norm_sq()));
        assert!(!SymbolExpr::xi(1).equiv(&SymbolExpr::xi(2)));
    }

    #[test]
    fn dump_format() {
        let s = SymbolExpr::term(
            ScalarExpr::d(FuncBase::H, &[1]),
            XiMonomial::xi(1).mul(&XiMonomial::norm_pow(-2)),
            Word::generator(2).mul(Word::generator(5)).1,
        );
        assert_eq!(s.dump_lines(), vec!["order=-3 | d[1]h | xi=ξ1^1*|ξ|^-4 | cliff=c[2]c[5]"]);
    }
}
