//! Expanded polynomial/Laurent expressions in commuting atoms over ℚ(i).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, One, Zero};

use super::atom::{Atom, FuncBase, GeomKind, DEFAULT_DERIV_CAP};
use super::gauss::GaussRational;
use super::ScalarError;
use crate::DIM;

/// Product of atom powers, sorted by atom, no zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Atom, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom, power: i32) -> Self {
        if power == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(a, power)])
        }
    }

    pub fn factors(&self) -> &[(Atom, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn power_of(&self, a: &Atom) -> i32 {
        self.0
            .binary_search_by(|(x, _)| x.cmp(a))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let p = a[i].1 + b[j].1;
                    if p != 0 {
                        out.push((a[i].0, p));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Multiplies by `a^p` in place of allocating a second monomial.
    pub fn with_factor(&self, a: Atom, p: i32) -> Monomial {
        self.mul(&Monomial::atom(a, p))
    }

    fn without(&self, k: usize) -> Monomial {
        let mut v = self.0.clone();
        v.remove(k);
        Monomial(v)
    }

    /// Integer power, `Err` when a negative power would hit a non-invertible atom.
    pub fn pow(&self, k: i32) -> Result<Monomial, ScalarError> {
        if k < 0 {
            if let Some((a, _)) = self.0.iter().find(|(a, _)| !a.is_invertible()) {
                return Err(ScalarError::NonInvertible(a.to_string()));
            }
        }
        if k == 0 {
            return Ok(Monomial::one());
        }
        Ok(Monomial(self.0.iter().map(|&(a, p)| (a, p * k)).collect()))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(a, p)| if *p == 1 { a.to_string() } else { format!("{a}^{p}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exact sum of monomials with Gaussian-rational coefficients, always kept in
/// canonical form: monomials sorted, like monomials merged, zeros dropped.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ScalarExpr {
    terms: BTreeMap<Monomial, GaussRationalKey>,
}

/// Wrapper so the map value can take part in the derived `Ord` of `ScalarExpr`.
#[derive(Clone, PartialEq, Eq, Hash)]
struct GaussRationalKey(GaussRational);

impl PartialOrd for GaussRationalKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GaussRationalKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.re(), self.0.im()).cmp(&(other.0.re(), other.0.im()))
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussRational::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(GaussRational::ratio(n, d))
    }

    pub fn i() -> Self {
        Self::constant(GaussRational::i())
    }

    pub fn term(c: GaussRational, m: Monomial) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn atom(a: Atom) -> Self {
        Self::atom_pow(a, 1)
    }

    /// `a^p`; panics if `p < 0` and `a` is not invertible.
    pub fn atom_pow(a: Atom, p: i32) -> Self {
        assert!(p >= 0 || a.is_invertible(), "negative power of {a}");
        Self::term(GaussRational::one(), Monomial::atom(a, p))
    }

    pub fn geom(k: GeomKind) -> Self {
        Self::atom(Atom::geom(k))
    }

    pub fn f() -> Self {
        Self::atom(Atom::F)
    }

    pub fn h() -> Self {
        Self::atom(Atom::H)
    }

    /// `f^a h^b`.
    pub fn fh_monomial(a: i32, b: i32) -> Self {
        Self::term(
            GaussRational::one(),
            Monomial::atom(Atom::F, a).with_factor(Atom::H, b),
        )
    }

    /// `(fh)^k`, expanded to `f^k h^k`.
    pub fn fh_pow(k: i32) -> Self {
        Self::fh_monomial(k, k)
    }

    /// `∂_{x_j}` of an underived base function.
    pub fn d(base: FuncBase, indices: &[u8]) -> Self {
        Self::atom(Atom::func(base, indices))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter().map(|(m, c)| (m, &c.0))
    }

    /// The value if the expression is a pure number.
    pub fn as_constant(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.0.clone())
            }
            _ => None,
        }
    }

    /// The single monomial and its coefficient, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(&Monomial, &GaussRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (m, &c.0))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(GaussRationalKey(c));
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().0 += &c;
                if o.get().0.is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Rebuilds the canonical form. Every constructor already maintains it, so
    /// this is the identity on values produced by this module.
    pub fn canonicalize(&self) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> ScalarExpr {
        if c.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), GaussRationalKey(&k.0 * c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &GaussRational) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (mm, k) in self.terms() {
            out.add_term(mm.mul(m), k * c);
        }
        out
    }

    /// Integer power. Negative powers need a single monomial of invertible atoms.
    pub fn pow(&self, k: i32) -> Result<ScalarExpr, ScalarError> {
        if k >= 0 {
            let mut acc = ScalarExpr::one();
            for _ in 0..k {
                acc = &acc * self;
            }
            return Ok(acc);
        }
        let (m, c) = self
            .as_monomial()
            .ok_or_else(|| ScalarError::NonInvertible(self.to_string()))?;
        Ok(ScalarExpr::term(c.powi(k), m.pow(k)?))
    }

    /// Formal `∂_{x_j}` with the default derivative cap.
    pub fn derive_x(&self, j: u8) -> Result<ScalarExpr, ScalarError> {
        self.derive_x_capped(j, DEFAULT_DERIV_CAP)
    }

    /// Leibniz over monomials, chain rule on powers, derivative multi-index
    /// incremented on atoms. Fails if an atom would exceed `cap` derivatives.
    pub fn derive_x_capped(&self, j: u8, cap: usize) -> Result<ScalarExpr, ScalarError> {
        if !(1..=DIM as u8).contains(&j) {
            return Err(ScalarError::BadCoordinate(j));
        }
        let mut out = ScalarExpr::zero();
        for (m, c) in self.terms() {
            for (k, &(a, p)) in m.factors().iter().enumerate() {
                let da = a.derive(j, cap).map_err(|order| ScalarError::DerivativeOrder {
                    atom: a.to_string(),
                    order,
                    cap,
                })?;
                let Some(da) = da else { continue };
                let mut rest = m.without(k);
                if p != 1 {
                    rest = rest.with_factor(a, p - 1);
                }
                rest = rest.with_factor(da, 1);
                out.add_term(rest, c * &GaussRational::from_int(p as i64));
            }
        }
        Ok(out)
    }

    /// Applies `∂_{x_{j1}} … ∂_{x_{jk}}` in sequence.
    pub fn derive_multi(&self, indices: &[u8], cap: usize) -> Result<ScalarExpr, ScalarError> {
        let mut e = self.clone();
        for &j in indices {
            e = e.derive_x_capped(j, cap)?;
        }
        Ok(e)
    }

    /// Replaces atoms by expressions. `subst` returns `None` to keep an atom.
    /// A negative power of a replaced atom requires a monomial image.
    pub fn substitute<F>(&self, subst: &F) -> Result<ScalarExpr, ScalarError>
    where
        F: Fn(&Atom) -> Option<ScalarExpr>,
    {
        let mut out = ScalarExpr::zero();
        for (m, c) in self.terms() {
            let mut acc = ScalarExpr::constant(c.clone());
            let mut kept = Monomial::one();
            for &(a, p) in m.factors() {
                match subst(&a) {
                    Some(img) => {
                        acc = &acc * &img.pow(p)?;
                        if acc.is_zero() {
                            break;
                        }
                    }
                    None => kept = kept.with_factor(a, p),
                }
            }
            for (mm, cc) in acc.terms() {
                out.add_term(mm.mul(&kept), cc.clone());
            }
        }
        Ok(out)
    }

    pub fn any_atom<P: Fn(&Atom) -> bool>(&self, pred: P) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors().iter().any(|(a, _)| pred(a)))
    }

    /// Keeps only the monomials accepted by `pred`.
    pub fn filter<P: Fn(&Monomial) -> bool>(&self, pred: P) -> ScalarExpr {
        ScalarExpr {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Numeric value under an atom assignment, in any float precision.
    pub fn eval<T: Float>(&self, value: &dyn Fn(&Atom) -> Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (m, c) in self.terms() {
            let (re, im) = c.to_f64_parts();
            let mut t = Complex::new(T::from(re).unwrap(), T::from(im).unwrap());
            for &(a, p) in m.factors() {
                t = t * value(&a).powi(p);
            }
            acc = acc + t;
        }
        acc
    }
}

impl From<GaussRational> for ScalarExpr {
    fn from(c: GaussRational) -> Self {
        ScalarExpr::constant(c)
    }
}

impl<'a> Add<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, o: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Add for ScalarExpr {
    type Output = ScalarExpr;
    fn add(mut self, o: ScalarExpr) -> ScalarExpr {
        self += &o;
        self
    }
}

impl AddAssign<&ScalarExpr> for ScalarExpr {
    fn add_assign(&mut self, o: &ScalarExpr) {
        for (m, c) in o.terms() {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, o: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        for (m, c) in o.terms() {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, o: ScalarExpr) -> ScalarExpr {
        &self - &o
    }
}

impl<'a> Mul<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, o: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in o.terms() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, o: ScalarExpr) -> ScalarExpr {
        &self * &o
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.scale(&-GaussRational::one())
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

/// Expanded text, e.g. `(-3/8)*f^-4*h^-4*d[1]f*d[1]h*s + 2*wp`.
impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let (neg, mag) = if c.is_real() && c.is_negative_like() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let coef = if mag.is_real() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            match (mag.is_one(), m.is_one()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{m}")?,
                (false, true) => write!(f, "{coef}")?,
                (false, false) => write!(f, "{coef}*{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dh(j: u8) -> ScalarExpr {
        ScalarExpr::d(FuncBase::H, &[j])
    }
    fn df(j: u8) -> ScalarExpr {
        ScalarExpr::d(FuncBase::F, &[j])
    }

    #[test]
    fn commutativity_cancels() {
        let e = &(&ScalarExpr::f() * &ScalarExpr::h()) - &(&ScalarExpr::h() * &ScalarExpr::f());
        assert!(e.is_zero());
    }

    #[test]
    fn fh_composite_expands() {
        let e = (&ScalarExpr::f() * &ScalarExpr::h()).pow(-2).unwrap();
        assert_eq!(e, ScalarExpr::fh_monomial(-2, -2));
        assert_eq!(e.to_string(), "f^-2*h^-2");
    }

    #[test]
    fn chain_rule_on_square() {
        let e = ScalarExpr::f().pow(2).unwrap().derive_x(1).unwrap();
        assert_eq!(e, (&ScalarExpr::f() * &df(1)).scale(&2.into()));
    }

    #[test]
    fn derivative_of_inverse_product() {
        let e = ScalarExpr::fh_pow(-1).derive_x(3).unwrap();
        let want = &(&ScalarExpr::fh_monomial(-2, -1) * &df(3))
            + &(&ScalarExpr::fh_monomial(-1, -2) * &dh(3));
        assert_eq!(e, -want);
    }

    #[test]
    fn curvature_derivative_is_formal() {
        let s = ScalarExpr::geom(GeomKind::ScalarCurvature);
        assert_eq!(s.derive_x(2).unwrap().to_string(), "d[2]s");
        let pi = ScalarExpr::geom(GeomKind::Pi);
        assert!(pi.derive_x(2).unwrap().is_zero());
    }

    #[test]
    fn derivative_cap_is_enforced() {
        let e = ScalarExpr::d(FuncBase::F, &[1, 2]);
        assert!(matches!(
            e.derive_x(3),
            Err(ScalarError::DerivativeOrder { order: 3, cap: 2, .. })
        ));
        assert!(e.derive_x_capped(3, 3).is_ok());
        assert!(matches!(e.derive_x(7), Err(ScalarError::BadCoordinate(7))));
    }

    #[test]
    fn negative_power_of_sum_rejected() {
        let e = &ScalarExpr::f() + &ScalarExpr::h();
        assert!(e.pow(-1).is_err());
        assert!(df(1).pow(-1).is_err());
    }

    #[test]
    fn substitution_of_powers() {
        // f -> u^3 turns f^-2 d[1]f into 3 u^-4 d[1]u
        let u = ScalarExpr::atom(Atom::U);
        let img_f = u.pow(3).unwrap();
        let e = &ScalarExpr::fh_monomial(-2, 0) * &df(1);
        let out = e
            .substitute(&|a: &Atom| match a {
                Atom::Func(FuncBase::F, d) => img_f.derive_multi(d.indices(), 2).ok(),
                _ => None,
            })
            .unwrap();
        let want = (&u.pow(-4).unwrap() * &ScalarExpr::d(FuncBase::U, &[1])).scale(&3.into());
        assert_eq!(out, want);
    }

    #[test]
    fn display_signs() {
        let e = &ScalarExpr::ratio(-3, 8) + &(&ScalarExpr::i() * &ScalarExpr::f());
        assert_eq!(e.to_string(), "-3/8 + (i)*f");
    }
}
