//! Boundary term: rational functions of `ξₙ` with poles at `±i`, the `π⁺`
//! projection, `Γ⁺` contour integrals and the five boundary cases.
//!
//! Everything lives on the slice `|ξ′| = 1`, where `|ξ|² = 1 + ξₙ²`.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, Zero};
use serde::{Deserialize, Serialize};

use crate::calculus::{build_q_symbols, invert_symbol};
use crate::clifford::{Word, TRACE_ID};
use crate::interior::sphere_moment_ratio;
use crate::ledger::{Ledger, Verdict};
use crate::scalars::group::group_for_display;
use crate::scalars::{parse_expr, Atom, GaussRational, GeomKind, ScalarExpr};
use crate::specialize::Specialization;
use crate::symbols::{PointContext, SymbolError, SymbolExpr, NORMAL};
use crate::DIM;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("contour integral diverges: numerator degree {deg} with pole orders ({a}, {b})")]
    NotDecaying { deg: usize, a: u32, b: u32 },
    #[error("residue paths disagree: Cauchy {cauchy} vs partial fractions {partial}")]
    ResidueMismatch { cauchy: String, partial: String },
    #[error("unknown boundary case `{0}`")]
    UnknownCase(String),
}

impl From<crate::scalars::ScalarError> for BoundaryError {
    fn from(e: crate::scalars::ScalarError) -> Self {
        BoundaryError::Symbol(e.into())
    }
}

// ---- polynomials in t = ξₙ with ScalarExpr coefficients -------------------

type Poly = Vec<ScalarExpr>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn padd(a: &[ScalarExpr], b: &[ScalarExpr]) -> Poly {
    let n = a.len().max(b.len());
    let zero = ScalarExpr::zero();
    trim((0..n)
        .map(|k| a.get(k).unwrap_or(&zero) + b.get(k).unwrap_or(&zero))
        .collect())
}

fn pmul(a: &[ScalarExpr], b: &[ScalarExpr]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ScalarExpr::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(out)
}

fn pconst(c: GaussRational) -> Poly {
    trim(vec![ScalarExpr::constant(c)])
}

/// `(t − r)^k`.
fn linear_pow(r: &GaussRational, k: u32) -> Poly {
    let lin = vec![ScalarExpr::constant(-r), ScalarExpr::one()];
    (0..k).fold(pconst(GaussRational::from_int(1)), |acc, _| pmul(&acc, &lin))
}

fn peval(p: &[ScalarExpr], x: &GaussRational) -> ScalarExpr {
    p.iter()
        .rev()
        .fold(ScalarExpr::zero(), |acc, c| &acc.scale(x) + c)
}

/// Synthetic division by `t − r`: quotient and remainder.
fn pdiv_linear(p: &[ScalarExpr], r: &GaussRational) -> (Poly, ScalarExpr) {
    if p.is_empty() {
        return (Vec::new(), ScalarExpr::zero());
    }
    let mut q = vec![ScalarExpr::zero(); p.len() - 1];
    let mut carry = ScalarExpr::zero();
    for k in (0..p.len()).rev() {
        let v = &p[k] + &carry.scale(r);
        if k == 0 {
            return (trim(q), v);
        }
        q[k - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

fn pderive(p: &[ScalarExpr]) -> Poly {
    trim(p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&GaussRational::from_int(k as i64)))
        .collect())
}

/// Coefficients of `p(r + s)` in `s`.
fn pshift(p: &[ScalarExpr], r: &GaussRational) -> Poly {
    let mut out = Vec::with_capacity(p.len());
    let mut q = p.to_vec();
    while !q.is_empty() {
        let (quot, rem) = pdiv_linear(&q, r);
        out.push(rem);
        q = quot;
    }
    trim(out)
}

fn i() -> GaussRational {
    GaussRational::i()
}

fn minus_i() -> GaussRational {
    -&GaussRational::i()
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, m| acc * (n - m) / (m + 1))
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

// ---- rational functions -----------------------------------------------------

/// `N(ξₙ) / ((ξₙ − i)^a (ξₙ + i)^b)` with common factors cancelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiRational {
    num: Poly,
    a: u32,
    b: u32,
}

impl Default for XiRational {
    fn default() -> Self {
        XiRational::zero()
    }
}

impl XiRational {
    pub fn new(num: Vec<ScalarExpr>, a: u32, b: u32) -> Self {
        let mut num = trim(num);
        let (mut a, mut b) = (a, b);
        if num.is_empty() {
            return XiRational::zero();
        }
        for (root, order) in [(i(), &mut a), (minus_i(), &mut b)] {
            while *order > 0 {
                let (q, r) = pdiv_linear(&num, &root);
                if !r.is_zero() {
                    break;
                }
                num = q;
                *order -= 1;
            }
        }
        XiRational { num, a, b }
    }

    pub fn zero() -> Self {
        XiRational {
            num: Vec::new(),
            a: 0,
            b: 0,
        }
    }

    pub fn constant(c: ScalarExpr) -> Self {
        XiRational::new(vec![c], 0, 0)
    }

    /// `ξₙ`.
    pub fn t() -> Self {
        XiRational::new(vec![ScalarExpr::zero(), ScalarExpr::one()], 0, 0)
    }

    /// `(1 + ξₙ²)^p` for any integer `p`.
    pub fn one_plus_t2(p: i32) -> Self {
        if p >= 0 {
            let sq = vec![ScalarExpr::one(), ScalarExpr::zero(), ScalarExpr::one()];
            let num = (0..p).fold(vec![ScalarExpr::one()], |acc, _| pmul(&acc, &sq));
            XiRational::new(num, 0, 0)
        } else {
            XiRational::new(vec![ScalarExpr::one()], (-p) as u32, (-p) as u32)
        }
    }

    pub fn numerator(&self) -> &[ScalarExpr] {
        &self.num
    }

    /// Pole orders at `+i` and `−i`.
    pub fn poles(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn lift(&self, a: u32, b: u32) -> Poly {
        let up = pmul(&linear_pow(&i(), a - self.a), &linear_pow(&minus_i(), b - self.b));
        pmul(&self.num, &up)
    }

    pub fn add(&self, o: &XiRational) -> XiRational {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b) = (self.a.max(o.a), self.b.max(o.b));
        XiRational::new(padd(&self.lift(a, b), &o.lift(a, b)), a, b)
    }

    pub fn sub(&self, o: &XiRational) -> XiRational {
        self.add(&o.scale_const(&GaussRational::from_int(-1)))
    }

    pub fn mul(&self, o: &XiRational) -> XiRational {
        XiRational::new(pmul(&self.num, &o.num), self.a + o.a, self.b + o.b)
    }

    pub fn scale(&self, c: &ScalarExpr) -> XiRational {
        XiRational::new(self.num.iter().map(|x| x * c).collect(), self.a, self.b)
    }

    pub fn scale_const(&self, c: &GaussRational) -> XiRational {
        XiRational::new(self.num.iter().map(|x| x.scale(c)).collect(), self.a, self.b)
    }

    pub fn map_coefficients<F>(&self, f: F) -> Result<XiRational, BoundaryError>
    where
        F: Fn(&ScalarExpr) -> Result<ScalarExpr, BoundaryError>,
    {
        let num = self.num.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Ok(XiRational::new(num, self.a, self.b))
    }

    /// `d/dξₙ`: `[N′(t−i)(t+i) − N(a(t+i) + b(t−i))] / ((t−i)^{a+1}(t+i)^{b+1})`.
    pub fn derive(&self) -> XiRational {
        if self.is_zero() {
            return XiRational::zero();
        }
        let tm = linear_pow(&i(), 1);
        let tp = linear_pow(&minus_i(), 1);
        let first = pmul(&pderive(&self.num), &pmul(&tm, &tp));
        let ka = pmul(&pconst(GaussRational::from_int(self.a as i64)), &tp);
        let kb = pmul(&pconst(GaussRational::from_int(self.b as i64)), &tm);
        let second = pmul(&self.num, &padd(&ka, &kb));
        let neg: Poly = second.iter().map(|c| -c).collect();
        XiRational::new(padd(&first, &neg), self.a + 1, self.b + 1)
    }

    /// Taylor coefficients `g_0 … g_{order−1}` of `N(t)/(t+i)^b` at `t = i`.
    fn taylor_at_i(&self, order: usize) -> Vec<ScalarExpr> {
        let shifted = pshift(&self.num, &i());
        // (2i + s)^{−b} = Σ_m (−1)^m C(b+m−1, m) (2i)^{−b−m} s^m
        let two_i = GaussRational::i().scale_int(2);
        let series: Vec<GaussRational> = (0..order as i64)
            .map(|m| {
                let sign = if m % 2 == 0 { 1 } else { -1 };
                let c = if self.b == 0 {
                    if m == 0 {
                        1
                    } else {
                        0
                    }
                } else {
                    binomial(self.b as i64 + m - 1, m)
                };
                two_i.powi(-(self.b as i32) - m as i32).scale_int(sign * c)
            })
            .collect();
        (0..order)
            .map(|k| {
                let mut acc = ScalarExpr::zero();
                for (m, s) in series.iter().enumerate().take(k + 1) {
                    if let Some(c) = shifted.get(k - m) {
                        acc += &c.scale(s);
                    }
                }
                acc
            })
            .collect()
    }

    /// Principal part at `ξₙ = +i`.
    pub fn pi_plus(&self) -> XiRational {
        if self.a == 0 {
            return XiRational::zero();
        }
        let g = self.taylor_at_i(self.a as usize);
        // Σ_k g_k (t−i)^k over (t−i)^a, rewritten in powers of t
        let mut num = Vec::new();
        for (k, c) in g.iter().enumerate() {
            let term: Poly = linear_pow(&i(), k as u32).iter().map(|x| x * c).collect();
            num = padd(&num, &term);
        }
        XiRational::new(num, self.a, 0)
    }

    /// `(1 − π⁺)`: the part holomorphic at `+i`.
    pub fn pi_minus(&self) -> XiRational {
        self.sub(&self.pi_plus())
    }

    pub fn value_at(&self, x: &GaussRational) -> Option<ScalarExpr> {
        let den = x - &i();
        let dep = x + &i();
        let mut d = GaussRational::from_int(1);
        for _ in 0..self.a {
            d = &d * &den;
        }
        for _ in 0..self.b {
            d = &d * &dep;
        }
        let inv = d.inv()?;
        Some(peval(&self.num, x).scale(&inv))
    }

    /// Residue at `+i` by the Cauchy derivative formula
    /// `1/(a−1)! · d^{a−1}/dt^{a−1}[(t−i)^a r]|_{t=i}`.
    pub fn residue_cauchy(&self) -> ScalarExpr {
        if self.a == 0 {
            return ScalarExpr::zero();
        }
        let mut g = XiRational::new(self.num.clone(), 0, self.b);
        for _ in 1..self.a {
            g = g.derive();
        }
        debug_assert_eq!(g.a, 0);
        g.value_at(&i())
            .expect("no pole at +i after removing it")
            .scale(&GaussRational::ratio(1, factorial(self.a - 1)))
    }

    /// Residue at `+i` as the `1/(t−i)` coefficient of the partial fractions.
    pub fn residue_partial_fraction(&self) -> ScalarExpr {
        if self.a == 0 {
            return ScalarExpr::zero();
        }
        self.taylor_at_i(self.a as usize).pop().unwrap_or_default()
    }

    /// `∫_{Γ⁺} r dξₙ = 2πi·Res_{+i} r`, with the `π` atom.
    pub fn contour_integral(&self) -> Result<ScalarExpr, BoundaryError> {
        if self.is_zero() {
            return Ok(ScalarExpr::zero());
        }
        let deg = self.num.len() - 1;
        if deg >= (self.a + self.b) as usize {
            return Err(BoundaryError::NotDecaying {
                deg,
                a: self.a,
                b: self.b,
            });
        }
        let cauchy = self.residue_cauchy();
        let partial = self.residue_partial_fraction();
        if cauchy != partial {
            return Err(BoundaryError::ResidueMismatch {
                cauchy: cauchy.to_string(),
                partial: partial.to_string(),
            });
        }
        let pi = ScalarExpr::geom(GeomKind::Pi);
        Ok((&cauchy * &pi).scale(&GaussRational::i().scale_int(2)))
    }

    /// Numeric value at complex `t` under an atom assignment.
    pub fn eval<T: Float>(&self, t: Complex<T>, value: &dyn Fn(&Atom) -> Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        let iu = Complex::new(T::zero(), T::one());
        let mut n = Complex::new(T::zero(), T::zero());
        for c in self.num.iter().rev() {
            n = n * t + c.eval(value);
        }
        let mut d = one;
        for _ in 0..self.a {
            d = d * (t - iu);
        }
        for _ in 0..self.b {
            d = d * (t + iu);
        }
        n / d
    }
}

/// `∮ r dξₙ` over the circle of radius ½ about `+i` by the trapezoid rule
/// (spectrally accurate for periodic integrands).
pub fn contour_quadrature<T: Float>(
    r: &XiRational,
    value: &dyn Fn(&Atom) -> Complex<T>,
    nodes: usize,
) -> Complex<T> {
    let two_pi = T::from(2.0 * std::f64::consts::PI).unwrap();
    let half = T::from(0.5).unwrap();
    let center = Complex::new(T::zero(), T::one());
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in 0..nodes {
        let theta = two_pi * T::from(k).unwrap() / T::from(nodes).unwrap();
        let e = Complex::new(theta.cos(), theta.sin());
        let t = center + e * half;
        // dt = i·½e^{iθ} dθ
        acc = acc + r.eval(t, value) * e * Complex::new(T::zero(), half);
    }
    acc * Complex::new(two_pi / T::from(nodes).unwrap(), T::zero())
}

trait ScaleInt {
    fn scale_int(&self, k: i64) -> Self;
}

impl ScaleInt for GaussRational {
    fn scale_int(&self, k: i64) -> Self {
        self * &GaussRational::from_int(k)
    }
}

// ---- symbols on the slice |ξ′| = 1 -----------------------------------------

const TANGENTIAL: usize = DIM - 1;

/// Symbol restricted to `|ξ′| = 1`: keyed by the tangential exponents and the
/// Clifford word, valued in rational functions of `ξₙ`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SliceExpr {
    terms: BTreeMap<([u8; TANGENTIAL], Word), XiRational>,
}

impl SliceExpr {
    pub fn from_symbol(s: &SymbolExpr) -> SliceExpr {
        let mut out = SliceExpr::default();
        for ((xi, w), c) in s.terms() {
            let e = xi.exps();
            let mut tangential = [0u8; TANGENTIAL];
            tangential.copy_from_slice(&e[..TANGENTIAL]);
            let tn = (0..e[DIM - 1]).fold(XiRational::constant(ScalarExpr::one()), |acc, _| {
                acc.mul(&XiRational::t())
            });
            let r = tn.mul(&XiRational::one_plus_t2(xi.norm())).scale(c);
            out.add(tangential, *w, r);
        }
        out
    }

    fn add(&mut self, e: [u8; TANGENTIAL], w: Word, r: XiRational) {
        if r.is_zero() {
            return;
        }
        let slot = self.terms.entry((e, w)).or_default();
        *slot = slot.add(&r);
        if slot.is_zero() {
            self.terms.remove(&(e, w));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&([u8; TANGENTIAL], Word), &XiRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, o: &SliceExpr) -> SliceExpr {
        let mut out = self.clone();
        for ((e, w), r) in o.terms() {
            out.add(*e, *w, r.clone());
        }
        out
    }

    pub fn mul(&self, o: &SliceExpr) -> SliceExpr {
        let mut out = SliceExpr::default();
        for ((ea, wa), ra) in self.terms() {
            for ((eb, wb), rb) in o.terms() {
                let (sign, w) = wa.mul(*wb);
                let mut e = [0u8; TANGENTIAL];
                for k in 0..TANGENTIAL {
                    e[k] = ea[k] + eb[k];
                }
                let r = ra.mul(rb).scale_const(&GaussRational::from_int(sign as i64));
                out.add(e, w, r);
            }
        }
        out
    }

    pub fn map<F: Fn(&XiRational) -> XiRational>(&self, f: F) -> SliceExpr {
        let mut out = SliceExpr::default();
        for ((e, w), r) in self.terms() {
            out.add(*e, *w, f(r));
        }
        out
    }

    pub fn pi_plus(&self) -> SliceExpr {
        self.map(XiRational::pi_plus)
    }

    pub fn derive_t(&self) -> SliceExpr {
        self.map(XiRational::derive)
    }

    /// `∫_{|ξ′|=1} tr[·] σ(ξ′) / Ω₄`: identity words only, `tr[id] = 8`,
    /// `S⁴` moments in five variables.
    pub fn trace_sphere(&self) -> XiRational {
        let mut acc = XiRational::zero();
        for ((e, w), r) in self.terms() {
            if *w != Word::ID {
                continue;
            }
            let m = sphere_moment_ratio(e);
            if m.is_zero() {
                continue;
            }
            let c = GaussRational::new(m, BigRational::zero()).scale_int(TRACE_ID);
            acc = acc.add(&r.scale_const(&c));
        }
        acc
    }
}

// ---- boundary symbols and the five cases ------------------------------------

/// `σ₋₂` and `σ₋₃` of `Q⁻¹` at the boundary point.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySymbols {
    pub sigma2: SymbolExpr,
    pub sigma3: SymbolExpr,
    pub ctx: PointContext,
    pub spec: Option<Specialization>,
}

pub fn boundary_symbols(spec: Option<Specialization>) -> Result<BoundarySymbols, BoundaryError> {
    let ctx = PointContext::boundary();
    let mut q = build_q_symbols(&ctx)?;
    if let Some(sp) = spec {
        q.symbol = sp.apply_symbol(&q.symbol)?;
    }
    let b = invert_symbol(&q, 1)?;
    Ok(BoundarySymbols {
        sigma2: b.part(-2).clone(),
        sigma3: b.part(-3).clone(),
        ctx,
        spec,
    })
}

impl BoundarySymbols {
    pub fn sigma(&self, k: i32) -> &SymbolExpr {
        match k {
            -2 => &self.sigma2,
            -3 => &self.sigma3,
            _ => panic!("only σ₋₂ and σ₋₃ are available at the boundary"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundaryCase {
    #[serde(rename = "a.I")]
    A1,
    #[serde(rename = "a.II")]
    A2,
    #[serde(rename = "a.III")]
    A3,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
}

pub const ALL_CASES: [BoundaryCase; 5] = [
    BoundaryCase::A1,
    BoundaryCase::A2,
    BoundaryCase::A3,
    BoundaryCase::B,
    BoundaryCase::C,
];

/// `(r, l, j, k, |α|)` of one boundary contribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseIndices {
    pub r: i32,
    pub l: i32,
    pub j: u32,
    pub k: u32,
    pub alpha: u32,
}

impl BoundaryCase {
    pub fn id(self) -> &'static str {
        match self {
            BoundaryCase::A1 => "a1",
            BoundaryCase::A2 => "a2",
            BoundaryCase::A3 => "a3",
            BoundaryCase::B => "b",
            BoundaryCase::C => "c",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BoundaryCase::A1 => "a.I",
            BoundaryCase::A2 => "a.II",
            BoundaryCase::A3 => "a.III",
            BoundaryCase::B => "b",
            BoundaryCase::C => "c",
        }
    }

    pub fn parse(s: &str) -> Result<BoundaryCase, BoundaryError> {
        ALL_CASES
            .into_iter()
            .find(|c| c.id() == s || c.label() == s)
            .ok_or_else(|| BoundaryError::UnknownCase(s.to_string()))
    }

    pub fn indices(self) -> CaseIndices {
        let (r, l, j, k, alpha) = match self {
            BoundaryCase::A1 => (-2, -2, 0, 0, 1),
            BoundaryCase::A2 => (-2, -2, 1, 0, 0),
            BoundaryCase::A3 => (-2, -2, 0, 1, 0),
            BoundaryCase::B => (-2, -3, 0, 0, 0),
            BoundaryCase::C => (-3, -2, 0, 0, 0),
        };
        CaseIndices { r, l, j, k, alpha }
    }

    /// Printed value of the case.
    pub fn printed(self) -> &'static str {
        match self {
            BoundaryCase::A1 => "0",
            BoundaryCase::A2 => "1/2*(fh)^-2*d[6]((fh)^-2)*pi*Omega4 - 5/8*(fh)^-4*wp*pi*Omega4",
            BoundaryCase::A3 => "-1/2*(fh)^-2*d[6]((fh)^-2)*pi*Omega4 + 5/8*(fh)^-4*wp*pi*Omega4",
            BoundaryCase::B => "-15/8*(fh)^-4*wp*pi*Omega4",
            BoundaryCase::C => "15/8*(fh)^-4*wp*pi*Omega4",
        }
    }

    pub fn location(self) -> String {
        format!("boundary {}", self.id())
    }
}

/// `x`-derivatives along `js` of `s` at the boundary point.
fn dx(s: &SymbolExpr, js: &[u8], ctx: &PointContext) -> Result<SymbolExpr, BoundaryError> {
    Ok(s.derive_x_multi(js, ctx)?)
}

/// `Φ` of one case:
/// `(−i)^{|α|+j+k+1}/(α!(j+k+1)!) ∫_{|ξ′|=1}∫_{Γ⁺} tr[∂ₙ^j∂_{ξ′}^α∂_{ξₙ}^k π⁺σ_r ·
///  ∂_{x′}^α∂_{ξₙ}^{j+1}∂ₙ^k σ_l]`.
pub fn phi_case(case: BoundaryCase, sym: &BoundarySymbols) -> Result<ScalarExpr, BoundaryError> {
    let CaseIndices { r, l, j, k, alpha } = case.indices();
    let ctx = &sym.ctx;
    let normal_j = vec![NORMAL; j as usize];
    let normal_k = vec![NORMAL; k as usize];
    let directions: Vec<Option<u8>> = if alpha == 0 {
        vec![None]
    } else {
        (1..NORMAL).map(Some).collect()
    };
    let mut integrand = SliceExpr::default();
    for mu in directions {
        // left: π⁺ commutes with ∂_{ξ′} and ∂ₙ; ∂_{ξₙ}^k is taken after π⁺
        let mut left = dx(sym.sigma(r), &normal_j, ctx)?;
        if let Some(mu) = mu {
            left = left.derive_xi(mu);
        }
        let mut left = SliceExpr::from_symbol(&left).pi_plus();
        for _ in 0..k {
            left = left.derive_t();
        }
        let mut right = sym.sigma(l).derive_xi_multi(&vec![NORMAL; j as usize + 1]);
        right = dx(&right, &normal_k, ctx)?;
        if let Some(mu) = mu {
            right = dx(&right, &[mu], ctx)?;
        }
        integrand = integrand.plus(&left.mul(&SliceExpr::from_symbol(&right)));
    }
    let total = integrand.trace_sphere().contour_integral()?;
    let order = alpha + j + k + 1;
    let pref = GaussRational::i_pow(-(order as i32))
        * GaussRational::ratio(1, factorial(j + k + 1));
    let omega = ScalarExpr::geom(GeomKind::Omega4);
    Ok((&total * &omega).scale(&pref))
}

pub fn phi_total(sym: &BoundarySymbols) -> Result<ScalarExpr, BoundaryError> {
    let mut acc = ScalarExpr::zero();
    for c in ALL_CASES {
        acc += &phi_case(c, sym)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCaseResult {
    pub case: BoundaryCase,
    pub computed: String,
    #[serde(rename = "paper")]
    pub printed: String,
    pub verdict: Verdict,
}

/// Printed value under the active specialization.
fn printed(text: &str, spec: Option<Specialization>) -> Result<ScalarExpr, BoundaryError> {
    let e = parse_expr(text).expect("bundled printed value parses");
    Ok(match spec {
        Some(sp) => sp.apply(&e)?,
        None => e,
    })
}

/// Like [`Ledger::judge`], but a specialized value is excused when it is the
/// image of the ledgered general value.
fn judge(
    ledger: &Ledger,
    location: &str,
    value: &ScalarExpr,
    printed: &ScalarExpr,
    text: &str,
    spec: Option<Specialization>,
) -> Result<Verdict, BoundaryError> {
    let Some(sp) = spec else {
        return Ok(ledger.judge(location, value == printed, text));
    };
    if value == printed {
        return Ok(Verdict::Match);
    }
    let forced = ledger.find(location).and_then(|e| parse_expr(&e.forced).ok());
    Ok(match forced {
        Some(d) if sp.apply(&d)? == *value => Verdict::Ledgered,
        _ => Verdict::Diff,
    })
}

pub fn case_result(
    case: BoundaryCase,
    sym: &BoundarySymbols,
    ledger: &Ledger,
) -> Result<BoundaryCaseResult, BoundaryError> {
    let value = phi_case(case, sym)?;
    let target = printed(case.printed(), sym.spec)?;
    let computed = group_for_display(&value);
    Ok(BoundaryCaseResult {
        case,
        verdict: judge(ledger, &case.location(), &value, &target, &computed, sym.spec)?,
        computed,
        printed: group_for_display(&target),
    })
}

pub const TOTAL_LOCATION: &str = "boundary total";

/// Requested cases plus the total over all five and the two pair sums.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySection {
    pub specialization: Option<String>,
    pub cases: Vec<BoundaryCaseResult>,
    pub total: String,
    pub total_verdict: Verdict,
    /// `Φ₂ + Φ₃ = 0`.
    pub pair_a: bool,
    /// `Φ₄ + Φ₅ = 0`.
    pub pair_bc: bool,
}

impl BoundarySection {
    pub fn verdicts(&self) -> impl Iterator<Item = Verdict> + '_ {
        self.cases.iter().map(|c| c.verdict).chain([self.total_verdict])
    }
}

pub fn boundary_section(
    spec: Option<Specialization>,
    cases: &[BoundaryCase],
    ledger: &Ledger,
) -> Result<BoundarySection, BoundaryError> {
    let sym = boundary_symbols(spec)?;
    let mut values = BTreeMap::new();
    for c in ALL_CASES {
        values.insert(c, phi_case(c, &sym)?);
    }
    let total = values.values().fold(ScalarExpr::zero(), |acc, v| &acc + v);
    let total_text = group_for_display(&total);
    let mut out = Vec::new();
    for &c in cases {
        out.push(case_result(c, &sym, ledger)?);
    }
    let sum = |a, b| (&values[&a] + &values[&b]).is_zero();
    Ok(BoundarySection {
        specialization: spec.map(|s| s.to_string()),
        cases: out,
        total_verdict: judge(ledger, TOTAL_LOCATION, &total, &ScalarExpr::zero(), &total_text, spec)?,
        total: total_text,
        pair_a: sum(BoundaryCase::A2, BoundaryCase::A3),
        pair_bc: sum(BoundaryCase::B, BoundaryCase::C),
    })
}

/// The `w′(0)`-part of `σ₋₃` on the slice as printed:
/// `(fh)⁻²[−i(1+ξₙ²)⁻²(−½w′ Σ_{k<n} ξ_k c_k c_n + 5/2 w′ ξₙ) − 2i w′ ξₙ(1+ξₙ²)⁻³]`.
pub fn printed_sigma3_warp() -> SliceExpr {
    let wp = ScalarExpr::geom(GeomKind::WarpDeriv);
    let pref = &ScalarExpr::fh_pow(-2) * &wp;
    let mut out = SliceExpr::default();
    let inv2 = XiRational::one_plus_t2(-2);
    for k in 0..TANGENTIAL {
        let mut e = [0u8; TANGENTIAL];
        e[k] = 1;
        let (sign, w) = Word::generator(k as u8 + 1).mul(Word::generator(NORMAL));
        let c = pref.scale(&(GaussRational::i() * GaussRational::ratio(sign as i64, 2)));
        out.add(e, w, inv2.scale(&c));
    }
    let t = XiRational::t();
    let a = t.mul(&inv2).scale(&pref.scale(&(GaussRational::i() * GaussRational::ratio(-5, 2))));
    let b = t
        .mul(&XiRational::one_plus_t2(-3))
        .scale(&pref.scale(&(GaussRational::i() * GaussRational::ratio(-2, 1))));
    out.add([0; TANGENTIAL], Word::ID, a.add(&b));
    out
}

/// Sets `w′(0) = 0`.
pub fn flat_warp(e: &ScalarExpr) -> Result<ScalarExpr, BoundaryError> {
    Ok(e.substitute(&|a: &Atom| {
        matches!(a, Atom::Geom(GeomKind::WarpDeriv, _)).then(ScalarExpr::zero)
    })?)
}
