//! Composition of symbols, the symbols of `Q = (fDh)²`, its parametrix and
//! the order `−6` symbol of `Q⁻²`.

use crate::clifford::{CliffordElement, Word};
use crate::scalars::{Atom, GaussRational, GeomKind, ScalarExpr};
use crate::symbols::{PointContext, SymbolError, SymbolExpr, XiMonomial};
use crate::DIM;

/// Named symbol together with the point context it was evaluated in.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec {
    pub name: String,
    pub symbol: SymbolExpr,
    pub ctx: PointContext,
}

/// `(−i)^k / m` as a Gaussian rational.
fn weight(k: usize, factorial: i64) -> GaussRational {
    &GaussRational::i_pow(-(k as i32)) * &GaussRational::ratio(1, factorial)
}

/// Depth-first walk over sorted multi-indices `α` with `|α| ≤ max_len`.
/// `visit(α, α!)` returns false to prune the subtree below `α`.
fn walk_multi_indices<F>(max_len: usize, visit: &mut F) -> Result<(), SymbolError>
where
    F: FnMut(&[u8], i64) -> Result<bool, SymbolError>,
{
    fn rec<F>(
        alpha: &mut Vec<u8>,
        fact: i64,
        run: i64,
        max_len: usize,
        visit: &mut F,
    ) -> Result<(), SymbolError>
    where
        F: FnMut(&[u8], i64) -> Result<bool, SymbolError>,
    {
        if alpha.len() == max_len {
            return Ok(());
        }
        let start = alpha.last().copied().unwrap_or(1);
        for mu in start..=DIM as u8 {
            let run = if alpha.last() == Some(&mu) { run + 1 } else { 1 };
            alpha.push(mu);
            let fact = fact * run;
            if visit(alpha, fact)? {
                rec(alpha, fact, run, max_len, visit)?;
            }
            alpha.pop();
        }
        Ok(())
    }
    if visit(&[], 1)? {
        rec(&mut Vec::new(), 1, 0, max_len, visit)?;
    }
    Ok(())
}

/// Asymptotic product `Σ_α (−i)^{|α|}/α! ∂_ξ^α A · ∂_x^α B`, keeping orders
/// `≥ lowest`.
pub fn compose(
    a: &SymbolExpr,
    b: &SymbolExpr,
    lowest: i32,
    ctx: &PointContext,
) -> Result<SymbolExpr, SymbolError> {
    let (Some(top_a), Some(top_b)) = (a.top_order(), b.top_order()) else {
        return Ok(SymbolExpr::zero());
    };
    if lowest > top_a + top_b {
        return Err(SymbolError::Truncation {
            lowest,
            top: top_a + top_b,
        });
    }
    compose_window(a, b, lowest, top_a + top_b, ctx)
}

/// Order-`k` part of the asymptotic product, computed without the orders above.
pub fn compose_order(
    a: &SymbolExpr,
    b: &SymbolExpr,
    k: i32,
    ctx: &PointContext,
) -> Result<SymbolExpr, SymbolError> {
    let (Some(top_a), Some(top_b)) = (a.top_order(), b.top_order()) else {
        return Ok(SymbolExpr::zero());
    };
    if k > top_a + top_b {
        return Err(SymbolError::Truncation {
            lowest: k,
            top: top_a + top_b,
        });
    }
    compose_window(a, b, k, k, ctx)
}

fn compose_window(
    a: &SymbolExpr,
    b: &SymbolExpr,
    lo: i32,
    hi: i32,
    ctx: &PointContext,
) -> Result<SymbolExpr, SymbolError> {
    let (top_a, top_b) = (a.top_order().unwrap(), b.top_order().unwrap());
    let max_len = (top_a + top_b - lo).max(0) as usize;
    // ∂_ξ^α A and ∂_x^α B are shared between multi-indices with a common
    // prefix. Lower cuts only tighten with |α|; upper cuts are left to the
    // windowed product.
    let keep_b = |s: &SymbolExpr, n: i32| s.truncate(lo - top_a + n);
    let mut da_cache: Vec<SymbolExpr> = vec![a.truncate(lo - top_b)];
    let mut dx_cache: Vec<SymbolExpr> = vec![keep_b(b, 0)];
    let mut out = SymbolExpr::zero();
    walk_multi_indices(max_len, &mut |alpha, fact| {
        let n = alpha.len();
        if n > 0 {
            da_cache.truncate(n);
            dx_cache.truncate(n);
            let mu = alpha[n - 1];
            let da = da_cache[n - 1].derive_xi(mu);
            let db = keep_b(&dx_cache[n - 1], n as i32).derive_x(mu, ctx)?;
            da_cache.push(da);
            dx_cache.push(db);
        }
        let (da, db) = (&da_cache[n], &dx_cache[n]);
        if da.is_zero() {
            return Ok(false);
        }
        if !db.is_zero() {
            let prod = da.mul_window(db, lo, hi);
            out += &prod.scale_const(&weight(n, fact));
        }
        Ok(true)
    })?;
    Ok(out)
}

/// Symbol of `[S, u]` for a multiplication operator `u`:
/// `Σ_{|β|≥1} (−i)^{|β|}/β! ∂_x^β u · ∂_ξ^β S`, orders `≥ lowest`.
pub fn commutator_symbol(
    s: &SymbolExpr,
    u: &ScalarExpr,
    lowest: i32,
    ctx: &PointContext,
) -> Result<SymbolExpr, SymbolError> {
    let Some(top) = s.top_order() else {
        return Ok(SymbolExpr::zero());
    };
    let max_len = (top - lowest).max(0) as usize;
    let mut out = SymbolExpr::zero();
    walk_multi_indices(max_len, &mut |alpha, fact| {
        if alpha.is_empty() {
            return Ok(true);
        }
        let ds = s.derive_xi_multi(alpha).truncate(lowest);
        if ds.is_zero() {
            return Ok(false);
        }
        let du = u.derive_multi(alpha, ctx.max_deriv)?;
        out = &out + &ds.scale(&du).scale_const(&weight(alpha.len(), fact));
        Ok(true)
    })?;
    ctx.apply(&out)
}

/// `σ(D) = i c(ξ) − ¼ Σ_{s,t,i} ω_{s,t}(e_i) c_i c_s c_t`.
pub fn sigma_d(ctx: &PointContext) -> Result<SymbolExpr, SymbolError> {
    let mut out = SymbolExpr::c_xi().scale_const(&GaussRational::i());
    let quarter = GaussRational::ratio(-1, 4);
    for s in 1..=DIM as u8 {
        for t in 1..=DIM as u8 {
            for i in 1..=DIM as u8 {
                let w = ScalarExpr::geom(GeomKind::FrameConn(s, t, i)).scale(&quarter);
                let el = CliffordElement::product_of(&[i, s, t]).scale(&w);
                out = &out + &SymbolExpr::from_clifford(&el, XiMonomial::ONE);
            }
        }
    }
    ctx.apply(&out)
}

/// `σ(D²) = |ξ|² + i(Γ^μ − 2σ^μ)ξ_μ + ¼s + K`, with `K` the connection
/// quadratic (zero in the flat sector).
pub fn sigma_d2(ctx: &PointContext) -> Result<SymbolExpr, SymbolError> {
    let mut out = SymbolExpr::norm_sq();
    for mu in 1..=DIM as u8 {
        let c = &ScalarExpr::geom(GeomKind::Gamma(mu))
            - &ScalarExpr::geom(GeomKind::SpinConn(mu)).scale(&GaussRational::from_int(2));
        out.add_term(XiMonomial::xi(mu), Word::ID, c.scale(&GaussRational::i()));
    }
    out.add_term(
        XiMonomial::ONE,
        Word::ID,
        ScalarExpr::geom(GeomKind::ScalarCurvature).scale(&GaussRational::ratio(1, 4)),
    );
    out.add_term(XiMonomial::ONE, Word::ID, ScalarExpr::geom(GeomKind::ConnQuadratic));
    ctx.apply(&out)
}

/// Orders 2, 1, 0 of `Q = fhfh·D² + fhf·[D²,h] + fh·c(d(hf))·D + f·c(d(hf))c(dh)`.
pub fn build_q_symbols(ctx: &PointContext) -> Result<OperatorSpec, SymbolError> {
    let f = ScalarExpr::f();
    let h = ScalarExpr::h();
    let fh = &f * &h;
    let cap = ctx.max_deriv;
    let d2 = sigma_d2(ctx)?;
    let c_dhf = SymbolExpr::c_d(&fh, cap)?;
    let c_dh = SymbolExpr::c_d(&h, cap)?;

    let t1 = d2.scale(&(&fh * &fh));
    let t2 = commutator_symbol(&d2, &h, 0, ctx)?.scale(&(&fh * &f));
    let t3 = &c_dhf.scale(&fh) * &sigma_d(ctx)?;
    let t4 = &c_dhf.scale(&f) * &c_dh;
    let q = &(&(&t1 + &t2) + &t3) + &t4;
    Ok(OperatorSpec {
        name: "Q".into(),
        symbol: ctx.apply(&q)?,
        ctx: *ctx,
    })
}

/// Homogeneous pieces `b_{−2}, b_{−3}, …` of a parametrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Parametrix {
    pub parts: Vec<SymbolExpr>,
    pub ctx: PointContext,
}

impl Parametrix {
    /// `b_k` for `k = −2, −3, …`.
    pub fn part(&self, k: i32) -> &SymbolExpr {
        &self.parts[(-2 - k) as usize]
    }

    pub fn total(&self) -> SymbolExpr {
        self.parts
            .iter()
            .fold(SymbolExpr::zero(), |acc, p| &acc + p)
    }
}

/// `σ₂⁻¹` for `σ₂ = c·|ξ|²` with `c` an invertible monomial.
pub fn invert_leading(sigma2: &SymbolExpr) -> Result<SymbolExpr, SymbolError> {
    let err = || SymbolError::NotInvertible(sigma2.to_string());
    let mut it = sigma2.terms();
    let ((xi, w), c) = it.next().ok_or_else(err)?;
    if it.next().is_some() || *xi != XiMonomial::norm_pow(1) || !w.is_identity() {
        return Err(err());
    }
    let inv = c.pow(-1).map_err(|_| err())?;
    Ok(SymbolExpr::term(inv, XiMonomial::norm_pow(-1), Word::ID))
}

/// Solves `σ(Q) ∘ b = 1` order by order: `b_{−2} = σ₂⁻¹` and
/// `b_{−2−n} = −σ₂⁻¹ · [order −n part of σ(Q) ∘ (b_{−2} + … + b_{−1−n})]`.
/// `depth` counts the pieces beyond `b_{−2}`.
pub fn invert_symbol(q: &OperatorSpec, depth: usize) -> Result<Parametrix, SymbolError> {
    let ctx = q.ctx;
    let b2 = invert_leading(&q.symbol.part(2))?;
    let mut parts = vec![b2.clone()];
    let mut partial = b2.clone();
    for n in 1..=depth as i32 {
        let rest = compose_order(&q.symbol, &partial, -n, &ctx)?;
        let b = ctx.apply(&(&b2 * &rest).scale_const(&GaussRational::from_int(-1)))?;
        partial = &partial + &b;
        parts.push(b);
    }
    Ok(Parametrix { parts, ctx })
}

/// `⅔c|ξ|⁻⁶ Σ R_{αaαμ} ξ_a ξ_μ` for `σ₂⁻¹ = c|ξ|⁻²`: the Riemann part of
/// `σ₋₄(Q⁻¹)` at an interior point, which the flat-sector recursion does not
/// produce.
pub fn riemann_sigma4(b2: &SymbolExpr) -> SymbolExpr {
    let c = b2.terms().next().map(|(_, c)| c.clone()).unwrap_or_default();
    ricci_xi_xi(&c.scale(&GaussRational::ratio(2, 3)), -3)
}

/// `c · |ξ|^{2p} · Σ_{a,μ} R_{aμ} ξ_a ξ_μ`.
pub fn ricci_xi_xi(c: &ScalarExpr, p: i32) -> SymbolExpr {
    let mut out = SymbolExpr::zero();
    for a in 1..=DIM as u8 {
        for mu in 1..=DIM as u8 {
            let r = ScalarExpr::atom(Atom::geom(GeomKind::ricci(a, mu)));
            out.add_term(
                XiMonomial::xi(a).mul(&XiMonomial::xi(mu)).with_norm(p),
                Word::ID,
                &r * c,
            );
        }
    }
    out
}

/// The order `−6` symbol of `Q⁻²` at an interior point.
#[derive(Clone, Debug, PartialEq)]
pub struct Sigma6 {
    /// `compose(b, b, −6)` on the flat-sector parametrix.
    pub direct: SymbolExpr,
    /// The closed-form assembly from `σ₂, σ₁, σ₀, b₋₃, b₋₄`.
    pub assembled: SymbolExpr,
    /// Riemann part: `3σ₂⁻¹` times the Riemann part of `σ₋₄(Q⁻¹)`.
    pub curvature: SymbolExpr,
}

impl Sigma6 {
    pub fn routes_agree(&self) -> bool {
        self.direct.equiv(&self.assembled)
    }

    /// `direct + curvature`.
    pub fn total(&self) -> SymbolExpr {
        &self.direct + &self.curvature
    }
}

/// Computes `σ₋₆(Q⁻²)` both by direct composition and by
/// `3σ₂⁻¹σ₋₄ + σ₂⁻³σ₀ + σ₋₃σ₋₃ + σ₂⁻²σ₁σ₋₃ − iσ₂⁻²∂_{ξ_μ}σ₁∂_{x_μ}σ₂⁻¹
///  − i∂_{ξ_μ}σ₋₃∂_{x_μ}σ₂⁻¹ − ½σ₂⁻²∂²_ξσ₂∂²_xσ₂⁻¹ − ½∂²_ξσ₂⁻¹∂²_xσ₂⁻¹`.
pub fn qinv_square_sigma6(q: &OperatorSpec, b: &Parametrix) -> Result<Sigma6, SymbolError> {
    let ctx = q.ctx;
    let binv = b.total().truncate(-4);
    let direct = compose_order(&binv, &binv, -6, &ctx)?;

    let s1 = q.symbol.part(1);
    let s0 = q.symbol.part(0);
    let (b2, b3, b4) = (b.part(-2), b.part(-3), b.part(-4));
    let b2sq = b2 * b2;
    let b2cu = &b2sq * b2;
    let i = GaussRational::i();

    let mut asm = b2 * b4;
    asm = asm.scale_const(&GaussRational::from_int(3));
    asm = &asm + &(&b2cu * &s0);
    // −½σ₂⁻²∂_ξ∂_ξσ₂·∂_x∂_xσ₂⁻¹ − ½∂_ξ∂_ξσ₂⁻¹·∂_x∂_xσ₂⁻¹
    let s2 = q.symbol.part(2);
    let half = GaussRational::ratio(-1, 2);
    for mu in 1..=DIM as u8 {
        for nu in 1..=DIM as u8 {
            let dxx = b2.derive_x_multi(&[mu, nu], &ctx)?;
            if dxx.is_zero() {
                continue;
            }
            let left = &(&b2sq * &s2.derive_xi_multi(&[mu, nu])) + &b2.derive_xi_multi(&[mu, nu]);
            asm = &asm + &(&left * &dxx).scale_const(&half);
        }
    }
    asm = &asm + &(b3 * b3);
    asm = &asm + &(&(&b2sq * &s1) * b3);
    for mu in 1..=DIM as u8 {
        let dxb2 = b2.derive_x(mu, &ctx)?;
        let t1 = &(&b2sq * &s1.derive_xi(mu)) * &dxb2;
        let t2 = &b3.derive_xi(mu) * &dxb2;
        asm = &asm - &(&t1 + &t2).scale_const(&i);
    }

    let curvature = (b2 * &riemann_sigma4(b2)).scale_const(&GaussRational::from_int(3));
    Ok(Sigma6 {
        direct,
        assembled: ctx.apply(&asm)?,
        curvature,
    })
}
