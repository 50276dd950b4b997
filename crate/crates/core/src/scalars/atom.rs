//! Commuting atoms of the coefficient ring.

use std::fmt;

use crate::DIM;

/// Largest derivative order representable in a [`Deriv`].
pub const DERIV_CAPACITY: usize = 4;

/// Default bound on derivative orders. The residue density never needs more
/// than two derivatives of `f` or `h`; the deep parametrix check raises it.
pub const DEFAULT_DERIV_CAP: usize = 2;

/// Sorted multi-index of coordinate derivatives `∂_{x_{j1}} … ∂_{x_{jk}}`,
/// coordinates numbered `1..=6`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Deriv {
    len: u8,
    idx: [u8; DERIV_CAPACITY],
}

impl Deriv {
    pub const NONE: Deriv = Deriv {
        len: 0,
        idx: [0; DERIV_CAPACITY],
    };

    pub fn from_indices(indices: &[u8]) -> Option<Self> {
        let mut d = Self::NONE;
        for &j in indices {
            d = d.with(j)?;
        }
        Some(d)
    }

    pub fn order(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn indices(&self) -> &[u8] {
        &self.idx[..self.len as usize]
    }

    /// Adds one more derivative in direction `j`; `None` past the capacity.
    pub fn with(&self, j: u8) -> Option<Self> {
        assert!((1..=DIM as u8).contains(&j), "coordinate index {j} out of range");
        let n = self.len as usize;
        if n >= DERIV_CAPACITY {
            return None;
        }
        let mut out = *self;
        out.idx[n] = j;
        out.len += 1;
        out.idx[..=n].sort_unstable();
        Some(out)
    }
}

impl fmt::Debug for Deriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.indices())
    }
}

/// Base function of a [`Atom::Func`]. `U` only appears through the
/// `f=u^p,h=u^q` specialization.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FuncBase {
    F,
    H,
    U,
}

impl FuncBase {
    pub fn name(self) -> &'static str {
        match self {
            FuncBase::F => "f",
            FuncBase::H => "h",
            FuncBase::U => "u",
        }
    }
}

/// Geometric quantities at the computation point.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GeomKind {
    /// Scalar curvature `s`.
    ScalarCurvature,
    /// `R_{αaαμ}` summed over `α`, symmetric in `(a, μ)`; stored with `a ≤ μ`.
    Ricci(u8, u8),
    /// `w'(0)`, normal derivative of the boundary warp factor.
    WarpDeriv,
    /// `Γ^μ = g^{ij}Γ^μ_{ij}`.
    Gamma(u8),
    /// Spin connection `σ^μ`; Clifford-valued, resolved by a point context.
    SpinConn(u8),
    /// `ω_{s,t}(e_i)`, stored as `(s, t, i)`.
    FrameConn(u8, u8, u8),
    /// Inverse metric entry `g^{ab}`, only ever stored differentiated.
    Metric(u8, u8),
    /// `−g^{μν}(∂_μσ_ν + σ^μσ_ν − Γ^α_{μν}σ_α)` from the zeroth-order symbol of `D²`.
    ConnQuadratic,
    AreaS6,
    Omega4,
    Pi,
}

impl GeomKind {
    /// Constants carry no x-dependence.
    pub fn is_constant(self) -> bool {
        matches!(self, GeomKind::AreaS6 | GeomKind::Omega4 | GeomKind::Pi)
    }

    pub fn ricci(a: u8, b: u8) -> Self {
        GeomKind::Ricci(a.min(b), a.max(b))
    }

    pub fn metric(a: u8, b: u8) -> Self {
        GeomKind::Metric(a.min(b), a.max(b))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    Func(FuncBase, Deriv),
    Geom(GeomKind, Deriv),
}

impl Atom {
    pub const F: Atom = Atom::Func(FuncBase::F, Deriv::NONE);
    pub const H: Atom = Atom::Func(FuncBase::H, Deriv::NONE);
    pub const U: Atom = Atom::Func(FuncBase::U, Deriv::NONE);

    pub fn func(base: FuncBase, indices: &[u8]) -> Atom {
        Atom::Func(base, Deriv::from_indices(indices).expect("derivative too deep"))
    }

    pub fn geom(kind: GeomKind) -> Atom {
        Atom::Geom(kind, Deriv::NONE)
    }

    pub fn deriv(&self) -> &Deriv {
        match self {
            Atom::Func(_, d) | Atom::Geom(_, d) => d,
        }
    }

    /// Atoms that may carry negative powers.
    pub fn is_invertible(&self) -> bool {
        match self {
            Atom::Func(_, d) => d.is_empty(),
            Atom::Geom(k, d) => k.is_constant() && d.is_empty(),
        }
    }

    /// `∂_{x_j}` of the atom: `Ok(None)` when it vanishes, `Err` past `cap`.
    pub fn derive(&self, j: u8, cap: usize) -> Result<Option<Atom>, usize> {
        let d = self.deriv();
        if let Atom::Geom(k, _) = self {
            if k.is_constant() {
                return Ok(None);
            }
        }
        if d.order() + 1 > cap.min(DERIV_CAPACITY) {
            return Err(d.order() + 1);
        }
        let nd = d.with(j).ok_or(d.order() + 1)?;
        Ok(Some(match self {
            Atom::Func(b, _) => Atom::Func(*b, nd),
            Atom::Geom(k, _) => Atom::Geom(*k, nd),
        }))
    }
}

fn fmt_deriv(d: &Deriv) -> String {
    if d.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = d.indices().iter().map(|j| j.to_string()).collect();
    format!("d[{}]", parts.join(","))
}

/// ASCII atom names: `f`, `d[1]h`, `d[1,6]f`, `s`, `R[2,3]`, `wp`, `Gamma[6]`,
/// `sigma[2]`, `omega[6,1,1]`, `d[6]g[1,1]`, `Kconn`, `areaS6`, `Omega4`, `pi`.
impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = fmt_deriv(self.deriv());
        match self {
            Atom::Func(b, _) => write!(f, "{d}{}", b.name()),
            Atom::Geom(k, _) => {
                let body = match k {
                    GeomKind::ScalarCurvature => "s".to_string(),
                    GeomKind::Ricci(a, b) => format!("R[{a},{b}]"),
                    GeomKind::WarpDeriv => "wp".to_string(),
                    GeomKind::Gamma(m) => format!("Gamma[{m}]"),
                    GeomKind::SpinConn(m) => format!("sigma[{m}]"),
                    GeomKind::FrameConn(s, t, i) => format!("omega[{s},{t},{i}]"),
                    GeomKind::Metric(a, b) => format!("g[{a},{b}]"),
                    GeomKind::ConnQuadratic => "Kconn".to_string(),
                    GeomKind::AreaS6 => "areaS6".to_string(),
                    GeomKind::Omega4 => "Omega4".to_string(),
                    GeomKind::Pi => "pi".to_string(),
                };
                write!(f, "{d}{body}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deriv_indices_stay_sorted() {
        let d = Deriv::from_indices(&[3, 1, 2]).unwrap();
        assert_eq!(d.indices(), &[1, 2, 3]);
        assert_eq!(d, Deriv::from_indices(&[2, 3, 1]).unwrap());
    }

    #[test]
    fn derive_respects_cap() {
        let a = Atom::func(FuncBase::F, &[1, 2]);
        assert_eq!(a.derive(3, 2), Err(3));
        assert!(a.derive(3, 3).unwrap().is_some());
        assert_eq!(Atom::geom(GeomKind::Pi).derive(1, 2), Ok(None));
    }

    #[test]
    fn display_names() {
        assert_eq!(Atom::func(FuncBase::H, &[6, 1]).to_string(), "d[1,6]h");
        assert_eq!(Atom::geom(GeomKind::ricci(4, 2)).to_string(), "R[2,4]");
    }
}
