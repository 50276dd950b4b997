//! Clifford algebra on `c(dx_1) … c(dx_6)` with `c_i c_j + c_j c_i = −2δ_ij`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, Num, One, Zero};

use crate::scalars::{Atom, GaussRational, ScalarExpr};
use crate::DIM;

/// Spinor trace of the identity, `2^{6/2}`.
pub const TRACE_ID: i64 = 8;

/// Canonical word: bit `k-1` set means generator `c_k` is present, in
/// increasing order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(u8);

impl Word {
    pub const ID: Word = Word(0);

    pub fn generator(k: u8) -> Word {
        assert!((1..=DIM as u8).contains(&k), "generator {k} out of range");
        Word(1 << (k - 1))
    }

    pub fn from_mask(mask: u8) -> Word {
        assert!(mask < 1 << DIM, "mask {mask:#b} out of range");
        Word(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = u8> {
        (1..=DIM as u8).filter(move |k| self.0 & (1 << (k - 1)) != 0)
    }

    /// `self · other = sign · word`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Word) -> (i32, Word) {
        let (a, b) = (self.0, other.0);
        let mut swaps = 0u32;
        for k in 0..DIM {
            if b & (1 << k) != 0 {
                // generators of `a` above k must be passed
                swaps += (a >> (k + 1)).count_ones();
            }
        }
        swaps += (a & b).count_ones();
        (if swaps.is_multiple_of(2) { 1 } else { -1 }, Word(a ^ b))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        for k in self.indices() {
            write!(f, "c[{k}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sum of canonical words with scalar coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CliffordElement {
    terms: BTreeMap<Word, ScalarExpr>,
}

impl CliffordElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(e: ScalarExpr) -> Self {
        Self::word(Word::ID, e)
    }

    pub fn one() -> Self {
        Self::scalar(ScalarExpr::one())
    }

    pub fn word(w: Word, e: ScalarExpr) -> Self {
        let mut out = Self::zero();
        out.add_word(w, &e);
        out
    }

    /// `c(dx_k)`.
    pub fn gen(k: u8) -> Self {
        Self::word(Word::generator(k), ScalarExpr::one())
    }

    /// `c_{k1} c_{k2} …` as an ordered product.
    pub fn product_of(gens: &[u8]) -> Self {
        gens.iter()
            .fold(Self::one(), |acc, &k| &acc * &Self::gen(k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ScalarExpr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: Word) -> ScalarExpr {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn add_word(&mut self, w: Word, e: &ScalarExpr) {
        if e.is_zero() {
            return;
        }
        let slot = self.terms.entry(w).or_default();
        *slot += e;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn scale(&self, e: &ScalarExpr) -> Self {
        let mut out = Self::zero();
        for (w, c) in self.terms() {
            out.add_word(*w, &(c * e));
        }
        out
    }

    pub fn map_coefficients<F, E>(&self, mut f: F) -> Result<Self, E>
    where
        F: FnMut(&ScalarExpr) -> Result<ScalarExpr, E>,
    {
        let mut out = Self::zero();
        for (w, c) in self.terms() {
            out.add_word(*w, &f(c)?);
        }
        Ok(out)
    }

    /// `tr` on the 8-dimensional spinor space: 8 times the identity coefficient.
    pub fn trace(&self) -> ScalarExpr {
        self.coefficient(Word::ID)
            .scale(&GaussRational::from_int(TRACE_ID))
    }

    /// Numeric 8×8 matrix under the oracle representation.
    pub fn to_matrix<T: Float>(&self, value: &dyn Fn(&Atom) -> Complex<T>) -> Mat8<T> {
        let gens = matrix_oracle::<T>();
        let mut acc = Mat8::zero();
        for (w, c) in self.terms() {
            let mut m = Mat8::identity();
            for k in w.indices() {
                m = &m * &gens[k as usize - 1];
            }
            acc = &acc + &m.scale(c.eval(value));
        }
        acc
    }
}

impl<'a> Add<&'a CliffordElement> for &'a CliffordElement {
    type Output = CliffordElement;
    fn add(self, o: &CliffordElement) -> CliffordElement {
        let mut out = self.clone();
        for (w, c) in o.terms() {
            out.add_word(*w, c);
        }
        out
    }
}

impl<'a> Sub<&'a CliffordElement> for &'a CliffordElement {
    type Output = CliffordElement;
    fn sub(self, o: &CliffordElement) -> CliffordElement {
        self + &(-o)
    }
}

impl Neg for &CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        self.scale(&ScalarExpr::int(-1))
    }
}

impl<'a> Mul<&'a CliffordElement> for &'a CliffordElement {
    type Output = CliffordElement;
    fn mul(self, o: &CliffordElement) -> CliffordElement {
        let mut out = CliffordElement::zero();
        for (wa, ca) in self.terms() {
            for (wb, cb) in o.terms() {
                let (s, w) = wa.mul(*wb);
                let c = ca * cb;
                out.add_word(w, &if s < 0 { -c } else { c });
            }
        }
        out
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(w, c)| format!("({c})*{w}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Dense 8×8 complex matrix used by the numeric oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat8<T>(pub [[Complex<T>; 8]; 8]);

impl<T: Clone + Num> Mat8<T> {
    pub fn zero() -> Self {
        Mat8(std::array::from_fn(|_| std::array::from_fn(|_| Complex::zero())))
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for k in 0..8 {
            m.0[k][k] = Complex::one();
        }
        m
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Mat8(std::array::from_fn(|r| {
            std::array::from_fn(|s| self.0[r][s].clone() * c.clone())
        }))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..8).fold(Complex::zero(), |acc, k| acc + self.0[k][k].clone())
    }

    fn kron3(a: &[[Complex<T>; 2]; 2], b: &[[Complex<T>; 2]; 2], c: &[[Complex<T>; 2]; 2]) -> Self {
        Mat8(std::array::from_fn(|r| {
            std::array::from_fn(|s| {
                a[r >> 2][s >> 2].clone() * b[(r >> 1) & 1][(s >> 1) & 1].clone() * c[r & 1][s & 1].clone()
            })
        }))
    }
}

impl<'a, T: Clone + Num> Mul<&'a Mat8<T>> for &'a Mat8<T> {
    type Output = Mat8<T>;
    fn mul(self, o: &Mat8<T>) -> Mat8<T> {
        Mat8(std::array::from_fn(|r| {
            std::array::from_fn(|s| {
                (0..8).fold(Complex::zero(), |acc, k| {
                    acc + self.0[r][k].clone() * o.0[k][s].clone()
                })
            })
        }))
    }
}

impl<'a, T: Clone + Num> Add<&'a Mat8<T>> for &'a Mat8<T> {
    type Output = Mat8<T>;
    fn add(self, o: &Mat8<T>) -> Mat8<T> {
        Mat8(std::array::from_fn(|r| {
            std::array::from_fn(|s| self.0[r][s].clone() + o.0[r][s].clone())
        }))
    }
}

/// Six 8×8 matrices `M_k = iΓ_k`, with `Γ_k` Hermitian gamma matrices built
/// from Pauli blocks; they satisfy `M_j M_k + M_k M_j = −2δ_jk`.
pub fn matrix_oracle<T: Clone + Num + Neg<Output = T>>() -> [Mat8<T>; 6] {
    let z = || Complex::<T>::zero();
    let o = || Complex::<T>::one();
    let i = || Complex::<T>::i();
    let id = [[o(), z()], [z(), o()]];
    let sx = [[z(), o()], [o(), z()]];
    let sy = [[z(), -i()], [i(), z()]];
    let sz = [[o(), z()], [z(), -o()]];
    let gammas = [
        Mat8::kron3(&sx, &id, &id),
        Mat8::kron3(&sy, &id, &id),
        Mat8::kron3(&sz, &sx, &id),
        Mat8::kron3(&sz, &sy, &id),
        Mat8::kron3(&sz, &sz, &sx),
        Mat8::kron3(&sz, &sz, &sy),
    ];
    gammas.map(|g| g.scale(i()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(k: u8) -> CliffordElement {
        CliffordElement::gen(k)
    }

    #[test]
    fn generator_relations() {
        assert_eq!(&c(1) * &c(1), CliffordElement::scalar(ScalarExpr::int(-1)));
        let c12 = &c(1) * &c(2);
        assert_eq!(&c(2) * &c(1), -&c12);
        assert_eq!(&c12 * &c12, CliffordElement::scalar(ScalarExpr::int(-1)));
        assert_eq!(c12.to_string(), "(1)*c[1]c[2]");
    }

    #[test]
    fn traces() {
        assert_eq!(CliffordElement::one().trace(), ScalarExpr::int(8));
        assert!((&c(1) * &c(2)).trace().is_zero());
        assert_eq!((&c(3) * &c(3)).trace(), ScalarExpr::int(-8));
    }

    #[test]
    fn four_generator_trace_matches_matrices() {
        let gens = matrix_oracle::<i64>();
        let d = |a: u8, b: u8| i64::from(a == b);
        for i in 1..=4u8 {
            for j in 1..=4u8 {
                for k in 1..=4u8 {
                    for l in 1..=4u8 {
                        let t = CliffordElement::product_of(&[i, j, k, l]).trace();
                        let want = 8 * (d(i, j) * d(k, l) - d(i, k) * d(j, l) + d(i, l) * d(j, k));
                        assert_eq!(t, ScalarExpr::int(want));
                        let m = [i, j, k, l]
                            .iter()
                            .fold(Mat8::identity(), |acc, &g| &acc * &gens[g as usize - 1]);
                        assert_eq!(m.trace(), Complex::new(want, 0));
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_matrices_anticommute() {
        let gens = matrix_oracle::<i64>();
        for j in 0..6 {
            for k in 0..6 {
                let ac = &(&gens[j] * &gens[k]) + &(&gens[k] * &gens[j]);
                let want = if j == k {
                    Mat8::identity().scale(Complex::new(-2, 0))
                } else {
                    Mat8::zero()
                };
                assert_eq!(ac, want);
            }
        }
        assert_eq!(Mat8::<i64>::identity().trace(), Complex::new(8, 0));
    }
}
