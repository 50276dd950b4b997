mod common;

use num_complex::Complex;
use num_traits::Float;
use rand::Rng;
use wres_core::boundary::{boundary_symbols, SliceExpr};
use wres_core::interior::{conformal_density, forced_density};
use wres_core::scalars::{Atom, FuncBase, GeomKind};
use wres_core::specialize::Specialization;
use wres_core::symbols::NORMAL;

use common::{close, rng};

const TOL: f64 = 1e-9;

/// Value and first two derivatives of a function at the point.
struct Jet<T> {
    v: T,
    d: [T; 6],
    dd: [[T; 6]; 6],
}

impl<T: Float> Jet<T> {
    #[allow(clippy::needless_range_loop)]
    fn random(r: &mut impl Rng) -> Self {
        let c = |x: f64| T::from(x).unwrap();
        let mut dd = [[T::zero(); 6]; 6];
        for j in 0..6 {
            for k in j..6 {
                let x = c(r.gen_range(-1.0..1.0));
                dd[j][k] = x;
                dd[k][j] = x;
            }
        }
        Jet {
            v: c(r.gen_range(0.5..2.0)),
            d: std::array::from_fn(|_| c(r.gen_range(-1.0..1.0))),
            dd,
        }
    }

    /// `u^p` by the chain rule.
    fn pow(&self, p: i32) -> Self {
        let pt = T::from(p).unwrap();
        let pm = T::from(p - 1).unwrap();
        let d1 = pt * self.v.powi(p - 1);
        let d2 = pt * pm * self.v.powi(p - 2);
        Jet {
            v: self.v.powi(p),
            d: std::array::from_fn(|j| d1 * self.d[j]),
            dd: std::array::from_fn(|j| std::array::from_fn(|k| d2 * self.d[j] * self.d[k] + d1 * self.dd[j][k])),
        }
    }

    fn mul(&self, o: &Jet<T>) -> Self {
        Jet {
            v: self.v * o.v,
            d: std::array::from_fn(|j| self.d[j] * o.v + self.v * o.d[j]),
            dd: std::array::from_fn(|j| {
                std::array::from_fn(|k| {
                    self.dd[j][k] * o.v + self.d[j] * o.d[k] + self.d[k] * o.d[j] + self.v * o.dd[j][k]
                })
            }),
        }
    }

    fn at(&self, idx: &[u8]) -> T {
        match idx {
            [] => self.v,
            [j] => self.d[*j as usize - 1],
            [j, k] => self.dd[*j as usize - 1][*k as usize - 1],
            _ => panic!("jet only carries two derivatives"),
        }
    }
}

fn assign<'a, T: Float>(f: &'a Jet<T>, h: &'a Jet<T>, u: Option<&'a Jet<T>>, s: T) -> impl Fn(&Atom) -> Complex<T> + 'a {
    move |a: &Atom| {
        let re = match a {
            Atom::Func(FuncBase::F, d) => f.at(d.indices()),
            Atom::Func(FuncBase::H, d) => h.at(d.indices()),
            Atom::Func(FuncBase::U, d) => u.expect("u only under a specialization").at(d.indices()),
            Atom::Geom(GeomKind::ScalarCurvature, _) => s,
            other => panic!("unexpected atom {other:?} in a density"),
        };
        Complex::new(re, T::zero())
    }
}

/// `−⅙ s (fh)⁻⁴ + 5 (fh)⁻⁶ |∇(fh)|² − 5/3 (fh)⁻⁵ Δ(fh)`, straight from the
/// jets.
fn conformal_oracle<T: Float>(f: &Jet<T>, h: &Jet<T>, s: T) -> T {
    let phi = f.mul(h);
    let grad2 = phi.d.iter().fold(T::zero(), |acc, &x| acc + x * x);
    let lap = (0..6).fold(T::zero(), |acc, j| acc + phi.dd[j][j]);
    let c = |x: f64| T::from(x).unwrap();
    c(-1.0 / 6.0) * s * phi.v.powi(-4) + c(5.0) * phi.v.powi(-6) * grad2 - c(5.0 / 3.0) * phi.v.powi(-5) * lap
}

#[test]
fn forced_density_equals_the_conformal_change_formula() {
    let exact = forced_density(None).unwrap();
    assert_eq!(exact, conformal_density());
    let mut r = rng(31);
    for _ in 0..100 {
        let (f, h) = (Jet::<f64>::random(&mut r), Jet::<f64>::random(&mut r));
        let s = r.gen_range(-1.0..1.0);
        let got = exact.eval(&assign(&f, &h, None, s));
        let want = Complex::new(conformal_oracle(&f, &h, s), 0.0);
        assert!(close(got, want, TOL), "{got} vs {want}");
    }
}

#[test]
fn conformal_oracle_runs_in_single_precision() {
    let exact = forced_density(None).unwrap();
    let mut r = rng(32);
    let (f, h) = (Jet::<f32>::random(&mut r), Jet::<f32>::random(&mut r));
    let got = exact.eval(&assign(&f, &h, None, 0.25f32));
    let want = conformal_oracle(&f, &h, 0.25f32);
    assert!((got.re - want).abs() <= 1e-3 * (1.0 + want.abs()));
}

#[test]
fn substitute_then_compute_equals_compute_then_substitute() {
    let general = forced_density(None).unwrap();
    for sp in [Specialization::Trivial, Specialization::Reciprocal, Specialization::Powers { p: 3, q: -2 }] {
        assert_eq!(forced_density(Some(sp)).unwrap(), sp.apply(&general).unwrap(), "{sp}");
    }
    let (p, q) = (3, -2);
    let special = forced_density(Some(Specialization::Powers { p, q })).unwrap();
    let mut r = rng(33);
    for _ in 0..100 {
        let u = Jet::<f64>::random(&mut r);
        let (f, h) = (u.pow(p), u.pow(q));
        let s = r.gen_range(-1.0..1.0);
        let a = general.eval(&assign(&f, &h, None, s));
        let b = special.eval(&assign(&f, &h, Some(&u), s));
        assert!(close(a, b, TOL), "{a} vs {b}");
    }
}

#[test]
fn boundary_integration_by_parts_on_the_symbols() {
    // ∫tr[∂π⁺σ·∂σ′] = −∫tr[π⁺σ·∂²σ′], as used to rewrite case a.III
    let sym = boundary_symbols(None).unwrap();
    for (left, right) in [(&sym.sigma2, &sym.sigma2), (&sym.sigma2, &sym.sigma3), (&sym.sigma3, &sym.sigma2)] {
        let a = SliceExpr::from_symbol(left).pi_plus();
        let b = SliceExpr::from_symbol(&right.derive_xi(NORMAL));
        let lhs = a.derive_t().mul(&b).trace_sphere().contour_integral().unwrap();
        let rhs = a.mul(&b.derive_t()).trace_sphere().contour_integral().unwrap();
        assert!(!lhs.is_zero());
        assert_eq!(lhs, -rhs);
    }
}
