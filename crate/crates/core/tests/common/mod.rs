//! Shared helpers for the integration tests: seeded random instantiation of
//! atoms and random exact objects.
#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wres_core::scalars::{Atom, FuncBase, GaussRational, GeomKind, ScalarExpr};

/// Random real value per atom, fixed once drawn. Undifferentiated `f`, `h`,
/// `u` stay in `[0.5, 2]` so negative powers are harmless.
pub struct Instantiation {
    rng: RefCell<ChaCha8Rng>,
    values: RefCell<HashMap<Atom, Complex<f64>>>,
}

impl Instantiation {
    pub fn new(seed: u64) -> Self {
        Instantiation {
            rng: RefCell::new(ChaCha8Rng::seed_from_u64(seed)),
            values: RefCell::new(HashMap::new()),
        }
    }

    pub fn value(&self, a: &Atom) -> Complex<f64> {
        if let Some(v) = self.values.borrow().get(a) {
            return *v;
        }
        let v = match a {
            Atom::Geom(GeomKind::Pi, _) => PI,
            Atom::Geom(GeomKind::Omega4, _) => 8.0 * PI * PI / 3.0,
            Atom::Geom(GeomKind::AreaS6, _) => PI.powi(3),
            Atom::Func(FuncBase::F | FuncBase::H | FuncBase::U, d) if d.is_empty() => {
                self.rng.borrow_mut().gen_range(0.5..2.0)
            }
            _ => self.rng.borrow_mut().gen_range(-1.0..1.0),
        };
        let v = Complex::new(v, 0.0);
        self.values.borrow_mut().insert(*a, v);
        v
    }

    pub fn eval(&self, e: &ScalarExpr) -> Complex<f64> {
        e.eval(&|a| self.value(a))
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_gauss(rng: &mut ChaCha8Rng) -> GaussRational {
    let re = GaussRational::ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    let im = GaussRational::ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    &re + &(&im * &GaussRational::i())
}

/// Small random polynomial in a few atoms.
pub fn small_expr(rng: &mut ChaCha8Rng) -> ScalarExpr {
    let atoms = [
        ScalarExpr::f(),
        ScalarExpr::h(),
        ScalarExpr::d(FuncBase::F, &[1]),
        ScalarExpr::d(FuncBase::H, &[2, 3]),
        ScalarExpr::geom(GeomKind::ScalarCurvature),
    ];
    let mut acc = ScalarExpr::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut t = ScalarExpr::constant(small_gauss(rng));
        for _ in 0..rng.gen_range(0..=2) {
            t = &t * &atoms[rng.gen_range(0..atoms.len())];
        }
        acc += &t;
    }
    acc
}

pub fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}
