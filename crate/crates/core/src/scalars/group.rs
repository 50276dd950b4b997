//! Regrouping of expanded expressions into gradient and Laplacian forms for
//! display. Equality checks never use this output; it only has to parse back
//! to the same canonical expression.

use std::collections::BTreeMap;

use num_traits::One;

use super::atom::{Atom, Deriv, FuncBase};
use super::expr::{Monomial, ScalarExpr};
use super::gauss::GaussRational;
use crate::DIM;

/// Writes `m` with `f^a h^b` collapsed to `(fh)^min(a,b)` times the leftover.
pub fn fmt_monomial(m: &Monomial) -> String {
    let a = m.power_of(&Atom::F);
    let b = m.power_of(&Atom::H);
    let k = if a != 0 && b != 0 { a.min(b) } else { 0 };
    let mut parts = Vec::new();
    if k != 0 {
        parts.push(if k == 1 {
            "fh".to_string()
        } else {
            format!("(fh)^{k}")
        });
    }
    for &(atom, p) in m.factors() {
        let p = match atom {
            Atom::F => p - k,
            Atom::H => p - k,
            _ => p,
        };
        match p {
            0 => {}
            1 => parts.push(atom.to_string()),
            _ => parts.push(format!("{atom}^{p}")),
        }
    }
    parts.join("*")
}

/// Appends `c * m * shape` to `out` with a leading ` + ` or ` - ` separator.
fn push_term(out: &mut String, c: &GaussRational, m: &Monomial, shape: &str) {
    let neg = c.is_real() && c.is_negative_like();
    let mag = if neg { -c } else { c.clone() };
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let mut parts = Vec::new();
    if !mag.is_one() {
        parts.push(if mag.is_real() {
            mag.to_string()
        } else {
            format!("({mag})")
        });
    }
    let ms = fmt_monomial(m);
    if !ms.is_empty() {
        parts.push(ms);
    }
    if !shape.is_empty() {
        parts.push(shape.to_string());
    }
    if parts.is_empty() {
        parts.push("1".to_string());
    }
    out.push_str(&parts.join("*"));
}

fn push_expr(out: &mut String, e: &ScalarExpr, shape: &str) {
    for (m, c) in e.terms() {
        push_term(out, c, m, shape);
    }
}

enum Shape {
    Pair(FuncBase, FuncBase, u8),
    Lap(FuncBase, u8),
}

/// Splits a monomial into its derivative pattern and the derivative-free rest.
fn classify(m: &Monomial) -> Option<(Shape, Monomial)> {
    let mut derived = Vec::new();
    let mut rest = Monomial::one();
    for &(a, p) in m.factors() {
        match a {
            Atom::Func(b, d) if !d.is_empty() => derived.push((b, d, p)),
            _ => rest = rest.with_factor(a, p),
        }
    }
    let single = |d: &Deriv| (d.order() == 1).then(|| d.indices()[0]);
    let shape = match derived.as_slice() {
        [(b, d, 2)] => Shape::Pair(*b, *b, single(d)?),
        [(b1, d1, 1), (b2, d2, 1)] => {
            let (j1, j2) = (single(d1)?, single(d2)?);
            if j1 != j2 {
                return None;
            }
            Shape::Pair(*b1, *b2, j1)
        }
        [(b, d, 1)] if d.order() == 2 && d.indices()[0] == d.indices()[1] => {
            Shape::Lap(*b, d.indices()[0])
        }
        _ => return None,
    };
    Some((shape, rest))
}

type Family = BTreeMap<u8, GaussRational>;

fn complete(fam: &Family) -> Option<GaussRational> {
    let c = fam.get(&1)?;
    (fam.len() == DIM && fam.values().all(|x| x == c)).then(|| c.clone())
}

/// Grouped text for `e`: curvature and plain terms first, then gradient
/// quadratics, then Laplacians, then anything ungroupable in expanded form.
pub fn group_for_display(e: &ScalarExpr) -> String {
    let mut plain = ScalarExpr::zero();
    let mut pairs: BTreeMap<(Monomial, FuncBase, FuncBase), Family> = BTreeMap::new();
    let mut laps: BTreeMap<(Monomial, FuncBase), Family> = BTreeMap::new();
    let mut residue = ScalarExpr::zero();

    for (m, c) in e.terms() {
        if !m.factors().iter().any(|(a, _)| matches!(a, Atom::Func(_, d) if !d.is_empty())) {
            plain.add_term(m.clone(), c.clone());
            continue;
        }
        match classify(m) {
            Some((Shape::Pair(b1, b2, j), rest)) => {
                pairs.entry((rest, b1, b2)).or_default().insert(j, c.clone());
            }
            Some((Shape::Lap(b, j), rest)) => {
                laps.entry((rest, b)).or_default().insert(j, c.clone());
            }
            None => residue.add_term(m.clone(), c.clone()),
        }
    }

    let mut quad: BTreeMap<(FuncBase, FuncBase), ScalarExpr> = BTreeMap::new();
    for ((rest, b1, b2), fam) in pairs {
        match complete(&fam) {
            Some(c) => quad
                .entry((b1, b2))
                .or_default()
                .add_term(rest, c),
            None => {
                for (j, c) in fam {
                    let m = rest.mul(&pair_monomial(b1, b2, j));
                    residue.add_term(m, c);
                }
            }
        }
    }
    let mut lap: BTreeMap<FuncBase, ScalarExpr> = BTreeMap::new();
    for ((rest, b), fam) in laps {
        match complete(&fam) {
            Some(c) => lap.entry(b).or_default().add_term(rest, c),
            None => {
                for (j, c) in fam {
                    residue.add_term(rest.with_factor(Atom::func(b, &[j, j]), 1), c);
                }
            }
        }
    }

    let mut out = String::new();
    push_expr(&mut out, &plain, "");
    push_quadratic(&mut out, quad);
    for (b, coef) in lap {
        push_expr(&mut out, &coef, &format!("lap[{}]", b.name()));
    }
    push_expr(&mut out, &residue, "");
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn pair_monomial(b1: FuncBase, b2: FuncBase, j: u8) -> Monomial {
    Monomial::atom(Atom::func(b1, &[j]), 1).with_factor(Atom::func(b2, &[j]), 1)
}

/// Quadratic forms in `∇f, ∇h` are rewritten in the basis
/// `|∇(fh)|², g(∇h,∇(fh)), |∇h|²` using `∇f = (∇(fh) − f∇h)/h`.
fn push_quadratic(out: &mut String, quad: BTreeMap<(FuncBase, FuncBase), ScalarExpr>) {
    let only_fh = quad
        .keys()
        .all(|(a, b)| *a != FuncBase::U && *b != FuncBase::U);
    if !only_fh {
        for ((b1, b2), coef) in quad {
            let shape = if b1 == b2 {
                format!("|grad[{}]|^2", b1.name())
            } else {
                format!("g(grad[{}],grad[{}])", b1.name(), b2.name())
            };
            push_expr(out, &coef, &shape);
        }
        return;
    }
    let get = |a, b| quad.get(&(a, b)).cloned().unwrap_or_default();
    let a = get(FuncBase::F, FuncBase::F);
    // the F,H pair carries both cross terms, i.e. 2B
    let b2 = get(FuncBase::F, FuncBase::H);
    let c = get(FuncBase::H, FuncBase::H);
    let f = ScalarExpr::f();
    let h_inv = ScalarExpr::fh_monomial(0, -1);
    let h_inv2 = ScalarExpr::fh_monomial(0, -2);
    let pp = &a * &h_inv2;
    let pq = &(&(&a * &h_inv2) * &f).scale(&GaussRational::from_int(-2)) + &(&b2 * &h_inv);
    let qq = &(&(&(&a * &h_inv2) * &f) * &f) - &(&(&b2 * &h_inv) * &f);
    let qq = &qq + &c;
    push_expr(out, &pp, "|grad[fh]|^2");
    push_expr(out, &pq, "g(grad[h],grad[fh])");
    push_expr(out, &qq, "|grad[h]|^2");
}
