//! Parser for the ASCII expression grammar used in dumps, golden files and the
//! discrepancy ledger.
//!
//! Accepts both the expanded form printed by `ScalarExpr`'s `Display` and the
//! grouped display forms `g(grad[u],grad[v])`, `|grad[u]|^2`, `lap[u]`, with
//! composites such as `(fh)^-3*f` inside the brackets.

use super::atom::{Atom, GeomKind, DERIV_CAPACITY};
use super::expr::ScalarExpr;
use super::gauss::GaussRational;
use super::ScalarError;
use crate::DIM;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected `{found}` at offset {at}")]
    Unexpected { found: String, at: usize },
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("index {0} out of range 1..=6")]
    BadIndex(i64),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(GaussRational),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            if k + 1 < chars.len() && chars[k] == '/' && chars[k + 1].is_ascii_digit() {
                k += 1;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
            }
            let mut text: String = chars[start..k].iter().collect();
            let imag = k < chars.len()
                && chars[k] == 'i'
                && !chars.get(k + 1).is_some_and(|c| c.is_ascii_alphanumeric());
            if imag {
                text.push('i');
                k += 1;
            }
            let v: GaussRational = text.parse().map_err(|_| ParseError::Unexpected {
                found: text.clone(),
                at: start,
            })?;
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().collect()), start));
        } else if "+-*/^()[],|".contains(c) {
            out.push((Tok::Sym(c), k));
            k += 1;
        } else {
            return Err(ParseError::Unexpected {
                found: c.to_string(),
                at: k,
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self.toks.get(self.pos).cloned().ok_or(ParseError::Eof)?;
        self.pos += 1;
        Ok(t.0)
    }

    fn unexpected(&self) -> ParseError {
        match self.toks.get(self.pos) {
            Some((t, at)) => ParseError::Unexpected {
                found: match t {
                    Tok::Num(v) => v.to_string(),
                    Tok::Ident(s) => s.clone(),
                    Tok::Sym(c) => c.to_string(),
                },
                at: *at,
            },
            None => ParseError::Eof,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Ident(name.to_string())) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat('-');
        match self.next()? {
            Tok::Num(v) if v.is_real() && v.re().is_integer() => {
                let n: i64 = v.re().to_integer().try_into().map_err(|_| {
                    ParseError::Unexpected {
                        found: v.to_string(),
                        at: 0,
                    }
                })?;
                Ok(if neg { -n } else { n })
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected())
            }
        }
    }

    fn index(&mut self) -> Result<u8, ParseError> {
        let n = self.int()?;
        if (1..=DIM as i64).contains(&n) {
            Ok(n as u8)
        } else {
            Err(ParseError::BadIndex(n))
        }
    }

    fn bracket_indices(&mut self) -> Result<Vec<u8>, ParseError> {
        self.expect('[')?;
        let mut v = vec![self.index()?];
        while self.eat(',') {
            v.push(self.index()?);
        }
        self.expect(']')?;
        Ok(v)
    }

    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = ScalarExpr::zero();
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = self.power()?;
        while self.eat('*') {
            let p = self.power()?;
            acc = &acc * &p;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<ScalarExpr, ParseError> {
        let base = self.primary()?;
        if self.eat('^') {
            let k = self.int()?;
            let k = i32::try_from(k).map_err(|_| ParseError::BadIndex(k))?;
            return Ok(base.pow(k)?);
        }
        Ok(base)
    }

    fn grad_arg(&mut self) -> Result<ScalarExpr, ParseError> {
        self.expect_ident("grad")?;
        self.expect('[')?;
        let e = self.expr()?;
        self.expect(']')?;
        Ok(e)
    }

    fn primary(&mut self) -> Result<ScalarExpr, ParseError> {
        match self.next()? {
            Tok::Num(v) => Ok(ScalarExpr::constant(v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('|') => {
                let u = self.grad_arg()?;
                self.expect('|')?;
                self.expect('^')?;
                if self.int()? != 2 {
                    return Err(self.unexpected());
                }
                Ok(grad_dot(&u, &u)?)
            }
            Tok::Ident(name) => self.ident(name),
            _ => {
                self.pos -= 1;
                Err(self.unexpected())
            }
        }
    }

    fn ident(&mut self, name: String) -> Result<ScalarExpr, ParseError> {
        let e = match name.as_str() {
            "i" => ScalarExpr::i(),
            "f" => ScalarExpr::f(),
            "h" => ScalarExpr::h(),
            "u" => ScalarExpr::atom(Atom::U),
            "fh" | "hf" => ScalarExpr::fh_pow(1),
            "s" => ScalarExpr::geom(GeomKind::ScalarCurvature),
            "wp" => ScalarExpr::geom(GeomKind::WarpDeriv),
            "pi" => ScalarExpr::geom(GeomKind::Pi),
            "Omega4" => ScalarExpr::geom(GeomKind::Omega4),
            "areaS6" => ScalarExpr::geom(GeomKind::AreaS6),
            "Kconn" => ScalarExpr::geom(GeomKind::ConnQuadratic),
            "R" => {
                let v = self.bracket_indices()?;
                let [a, b] = v[..] else { return Err(self.unexpected()) };
                ScalarExpr::geom(GeomKind::ricci(a, b))
            }
            "Gamma" | "sigma" => {
                let v = self.bracket_indices()?;
                let [m] = v[..] else { return Err(self.unexpected()) };
                ScalarExpr::geom(if name == "Gamma" {
                    GeomKind::Gamma(m)
                } else {
                    GeomKind::SpinConn(m)
                })
            }
            "omega" => {
                let v = self.bracket_indices()?;
                let [s, t, i] = v[..] else { return Err(self.unexpected()) };
                ScalarExpr::geom(GeomKind::FrameConn(s, t, i))
            }
            "g" => {
                if self.eat('(') {
                    let u = self.grad_arg()?;
                    self.expect(',')?;
                    let v = self.grad_arg()?;
                    self.expect(')')?;
                    grad_dot(&u, &v)?
                } else {
                    let v = self.bracket_indices()?;
                    let [a, b] = v[..] else { return Err(self.unexpected()) };
                    ScalarExpr::geom(GeomKind::metric(a, b))
                }
            }
            "lap" => {
                self.expect('[')?;
                let u = self.expr()?;
                self.expect(']')?;
                laplacian(&u)?
            }
            "d" => {
                let idx = self.bracket_indices()?;
                let target = self.primary()?;
                target.derive_multi(&idx, DERIV_CAPACITY)?
            }
            _ => return Err(ParseError::UnknownIdent(name)),
        };
        Ok(e)
    }
}

/// `g(∇u, ∇v) = Σ_j ∂_j u ∂_j v` at the normal-coordinate point.
pub fn grad_dot(u: &ScalarExpr, v: &ScalarExpr) -> Result<ScalarExpr, ScalarError> {
    let mut acc = ScalarExpr::zero();
    for j in 1..=DIM as u8 {
        acc += &(&u.derive_x_capped(j, DERIV_CAPACITY)? * &v.derive_x_capped(j, DERIV_CAPACITY)?);
    }
    Ok(acc)
}

/// `Δu = Σ_j ∂²_j u` (analyst's sign).
pub fn laplacian(u: &ScalarExpr) -> Result<ScalarExpr, ScalarError> {
    let mut acc = ScalarExpr::zero();
    for j in 1..=DIM as u8 {
        acc += &u.derive_multi(&[j, j], DERIV_CAPACITY)?;
    }
    Ok(acc)
}

/// Parses the expression grammar into canonical form.
pub fn parse_expr(src: &str) -> Result<ScalarExpr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    if p.toks.is_empty() {
        return Err(ParseError::Eof);
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(e)
}

impl std::str::FromStr for ScalarExpr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::atom::FuncBase;

    #[test]
    fn parses_expanded_form() {
        let e = parse_expr("(-3/8)*f^-4*h^-4*d[1]h*d[1]f*s").unwrap();
        assert_eq!(e.to_string(), "-3/8*f^-4*d[1]f*h^-4*d[1]h*s");
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn parses_gaussian_coefficients() {
        let e = parse_expr("(1/2+3/4i)*f - i*h + 2i").unwrap();
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn grouped_forms_expand() {
        let e = parse_expr("|grad[h]|^2").unwrap();
        let want: ScalarExpr = (1..=6u8)
            .map(|j| ScalarExpr::d(FuncBase::H, &[j]).pow(2).unwrap())
            .fold(ScalarExpr::zero(), |a, b| &a + &b);
        assert_eq!(e, want);
        let l = parse_expr("lap[h]").unwrap();
        assert_eq!(l.len(), 6);
        let g = parse_expr("g(grad[(fh)^-3],grad[fh])").unwrap();
        assert_eq!(g, grad_dot(&ScalarExpr::fh_pow(-3), &ScalarExpr::fh_pow(1)).unwrap());
    }

    #[test]
    fn derivative_prefix_on_composite() {
        let e = parse_expr("d[1]((fh)^-1)").unwrap();
        assert_eq!(e, ScalarExpr::fh_pow(-1).derive_x(1).unwrap());
        let m = parse_expr("d[6]g[1,1]").unwrap();
        assert_eq!(m.to_string(), "d[6]g[1,1]");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expr("").is_err());
        assert!(parse_expr("f +").is_err());
        assert!(parse_expr("q").is_err());
        assert!(parse_expr("d[7]f").is_err());
        assert!(parse_expr("(f+h)^-1").is_err());
    }
}
