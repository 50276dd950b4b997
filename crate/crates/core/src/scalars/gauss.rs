//! Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact element of ℚ(i). Both parts are reduced `BigRational`s, so
/// the representation is canonical and structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    re: BigRational,
    im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `num/den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Integer power; negative exponents invert. Panics on `0^k` with `k < 0`.
    pub fn powi(&self, k: i32) -> Self {
        let base = if k < 0 {
            self.inv().expect("zero to a negative power")
        } else {
            self.clone()
        };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i32) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// True when the leading sign (real part, else imaginary part) is negative.
    pub fn is_negative_like(&self) -> bool {
        if !self.re.is_zero() {
            self.re.is_negative()
        } else {
            self.im.is_negative()
        }
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussRational {
    fn from(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Add for GaussRational {
    type Output = GaussRational;
    fn add(self, o: GaussRational) -> GaussRational {
        GaussRational::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, o: &GaussRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Sub for GaussRational {
    type Output = GaussRational;
    fn sub(self, o: GaussRational) -> GaussRational {
        GaussRational::new(self.re - o.re, self.im - o.im)
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational::new(&self.re * &o.re, BigRational::zero());
        }
        GaussRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Mul for GaussRational {
    type Output = GaussRational;
    fn mul(self, o: GaussRational) -> GaussRational {
        &self * &o
    }
}

impl Div for GaussRational {
    type Output = GaussRational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: GaussRational) -> GaussRational {
        &self * &o.inv().expect("division by zero")
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Text form: `3/2`, `-1/4i`, `1/2+3i`, `i`, `-i`.
impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |r: &BigRational| -> String {
            if r.is_one() {
                "i".to_string()
            } else if (-r).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", fmt_rational(r))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                let im = im_part(&self.im);
                if im.starts_with('-') {
                    write!(f, "{}{}", fmt_rational(&self.re), im)
                } else {
                    write!(f, "{}+{}", fmt_rational(&self.re), im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Gaussian rational literal `{0}`")]
pub struct ParseGaussError(pub String);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn parse_imag(s: &str) -> Option<BigRational> {
    let body = s.strip_suffix('i')?;
    match body {
        "" | "+" => Some(BigRational::one()),
        "-" => Some(-BigRational::one()),
        _ => parse_rational(body),
    }
}

impl FromStr for GaussRational {
    type Err = ParseGaussError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        if !t.ends_with('i') {
            return parse_rational(&t).map(Self::from).ok_or_else(err);
        }
        // split at the last sign that is not the leading one
        let split = t
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => {
                let re = parse_rational(&t[..k]).ok_or_else(err)?;
                let im = parse_imag(&t[k..]).ok_or_else(err)?;
                Ok(Self::new(re, im))
            }
            None => Ok(Self::new(
                BigRational::zero(),
                parse_imag(&t).ok_or_else(err)?,
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussRational::i();
        assert_eq!(&i * &i, -GaussRational::one());
        assert_eq!(GaussRational::i_pow(-1), -GaussRational::i());
    }

    #[test]
    fn inverse_round_trips() {
        let z: GaussRational = "3/2-5/7i".parse().unwrap();
        assert_eq!(&z * &z.inv().unwrap(), GaussRational::one());
        assert!(GaussRational::zero().inv().is_none());
    }

    #[test]
    fn display_and_parse_agree() {
        for s in ["0", "-3/8", "i", "-i", "1/2+3i", "-1/2-3/4i", "22/3", "5i"] {
            let z: GaussRational = s.parse().unwrap();
            assert_eq!(z.to_string(), s);
        }
        assert!("1/0".parse::<GaussRational>().is_err());
        assert!("abc".parse::<GaussRational>().is_err());
    }

    #[test]
    fn reduced_form_is_canonical() {
        assert_eq!(GaussRational::ratio(6, -8), GaussRational::ratio(-3, 4));
        assert_eq!(GaussRational::ratio(6, -8).to_string(), "-3/4");
    }
}
