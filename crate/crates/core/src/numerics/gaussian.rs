use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ring::{ExactDiv, Field, Ring};
use crate::error::{Error, Result};

/// Element of Q(i). Exact complex matrix entries live here.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: <BigRational as Zero>::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        GaussianRational::real(BigRational::new(num.into(), den.into()))
    }

    pub fn i() -> Self {
        GaussianRational::from_ints(0, 1)
    }

    pub fn is_real(&self) -> bool {
        Zero::is_zero(&self.im)
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// |z|² = re² + im², always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

/// Correctly scaled conversion even when numerator and denominator overflow
/// f64 individually.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = q.numer();
    let d = q.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    let (n2, d2) = if shift > 0 {
        (n.clone(), d.clone() << (shift as usize))
    } else {
        (n.clone() << ((-shift) as usize), d.clone())
    };
    let mantissa = BigRational::new(n2, d2).to_f64().unwrap_or(f64::NAN);
    mantissa * 2f64.powi(shift as i32)
}

/// Exact rational from a decimal, fraction or integer literal:
/// "3", "-3/2", "0.125", "1e-3", "2.5E2".
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if Zero::is_zero(&d) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(10.into());
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if negative { -value } else { value })
}

/// "p/q" or "p" for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::from_ints(0, 0)
    }
    fn one() -> Self {
        GaussianRational::from_ints(1, 0)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }
    fn sub(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }
    fn mul(&self, other: &Self) -> Self {
        match (Zero::is_zero(&self.im), Zero::is_zero(&other.im)) {
            (true, true) => GaussianRational::real(&self.re * &other.re),
            (true, false) => GaussianRational {
                re: &self.re * &other.re,
                im: &self.re * &other.im,
            },
            (false, true) => GaussianRational {
                re: &self.re * &other.re,
                im: &self.im * &other.re,
            },
            (false, false) => GaussianRational {
                re: &self.re * &other.re - &self.im * &other.im,
                im: &self.re * &other.im + &self.im * &other.re,
            },
        }
    }
    fn neg(&self) -> Self {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
    fn from_int(k: i64) -> Self {
        GaussianRational::from_ints(k, 0)
    }
}

impl Field for GaussianRational {
    fn inv(&self) -> Self {
        if Zero::is_zero(&self.im) {
            return GaussianRational::real(self.re.recip());
        }
        let n = self.norm_sqr();
        GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }
}

impl ExactDiv for GaussianRational {
    fn exact_div(&self, divisor: &Self) -> Self {
        self.div(divisor)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(q: BigRational) -> Self {
        GaussianRational::real(q)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            return f.write_str(&format_rational(&self.re));
        }
        let im = if self.im.abs() == BigRational::from_integer(1.into()) {
            String::new()
        } else {
            format_rational(&self.im.abs())
        };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if Zero::is_zero(&self.re) {
            let lead = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{lead}{im}i")
        } else {
            write!(f, "{}{sign}{im}i", format_rational(&self.re))
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s)
            .map(GaussianRational::real)
            .ok_or_else(|| Error::Domain(format!("not a rational literal: {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_literals() {
        assert_eq!(parse_rational("3/2"), Some(q(3, 2)));
        assert_eq!(parse_rational("-0.125"), Some(q(-1, 8)));
        assert_eq!(parse_rational("1e-3"), Some(q(1, 1000)));
        assert_eq!(parse_rational("2.5E2"), Some(q(250, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn inverse_and_conjugate() {
        let z = GaussianRational::from_ints(3, 4);
        assert_eq!(z.norm_sqr(), q(25, 1));
        assert_eq!(z.mul(&z.inv()), GaussianRational::one());
        assert_eq!(z.conj().conj(), z);
        assert_eq!(z.mul(&z.conj()), GaussianRational::real(q(25, 1)));
    }

    #[test]
    fn display() {
        assert_eq!(GaussianRational::from_frac(3, 2).to_string(), "3/2");
        assert_eq!(GaussianRational::from_ints(1, -1).to_string(), "1-i");
        assert_eq!(GaussianRational::from_ints(0, 2).to_string(), "2i");
        assert_eq!(GaussianRational::from_ints(0, -1).to_string(), "-i");
    }

    #[test]
    fn huge_rational_to_float() {
        let big = BigRational::new(BigInt::from(10).pow(400) * 3, BigInt::from(10).pow(400) * 2);
        assert_eq!(rational_to_f64(&big), 1.5);
        let tiny = BigRational::new(1.into(), BigInt::from(10).pow(320));
        assert!(rational_to_f64(&tiny) >= 0.0);
    }
}
