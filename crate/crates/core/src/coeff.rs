//! Exact coefficient rings.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Exact field used for every coefficient. Zero tests must be exact, so there
/// is no floating point implementation.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn imag_unit() -> Self;

    /// Exact text, e.g. `3/2`, `-i`, `1/2+3i`.
    fn to_exact_string(&self) -> String;

    fn parse_exact(s: &str) -> Option<Self>;

    /// Complex conjugate.
    fn conj(&self) -> Self;
}

fn ratio_str<T>(r: &Ratio<T>) -> String
where
    T: Integer + Clone + Display,
{
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_ratio<T>(s: &str) -> Option<Ratio<T>>
where
    T: Integer + Clone + FromStr,
{
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: T = n.trim().parse().ok()?;
            let d: T = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Ratio::new(n, d))
        }
        None => Some(Ratio::from_integer(s.parse().ok()?)),
    }
}

impl<T> Coeff for Complex<Ratio<T>>
where
    T: Integer + Signed + Clone + Debug + Display + FromStr + From<i64> + Send + Sync + 'static,
{
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(Ratio::new(T::from(num), T::from(den)), Ratio::zero())
    }

    fn imag_unit() -> Self {
        Complex::new(Ratio::zero(), Ratio::one())
    }

    fn to_exact_string(&self) -> String {
        let (re, im) = (&self.re, &self.im);
        let im_part = |r: &Ratio<T>| -> String {
            if r.is_one() {
                "i".to_string()
            } else if (-r.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", ratio_str(r))
            }
        };
        match (re.is_zero(), im.is_zero()) {
            (true, true) => "0".to_string(),
            (false, true) => ratio_str(re),
            (true, false) => im_part(im),
            (false, false) => {
                let ims = im_part(im);
                if ims.starts_with('-') {
                    format!("{}{}", ratio_str(re), ims)
                } else {
                    format!("{}+{}", ratio_str(re), ims)
                }
            }
        }
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return None;
        }
        if let Some(body) = s.strip_suffix('i') {
            // split at the last sign that is not leading and not part of an exponent
            let bytes = body.as_bytes();
            let mut cut = None;
            for k in (1..bytes.len()).rev() {
                if bytes[k] == b'+' || bytes[k] == b'-' {
                    cut = Some(k);
                    break;
                }
            }
            let (re, im) = match cut {
                Some(k) => (parse_ratio::<T>(&body[..k])?, &body[k..]),
                None => (Ratio::zero(), body),
            };
            let im = match im {
                "" | "+" => Ratio::one(),
                "-" => -Ratio::one(),
                other => parse_ratio::<T>(other.strip_prefix('+').unwrap_or(other))?,
            };
            Some(Complex::new(re, im))
        } else {
            Some(Complex::new(parse_ratio::<T>(&s)?, Ratio::zero()))
        }
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Q = Complex<Ratio<BigInt>>;

    #[test]
    fn render_and_parse() {
        let cases = ["0", "3/2", "-7", "i", "-i", "2/3i", "1/2+3i", "-1/2-i", "5-2/7i"];
        for c in cases {
            let v = Q::parse_exact(c).unwrap();
            assert_eq!(v.to_exact_string(), c);
        }
        assert_eq!(Q::parse_exact("2/4").unwrap().to_exact_string(), "1/2");
        assert!(Q::parse_exact("1/0").is_none());
        assert!(Q::parse_exact("abc").is_none());
    }

    #[test]
    fn i_squared() {
        let i = Q::imag_unit();
        assert_eq!(i.clone() * i, -Q::one());
        let j = Complex::<Ratio<i64>>::imag_unit();
        assert_eq!(j.clone() * j.conj(), Complex::<Ratio<i64>>::one());
    }
}
