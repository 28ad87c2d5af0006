use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A membership probability held as a reduced fraction.
///
/// The `f64` view is derived from the fraction and is never the source of
/// truth. Values built from binary floats are flagged as inexact so that
/// exact-mode rationalization can refuse them.
#[derive(Debug, Clone, PartialEq)]
pub struct Probability {
    value: BigRational,
    float_view: f64,
    exact: bool,
}

impl Probability {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ParseProbability {
                input: format!("{num}/{den}"),
                reason: "zero denominator".into(),
            });
        }
        Self::from_ratio(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_ratio(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::ProbabilityOutOfRange(value.to_string()));
        }
        let float_view = value.to_f64().unwrap_or(f64::NAN);
        Ok(Self {
            value,
            float_view,
            exact: true,
        })
    }

    /// Wraps a binary float. The stored fraction is the float's exact dyadic
    /// value, marked inexact.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::ProbabilityOutOfRange(x.to_string()));
        }
        let value = BigRational::from_float(x).expect("finite float");
        Ok(Self {
            value,
            float_view: x,
            exact: false,
        })
    }

    pub fn zero() -> Self {
        Self {
            value: BigRational::zero(),
            float_view: 0.0,
            exact: true,
        }
    }

    pub fn one() -> Self {
        Self {
            value: BigRational::one(),
            float_view: 1.0,
            exact: true,
        }
    }

    pub fn ratio(&self) -> &BigRational {
        &self.value
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn as_f64(&self) -> f64 {
        self.float_view
    }

    /// True when the value came from exact text or integer arithmetic.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `1 - p`, exactly.
    pub fn complement(&self) -> Self {
        let value = BigRational::one() - &self.value;
        let float_view = value.to_f64().unwrap_or(f64::NAN);
        Self {
            value,
            float_view,
            exact: self.exact,
        }
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.is_integer() {
            write!(f, "{}", self.value.numer())
        } else {
            write!(f, "{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

impl FromStr for Probability {
    type Err = Error;

    /// Accepts `a/b`, plain integers and finite decimals (optionally with an
    /// exponent). Decimals are read as `digits / 10^d`, never through `f64`.
    fn from_str(s: &str) -> Result<Self> {
        let raw = s;
        let s = s.trim();
        let fail = |reason: &str| Error::ParseProbability {
            input: raw.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(fail("empty"));
        }
        let value = if let Some((a, b)) = s.split_once('/') {
            let num = parse_unsigned(a.trim()).ok_or_else(|| fail("bad numerator"))?;
            let den = parse_unsigned(b.trim()).ok_or_else(|| fail("bad denominator"))?;
            if den.is_zero() {
                return Err(fail("zero denominator"));
            }
            BigRational::new(num, den)
        } else {
            parse_decimal(s).ok_or_else(|| fail("not a decimal or fraction"))?
        };
        Self::from_ratio(value)
    }
}

fn parse_unsigned(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num = parse_unsigned(&digits)?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * ten.pow(scale as u32))
    } else {
        BigRational::new(num, ten.pow((-scale) as u32))
    };
    Some(value)
}

/// Least common multiple of the denominators of a set of fractions, by
/// repeated gcd. `limit` caps the result.
pub(crate) fn lcm_of_denominators<'a, I>(denoms: I, limit: u64) -> Result<u64>
where
    I: IntoIterator<Item = &'a BigInt>,
{
    let mut l: u64 = 1;
    for d in denoms {
        let d = d
            .to_u64()
            .filter(|&d| d <= limit)
            .ok_or(Error::DenominatorOverflow { limit })?;
        let g = l.gcd(&d);
        let next = (l as u128) * ((d / g) as u128);
        if next > limit as u128 {
            return Err(Error::DenominatorOverflow { limit });
        }
        l = next as u64;
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn parses_fractions_in_lowest_terms() {
        let p: Probability = "3/6".parse().unwrap();
        assert_eq!(p.numer(), &BigInt::from(1));
        assert_eq!(p.denom(), &BigInt::from(2));
        assert_eq!(p.to_string(), "1/2");
    }

    #[test]
    fn parses_decimals_exactly() {
        let p: Probability = "0.2".parse().unwrap();
        assert_eq!(p.ratio(), &ratio(1, 5));
        assert!(p.is_exact());
        let p: Probability = "1e-3".parse().unwrap();
        assert_eq!(p.ratio(), &ratio(1, 1000));
        let p: Probability = ".25".parse().unwrap();
        assert_eq!(p.ratio(), &ratio(1, 4));
        let p: Probability = "1".parse().unwrap();
        assert_eq!(p.to_string(), "1");
    }

    #[test]
    fn rejects_out_of_range_and_garbage() {
        assert!("7/6".parse::<Probability>().is_err());
        assert!("-0.1".parse::<Probability>().is_err());
        assert!("1/0".parse::<Probability>().is_err());
        assert!("abc".parse::<Probability>().is_err());
        assert!("".parse::<Probability>().is_err());
        assert!(Probability::from_f64(1.5).is_err());
    }

    #[test]
    fn float_view_within_one_ulp() {
        for s in ["1/3", "2/7", "0.1", "999/1000", "1/6"] {
            let p: Probability = s.parse().unwrap();
            let back = BigRational::from_float(p.as_f64()).unwrap();
            let err = (back - p.ratio()).abs().to_f64().unwrap();
            let ulp = f64::EPSILON * p.as_f64();
            assert!(err <= ulp, "{s}");
        }
    }

    #[test]
    fn floats_are_marked_inexact() {
        let p = Probability::from_f64(0.1).unwrap();
        assert!(!p.is_exact());
        assert_ne!(p.ratio(), &ratio(1, 10));
    }

    #[test]
    fn lcm_by_gcd() {
        let ds: Vec<BigInt> = [2, 3, 6].iter().map(|&d| BigInt::from(d)).collect();
        assert_eq!(lcm_of_denominators(&ds, 1 << 40).unwrap(), 6);
        let ds: Vec<BigInt> = [1 << 20, 3 << 20]
            .iter()
            .map(|&d| BigInt::from(d))
            .collect();
        assert!(lcm_of_denominators(&ds, 1 << 21).is_err());
    }
}
