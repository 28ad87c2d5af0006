//! Numeric abstraction shared by the exact and floating-point code paths.
//!
//! The same algorithm text runs over `f64`, [`DoubleDouble`] and exact
//! [`BigRational`]; the rational instantiation is what lets the closed forms
//! be checked with zero tolerance.

use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::compensated::DoubleDouble;

pub trait Scalar:
    Clone
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    fn from_u64(k: u64) -> Self;
    fn to_f64(&self) -> f64;

    fn powu(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn from_u64(k: u64) -> Self {
        k as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn powu(&self, exp: u64) -> Self {
        if exp <= i32::MAX as u64 {
            self.powi(exp as i32)
        } else {
            self.powf(exp as f64)
        }
    }
}

impl Scalar for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble::ZERO
    }
    fn one() -> Self {
        DoubleDouble::ONE
    }
    fn from_ratio(r: &BigRational) -> Self {
        let hi = ToPrimitive::to_f64(r).unwrap_or(f64::NAN);
        let lo = match BigRational::from_float(hi) {
            Some(h) => ToPrimitive::to_f64(&(r - h)).unwrap_or(0.0),
            None => 0.0,
        };
        DoubleDouble { hi, lo }
    }
    fn from_u64(k: u64) -> Self {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(k)))
    }
    fn to_f64(&self) -> f64 {
        DoubleDouble::to_f64(*self)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }
    fn from_u64(k: u64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
