//! Exact Shapley coalition weights `s!(n-1-s)!/n!`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn check_domain(n: usize, s: usize) -> Result<()> {
    if n == 0 || s >= n {
        return Err(Error::Domain(format!(
            "weight needs n >= 1 and 0 <= s <= n-1, got n={n}, s={s}"
        )));
    }
    Ok(())
}

fn factorial(k: usize) -> BigUint {
    (1..=k as u64).fold(BigUint::one(), |acc, x| acc * x)
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// `s!(n-1-s)!/n!`, the weight of one coalition of size `s` not containing the
/// player.
pub fn shapley_weight(n: usize, s: usize) -> Result<BigRational> {
    check_domain(n, s)?;
    let num = factorial(s) * factorial(n - 1 - s);
    Ok(BigRational::new(
        BigInt::from(num),
        BigInt::from(factorial(n)),
    ))
}

/// The alternating sum `sum_l C(n-1-s, l) (-1)^l / (l+s+1)`, i.e. the Beta
/// integral `int_0^1 t^s (1-t)^(n-1-s) dt`, evaluated term by term in exact
/// arithmetic. It equals [`shapley_weight`] identically.
pub fn beta_weight_identity(n: usize, s: usize) -> Result<BigRational> {
    check_domain(n, s)?;
    let tail = n - 1 - s;
    let mut acc = BigRational::zero();
    for l in 0..=tail {
        let term = BigRational::new(BigInt::from(binomial(tail, l)), BigInt::from(l + s + 1));
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// All weights for an `n`-player game, via `w(s+1) = w(s) (s+1)/(n-1-s)`.
pub fn weight_table(n: usize) -> Vec<BigRational> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(n);
    let mut w = BigRational::new(BigInt::one(), BigInt::from(n));
    out.push(w.clone());
    for s in 0..n - 1 {
        w = w * BigRational::new(BigInt::from(s + 1), BigInt::from(n - 1 - s));
        out.push(w.clone());
    }
    out
}

/// [`weight_table`] converted to `f64`, one conversion per entry.
pub fn weight_table_f64(n: usize) -> Vec<f64> {
    use num_traits::ToPrimitive;
    weight_table(n)
        .iter()
        .map(|w| w.to_f64().unwrap_or(0.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn weight_examples() {
        assert_eq!(shapley_weight(3, 1).unwrap(), r(1, 6));
        assert_eq!(shapley_weight(7, 0).unwrap(), r(1, 7));
        assert_eq!(shapley_weight(7, 3).unwrap(), r(1, 140));
        assert!(shapley_weight(3, 3).is_err());
        assert!(shapley_weight(0, 0).is_err());
    }

    #[test]
    fn beta_identity_examples() {
        assert_eq!(beta_weight_identity(3, 1).unwrap(), r(1, 6));
        for n in 1..10 {
            assert_eq!(beta_weight_identity(n, n - 1).unwrap(), r(1, n as i64));
        }
        assert_eq!(
            beta_weight_identity(20, 7).unwrap(),
            shapley_weight(20, 7).unwrap()
        );
        assert!(beta_weight_identity(4, 4).is_err());
    }

    #[test]
    fn beta_identity_holds_exactly_up_to_twenty() {
        for n in 1..=20 {
            for s in 0..n {
                assert_eq!(
                    beta_weight_identity(n, s).unwrap(),
                    shapley_weight(n, s).unwrap()
                );
            }
        }
    }

    #[test]
    fn weights_over_all_coalitions_sum_to_one() {
        for n in 1..=20 {
            let total = (0..n).fold(BigRational::zero(), |acc, s| {
                acc + BigRational::from_integer(binomial(n - 1, s).into())
                    * shapley_weight(n, s).unwrap()
            });
            assert_eq!(total, BigRational::one());
        }
    }

    #[test]
    fn table_matches_factorial_definition() {
        for n in 1..=24 {
            let t = weight_table(n);
            for (s, w) in t.iter().enumerate() {
                assert_eq!(w, &shapley_weight(n, s).unwrap());
            }
        }
    }
}
