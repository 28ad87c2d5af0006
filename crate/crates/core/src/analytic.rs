//! Mean-field closed forms and the multilinear-extension quadrature.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{BernoulliGame, Method, ShapleyVector};
use crate::scalar::Scalar;

fn check_player<T>(probs: &[T], i: usize) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::EmptyGame);
    }
    if i >= probs.len() {
        return Err(Error::PlayerIndex {
            index: i,
            n: probs.len(),
        });
    }
    Ok(())
}

/// Mean miss probability of the other players, `(1/(n-1)) sum_{j != i} (1 - p_j)`.
pub fn qbar_as<T: Scalar>(probs: &[T], i: usize) -> Result<T> {
    check_player(probs, i)?;
    if probs.len() < 2 {
        return Err(Error::Domain("qbar needs at least two players".into()));
    }
    let sum = probs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .fold(T::zero(), |acc, (_, p)| acc + (T::one() - p.clone()));
    Ok(sum / T::from_u64(probs.len() as u64 - 1))
}

pub fn qbar(probs: &[f64], i: usize) -> Result<f64> {
    qbar_as(probs, i)
}

/// `(p_i/n)(1 - q̄^n)/(1 - q̄)`: the binomial-weighted sum with the others
/// replaced by their mean miss probability. Returns `p_i` when `q̄ = 1`.
pub fn shapley_binomial_closed_as<T: Scalar + PartialOrd>(probs: &[T], i: usize) -> Result<T> {
    check_player(probs, i)?;
    let p_i = probs[i].clone();
    if probs.len() == 1 {
        return Ok(p_i);
    }
    let q = qbar_as(probs, i)?;
    if q >= T::one() {
        return Ok(p_i);
    }
    let n = probs.len() as u64;
    Ok(p_i / T::from_u64(n) * (T::one() - q.powu(n)) / (T::one() - q))
}

pub fn shapley_binomial_closed(probs: &[f64], i: usize) -> Result<f64> {
    shapley_binomial_closed_as(probs, i)
}

/// `p_i sum_{k=0}^{n-1} k!(n-1-k)!/n! q̄^k`, without the subset counts.
/// Kept for comparison; it does not reduce to the homogeneous value.
pub fn shapley_binomial_literal(probs: &[f64], i: usize) -> Result<f64> {
    check_player(probs, i)?;
    let n = probs.len();
    if n == 1 {
        return Ok(probs[i]);
    }
    let q = qbar(probs, i)?;
    let mut weight = 1.0 / n as f64;
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 0..n {
        sum += weight * power;
        if k + 1 < n {
            weight *= (k + 1) as f64 / (n - 1 - k) as f64;
            power *= q;
        }
    }
    Ok(probs[i] * sum)
}

/// Right-endpoint rule with `nodes` points for
/// `p_i ∫_0^1 prod_{j != i}(1 - t p_j) dt`.
pub fn shapley_riemann(probs: &[f64], i: usize, nodes: usize) -> Result<f64> {
    check_player(probs, i)?;
    if nodes == 0 {
        return Err(Error::Domain("riemann sum needs at least one node".into()));
    }
    if probs[i] == 0.0 {
        return Ok(0.0);
    }
    let big_n = nodes as f64;
    let heights: Vec<f64> = (1..=nodes)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 / big_n;
            probs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &p)| 1.0 - t * p)
                .product::<f64>()
        })
        .collect();
    Ok(probs[i] * heights.iter().sum::<f64>() / big_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BinomialVariant {
    #[default]
    Closed,
    Literal,
}

pub fn binomial_vector(game: &BernoulliGame, variant: BinomialVariant) -> Result<ShapleyVector> {
    let probs = game.probs();
    let values = (0..probs.len())
        .map(|i| match variant {
            BinomialVariant::Closed => shapley_binomial_closed(probs, i),
            BinomialVariant::Literal => shapley_binomial_literal(probs, i),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShapleyVector::new(values, Method::BinomialSum))
}

/// Riemann estimate for every player; `nodes` defaults to `n`.
pub fn riemann_vector(game: &BernoulliGame, nodes: Option<usize>) -> Result<ShapleyVector> {
    let probs = game.probs();
    let nodes = nodes.unwrap_or(probs.len());
    let values = (0..probs.len())
        .map(|i| shapley_riemann(probs, i, nodes))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShapleyVector::new(values, Method::Riemann))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::shapley_homogeneous_as;
    use crate::probability::Probability;
    use num_rational::BigRational;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    const EX2: [f64; 3] = [0.5, 1.0 / 3.0, 1.0 / 6.0];
    const TABLE: [f64; 7] = [0.2, 0.5, 0.7, 0.3, 0.1, 0.9, 0.4];

    #[test]
    fn qbar_examples() {
        assert!(close(qbar(&EX2, 0).unwrap(), 0.75, 1e-15));
        assert!(close(qbar(&[0.3; 5], 2).unwrap(), 0.7, 1e-15));
        assert!(close(qbar(&TABLE, 4).unwrap(), 0.5, 1e-15));
        assert!(qbar(&[0.3], 0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert!(close(
            shapley_binomial_closed(&EX2, 0).unwrap(),
            0.385417,
            5e-7
        ));
        assert!(close(
            shapley_binomial_closed(&[0.02, 0.03], 0).unwrap(),
            0.0197,
            1e-15
        ));
        assert_eq!(shapley_binomial_closed(&[0.4, 0.0], 0).unwrap(), 0.4);
    }

    #[test]
    fn closed_form_is_exact_on_homogeneous_games() {
        for n in 1..=50usize {
            let p = Probability::new(3, 7).unwrap();
            let probs = vec![p.ratio().clone(); n];
            let closed: BigRational = shapley_binomial_closed_as(&probs, 0).unwrap();
            let homogeneous: BigRational = shapley_homogeneous_as(n, &p).unwrap();
            assert_eq!(closed, homogeneous, "n = {n}");
        }
    }

    #[test]
    fn literal_examples() {
        assert_eq!(shapley_binomial_literal(&[0.7], 0).unwrap(), 0.7);
        assert!(close(
            shapley_binomial_literal(&[0.5; 6], 0).unwrap(),
            0.0984375,
            1e-15
        ));
        assert!(close(
            shapley_binomial_literal(&EX2, 0).unwrap(),
            0.322917,
            5e-7
        ));
    }

    #[test]
    fn riemann_examples() {
        let two = [0.4, 0.6];
        assert!(close(shapley_riemann(&two, 0, 1000).unwrap(), 0.28, 2e-4));
        assert!(close(
            shapley_riemann(&two, 0, 1_000_000).unwrap(),
            0.28,
            1e-6
        ));
        assert_eq!(shapley_riemann(&[0.0, 0.5], 0, 10).unwrap(), 0.0);
        assert!(close(
            shapley_riemann(&EX2, 0, 10_000).unwrap(),
            0.384259,
            1e-4
        ));
        assert!(shapley_riemann(&EX2, 0, 0).is_err());
    }

    #[test]
    fn vectors_default_to_n_nodes() {
        let game = BernoulliGame::from_fractions(&[(1, 2), (1, 3), (1, 6)]).unwrap();
        let v = riemann_vector(&game, None).unwrap();
        assert!(close(v[0], shapley_riemann(&EX2, 0, 3).unwrap(), 0.0));
        let b = binomial_vector(&game, BinomialVariant::Literal).unwrap();
        assert!(close(b[0], 0.322917, 5e-7));
    }
}
