//! Ground-truth Shapley values.
//!
//! Five independent routes to the same number:
//!
//! * subset enumeration of the hitting capacity (`O(2^n)`),
//! * the generic coalition formula over a materialized [`Capacity`],
//! * the permutation average (`O(n!)`, tiny games only),
//! * regrouping by coalition size through elementary symmetric sums,
//! * the diagonal integral of the multilinear extension, in closed form.
//!
//! Every route is generic over [`Scalar`], so the `BigRational` instantiation
//! yields exact fractions.

use num_rational::BigRational;
use rayon::prelude::*;

use crate::capacity::Capacity;
use crate::compensated::DoubleDouble;
use crate::error::{Error, Result};
use crate::game::{BernoulliGame, Method, ShapleyVector};
use crate::probability::Probability;
use crate::scalar::Scalar;
use crate::symmetric::{elementary_symmetric_sums, mean_symmetric_sums};
use crate::weights::{weight_table, weight_table_f64};

pub const MAX_ENUM_PLAYERS: usize = 24;
pub const MAX_PERMUTATION_PLAYERS: usize = 8;

/// Above this size the weighted symmetric form leaves `f64` range; single
/// values use the mean recurrence and full vectors use quadrature.
pub const SYMMETRIC_WEIGHTED_MAX: usize = 512;

const LOW_BITS: usize = 10;

fn weights_as<T: Scalar>(n: usize) -> Vec<T> {
    weight_table(n).iter().map(T::from_ratio).collect()
}

/// Products `prod_{j in mask} values[j]` with popcounts, by doubling.
fn subset_products<T: Scalar>(values: &[T]) -> Vec<(T, usize)> {
    let mut table = Vec::with_capacity(1 << values.len());
    table.push((T::one(), 0));
    for v in values {
        let len = table.len();
        for s in 0..len {
            let (prod, pc) = table[s].clone();
            table.push((prod * v.clone(), pc + 1));
        }
    }
    table
}

/// `sum_{S ⊆ E\{i}} w(|S|) p_i prod_{j in S} (1 - p_j)` by explicit enumeration.
///
/// Subsets are split into a low block of up to 2^10 members and a high block;
/// each block's products come from a doubling table, so there is no division
/// and no long running product to drift. High blocks are summed in parallel
/// and reduced in index order, so the result does not depend on the thread
/// count.
pub fn shapley_exact_enum_as<T: Scalar>(game: &BernoulliGame, i: usize) -> Result<T> {
    game.check_player(i)?;
    let n = game.n();
    if n > MAX_ENUM_PLAYERS {
        return Err(Error::TooManyPlayers {
            n,
            max: MAX_ENUM_PLAYERS,
        });
    }
    let others: Vec<T> = (0..n)
        .filter(|&j| j != i)
        .map(|j| T::from_ratio(game.probability(j).complement().ratio()))
        .collect();
    let lo_bits = others.len().min(LOW_BITS);
    let lo = subset_products(&others[..lo_bits]);
    let hi = subset_products(&others[lo_bits..]);
    let w: Vec<T> = weights_as(n);

    let partials: Vec<T> = hi
        .par_iter()
        .map(|(hp, hpc)| {
            let mut acc = T::zero();
            for (lp, lpc) in &lo {
                acc = acc + w[hpc + lpc].clone() * lp.clone();
            }
            hp.clone() * acc
        })
        .collect();
    let total = partials.into_iter().fold(T::zero(), |a, b| a + b);
    Ok(T::from_ratio(game.probability(i).ratio()) * total)
}

pub fn shapley_exact_enum(game: &BernoulliGame, i: usize) -> Result<f64> {
    shapley_exact_enum_as::<f64>(game, i)
}

fn check_capacity_player(cap: &Capacity, i: usize) -> Result<()> {
    if i < cap.n() {
        Ok(())
    } else {
        Err(Error::PlayerIndex {
            index: i,
            n: cap.n(),
        })
    }
}

/// Coalition formula `sum_{S ∌ i} w(|S|) [v(S ∪ {i}) - v(S)]` for any set
/// function.
pub fn shapley_exact_capacity(cap: &Capacity, i: usize) -> Result<f64> {
    check_capacity_player(cap, i)?;
    let w = weight_table_f64(cap.n());
    let bit = 1u32 << i;
    let total = (0..1u32 << cap.n())
        .filter(|s| s & bit == 0)
        .map(|s| w[s.count_ones() as usize] * (cap.value(s | bit) - cap.value(s)))
        .sum();
    Ok(total)
}

/// Average marginal contribution over all `n!` join orders.
pub fn shapley_permutation_oracle(cap: &Capacity, i: usize) -> Result<f64> {
    check_capacity_player(cap, i)?;
    let n = cap.n();
    if n > MAX_PERMUTATION_PLAYERS {
        return Err(Error::TooManyPlayers {
            n,
            max: MAX_PERMUTATION_PLAYERS,
        });
    }
    let bit = 1u32 << i;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    let mut count = 0u64;
    // Heap's algorithm, iterative form.
    let mut c = vec![0usize; n];
    let mut visit = |perm: &[usize]| {
        let mut before = 0u32;
        for &j in perm {
            if j == i {
                break;
            }
            before |= 1 << j;
        }
        total += cap.value(before | bit) - cap.value(before);
        count += 1;
    };
    visit(&perm);
    let mut k = 0;
    while k < n {
        if c[k] < k {
            if k % 2 == 0 {
                perm.swap(0, k);
            } else {
                perm.swap(c[k], k);
            }
            visit(&perm);
            c[k] += 1;
            k = 0;
        } else {
            c[k] = 0;
            k += 1;
        }
    }
    Ok(total / count as f64)
}

/// Closed form for equal probabilities: `(1 - (1 - p)^n) / n`.
pub fn shapley_homogeneous_as<T: Scalar>(n: usize, p: &Probability) -> Result<T> {
    if n == 0 {
        return Err(Error::Domain("homogeneous closed form needs n >= 1".into()));
    }
    let q = T::from_ratio(p.complement().ratio());
    Ok((T::one() - q.powu(n as u64)) / T::from_u64(n as u64))
}

pub fn shapley_homogeneous(n: usize, p: &Probability) -> Result<f64> {
    shapley_homogeneous_as::<f64>(n, p)
}

/// `p_i sum_k w(n,k) e_k((1 - p_j)_{j != i})`: enumeration regrouped by
/// coalition size. Subtraction-free.
pub fn shapley_exact_symmetric_as<T: Scalar>(game: &BernoulliGame, i: usize) -> Result<T> {
    game.check_player(i)?;
    let w: Vec<T> = weights_as(game.n());
    Ok(symmetric_with_weights(game, i, &w))
}

fn symmetric_with_weights<T: Scalar>(game: &BernoulliGame, i: usize, w: &[T]) -> T {
    let q: Vec<T> = (0..game.n())
        .filter(|&j| j != i)
        .map(|j| T::from_ratio(game.probability(j).complement().ratio()))
        .collect();
    let e = elementary_symmetric_sums(&q, q.len());
    let total = e
        .as_slice()
        .iter()
        .zip(w)
        .fold(T::zero(), |acc, (ek, wk)| acc + wk.clone() * ek.clone());
    T::from_ratio(game.probability(i).ratio()) * total
}

fn symmetric_mean_form(probs: &[f64], i: usize) -> f64 {
    let q: Vec<f64> = probs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, p)| 1.0 - p)
        .collect();
    let mean = mean_symmetric_sums(&q);
    probs[i] * mean.iter().sum::<f64>() / probs.len() as f64
}

/// `f64` symmetric-sum value; games larger than [`SYMMETRIC_WEIGHTED_MAX`]
/// use averaged sums `e_k / C(n-1, k)` so nothing overflows.
pub fn shapley_exact_symmetric(game: &BernoulliGame, i: usize) -> Result<f64> {
    game.check_player(i)?;
    if game.n() <= SYMMETRIC_WEIGHTED_MAX {
        let w = weight_table_f64(game.n());
        Ok(symmetric_with_weights(game, i, &w))
    } else {
        Ok(symmetric_mean_form(game.probs(), i))
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`, as `(t, 1 - t, w)`.
fn gauss_legendre_unit(k: usize) -> Vec<(f64, f64, f64)> {
    let roots: Vec<(f64, f64)> = (0..k.div_ceil(2))
        .into_par_iter()
        .map(|r| {
            let kf = k as f64;
            let theta = std::f64::consts::PI * (r as f64 + 0.75) / (kf + 0.5);
            let mut x = (1.0 - (kf - 1.0) / (8.0 * kf * kf * kf)) * theta.cos();
            let mut dp = 0.0;
            for _ in 0..12 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=k {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                    p0 = p1;
                    p1 = p2;
                }
                let (pk, pkm1) = if k == 1 { (x, 1.0) } else { (p1, p0) };
                dp = k as f64 * (x * pk - pkm1) / (x * x - 1.0);
                let step = pk / dp;
                x -= step;
                if step.abs() <= 4.0 * f64::EPSILON {
                    break;
                }
            }
            (x, 1.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect();
    let mut out = Vec::with_capacity(k);
    for (r, &(x, w)) in roots.iter().enumerate() {
        out.push(((1.0 + x) / 2.0, (1.0 - x) / 2.0, w));
        if 2 * r + 1 != k {
            out.push(((1.0 - x) / 2.0, (1.0 + x) / 2.0, w));
        }
    }
    out
}

const QUADRATURE_BLOCKS: usize = 32;

/// Every player's symmetric-sum value at once, as Gauss-Legendre quadrature of
/// `p_i int_0^1 prod_{j != i} ((1 - p_j) + (1 - t) p_j) dt`. The integrand is a
/// polynomial of degree `n - 1`, so `ceil(n/2)` nodes make the rule exact;
/// leave-one-out products come from prefix and suffix products. All terms
/// are nonnegative, and node blocks are reduced in a fixed order.
fn symmetric_vector_quadrature(probs: &[f64]) -> Vec<f64> {
    let n = probs.len();
    let nodes = gauss_legendre_unit(n.div_ceil(2).max(1));
    let block = nodes.len().div_ceil(QUADRATURE_BLOCKS).max(1);
    let partials: Vec<Vec<f64>> = nodes
        .par_chunks(block)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut prefix = vec![1.0; n + 1];
            for &(_, s, w) in chunk {
                for j in 0..n {
                    prefix[j + 1] = prefix[j] * ((1.0 - probs[j]) + s * probs[j]);
                }
                let mut suffix = 1.0;
                for j in (0..n).rev() {
                    acc[j] += w * prefix[j] * suffix;
                    suffix *= (1.0 - probs[j]) + s * probs[j];
                }
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        total.iter_mut().zip(part).for_each(|(t, x)| *t += x);
    }
    total.iter().zip(probs).map(|(t, p)| p * t).collect()
}

/// `p_i int_0^1 prod_{j != i} (1 - t p_j) dt`, expanded as
/// `p_i sum_s (-1)^s e_s((p_j)_{j != i}) / (s + 1)`.
pub fn shapley_exact_integral_as<T: Scalar>(game: &BernoulliGame, i: usize) -> Result<T> {
    game.check_player(i)?;
    let p: Vec<T> = (0..game.n())
        .filter(|&j| j != i)
        .map(|j| T::from_ratio(game.probability(j).ratio()))
        .collect();
    let e = elementary_symmetric_sums(&p, p.len());
    let mut plus = T::zero();
    let mut minus = T::zero();
    for (s, es) in e.as_slice().iter().enumerate() {
        let term = es.clone() / T::from_u64(s as u64 + 1);
        if s % 2 == 0 {
            plus = plus + term;
        } else {
            minus = minus + term;
        }
    }
    Ok(T::from_ratio(game.probability(i).ratio()) * (plus - minus))
}

/// Alternating form evaluated in double-double arithmetic and rounded once.
pub fn shapley_exact_integral(game: &BernoulliGame, i: usize) -> Result<f64> {
    shapley_exact_integral_as::<DoubleDouble>(game, i).map(|x| x.to_f64())
}

/// `[1 - (1 - p_i)(1 - p̄)^(n-1)] / n`. Exact only when every other player has
/// probability `p̄`; kept as a reference expression for error diagnostics.
pub fn shapley_one_vs_mean_reference(p_i: f64, p_bar: f64, n: usize) -> f64 {
    let n = n.max(1);
    (1.0 - (1.0 - p_i) * (1.0 - p_bar).powi(n as i32 - 1)) / n as f64
}

/// Full vector from one of the exact routes.
pub fn exact_vector(game: &BernoulliGame, method: Method) -> Result<ShapleyVector> {
    let n = game.n();
    let values: Vec<f64> = match method {
        Method::ExactEnum => (0..n)
            .map(|i| shapley_exact_enum(game, i))
            .collect::<Result<_>>()?,
        Method::ExactSymmetric => {
            if n <= SYMMETRIC_WEIGHTED_MAX {
                let w = weight_table_f64(n);
                (0..n)
                    .into_par_iter()
                    .map(|i| symmetric_with_weights(game, i, &w))
                    .collect()
            } else {
                symmetric_vector_quadrature(game.probs())
            }
        }
        Method::ExactIntegral => (0..n)
            .into_par_iter()
            .map(|i| shapley_exact_integral(game, i))
            .collect::<Result<_>>()?,
        Method::Permutation => {
            let cap = crate::capacity::build_capacity_table(game)?;
            (0..n)
                .map(|i| shapley_permutation_oracle(&cap, i))
                .collect::<Result<_>>()?
        }
        Method::Homogeneous => {
            if !game.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
            vec![shapley_homogeneous(n, game.probability(0))?; n]
        }
        other => return Err(Error::Domain(format!("{other} is not an exact method"))),
    };
    Ok(ShapleyVector::new(values, method))
}

/// Exact fractions from one of the polynomial or enumeration routes.
pub fn exact_vector_rational(game: &BernoulliGame, method: Method) -> Result<Vec<BigRational>> {
    let n = game.n();
    match method {
        Method::ExactEnum => (0..n).map(|i| shapley_exact_enum_as(game, i)).collect(),
        Method::ExactSymmetric => (0..n)
            .map(|i| shapley_exact_symmetric_as(game, i))
            .collect(),
        Method::ExactIntegral => (0..n).map(|i| shapley_exact_integral_as(game, i)).collect(),
        Method::Homogeneous => {
            if !game.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
            Ok(vec![shapley_homogeneous_as(n, game.probability(0))?; n])
        }
        other => Err(Error::Domain(format!("{other} has no exact rational form"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::build_capacity_table;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn three_device() -> BernoulliGame {
        BernoulliGame::from_fractions(&[(1, 2), (1, 3), (1, 6)]).unwrap()
    }

    // Values from brute-force subset enumeration in exact fractions.
    const THREE_DEVICE_EXACT: [f64; 3] = [0.384259259259259, 0.231481481481481, 0.106481481481481];

    #[test]
    fn enumeration_examples() {
        let g = BernoulliGame::homogeneous(6, Probability::new(1, 2).unwrap()).unwrap();
        for i in 0..6 {
            assert_eq!(
                shapley_exact_enum_as::<BigRational>(&g, i).unwrap(),
                r(21, 128)
            );
        }
        let g = three_device();
        for i in 0..3 {
            assert!(close(
                shapley_exact_enum(&g, i).unwrap(),
                THREE_DEVICE_EXACT[i],
                1e-12
            ));
        }
        let g = BernoulliGame::parse(&["0.05", "0.95", "0.95"]).unwrap();
        let v = exact_vector(&g, Method::ExactEnum).unwrap();
        assert!(close(v[0], 0.0175416666666667, 1e-12));
        assert!(close(v[1], 0.490041666666667, 1e-12));
        assert!(close(v.sum(), 0.997625, 1e-12));
    }

    #[test]
    fn enumeration_size_limit() {
        let g = BernoulliGame::from_f64(&[0.1; 25]).unwrap();
        assert!(matches!(
            shapley_exact_enum(&g, 0),
            Err(Error::TooManyPlayers { .. })
        ));
        assert!(shapley_exact_enum(&three_device(), 3).is_err());
    }

    #[test]
    fn capacity_formula_and_unanimity() {
        let g = three_device();
        let cap = build_capacity_table(&g).unwrap();
        for i in 0..3 {
            assert!(close(
                shapley_exact_capacity(&cap, i).unwrap(),
                shapley_exact_enum(&g, i).unwrap(),
                1e-12
            ));
        }
        let u = Capacity::unanimity(5, 0b01101).unwrap();
        for i in 0..5 {
            let expected = if 0b01101 >> i & 1 == 1 {
                1.0 / 3.0
            } else {
                0.0
            };
            assert!(close(
                shapley_exact_capacity(&u, i).unwrap(),
                expected,
                1e-14
            ));
        }
    }

    #[test]
    fn permutation_oracle_examples() {
        let one = Capacity::from_values(1, vec![0.0, 0.37]).unwrap();
        assert_eq!(shapley_permutation_oracle(&one, 0).unwrap(), 0.37);
        let g = BernoulliGame::parse(&["0.4", "0.6"]).unwrap();
        let cap = build_capacity_table(&g).unwrap();
        assert!(close(
            shapley_permutation_oracle(&cap, 0).unwrap(),
            0.28,
            1e-15
        ));
        let cap = build_capacity_table(&three_device()).unwrap();
        assert!(close(
            shapley_permutation_oracle(&cap, 0).unwrap(),
            THREE_DEVICE_EXACT[0],
            1e-12
        ));
        let big = Capacity::from_values(9, vec![0.0; 512]).unwrap();
        assert!(shapley_permutation_oracle(&big, 0).is_err());
    }

    #[test]
    fn homogeneous_examples() {
        let half = Probability::new(1, 2).unwrap();
        assert_eq!(
            shapley_homogeneous_as::<BigRational>(6, &half).unwrap(),
            r(21, 128)
        );
        let three_fifths = Probability::new(3, 5).unwrap();
        assert_eq!(
            shapley_homogeneous_as::<BigRational>(6, &three_fifths).unwrap(),
            r(5187, 31250)
        );
        assert!(close(
            shapley_homogeneous(6, &three_fifths).unwrap(),
            0.165984,
            1e-6
        ));
        assert_eq!(shapley_homogeneous(4, &Probability::one()).unwrap(), 0.25);
        assert_eq!(shapley_homogeneous(1, &three_fifths).unwrap(), 0.6);
        assert!(shapley_homogeneous(0, &half).is_err());
    }

    #[test]
    fn symmetric_examples() {
        let g = three_device();
        assert!(close(
            shapley_exact_symmetric(&g, 0).unwrap(),
            THREE_DEVICE_EXACT[0],
            1e-12
        ));
        let t1 = BernoulliGame::parse(&["0.2", "0.5", "0.7", "0.3", "0.1", "0.9", "0.4"]).unwrap();
        assert!(close(
            shapley_exact_symmetric(&t1, 4).unwrap(),
            0.027318,
            5e-7
        ));
        let p = Probability::new(2, 7).unwrap();
        let g = BernoulliGame::homogeneous(9, p.clone()).unwrap();
        assert_eq!(
            shapley_exact_symmetric_as::<BigRational>(&g, 3).unwrap(),
            shapley_homogeneous_as::<BigRational>(9, &p).unwrap()
        );
    }

    #[test]
    fn symmetric_forms_agree_across_the_switch() {
        let probs: Vec<f64> = (0..300).map(|k| 0.001 + 0.003 * (k % 17) as f64).collect();
        let g = BernoulliGame::from_f64(&probs).unwrap();
        let w = weight_table_f64(g.n());
        for i in [0, 5, 150, 299] {
            let a = symmetric_with_weights(&g, i, &w);
            let b = symmetric_mean_form(g.probs(), i);
            assert!(close(a, b, 1e-13), "{a} vs {b}");
        }
    }

    #[test]
    fn quadrature_vector_matches_per_player_forms() {
        let t1 = [0.2, 0.5, 0.7, 0.3, 0.1, 0.9, 0.4];
        let g = BernoulliGame::from_f64(&t1).unwrap();
        let q = symmetric_vector_quadrature(&t1);
        for i in 0..7 {
            assert!(close(q[i], shapley_exact_enum(&g, i).unwrap(), 1e-14));
        }
        let probs: Vec<f64> = (0..700).map(|k| ((k * 37) % 101) as f64 / 100.0).collect();
        let q = symmetric_vector_quadrature(&probs);
        for i in [0, 1, 350, 699] {
            let m = symmetric_mean_form(&probs, i);
            assert!((q[i] - m).abs() <= 1e-12 * m.max(1e-300), "{} vs {m}", q[i]);
        }
        let total: f64 = q.iter().sum();
        assert!(close(
            total,
            1.0 - probs.iter().map(|p| 1.0 - p).product::<f64>(),
            1e-12
        ));
        assert!(close(symmetric_vector_quadrature(&[0.3])[0], 0.3, 1e-16));
    }

    #[test]
    fn integral_examples() {
        let g = BernoulliGame::parse(&["0.4", "0.6"]).unwrap();
        assert!(close(shapley_exact_integral(&g, 0).unwrap(), 0.28, 1e-15));
        assert!(close(
            shapley_exact_integral(&three_device(), 0).unwrap(),
            THREE_DEVICE_EXACT[0],
            1e-14
        ));
        let g = BernoulliGame::parse(&["0", "0.6", "0.9"]).unwrap();
        assert_eq!(shapley_exact_integral(&g, 0).unwrap(), 0.0);
        assert_eq!(
            shapley_exact_integral_as::<BigRational>(&three_device(), 0).unwrap(),
            shapley_exact_enum_as::<BigRational>(&three_device(), 0).unwrap()
        );
    }

    #[test]
    fn integral_stays_accurate_when_cancellation_is_severe() {
        let probs: Vec<f64> = (0..30).map(|k| 0.95 + 0.001 * k as f64).collect();
        let g = BernoulliGame::from_f64(&probs).unwrap();
        for i in [0, 17, 29] {
            let a = shapley_exact_integral(&g, i).unwrap();
            let b = shapley_exact_symmetric(&g, i).unwrap();
            assert!(close(a, b, 1e-12), "{a} vs {b}");
        }
    }

    #[test]
    fn one_vs_mean_reference_examples() {
        let p = 0.3;
        assert!(close(
            shapley_one_vs_mean_reference(p, p, 5),
            (1.0 - 0.7f64.powi(5)) / 5.0,
            1e-15
        ));
        assert!(close(
            shapley_one_vs_mean_reference(0.5, 1.0 / 3.0, 3),
            0.259259,
            5e-7
        ));
        let g = BernoulliGame::from_fractions(&[(1, 2), (1, 3), (1, 3)]).unwrap();
        assert!(close(shapley_exact_enum(&g, 0).unwrap(), 0.351852, 5e-7));
        assert!(close(
            shapley_one_vs_mean_reference(1.0, 0.42, 7),
            1.0 / 7.0,
            1e-15
        ));
    }

    #[test]
    fn rational_vectors_satisfy_efficiency_exactly() {
        let g = three_device();
        for m in [
            Method::ExactEnum,
            Method::ExactSymmetric,
            Method::ExactIntegral,
        ] {
            let v = exact_vector_rational(&g, m).unwrap();
            let total = v.iter().fold(r(0, 1), |a, b| a + b);
            assert_eq!(total, g.total_capacity_exact(), "{m}");
        }
    }
}
