//! Layered approximation.
//!
//! Sorted probabilities are peeled into layers: layer `k` adds the increment
//! `r_k` to each of the `n_k` players that are still above the previous level.
//! Every layer is a homogeneous game with the closed form
//! `(1/n_k)(1 - (1 - r_k)^{n_k})`, and a player's estimate combines the layers
//! it belongs to.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{Method, ShapleyVector};
use crate::racs::{rescale, Target};
use crate::scalar::Scalar;
use crate::symmetric::elementary_symmetric_sums;

#[derive(Debug, Clone, PartialEq)]
pub struct Layer<T = f64> {
    /// Players that reach this layer.
    pub n_k: usize,
    /// Increment shared by those players.
    pub r_k: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerDecomposition<T = f64> {
    pub layers: Vec<Layer<T>>,
    /// Number of layers each player belongs to; 0 for zero-probability players.
    pub depth: Vec<usize>,
}

impl<T: Scalar> LayerDecomposition<T> {
    /// `sum_{k < depth(i)} r_k`, which reconstructs `p_i`.
    pub fn reconstruct(&self, i: usize) -> T {
        self.layers[..self.depth[i]]
            .iter()
            .fold(T::zero(), |acc, layer| acc + layer.r_k.clone())
    }
}

/// Sort-once construction: the increments are the gaps between successive
/// distinct order statistics. Tied players share a layer.
pub fn decompose_layers_as<T: Scalar + PartialOrd>(probs: &[T]) -> Result<LayerDecomposition<T>> {
    if probs.is_empty() {
        return Err(Error::EmptyGame);
    }
    let zero = T::zero();
    let mut order: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > zero).collect();
    order.sort_by(|&a, &b| {
        probs[a]
            .partial_cmp(&probs[b])
            .expect("probabilities are ordered")
    });

    let mut layers = Vec::new();
    let mut depth = vec![0; probs.len()];
    let mut level = zero;
    let mut start = 0;
    while start < order.len() {
        let value = probs[order[start]].clone();
        let mut end = start;
        while end < order.len() && probs[order[end]] == value {
            end += 1;
        }
        layers.push(Layer {
            n_k: order.len() - start,
            r_k: value.clone() - level,
        });
        for &i in &order[start..end] {
            depth[i] = layers.len();
        }
        level = value;
        start = end;
    }
    Ok(LayerDecomposition { layers, depth })
}

pub fn decompose_layers(probs: &[f64]) -> Result<LayerDecomposition> {
    decompose_layers_as(probs)
}

/// `(1/n_k)(1 - (1 - r_k)^{n_k})`.
pub fn layer_shapley(layer: &Layer) -> f64 {
    let n = layer.n_k as f64;
    -(n * (-layer.r_k).ln_1p()).exp_m1() / n
}

pub fn layer_shapley_as<T: Scalar>(layer: &Layer<T>) -> T {
    let n = T::from_u64(layer.n_k as u64);
    (T::one() - (T::one() - layer.r_k.clone()).powu(layer.n_k as u64)) / n
}

/// How layer values are combined into a player's estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LayerVariant {
    /// Each layer value weighted by `n_k r_k`.
    Literal,
    /// Plain sum of layer values; reduces to the homogeneous formula on
    /// constant-probability games.
    #[default]
    Unweighted,
}

impl std::str::FromStr for LayerVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "literal" => Ok(LayerVariant::Literal),
            "unweighted" => Ok(LayerVariant::Unweighted),
            other => Err(Error::Domain(format!("unknown layer variant `{other}`"))),
        }
    }
}

pub fn shapley_layered(
    probs: &[f64],
    variant: LayerVariant,
    normalize: Option<Target>,
) -> Result<ShapleyVector> {
    let decomposition = decompose_layers(probs)?;
    let terms: Vec<f64> = decomposition
        .layers
        .par_iter()
        .map(|layer| {
            let value = layer_shapley(layer);
            match variant {
                LayerVariant::Literal => layer.n_k as f64 * layer.r_k * value,
                LayerVariant::Unweighted => value,
            }
        })
        .collect();
    let mut prefix = Vec::with_capacity(terms.len() + 1);
    prefix.push(0.0);
    for t in &terms {
        prefix.push(prefix.last().copied().unwrap_or(0.0) + t);
    }
    let mut values: Vec<f64> = decomposition.depth.par_iter().map(|&d| prefix[d]).collect();
    if let Some(target) = normalize {
        rescale(&mut values, target.value(probs));
    }
    Ok(ShapleyVector::new(values, Method::Layered))
}

/// Second-order expansion terms for one player. Values can be negative
/// outside the sparse regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderDiagnostic {
    /// `p_i (1 - sum_{j != i} p_j / 2)`.
    pub linearized: f64,
    /// `-p_i (1 - p_i)^{n-1}`.
    pub isolation: f64,
    /// `sum_{j != i} p_i p_j / 2`.
    pub pairwise: f64,
    /// `(p_i / 3) e_2(p_{-i})`, the leading term the linearization drops.
    pub missing_third_order: f64,
    /// Set when the linearized value is negative.
    pub out_of_validity: bool,
}

fn check_player(probs: &[f64], i: usize) -> Result<()> {
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

pub fn second_order_diagnostic(probs: &[f64], i: usize) -> Result<SecondOrderDiagnostic> {
    check_player(probs, i)?;
    let p_i = probs[i];
    let others: Vec<f64> = probs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &p)| p)
        .collect();
    let rest: f64 = others.iter().sum();
    let e = elementary_symmetric_sums(&others, 2);
    let e2 = e.get(2).copied().unwrap_or(0.0);
    let linearized = p_i * (1.0 - rest / 2.0);
    Ok(SecondOrderDiagnostic {
        linearized,
        isolation: -p_i * (1.0 - p_i).powi(others.len() as i32),
        pairwise: p_i * rest / 2.0,
        missing_third_order: p_i / 3.0 * e2,
        out_of_validity: linearized < 0.0,
    })
}

/// `(1 - p_i)^{n-1} / (1 - prod_{j != i}(1 - p_j))`; infinite when every
/// other player has probability zero.
pub fn worst_case_relative_error(probs: &[f64], i: usize) -> Result<f64> {
    check_player(probs, i)?;
    let numerator = (1.0 - probs[i]).powi(probs.len() as i32 - 1);
    let miss: f64 = probs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &p)| 1.0 - p)
        .product();
    let denominator = 1.0 - miss;
    if denominator <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(numerator / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Repeated min-subtraction over the remaining positive residuals.
    fn subtract_repeatedly(probs: &[BigRational]) -> Vec<(usize, BigRational)> {
        let mut residual = probs.to_vec();
        let zero = BigRational::from_integer(0.into());
        let mut out = Vec::new();
        loop {
            let active: Vec<usize> = (0..residual.len())
                .filter(|&j| residual[j] > zero)
                .collect();
            let Some(min) = active.iter().map(|&j| residual[j].clone()).min() else {
                return out;
            };
            for &j in &active {
                residual[j] = &residual[j] - &min;
            }
            out.push((active.len(), min));
        }
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose_layers(&[0.05, 0.95, 0.95]).unwrap();
        assert_eq!(d.layers.len(), 2);
        assert_eq!((d.layers[0].n_k, d.layers[1].n_k), (3, 2));
        assert_eq!(d.layers[0].r_k, 0.05);
        assert!(close(d.layers[1].r_k, 0.90, 1e-15));
        assert_eq!(d.depth, vec![1, 2, 2]);

        let d = decompose_layers(&[0.3; 3]).unwrap();
        assert_eq!(d.layers, vec![Layer { n_k: 3, r_k: 0.3 }]);

        let d = decompose_layers(&[0.1, 0.2, 0.4]).unwrap();
        let shape: Vec<usize> = d.layers.iter().map(|l| l.n_k).collect();
        assert_eq!(shape, vec![3, 2, 1]);
        for (got, want) in d.layers.iter().zip([0.1, 0.1, 0.2]) {
            assert!(close(got.r_k, want, 1e-15));
        }
        assert!(decompose_layers(&[]).is_err());
    }

    #[test]
    fn zero_players_sit_outside_every_layer() {
        let d = decompose_layers(&[0.0, 0.4, 0.0]).unwrap();
        assert_eq!(d.depth, vec![0, 1, 0]);
        assert_eq!(d.layers, vec![Layer { n_k: 1, r_k: 0.4 }]);
    }

    #[test]
    fn layer_value_examples() {
        assert!(close(
            layer_shapley(&Layer { n_k: 3, r_k: 0.05 }),
            0.047542,
            5e-7
        ));
        assert!(close(
            layer_shapley(&Layer { n_k: 2, r_k: 0.9 }),
            0.495,
            1e-15
        ));
        assert!(close(
            layer_shapley(&Layer { n_k: 7, r_k: 1.0 }),
            1.0 / 7.0,
            1e-15
        ));
    }

    #[test]
    fn combination_examples() {
        let p = [0.05, 0.95, 0.95];
        let lit = shapley_layered(&p, LayerVariant::Literal, None).unwrap();
        for (got, want) in lit.values().iter().zip([0.007131, 0.898131, 0.898131]) {
            assert!(close(*got, want, 5e-7), "{got}");
        }
        let unw = shapley_layered(&p, LayerVariant::Unweighted, None).unwrap();
        for (got, want) in unw.values().iter().zip([0.047542, 0.542542, 0.542542]) {
            assert!(close(*got, want, 5e-7), "{got}");
        }
        let one = shapley_layered(&p, LayerVariant::Unweighted, Some(Target::One)).unwrap();
        assert!(close(one.sum(), 1.0, 1e-12));
    }

    #[test]
    fn unweighted_degenerates_to_homogeneous() {
        for n in 1..=50 {
            let p = vec![0.37; n];
            let v = shapley_layered(&p, LayerVariant::Unweighted, None).unwrap();
            let want = (1.0 - 0.63f64.powi(n as i32)) / n as f64;
            assert!(v.values().iter().all(|&x| close(x, want, 1e-12)));
        }
    }

    #[test]
    fn diagnostic_examples() {
        let d = second_order_diagnostic(&[0.02, 0.03], 0).unwrap();
        assert!(close(d.linearized, 0.0197, 1e-15));
        assert_eq!(d.missing_third_order, 0.0);
        let d = second_order_diagnostic(&[0.4, 0.4], 0).unwrap();
        assert!(close(d.linearized, 0.4 * (1.0 - 0.2), 1e-15));
        let table = [0.2, 0.5, 0.7, 0.3, 0.1, 0.9, 0.4];
        let d = second_order_diagnostic(&table, 0).unwrap();
        assert!(close(d.linearized, -0.09, 1e-12));
        assert!(d.out_of_validity);
    }

    #[test]
    fn worst_case_examples() {
        assert!(close(
            worst_case_relative_error(&[0.5, 0.5], 0).unwrap(),
            1.0,
            1e-15
        ));
        assert_eq!(worst_case_relative_error(&[1.0, 0.3], 0).unwrap(), 0.0);
        let w = worst_case_relative_error(&[0.05, 0.95, 0.95], 0).unwrap();
        assert!(close(w, 0.904762, 5e-7));
        assert_eq!(
            worst_case_relative_error(&[0.5, 0.0], 0).unwrap(),
            f64::INFINITY
        );
    }

    fn rational_probs() -> impl Strategy<Value = Vec<BigRational>> {
        prop::collection::vec((0u64..=12, 1u64..=12), 1..10).prop_map(|v| {
            v.into_iter()
                .map(|(a, b)| BigRational::new(a.min(b).into(), b.into()))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn sort_based_layers_match_repeated_subtraction(p in rational_probs()) {
            let d = decompose_layers_as(&p).unwrap();
            let got: Vec<(usize, BigRational)> =
                d.layers.iter().map(|l| (l.n_k, l.r_k.clone())).collect();
            prop_assert_eq!(got, subtract_repeatedly(&p));
        }

        #[test]
        fn layers_reconstruct_probabilities(p in rational_probs()) {
            let d = decompose_layers_as(&p).unwrap();
            prop_assert!(d.layers.len() <= p.len());
            prop_assert!(d.layers.windows(2).all(|w| w[0].n_k > w[1].n_k));
            for (i, pi) in p.iter().enumerate() {
                prop_assert_eq!(&d.reconstruct(i), pi);
            }
        }
    }
}
