use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probability::Probability;

#[derive(Debug, Clone, PartialEq)]
pub struct Player {
    pub id: String,
    pub p: Probability,
}

/// Players joining a random set independently, player `i` with probability
/// `p_i`. The characteristic function is the hitting capacity
/// `T(S) = 1 - prod_{j in S} (1 - p_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliGame {
    players: Vec<Player>,
    floats: Vec<f64>,
}

impl BernoulliGame {
    pub fn new(players: Vec<Player>) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::EmptyGame);
        }
        let mut seen = HashSet::with_capacity(players.len());
        for pl in &players {
            if !seen.insert(pl.id.as_str()) {
                return Err(Error::DuplicateId(pl.id.clone()));
            }
        }
        let floats = players.iter().map(|pl| pl.p.as_f64()).collect();
        Ok(Self { players, floats })
    }

    /// Players named `1..=n` from exact probabilities.
    pub fn from_probabilities(ps: Vec<Probability>) -> Result<Self> {
        let players = ps
            .into_iter()
            .enumerate()
            .map(|(i, p)| Player {
                id: (i + 1).to_string(),
                p,
            })
            .collect();
        Self::new(players)
    }

    /// Parses each entry as a fraction or decimal (`"1/3"`, `"0.2"`).
    pub fn parse<S: AsRef<str>>(ps: &[S]) -> Result<Self> {
        let ps = ps
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<_>>>()?;
        Self::from_probabilities(ps)
    }

    pub fn from_fractions(ps: &[(u64, u64)]) -> Result<Self> {
        let ps = ps
            .iter()
            .map(|&(a, b)| Probability::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::from_probabilities(ps)
    }

    /// Binary-float probabilities; the game is usable everywhere except exact
    /// rationalization.
    pub fn from_f64(ps: &[f64]) -> Result<Self> {
        let ps = ps
            .iter()
            .map(|&x| Probability::from_f64(x))
            .collect::<Result<Vec<_>>>()?;
        Self::from_probabilities(ps)
    }

    pub fn homogeneous(n: usize, p: Probability) -> Result<Self> {
        Self::from_probabilities(vec![p; n])
    }

    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn probability(&self, i: usize) -> &Probability {
        &self.players[i].p
    }

    pub fn probs(&self) -> &[f64] {
        &self.floats
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.players.iter().map(|pl| pl.id.as_str())
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.players.iter().position(|pl| pl.id == id)
    }

    pub(crate) fn check_player(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::PlayerIndex {
                index: i,
                n: self.n(),
            })
        }
    }

    /// `T(S)` for the listed players.
    pub fn capacity_of_subset(&self, subset: &[usize]) -> f64 {
        1.0 - subset
            .iter()
            .map(|&j| 1.0 - self.floats[j])
            .product::<f64>()
    }

    /// `T(S)` for a bitmask over the first 64 players.
    pub fn capacity_of_mask(&self, mask: u64) -> f64 {
        let mut prod = 1.0;
        let mut rest = mask;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            prod *= 1.0 - self.floats[j];
            rest &= rest - 1;
        }
        1.0 - prod
    }

    /// `T(E)`, the total capacity and the efficiency target.
    pub fn total_capacity(&self) -> f64 {
        total_capacity(&self.floats)
    }

    pub fn total_capacity_exact(&self) -> BigRational {
        let one = BigRational::from_integer(1.into());
        let prod = self
            .players
            .iter()
            .fold(one.clone(), |acc, pl| acc * pl.p.complement().ratio());
        one - prod
    }

    pub fn is_homogeneous(&self) -> bool {
        self.players
            .windows(2)
            .all(|w| w[0].p.ratio() == w[1].p.ratio())
    }
}

pub(crate) fn total_capacity(probs: &[f64]) -> f64 {
    1.0 - probs.iter().map(|p| 1.0 - p).product::<f64>()
}

/// Which algorithm produced a [`ShapleyVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactEnum,
    ExactSymmetric,
    ExactIntegral,
    Permutation,
    Homogeneous,
    Racs,
    RacsCorrected,
    Layered,
    Meanfield,
    BinomialSum,
    Riemann,
    MonteCarlo,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ExactEnum => "exact-enum",
            Method::ExactSymmetric => "exact-symmetric",
            Method::ExactIntegral => "exact-integral",
            Method::Permutation => "permutation",
            Method::Homogeneous => "homogeneous",
            Method::Racs => "racs",
            Method::RacsCorrected => "racs-corrected",
            Method::Layered => "layered",
            Method::Meanfield => "meanfield",
            Method::BinomialSum => "binomial-sum",
            Method::Riemann => "riemann",
            Method::MonteCarlo => "monte-carlo",
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(
            self,
            Method::ExactEnum
                | Method::ExactSymmetric
                | Method::ExactIntegral
                | Method::Permutation
                | Method::Homogeneous
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Meta {
    pub regime: Option<crate::racs::Regime>,
    pub error_bound: Option<f64>,
    pub stderr: Option<Vec<f64>>,
    pub exact: Option<Vec<BigRational>>,
    pub warnings: Vec<String>,
}

/// Per-player Shapley values plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyVector {
    values: Vec<f64>,
    method: Method,
    pub meta: Meta,
}

impl ShapleyVector {
    /// Panics if any value is not finite; every producer in this crate
    /// guarantees finiteness on valid input.
    pub fn new(values: Vec<f64>, method: Method) -> Self {
        assert!(
            values.iter().all(|v| v.is_finite()),
            "{method} produced a non-finite Shapley value"
        );
        Self {
            values,
            method,
            meta: Meta::default(),
        }
    }

    pub fn with_meta(mut self, meta: Meta) -> Self {
        self.meta = meta;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.meta.warnings.push(msg.into());
    }
}

impl std::ops::Index<usize> for ShapleyVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn capacity_of_subset_examples() {
        let g = BernoulliGame::from_fractions(&[(1, 2), (1, 3), (1, 6)]).unwrap();
        assert_eq!(g.capacity_of_subset(&[]), 0.0);
        assert!(approx(g.capacity_of_subset(&[0, 1]), 2.0 / 3.0, 1e-15));

        let t1 = BernoulliGame::parse(&["0.2", "0.5", "0.7", "0.3", "0.1", "0.9", "0.4"]).unwrap();
        let all: Vec<usize> = (0..7).collect();
        assert!(approx(t1.capacity_of_subset(&all), 0.995464, 1e-12));
        assert!(approx(t1.capacity_of_mask(0x7f), 0.995464, 1e-12));
        assert_eq!(
            t1.total_capacity_exact(),
            BigRational::new(995464.into(), 1_000_000.into())
        );
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(matches!(
            BernoulliGame::from_f64(&[]),
            Err(Error::EmptyGame)
        ));
        let p = Probability::new(1, 2).unwrap();
        let dup = vec![
            Player {
                id: "a".into(),
                p: p.clone(),
            },
            Player { id: "a".into(), p },
        ];
        assert!(matches!(
            BernoulliGame::new(dup),
            Err(Error::DuplicateId(_))
        ));
    }

    #[test]
    #[should_panic(expected = "non-finite")]
    fn shapley_vector_rejects_nan() {
        ShapleyVector::new(vec![0.1, f64::NAN], Method::Racs);
    }
}
