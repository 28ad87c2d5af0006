//! The sub-player (RACS) approximation.
//!
//! Every probability is written over a common denominator, `p_i = m_i / l`,
//! and player `i` is replaced by `m_i` independent sub-players that each
//! join with probability `1/l`. The enlarged game is homogeneous, so its
//! Shapley values have a closed form, and player `i` collects the share of
//! its sub-players:
//!
//! ```text
//! phi_i(mu) = (m_i / m) * (1 - (1 - 1/l)^m),   m = sum_i m_i
//! ```
//!
//! The module also carries the operating-regime classification
//! (`r = m/l = sum_i p_i`), the two regime corrections, a mean-field variant,
//! and the error bounds that accompany the estimate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{BernoulliGame, Method, Player, ShapleyVector};
use crate::probability::{lcm_of_denominators, Probability};

/// Largest common denominator accepted. Keeps `l` and every `m_i` exactly
/// representable in an `f64`.
pub const MAX_DENOMINATOR: u64 = 1_000_000_000_000_000;

/// Largest `m` for which the shared factor is evaluated as an exact fraction.
pub const EXACT_POWER_MAX_M: u128 = 10_000;

/// A game rewritten over a common denominator: `p_i ≈ m_i / l`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalizedGame {
    ids: Vec<String>,
    counts: Vec<u64>,
    l: u64,
    total: u128,
    original: Vec<f64>,
    rounding_delta: f64,
    clamped: Vec<usize>,
}

impl RationalizedGame {
    /// Builds the game directly from sub-player counts, e.g. vulnerability
    /// counts over a base failure unit `l`.
    pub fn from_counts(ids: Vec<String>, counts: Vec<u64>, l: u64) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyGame);
        }
        if ids.len() != counts.len() {
            return Err(Error::Domain("ids and counts differ in length".into()));
        }
        if l == 0 {
            return Err(Error::Domain("denominator must be at least 1".into()));
        }
        if l > MAX_DENOMINATOR {
            return Err(Error::DenominatorOverflow {
                limit: MAX_DENOMINATOR,
            });
        }
        if let Some(&bad) = counts.iter().find(|&&m| m > l) {
            return Err(Error::Domain(format!(
                "count {bad} exceeds denominator {l}"
            )));
        }
        let total = counts.iter().map(|&m| m as u128).sum();
        let original = counts.iter().map(|&m| m as f64 / l as f64).collect();
        Ok(Self {
            ids,
            counts,
            l,
            total,
            original,
            rounding_delta: 0.0,
            clamped: Vec::new(),
        })
    }

    /// Counts with players named `1..=n`.
    pub fn from_counts_unnamed(counts: Vec<u64>, l: u64) -> Result<Self> {
        let ids = (1..=counts.len()).map(|i| i.to_string()).collect();
        Self::from_counts(ids, counts, l)
    }

    pub fn n(&self) -> usize {
        self.counts.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn denominator(&self) -> u64 {
        self.l
    }

    /// `m = sum_i m_i`.
    pub fn total(&self) -> u128 {
        self.total
    }

    /// `r = m / l`.
    pub fn ratio(&self) -> f64 {
        self.total as f64 / self.l as f64
    }

    /// The probabilities before rounding (equal to `m_i / l` in exact mode).
    pub fn original_probs(&self) -> &[f64] {
        &self.original
    }

    /// `max_i |p_i - m_i / l|`.
    pub fn rounding_delta(&self) -> f64 {
        self.rounding_delta
    }

    /// Players whose probability rounded to zero and was raised to `1/l`.
    pub fn clamped(&self) -> &[usize] {
        &self.clamped
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// The rounded game `p_i = m_i / l` as exact fractions.
    pub fn to_game(&self) -> Result<BernoulliGame> {
        let players = self
            .ids
            .iter()
            .zip(&self.counts)
            .map(|(id, &m)| {
                Ok(Player {
                    id: id.clone(),
                    p: Probability::new(m, self.l)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BernoulliGame::new(players)
    }

    /// Replaces one player's count, keeping `l`.
    pub fn with_count(&self, i: usize, count: u64) -> Result<Self> {
        let mut counts = self.counts.clone();
        *counts.get_mut(i).ok_or(Error::PlayerIndex {
            index: i,
            n: self.n(),
        })? = count;
        Self::from_counts(self.ids.clone(), counts, self.l)
    }
}

/// How probabilities are brought to a common denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RationalizeMode {
    /// Use the fractions as given; `l` is the lcm of their denominators.
    Exact,
    /// Round to a decimal grid fine enough that every `|p_i - q_i| <= δ`.
    Delta(f64),
}

/// Lcm of the denominators, by repeated gcd.
pub fn common_denominator(fractions: &[Probability]) -> Result<u64> {
    lcm_of_denominators(fractions.iter().map(|p| p.denom()), MAX_DENOMINATOR)
}

fn counts_over(probs: &[BigRational], l: u64) -> Vec<u64> {
    let l_big = BigInt::from(l);
    probs
        .iter()
        .map(|p| {
            let scaled = p.numer() * &l_big / p.denom();
            scaled.to_u64().expect("count fits the denominator")
        })
        .collect()
}

pub fn rationalize(game: &BernoulliGame, mode: RationalizeMode) -> Result<RationalizedGame> {
    let ids: Vec<String> = game.ids().map(str::to_string).collect();
    let original = game.probs().to_vec();
    match mode {
        RationalizeMode::Exact => {
            let probs: Vec<&Probability> = game.players().iter().map(|pl| &pl.p).collect();
            if let Some(player) = probs.iter().position(|p| !p.is_exact()) {
                return Err(Error::InexactProbability { player });
            }
            let l = lcm_of_denominators(probs.iter().map(|p| p.denom()), MAX_DENOMINATOR)?;
            let ratios: Vec<BigRational> = probs.iter().map(|p| p.ratio().clone()).collect();
            let counts = counts_over(&ratios, l);
            let total = counts.iter().map(|&m| m as u128).sum();
            Ok(RationalizedGame {
                ids,
                counts,
                l,
                total,
                original,
                rounding_delta: 0.0,
                clamped: Vec::new(),
            })
        }
        RationalizeMode::Delta(delta) => {
            if !(delta > 0.0) {
                return Err(Error::InvalidDelta(delta));
            }
            // Smallest power of ten whose half-step is strictly below delta.
            let mut grid: u64 = 1;
            while 1.0 / (2.0 * grid as f64) >= delta {
                grid = grid
                    .checked_mul(10)
                    .filter(|&g| g <= MAX_DENOMINATOR)
                    .ok_or(Error::DenominatorOverflow {
                        limit: MAX_DENOMINATOR,
                    })?;
            }
            let grid_big = BigInt::from(grid);
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let mut clamped = Vec::new();
            let rounded: Vec<BigRational> = game
                .players()
                .iter()
                .enumerate()
                .map(|(i, pl)| {
                    let steps = (pl.p.ratio() * &grid_big + &half).floor().to_integer();
                    let steps = if steps.is_zero() && !pl.p.is_zero() {
                        clamped.push(i);
                        BigInt::one()
                    } else {
                        steps
                    };
                    BigRational::new(steps, grid_big.clone())
                })
                .collect();
            let l = lcm_of_denominators(rounded.iter().map(|q| q.denom()), MAX_DENOMINATOR)?;
            let rounding_delta = game
                .players()
                .iter()
                .zip(&rounded)
                .map(|(pl, q)| (pl.p.ratio() - q).to_f64().unwrap_or(0.0).abs())
                .fold(0.0, f64::max);
            let counts = counts_over(&rounded, l);
            let total = counts.iter().map(|&m| m as u128).sum();
            Ok(RationalizedGame {
                ids,
                counts,
                l,
                total,
                original,
                rounding_delta,
                clamped,
            })
        }
    }
}

/// `1 - (1 - 1/l)^m`, the total mass shared by all sub-players.
pub fn shared_factor(l: u64, m: u128) -> f64 {
    let lf = l as f64;
    -((m as f64) * (-1.0 / lf).ln_1p()).exp_m1()
}

/// The RACS estimate `phi_i(mu) = (m_i/m)(1 - (1 - 1/l)^m)` for every player.
pub fn shapley_racs(rg: &RationalizedGame) -> ShapleyVector {
    let m = rg.total;
    let mut out = if m == 0 {
        let mut v = ShapleyVector::new(vec![0.0; rg.n()], Method::Racs);
        v.warn("all counts are zero; every value is zero");
        v
    } else {
        let factor = shared_factor(rg.l, m) / m as f64;
        let values = rg.counts.iter().map(|&mi| mi as f64 * factor).collect();
        ShapleyVector::new(values, Method::Racs)
    };
    out.meta.regime = Some(classify_regime(rg));
    if !rg.clamped.is_empty() {
        out.warn(format!(
            "{} probabilities rounded up to 1/l",
            rg.clamped.len()
        ));
    }
    out
}

/// The RACS estimate as exact fractions; needs `m <= EXACT_POWER_MAX_M`.
pub fn shapley_racs_exact(rg: &RationalizedGame) -> Result<Vec<BigRational>> {
    let m = rg.total;
    if m > EXACT_POWER_MAX_M {
        return Err(Error::ExactPowerTooLarge {
            m,
            limit: EXACT_POWER_MAX_M,
        });
    }
    if m == 0 {
        return Ok(vec![BigRational::zero(); rg.n()]);
    }
    let l = BigInt::from(rg.l);
    let stay = BigRational::new(&l - BigInt::one(), l);
    let factor = BigRational::one() - num_traits::pow(stay, m as usize);
    let m_big = BigInt::from(m as u64);
    Ok(rg
        .counts
        .iter()
        .map(|&mi| BigRational::new(BigInt::from(mi), m_big.clone()) * &factor)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RegimeLabel {
    Sparse,
    Critical,
    Dense,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::Sparse => "SPARSE",
            RegimeLabel::Critical => "CRITICAL",
            RegimeLabel::Dense => "DENSE",
        }
    }
}

/// Operating point `r = m/l = sum_i p_i` and its label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub label: RegimeLabel,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeThresholds {
    /// `r <= sparse_max` is sparse.
    pub sparse_max: f64,
    /// `sparse_max < r <= critical_max` is critical; above is dense.
    pub critical_max: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            sparse_max: 0.5,
            critical_max: 2.0,
        }
    }
}

impl RegimeThresholds {
    pub fn classify(&self, r: f64) -> Regime {
        let label = if r <= self.sparse_max {
            RegimeLabel::Sparse
        } else if r <= self.critical_max {
            RegimeLabel::Critical
        } else {
            RegimeLabel::Dense
        };
        Regime { label, r }
    }
}

pub fn classify_regime(rg: &RationalizedGame) -> Regime {
    RegimeThresholds::default().classify(rg.ratio())
}

pub fn classify_regime_with(rg: &RationalizedGame, thresholds: &RegimeThresholds) -> Regime {
    thresholds.classify(rg.ratio())
}

/// Near `r = 1`: `phi(T) ≈ x (0.5 + 0.5 x)` with `x = phi(mu) / (1 - 1/e)`.
pub fn correct_situation2(phi_mu: f64) -> f64 {
    let x = phi_mu / (1.0 - (-1.0f64).exp());
    x * (0.5 + 0.5 * x)
}

/// What a rescaled vector should sum to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// `T(E) = 1 - prod_j (1 - p_j)`.
    Te,
    One,
}

impl Target {
    pub fn value(self, probs: &[f64]) -> f64 {
        match self {
            Target::Te => crate::game::total_capacity(probs),
            Target::One => 1.0,
        }
    }
}

/// Rescales `values` by a single factor so they sum to `target`.
pub(crate) fn rescale(values: &mut [f64], target: f64) {
    let sum: f64 = values.iter().sum();
    if sum > 0.0 {
        let k = target / sum;
        values.iter_mut().for_each(|v| *v *= k);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Situation3Options {
    /// Players with `p <= tau_low` score `p/n`.
    pub tau_low: f64,
    /// Players with `p >= tau_high` score `1/|L|`.
    pub tau_high: f64,
    pub target: Target,
}

impl Default for Situation3Options {
    fn default() -> Self {
        Self {
            tau_low: 0.2,
            tau_high: 0.8,
            target: Target::Te,
        }
    }
}

/// Dense-regime correction: low and middle players score `p_i/n`, the `|L|`
/// high players `1/|L|` each, then everything is scaled to the target.
pub fn correct_situation3(game: &BernoulliGame, opts: &Situation3Options) -> Result<ShapleyVector> {
    if !(opts.tau_low < opts.tau_high) {
        return Err(Error::Domain(format!(
            "tau_low ({}) must be below tau_high ({})",
            opts.tau_low, opts.tau_high
        )));
    }
    let probs = game.probs();
    let n = probs.len() as f64;
    let high = probs.iter().filter(|&&p| p >= opts.tau_high).count();
    let r: f64 = probs.iter().sum();
    let regime = RegimeThresholds::default().classify(r);
    if high == 0 && regime.label == RegimeLabel::Dense {
        let rg = match rationalize(game, RationalizeMode::Exact) {
            Ok(rg) => rg,
            Err(_) => rationalize(game, RationalizeMode::Delta(1e-6))?,
        };
        let mut v = shapley_racs(&rg);
        v.warn("no high-probability players in a dense game; returning uncorrected RACS values");
        return Ok(v);
    }
    let mut values: Vec<f64> = probs
        .iter()
        .map(|&p| {
            if p >= opts.tau_high {
                1.0 / high as f64
            } else {
                p / n
            }
        })
        .collect();
    rescale(&mut values, opts.target.value(probs));
    let mut v = ShapleyVector::new(values, Method::RacsCorrected);
    v.meta.regime = Some(regime);
    Ok(v)
}

/// Applies the correction matching the game's regime: none when sparse,
/// [`correct_situation2`] when critical, [`correct_situation3`] when dense.
pub fn shapley_racs_corrected(
    game: &BernoulliGame,
    rg: &RationalizedGame,
    thresholds: &RegimeThresholds,
    dense: &Situation3Options,
) -> Result<ShapleyVector> {
    let regime = classify_regime_with(rg, thresholds);
    let base = shapley_racs(rg);
    let mut out = match regime.label {
        RegimeLabel::Sparse => ShapleyVector::new(base.values().to_vec(), Method::RacsCorrected),
        RegimeLabel::Critical => ShapleyVector::new(
            base.values()
                .iter()
                .map(|&x| correct_situation2(x))
                .collect(),
            Method::RacsCorrected,
        ),
        RegimeLabel::Dense => correct_situation3(game, dense)?,
    };
    out.meta.regime = Some(regime);
    Ok(out)
}

/// `(p_i / p̃)(1 - e^{-p̃})` with `p̃ = m/l`. Only valid while `m <= l^2`.
pub fn meanfield_racs(rg: &RationalizedGame) -> Result<ShapleyVector> {
    let l_squared = (rg.l as u128) * (rg.l as u128);
    if rg.total > l_squared {
        return Err(Error::MeanFieldValidity {
            m: rg.total,
            l_squared,
        });
    }
    if rg.total == 0 {
        return Ok(ShapleyVector::new(vec![0.0; rg.n()], Method::Meanfield));
    }
    let p_tilde = rg.ratio();
    let factor = -(-p_tilde).exp_m1() / rg.total as f64;
    let values = rg.counts.iter().map(|&mi| mi as f64 * factor).collect();
    let mut v = ShapleyVector::new(values, Method::Meanfield);
    v.meta.regime = Some(classify_regime(rg));
    Ok(v)
}

/// Leading terms of the approximation error bound for one player.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThmBound {
    /// `m_i m / (2 l^2)`.
    pub leading: f64,
    /// `|m_i/m - w_i/W|` with `w_i = m_i/l`; identically zero.
    pub weight_discrepancy: f64,
    /// Magnitude `m_i m^2 / l^3` of the unspecified residual, reported only.
    pub residual: f64,
}

impl ThmBound {
    pub fn bound(&self) -> f64 {
        self.leading + self.weight_discrepancy
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// `|p_i - (1 - (1 - 1/l)^{m_i})|`.
    pub e1: f64,
    /// Distance between the one-vs-mean reference and the RACS estimate.
    pub e2: f64,
    pub thm_bound: f64,
    pub weight_discrepancy: f64,
    pub residual: f64,
}

fn check_index(rg: &RationalizedGame, i: usize) -> Result<()> {
    if i < rg.n() {
        Ok(())
    } else {
        Err(Error::PlayerIndex {
            index: i,
            n: rg.n(),
        })
    }
}

pub fn error_bound_thm(rg: &RationalizedGame, i: usize) -> Result<ThmBound> {
    check_index(rg, i)?;
    let mi = rg.counts[i] as f64;
    let m = rg.total as f64;
    let l = rg.l as f64;
    let weight_discrepancy = if rg.total == 0 {
        BigRational::zero()
    } else {
        let m_big = BigInt::from(rg.total as u64);
        let l_big = BigInt::from(rg.l);
        let share = BigRational::new(BigInt::from(rg.counts[i]), m_big.clone());
        let w_i = BigRational::new(BigInt::from(rg.counts[i]), l_big.clone());
        let w_total = BigRational::new(m_big, l_big);
        share - w_i / w_total
    };
    debug_assert!(weight_discrepancy.is_zero());
    Ok(ThmBound {
        leading: mi * m / (2.0 * l * l),
        weight_discrepancy: weight_discrepancy.to_f64().unwrap_or(0.0).abs(),
        residual: mi * m * m / (l * l * l),
    })
}

/// `(E1, E2)`: probability-space error of the sub-player construction and
/// the distance of the estimate from the one-vs-mean reference expression.
pub fn error_decomposition(rg: &RationalizedGame, i: usize) -> Result<(f64, f64)> {
    check_index(rg, i)?;
    let n = rg.n();
    let p_i = rg.original[i];
    let stay = -1.0 / rg.l as f64;
    let sub_player_hit = -(rg.counts[i] as f64 * stay.ln_1p()).exp_m1();
    let e1 = (p_i - sub_player_hit).abs();
    let p_bar = if n > 1 {
        (rg.original.iter().sum::<f64>() - p_i) / (n - 1) as f64
    } else {
        0.0
    };
    let reference = crate::exact::shapley_one_vs_mean_reference(p_i, p_bar, n);
    let estimate = if rg.total == 0 {
        0.0
    } else {
        rg.counts[i] as f64 / rg.total as f64 * shared_factor(rg.l, rg.total)
    };
    Ok((e1, (reference - estimate).abs()))
}

pub fn error_report(rg: &RationalizedGame, i: usize) -> Result<ErrorReport> {
    let thm = error_bound_thm(rg, i)?;
    let (e1, e2) = error_decomposition(rg, i)?;
    Ok(ErrorReport {
        e1,
        e2,
        thm_bound: thm.bound(),
        weight_discrepancy: thm.weight_discrepancy,
        residual: thm.residual,
    })
}

/// Worst-case change of any Shapley value when every probability moves by at
/// most `delta`: `delta (n + 1) / 2`.
pub fn perturbation_bound(delta: f64, n: usize) -> f64 {
    delta * (n as f64 + 1.0) / 2.0
}

/// Largest rounding tolerance keeping [`perturbation_bound`] at `eps`.
pub fn pick_delta(eps: f64, n: usize) -> f64 {
    2.0 * eps / (n as f64 + 1.0)
}

/// Gcd-reduced `m_i / l` as a fraction, for display.
pub fn count_fraction(m: u64, l: u64) -> (u64, u64) {
    let g = m.gcd(&l).max(1);
    (m / g, l / g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn three_device() -> BernoulliGame {
        BernoulliGame::from_fractions(&[(1, 2), (1, 3), (1, 6)]).unwrap()
    }

    fn seven_players() -> BernoulliGame {
        BernoulliGame::parse(&["0.2", "0.5", "0.7", "0.3", "0.1", "0.9", "0.4"]).unwrap()
    }

    #[test]
    fn common_denominator_examples() {
        let ps: Vec<Probability> = ["1/2", "1/3", "1/6"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(common_denominator(&ps).unwrap(), 6);
        let ps: Vec<Probability> = ["3/6", "2/6", "1/6"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(common_denominator(&ps).unwrap(), 6);
        assert_eq!(common_denominator(&["1/2".parse().unwrap()]).unwrap(), 2);
    }

    #[test]
    fn common_denominator_reports_overflow() {
        let primes = ["1/1000003", "1/1000033", "1/1000037"];
        let ps: Vec<Probability> = primes.iter().map(|s| s.parse().unwrap()).collect();
        assert!(matches!(
            common_denominator(&ps),
            Err(Error::DenominatorOverflow { .. })
        ));
    }

    #[test]
    fn rationalize_exact_examples() {
        let rg = rationalize(&three_device(), RationalizeMode::Exact).unwrap();
        assert_eq!(rg.counts(), &[3, 2, 1]);
        assert_eq!(rg.denominator(), 6);
        assert_eq!(rg.total(), 6);
        assert_eq!(rg.rounding_delta(), 0.0);
        let rg = rationalize(&seven_players(), RationalizeMode::Exact).unwrap();
        assert_eq!(rg.counts(), &[2, 5, 7, 3, 1, 9, 4]);
        assert_eq!(rg.denominator(), 10);
    }

    #[test]
    fn rationalize_rejects_floats_in_exact_mode() {
        let g = BernoulliGame::from_f64(&[0.25, std::f64::consts::FRAC_1_PI]).unwrap();
        assert!(matches!(
            rationalize(&g, RationalizeMode::Exact),
            Err(Error::InexactProbability { player: 0 })
        ));
    }

    #[test]
    fn rationalize_delta_examples() {
        let g = BernoulliGame::from_f64(&[std::f64::consts::FRAC_1_PI]).unwrap();
        let rg = rationalize(&g, RationalizeMode::Delta(0.005)).unwrap();
        assert_eq!(rg.counts(), &[159]);
        assert_eq!(rg.denominator(), 500);
        assert!(rg.rounding_delta() <= 0.005);
        assert!(matches!(
            rationalize(&g, RationalizeMode::Delta(0.0)),
            Err(Error::InvalidDelta(_))
        ));
    }

    #[test]
    fn rationalize_delta_clamps_tiny_probabilities() {
        let g = BernoulliGame::from_f64(&[1e-6, 0.5, 0.0]).unwrap();
        let rg = rationalize(&g, RationalizeMode::Delta(0.01)).unwrap();
        assert_eq!(rg.clamped(), &[0]);
        assert_eq!(rg.denominator(), 100);
        assert_eq!(rg.counts(), &[1, 50, 0]);
        assert!(!shapley_racs(&rg).meta.warnings.is_empty());
    }

    #[test]
    fn racs_examples() {
        let rg = rationalize(&three_device(), RationalizeMode::Exact).unwrap();
        let v = shapley_racs(&rg);
        for (got, want) in v.values().iter().zip([0.332551, 0.221701, 0.110850]) {
            assert!(close(*got, want, 5e-7), "{got}");
        }
        let half = BernoulliGame::homogeneous(6, Probability::new(1, 2).unwrap()).unwrap();
        let rg = rationalize(&half, RationalizeMode::Exact).unwrap();
        assert_eq!(
            shapley_racs_exact(&rg).unwrap(),
            vec![BigRational::new(21.into(), 128.into()); 6]
        );
        let rg = rationalize(&seven_players(), RationalizeMode::Exact).unwrap();
        assert!(close(shared_factor(10, 31), 0.961848, 5e-7));
        assert!(close(shapley_racs(&rg)[0], 0.062055, 5e-7));
    }

    #[test]
    fn racs_exact_matches_published_fraction() {
        let g = BernoulliGame::homogeneous(6, Probability::new(3, 5).unwrap()).unwrap();
        let rg = rationalize(&g, RationalizeMode::Exact).unwrap();
        let v = shapley_racs_exact(&rg).unwrap();
        let want = BigRational::new(1248659262963u64.into(), 7629394531250u64.into());
        assert_eq!(v[0], want);
    }

    #[test]
    fn all_zero_game_is_flagged() {
        let rg = RationalizedGame::from_counts_unnamed(vec![0, 0], 4).unwrap();
        let v = shapley_racs(&rg);
        assert_eq!(v.values(), &[0.0, 0.0]);
        assert_eq!(v.meta.warnings.len(), 1);
    }

    #[test]
    fn regime_examples() {
        let rg = RationalizedGame::from_counts_unnamed(vec![2, 3], 100).unwrap();
        assert_eq!(classify_regime(&rg).label, RegimeLabel::Sparse);
        assert!(close(classify_regime(&rg).r, 0.05, 1e-15));
        let rg = RationalizedGame::from_counts_unnamed(vec![10, 10], 20).unwrap();
        assert_eq!(classify_regime(&rg).label, RegimeLabel::Critical);
        let rg = rationalize(&seven_players(), RationalizeMode::Exact).unwrap();
        let regime = classify_regime(&rg);
        assert_eq!(regime.label, RegimeLabel::Dense);
        assert!(close(regime.r, 3.1, 1e-12));
    }

    #[test]
    fn situation2_examples() {
        assert_eq!(correct_situation2(0.0), 0.0);
        assert!(close(correct_situation2(0.192454), 0.198577, 2e-6));
        let c = 1.0 - (-1.0f64).exp();
        let k = 1.0 - 2.0 / std::f64::consts::E;
        assert!(close(correct_situation2(c * k), k * (0.5 + 0.5 * k), 1e-15));
        assert!(close(correct_situation2(c * k), 0.167032, 5e-7));
    }

    #[test]
    fn situation3_examples() {
        let g = BernoulliGame::parse(&["0.05", "0.95", "0.95"]).unwrap();
        let one = Situation3Options {
            target: Target::One,
            ..Default::default()
        };
        let v = correct_situation3(&g, &one).unwrap();
        for (got, want) in v.values().iter().zip([0.0164, 0.4918, 0.4918]) {
            assert!(close(*got, want, 5e-4));
        }
        assert!(close(v.sum(), 1.0, 1e-12));
        let v = correct_situation3(&g, &Situation3Options::default()).unwrap();
        for (got, want) in v.values().iter().zip([0.016355, 0.490635, 0.490635]) {
            assert!(close(*got, want, 5e-7), "{got}");
        }
        assert!(close(v.sum(), 0.997625, 1e-12));

        let flat = BernoulliGame::parse(&["0.9"; 5]).unwrap();
        let v = correct_situation3(&flat, &Situation3Options::default()).unwrap();
        let te = flat.total_capacity();
        assert!(v.values().iter().all(|&x| close(x, te / 5.0, 1e-15)));
    }

    #[test]
    fn situation3_falls_back_without_high_players() {
        let g = BernoulliGame::parse(&["0.5"; 8]).unwrap();
        let v = correct_situation3(&g, &Situation3Options::default()).unwrap();
        assert_eq!(v.method(), Method::Racs);
        assert_eq!(v.meta.warnings.len(), 1);
        let bad = Situation3Options {
            tau_low: 0.8,
            tau_high: 0.2,
            target: Target::Te,
        };
        assert!(correct_situation3(&g, &bad).is_err());
    }

    #[test]
    fn meanfield_examples() {
        let rg = rationalize(&three_device(), RationalizeMode::Exact).unwrap();
        let v = meanfield_racs(&rg).unwrap();
        assert!(close(v[0], 0.316060, 5e-7));
        assert!(close(v.sum(), 1.0 - (-1.0f64).exp(), 1e-15));
        let rg = RationalizedGame::from_counts_unnamed(vec![1], 1000).unwrap();
        assert!(close(meanfield_racs(&rg).unwrap()[0], 0.0009995, 5e-10));
        let rg = RationalizedGame::from_counts_unnamed(vec![2, 2, 2, 2, 2], 3).unwrap();
        assert!(matches!(
            meanfield_racs(&rg),
            Err(Error::MeanFieldValidity { .. })
        ));
    }

    #[test]
    fn leading_bound_examples() {
        let rg = rationalize(&seven_players(), RationalizeMode::Exact).unwrap();
        let b = error_bound_thm(&rg, 0).unwrap();
        assert!(close(b.leading, 0.31, 1e-15));
        assert_eq!(b.weight_discrepancy, 0.0);
        let rg = RationalizedGame::from_counts_unnamed(vec![1; 6], 2).unwrap();
        assert!(close(error_bound_thm(&rg, 0).unwrap().bound(), 0.75, 1e-15));
    }

    #[test]
    fn decomposition_examples() {
        let rg = RationalizedGame::from_counts_unnamed(vec![1], 2).unwrap();
        assert_eq!(error_decomposition(&rg, 0).unwrap().0, 0.0);
        let rg = RationalizedGame::from_counts_unnamed(vec![3], 5).unwrap();
        assert!(close(error_decomposition(&rg, 0).unwrap().0, 0.112, 1e-12));
        let rg = rationalize(&three_device(), RationalizeMode::Exact).unwrap();
        let (_, e2) = error_decomposition(&rg, 0).unwrap();
        assert!(close(e2, 0.092968, 5e-7));
        let report = error_report(&rg, 0).unwrap();
        assert!(report.e1 >= 0.0 && report.thm_bound > 0.0);
    }

    #[test]
    fn perturbation_examples() {
        assert!(close(perturbation_bound(0.01, 7), 0.04, 1e-15));
        assert_eq!(perturbation_bound(0.0, 9), 0.0);
        assert!(close(pick_delta(0.02, 9), 0.004, 1e-15));
    }

    #[test]
    fn counts_validation() {
        assert!(RationalizedGame::from_counts_unnamed(vec![7], 6).is_err());
        assert!(RationalizedGame::from_counts_unnamed(vec![], 6).is_err());
        assert!(RationalizedGame::from_counts_unnamed(vec![1], 0).is_err());
    }
}
