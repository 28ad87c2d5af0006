//! Cross-checks between independent routes, runnable from the command line.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::capacity::{
    build_capacity_table, conjugate, hitting_probability, random_set_masses, Capacity,
};
use crate::error::{Error, Result};
use crate::exact::{exact_vector, shapley_exact_capacity};
use crate::game::{BernoulliGame, Method};
use crate::probability::Probability;
use crate::racs::{
    error_bound_thm, perturbation_bound, rationalize, shapley_racs, RationalizeMode,
};
use crate::rng::CounterRng;
use crate::weights::{beta_weight_identity, shapley_weight};

const VERIFY_SEED: u64 = 0x5EED_0F_C0FFEE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyScope {
    Identity,
    Oracles,
    Bounds,
    All,
}

impl FromStr for VerifyScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "identity" => Ok(VerifyScope::Identity),
            "oracles" => Ok(VerifyScope::Oracles),
            "bounds" => Ok(VerifyScope::Bounds),
            "all" => Ok(VerifyScope::All),
            other => Err(Error::Domain(format!("unknown verify scope `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// Largest observed discrepancy (or ratio, for bound checks).
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub scope: VerifyScope,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    worst: f64,
    passed: bool,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            cases: 0,
            worst: 0.0,
            passed: true,
        }
    }

    /// Records a discrepancy that must not exceed the tolerance.
    fn within(&mut self, discrepancy: f64) {
        self.cases += 1;
        self.worst = self.worst.max(discrepancy);
        if !(discrepancy <= self.tolerance) {
            self.passed = false;
        }
    }

    fn exact(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            self.worst = 1.0;
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name.to_string(),
            passed: self.passed,
            cases: self.cases,
            worst: self.worst,
            tolerance: self.tolerance,
        }
    }
}

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// A game with `n` players whose probabilities are fractions `a/b`, `b <= max_den`.
pub fn random_rational_game(rng: &mut CounterRng, n: usize, max_den: u64) -> BernoulliGame {
    let ps: Vec<(u64, u64)> = (0..n)
        .map(|_| {
            let b = 1 + rng.below(max_den);
            (rng.below(b + 1), b)
        })
        .collect();
    BernoulliGame::from_fractions(&ps).expect("valid fractions")
}

fn identity_checks(out: &mut Vec<CheckResult>) -> Result<()> {
    let mut beta = Tally::new("beta-identity", 0.0);
    let mut total = Tally::new("weights-sum-to-one", 0.0);
    for n in 1..=20usize {
        let mut sum = BigRational::zero();
        let mut binom = BigRational::one();
        for s in 0..n {
            let w = shapley_weight(n, s)?;
            beta.exact(beta_weight_identity(n, s)? == w);
            sum += &binom * &w;
            binom = binom * ratio((n - 1 - s) as u64, (s + 1) as u64);
        }
        total.exact(sum.is_one());
    }
    out.push(beta.finish());
    out.push(total.finish());
    Ok(())
}

fn random_belief_capacity(rng: &mut CounterRng, n: usize) -> Result<Capacity> {
    let size = 1usize << n;
    let mut mass: Vec<f64> = (0..size)
        .map(|s| if s == 0 { 0.0 } else { rng.next_f64() })
        .collect();
    let total: f64 = mass.iter().sum();
    mass.iter_mut().for_each(|m| *m /= total);
    // Zeta transform: v(S) = sum of masses of subsets of S.
    for bit in 0..n {
        for s in 0..size {
            if s >> bit & 1 == 1 {
                mass[s] += mass[s ^ (1 << bit)];
            }
        }
    }
    mass[size - 1] = 1.0;
    Capacity::from_values(n, mass)
}

fn oracle_checks(out: &mut Vec<CheckResult>) -> Result<()> {
    let mut rng = CounterRng::new(VERIFY_SEED, 1);
    let mut agree = Tally::new("oracle-agreement", 1e-10);
    let mut efficiency = Tally::new("efficiency", 1e-10);
    let mut round_trip = Tally::new("random-set-round-trip", 1e-12);
    for _ in 0..100 {
        let n = 1 + rng.below(8) as usize;
        let game = random_rational_game(&mut rng, n, 12);
        let cap = build_capacity_table(&game)?;
        let routes = [
            Method::ExactEnum,
            Method::Permutation,
            Method::ExactSymmetric,
            Method::ExactIntegral,
        ]
        .map(|m| exact_vector(&game, m));
        let routes = routes.into_iter().collect::<Result<Vec<_>>>()?;
        for i in 0..n {
            let by_capacity = shapley_exact_capacity(&cap, i)?;
            let values: Vec<f64> = routes.iter().map(|v| v[i]).chain([by_capacity]).collect();
            let spread = values.iter().copied().fold(f64::MIN, f64::max)
                - values.iter().copied().fold(f64::MAX, f64::min);
            agree.within(spread);
        }
        efficiency.within((routes[0].sum() - game.total_capacity()).abs());
        let masses = random_set_masses(&game)?;
        for s in 0..(1u32 << n) {
            round_trip.within((hitting_probability(&masses, s) - cap.value(s)).abs());
        }
    }
    let mut conj = Tally::new("conjugate-invariance", 1e-10);
    for _ in 0..100 {
        let n = 1 + rng.below(8) as usize;
        let cap = random_belief_capacity(&mut rng, n)?;
        let dual = conjugate(&cap)?;
        for i in 0..n {
            conj.within(
                (shapley_exact_capacity(&cap, i)? - shapley_exact_capacity(&dual, i)?).abs(),
            );
        }
    }
    out.extend([
        agree.finish(),
        efficiency.finish(),
        round_trip.finish(),
        conj.finish(),
    ]);
    Ok(())
}

fn bound_checks(out: &mut Vec<CheckResult>) -> Result<()> {
    let mut rng = CounterRng::new(VERIFY_SEED, 2);

    // Rounding perturbation: ratio of observed change to the bound.
    let mut case2 = Tally::new("perturbation-bound", 1.0);
    for round in 0..100 {
        let delta = if round % 2 == 0 { 0.01 } else { 0.001 };
        let n = 1 + rng.below(10) as usize;
        let base = random_rational_game(&mut rng, n, 20);
        let grid = 100_000u64;
        let step = (delta * grid as f64) as u64;
        let moved: Vec<Probability> = base
            .players()
            .iter()
            .map(|pl| {
                let shift = rng.below(2 * step + 1) as i64 - step as i64;
                let scaled = pl.p.ratio() * BigRational::from_integer(BigInt::from(grid));
                let target = scaled + BigRational::from_integer(BigInt::from(shift));
                let clipped = target
                    .max(BigRational::zero())
                    .min(BigRational::from_integer(BigInt::from(grid)));
                Probability::from_ratio(clipped / BigRational::from_integer(BigInt::from(grid)))
            })
            .collect::<Result<_>>()?;
        let moved = BernoulliGame::from_probabilities(moved)?;
        let a = exact_vector(&base, Method::ExactSymmetric)?;
        let b = exact_vector(&moved, Method::ExactSymmetric)?;
        let bound = perturbation_bound(delta, n);
        for i in 0..n {
            case2.within((a[i] - b[i]).abs() / bound);
        }
    }

    // Sub-player estimate against its leading bound plus a unit residual.
    let mut thm = Tally::new("leading-error-bound", 1.0);
    for _ in 0..100 {
        let n = 1 + rng.below(10) as usize;
        let l = 20 + rng.below(180);
        let budget = l / 2;
        let counts: Vec<u64> = (0..n).map(|_| rng.below(budget / n as u64 + 1)).collect();
        let ps: Vec<(u64, u64)> = counts.iter().map(|&m| (m, l)).collect();
        let game = BernoulliGame::from_fractions(&ps)?;
        let rg = rationalize(&game, RationalizeMode::Exact)?;
        let racs = shapley_racs(&rg);
        let exact = exact_vector(&game, Method::ExactSymmetric)?;
        for i in 0..n {
            let b = error_bound_thm(&rg, i)?;
            let allowed = b.bound() + b.residual;
            let err = (racs[i] - exact[i]).abs();
            thm.within(if allowed > 0.0 {
                err / allowed
            } else if err == 0.0 {
                0.0
            } else {
                f64::INFINITY
            });
        }
    }

    // Sparse games: relative error of the sub-player estimate.
    let mut sparse = Tally::new("sparse-relative-error", 0.06);
    for _ in 0..100 {
        let n = 1 + rng.below(12) as usize;
        let cap = 100 / n as u64;
        let ps: Vec<(u64, u64)> = (0..n).map(|_| (1 + rng.below(cap), 1000)).collect();
        let game = BernoulliGame::from_fractions(&ps)?;
        let rg = rationalize(&game, RationalizeMode::Exact)?;
        let racs = shapley_racs(&rg);
        let exact = exact_vector(&game, Method::ExactSymmetric)?;
        for i in 0..n {
            sparse.within((racs[i] - exact[i]).abs() / exact[i]);
        }
    }
    out.extend([case2.finish(), thm.finish(), sparse.finish()]);
    Ok(())
}

pub fn run_verify(scope: VerifyScope) -> Result<VerifySummary> {
    let mut checks = Vec::new();
    if matches!(scope, VerifyScope::Identity | VerifyScope::All) {
        identity_checks(&mut checks)?;
    }
    if matches!(scope, VerifyScope::Oracles | VerifyScope::All) {
        oracle_checks(&mut checks)?;
    }
    if matches!(scope, VerifyScope::Bounds | VerifyScope::All) {
        bound_checks(&mut checks)?;
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifySummary {
        scope,
        passed,
        checks,
    })
}

impl VerifySummary {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<4} {:<24} cases {:>6}  worst {:.3e}  tol {:.1e}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.cases,
                c.worst,
                c.tolerance
            ));
        }
        out.push_str(if self.passed {
            "all checks passed\n"
        } else {
            "some checks failed\n"
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_scope_passes() {
        let s = run_verify(VerifyScope::Identity).unwrap();
        assert!(s.passed);
        assert_eq!(s.checks.len(), 2);
        assert_eq!(s.checks[0].cases, 210);
    }

    #[test]
    fn scopes_parse() {
        assert_eq!("ALL".parse::<VerifyScope>().unwrap(), VerifyScope::All);
        assert!("everything".parse::<VerifyScope>().is_err());
    }

    #[test]
    fn random_games_are_reproducible() {
        let a = random_rational_game(&mut CounterRng::new(3, 0), 5, 10);
        let b = random_rational_game(&mut CounterRng::new(3, 0), 5, 10);
        assert_eq!(a, b);
    }
}
