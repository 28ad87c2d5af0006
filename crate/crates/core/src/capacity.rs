//! Dense set functions over at most [`MAX_TABLE_PLAYERS`] players, and the
//! Möbius / belief / random-set machinery that relates them.
//!
//! Subsets are `u32` bitmasks: bit `j` set means player `j` is in the subset.

use crate::error::{Error, Result};
use crate::game::BernoulliGame;

pub const MAX_TABLE_PLAYERS: usize = 24;

/// Tolerance used when classifying a table entry as zero, one or negative.
pub const TABLE_TOLERANCE: f64 = 1e-12;

fn check_table_size(n: usize) -> Result<()> {
    if n > MAX_TABLE_PLAYERS {
        return Err(Error::TooManyPlayers {
            n,
            max: MAX_TABLE_PLAYERS,
        });
    }
    Ok(())
}

/// A set function `v: 2^E -> R` stored densely by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct Capacity {
    n: usize,
    values: Vec<f64>,
    normalized: bool,
}

impl Capacity {
    /// Wraps a table of `2^n` values. The normalized flag is set when
    /// `v(E) = 1`; other invariants are checked by [`validate_capacity`].
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        check_table_size(n)?;
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(Error::TableSize {
                got: values.len(),
                expected,
            });
        }
        let normalized = (values[expected - 1] - 1.0).abs() <= TABLE_TOLERANCE;
        Ok(Self {
            n,
            values,
            normalized,
        })
    }

    /// Unanimity game `v_R(S) = 1` iff `S ⊇ R`.
    pub fn unanimity(n: usize, carrier: u32) -> Result<Self> {
        check_table_size(n)?;
        let values = (0..1u32 << n)
            .map(|s| if s & carrier == carrier { 1.0 } else { 0.0 })
            .collect();
        Self::from_values(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, subset: u32) -> f64 {
        self.values[subset as usize]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn full_set(&self) -> u32 {
        full_mask(self.n)
    }
}

fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Nonnegative masses on subsets, e.g. the law of a random set.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    n: usize,
    masses: Vec<f64>,
}

impl MassFunction {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, subset: u32) -> f64 {
        self.masses[subset as usize]
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }
}

/// Signed Möbius coefficients of an arbitrary capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusTable {
    n: usize,
    masses: Vec<f64>,
}

impl MobiusTable {
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, subset: u32) -> f64 {
        self.masses[subset as usize]
    }

    /// Subsets whose coefficient is below `-TABLE_TOLERANCE`.
    pub fn negative_subsets(&self) -> Vec<u32> {
        (0..self.masses.len() as u32)
            .filter(|&s| self.masses[s as usize] < -TABLE_TOLERANCE)
            .collect()
    }

    /// Succeeds when every coefficient is nonnegative (up to rounding), i.e.
    /// the capacity was a belief function.
    pub fn into_mass_function(self) -> Option<MassFunction> {
        if !self.negative_subsets().is_empty() {
            return None;
        }
        let masses = self.masses.into_iter().map(|m| m.max(0.0)).collect();
        Some(MassFunction { n: self.n, masses })
    }

    /// Zeta transform: `sum_{T ⊆ S} m(T)` for every `S`.
    pub fn inverse(&self) -> Vec<f64> {
        let mut v = self.masses.clone();
        for bit in 0..self.n {
            let b = 1usize << bit;
            for s in 0..v.len() {
                if s & b != 0 {
                    v[s] += v[s ^ b];
                }
            }
        }
        v
    }
}

/// `T(S)` for a bitmask subset. Returns 0 on the empty set.
pub fn capacity_of_subset(game: &BernoulliGame, subset: u32) -> f64 {
    game.capacity_of_mask(subset as u64)
}

/// `f[S] = prod_{j in S} (1 - p_j)` for every subset, by doubling.
fn avoidance_table(game: &BernoulliGame) -> Vec<f64> {
    let n = game.n();
    let mut table = vec![1.0f64; 1 << n];
    for (j, &p) in game.probs().iter().enumerate() {
        let b = 1usize << j;
        for s in 0..b {
            table[s | b] = table[s] * (1.0 - p);
        }
    }
    table
}

/// Materializes the hitting capacity `T` of a game.
pub fn build_capacity_table(game: &BernoulliGame) -> Result<Capacity> {
    check_table_size(game.n())?;
    let values = avoidance_table(game).into_iter().map(|q| 1.0 - q).collect();
    Capacity::from_values(game.n(), values)
}

/// Containment functional `Bel(A) = P(X ⊆ A) = prod_{j not in A} (1 - p_j)`.
pub fn belief_from_game(game: &BernoulliGame) -> Result<Capacity> {
    check_table_size(game.n())?;
    let f = avoidance_table(game);
    let full = f.len() - 1;
    let values = (0..f.len()).map(|a| f[full ^ a]).collect();
    Capacity::from_values(game.n(), values)
}

/// `m(S) = sum_{T ⊆ S} (-1)^{|S|-|T|} v(T)` via the fast subset transform.
pub fn mobius_transform(cap: &Capacity) -> MobiusTable {
    let mut m = cap.values.clone();
    for bit in 0..cap.n {
        let b = 1usize << bit;
        for s in 0..m.len() {
            if s & b != 0 {
                m[s] -= m[s ^ b];
            }
        }
    }
    MobiusTable {
        n: cap.n,
        masses: m,
    }
}

/// Law of the Bernoulli random set: `P(X = F) = prod_{F} p_j prod_{not F} (1 - p_j)`.
pub fn random_set_masses(game: &BernoulliGame) -> Result<MassFunction> {
    let n = game.n();
    check_table_size(n)?;
    let mut masses = vec![0.0f64; 1 << n];
    masses[0] = 1.0;
    for (j, &p) in game.probs().iter().enumerate() {
        let b = 1usize << j;
        for s in 0..b {
            let base = masses[s];
            masses[s] = base * (1.0 - p);
            masses[s | b] = base * p;
        }
    }
    Ok(MassFunction { n, masses })
}

/// `P(X ∩ S ≠ ∅) = sum_{F ∩ S ≠ ∅} m(F)`.
pub fn hitting_probability(mass: &MassFunction, subset: u32) -> f64 {
    mass.masses
        .iter()
        .enumerate()
        .filter(|(f, _)| (*f as u32) & subset != 0)
        .map(|(_, m)| m)
        .sum()
}

/// Dual capacity `u(S) = 1 - v(E \ S)`. Requires `v(E) = 1`.
pub fn conjugate(cap: &Capacity) -> Result<Capacity> {
    if !cap.normalized {
        return Err(Error::NotNormalized);
    }
    let full = cap.values.len() - 1;
    let values = (0..cap.values.len())
        .map(|s| 1.0 - cap.values[full ^ s])
        .collect();
    Capacity::from_values(cap.n, values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub empty_is_zero: bool,
    pub total_is_one: bool,
    /// Pairs `(S, S ∪ {j})` with `v(S) > v(S ∪ {j})`. Checking covering
    /// pairs is sufficient for monotonicity.
    pub monotonicity_violations: Vec<(u32, u32)>,
    pub negative_masses: Vec<u32>,
}

impl CapacityReport {
    pub fn is_monotone(&self) -> bool {
        self.monotonicity_violations.is_empty()
    }

    /// Nonnegative Möbius masses: the capacity is totally monotone.
    pub fn is_belief(&self) -> bool {
        self.negative_masses.is_empty()
    }

    pub fn is_capacity(&self) -> bool {
        self.empty_is_zero && self.is_monotone()
    }
}

pub fn validate_capacity(cap: &Capacity) -> CapacityReport {
    let v = &cap.values;
    let mut violations = Vec::new();
    for s in 0..v.len() {
        for j in 0..cap.n {
            let b = 1usize << j;
            if s & b == 0 && v[s] > v[s | b] + TABLE_TOLERANCE {
                violations.push((s as u32, (s | b) as u32));
            }
        }
    }
    CapacityReport {
        empty_is_zero: v[0].abs() <= TABLE_TOLERANCE,
        total_is_one: cap.normalized,
        monotonicity_violations: violations,
        negative_masses: mobius_transform(cap).negative_subsets(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    fn halves() -> BernoulliGame {
        BernoulliGame::from_fractions(&[(1, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn capacity_table_examples() {
        let g = BernoulliGame::from_fractions(&[(3, 10)]).unwrap();
        let t = build_capacity_table(&g).unwrap();
        assert_eq!(t.value(0), 0.0);
        assert!(close(t.value(1), 0.3));
        let t = build_capacity_table(&halves()).unwrap();
        assert_eq!(t.values(), &[0.0, 0.5, 0.5, 0.75]);
        let big = BernoulliGame::from_f64(&[0.1; 25]).unwrap();
        assert!(matches!(
            build_capacity_table(&big),
            Err(Error::TooManyPlayers { .. })
        ));
        let g = BernoulliGame::from_fractions(&[(1, 2), (1, 3), (1, 6)]).unwrap();
        assert_eq!(capacity_of_subset(&g, 0), 0.0);
        assert!(close(capacity_of_subset(&g, 0b011), 2.0 / 3.0));
    }

    #[test]
    fn mobius_of_belief_and_hitting() {
        let g = halves();
        let bel = belief_from_game(&g).unwrap();
        let m = mobius_transform(&bel);
        for s in 0..4 {
            assert!(close(m.mass(s), 0.25));
        }
        let hit = build_capacity_table(&g).unwrap();
        let m = mobius_transform(&hit);
        assert_eq!(m.masses(), &[0.0, 0.5, 0.5, -0.25]);
        assert_eq!(m.negative_subsets(), vec![3]);
        assert!(m.into_mass_function().is_none());

        let zero = Capacity::from_values(2, vec![0.0; 4]).unwrap();
        assert!(mobius_transform(&zero).masses().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn belief_examples() {
        let bel = belief_from_game(&halves()).unwrap();
        assert!(close(bel.value(0b01), 0.5));
        assert_eq!(bel.value(0b11), 1.0);
        assert!(bel.is_normalized());
        let g = BernoulliGame::parse(&["0.2", "0.5"]).unwrap();
        assert!(close(belief_from_game(&g).unwrap().value(0), 0.4));
    }

    #[test]
    fn random_set_mass_examples() {
        let m = random_set_masses(&halves()).unwrap();
        assert!(m.masses().iter().all(|&x| close(x, 0.25)));
        let ones = BernoulliGame::from_fractions(&[(1, 1); 3]).unwrap();
        let m = random_set_masses(&ones).unwrap();
        assert_eq!(m.mass(0b111), 1.0);
        assert_eq!(m.total(), 1.0);
        let zeros = BernoulliGame::from_fractions(&[(0, 1); 3]).unwrap();
        assert_eq!(random_set_masses(&zeros).unwrap().mass(0), 1.0);

        let g = BernoulliGame::parse(&["0.2", "0.5", "0.7"]).unwrap();
        let via_belief = mobius_transform(&belief_from_game(&g).unwrap());
        let direct = random_set_masses(&g).unwrap();
        for s in 0..8 {
            assert!(close(via_belief.mass(s), direct.mass(s)));
        }
    }

    #[test]
    fn hitting_probability_examples() {
        let m = random_set_masses(&halves()).unwrap();
        assert_eq!(hitting_probability(&m, 0), 0.0);
        assert!(close(hitting_probability(&m, 0b01), 0.5));
        let g = BernoulliGame::parse(&["0.2", "0.5"]).unwrap();
        let m = random_set_masses(&g).unwrap();
        assert!(close(hitting_probability(&m, 0b11), 0.6));
    }

    #[test]
    fn conjugate_examples() {
        let bel = belief_from_game(&halves()).unwrap();
        let u = conjugate(&bel).unwrap();
        assert!(close(u.value(0b01), 0.5));
        let unanimity = Capacity::unanimity(3, 0b111).unwrap();
        let u = conjugate(&unanimity).unwrap();
        assert_eq!(u.value(0), 0.0);
        assert!((1..8).all(|s| u.value(s) == 1.0));
        assert_eq!(conjugate(&u).unwrap(), unanimity);

        let hit = build_capacity_table(&halves()).unwrap();
        assert!(matches!(conjugate(&hit), Err(Error::NotNormalized)));
    }

    #[test]
    fn validation_reports() {
        let g = BernoulliGame::parse(&["0.3", "0.6", "0.5"]).unwrap();
        let r = validate_capacity(&build_capacity_table(&g).unwrap());
        assert!(r.is_capacity());
        assert!(!r.total_is_one);
        assert!(!r.is_belief());

        let r = validate_capacity(&belief_from_game(&g).unwrap());
        assert!(r.is_belief());
        assert!(!r.empty_is_zero);

        let bad = Capacity::from_values(2, vec![0.0, 0.8, 0.2, 0.5]).unwrap();
        let r = validate_capacity(&bad);
        assert_eq!(r.monotonicity_violations, vec![(0b01, 0b11)]);
    }

    #[test]
    fn table_size_is_checked() {
        assert!(matches!(
            Capacity::from_values(2, vec![0.0; 3]),
            Err(Error::TableSize {
                got: 3,
                expected: 4
            })
        ));
    }
}
