//! A million players: the O(n) estimates against the O(n^2) exact route on
//! a smaller slice, and enumeration at n = 20.

use std::time::Instant;

use racs_shapley::exact::exact_vector;
use racs_shapley::game::{BernoulliGame, Method};
use racs_shapley::layered::{shapley_layered, LayerVariant};
use racs_shapley::racs::{shapley_racs, RationalizedGame};

fn main() -> racs_shapley::error::Result<()> {
    let n = 1_000_000;
    let l = 10_000_000u64;
    let counts: Vec<u64> = (0..n as u64)
        .map(|i| 1 + (i * 2_654_435_761) % 20)
        .collect();
    let rg = RationalizedGame::from_counts_unnamed(counts, l)?;

    let t = Instant::now();
    let racs = shapley_racs(&rg);
    println!(
        "racs     n = {n}: {:?}, sum {:.6}, regime {:?}",
        t.elapsed(),
        racs.sum(),
        racs.meta.regime.map(|r| r.label.as_str())
    );

    let probs: Vec<f64> = rg.counts().iter().map(|&m| m as f64 / l as f64).collect();
    let t = Instant::now();
    let layered = shapley_layered(&probs, LayerVariant::Unweighted, None)?;
    println!(
        "layered  n = {n}: {:?}, sum {:.6}",
        t.elapsed(),
        layered.sum()
    );

    let slice = BernoulliGame::from_f64(&probs[..10_000])?;
    let t = Instant::now();
    let exact = exact_vector(&slice, Method::ExactSymmetric)?;
    println!(
        "symmetric n = 10000: {:?}, sum {:.6}",
        t.elapsed(),
        exact.sum()
    );

    let small = BernoulliGame::from_f64(&probs[..20])?;
    let t = Instant::now();
    exact_vector(&small, Method::ExactEnum)?;
    println!("enumeration n = 20: {:?}", t.elapsed());
    Ok(())
}
