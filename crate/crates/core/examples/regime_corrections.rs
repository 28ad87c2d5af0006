//! Regime classification and the critical and dense corrections.

use racs_shapley::exact::exact_vector;
use racs_shapley::game::{BernoulliGame, Method};
use racs_shapley::racs::{
    classify_regime, rationalize, shapley_racs, shapley_racs_corrected, RationalizeMode,
    RegimeThresholds, Situation3Options, Target,
};

fn show(probs: &[&str], target: Target) -> racs_shapley::error::Result<()> {
    let game = BernoulliGame::parse(probs)?;
    let rg = rationalize(&game, RationalizeMode::Exact)?;
    let regime = classify_regime(&rg);
    let exact = exact_vector(&game, Method::ExactEnum)?;
    let raw = shapley_racs(&rg);
    let dense = Situation3Options {
        target,
        ..Default::default()
    };
    let corrected = shapley_racs_corrected(&game, &rg, &RegimeThresholds::default(), &dense)?;
    println!(
        "p = {probs:?}  regime {} (r = {:.3})",
        regime.label.as_str(),
        regime.r
    );
    println!("  exact     {:.6?}", exact.values());
    println!("  racs      {:.6?}", raw.values());
    println!("  corrected {:.6?}", corrected.values());
    Ok(())
}

fn main() -> racs_shapley::error::Result<()> {
    show(&["0.01", "0.02", "0.03"], Target::Te)?;
    show(&["0.3", "0.2", "0.25", "0.25"], Target::Te)?;
    show(&["0.05", "0.95", "0.95"], Target::Te)?;
    show(&["0.1", "0.95", "0.9", "0.85", "0.15"], Target::Te)?;
    show(&["0.1", "0.95", "0.9", "0.85", "0.15"], Target::One)?;
    Ok(())
}
