//! Rounding real probabilities to a decimal grid, and what it costs.

use racs_shapley::exact::exact_vector;
use racs_shapley::game::{BernoulliGame, Method};
use racs_shapley::racs::{
    perturbation_bound, pick_delta, rationalize, shapley_racs, RationalizeMode,
};

fn main() -> racs_shapley::error::Result<()> {
    let probs = [
        std::f64::consts::FRAC_1_PI,
        0.5_f64.sqrt() / 2.0,
        1.0 / std::f64::consts::E,
        0.05,
    ];
    let game = BernoulliGame::from_f64(&probs)?;
    let exact = exact_vector(&game, Method::ExactSymmetric)?;
    let n = game.n();
    for delta in [0.05, 0.005, 0.0005] {
        let rg = rationalize(&game, RationalizeMode::Delta(delta))?;
        let rounded = exact_vector(&rg.to_game()?, Method::ExactSymmetric)?;
        let shift = (0..n)
            .map(|i| (rounded[i] - exact[i]).abs())
            .fold(0.0, f64::max);
        let racs = shapley_racs(&rg);
        println!(
            "delta {delta:<7} l = {:<6} counts {:?}  max |shift| {shift:.2e} <= {:.2e}   racs {:.4?}",
            rg.denominator(),
            rg.counts(),
            perturbation_bound(rg.rounding_delta(), n),
            racs.values()
        );
    }
    println!(
        "\ntolerance for a 0.01 guarantee with n = {n}: delta = {:.5}",
        pick_delta(0.01, n)
    );
    Ok(())
}
