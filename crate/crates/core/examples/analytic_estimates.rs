//! Mean-field binomial sums and the Riemann quadrature of the
//! multilinear-extension integral.

use racs_shapley::analytic::{
    qbar, shapley_binomial_closed, shapley_binomial_literal, shapley_riemann,
};
use racs_shapley::exact::shapley_exact_integral;
use racs_shapley::game::BernoulliGame;

fn main() -> racs_shapley::error::Result<()> {
    let game = BernoulliGame::parse(&["1/2", "1/3", "1/6"])?;
    let probs = game.probs();
    for i in 0..game.n() {
        println!(
            "player {}: qbar {:.4}  closed {:.6}  literal {:.6}  exact {:.6}",
            i + 1,
            qbar(probs, i)?,
            shapley_binomial_closed(probs, i)?,
            shapley_binomial_literal(probs, i)?,
            shapley_exact_integral(&game, i)?
        );
    }
    println!("\nRiemann sum for player 1:");
    let exact = shapley_exact_integral(&game, 0)?;
    for nodes in [3, 10, 100, 1_000, 10_000] {
        let r = shapley_riemann(probs, 0, nodes)?;
        println!("  N = {nodes:>6}: {r:.8}  error {:+.3e}", r - exact);
    }
    Ok(())
}
