//! Permutation sampling: estimates, standard errors and a convergence grid.

use racs_shapley::exact::exact_vector;
use racs_shapley::game::{BernoulliGame, Method};
use racs_shapley::monte_carlo::{mc_convergence_curve, shapley_mc, McConfig};

fn main() -> racs_shapley::error::Result<()> {
    let game = BernoulliGame::parse(&["0.2", "0.5", "0.7", "0.3", "0.1", "0.9", "0.4"])?;
    let exact = exact_vector(&game, Method::ExactSymmetric)?;
    let est = shapley_mc(&game, &McConfig::new(200_000, 42))?;
    for i in 0..game.n() {
        println!(
            "player {}: exact {:.6}  mc {:.6} ± {:.6}",
            i + 1,
            exact[i],
            est.values[i],
            est.stderr[i]
        );
    }

    println!("\nmax |error| by sample count");
    let grid = [1_000, 10_000, 100_000];
    let cells = mc_convergence_curve(&game, &[1, 2, 3], &grid, exact.values())?;
    for cell in cells {
        println!(
            "  seed {} K = {:>7}: {:.6}",
            cell.seed, cell.samples, cell.max_abs_error
        );
    }
    Ok(())
}
