//! The hitting capacity, its belief function and Möbius masses, and the
//! random set they all describe.

use racs_shapley::capacity::{
    belief_from_game, build_capacity_table, conjugate, hitting_probability, mobius_transform,
    random_set_masses, validate_capacity,
};
use racs_shapley::exact::shapley_exact_capacity;
use racs_shapley::game::BernoulliGame;

fn subset(mask: u32, n: usize) -> String {
    let items: Vec<String> = (0..n)
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| (j + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

fn main() -> racs_shapley::error::Result<()> {
    let game = BernoulliGame::parse(&["1/2", "1/3", "1/6"])?;
    let n = game.n();
    let hitting = build_capacity_table(&game)?;
    let belief = belief_from_game(&game)?;
    let hitting_mobius = mobius_transform(&hitting);
    let masses = random_set_masses(&game)?;

    println!(
        "{:<9} {:>9} {:>9} {:>12} {:>9} {:>9}",
        "S", "T(S)", "Bel(S)", "mobius T", "P(X=S)", "hit(S)"
    );
    for s in 0..1u32 << n {
        println!(
            "{:<9} {:>9.6} {:>9.6} {:>12.6} {:>9.6} {:>9.6}",
            subset(s, n),
            hitting.value(s),
            belief.value(s),
            hitting_mobius.mass(s),
            masses.mass(s),
            hitting_probability(&masses, s)
        );
    }
    let report = validate_capacity(&hitting);
    println!(
        "\nhitting capacity totally monotone: {}",
        report.is_belief()
    );
    println!(
        "negative Möbius masses at {:?}",
        hitting_mobius.negative_subsets()
    );

    let dual = conjugate(&belief)?;
    for i in 0..n {
        println!(
            "player {}: Shapley of Bel {:.6}, of its conjugate {:.6}",
            i + 1,
            shapley_exact_capacity(&belief, i)?,
            shapley_exact_capacity(&dual, i)?
        );
    }
    Ok(())
}
