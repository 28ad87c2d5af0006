//! Seven-player benchmark: every estimator against subset enumeration, plus
//! the published values that disagree with the exact engine.

use racs_shapley::reference_values::errata;
use racs_shapley::report::compare::{compare, comparison_report};
use racs_shapley::report::compute::{ComputeOptions, MethodChoice};
use racs_shapley::report::emit::{emit, Format};
use racs_shapley::report::gamefile::parse_game_file;

fn main() -> racs_shapley::error::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/seven.json");
    let parsed = parse_game_file(path)?;
    let methods = [
        MethodChoice::Racs,
        MethodChoice::RacsCorrected,
        MethodChoice::Layered,
        MethodChoice::Binomial,
        MethodChoice::Mc,
    ];
    let opts = ComputeOptions {
        samples: 200_000,
        seed: 7,
        ..Default::default()
    };
    let cmp = compare(&parsed, &methods, &opts)?;
    print!(
        "{}",
        emit(&comparison_report(&parsed, &cmp), Format::Table, false)?
    );

    println!("\npublished exact values off by more than 1e-3:");
    for e in errata(1e-3)? {
        println!(
            "  {:<38} player {}  printed {:<9} exact {:.6}",
            e.listing, e.player, e.printed, e.exact
        );
    }
    Ok(())
}
