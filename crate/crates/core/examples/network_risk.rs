//! Device risk ranking from vulnerability counts, then a patch-level change.

use racs_shapley::report::emit::{emit, Format};
use racs_shapley::report::gamefile::parse_game_file;
use racs_shapley::report::risk::{risk_report, risk_report_output, risk_update, UpdateMode};

fn main() -> racs_shapley::error::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/network.json");
    let parsed = parse_game_file(path)?;
    let report = risk_report(&parsed)?;
    print!(
        "{}",
        emit(&risk_report_output(&parsed, &report)?, Format::Table, false)?
    );

    println!();
    for mode in [UpdateMode::FrozenBaseline, UpdateMode::Recompute] {
        let u = risk_update(&parsed, "db", 3, mode)?;
        println!(
            "db 2 -> 3 vulns ({mode:?}): {:.6} -> {:.6}, equal to {:?}",
            u.old_value, u.new_value, u.now_equal_to
        );
    }
    Ok(())
}
