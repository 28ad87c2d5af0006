//! Loading a game file and writing the result in each output format.

use racs_shapley::report::compute::{compute_report, default_method, ComputeOptions};
use racs_shapley::report::emit::{emit, Format};
use racs_shapley::report::gamefile::parse_game_str;

const GAME: &str = r#"{
  "devices": [
    {"id": "gateway", "p": "1/4"},
    {"id": "nas", "p": "0.15"},
    {"id": "camera", "p": "2/5"}
  ],
  "metadata": {"site": "lab"}
}"#;

fn main() -> racs_shapley::error::Result<()> {
    let parsed = parse_game_str(GAME)?;
    let method = default_method(&parsed);
    let report = compute_report(&parsed, method, &ComputeOptions::default())?;
    for format in [Format::Table, Format::Csv, Format::Json] {
        println!("--- {format:?}");
        print!("{}", emit(&report, format, false)?);
    }
    Ok(())
}
