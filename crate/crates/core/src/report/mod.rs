//! Command-line reports: game files, method dispatch, comparisons, device
//! risk ranking, the verification runner and output formats.

pub mod compare;
pub mod compute;
pub mod emit;
pub mod gamefile;
pub mod risk;
pub mod verify;
