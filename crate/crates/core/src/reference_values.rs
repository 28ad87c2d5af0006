//! Published benchmark values and their disagreements with the exact engine.
//!
//! Several printed "exact" columns do not match the exact Shapley value of
//! the stated game. [`errata`] recomputes every listing and reports the
//! entries that are off by more than a threshold.

use serde::Serialize;

use crate::error::Result;
use crate::exact::exact_vector;
use crate::game::{BernoulliGame, Method};

/// One printed column for a benchmark game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedListing {
    pub name: &'static str,
    pub probabilities: &'static [&'static str],
    /// Values printed as exact Shapley values, one per player.
    pub exact: &'static [f64],
    /// Values printed for the approximation shown beside them.
    pub approx: &'static [f64],
}

pub const SEVEN_PLAYER_PROBS: [&str; 7] = ["0.2", "0.5", "0.7", "0.3", "0.1", "0.9", "0.4"];
pub const THREE_DEVICE_PROBS: [&str; 3] = ["1/2", "1/3", "1/6"];
pub const BIMODAL_PROBS: [&str; 3] = ["0.05", "0.95", "0.95"];

/// Seven-player benchmark, four-decimal listing beside the sub-player estimate.
pub const SEVEN_PLAYER_SHORT: PrintedListing = PrintedListing {
    name: "seven-player benchmark (4 decimals)",
    probabilities: &SEVEN_PLAYER_PROBS,
    exact: &[0.0621, 0.1763, 0.2118, 0.0967, 0.0308, 0.2954, 0.1222],
    approx: &[0.0632, 0.1580, 0.2212, 0.0948, 0.0316, 0.2844, 0.1264],
};

/// Seven-player benchmark, six-decimal listing beside the layered estimate.
pub const SEVEN_PLAYER_LONG: PrintedListing = PrintedListing {
    name: "seven-player benchmark (6 decimals)",
    probabilities: &SEVEN_PLAYER_PROBS,
    exact: &[
        0.062074, 0.176342, 0.211763, 0.096693, 0.030815, 0.295382, 0.122157,
    ],
    approx: &[
        0.052189, 0.174526, 0.201563, 0.099119, 0.008894, 0.273576, 0.140106,
    ],
};

/// Three-device network, sub-player estimate.
pub const THREE_DEVICE: PrintedListing = PrintedListing {
    name: "three-device network",
    probabilities: &THREE_DEVICE_PROBS,
    exact: &[0.3275, 0.2475, 0.1080],
    approx: &[0.3326, 0.2217, 0.1108],
};

/// Bimodal game, layered estimate.
pub const BIMODAL_LAYERED: PrintedListing = PrintedListing {
    name: "bimodal game, layered estimate",
    probabilities: &BIMODAL_PROBS,
    exact: &[0.0176, 0.4912, 0.4912],
    approx: &[0.0013, 0.4993, 0.4993],
};

/// Bimodal game, sub-player estimate.
pub const BIMODAL_RACS: PrintedListing = PrintedListing {
    name: "bimodal game, sub-player estimate",
    probabilities: &BIMODAL_PROBS,
    exact: &[0.0176, 0.4912, 0.4912],
    approx: &[0.0222, 0.4213, 0.4213],
};

/// Bimodal game, dense-regime correction normalized to one.
pub const BIMODAL_CORRECTED: PrintedListing = PrintedListing {
    name: "bimodal game, corrected and normalized",
    probabilities: &BIMODAL_PROBS,
    exact: &[0.0176, 0.4912, 0.4912],
    approx: &[0.0164, 0.4918, 0.4918],
};

/// Homogeneous six-player game with `p = 3/5`: printed exact and estimate.
pub const HOMOGENEOUS_SIX_PRINTED: (f64, f64) = (0.1660, 0.1637);

pub const ALL_LISTINGS: [PrintedListing; 6] = [
    SEVEN_PLAYER_SHORT,
    SEVEN_PLAYER_LONG,
    THREE_DEVICE,
    BIMODAL_LAYERED,
    BIMODAL_RACS,
    BIMODAL_CORRECTED,
];

impl PrintedListing {
    pub fn game(&self) -> Result<BernoulliGame> {
        BernoulliGame::parse(self.probabilities)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErratumEntry {
    pub listing: &'static str,
    /// 1-based player number as printed.
    pub player: usize,
    pub printed: f64,
    pub exact: f64,
    pub deviation: f64,
}

/// Printed exact values that differ from the exact engine by more than
/// `threshold`.
pub fn errata(threshold: f64) -> Result<Vec<ErratumEntry>> {
    let mut out = Vec::new();
    for listing in ALL_LISTINGS {
        let exact = exact_vector(&listing.game()?, Method::ExactEnum)?;
        for (i, (&printed, &value)) in listing.exact.iter().zip(exact.values()).enumerate() {
            let deviation = (printed - value).abs();
            if deviation > threshold {
                out.push(ErratumEntry {
                    listing: listing.name,
                    player: i + 1,
                    printed,
                    exact: value,
                    deviation,
                });
            }
        }
    }
    Ok(out)
}

/// Returns the listing whose game has exactly these probabilities.
pub fn matching_listing(game: &BernoulliGame) -> Option<PrintedListing> {
    ALL_LISTINGS.into_iter().find(|listing| {
        listing
            .game()
            .map(|g| {
                g.n() == game.n()
                    && g.players()
                        .iter()
                        .zip(game.players())
                        .all(|(a, b)| a.p == b.p)
            })
            .unwrap_or(false)
    })
}
