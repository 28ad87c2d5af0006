//! JSON game files.
//!
//! Two forms are accepted. Probability form gives every device a `p` string
//! (`"1/3"`, `"0.25"`, `"1"`). Count form gives every device an integer
//! `vulns` and the file a shared `denominator`, so that `p_i = vulns_i / l`.
//!
//! ```json
//! { "denominator": 6,
//!   "devices": [ {"id": "web", "vulns": 3}, {"id": "db", "vulns": 2} ] }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{BernoulliGame, Player};
use crate::probability::Probability;
use crate::racs::RationalizedGame;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vulns: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub devices: Vec<DeviceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<u64>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

/// A validated game, plus its sub-player counts when the file gave them.
#[derive(Debug, Clone)]
pub struct ParsedGame {
    pub game: BernoulliGame,
    pub rationalized: Option<RationalizedGame>,
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::GameFile(msg.into())
}

impl GameFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    pub fn validate(&self) -> Result<ParsedGame> {
        if self.devices.is_empty() {
            return Err(invalid("no devices"));
        }
        let with_p = self.devices.iter().filter(|d| d.p.is_some()).count();
        let with_vulns = self.devices.iter().filter(|d| d.vulns.is_some()).count();
        let n = self.devices.len();
        let ids: Vec<String> = self.devices.iter().map(|d| d.id.clone()).collect();

        if with_p == n && with_vulns == 0 && self.denominator.is_none() {
            let players = self
                .devices
                .iter()
                .map(|d| {
                    let text = d.p.as_deref().unwrap_or_default();
                    let p: Probability = text
                        .parse()
                        .map_err(|e| invalid(format!("device `{}`: {e}", d.id)))?;
                    Ok(Player {
                        id: d.id.clone(),
                        p,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let game = BernoulliGame::new(players).map_err(|e| invalid(e.to_string()))?;
            return Ok(ParsedGame {
                game,
                rationalized: None,
                metadata: self.metadata.clone(),
            });
        }

        if with_vulns == n && with_p == 0 {
            let l = self
                .denominator
                .ok_or_else(|| invalid("count form needs a `denominator`"))?;
            if l == 0 {
                return Err(invalid("denominator must be at least 1"));
            }
            let counts: Vec<u64> = self.devices.iter().map(|d| d.vulns.unwrap_or(0)).collect();
            if let Some(d) = self.devices.iter().find(|d| d.vulns.unwrap_or(0) > l) {
                return Err(invalid(format!(
                    "device `{}`: vulns {} exceed denominator {l}",
                    d.id,
                    d.vulns.unwrap_or(0)
                )));
            }
            let rg = RationalizedGame::from_counts(ids, counts, l)
                .map_err(|e| invalid(e.to_string()))?;
            let game = rg.to_game().map_err(|e| invalid(e.to_string()))?;
            return Ok(ParsedGame {
                game,
                rationalized: Some(rg),
                metadata: self.metadata.clone(),
            });
        }

        Err(invalid(
            "every device needs `p` (probability form) or every device needs `vulns` with a file-level `denominator` (count form), not a mix",
        ))
    }
}

pub fn parse_game_str(text: &str) -> Result<ParsedGame> {
    GameFile::from_json(text)?.validate()
}

pub fn parse_game_file(path: impl AsRef<Path>) -> Result<ParsedGame> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    parse_game_str(&text)
}
