//! Device risk ranking from vulnerability counts.
//!
//! A device with `m_i` known vulnerabilities over a base failure unit `l`
//! fails with probability `m_i / l`; its share of systemic risk is the
//! sub-player estimate `(m_i/m)(1 - (1 - 1/l)^m)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_vector, SYMMETRIC_WEIGHTED_MAX};
use crate::game::Method;
use crate::racs::{classify_regime, shapley_racs, shared_factor, RationalizedGame};
use crate::reference_values::matching_listing;
use crate::report::compare::{relative_error_pct, COMPARE_ENUM_MAX};
use crate::report::compute::header_lines;
use crate::report::emit::{pct, sig6, PlayerInfo, Report, Row, TextTable};
use crate::report::gamefile::ParsedGame;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskEntry {
    pub rank: usize,
    pub id: String,
    pub vulns: u64,
    pub value: f64,
    pub percent: f64,
    /// Exact Shapley value, when the game is small enough to check.
    pub exact: Option<f64>,
    pub rel_error_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskReport {
    /// Sorted by descending value; ties keep file order.
    pub entries: Vec<RiskEntry>,
    pub denominator: u64,
    pub total_vulns: u128,
    pub shared_factor: f64,
    pub exact_method: Option<String>,
    pub footnotes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateMode {
    /// Recompute `m` and the shared factor with the new count.
    #[default]
    Recompute,
    /// Keep `m` and the shared factor of the baseline; only the updated
    /// device's share changes.
    FrozenBaseline,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskUpdate {
    pub device: String,
    pub old_vulns: u64,
    pub new_vulns: u64,
    pub old_value: f64,
    pub new_value: f64,
    pub frozen_baseline: bool,
    /// Devices whose value now equals the updated device's.
    pub now_equal_to: Vec<String>,
    pub report: RiskReport,
}

fn counts_of(parsed: &ParsedGame) -> Result<&RationalizedGame> {
    parsed.rationalized.as_ref().ok_or_else(|| {
        Error::GameFile("risk reports need the count form (`vulns` plus `denominator`)".into())
    })
}

fn exact_check(rg: &RationalizedGame) -> Result<Option<(Method, Vec<f64>)>> {
    let n = rg.n();
    let method = if n <= COMPARE_ENUM_MAX {
        Method::ExactEnum
    } else if n <= SYMMETRIC_WEIGHTED_MAX {
        Method::ExactSymmetric
    } else {
        return Ok(None);
    };
    let v = exact_vector(&rg.to_game()?, method)?;
    Ok(Some((method, v.values().to_vec())))
}

fn build(rg: &RationalizedGame, values: &[f64], factor: f64, total: u128) -> Result<RiskReport> {
    let check = exact_check(rg)?;
    let mut entries: Vec<RiskEntry> = rg
        .ids()
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let exact = check.as_ref().map(|(_, v)| v[i]);
            RiskEntry {
                rank: 0,
                id: id.clone(),
                vulns: rg.counts()[i],
                value: values[i],
                percent: values[i] * 100.0,
                exact,
                rel_error_pct: exact.and_then(|e| relative_error_pct(values[i], e)),
            }
        })
        .collect();
    entries.sort_by(|a, b| b.value.partial_cmp(&a.value).expect("finite values"));
    for (k, e) in entries.iter_mut().enumerate() {
        e.rank = k + 1;
    }
    let mut footnotes = Vec::new();
    if check.is_none() {
        footnotes.push("exact check skipped: too many devices".to_string());
    }
    if let Ok(game) = rg.to_game() {
        if let Some(listing) = matching_listing(&game) {
            let printed: Vec<String> = listing.exact.iter().map(|x| format!("{x:.4}")).collect();
            footnotes.push(format!(
                "note: a published listing for this game prints exact values [{}]; the exact engine gives the values in the Exact column",
                printed.join(", ")
            ));
        }
    }
    Ok(RiskReport {
        entries,
        denominator: rg.denominator(),
        total_vulns: total,
        shared_factor: factor,
        exact_method: check.map(|(m, _)| m.to_string()),
        footnotes,
    })
}

pub fn risk_report(parsed: &ParsedGame) -> Result<RiskReport> {
    let rg = counts_of(parsed)?;
    let v = shapley_racs(rg);
    build(
        rg,
        v.values(),
        shared_factor(rg.denominator(), rg.total()),
        rg.total(),
    )
}

pub fn risk_update(
    parsed: &ParsedGame,
    device: &str,
    vulns: u64,
    mode: UpdateMode,
) -> Result<RiskUpdate> {
    let rg = counts_of(parsed)?;
    let i = rg
        .index_of(device)
        .ok_or_else(|| Error::UnknownPlayer(device.to_string()))?;
    let base = shapley_racs(rg);
    let updated = rg.with_count(i, vulns)?;
    let (values, factor, total) = match mode {
        UpdateMode::Recompute => {
            let v = shapley_racs(&updated);
            (
                v.values().to_vec(),
                shared_factor(updated.denominator(), updated.total()),
                updated.total(),
            )
        }
        UpdateMode::FrozenBaseline => {
            let factor = shared_factor(rg.denominator(), rg.total());
            let mut values = base.values().to_vec();
            values[i] = if rg.total() == 0 {
                0.0
            } else {
                vulns as f64 / rg.total() as f64 * factor
            };
            (values, factor, rg.total())
        }
    };
    let new_value = values[i];
    let now_equal_to = updated
        .ids()
        .iter()
        .enumerate()
        .filter(|&(j, _)| {
            j != i && (values[j] - new_value).abs() <= 1e-12 * new_value.abs().max(1.0)
        })
        .map(|(_, id)| id.clone())
        .collect();
    Ok(RiskUpdate {
        device: device.to_string(),
        old_vulns: rg.counts()[i],
        new_vulns: vulns,
        old_value: base[i],
        new_value,
        frozen_baseline: mode == UpdateMode::FrozenBaseline,
        now_equal_to,
        report: build(&updated, &values, factor, total)?,
    })
}

fn base_report(risk: &RiskReport, values_game: &RationalizedGame) -> Report {
    let players = values_game
        .ids()
        .iter()
        .zip(values_game.counts())
        .map(|(id, &m)| {
            let (a, b) = crate::racs::count_fraction(m, values_game.denominator());
            PlayerInfo {
                id: id.clone(),
                p: format!("{a}/{b}"),
                vulns: Some(m),
            }
        })
        .collect();
    let mut report = Report::new(
        values_game
            .to_game()
            .map(|g| g.total_capacity())
            .unwrap_or(f64::NAN),
        Some(classify_regime(values_game)),
        players,
    );
    let mut table = TextTable {
        headers: [
            "Rank", "Device", "m_i", "phi", "Risk %", "Exact", "Error(%)",
        ]
        .map(String::from)
        .to_vec(),
        rows: Vec::new(),
    };
    for e in &risk.entries {
        report.rows.push(Row {
            player: e.id.clone(),
            method: Method::Racs.to_string(),
            value: e.value,
            stderr: None,
            rel_error_pct: e.rel_error_pct,
        });
        table.rows.push(vec![
            e.rank.to_string(),
            e.id.clone(),
            e.vulns.to_string(),
            sig6(e.value),
            format!("{:.2}%", e.percent),
            e.exact.map(sig6).unwrap_or_else(|| "-".into()),
            pct(e.rel_error_pct),
        ]);
    }
    report.table = table;
    report.title = header_lines(&report);
    report.title.push(format!(
        "l = {}   m = {}   shared factor = {}",
        risk.denominator,
        risk.total_vulns,
        sig6(risk.shared_factor)
    ));
    if let Some(top) = risk.entries.first() {
        report
            .footer
            .push(format!("priority: patch `{}` first", top.id));
    }
    report.footer.extend(risk.footnotes.iter().cloned());
    report.extra = serde_json::to_value(risk).ok();
    report
}

pub fn risk_report_output(parsed: &ParsedGame, risk: &RiskReport) -> Result<Report> {
    Ok(base_report(risk, counts_of(parsed)?))
}

pub fn risk_update_output(parsed: &ParsedGame, update: &RiskUpdate) -> Result<Report> {
    let rg = counts_of(parsed)?;
    let i = rg
        .index_of(&update.device)
        .ok_or_else(|| Error::UnknownPlayer(update.device.clone()))?;
    let updated = rg.with_count(i, update.new_vulns)?;
    let mut report = base_report(&update.report, &updated);
    let mode = if update.frozen_baseline {
        "frozen baseline"
    } else {
        "recomputed totals"
    };
    report.title.push(format!(
        "update `{}`: vulns {} -> {}, phi {} -> {} ({mode})",
        update.device,
        update.old_vulns,
        update.new_vulns,
        sig6(update.old_value),
        sig6(update.new_value)
    ));
    if !update.now_equal_to.is_empty() {
        report.footer.push(format!(
            "`{}` now equal to {}",
            update.device,
            update.now_equal_to.join(", ")
        ));
    }
    report.extra = serde_json::to_value(update).ok();
    Ok(report)
}
