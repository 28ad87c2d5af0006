//! Side-by-side comparison of methods against an exact column.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::exact::exact_vector;
use crate::game::{Method, ShapleyVector};
use crate::racs::RegimeThresholds;
use crate::report::compute::{
    header_lines, player_infos, run_method, ComputeOptions, MethodChoice,
};
use crate::report::emit::{pct, sig6, Report, Row, TextTable};
use crate::report::gamefile::ParsedGame;

/// Largest game for which the exact column uses subset enumeration.
pub const COMPARE_ENUM_MAX: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub player: String,
    pub m_i: Option<u64>,
    pub exact: Option<f64>,
    /// `(method, value)` in the requested order.
    pub estimates: Vec<(String, f64)>,
    /// `(approx - exact) / exact * 100`; `None` when the exact value is 0.
    pub relative_error: Vec<(String, Option<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: String,
    pub max_abs_error: f64,
    pub mean_abs_error: f64,
    pub max_abs_rel_error_pct: Option<f64>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub exact_method: Method,
    pub exact_elapsed: Duration,
    pub rows: Vec<ComparisonRow>,
    pub summaries: Vec<MethodSummary>,
    pub vectors: Vec<ShapleyVector>,
}

pub fn relative_error_pct(approx: f64, exact: f64) -> Option<f64> {
    (exact != 0.0).then(|| (approx - exact) / exact * 100.0)
}

pub fn compare(
    parsed: &ParsedGame,
    methods: &[MethodChoice],
    opts: &ComputeOptions,
) -> Result<Comparison> {
    if methods.is_empty() {
        return Err(Error::Domain("compare needs at least one method".into()));
    }
    let game = &parsed.game;
    let exact_method = if game.n() <= COMPARE_ENUM_MAX {
        Method::ExactEnum
    } else {
        Method::ExactSymmetric
    };
    let started = Instant::now();
    let exact = exact_vector(game, exact_method)?;
    let exact_elapsed = started.elapsed();

    let mut vectors = Vec::with_capacity(methods.len());
    let mut summaries = Vec::with_capacity(methods.len());
    for &m in methods {
        let started = Instant::now();
        let v = run_method(parsed, m, opts)?;
        let elapsed = started.elapsed();
        let abs: Vec<f64> = v
            .values()
            .iter()
            .zip(exact.values())
            .map(|(a, e)| (a - e).abs())
            .collect();
        let rel = v
            .values()
            .iter()
            .zip(exact.values())
            .filter_map(|(&a, &e)| relative_error_pct(a, e))
            .map(f64::abs)
            .fold(None, |acc: Option<f64>, x| {
                Some(acc.map_or(x, |a| a.max(x)))
            });
        summaries.push(MethodSummary {
            method: m.as_str().to_string(),
            max_abs_error: abs.iter().copied().fold(0.0, f64::max),
            mean_abs_error: abs.iter().sum::<f64>() / abs.len() as f64,
            max_abs_rel_error_pct: rel,
            elapsed,
        });
        vectors.push(v);
    }

    let counts = parsed.rationalized.as_ref().map(|rg| rg.counts());
    let rows = game
        .players()
        .iter()
        .enumerate()
        .map(|(i, pl)| ComparisonRow {
            player: pl.id.clone(),
            m_i: counts.map(|c| c[i]),
            exact: Some(exact[i]),
            estimates: methods
                .iter()
                .zip(&vectors)
                .map(|(m, v)| (m.as_str().to_string(), v[i]))
                .collect(),
            relative_error: methods
                .iter()
                .zip(&vectors)
                .map(|(m, v)| (m.as_str().to_string(), relative_error_pct(v[i], exact[i])))
                .collect(),
        })
        .collect();
    Ok(Comparison {
        exact_method,
        exact_elapsed,
        rows,
        summaries,
        vectors,
    })
}

fn millis(d: Duration) -> String {
    format!("{:.3} ms", d.as_secs_f64() * 1e3)
}

/// Builds the report. Timings appear only in the text footer so that CSV and
/// JSON output stay reproducible.
pub fn comparison_report(parsed: &ParsedGame, cmp: &Comparison) -> Report {
    let game = &parsed.game;
    let regime = RegimeThresholds::default().classify(game.probs().iter().sum());
    let mut report = Report::new(game.total_capacity(), Some(regime), player_infos(parsed));
    let single = cmp.summaries.len() == 1;
    let has_counts = cmp.rows.iter().any(|r| r.m_i.is_some());

    let mut headers = vec!["Player".to_string()];
    if has_counts {
        headers.push("m_i".into());
    }
    headers.push("Exact".into());
    for s in &cmp.summaries {
        if single {
            headers.extend(["Approx".to_string(), "Error(%)".to_string()]);
        } else {
            headers.extend([s.method.clone(), format!("{} err(%)", s.method)]);
        }
    }
    let mut table = TextTable {
        headers,
        rows: Vec::new(),
    };

    for (i, row) in cmp.rows.iter().enumerate() {
        let exact = row.exact.unwrap_or(f64::NAN);
        report.rows.push(Row {
            player: row.player.clone(),
            method: cmp.exact_method.to_string(),
            value: exact,
            stderr: None,
            rel_error_pct: None,
        });
        let mut cells = vec![row.player.clone()];
        if has_counts {
            cells.push(row.m_i.map(|m| m.to_string()).unwrap_or_default());
        }
        cells.push(sig6(exact));
        for (k, ((method, value), (_, rel))) in
            row.estimates.iter().zip(&row.relative_error).enumerate()
        {
            report.rows.push(Row {
                player: row.player.clone(),
                method: method.clone(),
                value: *value,
                stderr: cmp.vectors[k].meta.stderr.as_ref().map(|s| s[i]),
                rel_error_pct: *rel,
            });
            cells.push(sig6(*value));
            cells.push(pct(*rel));
        }
        table.rows.push(cells);
    }
    report.table = table;
    report.title = header_lines(&report);
    report
        .title
        .push(format!("exact column: {}", cmp.exact_method));
    report.footer.push(String::new());
    report.footer.push(format!(
        "{} wall-clock {}",
        cmp.exact_method,
        millis(cmp.exact_elapsed)
    ));
    for s in &cmp.summaries {
        report.footer.push(format!(
            "{}: max |err| {}  mean |err| {}  max |rel err| {}  wall-clock {}",
            s.method,
            sig6(s.max_abs_error),
            sig6(s.mean_abs_error),
            s.max_abs_rel_error_pct
                .map(|x| format!("{:.2}%", x))
                .unwrap_or_else(|| "-".into()),
            millis(s.elapsed)
        ));
    }
    for v in &cmp.vectors {
        for w in &v.meta.warnings {
            report.warnings.push(format!("{}: {w}", v.method()));
        }
    }
    report
}
