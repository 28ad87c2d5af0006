//! Method dispatch for the `compute` command.

use std::str::FromStr;

use crate::analytic::{binomial_vector, riemann_vector, BinomialVariant};
use crate::error::{Error, Result};
use crate::exact::{exact_vector, MAX_ENUM_PLAYERS};
use crate::game::{Method, ShapleyVector};
use crate::layered::{shapley_layered, LayerVariant};
use crate::monte_carlo::{shapley_mc, McConfig};
use crate::racs::{
    error_bound_thm, meanfield_racs, rationalize, shapley_racs, shapley_racs_corrected,
    RationalizeMode, RationalizedGame, RegimeThresholds, Situation3Options, Target,
};
use crate::report::emit::{sig6, PlayerInfo, Report, Row, TextTable};
use crate::report::gamefile::ParsedGame;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    /// Subset enumeration; refused above the enumeration limit.
    Exact,
    ExactSymmetric,
    ExactIntegral,
    Homogeneous,
    Racs,
    RacsCorrected,
    Layered,
    Meanfield,
    Binomial,
    Riemann,
    Mc,
}

impl MethodChoice {
    pub const ALL: [MethodChoice; 11] = [
        MethodChoice::Exact,
        MethodChoice::ExactSymmetric,
        MethodChoice::ExactIntegral,
        MethodChoice::Homogeneous,
        MethodChoice::Racs,
        MethodChoice::RacsCorrected,
        MethodChoice::Layered,
        MethodChoice::Meanfield,
        MethodChoice::Binomial,
        MethodChoice::Riemann,
        MethodChoice::Mc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodChoice::Exact => "exact",
            MethodChoice::ExactSymmetric => "exact-symmetric",
            MethodChoice::ExactIntegral => "exact-integral",
            MethodChoice::Homogeneous => "homogeneous",
            MethodChoice::Racs => "racs",
            MethodChoice::RacsCorrected => "racs-corrected",
            MethodChoice::Layered => "layered",
            MethodChoice::Meanfield => "meanfield",
            MethodChoice::Binomial => "binomial",
            MethodChoice::Riemann => "riemann",
            MethodChoice::Mc => "mc",
        }
    }
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        MethodChoice::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComputeOptions {
    pub samples: usize,
    pub seed: u64,
    pub chunk: Option<usize>,
    /// Rounding tolerance for rationalization; exact denominators when unset.
    pub delta: Option<f64>,
    /// Layer combination; `Literal` also selects the literal binomial sum.
    pub variant: LayerVariant,
    /// Rescaling for layered output and the dense-regime correction target.
    pub normalize: Option<Target>,
    pub tau_low: f64,
    pub tau_high: f64,
    pub force_symmetric: bool,
    /// Riemann nodes; `n` when unset.
    pub nodes: Option<usize>,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0,
            chunk: None,
            delta: None,
            variant: LayerVariant::default(),
            normalize: None,
            tau_low: 0.2,
            tau_high: 0.8,
            force_symmetric: false,
            nodes: None,
        }
    }
}

/// Sub-player method for count-form files, exact symmetric sums otherwise.
pub fn default_method(parsed: &ParsedGame) -> MethodChoice {
    if parsed.rationalized.is_some() {
        MethodChoice::Racs
    } else {
        MethodChoice::ExactSymmetric
    }
}

/// The file's own counts, or a rationalization of its probabilities.
pub fn rationalized_for(parsed: &ParsedGame, opts: &ComputeOptions) -> Result<RationalizedGame> {
    match (&parsed.rationalized, opts.delta) {
        (Some(rg), None) => Ok(rg.clone()),
        (_, Some(delta)) => rationalize(&parsed.game, RationalizeMode::Delta(delta)),
        (None, None) => rationalize(&parsed.game, RationalizeMode::Exact),
    }
}

pub fn run_method(
    parsed: &ParsedGame,
    method: MethodChoice,
    opts: &ComputeOptions,
) -> Result<ShapleyVector> {
    let game = &parsed.game;
    match method {
        MethodChoice::Exact => {
            if game.n() > MAX_ENUM_PLAYERS {
                if !opts.force_symmetric {
                    return Err(Error::Infeasible(format!(
                        "enumeration needs n <= {MAX_ENUM_PLAYERS}, game has {}; pass --force-symmetric or use exact-symmetric",
                        game.n()
                    )));
                }
                let mut v = exact_vector(game, Method::ExactSymmetric)?;
                v.warn("enumeration infeasible; used exact symmetric sums");
                return Ok(v);
            }
            exact_vector(game, Method::ExactEnum)
        }
        MethodChoice::ExactSymmetric => exact_vector(game, Method::ExactSymmetric),
        MethodChoice::ExactIntegral => exact_vector(game, Method::ExactIntegral),
        MethodChoice::Homogeneous => exact_vector(game, Method::Homogeneous),
        MethodChoice::Racs => {
            let rg = rationalized_for(parsed, opts)?;
            let mut v = shapley_racs(&rg);
            let bound = (0..rg.n())
                .map(|i| error_bound_thm(&rg, i).map(|b| b.bound()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            v.meta.error_bound = Some(bound);
            Ok(v)
        }
        MethodChoice::RacsCorrected => {
            let rg = rationalized_for(parsed, opts)?;
            let dense = Situation3Options {
                tau_low: opts.tau_low,
                tau_high: opts.tau_high,
                target: opts.normalize.unwrap_or(Target::Te),
            };
            shapley_racs_corrected(game, &rg, &RegimeThresholds::default(), &dense)
        }
        MethodChoice::Layered => shapley_layered(game.probs(), opts.variant, opts.normalize),
        MethodChoice::Meanfield => meanfield_racs(&rationalized_for(parsed, opts)?),
        MethodChoice::Binomial => {
            let variant = match opts.variant {
                LayerVariant::Literal => BinomialVariant::Literal,
                LayerVariant::Unweighted => BinomialVariant::Closed,
            };
            binomial_vector(game, variant)
        }
        MethodChoice::Riemann => riemann_vector(game, opts.nodes),
        MethodChoice::Mc => {
            let cfg = McConfig {
                samples: opts.samples,
                seed: opts.seed,
                chunk: opts.chunk,
            };
            Ok(shapley_mc(game, &cfg)?.into_shapley_vector())
        }
    }
}

pub(crate) fn player_infos(parsed: &ParsedGame) -> Vec<PlayerInfo> {
    let counts = parsed.rationalized.as_ref().map(|rg| rg.counts());
    parsed
        .game
        .players()
        .iter()
        .enumerate()
        .map(|(i, pl)| PlayerInfo {
            id: pl.id.clone(),
            p: pl.p.to_string(),
            vulns: counts.map(|c| c[i]),
        })
        .collect()
}

pub(crate) fn header_lines(report: &Report) -> Vec<String> {
    let mut line = format!("T(E) = {}", sig6(report.t_e));
    if let Some(r) = report.regime {
        line.push_str(&format!(
            "   regime {} (r = {})",
            r.label.as_str(),
            sig6(r.r)
        ));
    }
    vec![line]
}

pub fn compute_report(
    parsed: &ParsedGame,
    method: MethodChoice,
    opts: &ComputeOptions,
) -> Result<Report> {
    let v = run_method(parsed, method, opts)?;
    let game = &parsed.game;
    let regime = v
        .meta
        .regime
        .unwrap_or_else(|| RegimeThresholds::default().classify(game.probs().iter().sum()));
    let mut report = Report::new(game.total_capacity(), Some(regime), player_infos(parsed));
    let stderr = v.meta.stderr.clone();
    let counts = parsed.rationalized.as_ref().map(|rg| rg.counts().to_vec());

    let mut headers = vec!["Player".to_string()];
    if counts.is_some() {
        headers.push("m_i".into());
    }
    headers.extend(["p".to_string(), "Value".to_string()]);
    if stderr.is_some() {
        headers.push("Stderr".into());
    }
    let mut table = TextTable {
        headers,
        rows: Vec::new(),
    };
    for (i, info) in report.players.iter().enumerate() {
        let se = stderr.as_ref().map(|s| s[i]);
        report.rows.push(Row {
            player: info.id.clone(),
            method: v.method().to_string(),
            value: v[i],
            stderr: se,
            rel_error_pct: None,
        });
        let mut cells = vec![info.id.clone()];
        if let Some(c) = &counts {
            cells.push(c[i].to_string());
        }
        cells.push(info.p.clone());
        cells.push(sig6(v[i]));
        if let Some(se) = se {
            cells.push(sig6(se));
        }
        table.rows.push(cells);
    }
    report.table = table;
    report.title = header_lines(&report);
    report.title.push(format!("method {}", v.method()));
    report.footer.push(format!("sum = {}", sig6(v.sum())));
    if let Some(bound) = v.meta.error_bound {
        report
            .footer
            .push(format!("max leading error bound = {}", sig6(bound)));
    }
    report.warnings = v.meta.warnings.clone();
    Ok(report)
}
