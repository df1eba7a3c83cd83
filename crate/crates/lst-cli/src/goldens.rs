//! Reference tables re-derived from the library and compared byte for byte
//! with the CSVs under `goldens/`, which are compiled into the binary.

use std::fs;
use std::path::Path;

use lst_core::buffer::{argmax_expected_lg, expected_lg_exact, expected_lg_published, BufferCostParams};
use lst_core::optimizer::evaluate_policy;
use lst_core::swing::{dynamic_threshold, nav_step, swing_nav, AlphaRule, FlowEvent, FundState, SwingMode, SwingOutcome};
use lst_core::{sample, RedemptionPortfolio};

use crate::cli::*;
use crate::commands;
use crate::error::{CliError, CliResult};
use crate::output::{render, Cell, Format, Table};
use crate::values::Num;

pub struct Golden {
    pub name: &'static str,
    pub expected: &'static str,
    pub build: fn() -> CliResult<Vec<Table>>,
}

macro_rules! golden {
    ($name:literal, $build:expr) => {
        Golden { name: $name, expected: include_str!(concat!("../goldens/", $name, ".csv")), build: $build }
    };
}

pub const GOLDENS: &[Golden] = &[
    golden!("rcr_prorata", || commands::rcr(&RcrArgs { schedule: Some(true), ..RcrArgs::default() })),
    golden!("rcr_optimal", || commands::rcr(&RcrArgs { policy: Some(PolicyArg::Optimal), ..RcrArgs::default() })),
    golden!("rcr_waterfall", || {
        commands::rcr(&RcrArgs { policy: Some(PolicyArg::Waterfall), schedule: Some(true), ..RcrArgs::default() })
    }),
    golden!("hqla", || commands::hqla(&HqlaArgs::default())),
    golden!("rst_liability", || commands::rst(&RstArgs::default())),
    golden!("rst_asset", || commands::rst(&RstArgs { mode: Some(RstMode::Asset), ..RstArgs::default() })),
    golden!("mixing", mixing),
    golden!("optimize", || commands::optimize(&OptimizeArgs::default())),
    golden!("buffer_argmax", buffer_argmax),
    golden!("buffer", || commands::buffer(&BufferArgs { points: Some(21), ..BufferArgs::default() })),
    golden!("buffer_no_limit", || {
        commands::buffer(&BufferArgs { xplus: Some(Num(1.0)), points: Some(21), ..BufferArgs::default() })
    }),
    golden!("swing", swing_examples),
    golden!("gate", || commands::gate(&GateArgs::default())),
];

/// Five redemption portfolios of the sample fund at a 10% shock.
pub const MIXES: [[f64; 7]; 5] = [
    [43510.0, 30010.0, 5040.0, 20050.0, 7550.0, 1750.0, 180.0],
    [0.0, 27000.0, 22238.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 34315.0, 17500.0, 1800.0],
    [20000.0, 20000.0, 10000.0, 20000.0, 18044.0, 0.0, 0.0],
    [29404.0, 24004.0, 8016.0, 20020.0, 13846.0, 700.0, 72.0],
];

fn mixing() -> CliResult<Vec<Table>> {
    let p = sample::fund_with_market();
    let d = lst_core::optimizer::CostModel::default();
    let mut t = Table::new("mixing", &["portfolio", "regime", "tr_bps", "tc_bps", "tc_spread_bps", "tc_impact_bps", "shortfall_pct"]);
    for (name, regime) in [("sqrt", RegimeArg::Sqrt), ("sqrl", RegimeArg::Sqrl)] {
        let cm = commands::cost_model(Some(regime), d.impact, d.x_tilde, d.x_plus, d.days_per_year);
        for (k, q) in MIXES.iter().enumerate() {
            let q = RedemptionPortfolio::new(&p, q.to_vec())?;
            let e = evaluate_policy(&p, &cm, &q, 1)?;
            t.push(vec![
                (k + 1).into(),
                name.into(),
                Cell::Bp(e.tracking_risk),
                Cell::Bp(e.cost.total),
                Cell::Bp(e.cost.spread),
                Cell::Bp(e.cost.impact),
                Cell::Pct(e.shortfall),
            ]);
        }
    }
    Ok(vec![t])
}

fn buffer_argmax() -> CliResult<Vec<Table>> {
    let mut t = Table::new("argmax", &["eta", "published_pct", "exact_pct"]);
    for eta in [0.5, 1.0, 2.0, 3.0] {
        let p = BufferCostParams::new(20e-4, 1e-4, 0.4, 0.2, 1.0, eta);
        t.push(vec![
            Cell::Num(eta),
            Cell::Pct(argmax_expected_lg(&p, expected_lg_published)?),
            Cell::Pct(argmax_expected_lg(&p, expected_lg_exact)?),
        ]);
    }
    Ok(vec![t])
}

fn swing_examples() -> CliResult<Vec<Table>> {
    let f = FundState::new(100.0, 10.0)?;
    let mut navs = Table::new("nav", &["scenario", "nav", "nav_ask", "nav_bid"]);
    let one = |name: &str, nav: f64| vec![name.into(), Cell::Num(nav), "-".into(), "-".into()];
    navs.push(one("no_flow", nav_step(f, FlowEvent::net(0.0, 0.05, 0.0))?.nav));
    navs.push(one("subscription", nav_step(f, FlowEvent::net(5.0, 0.05, 30.0))?.nav));
    navs.push(one("redemption", nav_step(f, FlowEvent::net(-5.0, 0.05, 30.0))?.nav));
    for (name, dn) in [("swing_subscription", 5.0), ("swing_redemption", -5.0)] {
        if let SwingOutcome::Single { nav, .. } = swing_nav(f, FlowEvent::net(dn, 0.05, 30.0), SwingMode::Full)? {
            navs.push(one(name, nav));
        }
    }
    let gross = FlowEvent { subscribed: 10.0, redeemed: 5.0, asset_return: 0.05, cost: 30.0 };
    for (name, rule) in [("dual_prorata", AlphaRule::ProRata), ("dual_penalized", AlphaRule::Penalized(2.0))] {
        if let SwingOutcome::Dual { ask, bid, .. } = swing_nav(f, gross, SwingMode::Dual { alpha: rule })? {
            navs.push(vec![name.into(), "-".into(), Cell::Num(ask), Cell::Num(bid)]);
        }
    }
    let mut dynamic = Table::new("dynamic_threshold", &["factor_bps", "threshold_pct"]);
    for factor in [2e-4, 40e-4, 60e-4] {
        dynamic.push(vec![Cell::Bp(factor), Cell::Pct(dynamic_threshold(2e-4, factor)?)]);
    }
    Ok(vec![navs, dynamic])
}

/// Derived text of every golden.
pub fn derive() -> CliResult<Vec<(&'static str, String)>> {
    GOLDENS.iter().map(|g| Ok((g.name, render(&(g.build)()?, Format::Csv, false)))).collect()
}

fn first_difference(want: &str, got: &str) -> String {
    let (w, g): (Vec<_>, Vec<_>) = (want.lines().collect(), got.lines().collect());
    for i in 0..w.len().max(g.len()) {
        let (a, b) = (w.get(i).copied().unwrap_or("<eof>"), g.get(i).copied().unwrap_or("<eof>"));
        if a != b {
            return format!("line {}: expected `{a}`, got `{b}`", i + 1);
        }
    }
    "trailing whitespace".into()
}

/// Diffs every golden; returns the report lines.
pub fn check() -> CliResult<String> {
    let mut out = String::new();
    let mut failed = Vec::new();
    for (g, (_, got)) in GOLDENS.iter().zip(derive()?) {
        if got == g.expected {
            out.push_str(&format!("ok   {}\n", g.name));
        } else {
            out.push_str(&format!("DIFF {}: {}\n", g.name, first_difference(g.expected, &got)));
            failed.push(g.name.to_string());
        }
    }
    if failed.is_empty() {
        Ok(out)
    } else {
        eprint!("{out}");
        Err(CliError::GoldenMismatch(failed))
    }
}

pub fn bless(dir: &Path) -> CliResult<String> {
    fs::create_dir_all(dir).map_err(|e| CliError::invalid(format!("{}: {e}", dir.display())))?;
    let mut out = String::new();
    for (name, text) in derive()? {
        let path = dir.join(format!("{name}.csv"));
        fs::write(&path, text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
        out.push_str(&format!("wrote {}\n", path.display()));
    }
    Ok(out)
}
