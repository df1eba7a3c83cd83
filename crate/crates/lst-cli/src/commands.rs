//! One builder per subcommand: merged arguments in, tables out.

use std::fs;
use std::path::Path;

use lst_core::buffer::{
    break_even_premium, net_buffer_cost, optimal_cash_buffer, BufferCostParams, BufferMarketParams, LgMethod,
};
use lst_core::hqla::{ccf_parametric, rcr_hqla, DrawdownHorizon, HqlaBucket, SpecificRiskParams};
use lst_core::io::{gate_requests_from_csv, matrix_from_csv, portfolio_from_csv, portfolio_from_json};
use lst_core::liquidation::{build_schedule, DEFAULT_MAX_DAYS};
use lst_core::optimizer::{optimize_policy, CostModel, ImpactRegime, OptimizeOutcome, PolicyConstraints, TrackingModel};
use lst_core::rcr::{optimal_pro_rata, pro_rata_portfolio, rcr_report, waterfall_portfolio};
use lst_core::rst::{asset_rst, liability_rst, AssetRst};
use lst_core::swing::{
    adl_fees, dilution, flow_rate, gate_schedule, nav_step, swing_nav, AdlOutcome, AdlRule, AlphaRule, FlowEvent,
    FundState, GatePolicy, GateRequest, SwingMode, SwingOutcome,
};
use lst_core::{sample, Portfolio, RedemptionPortfolio, RedemptionShock};
use serde::Deserialize;
use serde_json::json;

use crate::cli::*;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};
use crate::values::NumList;

/// Stress scenario α used with the sample fund when none is given.
pub const SAMPLE_ALPHA: [f64; 7] = [0.20, 0.30, 0.0, 0.15, 0.0, 0.0, 0.0];

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

/// The sample fund (with market data) when no path is given.
pub fn load_portfolio(path: Option<&Path>, corr: Option<&Path>) -> CliResult<Portfolio> {
    let p = match path {
        None => sample::fund_with_market(),
        Some(path) => {
            let text = read(path)?;
            if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
                portfolio_from_json(&text)?
            } else {
                portfolio_from_csv(&text)?
            }
        }
    };
    match corr {
        Some(c) => Ok(p.with_correlation(matrix_from_csv(&read(c)?)?)?),
        None => Ok(p),
    }
}

fn rcr_table_rows(t: &mut Table, prefix: &[Cell], r: &lst_core::rcr::RcrReport) {
    for row in &r.rows {
        let mut cells = prefix.to_vec();
        cells.extend([row.h.into(), Cell::Pct(row.lr), Cell::Num(row.liquid), Cell::Pct(row.rcr), Cell::Pct(row.ls)]);
        t.push(cells);
    }
}

fn schedule_table(p: &Portfolio, q: &RedemptionPortfolio) -> CliResult<Table> {
    let s = build_schedule(p, q, DEFAULT_MAX_DAYS)?;
    let mut cols = vec!["day".to_string()];
    cols.extend(p.securities().iter().map(|s| s.id.clone()));
    let mut t = Table::with_columns("schedule", cols);
    for (d, row) in s.rows().iter().enumerate() {
        let mut cells = vec![Cell::from(d + 1)];
        cells.extend(row.iter().map(|x| Cell::Num(*x)));
        t.push(cells);
    }
    Ok(t)
}

pub fn rcr(a: &RcrArgs) -> CliResult<Vec<Table>> {
    let p = load_portfolio(a.portfolio.as_deref(), None)?;
    let rate = a.shock.map_or(0.20, |n| n.0);
    let shock = RedemptionShock::new(rate)?;
    let policy = a.policy.unwrap_or(PolicyArg::Prorata);
    let horizon = a.horizon.unwrap_or(6);
    if horizon == 0 {
        return Err(CliError::invalid("horizon must be at least 1"));
    }
    let mut tables = Vec::new();
    let q = match policy {
        PolicyArg::Prorata | PolicyArg::Waterfall => {
            let q = if policy == PolicyArg::Prorata { pro_rata_portfolio(&p, rate)? } else { waterfall_portfolio(&p) };
            let mut t = Table::new("rcr", &["h", "lr_pct", "liquid", "rcr_pct", "ls_pct"]);
            rcr_table_rows(&mut t, &[], &rcr_report(&p, shock, &q, horizon)?);
            tables.push(t);
            q
        }
        PolicyArg::Optimal => {
            let taus = a.tau.clone().map_or_else(|| (1..=5).collect(), |d| d.0);
            let mut t = Table::new("rcr", &["tau", "phi_pct", "h", "lr_pct", "liquid", "rcr_pct", "ls_pct"]);
            let mut last = None;
            for tau in taus {
                let opt = optimal_pro_rata(&p, tau)?;
                rcr_table_rows(&mut t, &[tau.into(), Cell::Pct(opt.phi)], &rcr_report(&p, shock, &opt.portfolio, tau)?);
                last = Some(opt.portfolio);
            }
            tables.push(t);
            last.ok_or_else(|| CliError::invalid("no tau given"))?
        }
    };
    if a.schedule.unwrap_or(false) {
        tables.push(schedule_table(&p, &q)?);
    }
    Ok(tables)
}

/// A bucket as read from the bucket file: the library type plus a weight.
#[derive(Debug, Deserialize)]
struct WeightedBucket {
    weight: Option<f64>,
    #[serde(flatten)]
    bucket: HqlaBucket,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BucketFile {
    One(WeightedBucket),
    Many(Vec<WeightedBucket>),
}

pub fn default_bucket() -> HqlaBucket {
    HqlaBucket { name: "equity".into(), ccf_static: None, lambda: 0.05, eta_dd: 0.0625, mdd: 0.5 }
}

fn load_buckets(path: Option<&Path>) -> CliResult<Vec<(f64, HqlaBucket)>> {
    let Some(path) = path else { return Ok(vec![(1.0, default_bucket())]) };
    let doc: BucketFile =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let list = match doc {
        BucketFile::One(b) => vec![WeightedBucket { weight: Some(b.weight.unwrap_or(1.0)), bucket: b.bucket }],
        BucketFile::Many(v) => v,
    };
    if list.is_empty() {
        return Err(CliError::invalid("bucket file: no buckets"));
    }
    list.into_iter()
        .map(|b| match b.weight {
            Some(w) => Ok((w, b.bucket)),
            None => Err(CliError::invalid(format!("bucket `{}` needs a weight", b.bucket.name))),
        })
        .collect()
}

pub fn hqla(a: &HqlaArgs) -> CliResult<Vec<Table>> {
    let buckets = load_buckets(a.buckets.as_deref())?;
    let list = |v: &Option<NumList>, d: &[f64]| v.clone().map_or_else(|| d.to_vec(), |l| l.0);
    let taus = list(&a.tau, &[1.0, 5.0, 10.0, 20.0, 60.0]);
    let tnas = list(&a.tna, &[1e9, 5e9, 7e9, 10e9]);
    let hs = list(&a.herfindahl, &[0.01, 0.04]);
    let rate = a.shock.map_or(0.40, |n| n.0);
    let sf = SpecificRiskParams {
        tna_star: a.tna_star.map_or(1e9, |n| n.0),
        h_star: a.h_star.map_or(0.01, |n| n.0),
        xi_size: a.xi_size.map_or(0.10, |n| n.0),
        xi_conc: a.xi_conc.map_or(0.25, |n| n.0),
        sf_cap: a.sf_cap.map_or(0.80, |n| n.0),
    };
    let horizon = if a.conservative.unwrap_or(false) { DrawdownHorizon::Full } else { DrawdownHorizon::Midpoint };
    let mut t = Table::new("hqla", &["herfindahl_pct", "tau", "tna", "ccf_pct", "rcr_pct", "ls_pct"]);
    for &h in &hs {
        for &tau in &taus {
            for &tna in &tnas {
                let mut weighted = Vec::with_capacity(buckets.len());
                for (w, b) in &buckets {
                    let ccf = match b.ccf_static {
                        Some(c) => c,
                        None => ccf_parametric(b, &sf, tau, tna, h, horizon)?,
                    };
                    weighted.push((*w, ccf));
                }
                let ccf: f64 = weighted.iter().map(|(w, c)| w * c).sum();
                let cov = rcr_hqla(&weighted, rate)?;
                t.push(vec![Cell::Pct(h), Cell::Num(tau), Cell::Num(tna), Cell::Pct(ccf), Cell::Pct(cov.rcr), Cell::Pct(cov.ls)]);
            }
        }
    }
    Ok(vec![t])
}

fn floor_label(f: f64) -> String {
    lst_core::io::fmt_num(100.0 * f)
}

pub fn rst(a: &RstArgs) -> CliResult<Vec<Table>> {
    let p = load_portfolio(a.portfolio.as_deref(), None)?;
    let floors = a.floor.clone().map_or_else(|| vec![0.25, 0.50, 0.75, 1.0], |l| l.0);
    let taus = a.tau.clone().map_or_else(|| (1..=5).collect(), |d| d.0);
    match a.mode.unwrap_or(RstMode::Liability) {
        RstMode::Liability => {
            let alpha = match &a.alpha {
                Some(s) => match s.parse::<NumList>() {
                    Ok(l) => l.0,
                    Err(_) => matrix_from_csv(&read(Path::new(s))?)?.into_iter().flatten().collect(),
                },
                None if a.portfolio.is_none() => SAMPLE_ALPHA.to_vec(),
                None => return Err(CliError::invalid("liability mode needs --alpha for a custom portfolio")),
            };
            let mut cols = vec!["tau".to_string()];
            cols.extend(floors.iter().map(|f| format!("amount_{}", floor_label(*f))));
            cols.extend(floors.iter().map(|f| format!("rate_pct_{}", floor_label(*f))));
            let mut t = Table::with_columns("rst", cols);
            for &tau in &taus {
                let cells: Vec<_> = floors.iter().map(|f| liability_rst(&p, &alpha, *f, tau)).collect::<Result<_, _>>()?;
                let mut row = vec![Cell::from(tau)];
                row.extend(cells.iter().map(|c| Cell::Num(c.amount)));
                row.extend(cells.iter().map(|c| Cell::Pct(c.rate)));
                t.push(row);
            }
            Ok(vec![t])
        }
        RstMode::Asset => {
            let rate = a.rate_star.map_or(0.20, |n| n.0);
            let mut cols = vec!["tau".to_string()];
            cols.extend(floors.iter().map(|f| format!("m_pct_{}", floor_label(*f))));
            let mut t = Table::with_columns("rst", cols);
            for &tau in &taus {
                let mut row = vec![Cell::from(tau)];
                for &f in &floors {
                    row.push(match asset_rst(&p, rate, f, tau)? {
                        AssetRst::Solved(m) => Cell::Pct(m),
                        AssetRst::BreachedAtNormalVolume => "breached".into(),
                        AssetRst::NeverBreached => "never".into(),
                    });
                }
                t.push(row);
            }
            Ok(vec![t])
        }
    }
}

pub fn cost_model(regime: Option<RegimeArg>, impact: f64, x_tilde: f64, x_plus: f64, days: f64) -> CostModel {
    let regime = match regime.unwrap_or(RegimeArg::Sqrt) {
        RegimeArg::Sqrt => ImpactRegime::SquareRoot,
        RegimeArg::Sqrl => ImpactRegime::SquareRootLinear,
    };
    CostModel { impact, x_tilde, x_plus, regime, days_per_year: days, ..CostModel::default() }
}

pub fn optimize(a: &OptimizeArgs) -> CliResult<Vec<Table>> {
    let p = load_portfolio(a.portfolio.as_deref(), a.corr.as_deref())?;
    let d = CostModel::default();
    let cm = cost_model(
        a.regime,
        a.impact.map_or(d.impact, |n| n.0),
        a.x_tilde.map_or(d.x_tilde, |n| n.0),
        a.x_plus.map_or(d.x_plus, |n| n.0),
        a.days_per_year.map_or(d.days_per_year, |n| n.0),
    );
    let shock = RedemptionShock::new(a.shock.map_or(0.10, |n| n.0))?;
    let c = PolicyConstraints {
        tr_max: a.tr_max.map_or(20e-4, |n| n.0),
        ls_max: a.ls_max.map_or(0.10, |n| n.0),
        h: a.h.unwrap_or(1),
    };
    let (q, e) = match optimize_policy(&p, &cm, shock, c, &TrackingModel::Equity)? {
        OptimizeOutcome::Optimal { portfolio, evaluation } => (portfolio, evaluation),
        OptimizeOutcome::Infeasible { binding, least_violation } => {
            return Err(CliError::Infeasible {
                message: format!("no policy meets TR <= {} and 1 - LR <= {} within {} day(s)", c.tr_max, c.ls_max, c.h),
                detail: json!({ "binding": format!("{binding:?}"), "least_violation": least_violation }),
            })
        }
    };
    let mut s = Table::new("summary", &["tr_bps", "tc_bps", "tc_spread_bps", "tc_impact_bps", "shortfall_pct", "value"]);
    s.push(vec![
        Cell::Bp(e.tracking_risk),
        Cell::Bp(e.cost.total),
        Cell::Bp(e.cost.spread),
        Cell::Bp(e.cost.impact),
        Cell::Pct(e.shortfall),
        Cell::Num(q.value(&p)?),
    ]);
    let mut t = Table::new("portfolio", &["id", "quantity", "fraction_pct"]);
    for (sec, x) in p.securities().iter().zip(q.quantities()) {
        let frac = if sec.shares > 0.0 { x / sec.shares } else { 0.0 };
        t.push(vec![sec.id.clone().into(), Cell::Num(*x), Cell::Pct(frac)]);
    }
    Ok(vec![s, t])
}

pub fn buffer_params(a: &BufferArgs) -> (BufferMarketParams, BufferCostParams, LgMethod) {
    let v = |x: Option<crate::values::Num>, d: f64| x.map_or(d, |n| n.0);
    let sigma = v(a.sigma_asset, 0.80);
    let m = BufferMarketParams {
        mu_asset: v(a.mu_asset, 0.01),
        mu_cash: v(a.mu_cash, 0.0),
        sigma_asset: sigma,
        sigma_cash: v(a.sigma_cash, 0.0),
        rho: v(a.rho, 0.0),
        lambda: v(a.lambda, 0.0),
    };
    let mut c = BufferCostParams::new(
        v(a.spread, 50e-4),
        v(a.cash_cost, 1e-4),
        v(a.impact, 0.4),
        v(a.cost_vol, sigma),
        v(a.xplus, 0.10),
        v(a.eta, 1.0),
    );
    c.days_per_year = v(a.days_per_year, 260.0);
    let method = match a.method.unwrap_or(MethodArg::Exact) {
        MethodArg::Exact => LgMethod::Exact,
        MethodArg::Approx => LgMethod::Approximate,
    };
    (m, c, method)
}

pub fn buffer(a: &BufferArgs) -> CliResult<Vec<Table>> {
    let (m, c, method) = buffer_params(a);
    let points = a.points.unwrap_or(101);
    if points < 2 {
        return Err(CliError::invalid("need at least 2 grid points"));
    }
    let w_star = optimal_cash_buffer(&m, &c, method)?;
    let mut opt = Table::new("optimum", &["w_star_pct", "nbc", "break_even"]);
    opt.push(vec![
        Cell::Pct(w_star),
        Cell::Num(net_buffer_cost(&m, &c, w_star, method)?),
        Cell::Num(break_even_premium(&m, &c, w_star, method)?),
    ]);
    let mut nbc = Table::new("nbc", &["w_pct", "nbc"]);
    let mut be = Table::new("break_even", &["w_pct", "premium"]);
    for k in 0..points {
        let w = k as f64 / (points - 1) as f64;
        nbc.push(vec![Cell::Pct(w), Cell::Num(net_buffer_cost(&m, &c, w, method)?)]);
        be.push(vec![Cell::Pct(w), Cell::Num(break_even_premium(&m, &c, w, method)?)]);
    }
    Ok(vec![opt, nbc, be])
}

pub fn swing(a: &SwingArgs) -> CliResult<Vec<Table>> {
    let v = |x: Option<crate::values::Num>, d: f64| x.map_or(d, |n| n.0);
    let f = FundState::new(v(a.nav, 100.0), v(a.units, 10.0))?;
    let (r, tc) = (v(a.asset_return, 0.0), v(a.tc, 0.0));
    let e = match (a.flow, a.subscribed, a.redeemed) {
        (Some(n), _, _) => FlowEvent::net(n.0, r, tc),
        (None, None, None) => return Err(CliError::invalid("give --flow or --subscribed/--redeemed")),
        (None, s, d) => FlowEvent { subscribed: v(s, 0.0), redeemed: v(d, 0.0), asset_return: r, cost: tc },
    };
    let mode = match a.mode.unwrap_or(SwingModeArg::Full) {
        SwingModeArg::None => SwingMode::None,
        SwingModeArg::Full => SwingMode::Full,
        SwingModeArg::Partial => SwingMode::Partial {
            threshold: a.threshold.ok_or_else(|| CliError::invalid("partial mode needs --threshold"))?.0,
        },
        SwingModeArg::Dual => {
            let g = v(a.gamma, 1.0);
            SwingMode::Dual { alpha: if g == 1.0 { AlphaRule::ProRata } else { AlphaRule::Penalized(g) } }
        }
        SwingModeArg::Dynamic => SwingMode::Dynamic {
            product: a.product.ok_or_else(|| CliError::invalid("dynamic mode needs --product"))?.0,
            factor: a.factor.ok_or_else(|| CliError::invalid("dynamic mode needs --factor"))?.0,
        },
    };
    let mut t = Table::new("swing", &["quantity", "value"]);
    let mut put = |k: &str, c: Cell| t.push(vec![k.into(), c]);
    put("nav_gross", Cell::Num((1.0 + r) * f.nav));
    put("nav_unswung", Cell::Num(nav_step(f, e)?.nav));
    put("dilution", Cell::Num(dilution(f, e)?));
    put("flow_rate_pct", Cell::Pct(flow_rate(f, e)));
    match swing_nav(f, e, mode)? {
        SwingOutcome::Single { nav, activated } => {
            put("nav", Cell::Num(nav));
            put("activated", activated.to_string().into());
        }
        SwingOutcome::Dual { ask, bid, alpha } => {
            put("nav_ask", Cell::Num(ask));
            put("nav_bid", Cell::Num(bid));
            put("alpha", Cell::Num(alpha));
        }
        SwingOutcome::NoFlow { nav } => {
            put("nav", Cell::Num(nav));
            put("activated", "no-flow".into());
        }
    }
    let mut tables = vec![t];
    if let Some(rule) = a.adl {
        let rule = match rule {
            AdlArg::Netted => AdlRule::Netted,
            AdlArg::Gross => AdlRule::Gross,
            AdlArg::Prorata => AdlRule::ProRata,
        };
        let mut adl = Table::new("adl", &["entry_fee", "exit_fee"]);
        match adl_fees(e.subscribed, e.redeemed, tc, rule)? {
            AdlOutcome::Fees { entry, exit } => adl.push(vec![Cell::Num(entry), Cell::Num(exit)]),
            AdlOutcome::Degenerate => adl.push(vec!["degenerate".into(), "degenerate".into()]),
        }
        tables.push(adl);
    }
    Ok(tables)
}

pub fn sample_requests() -> Vec<GateRequest> {
    vec![
        GateRequest { day: 0, investor: "A".into(), rate: 0.05 },
        GateRequest { day: 1, investor: "B".into(), rate: 0.02 },
    ]
}

pub fn gate(a: &GateArgs) -> CliResult<Vec<Table>> {
    let requests = match &a.requests {
        Some(p) => gate_requests_from_csv(&read(p)?)?,
        None => sample_requests(),
    };
    let policy = GatePolicy::new(a.cap.map_or(0.02, |n| n.0))?;
    let mut t = Table::new("gate", &["day", "investor", "rate_pct", "share_pct"]);
    for f in gate_schedule(&requests, policy)? {
        t.push(vec![f.day.into(), f.investor.into(), Cell::Pct(f.rate), Cell::Pct(f.share)]);
    }
    Ok(vec![t])
}
