//! Command-line surface. Every subcommand's flags double as the keys of its
//! section in the JSON config; flags win over the file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::output::Format;
use crate::values::{DayList, Num, NumList};

#[derive(Debug, Parser)]
#[command(name = "lst", version, about = "Liquidity stress testing for investment funds")]
pub struct Cli {
    /// JSON config; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Full-precision numbers instead of 2-decimal percentages and 6 significant digits.
    #[arg(long, global = true)]
    pub raw: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write one file per table into this directory.
    #[arg(long, global = true, conflicts_with = "out")]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Redemption coverage ratio of a liquidation policy.
    Rcr(RcrArgs),
    /// Coverage ratio under the HQLA approach.
    Hqla(HqlaArgs),
    /// Reverse stress test on liabilities or on market volumes.
    Rst(RstArgs),
    /// Cheapest liquidation policy under tracking-risk and shortfall limits.
    Optimize(OptimizeArgs),
    /// Optimal cash buffer and the break-even premium curve.
    Buffer(BufferArgs),
    /// Swing-priced NAV for one dealing day.
    Swing(SwingArgs),
    /// Redemption gate schedule.
    Gate(GateArgs),
    /// Re-derive the reference tables and diff them against the checked-in copies.
    Goldens(GoldensArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PolicyArg {
    Prorata,
    Optimal,
    Waterfall,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RcrArgs {
    /// Portfolio CSV or JSON; the built-in sample fund when omitted.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub portfolio: Option<PathBuf>,
    /// Redemption shock as a fraction of TNA [default: 0.20].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shock: Option<Num>,
    /// [default: prorata]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyArg>,
    /// Liquidation windows for the optimal policy, e.g. 5 or 1..5 [default: 1..5].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<DayList>,
    /// Days reported for pro-rata and waterfall [default: 6].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    /// Also print the day-by-day shares sold.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<bool>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HqlaArgs {
    /// Bucket JSON: one `{name, ccf_static?, lambda, eta_dd, mdd}` object or
    /// an array of them with a `weight` each. A single equity bucket when omitted.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub buckets: Option<PathBuf>,
    /// Liquidation windows in days [default: 1,5,10,20,60].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<NumList>,
    /// Fund sizes [default: 1e9,5e9,7e9,10e9].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tna: Option<NumList>,
    /// Herfindahl indices [default: 0.01,0.04].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub herfindahl: Option<NumList>,
    /// Redemption shock [default: 0.40].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shock: Option<Num>,
    /// Take the drawdown over the whole window instead of its midpoint.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conservative: Option<bool>,
    /// Size threshold TNA* [default: 1e9].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tna_star: Option<Num>,
    /// Concentration threshold H* [default: 0.01].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_star: Option<Num>,
    /// [default: 0.10]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_size: Option<Num>,
    /// [default: 0.25]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_conc: Option<Num>,
    /// Cap on the specific factor [default: 0.80].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sf_cap: Option<Num>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RstMode {
    Liability,
    Asset,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RstArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub portfolio: Option<PathBuf>,
    /// [default: liability]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<RstMode>,
    /// Stress scenario α: a CSV file or an inline list, one entry per security.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    /// RCR floors [default: 0.25,0.5,0.75,1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floor: Option<NumList>,
    /// [default: 1..5]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<DayList>,
    /// Standard redemption rate for the asset mode [default: 0.20].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_star: Option<Num>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RegimeArg {
    /// β·σ·√x throughout.
    Sqrt,
    /// Square root up to x̃, linear above.
    Sqrl,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizeArgs {
    /// Needs daily_volume, volatility and spread columns.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub portfolio: Option<PathBuf>,
    /// Correlation matrix CSV without header.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corr: Option<PathBuf>,
    /// [default: 0.10]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shock: Option<Num>,
    /// Tracking-risk limit [default: 20bp].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tr_max: Option<Num>,
    /// Limit on the unsold share after h days [default: 0.10].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ls_max: Option<Num>,
    /// [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    /// [default: sqrt]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeArg>,
    /// Impact coefficient [default: 0.4].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub impact: Option<Num>,
    /// Participation rate where the linear regime starts [default: 0.05].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_tilde: Option<Num>,
    /// [default: 0.10]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_plus: Option<Num>,
    /// Annual to daily volatility divisor is its square root [default: 260].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub days_per_year: Option<Num>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Exact,
    Approx,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BufferArgs {
    /// [default: 0.01]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_asset: Option<Num>,
    /// [default: 0]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_cash: Option<Num>,
    /// [default: 0.80]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_asset: Option<Num>,
    /// [default: 0]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_cash: Option<Num>,
    /// [default: 0]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<Num>,
    /// Tracking-error aversion [default: 0].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Num>,
    /// [default: 50bp]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spread: Option<Num>,
    /// Unit cost of paying out of cash [default: 1bp].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cash_cost: Option<Num>,
    /// [default: 0.4]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub impact: Option<Num>,
    /// Volatility in the impact term [default: sigma-asset].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost_vol: Option<Num>,
    /// Daily trading limit as a fraction of TNA; 1 or more means none [default: 0.10].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xplus: Option<Num>,
    /// Redemption law F(x) = x^eta [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Num>,
    /// [default: 260]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub days_per_year: Option<Num>,
    /// Expected gain expression [default: exact].
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodArg>,
    /// Grid points on [0, 1] for the curves [default: 101].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SwingModeArg {
    None,
    Full,
    Partial,
    Dual,
    Dynamic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AdlArg {
    Netted,
    Gross,
    Prorata,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SwingArgs {
    /// [default: 100]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nav: Option<Num>,
    /// Units outstanding [default: 10].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub units: Option<Num>,
    /// Net units subscribed (negative for redemptions).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["subscribed", "redeemed"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow: Option<Num>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subscribed: Option<Num>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub redeemed: Option<Num>,
    /// Asset return over the day [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asset_return: Option<Num>,
    /// Transaction cost in currency [default: 0].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tc: Option<Num>,
    /// [default: full]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<SwingModeArg>,
    /// Activation threshold for the partial mode.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Num>,
    /// Penalty on redeemers in dual pricing; 1 splits pro-rata [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Num>,
    /// Threshold × factor held constant in the dynamic mode.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<Num>,
    /// Today's swing factor in the dynamic mode.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<Num>,
    /// Also print anti-dilution levies under this rule.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adl: Option<AdlArg>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GateArgs {
    /// CSV `day,investor,rate`; two queued investors when omitted.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub requests: Option<PathBuf>,
    /// Daily cap as a fraction of net assets [default: 0.02].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<Num>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GoldensArgs {
    /// Write freshly derived tables into this directory instead of diffing.
    #[arg(long)]
    pub bless: Option<PathBuf>,
}
