//! Redemption coverage ratio under the time-to-liquidation approach.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::liquidation::{build_schedule, Days, LiquidationSchedule};
use crate::model::{Portfolio, RedemptionPortfolio, RedemptionShock};

/// One day of an [`RcrReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RcrRow {
    pub h: usize,
    /// LR(q;h).
    pub lr: f64,
    /// 𝔸(h), the cumulative value sold.
    pub liquid: f64,
    /// RCR(h) = 𝔸(h)/ℝ.
    pub rcr: f64,
    /// LS(h) = 𝓡·max(0, 1 − RCR(h)).
    pub ls: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RcrReport {
    pub rows: Vec<RcrRow>,
    /// ℝ = 𝓡 · TNA.
    pub shock_amount: f64,
    pub rate: f64,
    /// 𝕍(q).
    pub redemption_value: f64,
}

/// Computes (LR, 𝔸, RCR, LS) for h = 1..=horizon.
pub fn rcr_report(p: &Portfolio, shock: RedemptionShock, q: &RedemptionPortfolio, horizon: usize) -> Result<RcrReport> {
    let amount = shock.amount(p)?;
    if amount <= 0.0 {
        return domain("redemption shock must be positive");
    }
    let schedule = build_schedule(p, q, horizon.max(1))?;
    report_from_schedule(&schedule, shock.rate(), amount, horizon)
}

pub(crate) fn report_from_schedule(s: &LiquidationSchedule, rate: f64, amount: f64, horizon: usize) -> Result<RcrReport> {
    let vq = s.target_value();
    let rows = (1..=horizon)
        .map(|h| {
            let liquid = s.cumulative_value(h);
            let rcr = liquid / amount;
            let lr = if vq > 0.0 { (liquid / vq).min(1.0) } else { 0.0 };
            RcrRow { h, lr, liquid, rcr, ls: rate * (1.0 - rcr).max(0.0) }
        })
        .collect();
    Ok(RcrReport { rows, shock_amount: amount, rate, redemption_value: vq })
}

impl RcrReport {
    #[must_use]
    pub fn row(&self, h: usize) -> Option<&RcrRow> {
        self.rows.get(h.checked_sub(1)?)
    }

    /// TTL(p) = inf{h : RCR(h) ≥ p} within the report horizon.
    #[must_use]
    pub fn time_to_liquidity(&self, p: f64) -> Days {
        self.rows.iter().find(|r| r.rcr >= p - 1e-12).map_or(Days::Never, |r| Days::Finite(r.h))
    }
}

/// TTL(p) from a report; `Never` if p is not reached within its horizon.
pub fn time_to_liquidity(report: &RcrReport, p: f64) -> Result<Days> {
    if !(p > 0.0) {
        return domain("threshold must be positive");
    }
    Ok(report.time_to_liquidity(p))
}

/// Vertical slicing: q = 𝓡 · ω.
pub fn pro_rata_portfolio(p: &Portfolio, rate: f64) -> Result<RedemptionPortfolio> {
    if !(0.0..=1.0).contains(&rate) {
        return domain(format!("redemption rate {rate} outside [0, 1]"));
    }
    RedemptionPortfolio::new(p, p.shares().iter().map(|w| rate * w).collect())
}

/// Horizontal slicing: the whole portfolio is put up for sale and every
/// security is sold at its daily limit in parallel.
pub fn waterfall_portfolio(p: &Portfolio) -> RedemptionPortfolio {
    RedemptionPortfolio::new(p, p.shares()).expect("holdings are a valid redemption portfolio")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalProRata {
    /// φ(τh), the largest redemption rate liquidable pro-rata within τh days.
    pub phi: f64,
    pub portfolio: RedemptionPortfolio,
}

/// φ(τh) = min_i min(τh·q_i^+/ω_i, 1) over held securities, q* = φ·ω.
pub fn optimal_pro_rata(p: &Portfolio, tau: usize) -> Result<OptimalProRata> {
    if tau == 0 {
        return domain("tau must be at least 1");
    }
    let phi = p
        .securities()
        .iter()
        .filter(|s| s.shares > 0.0)
        .map(|s| (tau as f64 * s.daily_limit / s.shares).min(1.0))
        .fold(1.0, f64::min);
    Ok(OptimalProRata { phi, portfolio: pro_rata_portfolio(p, phi)? })
}

/// Liquidation policy selector used by the CLI and the goldens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Policy {
    ProRata,
    Optimal,
    Waterfall,
}

impl std::str::FromStr for Policy {
    type Err = crate::LstError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prorata" | "pro-rata" => Ok(Policy::ProRata),
            "optimal" => Ok(Policy::Optimal),
            "waterfall" => Ok(Policy::Waterfall),
            other => Err(crate::LstError::Input(format!("unknown policy `{other}`"))),
        }
    }
}

/// Builds the redemption portfolio of a policy: the shock rate for pro-rata,
/// φ(τh) for the optimal rule, the full holdings for the waterfall.
pub fn policy_portfolio(p: &Portfolio, policy: Policy, rate: f64, tau: usize) -> Result<RedemptionPortfolio> {
    match policy {
        Policy::ProRata => pro_rata_portfolio(p, rate),
        Policy::Optimal => Ok(optimal_pro_rata(p, tau)?.portfolio),
        Policy::Waterfall => Ok(waterfall_portfolio(p)),
    }
}

/// Largest admissible shock after h days, 𝔸(h)/TNA, of a policy.
pub fn admissible_rate(p: &Portfolio, q: &RedemptionPortfolio, h: usize) -> Result<f64> {
    let s = build_schedule(p, q, h.max(1))?;
    Ok(s.cumulative_value(h) / p.tna()?)
}
