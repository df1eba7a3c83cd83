//! Reverse stress testing on the liability side (redemption rate) and on the
//! asset side (daily volume multiplier).

use serde::Serialize;

use crate::error::{domain, Result};
use crate::liquidation::{build_schedule, build_schedule_with_limits};
use crate::model::{Portfolio, RedemptionPortfolio};
use crate::rcr::pro_rata_portfolio;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiabilityRst {
    /// ℝ^RST, the redemption amount at which RCR(τh) hits the floor.
    pub amount: f64,
    /// 𝓡^RST = ℝ^RST / TNA.
    pub rate: f64,
    /// False when 𝓡^RST exceeds 1, i.e. no redemption can breach the floor.
    pub feasible: bool,
}

/// q^RST = α·ω; ℝ^RST = 𝔸(τh)/RCR⁻.
pub fn liability_rst(p: &Portfolio, alpha: &[f64], rcr_floor: f64, tau: usize) -> Result<LiabilityRst> {
    if !(rcr_floor > 0.0) {
        return domain("RCR floor must be positive");
    }
    if tau == 0 {
        return domain("tau must be at least 1");
    }
    if alpha.len() != p.len() || alpha.iter().any(|a| !(0.0..=1.0).contains(a)) {
        return domain("alpha must have one entry in [0, 1] per security");
    }
    let q = RedemptionPortfolio::new(p, alpha.iter().zip(p.shares()).map(|(a, w)| a * w).collect())?;
    let s = build_schedule(p, &q, tau)?;
    let amount = s.cumulative_value(tau) / rcr_floor;
    let rate = amount / p.tna()?;
    Ok(LiabilityRst { amount, rate, feasible: rate <= 1.0 })
}

/// Σ α_i w_i(ω). Once τh is long enough to sell all of α·ω, 𝓡^RST ≤ 1 holds
/// exactly when RCR⁻ is at least this value; for shorter windows it is a
/// sufficient condition.
pub fn liability_floor_bound(p: &Portfolio, alpha: &[f64]) -> Result<f64> {
    if alpha.len() != p.len() {
        return domain("alpha must have one entry per security");
    }
    Ok(p.weights()?.iter().zip(alpha).map(|(w, a)| w * a).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AssetRst {
    /// m_v^RST in (0, 1): RCR(τh; m_v) ≤ RCR⁻ iff m_v ≤ m_v^RST.
    Solved(f64),
    /// RCR(τh; 1) ≤ RCR⁻: the floor is breached without any volume shock.
    BreachedAtNormalVolume,
    /// RCR(τh; m_v) stays above the floor even for vanishing volumes.
    NeverBreached,
}

pub const BISECTION_TOL: f64 = 1e-6;
pub const BISECTION_MAX_ITER: usize = 200;

/// RCR(τh; m_v) for the pro-rata portfolio q = 𝓡*·ω with limits m_v·q^+.
pub fn rcr_scaled(p: &Portfolio, rate_star: f64, tau: usize, m: f64) -> Result<f64> {
    let q = pro_rata_portfolio(p, rate_star)?;
    let limits: Vec<f64> = p.daily_limits().iter().map(|l| l * m).collect();
    let s = build_schedule_with_limits(p, &q, &limits, tau.max(1))?;
    Ok(s.cumulative_value(tau) / (rate_star * p.tna()?))
}

/// Solves RCR(τh; m_v) = RCR⁻ by bisection on m_v ∈ (0, 1).
pub fn asset_rst(p: &Portfolio, rate_star: f64, rcr_floor: f64, tau: usize) -> Result<AssetRst> {
    if !(rate_star > 0.0 && rate_star <= 1.0) {
        return domain("standard redemption rate must lie in (0, 1]");
    }
    if !(rcr_floor > 0.0) {
        return domain("RCR floor must be positive");
    }
    if tau == 0 {
        return domain("tau must be at least 1");
    }
    let f = |m: f64| rcr_scaled(p, rate_star, tau, m);
    if f(1.0)? <= rcr_floor {
        return Ok(AssetRst::BreachedAtNormalVolume);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    if f(BISECTION_TOL)? > rcr_floor {
        return Ok(AssetRst::NeverBreached);
    }
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid)? <= rcr_floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(AssetRst::Solved(0.5 * (lo + hi)))
}
