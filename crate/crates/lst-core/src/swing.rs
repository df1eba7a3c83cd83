//! NAV dilution, swing pricing, anti-dilution levies and redemption gates.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundState {
    pub nav: f64,
    pub units: f64,
}

impl FundState {
    pub fn new(nav: f64, units: f64) -> Result<Self> {
        if !(units > 0.0) || !nav.is_finite() {
            return domain("units must be positive and NAV finite");
        }
        Ok(FundState { nav, units })
    }

    #[must_use]
    pub fn tna(&self) -> f64 {
        self.nav * self.units
    }
}

/// Subscriptions N⁺, redemptions N⁻ (units), asset return and the trading
/// cost the flows generate (currency).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowEvent {
    pub subscribed: f64,
    pub redeemed: f64,
    pub asset_return: f64,
    pub cost: f64,
}

impl FlowEvent {
    /// Net flow ΔN = N⁺ − N⁻ expressed as one signed number.
    #[must_use]
    pub fn net(net_units: f64, asset_return: f64, cost: f64) -> Self {
        FlowEvent {
            subscribed: net_units.max(0.0),
            redeemed: (-net_units).max(0.0),
            asset_return,
            cost,
        }
    }

    #[must_use]
    pub fn delta(&self) -> f64 {
        self.subscribed - self.redeemed
    }

    fn validate(&self) -> Result<()> {
        if self.subscribed < 0.0 || self.redeemed < 0.0 || self.cost < 0.0 {
            return domain("flows and cost must be non-negative");
        }
        Ok(())
    }
}

/// One valuation step without any anti-dilution tool. The cost is borne by
/// all holders after the flow: N(t+1) on subscriptions, N(t) on redemptions
/// (the redeemed units still bear it since they leave at the new NAV).
pub fn nav_step(f: FundState, e: FlowEvent) -> Result<FundState> {
    e.validate()?;
    let units = f.units + e.delta();
    if units <= 0.0 {
        return domain("flows would leave no units outstanding");
    }
    let gross = (1.0 + e.asset_return) * f.nav;
    Ok(FundState { nav: gross - e.cost / f.units.max(units), units })
}

/// Dilution per remaining unit, TC/max(N(t), N(t+1)).
pub fn dilution(f: FundState, e: FlowEvent) -> Result<f64> {
    let next = nav_step(f, e)?;
    Ok((1.0 + e.asset_return) * f.nav - next.nav)
}

/// How the ask-side share α of the cost is set in dual pricing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AlphaRule {
    /// α = N⁺/(N⁺ + N⁻).
    ProRata,
    /// α = N⁺/(N⁺ + γN⁻), γ ≥ 1.
    Penalized(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SwingMode {
    None,
    /// Swing whenever ΔN ≠ 0.
    Full,
    /// Swing when |ΔN|/min(N(t), N(t+1)) ≥ threshold.
    Partial { threshold: f64 },
    Dual { alpha: AlphaRule },
    /// Threshold = product/factor; when active the NAV moves by ±factor.
    Dynamic { product: f64, factor: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SwingOutcome {
    Single { nav: f64, activated: bool },
    Dual { ask: f64, bid: f64, alpha: f64 },
    /// No net flow: nothing to swing.
    NoFlow { nav: f64 },
}

/// Swung NAV at t+1. NAV_gross = (1 + R_A)·NAV(t); the swing adds TC/ΔN.
pub fn swing_nav(f: FundState, e: FlowEvent, mode: SwingMode) -> Result<SwingOutcome> {
    e.validate()?;
    let units = f.units + e.delta();
    if units <= 0.0 {
        return domain("flows would leave no units outstanding");
    }
    let gross = (1.0 + e.asset_return) * f.nav;
    let dn = e.delta();
    match mode {
        SwingMode::None => Ok(SwingOutcome::Single { nav: nav_step(f, e)?.nav, activated: false }),
        SwingMode::Dual { alpha } => {
            if e.subscribed + e.redeemed == 0.0 {
                return Ok(SwingOutcome::NoFlow { nav: gross });
            }
            let gamma = match alpha {
                AlphaRule::ProRata => 1.0,
                AlphaRule::Penalized(g) if g >= 1.0 => g,
                AlphaRule::Penalized(_) => return domain("penalisation factor must be ≥ 1"),
            };
            let a = e.subscribed / (e.subscribed + gamma * e.redeemed);
            let ask = if e.subscribed > 0.0 { gross + a * e.cost / e.subscribed } else { gross };
            let bid = if e.redeemed > 0.0 { gross - (1.0 - a) * e.cost / e.redeemed } else { gross };
            Ok(SwingOutcome::Dual { ask, bid, alpha: a })
        }
        _ if dn == 0.0 => Ok(SwingOutcome::NoFlow { nav: gross }),
        SwingMode::Full => Ok(SwingOutcome::Single { nav: gross + e.cost / dn, activated: true }),
        SwingMode::Partial { threshold } => {
            if threshold < 0.0 {
                return domain("threshold must be non-negative");
            }
            if flow_rate(f, e) >= threshold {
                Ok(SwingOutcome::Single { nav: gross + e.cost / dn, activated: true })
            } else {
                Ok(SwingOutcome::Single { nav: nav_step(f, e)?.nav, activated: false })
            }
        }
        SwingMode::Dynamic { product, factor } => {
            let threshold = dynamic_threshold(product, factor)?;
            if flow_rate(f, e) >= threshold {
                Ok(SwingOutcome::Single { nav: gross * (1.0 + factor * dn.signum()), activated: true })
            } else {
                Ok(SwingOutcome::Single { nav: nav_step(f, e)?.nav, activated: false })
            }
        }
    }
}

/// |ΔN| / min(N(t), N(t+1)).
#[must_use]
pub fn flow_rate(f: FundState, e: FlowEvent) -> f64 {
    e.delta().abs() / f.units.min(f.units + e.delta())
}

/// sw_threshold = sw_product / sw_factor.
pub fn dynamic_threshold(product: f64, factor: f64) -> Result<f64> {
    if !(factor > 0.0) || product < 0.0 {
        return domain("swing factor must be positive and product non-negative");
    }
    Ok(product / factor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdlRule {
    /// Majority side pays TC/|ΔN|.
    Netted,
    /// Majority side pays TC over its own gross units.
    Gross,
    /// Both sides pay TC/(N⁺ + N⁻).
    ProRata,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AdlOutcome {
    Fees { entry: f64, exit: f64 },
    /// Netted rule with balanced flows: the fee is undefined.
    Degenerate,
}

/// Entry and exit fees per unit.
pub fn adl_fees(subscribed: f64, redeemed: f64, cost: f64, rule: AdlRule) -> Result<AdlOutcome> {
    if subscribed < 0.0 || redeemed < 0.0 || cost < 0.0 {
        return domain("flows and cost must be non-negative");
    }
    if subscribed + redeemed == 0.0 {
        return domain("no flows to charge");
    }
    let dn = subscribed - redeemed;
    let fees = match rule {
        AdlRule::ProRata => {
            let fee = cost / (subscribed + redeemed);
            AdlOutcome::Fees { entry: if subscribed > 0.0 { fee } else { 0.0 }, exit: if redeemed > 0.0 { fee } else { 0.0 } }
        }
        AdlRule::Gross if dn > 0.0 => AdlOutcome::Fees { entry: cost / subscribed, exit: 0.0 },
        AdlRule::Gross if dn < 0.0 => AdlOutcome::Fees { entry: 0.0, exit: cost / redeemed },
        AdlRule::Netted if dn > 0.0 => AdlOutcome::Fees { entry: cost / dn, exit: 0.0 },
        AdlRule::Netted if dn < 0.0 => AdlOutcome::Fees { entry: 0.0, exit: -cost / dn },
        // balanced gross flows: no majority side
        AdlRule::Gross | AdlRule::Netted => AdlOutcome::Degenerate,
    };
    Ok(fees)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GatePolicy {
    /// Maximum redemptions per day as a fraction of net assets.
    pub daily_cap: f64,
}

impl GatePolicy {
    pub fn new(daily_cap: f64) -> Result<Self> {
        if !(daily_cap > 0.0 && daily_cap <= 1.0) {
            return domain("gate cap must lie in (0, 1]");
        }
        Ok(GatePolicy { daily_cap })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRequest {
    pub day: usize,
    pub investor: String,
    pub rate: f64,
}

/// Amount executed for one request on one day.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateFill {
    pub day: usize,
    pub investor: String,
    pub rate: f64,
    /// Share of the original request.
    pub share: f64,
}

// below this the queue head counts as settled
const GATE_EPS: f64 = 1e-12;

/// FIFO queue: each day executes up to the cap, oldest requests first;
/// same-day requests keep their input order.
pub fn gate_schedule(requests: &[GateRequest], policy: GatePolicy) -> Result<Vec<GateFill>> {
    if requests.iter().any(|r| !(r.rate >= 0.0)) {
        return domain("requested rates must be non-negative");
    }
    let mut order: Vec<usize> = (0..requests.len()).collect();
    order.sort_by_key(|&i| requests[i].day);
    let mut pending: Vec<(usize, f64)> = Vec::new();
    let mut next = 0;
    let mut fills = Vec::new();
    let Some(mut day) = order.first().map(|&i| requests[i].day) else { return Ok(fills) };
    while next < order.len() || !pending.is_empty() {
        while next < order.len() && requests[order[next]].day <= day {
            pending.push((order[next], requests[order[next]].rate));
            next += 1;
        }
        let mut room = policy.daily_cap;
        for (i, left) in pending.iter_mut() {
            if room <= GATE_EPS {
                break;
            }
            let x = left.min(room);
            if x <= 0.0 {
                continue;
            }
            *left -= x;
            room -= x;
            let r = &requests[*i];
            fills.push(GateFill { day, investor: r.investor.clone(), rate: x, share: x / r.rate });
        }
        pending.retain(|(_, left)| *left > GATE_EPS);
        day += 1;
    }
    Ok(fills)
}
