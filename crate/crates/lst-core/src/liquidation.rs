//! Day-by-day liquidation under trading limits.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::model::{Portfolio, RedemptionPortfolio};

/// One trading year.
pub const DEFAULT_MAX_DAYS: usize = 260;

/// Number of days needed to reach a target, or `Never` when the target is out
/// of reach within the simulated horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Days {
    Finite(usize),
    Never,
}

impl Days {
    #[must_use]
    pub fn finite(self) -> Option<usize> {
        match self {
            Days::Finite(h) => Some(h),
            Days::Never => None,
        }
    }
}

impl std::fmt::Display for Days {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Days::Finite(h) => write!(f, "{h}"),
            Days::Never => write!(f, "inf"),
        }
    }
}

/// Shares sold per security and per day, q_i(h) for h = 1..H.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiquidationSchedule {
    days: Vec<Vec<f64>>,
    target: Vec<f64>,
    prices: Vec<f64>,
    /// Indices of securities with a positive target and a zero daily limit.
    pub stuck: Vec<usize>,
}

// residual below this fraction of the target counts as sold
const DONE: f64 = 1e-12;

/// Sells min(remaining, q_i^+) of each security every day until the target is
/// fully sold or `max_days` is reached. Stops early once nothing more can be
/// sold.
pub fn build_schedule(p: &Portfolio, q: &RedemptionPortfolio, max_days: usize) -> Result<LiquidationSchedule> {
    build_schedule_with_limits(p, q, &p.daily_limits(), max_days)
}

/// Same as [`build_schedule`] with explicit daily limits.
pub fn build_schedule_with_limits(
    p: &Portfolio,
    q: &RedemptionPortfolio,
    limits: &[f64],
    max_days: usize,
) -> Result<LiquidationSchedule> {
    let n = p.len();
    if q.len() != n || limits.len() != n {
        return domain("quantities and limits must match the portfolio");
    }
    if max_days == 0 {
        return domain("max_days must be at least 1");
    }
    if limits.iter().any(|l| !l.is_finite() || *l < 0.0) {
        return domain("daily limits must be non-negative");
    }
    let target = q.quantities().to_vec();
    let mut remaining = target.clone();
    let stuck: Vec<usize> = (0..n).filter(|&i| target[i] > 0.0 && limits[i] == 0.0).collect();
    let mut days = Vec::new();
    while days.len() < max_days {
        let mut sold = vec![0.0; n];
        let mut any = false;
        for i in 0..n {
            if remaining[i] <= DONE * target[i].max(1.0) || limits[i] == 0.0 {
                continue;
            }
            let x = remaining[i].min(limits[i]);
            sold[i] = x;
            remaining[i] -= x;
            if remaining[i] <= DONE * target[i].max(1.0) {
                sold[i] += remaining[i];
                remaining[i] = 0.0;
            }
            any = true;
        }
        if !any {
            break;
        }
        days.push(sold);
    }
    Ok(LiquidationSchedule { days, target, prices: p.prices(), stuck })
}

impl LiquidationSchedule {
    /// Number of simulated days H.
    #[must_use]
    pub fn horizon(&self) -> usize {
        self.days.len()
    }

    /// Shares sold on day `h` (1-based). Days beyond the horizon sell nothing.
    #[must_use]
    pub fn day(&self, h: usize) -> Vec<f64> {
        if h == 0 || h > self.days.len() {
            vec![0.0; self.target.len()]
        } else {
            self.days[h - 1].clone()
        }
    }

    #[must_use]
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.days
    }

    #[must_use]
    pub fn target(&self) -> &[f64] {
        &self.target
    }

    /// Cumulative shares sold after `h` days.
    #[must_use]
    pub fn cumulative(&self, h: usize) -> Vec<f64> {
        let mut acc = vec![0.0; self.target.len()];
        for row in self.days.iter().take(h) {
            for (a, x) in acc.iter_mut().zip(row) {
                *a += x;
            }
        }
        acc
    }

    /// Cumulative value sold after `h` days, 𝔸(h) = Σ_i Σ_{k≤h} q_i(k) P_i.
    #[must_use]
    pub fn cumulative_value(&self, h: usize) -> f64 {
        self.days.iter().take(h).map(|row| row.iter().zip(&self.prices).map(|(x, p)| x * p).sum::<f64>()).sum()
    }

    #[must_use]
    pub fn target_value(&self) -> f64 {
        self.target.iter().zip(&self.prices).map(|(x, p)| x * p).sum()
    }

    /// Whether every target quantity has been sold.
    #[must_use]
    pub fn is_complete(&self) -> bool {
        self.cumulative(self.days.len())
            .iter()
            .zip(&self.target)
            .all(|(c, t)| (t - c).abs() <= 1e-9 * t.max(1.0))
    }

    /// Liquidation ratio LR(q;h): share of the redemption value sold after h days.
    pub fn liquidation_ratio(&self, h: usize) -> Result<f64> {
        let v = self.target_value();
        if v <= 0.0 {
            return domain("redemption portfolio has zero value");
        }
        Ok((self.cumulative_value(h) / v).min(1.0))
    }

    /// Shortfall ratio 1 − LR(q;h): share of the redemption value still unsold.
    pub fn shortfall_ratio(&self, h: usize) -> Result<f64> {
        Ok(1.0 - self.liquidation_ratio(h)?)
    }

    /// Weights of what has been sold after `h` days.
    pub fn sold_weights(&self, h: usize) -> Result<Vec<f64>> {
        weights_of(&self.cumulative(h), &self.prices)
    }

    /// Weights of the holdings left after `h` days, ω − Σ_{k≤h} q(k).
    pub fn remaining_weights(&self, holdings: &[f64], h: usize) -> Result<Vec<f64>> {
        if holdings.len() != self.target.len() {
            return domain("holdings must match the schedule");
        }
        let left: Vec<f64> = holdings.iter().zip(self.cumulative(h)).map(|(w, c)| (w - c).max(0.0)).collect();
        weights_of(&left, &self.prices)
    }

    /// LT(q,p) = inf{h : LR(q;h) ≥ p}.
    pub fn liquidation_time(&self, p: f64) -> Result<Days> {
        if !(p > 0.0 && p <= 1.0) {
            return domain(format!("proportion {p} outside (0, 1]"));
        }
        for h in 1..=self.days.len() {
            if self.liquidation_ratio(h)? >= p - 1e-12 {
                return Ok(Days::Finite(h));
            }
        }
        Ok(Days::Never)
    }

    /// CSV with one row per day, one column per security and the cumulative
    /// value sold.
    pub fn to_csv(&self, ids: &[String]) -> Result<String> {
        if ids.len() != self.target.len() {
            return domain("one id per security required");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["day".to_string()];
        header.extend(ids.iter().cloned());
        header.push("cumulative_value".into());
        w.write_record(&header).map_err(crate::io::csv_err)?;
        for (k, row) in self.days.iter().enumerate() {
            let mut rec = vec![(k + 1).to_string()];
            rec.extend(row.iter().map(|x| crate::io::fmt_num(*x)));
            rec.push(crate::io::fmt_num(self.cumulative_value(k + 1)));
            w.write_record(&rec).map_err(crate::io::csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| crate::LstError::Input(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn weights_of(q: &[f64], prices: &[f64]) -> Result<Vec<f64>> {
    let v: f64 = q.iter().zip(prices).map(|(x, p)| x * p).sum();
    if v <= 0.0 {
        return domain("nothing to weigh");
    }
    Ok(q.iter().zip(prices).map(|(x, p)| x * p / v).collect())
}

/// Daily liquidation profile of a full redemption sold at the daily limits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DailyProfile {
    /// W(h) for h = 1..H, as fractions of TNA.
    pub daily: Vec<f64>,
    /// Weight that never liquidates (securities with a zero limit).
    pub residual: f64,
    /// Securities with a zero limit and a positive holding.
    pub stuck: Vec<usize>,
    psi: Vec<f64>,
    weights: Vec<f64>,
}

impl DailyProfile {
    /// LS(h) = 1 − Σ_i min(h·ψ_i, w_i), with LS(0) = 1.
    #[must_use]
    pub fn shortfall(&self, h: usize) -> f64 {
        let sold: f64 = self.psi.iter().zip(&self.weights).map(|(psi, w)| (h as f64 * psi).min(*w)).sum();
        (1.0 - sold).max(0.0)
    }

    /// W(h) = LS(h−1) − LS(h), zero outside the profile.
    #[must_use]
    pub fn daily_at(&self, h: usize) -> f64 {
        if h == 0 || h > self.daily.len() {
            0.0
        } else {
            self.daily[h - 1]
        }
    }
}

/// Builds W(h) in closed form from ψ_i = q_i^+ P_i / TNA and w_i(ω).
pub fn daily_liquidation_profile(p: &Portfolio) -> Result<DailyProfile> {
    let tna = p.tna()?;
    let weights = p.weights()?;
    let psi: Vec<f64> = p.securities().iter().map(|s| s.daily_limit * s.price / tna).collect();
    let stuck: Vec<usize> = p
        .securities()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.shares > 0.0 && s.daily_limit == 0.0)
        .map(|(i, _)| i)
        .collect();
    let horizon = p
        .securities()
        .iter()
        .filter(|s| s.daily_limit > 0.0)
        .map(|s| (s.shares / s.daily_limit).ceil() as usize)
        .max()
        .unwrap_or(0);
    let residual: f64 = stuck.iter().map(|&i| weights[i]).sum();
    let mut profile = DailyProfile { daily: Vec::with_capacity(horizon), residual, stuck, psi, weights };
    let mut prev = 1.0;
    for h in 1..=horizon {
        let ls = profile.shortfall(h);
        profile.daily.push((prev - ls).max(0.0));
        prev = ls;
    }
    Ok(profile)
}

/// Illiquid assets measured from the daily profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IlliquidAssets {
    /// h* = inf{h : W(h) ≤ w*}.
    pub h_star: usize,
    /// LS(h* − 1).
    pub fraction: f64,
}

pub fn illiquid_assets(p: &Portfolio, w_star: f64) -> Result<IlliquidAssets> {
    if !(w_star > 0.0 && w_star < 1.0) {
        return domain("threshold must lie in (0, 1)");
    }
    let profile = daily_liquidation_profile(p)?;
    let mut h = 1;
    while profile.daily_at(h) > w_star {
        h += 1;
    }
    Ok(IlliquidAssets { h_star: h, fraction: profile.shortfall(h - 1) })
}
