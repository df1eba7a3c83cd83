//! Portfolio, redemption shocks and weight algebra.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, LstError, Result};

/// One line of the fund's holdings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Security {
    pub id: String,
    /// Number of shares held, ω_i.
    pub shares: f64,
    /// Price per share, P_i.
    pub price: f64,
    /// Maximum number of shares that can be sold per day, q_i^+.
    pub daily_limit: f64,
    /// Daily traded volume v_i, used by the cost model.
    #[serde(default)]
    pub daily_volume: f64,
    /// Annualised volatility.
    #[serde(default)]
    pub volatility: f64,
    /// Bid-ask spread as a fraction of price.
    #[serde(default)]
    pub spread: f64,
}

impl Security {
    #[must_use]
    pub fn new(id: impl Into<String>, shares: f64, price: f64, daily_limit: f64) -> Self {
        Security {
            id: id.into(),
            shares,
            price,
            daily_limit,
            daily_volume: 0.0,
            volatility: 0.0,
            spread: 0.0,
        }
    }

    #[must_use]
    pub fn with_market(mut self, daily_volume: f64, volatility: f64, spread: f64) -> Self {
        self.daily_volume = daily_volume;
        self.volatility = volatility;
        self.spread = spread;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.shares, self.price, self.daily_limit, self.daily_volume, self.volatility, self.spread]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return domain(format!("security {}: non-finite field", self.id));
        }
        if self.price <= 0.0 {
            return domain(format!("security {}: price must be positive", self.id));
        }
        if self.shares < 0.0 || self.daily_limit < 0.0 || self.daily_volume < 0.0 {
            return domain(format!("security {}: negative holding, limit or volume", self.id));
        }
        if self.volatility < 0.0 || self.spread < 0.0 {
            return domain(format!("security {}: negative volatility or spread", self.id));
        }
        Ok(())
    }

    #[must_use]
    pub fn value(&self) -> f64 {
        self.shares * self.price
    }
}

/// Ordered holdings plus an optional correlation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio {
    securities: Vec<Security>,
    correlation: Option<Vec<Vec<f64>>>,
}

impl Portfolio {
    /// Builds a portfolio after validating every security. An empty list is
    /// accepted here; value-based operations reject it.
    pub fn new(securities: Vec<Security>) -> Result<Self> {
        for s in &securities {
            s.validate()?;
        }
        Ok(Portfolio { securities, correlation: None })
    }

    /// Attaches a correlation matrix: square, matching the security count,
    /// symmetric, unit diagonal, entries in [-1, 1] and positive semi-definite.
    pub fn with_correlation(mut self, rho: Vec<Vec<f64>>) -> Result<Self> {
        let n = self.securities.len();
        if rho.len() != n || rho.iter().any(|r| r.len() != n) {
            return domain(format!("correlation matrix must be {n}x{n}"));
        }
        for i in 0..n {
            if (rho[i][i] - 1.0).abs() > 1e-12 {
                return domain("correlation diagonal must be 1");
            }
            for j in 0..n {
                if !(-1.0..=1.0).contains(&rho[i][j]) || (rho[i][j] - rho[j][i]).abs() > 1e-12 {
                    return domain("correlation must be symmetric with entries in [-1, 1]");
                }
            }
        }
        let m = DMatrix::from_fn(n, n, |i, j| rho[i][j]);
        let min_eig = m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if n > 0 && min_eig < -1e-10 {
            return domain(format!("correlation matrix is not positive semi-definite (min eigenvalue {min_eig:e})"));
        }
        self.correlation = Some(rho);
        Ok(self)
    }

    #[must_use]
    pub fn securities(&self) -> &[Security] {
        &self.securities
    }

    #[must_use]
    pub fn correlation(&self) -> Option<&Vec<Vec<f64>>> {
        self.correlation.as_ref()
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.securities.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.securities.is_empty()
    }

    #[must_use]
    pub fn shares(&self) -> Vec<f64> {
        self.securities.iter().map(|s| s.shares).collect()
    }

    #[must_use]
    pub fn prices(&self) -> Vec<f64> {
        self.securities.iter().map(|s| s.price).collect()
    }

    #[must_use]
    pub fn daily_limits(&self) -> Vec<f64> {
        self.securities.iter().map(|s| s.daily_limit).collect()
    }

    /// Total net assets Σ ω_i P_i.
    pub fn tna(&self) -> Result<f64> {
        if self.securities.is_empty() {
            return domain("empty portfolio");
        }
        let tna: f64 = self.securities.iter().map(Security::value).sum();
        if tna <= 0.0 {
            return domain("total net assets must be positive");
        }
        Ok(tna)
    }

    /// Value 𝕍(q) = Σ q_i P_i of a quantity vector aligned with the holdings.
    pub fn value_of(&self, q: &[f64]) -> Result<f64> {
        if q.len() != self.len() {
            return domain(format!("expected {} quantities, got {}", self.len(), q.len()));
        }
        Ok(q.iter().zip(&self.securities).map(|(q, s)| q * s.price).sum())
    }

    /// Portfolio weights w_i(ω) = ω_i P_i / TNA.
    pub fn weights(&self) -> Result<Vec<f64>> {
        let tna = self.tna()?;
        Ok(self.securities.iter().map(|s| s.value() / tna).collect())
    }

    /// Herfindahl index Σ w_i².
    pub fn herfindahl(&self) -> Result<f64> {
        Ok(self.weights()?.iter().map(|w| w * w).sum())
    }

    /// Annual covariance matrix diag(σ)·ρ·diag(σ).
    pub fn covariance(&self) -> Result<Vec<Vec<f64>>> {
        let rho = self
            .correlation
            .as_ref()
            .ok_or_else(|| LstError::Domain("correlation matrix required".into()))?;
        let sig: Vec<f64> = self.securities.iter().map(|s| s.volatility).collect();
        Ok((0..self.len())
            .map(|i| (0..self.len()).map(|j| sig[i] * rho[i][j] * sig[j]).collect())
            .collect())
    }

    /// Copy with every daily limit multiplied by `m`.
    #[must_use]
    pub fn with_scaled_limits(&self, m: f64) -> Portfolio {
        let mut p = self.clone();
        for s in &mut p.securities {
            s.daily_limit *= m;
        }
        p
    }

    /// Copy with one security's daily limit replaced.
    pub fn with_daily_limit(&self, index: usize, limit: f64) -> Result<Portfolio> {
        if index >= self.len() || limit < 0.0 || !limit.is_finite() {
            return domain("invalid security index or limit");
        }
        let mut p = self.clone();
        p.securities[index].daily_limit = limit;
        Ok(p)
    }
}

/// Redemption shock expressed as a rate of TNA.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RedemptionShock {
    rate: f64,
}

impl RedemptionShock {
    pub fn new(rate: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return domain(format!("redemption rate {rate} outside [0, 1]"));
        }
        Ok(RedemptionShock { rate })
    }

    #[must_use]
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Nominal amount ℝ = 𝓡 · TNA.
    pub fn amount(&self, p: &Portfolio) -> Result<f64> {
        Ok(self.rate * p.tna()?)
    }
}

/// Quantities to sell, aligned with the portfolio ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedemptionPortfolio {
    quantities: Vec<f64>,
}

impl RedemptionPortfolio {
    /// Checks 0 ≤ q_i ≤ ω_i (with a 1e-9 relative allowance for rounding).
    pub fn new(p: &Portfolio, quantities: Vec<f64>) -> Result<Self> {
        if quantities.len() != p.len() {
            return domain(format!("expected {} quantities, got {}", p.len(), quantities.len()));
        }
        for (q, s) in quantities.iter().zip(p.securities()) {
            if !q.is_finite() || *q < 0.0 {
                return domain(format!("security {}: quantity must be non-negative", s.id));
            }
            if *q > s.shares * (1.0 + 1e-9) {
                return domain(format!("security {}: cannot redeem {} of {} shares", s.id, q, s.shares));
            }
        }
        Ok(RedemptionPortfolio { quantities })
    }

    #[must_use]
    pub fn zeros(n: usize) -> Self {
        RedemptionPortfolio { quantities: vec![0.0; n] }
    }

    #[must_use]
    pub fn quantities(&self) -> &[f64] {
        &self.quantities
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.quantities.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.quantities.is_empty()
    }

    pub fn value(&self, p: &Portfolio) -> Result<f64> {
        p.value_of(&self.quantities)
    }

    /// Weights w_i(q) of the redemption portfolio itself.
    pub fn weights(&self, p: &Portfolio) -> Result<Vec<f64>> {
        let v = self.value(p)?;
        if v <= 0.0 {
            return domain("redemption portfolio has zero value");
        }
        Ok(self.quantities.iter().zip(p.securities()).map(|(q, s)| q * s.price / v).collect())
    }

    /// Weighted mix a·self + (1 − a)·other.
    pub fn mix(&self, other: &RedemptionPortfolio, a: f64) -> Result<RedemptionPortfolio> {
        if self.len() != other.len() || !(0.0..=1.0).contains(&a) {
            return domain("mix needs equal lengths and a in [0, 1]");
        }
        Ok(RedemptionPortfolio {
            quantities: self.quantities.iter().zip(&other.quantities).map(|(x, y)| a * x + (1.0 - a) * y).collect(),
        })
    }
}

/// Weight distortion Δw and post-liquidation weights w(ω − q).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distortion {
    pub delta: Vec<f64>,
    pub post: Vec<f64>,
}

/// Δw_i = 𝕍(q)/(𝕍(ω) − 𝕍(q)) · (w_i(ω) − w_i(q)), with w(ω − q) = w(ω) + Δw.
pub fn weight_distortion(p: &Portfolio, q: &RedemptionPortfolio) -> Result<Distortion> {
    let tna = p.tna()?;
    let vq = q.value(p)?;
    if vq >= tna * (1.0 - 1e-12) {
        return domain("full liquidation leaves no post-redemption weights");
    }
    let w = p.weights()?;
    let delta: Vec<f64> = if vq == 0.0 {
        vec![0.0; p.len()]
    } else {
        let wq = q.weights(p)?;
        let k = vq / (tna - vq);
        w.iter().zip(&wq).map(|(a, b)| k * (a - b)).collect()
    };
    let post = w.iter().zip(&delta).map(|(a, d)| a + d).collect();
    Ok(Distortion { delta, post })
}

/// Rounds half up to whole shares, for display. Negative inputs give 0.
#[must_use]
pub fn round_shares(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (x + 0.5).floor()
    }
}
