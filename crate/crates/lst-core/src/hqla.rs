//! Redemption coverage ratio under the high-quality liquid assets approach.

use serde::{Deserialize, Serialize};

use crate::error::{domain, LstError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssetClass {
    Cash,
    Sovereign,
    Corporate,
    Securitization,
    Equity,
}

/// Credit rating band of the static matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RatingBand {
    /// AA− to AAA.
    AA,
    /// A− to A+.
    A,
    /// BBB− to BBB+.
    BBB,
    /// Below BBB−.
    BelowBBB,
}

impl std::str::FromStr for AssetClass {
    type Err = LstError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cash" => Ok(AssetClass::Cash),
            "sovereign" | "sovereigns" => Ok(AssetClass::Sovereign),
            "corporate" | "corporates" => Ok(AssetClass::Corporate),
            "securitization" | "securitisation" => Ok(AssetClass::Securitization),
            "equity" | "equities" => Ok(AssetClass::Equity),
            other => Err(LstError::Domain(format!("unknown asset class `{other}`"))),
        }
    }
}

impl std::str::FromStr for RatingBand {
    type Err = LstError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AAA" | "AA+" | "AA" | "AA-" => Ok(RatingBand::AA),
            "A+" | "A" | "A-" => Ok(RatingBand::A),
            "BBB+" | "BBB" | "BBB-" => Ok(RatingBand::BBB),
            "BELOW" | "HY" | "BB+" | "BB" | "BB-" | "B+" | "B" | "B-" | "CCC" | "CC" | "C" | "D" => {
                Ok(RatingBand::BelowBBB)
            }
            other => Err(LstError::Domain(format!("unknown rating `{other}`"))),
        }
    }
}

/// Static cash conversion factor by asset class and rating band.
#[must_use]
pub fn ccf_static(class: AssetClass, band: RatingBand) -> f64 {
    use AssetClass::*;
    use RatingBand::*;
    match (class, band) {
        (Cash, _) => 1.0,
        (Equity, _) => 0.5,
        (Sovereign, AA) => 1.0,
        (Sovereign, A) => 0.85,
        (Sovereign, BBB) => 0.5,
        (Sovereign, BelowBBB) => 0.0,
        (Corporate, AA) => 0.85,
        (Corporate, A) | (Corporate, BBB) => 0.5,
        (Corporate, BelowBBB) => 0.0,
        (Securitization, AA) => 0.85,
        (Securitization, A) => 0.5,
        (Securitization, BBB) | (Securitization, BelowBBB) => 0.0,
    }
}

/// Lookup from strings, e.g. `("corporate", "BBB-")`.
pub fn ccf_static_lookup(class: &str, rating: &str) -> Result<f64> {
    let c: AssetClass = class.parse()?;
    if c == AssetClass::Cash || c == AssetClass::Equity {
        return Ok(ccf_static(c, RatingBand::AA));
    }
    Ok(ccf_static(c, rating.parse()?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HqlaBucket {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ccf_static: Option<f64>,
    /// Selling intensity λ per day.
    pub lambda: f64,
    /// Loss intensity per √day.
    pub eta_dd: f64,
    /// Maximum drawdown.
    pub mdd: f64,
}

impl HqlaBucket {
    pub fn validate(&self) -> Result<()> {
        if let Some(c) = self.ccf_static {
            if !(0.0..=1.0).contains(&c) {
                return domain("static CCF must lie in [0, 1]");
            }
        }
        if self.lambda < 0.0 || self.eta_dd < 0.0 || !(0.0..=1.0).contains(&self.mdd) {
            return domain("bucket needs lambda, eta_dd >= 0 and mdd in [0, 1]");
        }
        Ok(())
    }

    /// LF(τ) = min(1, λτ).
    #[must_use]
    pub fn liquidity_factor(&self, tau: f64) -> f64 {
        (self.lambda * tau).min(1.0)
    }

    /// DF(τ) = min(MDD, η√τ).
    #[must_use]
    pub fn drawdown_factor(&self, tau: f64) -> f64 {
        self.mdd.min(self.eta_dd * tau.sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecificRiskParams {
    pub tna_star: f64,
    pub h_star: f64,
    pub xi_size: f64,
    pub xi_conc: f64,
    pub sf_cap: f64,
}

impl SpecificRiskParams {
    pub fn validate(&self) -> Result<()> {
        if self.tna_star <= 0.0 || self.h_star <= 0.0 || !(0.0..=1.0).contains(&self.sf_cap) {
            return domain("specific risk thresholds must be positive and the cap in [0, 1]");
        }
        Ok(())
    }

    /// SF = min(ξ_size (TNA/TNA* − 1)⁺ + ξ_conc (√(H/H*) − 1)⁺, SF⁺).
    #[must_use]
    pub fn specific_factor(&self, tna: f64, h: f64) -> f64 {
        let size = self.xi_size * (tna / self.tna_star - 1.0).max(0.0);
        let conc = self.xi_conc * ((h / self.h_star).sqrt() - 1.0).max(0.0);
        (size + conc).min(self.sf_cap)
    }
}

/// Where the drawdown factor is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DrawdownHorizon {
    /// DF(τ/2): assets are sold uniformly over the window.
    #[default]
    Midpoint,
    /// DF(τ): the conservative variant.
    Full,
}

/// CCF = LF(τ)·(1 − DF(τ/2))·(1 − SF).
pub fn ccf_parametric(
    b: &HqlaBucket,
    sf: &SpecificRiskParams,
    tau: f64,
    tna: f64,
    h: f64,
    horizon: DrawdownHorizon,
) -> Result<f64> {
    if !(tau >= 0.0) {
        return domain("tau must be non-negative");
    }
    b.validate()?;
    sf.validate()?;
    let t = match horizon {
        DrawdownHorizon::Midpoint => tau / 2.0,
        DrawdownHorizon::Full => tau,
    };
    Ok(b.liquidity_factor(tau) * (1.0 - b.drawdown_factor(t)) * (1.0 - sf.specific_factor(tna, h)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HqlaCoverage {
    pub rcr: f64,
    pub ls: f64,
}

/// RCR = Σ w_k·CCF_k / 𝓡 and LS = 𝓡·max(0, 1 − RCR).
pub fn rcr_hqla(buckets: &[(f64, f64)], rate: f64) -> Result<HqlaCoverage> {
    if !(rate > 0.0) {
        return domain("redemption rate must be positive");
    }
    let total: f64 = buckets.iter().map(|(w, _)| w).sum();
    if (total - 1.0).abs() > 1e-9 {
        return domain(format!("bucket weights sum to {total}, expected 1"));
    }
    if buckets.iter().any(|(w, c)| *w < 0.0 || !(0.0..=1.0).contains(c)) {
        return domain("bucket weights must be non-negative and CCFs in [0, 1]");
    }
    let rcr = buckets.iter().map(|(w, c)| w * c).sum::<f64>() / rate;
    Ok(HqlaCoverage { rcr, ls: rate * (1.0 - rcr).max(0.0) })
}
