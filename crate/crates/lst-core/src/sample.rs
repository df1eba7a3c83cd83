//! A seven-asset fund used throughout the docs, the CLI defaults and the
//! golden files. TNA is about $141.7 mn.

use crate::model::{Portfolio, Security};

pub const SHARES: [f64; 7] = [435_100.0, 300_100.0, 50_400.0, 200_500.0, 75_500.0, 17_500.0, 1_800.0];
pub const PRICES: [f64; 7] = [89.0, 123.0, 488.0, 102.0, 167.0, 319.0, 1_589.0];
pub const LIMITS: [f64; 7] = [20_000.0, 20_000.0, 10_000.0, 20_000.0, 20_000.0, 2_000.0, 1_000.0];
/// Annualised volatilities.
pub const VOLATILITIES: [f64; 7] = [0.20, 0.18, 0.15, 0.15, 0.22, 0.30, 0.35];
/// Bid-ask spreads (5 bps = 0.0005).
pub const SPREADS: [f64; 7] = [0.0005, 0.0003, 0.0005, 0.0008, 0.0012, 0.0015, 0.0015];

const RHO_LOWER: [&[f64]; 7] = [
    &[],
    &[0.1],
    &[0.4, 0.7],
    &[0.5, 0.4, 0.8],
    &[0.3, 0.3, 0.5, 0.5],
    &[0.3, 0.3, 0.5, 0.5, 0.7],
    &[0.3, 0.3, 0.5, 0.5, 0.7, 0.7],
];

#[must_use]
pub fn correlation() -> Vec<Vec<f64>> {
    let mut rho = vec![vec![0.0; 7]; 7];
    for i in 0..7 {
        rho[i][i] = 1.0;
        for (j, r) in RHO_LOWER[i].iter().enumerate() {
            rho[i][j] = *r;
            rho[j][i] = *r;
        }
    }
    rho
}

/// Holdings, prices and daily limits only.
#[must_use]
pub fn fund() -> Portfolio {
    let secs = (0..7).map(|i| Security::new(format!("{}", i + 1), SHARES[i], PRICES[i], LIMITS[i])).collect();
    Portfolio::new(secs).expect("sample fund is valid")
}

/// Same fund with volumes (10 × the daily limit, i.e. x⁺ = 10%), volatilities,
/// spreads and the correlation matrix.
#[must_use]
pub fn fund_with_market() -> Portfolio {
    let secs = (0..7)
        .map(|i| {
            Security::new(format!("{}", i + 1), SHARES[i], PRICES[i], LIMITS[i]).with_market(
                10.0 * LIMITS[i],
                VOLATILITIES[i],
                SPREADS[i],
            )
        })
        .collect();
    Portfolio::new(secs).expect("sample fund is valid").with_correlation(correlation()).expect("sample correlation is valid")
}

/// The fund with the seventh daily limit replaced, e.g. 20 shares in a
/// stressed market.
#[must_use]
pub fn fund_with_last_limit(limit: f64) -> Portfolio {
    fund().with_daily_limit(6, limit).expect("index 6 exists")
}
