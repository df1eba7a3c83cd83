//! Liquidity stress testing for investment funds.
//!
//! The crate covers redemption coverage ratios (time-to-liquidation and HQLA
//! approaches), reverse stress tests, liquidation policy optimisation, the
//! cash buffer problem and liquidity management tools (swing pricing,
//! anti-dilution levies, gates).
//!
//! ```
//! use lst_core::{rcr, sample, RedemptionShock};
//!
//! let fund = sample::fund();
//! let q = rcr::pro_rata_portfolio(&fund, 0.2).unwrap();
//! let report = rcr::rcr_report(&fund, RedemptionShock::new(0.2).unwrap(), &q, 6).unwrap();
//! assert!(report.row(1).unwrap().rcr < 1.0);
//! ```

pub mod buffer;
mod error;
pub mod hqla;
pub mod io;
pub mod liquidation;
pub mod model;
pub mod optimizer;
mod quad;
pub mod rcr;
pub mod rst;
pub mod sample;
pub mod special;
pub mod swing;

pub use error::{LstError, Result};
pub use liquidation::{Days, LiquidationSchedule};
pub use model::{Portfolio, RedemptionPortfolio, RedemptionShock, Security};
