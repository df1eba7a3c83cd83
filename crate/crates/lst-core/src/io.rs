//! Portfolio and correlation files (CSV and JSON) and output formatting.

use serde::{Deserialize, Serialize};

use crate::error::{LstError, Result};
use crate::model::{Portfolio, Security};
use crate::swing::GateRequest;

pub(crate) fn csv_err(e: csv::Error) -> LstError {
    LstError::Input(e.to_string())
}

/// Formats to 6 significant digits, trimming trailing zeros. Used wherever
/// output must be byte-stable.
#[must_use]
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { format!("{x}") };
    }
    let digits = 6i32;
    let mag = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Formats a fraction as a percentage with two decimals.
#[must_use]
pub fn fmt_pct(x: f64) -> String {
    let s = format!("{:.2}", 100.0 * x);
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

pub const PORTFOLIO_HEADER: [&str; 7] = ["id", "shares", "price", "daily_limit", "daily_volume", "volatility", "spread"];

pub fn portfolio_from_csv(text: &str) -> Result<Portfolio> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(csv_err)?.clone();
    for required in &PORTFOLIO_HEADER[..4] {
        if !headers.iter().any(|h| h == *required) {
            return Err(LstError::Input(format!("portfolio csv: missing column `{required}`")));
        }
    }
    let mut secs = Vec::new();
    for rec in rdr.deserialize::<Security>() {
        secs.push(rec.map_err(csv_err)?);
    }
    if secs.is_empty() {
        return Err(LstError::Input("portfolio csv: no securities".into()));
    }
    Portfolio::new(secs)
}

pub fn portfolio_to_csv(p: &Portfolio) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(PORTFOLIO_HEADER).map_err(csv_err)?;
    for s in p.securities() {
        w.write_record([
            s.id.clone(),
            fmt_num(s.shares),
            fmt_num(s.price),
            fmt_num(s.daily_limit),
            fmt_num(s.daily_volume),
            fmt_num(s.volatility),
            fmt_num(s.spread),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| LstError::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Reads an n×n matrix, row-major, without a header.
pub fn matrix_from_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|x| x.parse::<f64>().map_err(|e| LstError::Input(format!("matrix csv: `{x}`: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Gate scenario: `day,investor,rate` with a header row.
pub fn gate_requests_from_csv(text: &str) -> Result<Vec<GateRequest>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.deserialize::<GateRequest>() {
        out.push(rec.map_err(csv_err)?);
    }
    Ok(out)
}

/// JSON form of a portfolio: the same fields as the CSV plus an optional
/// correlation matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PortfolioDoc {
    pub securities: Vec<Security>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation: Option<Vec<Vec<f64>>>,
}

pub fn portfolio_from_json(text: &str) -> Result<Portfolio> {
    let doc: PortfolioDoc = serde_json::from_str(text).map_err(|e| LstError::Input(e.to_string()))?;
    if doc.securities.is_empty() {
        return Err(LstError::Input("portfolio json: no securities".into()));
    }
    let p = Portfolio::new(doc.securities)?;
    match doc.correlation {
        Some(rho) => p.with_correlation(rho),
        None => Ok(p),
    }
}

pub fn portfolio_to_json(p: &Portfolio) -> Result<String> {
    let doc = PortfolioDoc { securities: p.securities().to_vec(), correlation: p.correlation().cloned() };
    serde_json::to_string_pretty(&doc).map_err(|e| LstError::Input(e.to_string()))
}
