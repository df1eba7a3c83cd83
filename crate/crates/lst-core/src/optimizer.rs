//! Mixed liquidation policies: transaction cost, tracking risk and
//! shortfall, and a constrained search for the cheapest admissible policy.

use serde::{Deserialize, Serialize};

use crate::error::{domain, LstError, Result};
use crate::liquidation::{build_schedule, LiquidationSchedule, DEFAULT_MAX_DAYS};
use crate::model::{weight_distortion, Portfolio, RedemptionPortfolio, RedemptionShock};
use crate::rcr::pro_rata_portfolio;

/// Shape of the impact term between x̃ and x⁺.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ImpactRegime {
    /// β·σ·√x on the whole range.
    #[default]
    SquareRoot,
    /// β·σ·√x up to x̃, then β·σ·x/√x̃ (linear, continuous at x̃).
    SquareRootLinear,
}

/// What TC is expressed as a fraction of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CostBase {
    /// 𝕍(q), the redemption value.
    #[default]
    RedemptionValue,
    Tna,
}

/// Unit cost c_i(x) = s_i + impact_i(x) with x the participation rate
/// q_i(h)/v_i. Spreads, annual volatilities and volumes come from the
/// securities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// φ1, a.k.a. β_π.
    pub impact: f64,
    pub x_tilde: f64,
    pub x_plus: f64,
    pub regime: ImpactRegime,
    pub days_per_year: f64,
    pub base: CostBase,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            impact: 0.4,
            x_tilde: 0.05,
            x_plus: 0.10,
            regime: ImpactRegime::SquareRoot,
            days_per_year: 260.0,
            base: CostBase::RedemptionValue,
        }
    }
}

impl CostModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.impact >= 0.0) || !(self.days_per_year > 0.0) {
            return domain("impact must be non-negative and days_per_year positive");
        }
        if !(0.0 <= self.x_tilde && self.x_tilde <= self.x_plus && self.x_plus <= 1.0) {
            return domain("need 0 ≤ x_tilde ≤ x_plus ≤ 1");
        }
        if self.regime == ImpactRegime::SquareRootLinear && self.x_tilde == 0.0 {
            return domain("the linear regime needs x_tilde > 0");
        }
        Ok(())
    }

    /// Impact part of the unit cost for daily volatility `sigma_d`.
    #[must_use]
    pub fn unit_impact(&self, x: f64, sigma_d: f64) -> f64 {
        let b = self.impact * sigma_d;
        match self.regime {
            ImpactRegime::SquareRoot => b * x.sqrt(),
            ImpactRegime::SquareRootLinear if x > self.x_tilde => b * x / self.x_tilde.sqrt(),
            ImpactRegime::SquareRootLinear => b * x.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransactionCost {
    pub total: f64,
    pub spread: f64,
    pub impact: f64,
}

/// TC = Σ_h Σ_i q_i(h)·P_i·c_i(q_i(h)/v_i), divided by the cost base.
pub fn transaction_cost(p: &Portfolio, cm: &CostModel, s: &LiquidationSchedule) -> Result<TransactionCost> {
    cm.validate()?;
    let secs = p.securities();
    if s.target().len() != secs.len() {
        return domain("schedule does not match the portfolio");
    }
    let sqrt_days = cm.days_per_year.sqrt();
    let (mut spread, mut impact) = (0.0, 0.0);
    for row in s.rows() {
        for (q, sec) in row.iter().zip(secs) {
            if *q <= 0.0 {
                continue;
            }
            if sec.daily_volume <= 0.0 {
                return domain(format!("security {}: zero daily volume with a positive sale", sec.id));
            }
            let x = q / sec.daily_volume;
            if x > cm.x_plus * (1.0 + 1e-9) {
                return domain(format!("security {}: participation {x} above x_plus", sec.id));
            }
            let v = q * sec.price;
            spread += v * sec.spread;
            impact += v * cm.unit_impact(x, sec.volatility / sqrt_days);
        }
    }
    let base = match cm.base {
        CostBase::RedemptionValue => s.target_value(),
        CostBase::Tna => p.tna()?,
    };
    if base <= 0.0 {
        return Ok(TransactionCost { total: 0.0, spread: 0.0, impact: 0.0 });
    }
    let (spread, impact) = (spread / base, impact / base);
    Ok(TransactionCost { total: spread + impact, spread, impact })
}

/// σ(ω|q) = √(Δwᵀ Σ Δw) with Σ built from the annual volatilities.
pub fn tracking_risk_equity(p: &Portfolio, q: &RedemptionPortfolio) -> Result<f64> {
    let cov = p.covariance()?;
    let dw = weight_distortion(p, q)?.delta;
    let mut v = 0.0;
    for (i, row) in cov.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            v += dw[i] * c * dw[j];
        }
    }
    Ok(v.max(0.0).sqrt())
}

/// Sector and maturity bucket of each bond, with modified duration and DTS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BondRiskSpec {
    pub sector: Vec<usize>,
    pub bucket: Vec<usize>,
    pub duration: Vec<f64>,
    pub dts: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BondTrackingRisk {
    pub total: f64,
    pub weight: f64,
    pub duration: f64,
    pub dts: f64,
}

/// TR = Σ_s |Σ Δw| + Σ_s Σ_j |Σ Δw·MD| + Σ_s |Σ Δw·DTS|, sums inside a sector
/// (and bucket) netted before the absolute value.
pub fn tracking_risk_bond(p: &Portfolio, q: &RedemptionPortfolio, spec: &BondRiskSpec) -> Result<BondTrackingRisk> {
    let n = p.len();
    if spec.sector.len() != n || spec.bucket.len() != n || spec.duration.len() != n || spec.dts.len() != n {
        return domain("every bond needs a sector, a bucket, a duration and a DTS");
    }
    let dw = weight_distortion(p, q)?.delta;
    let ns = spec.sector.iter().max().map_or(0, |m| m + 1);
    let nb = spec.bucket.iter().max().map_or(0, |m| m + 1);
    let mut w = vec![0.0; ns];
    let mut md = vec![vec![0.0; nb]; ns];
    let mut dts = vec![0.0; ns];
    for i in 0..n {
        let (s, b) = (spec.sector[i], spec.bucket[i]);
        w[s] += dw[i];
        md[s][b] += dw[i] * spec.duration[i];
        dts[s] += dw[i] * spec.dts[i];
    }
    let weight: f64 = w.iter().map(|x| x.abs()).sum();
    let duration: f64 = md.iter().flatten().map(|x| x.abs()).sum();
    let dts: f64 = dts.iter().map(|x| x.abs()).sum();
    Ok(BondTrackingRisk { total: weight + duration + dts, weight, duration, dts })
}

/// Risk measure used for the tracking constraint.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub enum TrackingModel {
    #[default]
    Equity,
    Bond(BondRiskSpec),
}

fn tracking_risk(p: &Portfolio, q: &RedemptionPortfolio, tm: &TrackingModel) -> Result<f64> {
    match tm {
        TrackingModel::Equity => tracking_risk_equity(p, q),
        TrackingModel::Bond(spec) => Ok(tracking_risk_bond(p, q, spec)?.total),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolicyEvaluation {
    pub tracking_risk: f64,
    pub cost: TransactionCost,
    /// 1 − LR(q;h), the unsold share of the redemption portfolio after h days.
    pub shortfall: f64,
}

pub fn evaluate_policy(p: &Portfolio, cm: &CostModel, q: &RedemptionPortfolio, h: usize) -> Result<PolicyEvaluation> {
    evaluate_with(p, cm, q, h, &TrackingModel::Equity)
}

pub fn evaluate_with(
    p: &Portfolio,
    cm: &CostModel,
    q: &RedemptionPortfolio,
    h: usize,
    tm: &TrackingModel,
) -> Result<PolicyEvaluation> {
    let s = build_schedule(p, q, DEFAULT_MAX_DAYS.max(h))?;
    Ok(PolicyEvaluation {
        tracking_risk: tracking_risk(p, q, tm)?,
        cost: transaction_cost(p, cm, &s)?,
        shortfall: s.shortfall_ratio(h)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyConstraints {
    pub tr_max: f64,
    pub ls_max: f64,
    pub h: usize,
}

/// Constraint that cannot be met.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BindingConstraint {
    /// No value-preserving portfolio sells enough within h days.
    Shortfall,
    /// Each constraint can be met alone but not both together.
    TrackingAndShortfall,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum OptimizeOutcome {
    Optimal { portfolio: RedemptionPortfolio, evaluation: PolicyEvaluation },
    Infeasible { binding: BindingConstraint, least_violation: f64 },
}

struct Problem<'a> {
    p: &'a Portfolio,
    cm: &'a CostModel,
    tm: &'a TrackingModel,
    c: PolicyConstraints,
    prices: Vec<f64>,
    omega: Vec<f64>,
    tr_scale: f64,
}

impl Problem<'_> {
    fn eval(&self, q: &[f64]) -> Result<PolicyEvaluation> {
        let rp = RedemptionPortfolio::new(self.p, q.to_vec())?;
        evaluate_with(self.p, self.cm, &rp, self.c.h, self.tm)
    }

    fn violation(&self, e: &PolicyEvaluation) -> f64 {
        (e.tracking_risk - self.c.tr_max).max(0.0) / self.tr_scale + (e.shortfall - self.c.ls_max).max(0.0)
    }

    // value-preserving move of `dv` from security j into security i
    fn shift(&self, q: &[f64], i: usize, j: usize, dv: f64) -> Option<Vec<f64>> {
        let qi = q[i] + dv / self.prices[i];
        let qj = q[j] - dv / self.prices[j];
        if qi > self.omega[i] || qj < 0.0 {
            return None;
        }
        let mut out = q.to_vec();
        out[i] = qi;
        out[j] = qj;
        Some(out)
    }

    /// Pairwise exchange pattern search. `score` returns None for rejected
    /// points; lower is better.
    fn search<F: Fn(&PolicyEvaluation) -> Option<f64>>(&self, mut q: Vec<f64>, amount: f64, score: F) -> Result<(Vec<f64>, f64)> {
        let n = q.len();
        let mut best = score(&self.eval(&q)?).unwrap_or(f64::INFINITY);
        let mut step = 0.1 * amount;
        let min_step = 1e-9 * amount;
        while step > min_step {
            let mut improved = false;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    // largest admissible move, capped at the current step
                    let room = ((self.omega[i] - q[i]) * self.prices[i]).min(q[j] * self.prices[j]);
                    let dv = step.min(room);
                    if dv <= 0.0 {
                        continue;
                    }
                    let Some(cand) = self.shift(&q, i, j, dv) else { continue };
                    if let Some(v) = score(&self.eval(&cand)?) {
                        if v < best - 1e-14 {
                            best = v;
                            q = cand;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        Ok((q, best))
    }
}

// fills h·q⁺ of every security, completes pro-rata on what is left, and
// rescales to the redemption value
fn limit_fill(p: &Portfolio, h: usize, amount: f64) -> Vec<f64> {
    let secs = p.securities();
    let mut q: Vec<f64> = secs.iter().map(|s| s.shares.min(h as f64 * s.daily_limit)).collect();
    let v: f64 = q.iter().zip(secs).map(|(x, s)| x * s.price).sum();
    if v >= amount {
        return q.iter().map(|x| x * amount / v).collect();
    }
    let rest: f64 = q.iter().zip(secs).map(|(x, s)| (s.shares - x) * s.price).sum();
    let k = if rest > 0.0 { (amount - v) / rest } else { 0.0 };
    q.iter_mut().zip(secs).for_each(|(x, s)| *x += k * (s.shares - *x));
    q
}

/// Minimises TC subject to TR ≤ TR⁺, 1 − LR(q;h) ≤ LS⁺, 𝕍(q) = 𝓡·TNA and
/// 0 ≤ q ≤ ω.
///
/// Starts from pro-rata, a limit-filling portfolio and their mixes, restores
/// feasibility by minimising the constraint violation when needed, then runs
/// a pairwise value-exchange pattern search on TC over feasible points. The
/// search is deterministic.
pub fn optimize_policy(
    p: &Portfolio,
    cm: &CostModel,
    shock: RedemptionShock,
    constraints: PolicyConstraints,
    tm: &TrackingModel,
) -> Result<OptimizeOutcome> {
    cm.validate()?;
    let c = constraints;
    if c.h == 0 || !(c.tr_max >= 0.0) || !(c.ls_max >= 0.0) {
        return domain("need h ≥ 1 and non-negative limits");
    }
    let tna = p.tna()?;
    let amount = shock.amount(p)?;
    if amount <= 0.0 || amount >= tna * (1.0 - 1e-12) {
        return domain("redemption rate must lie strictly between 0 and 1");
    }
    // the most that can be sold within h days bounds LR from above
    let reachable: f64 = p.securities().iter().map(|s| s.shares.min(c.h as f64 * s.daily_limit) * s.price).sum();
    let best_shortfall = (1.0 - reachable / amount).max(0.0);
    if best_shortfall > c.ls_max + 1e-12 {
        return Ok(OptimizeOutcome::Infeasible { binding: BindingConstraint::Shortfall, least_violation: best_shortfall - c.ls_max });
    }
    let pro = pro_rata_portfolio(p, shock.rate())?;
    let problem = Problem {
        p,
        cm,
        tm,
        c,
        prices: p.prices(),
        omega: p.shares(),
        tr_scale: if c.tr_max > 0.0 { c.tr_max } else { 1e-4 },
    };
    let tr_tol = 1e-12;
    let feasible = |e: &PolicyEvaluation| e.tracking_risk <= c.tr_max + tr_tol && e.shortfall <= c.ls_max + 1e-12;

    let fill = limit_fill(p, c.h, amount);
    let fill = RedemptionPortfolio::new(p, fill)?;
    let mut starts = Vec::new();
    for k in 0..=10 {
        starts.push(pro.mix(&fill, k as f64 / 10.0)?.quantities().to_vec());
    }
    if c.tr_max == 0.0 {
        // only Δw = 0 is admissible
        starts = vec![pro.quantities().to_vec()];
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut least_violation = f64::INFINITY;
    for q0 in starts {
        let e0 = problem.eval(&q0)?;
        let q1 = if feasible(&e0) {
            q0
        } else {
            let (q, v) = problem.search(q0, amount, |e| Some(problem.violation(e)))?;
            least_violation = least_violation.min(v);
            if !feasible(&problem.eval(&q)?) {
                continue;
            }
            q
        };
        let (q, tc) = problem.search(q1, amount, |e| feasible(e).then_some(e.cost.total))?;
        if best.as_ref().is_none_or(|(_, b)| tc < *b - 1e-15) {
            best = Some((q, tc));
        }
    }
    match best {
        Some((q, _)) => {
            let portfolio = RedemptionPortfolio::new(p, q)?;
            let evaluation = evaluate_with(p, cm, &portfolio, c.h, tm)?;
            Ok(OptimizeOutcome::Optimal { portfolio, evaluation })
        }
        None => Ok(OptimizeOutcome::Infeasible { binding: BindingConstraint::TrackingAndShortfall, least_violation }),
    }
}

impl OptimizeOutcome {
    /// The optimal portfolio, or an [`LstError::Infeasible`] naming the
    /// binding constraint.
    pub fn into_result(self) -> Result<(RedemptionPortfolio, PolicyEvaluation)> {
        match self {
            OptimizeOutcome::Optimal { portfolio, evaluation } => Ok((portfolio, evaluation)),
            OptimizeOutcome::Infeasible { binding, least_violation } => {
                Err(LstError::Infeasible(format!("{binding:?} constraint cannot be met (violation {least_violation:.3e})")))
            }
        }
    }
}
