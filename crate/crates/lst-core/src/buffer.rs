//! Cash buffer: return analytics, liquidation gain, net buffer cost and the
//! optimal buffer.
//!
//! The redemption rate follows F(x) = x^η on [0, 1]. Costs are fractions of
//! TNA; the cost volatility is annual and converted with √(days_per_year).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quad::integrate;
use crate::special::integral_i_ab;
use crate::special::integral_i_w;

const TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BufferMarketParams {
    pub mu_asset: f64,
    pub mu_cash: f64,
    pub sigma_asset: f64,
    pub sigma_cash: f64,
    pub rho: f64,
    /// Tracking-error aversion λ.
    pub lambda: f64,
}

impl BufferMarketParams {
    pub fn validate(&self) -> Result<()> {
        if self.sigma_asset < 0.0 || self.sigma_cash < 0.0 || !(-1.0..=1.0).contains(&self.rho) || self.lambda < 0.0 {
            return domain("volatilities and lambda must be non-negative, rho in [-1, 1]");
        }
        Ok(())
    }

    /// σ_c² + σ_a² − 2ρσ_cσ_a, the variance of R_cash − R_asset.
    #[must_use]
    pub fn te_variance(&self) -> f64 {
        (self.sigma_cash.powi(2) + self.sigma_asset.powi(2) - 2.0 * self.rho * self.sigma_cash * self.sigma_asset).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BufferCostParams {
    /// Bid-ask spread s.
    pub spread: f64,
    /// Unit cost of paying redemptions out of cash, c.
    pub cash_cost: f64,
    /// Price impact coefficient β_π.
    pub impact: f64,
    /// Annualised volatility used by the impact term.
    pub volatility: f64,
    /// Daily trading limit x⁺ as a fraction of TNA; ≥ 1 means no limit.
    pub x_plus: f64,
    /// Exponent of the redemption law F(x) = x^η.
    pub eta: f64,
    #[serde(default = "default_days")]
    pub days_per_year: f64,
}

fn default_days() -> f64 {
    260.0
}

impl BufferCostParams {
    #[must_use]
    pub fn new(spread: f64, cash_cost: f64, impact: f64, volatility: f64, x_plus: f64, eta: f64) -> Self {
        BufferCostParams { spread, cash_cost, impact, volatility, x_plus, eta, days_per_year: default_days() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.spread < 0.0 || self.cash_cost < 0.0 || self.impact < 0.0 || self.volatility < 0.0 {
            return domain("cost parameters must be non-negative");
        }
        if !(self.x_plus > 0.0) || !(self.eta > 0.0) || !(self.days_per_year > 0.0) {
            return domain("x_plus, eta and days_per_year must be positive");
        }
        Ok(())
    }

    #[must_use]
    pub fn sigma_daily(&self) -> f64 {
        self.volatility / self.days_per_year.sqrt()
    }

    fn bs(&self) -> f64 {
        self.impact * self.sigma_daily()
    }

    fn unlimited(&self) -> bool {
        self.x_plus >= 1.0
    }

    /// Expected redemption rate η/(η+1).
    #[must_use]
    pub fn expected_redemption(&self) -> f64 {
        self.eta / (self.eta + 1.0)
    }

    fn density(&self, x: f64) -> f64 {
        if x <= 0.0 {
            if self.eta == 1.0 {
                1.0
            } else {
                0.0
            }
        } else {
            self.eta * x.powf(self.eta - 1.0)
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        x.clamp(0.0, 1.0).powf(self.eta)
    }

    // multiples of x⁺ inside (0, 1), shifted by `offset`
    fn knots(&self, offset: f64) -> Vec<f64> {
        if self.unlimited() {
            return vec![offset];
        }
        let mut v = vec![offset];
        let mut k = 1.0;
        while k * self.x_plus < 1.0 {
            v.push(offset + k * self.x_plus);
            k += 1.0;
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BufferAnalytics {
    pub expected_return: f64,
    pub volatility: f64,
    /// E[R − R_asset].
    pub te_mean: f64,
    /// σ(R − R_asset).
    pub te_volatility: f64,
    pub beta: f64,
    /// Correlation between R and R_asset; `None` when a volatility is zero.
    pub correlation: Option<f64>,
    /// (E[R] − μ_cash)/σ(R); `None` when σ(R) = 0.
    pub sharpe: Option<f64>,
    /// TE mean / TE volatility; `None` when the tracking error is zero.
    pub information_ratio: Option<f64>,
}

/// Exact moments of R = w·R_cash + (1 − w)·R_asset.
pub fn buffer_analytics(m: &BufferMarketParams, w: f64) -> Result<BufferAnalytics> {
    m.validate()?;
    if !(0.0..=1.0).contains(&w) {
        return domain("w must lie in [0, 1]");
    }
    let (sa, sc, rho) = (m.sigma_asset, m.sigma_cash, m.rho);
    let expected_return = m.mu_asset - w * (m.mu_asset - m.mu_cash);
    let var = w * w * sc * sc + (1.0 - w).powi(2) * sa * sa + 2.0 * w * (1.0 - w) * rho * sc * sa;
    let volatility = var.max(0.0).sqrt();
    let te_mean = -w * (m.mu_asset - m.mu_cash);
    let te_volatility = w * m.te_variance().sqrt();
    let cov = (1.0 - w) * sa * sa + w * rho * sc * sa;
    let beta = if sa > 0.0 { 1.0 - (w / (sa * sa)) * (sa * sa - rho * sc * sa) } else { f64::NAN };
    let correlation = (volatility > 0.0 && sa > 0.0).then(|| cov / (volatility * sa));
    let sharpe = (volatility > 0.0).then(|| (expected_return - m.mu_cash) / volatility);
    let information_ratio = (te_volatility > 0.0).then(|| te_mean / te_volatility);
    Ok(BufferAnalytics { expected_return, volatility, te_mean, te_volatility, beta, correlation, sharpe, information_ratio })
}

/// Cost of liquidating a fraction x of the assets, day by day at the limit:
/// x·s + κ·βσ·x⁺√x⁺ + βσ·(x − κx⁺)^{3/2} with κ = ⌊x/x⁺⌋.
#[must_use]
pub fn tc_asset(x: f64, p: &BufferCostParams) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let bs = p.bs();
    if p.unlimited() {
        return x * (p.spread + bs * x.sqrt());
    }
    let xp = p.x_plus;
    let kappa = (x / xp).floor();
    let r = (x - kappa * xp).max(0.0);
    x * p.spread + kappa * bs * xp * xp.sqrt() + bs * r * r.sqrt()
}

/// Right derivative of [`tc_asset`].
#[must_use]
pub fn tc_asset_derivative(x: f64, p: &BufferCostParams) -> f64 {
    let x = x.max(0.0);
    let r = if p.unlimited() { x } else { x - (x / p.x_plus).floor() * p.x_plus };
    p.spread + 1.5 * p.bs() * r.max(0.0).sqrt()
}

#[must_use]
pub fn tc_cash(x: f64, p: &BufferCostParams) -> f64 {
    p.cash_cost * x.max(0.0)
}

fn check(p: &BufferCostParams, w: f64) -> Result<()> {
    p.validate()?;
    if !(0.0..=1.0).contains(&w) {
        return domain("w must lie in [0, 1]");
    }
    Ok(())
}

/// Liquidation gain for one redemption rate R:
/// TC_asset(R) − TC_cash(R)·1{R < w} − TC_asset(R − w)·1{R ≥ w}.
#[must_use]
pub fn liquidation_gain(r: f64, w: f64, p: &BufferCostParams) -> f64 {
    if r < w {
        tc_asset(r, p) - tc_cash(r, p)
    } else {
        tc_asset(r, p) - tc_asset(r - w, p)
    }
}

/// Which expression of E[LG] to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LgMethod {
    #[default]
    Exact,
    Approximate,
}

/// Cash and asset parts of the exact expected liquidation gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LgParts {
    pub cash: f64,
    pub asset: f64,
}

/// E[LG_cash] = ∫₀^w (TC_asset − TC_cash) dF and
/// E[LG_asset] = ∫_w^1 (TC_asset(R) − TC_asset(R − w)) dF.
pub fn expected_lg_parts(p: &BufferCostParams, w: f64) -> Result<LgParts> {
    check(p, w)?;
    let (s, c, bs, eta) = (p.spread, p.cash_cost, p.bs(), p.eta);
    if p.unlimited() {
        let k = 2.0 * eta * bs / (2.0 * eta + 3.0);
        let cash = eta * (s - c) / (eta + 1.0) * w.powf(eta + 1.0) + k * w.powf(eta + 1.5);
        let asset = s * w * (1.0 - w.powf(eta)) + k * (1.0 - w.powf(eta + 1.5)) - eta * bs * integral_i_w(w, eta)?;
        return Ok(LgParts { cash, asset });
    }
    let cash = integrate(|x| (tc_asset(x, p) - tc_cash(x, p)) * p.density(x), 0.0, w, &p.knots(0.0), TOL, TOL);
    let mut breaks = p.knots(0.0);
    breaks.extend(p.knots(w));
    let asset = integrate(|x| (tc_asset(x, p) - tc_asset(x - w, p)) * p.density(x), w, 1.0, &breaks, TOL, TOL);
    Ok(LgParts { cash, asset })
}

/// Exact E[LG(w)]. Closed form with I(w;η) without a trading limit, adaptive
/// quadrature otherwise.
pub fn expected_lg_exact(p: &BufferCostParams, w: f64) -> Result<f64> {
    let parts = expected_lg_parts(p, w)?;
    Ok(parts.cash + parts.asset)
}

/// Exact E[LG(w)] by quadrature of the pathwise gain, whatever the limit.
pub fn expected_lg_exact_quadrature(p: &BufferCostParams, w: f64) -> Result<f64> {
    check(p, w)?;
    let mut breaks = p.knots(0.0);
    breaks.extend(p.knots(w));
    Ok(integrate(|x| liquidation_gain(x, w, p) * p.density(x), 0.0, 1.0, &breaks, TOL, TOL))
}

/// The closed form as it is usually printed, with spread term η·s·w(1 − w)
/// in place of s·w(1 − w^η). Both agree when η = 1. Requires x⁺ ≥ 1.
pub fn expected_lg_published(p: &BufferCostParams, w: f64) -> Result<f64> {
    check(p, w)?;
    if !p.unlimited() {
        return domain("the printed closed form assumes no trading limit");
    }
    let (s, c, bs, eta) = (p.spread, p.cash_cost, p.bs(), p.eta);
    Ok(eta * (s - c) / (eta + 1.0) * w.powf(eta + 1.0) + 2.0 * eta * bs / (2.0 * eta + 3.0) + eta * s * w * (1.0 - w)
        - eta * bs * integral_i_w(w, eta)?)
}

/// Approximate E[LG(w)] ≈ ∫₀^w TC_asset dF + TC_asset(w)(1 − F(w)), in
/// closed form.
pub fn expected_lg_approx(p: &BufferCostParams, w: f64) -> Result<f64> {
    check(p, w)?;
    let (s, bs, eta) = (p.spread, p.bs(), p.eta);
    if p.unlimited() {
        return Ok(s * w + bs * w.powf(1.5) - s / (eta + 1.0) * w.powf(eta + 1.0)
            - 3.0 * bs / (2.0 * eta + 3.0) * w.powf(eta + 1.5));
    }
    let xp = p.x_plus;
    let kappa = (w / xp).floor();
    let kn = kappa as usize;
    let xp15 = xp * xp.sqrt();
    let mut h = 0.0;
    let mut sum_i = 0.0;
    for k in 1..=kn {
        let (lo, hi) = ((k - 1) as f64 * xp, k as f64 * xp);
        h += (k - 1) as f64 * (hi.powf(eta) - lo.powf(eta));
        sum_i += integral_i_ab(lo, hi, eta)?;
    }
    let top = kappa * xp;
    h += kappa * (w.powf(eta) - top.powf(eta));
    if w > top {
        sum_i += integral_i_ab(top, w, eta)?;
    }
    let r = (w - top).max(0.0);
    let tail = 1.0 - w.powf(eta);
    Ok(eta * s * w.powf(eta + 1.0) / (eta + 1.0) + bs * xp15 * h + eta * bs * sum_i + s * (w - w.powf(eta + 1.0))
        + kappa * bs * xp15 * tail
        + bs * r.powf(1.5) * tail)
}

/// Approximate E[LG(w)] by quadrature of its defining integral.
pub fn expected_lg_approx_quadrature(p: &BufferCostParams, w: f64) -> Result<f64> {
    check(p, w)?;
    let head = integrate(|x| tc_asset(x, p) * p.density(x), 0.0, w, &p.knots(0.0), TOL, TOL);
    Ok(head + tc_asset(w, p) * (1.0 - p.cdf(w)))
}

pub fn expected_lg(p: &BufferCostParams, w: f64, method: LgMethod) -> Result<f64> {
    match method {
        LgMethod::Exact => expected_lg_exact(p, w),
        LgMethod::Approximate => expected_lg_approx(p, w),
    }
}

/// ∂E[LG]/∂w. Exact: −TC_cash(w)·f(w) + ∫_w^1 TC'_asset(R − w) dF.
/// Approximate: TC'_asset(w)·(1 − F(w)).
pub fn expected_lg_derivative(p: &BufferCostParams, w: f64, method: LgMethod) -> Result<f64> {
    check(p, w)?;
    match method {
        LgMethod::Approximate => Ok(tc_asset_derivative(w, p) * (1.0 - p.cdf(w))),
        LgMethod::Exact => {
            let mut breaks = p.knots(w);
            breaks.push(w);
            let tail = integrate(|x| tc_asset_derivative(x - w, p) * p.density(x), w, 1.0, &breaks, TOL, TOL);
            Ok(-tc_cash(w, p) * p.density(w) + tail)
        }
    }
}

/// Central-difference derivative with step 1e-6, one-sided at the bounds.
pub fn expected_lg_derivative_numeric(p: &BufferCostParams, w: f64, method: LgMethod) -> Result<f64> {
    check(p, w)?;
    let h = 1e-6;
    let (a, b) = ((w - h).max(0.0), (w + h).min(1.0));
    Ok((expected_lg(p, b, method)? - expected_lg(p, a, method)?) / (b - a))
}

/// Monte Carlo estimate of E[LG(w)] with R = U^{1/η}; returns (mean, standard error).
pub fn expected_lg_monte_carlo(p: &BufferCostParams, w: f64, draws: usize, seed: u64) -> Result<(f64, f64)> {
    check(p, w)?;
    if draws < 2 {
        return domain("need at least two draws");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..draws {
        let u: f64 = rng.random();
        let g = liquidation_gain(u.powf(1.0 / p.eta), w, p);
        sum += g;
        sum2 += g * g;
    }
    let n = draws as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// NBC(w) = w(μ_a − μ_c) + (λ/2)w²(σ_c² + σ_a² − 2ρσ_cσ_a) − E[LG(w)].
pub fn net_buffer_cost(m: &BufferMarketParams, p: &BufferCostParams, w: f64, method: LgMethod) -> Result<f64> {
    m.validate()?;
    Ok(w * (m.mu_asset - m.mu_cash) + 0.5 * m.lambda * w * w * m.te_variance() - expected_lg(p, w, method)?)
}

/// ϱ(w) = ∂E[LG]/∂w − λ·w·(σ_c² + σ_a² − 2ρσ_cσ_a): the risk premium
/// μ_a − μ_c at which w is a stationary point of NBC.
pub fn break_even_premium(m: &BufferMarketParams, p: &BufferCostParams, w: f64, method: LgMethod) -> Result<f64> {
    m.validate()?;
    Ok(expected_lg_derivative(p, w, method)? - m.lambda * w * m.te_variance())
}

fn golden_min<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

/// Grid scan with step 1e-3 followed by golden-section refinement; ties go
/// to the smaller w.
fn argmin_unit<F: Fn(f64) -> Result<f64>>(f: F) -> Result<f64> {
    let n = 1000;
    let mut best = (0.0, f(0.0)?);
    for k in 1..=n {
        let w = k as f64 / n as f64;
        let v = f(w)?;
        if v < best.1 - 1e-15 {
            best = (w, v);
        }
    }
    let step = 1.0 / n as f64;
    let (a, b) = ((best.0 - step).max(0.0), (best.0 + step).min(1.0));
    let (x, fx) = golden_min(&f, a, b, 1e-9)?;
    Ok(if fx < best.1 - 1e-15 { x } else { best.0 })
}

/// w* = argmin NBC(w) over [0, 1].
pub fn optimal_cash_buffer(m: &BufferMarketParams, p: &BufferCostParams, method: LgMethod) -> Result<f64> {
    m.validate()?;
    p.validate()?;
    argmin_unit(|w| net_buffer_cost(m, p, w, method))
}

/// argmax of E[LG] over [0, 1] with the given expression.
pub fn argmax_expected_lg<F: Fn(&BufferCostParams, f64) -> Result<f64>>(p: &BufferCostParams, lg: F) -> Result<f64> {
    p.validate()?;
    argmin_unit(|w| Ok(-lg(p, w)?))
}

/// Error(w; x⁺) = sup |TC(R) − TC(w) − TC(R − w)| over R ∈ [w, w + x⁺]. The
/// gap is periodic in R − w with period x⁺, so one period is the full sup.
/// Without a trading limit R runs over [w, 1].
pub fn approximation_error(w: f64, p: &BufferCostParams) -> Result<f64> {
    check(p, w.min(1.0))?;
    let span = if p.unlimited() { 1.0 - w } else { p.x_plus };
    if span <= 0.0 {
        return Ok(0.0);
    }
    let gap = |d: f64| (tc_asset(w + d, p) - tc_asset(w, p) - tc_asset(d, p)).abs();
    let n = 400;
    let mut best = (0.0, gap(0.0));
    for k in 1..=n {
        let d = span * k as f64 / n as f64;
        let v = gap(d);
        if v > best.1 {
            best = (d, v);
        }
    }
    let h = span / n as f64;
    let (_, v) = golden_min(|d| Ok(-gap(d)), (best.0 - h).max(0.0), (best.0 + h).min(span), 1e-12 * span.max(1e-3))?;
    Ok(best.1.max(-v))
}

/// MaxError(x⁺) = sup_w Error(w; x⁺), scanned over one period of w.
pub fn max_approximation_error(p: &BufferCostParams) -> Result<f64> {
    p.validate()?;
    let span = if p.unlimited() { 1.0 } else { p.x_plus };
    let n = 200;
    let mut best = 0.0f64;
    for k in 0..=n {
        best = best.max(approximation_error(span * k as f64 / n as f64, p)?);
    }
    Ok(best)
}
