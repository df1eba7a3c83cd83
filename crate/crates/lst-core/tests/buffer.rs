mod common;

use common::{assert_close, BP};
use lst_core::buffer::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn base(eta: f64) -> BufferCostParams {
    BufferCostParams::new(20.0 * BP, BP, 0.4, 0.2, 1.0, eta)
}

fn stressed(x_plus: f64, eta: f64) -> BufferCostParams {
    BufferCostParams::new(50.0 * BP, BP, 0.4, 0.8, x_plus, eta)
}

fn market(premium: f64, lambda: f64) -> BufferMarketParams {
    BufferMarketParams { mu_asset: premium, mu_cash: 0.0, sigma_asset: 0.2, sigma_cash: 0.0, rho: 0.0, lambda }
}

// independent cost: liquidate day by day at the limit, each day paying
// s·x + βσ·x^{3/2}
fn tc_by_days(x: f64, p: &BufferCostParams) -> f64 {
    let bs = p.impact * p.volatility / 260f64.sqrt();
    let cap = if p.x_plus >= 1.0 { f64::INFINITY } else { p.x_plus };
    let (mut left, mut cost) = (x, 0.0);
    while left > 1e-15 {
        let d = left.min(cap);
        cost += p.spread * d + bs * d.powf(1.5);
        left -= d;
    }
    cost
}

fn gain_by_days(r: f64, w: f64, p: &BufferCostParams) -> f64 {
    if r < w {
        tc_by_days(r, p) - p.cash_cost * r
    } else {
        tc_by_days(r, p) - tc_by_days(r - w, p)
    }
}

// E[g(R)] under F(x) = x^η with the substitution x = u^{1/η}, composite
// Simpson on a fine grid
fn expectation<G: Fn(f64) -> f64>(eta: f64, g: G) -> f64 {
    let n = 200_000;
    let h = 1.0 / n as f64;
    let mut s = g(0.0) + g(1.0);
    for k in 1..n {
        let u = k as f64 * h;
        s += g(u.powf(1.0 / eta)) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn tc_asset_closed_form_matches_day_by_day() {
    for p in [base(1.0), stressed(0.1, 1.0), stressed(0.07, 2.0)] {
        for x in [0.0, 0.03, 0.1, 0.25, 0.5, 0.99, 1.0] {
            assert_close(tc_asset(x, &p), tc_by_days(x, &p), 1e-15, &format!("x={x} x+={}", p.x_plus));
        }
    }
    // 70 bps band of the unlimited cost at x = 1
    let full = tc_asset(1.0, &base(1.0));
    assert!(full > 0.0 && full <= 70.0 * BP, "{full}");
    // x⁺ = 10%, x = 25%: two full days and a 5% residual day
    let p = stressed(0.1, 1.0);
    let day = |d: f64| tc_asset(d, &BufferCostParams { x_plus: 1.0, ..p });
    assert_close(tc_asset(0.25, &p), 2.0 * day(0.1) + day(0.05), 1e-16, "25%");
}

#[test]
fn exact_closed_form_matches_independent_integration() {
    for eta in [0.5, 1.0, 2.0, 3.0, 1.7] {
        let p = base(eta);
        for w in [0.0, 0.1, 0.5, 0.9, 0.9667, 1.0] {
            let want = expectation(eta, |r| gain_by_days(r, w, &p));
            let got = expected_lg_exact(&p, w).unwrap();
            assert_close(got, want, 1e-9, &format!("eta={eta} w={w}"));
            assert_close(expected_lg_exact_quadrature(&p, w).unwrap(), got, 1e-13, "quadrature");
        }
    }
}

#[test]
fn exact_with_trading_limit_matches_independent_integration() {
    for (xp, eta) in [(0.1, 1.0), (0.1, 3.0), (0.16, 0.5), (0.3, 2.0)] {
        let p = stressed(xp, eta);
        for w in [0.05, 0.1, 0.37, 0.8] {
            let want = expectation(eta, |r| gain_by_days(r, w, &p));
            assert_close(expected_lg_exact(&p, w).unwrap(), want, 1e-9, &format!("x+={xp} eta={eta} w={w}"));
        }
    }
}

#[test]
fn monte_carlo_agrees_with_quadrature() {
    for p in [base(1.0), base(3.0), stressed(0.1, 2.0)] {
        let w = 0.3;
        let (mean, se) = expected_lg_monte_carlo(&p, w, 200_000, 42).unwrap();
        let exact = expected_lg_exact(&p, w).unwrap();
        assert!((mean - exact).abs() <= 3.0 * se, "mean {mean} exact {exact} se {se}");
    }
    assert_eq!(
        expected_lg_monte_carlo(&base(1.0), 0.5, 1000, 9).unwrap(),
        expected_lg_monte_carlo(&base(1.0), 0.5, 1000, 9).unwrap()
    );
}

#[test]
fn published_and_exact_agree_only_at_eta_one() {
    for w in [0.0, 0.2, 0.6, 1.0] {
        let a = expected_lg_published(&base(1.0), w).unwrap();
        let b = expected_lg_exact(&base(1.0), w).unwrap();
        assert_close(a, b, 1e-15, &format!("w={w}"));
    }
    let gap = expected_lg_published(&base(3.0), 0.5).unwrap() - expected_lg_exact(&base(3.0), 0.5).unwrap();
    assert!(gap.abs() > 1e-5);
    assert!(expected_lg_published(&stressed(0.1, 1.0), 0.5).is_err());
}

#[test]
fn decomposition_and_end_points() {
    for eta in [0.5, 1.0, 2.0, 3.0] {
        let p = base(eta);
        assert_close(expected_lg_exact(&p, 0.0).unwrap(), 0.0, 1e-16, "LG(0)");
        assert_close(expected_lg_parts(&p, 0.0).unwrap().asset, 0.0, 1e-16, "asset(0)");
        assert_close(expected_lg_parts(&p, 1.0).unwrap().asset, 0.0, 1e-16, "asset(1)");
        let parts = expected_lg_parts(&p, 0.4).unwrap();
        assert_close(parts.cash + parts.asset, expected_lg_exact(&p, 0.4).unwrap(), 1e-16, "sum");
        // at w = 1 the whole gain is the saving on every redemption
        let all = expectation(eta, |r| tc_by_days(r, &p) - p.cash_cost * r);
        assert_close(expected_lg_exact(&p, 1.0).unwrap(), all, 1e-9, "w=1");
    }
}

#[test]
fn approximate_closed_form_matches_quadrature() {
    let cases = [base(0.5), base(1.0), base(3.0), stressed(0.1, 0.5), stressed(0.1, 1.0), stressed(0.16, 2.0), stressed(0.1, 3.0)];
    for p in cases {
        for w in [0.0, 0.05, 0.1, 0.15, 0.33, 0.5, 0.71, 1.0] {
            let a = expected_lg_approx(&p, w).unwrap();
            let b = expected_lg_approx_quadrature(&p, w).unwrap();
            assert_close(a, b, 1e-13, &format!("x+={} eta={} w={w}", p.x_plus, p.eta));
        }
    }
    // η without a closed I(a,b) falls back to quadrature inside the sum
    let p = stressed(0.1, 1.7);
    assert_close(expected_lg_approx(&p, 0.42).unwrap(), expected_lg_approx_quadrature(&p, 0.42).unwrap(), 1e-13, "1.7");
}

#[test]
fn approximate_is_monotone_and_close_to_exact() {
    let p = stressed(0.1, 1.0);
    let q = base(1.0);
    let q = BufferCostParams { x_plus: 0.1, ..q };
    for p in [p, q] {
        let mut last = 0.0;
        let mut gap = 0.0f64;
        for k in 0..=100 {
            let w = k as f64 / 100.0;
            let a = expected_lg_approx(&p, w).unwrap();
            assert!(a >= last - 1e-15, "not monotone at {w}");
            last = a;
            gap = gap.max((a - expected_lg_exact(&p, w).unwrap()).abs());
        }
        if p.volatility == 0.2 {
            assert!(gap <= BP, "gap {gap}");
        }
    }
}

#[test]
fn derivatives_analytic_vs_numeric() {
    for p in [base(0.5), base(1.0), base(3.0), stressed(0.1, 1.0), stressed(0.16, 2.0)] {
        for method in [LgMethod::Exact, LgMethod::Approximate] {
            // away from the kinks at multiples of x⁺
            for w in [0.03, 0.25, 0.47, 0.83, 0.97] {
                let a = expected_lg_derivative(&p, w, method).unwrap();
                let n = expected_lg_derivative_numeric(&p, w, method).unwrap();
                assert_close(a, n, 1e-6, &format!("{method:?} x+={} eta={} w={w}", p.x_plus, p.eta));
            }
        }
    }
}

#[test]
fn exact_derivative_signs() {
    for eta in [0.5, 1.0, 2.0, 3.0] {
        let p = base(eta);
        assert!(expected_lg_derivative(&p, 0.0, LgMethod::Exact).unwrap() > 0.0);
        assert!(expected_lg_derivative(&p, 0.5, LgMethod::Exact).unwrap() > 0.0);
        assert!(expected_lg_derivative(&p, 1.0 - 1e-3, LgMethod::Exact).unwrap() < 0.0);
        for w in [0.0, 0.5, 0.999] {
            assert!(expected_lg_derivative(&p, w, LgMethod::Approximate).unwrap() >= 0.0);
        }
    }
}

#[test]
fn argmax_of_the_published_formula() {
    let want = [(0.5, 97.40), (1.0, 96.67), (2.0, 93.55)];
    for (eta, w) in want {
        let got = argmax_expected_lg(&base(eta), expected_lg_published).unwrap();
        assert_close(100.0 * got, w, 0.1, &format!("eta={eta}"));
    }
    // the printed 83.37% for η = 3 is not reproducible; pin what the formula gives
    let got = argmax_expected_lg(&base(3.0), expected_lg_published).unwrap();
    assert_close(100.0 * got, 86.02, 0.01, "eta=3");
}

#[test]
fn argmax_of_the_exact_formula() {
    for (eta, w) in [(0.5, 96.65), (1.0, 96.67), (2.0, 96.72), (3.0, 96.77)] {
        let got = argmax_expected_lg(&base(eta), expected_lg_exact).unwrap();
        assert_close(100.0 * got, w, 0.01, &format!("eta={eta}"));
    }
}

#[test]
fn normal_costs_give_no_buffer() {
    // cases (a) and (b): NBC strictly increasing at a 1% premium
    for xp in [0.1, 1.0] {
        for eta in [0.5, 1.0, 3.0] {
            let p = BufferCostParams { x_plus: xp, ..base(eta) };
            assert_eq!(optimal_cash_buffer(&market(0.01, 0.0), &p, LgMethod::Exact).unwrap(), 0.0);
        }
    }
}

#[test]
fn stressed_costs_give_ten_percent() {
    // case (c), E[R] = 50%
    let w = optimal_cash_buffer(&market(0.01, 0.0), &stressed(0.1, 1.0), LgMethod::Exact).unwrap();
    assert_close(w, 0.10, 0.02, "case c");
    // case (d), E[R] = 23%
    let eta = 0.23 / 0.77;
    let w = optimal_cash_buffer(&market(0.01, 0.0), &stressed(1.0, eta), LgMethod::Exact).unwrap();
    assert_close(w, 0.10, 0.02, "case d");
    // a 2.5% premium removes the buffer under x⁺ = 10%
    for eta in [0.5, 1.0, 3.0] {
        assert_eq!(optimal_cash_buffer(&market(0.025, 0.0), &stressed(0.1, eta), LgMethod::Exact).unwrap(), 0.0);
    }
}

#[test]
fn non_positive_premium_fills_the_buffer() {
    // with the approximate gain NBC is non-increasing once μ_a ≤ μ_c
    for eta in [0.5, 1.0, 3.0] {
        let w = optimal_cash_buffer(&market(0.0, 0.0), &base(eta), LgMethod::Approximate).unwrap();
        assert_close(w, 1.0, 1e-9, &format!("eta={eta}"));
        let w = optimal_cash_buffer(&market(-0.01, 0.0), &base(eta), LgMethod::Approximate).unwrap();
        assert_close(w, 1.0, 1e-9, &format!("eta={eta}"));
    }
    // the exact gain turns down near w = 1, so the optimum stays interior
    let w = optimal_cash_buffer(&market(0.0, 0.0), &base(1.0), LgMethod::Exact).unwrap();
    assert!(w < 1.0);
    assert_close(w, 0.9667, 1e-3, "exact");
}

#[test]
fn nbc_at_zero_and_premium_at_zero() {
    let p = stressed(0.1, 1.0);
    assert_eq!(net_buffer_cost(&market(0.02, 3.0), &p, 0.0, LgMethod::Exact).unwrap(), 0.0);
    let a = break_even_premium(&market(0.0, 0.0), &p, 0.0, LgMethod::Exact).unwrap();
    let b = break_even_premium(&market(0.0, 5.0), &p, 0.0, LgMethod::Exact).unwrap();
    assert_eq!(a, b);
    // λ = 0 and approximate gain: ϱ(w) = TC'(w)(1 − w^η)
    for w in [0.02, 0.35, 0.8] {
        let r = break_even_premium(&market(0.0, 0.0), &p, w, LgMethod::Approximate).unwrap();
        assert_close(r, tc_asset_derivative(w, &p) * (1.0 - w), 1e-16, "rho");
        assert!(r >= 0.0);
    }
}

#[test]
fn break_even_premium_round_trip() {
    // premium set to ϱ(w₀) makes w₀ the optimum; λ keeps NBC convex
    let p = base(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let w0: f64 = rng.random_range(0.05..0.6);
        let lambda: f64 = rng.random_range(0.5..3.0);
        let rho = break_even_premium(&market(0.0, lambda), &p, w0, LgMethod::Approximate).unwrap();
        let w = optimal_cash_buffer(&market(rho, lambda), &p, LgMethod::Approximate).unwrap();
        assert_close(w, w0, 1e-3, &format!("w0={w0} lambda={lambda}"));
        // decision rules: premium below ϱ(w₀) asks for more cash, above for less
        assert!(optimal_cash_buffer(&market(rho - 1e-3, lambda), &p, LgMethod::Approximate).unwrap() > w0);
        assert!(optimal_cash_buffer(&market(rho + 1e-3, lambda), &p, LgMethod::Approximate).unwrap() < w0);
    }
}

#[test]
fn max_error_bound_and_cyclicity() {
    let p = |xp: f64| BufferCostParams { x_plus: xp, ..base(1.0) };
    for xp in [0.05, 0.1, 0.16] {
        assert!(max_approximation_error(&p(xp)).unwrap() <= BP, "x+={xp}");
    }
    assert!(max_approximation_error(&p(0.17)).unwrap() > BP);
    // closed form of the sup: (2 − √2)/2·βσ·x⁺^{3/2}
    let bs = 0.4 * 0.2 / 260f64.sqrt();
    let want = (1.0 - 0.5f64.sqrt()) * bs * 0.16f64.powf(1.5);
    assert_close(max_approximation_error(&p(0.16)).unwrap(), want, 1e-12, "sup");
    for xp in [0.1, 0.2, 0.3] {
        for w in [0.013, 0.05, 0.071] {
            let e0 = approximation_error(w, &p(xp)).unwrap();
            for k in 1..3 {
                let wk = w + k as f64 * xp;
                if wk < 1.0 {
                    assert_close(approximation_error(wk, &p(xp)).unwrap(), e0, 1e-12, &format!("x+={xp} w={w} k={k}"));
                }
            }
        }
    }
}

#[test]
fn analytics() {
    let m = BufferMarketParams { mu_asset: 0.06, mu_cash: 0.01, sigma_asset: 0.2, sigma_cash: 0.01, rho: 0.1, lambda: 0.0 };
    let a = buffer_analytics(&m, 0.0).unwrap();
    assert_eq!((a.expected_return, a.te_volatility, a.beta), (0.06, 0.0, 1.0));
    assert_eq!(a.information_ratio, None);
    let w = 0.3;
    let a = buffer_analytics(&m, w).unwrap();
    assert_close(a.expected_return, 0.06 - w * 0.05, 1e-16, "E[R]");
    let var = w * w * 1e-4 + (1.0 - w) * (1.0 - w) * 0.04 + 2.0 * w * (1.0 - w) * 0.1 * 0.01 * 0.2;
    assert_close(a.volatility, var.sqrt(), 1e-16, "vol");
    assert_close(a.te_mean, -w * 0.05, 1e-16, "TE mean");
    assert_close(a.te_volatility, w * (1e-4 + 0.04 - 2.0 * 0.1 * 0.01 * 0.2f64).sqrt(), 1e-16, "TE vol");
    assert_close(a.beta, 1.0 - w / 0.04 * (0.04 - 0.1 * 0.01 * 0.2), 1e-15, "beta");
    // σ_c = 0: IR = −SR(R_asset) for every w
    let m0 = BufferMarketParams { sigma_cash: 0.0, ..m };
    for w in [0.1, 0.5, 0.9] {
        let a = buffer_analytics(&m0, w).unwrap();
        assert_close(a.information_ratio.unwrap(), -(0.06 - 0.01) / 0.2, 1e-14, "IR");
    }
    let a = buffer_analytics(&m0, 1.0).unwrap();
    assert_eq!((a.volatility, a.sharpe), (0.0, None));
    assert_close(a.expected_return, 0.01, 1e-16, "E[R] at w=1");
}
