use lst_core::buffer::{expected_lg_derivative, BufferCostParams, LgMethod};
use lst_core::io::{portfolio_from_csv, portfolio_to_csv};
use lst_core::liquidation::{build_schedule, DEFAULT_MAX_DAYS};
use lst_core::optimizer::{tracking_risk_equity, transaction_cost, CostModel, ImpactRegime};
use lst_core::rcr::{pro_rata_portfolio, rcr_report, waterfall_portfolio};
use lst_core::rst::{asset_rst, AssetRst};
use lst_core::swing::{gate_schedule, swing_nav, FlowEvent, FundState, GatePolicy, GateRequest, SwingMode, SwingOutcome};
use lst_core::{sample, Portfolio, RedemptionShock, Security};
use proptest::prelude::*;

fn portfolio() -> impl Strategy<Value = Portfolio> {
    prop::collection::vec((1u32..200_000, 1u32..50_000, 1u32..50_000), 1..8).prop_map(|v| {
        let secs = v
            .into_iter()
            .enumerate()
            .map(|(i, (shares, cents, limit))| Security::new(format!("s{i}"), shares as f64, cents as f64 / 100.0, limit as f64))
            .collect();
        Portfolio::new(secs).unwrap()
    })
}

// m_v^RST on one scale: 1 when already breached, 0 when never breached
fn m_rst(rate: f64, floor: f64, tau: usize) -> f64 {
    match asset_rst(&sample::fund(), rate, floor, tau).unwrap() {
        AssetRst::Solved(m) => m,
        AssetRst::BreachedAtNormalVolume => 1.0,
        AssetRst::NeverBreached => 0.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn waterfall_dominates_pro_rata(p in portfolio(), rate in 0.01f64..1.0) {
        let shock = RedemptionShock::new(rate).unwrap();
        let pr = rcr_report(&p, shock, &pro_rata_portfolio(&p, rate).unwrap(), 25).unwrap();
        let wf = rcr_report(&p, shock, &waterfall_portfolio(&p), 25).unwrap();
        for (a, b) in wf.rows.iter().zip(&pr.rows) {
            prop_assert!(a.rcr >= b.rcr * (1.0 - 1e-12), "h={} {} < {}", a.h, a.rcr, b.rcr);
            prop_assert!(a.ls <= b.ls + 1e-12);
        }
    }

    #[test]
    fn rcr_is_monotone_in_h(p in portfolio(), rate in 0.01f64..1.0) {
        let shock = RedemptionShock::new(rate).unwrap();
        for q in [pro_rata_portfolio(&p, rate).unwrap(), waterfall_portfolio(&p)] {
            let r = rcr_report(&p, shock, &q, 25).unwrap();
            for w in r.rows.windows(2) {
                prop_assert!(w[1].rcr >= w[0].rcr);
                prop_assert!(w[1].lr >= w[0].lr);
                prop_assert!(w[1].ls <= w[0].ls);
            }
        }
    }

    #[test]
    fn asset_rst_is_monotone(rate in 0.05f64..0.5, floor in 0.1f64..1.2, tau in 1usize..8) {
        let m = m_rst(rate, floor, tau);
        prop_assert!(m_rst(rate, floor, tau + 1) <= m + 1e-6);
        prop_assert!(m_rst(rate, floor * 1.1, tau) >= m - 1e-6);
    }

    #[test]
    fn pro_rata_has_no_tracking_risk(rate in 0.01f64..1.0) {
        let p = sample::fund_with_market();
        let q = pro_rata_portfolio(&p, rate).unwrap();
        prop_assert!(tracking_risk_equity(&p, &q).unwrap().abs() < 1e-7);
    }

    #[test]
    fn cost_splits_into_spread_and_impact(rate in 0.01f64..0.3, linear in any::<bool>()) {
        let p = sample::fund_with_market();
        let regime = if linear { ImpactRegime::SquareRootLinear } else { ImpactRegime::SquareRoot };
        let cm = CostModel { regime, ..CostModel::default() };
        let q = pro_rata_portfolio(&p, rate).unwrap();
        let s = build_schedule(&p, &q, DEFAULT_MAX_DAYS).unwrap();
        let tc = transaction_cost(&p, &cm, &s).unwrap();
        prop_assert!((tc.total - tc.spread - tc.impact).abs() <= 1e-15 * tc.total.max(1.0));
        prop_assert!(tc.spread > 0.0 && tc.impact > 0.0);
    }

    #[test]
    fn portfolio_csv_round_trip(p in portfolio()) {
        let text = portfolio_to_csv(&p).unwrap();
        prop_assert_eq!(portfolio_from_csv(&text).unwrap(), p);
    }

    #[test]
    fn approximate_gain_never_decreases(w in 0.0f64..1.0, eta in 0.2f64..4.0, x_plus in 0.02f64..1.5) {
        let p = BufferCostParams::new(0.005, 1e-4, 0.4, 0.8, x_plus, eta);
        prop_assert!(expected_lg_derivative(&p, w, LgMethod::Approximate).unwrap() >= 0.0);
    }

    #[test]
    fn gate_conserves_requests(
        reqs in prop::collection::vec((0usize..6, 0.0f64..0.08), 1..10),
        cap in 0.005f64..0.05,
    ) {
        let requests: Vec<GateRequest> = reqs
            .iter()
            .enumerate()
            .map(|(i, (day, rate))| GateRequest { day: *day, investor: format!("i{i}"), rate: *rate })
            .collect();
        let fills = gate_schedule(&requests, GatePolicy::new(cap).unwrap()).unwrap();
        for r in &requests {
            let done: f64 = fills.iter().filter(|f| f.investor == r.investor).map(|f| f.rate).sum();
            prop_assert!((done - r.rate).abs() < 1e-9, "{} got {done} want {}", r.investor, r.rate);
            prop_assert!(fills.iter().filter(|f| f.investor == r.investor).all(|f| f.day >= r.day));
        }
        let last = fills.iter().map(|f| f.day).max().unwrap_or(0);
        for day in 0..=last {
            let total: f64 = fills.iter().filter(|f| f.day == day).map(|f| f.rate).sum();
            prop_assert!(total <= cap + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn swing_conserves_tna(
        nav in 1.0f64..1000.0,
        units in 1.0f64..1e6,
        share in -0.9f64..2.0,
        r in -0.2f64..0.2,
        cost_bp in 0.0f64..200.0,
    ) {
        prop_assume!(share.abs() > 1e-6);
        let f = FundState::new(nav, units).unwrap();
        let dn = share * units;
        let e = FlowEvent::net(dn, r, cost_bp * 1e-4 * dn.abs() * nav);
        let gross = (1.0 + r) * nav;
        match swing_nav(f, e, SwingMode::Full).unwrap() {
            SwingOutcome::Single { nav: swung, .. } => {
                let after = units * gross + dn * swung - e.cost;
                let want = (units + dn) * gross;
                prop_assert!((after - want).abs() <= 1e-10 * want.abs().max(1.0));
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }
}
