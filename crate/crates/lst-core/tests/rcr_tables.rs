mod common;

use common::*;
use lst_core::liquidation::{build_schedule, daily_liquidation_profile, illiquid_assets, DEFAULT_MAX_DAYS};
use lst_core::rcr::{optimal_pro_rata, pro_rata_portfolio, rcr_report, waterfall_portfolio, admissible_rate};
use lst_core::{sample, Days, RedemptionShock};

const PP: f64 = 0.01;
const MN: f64 = 0.001;

fn shock() -> RedemptionShock {
    RedemptionShock::new(0.20).unwrap()
}

#[test]
fn tna_of_the_sample_fund() {
    assert_close(sample::fund().tna().unwrap() / 1e6, 141.734, 0.001, "TNA");
}

#[test]
fn naive_pro_rata_table() {
    let p = sample::fund();
    let q = pro_rata_portfolio(&p, 0.2).unwrap();
    let r = rcr_report(&p, shock(), &q, 6).unwrap();
    for (h, lr, a, rcr, ls) in PRORATA_RCR {
        let row = r.row(h).unwrap();
        assert_close(100.0 * row.lr, lr, PP, &format!("LR({h})"));
        assert_close(row.liquid / 1e6, a, MN, &format!("A({h})"));
        assert_close(100.0 * row.rcr, rcr, PP, &format!("RCR({h})"));
        assert_close(100.0 * row.ls, ls, PP, &format!("LS({h})"));
    }
}

#[test]
fn naive_pro_rata_schedule_is_exact() {
    let p = sample::fund();
    let q = pro_rata_portfolio(&p, 0.2).unwrap();
    let s = build_schedule(&p, &q, DEFAULT_MAX_DAYS).unwrap();
    assert_eq!(s.horizon(), PRORATA_SCHEDULE.len());
    for (h, want) in PRORATA_SCHEDULE.iter().enumerate() {
        let got: Vec<f64> = s.day(h + 1).iter().map(|x| x.round()).collect();
        assert_eq!(got, want.to_vec(), "day {}", h + 1);
    }
    let total: Vec<f64> = s.cumulative(5).iter().map(|x| x.round()).collect();
    assert_eq!(total, vec![87020.0, 60020.0, 10080.0, 40100.0, 15100.0, 3500.0, 360.0]);
}

#[test]
fn optimal_pro_rata_table() {
    let p = sample::fund();
    for (tau, phi, h, lr, a, rcr, ls) in OPTIMAL_RCR {
        let opt = optimal_pro_rata(&p, tau).unwrap();
        assert_close(100.0 * opt.phi, phi, PP, &format!("phi({tau})"));
        let r = rcr_report(&p, shock(), &opt.portfolio, tau).unwrap();
        let row = r.row(h).unwrap();
        let tag = format!("tau={tau} h={h}");
        assert_close(100.0 * row.lr, lr, PP, &tag);
        assert_close(row.liquid / 1e6, a, MN, &tag);
        assert_close(100.0 * row.rcr, rcr, PP, &tag);
        assert_close(100.0 * row.ls, ls, PP, &tag);
    }
}

#[test]
fn one_day_optimal_capacity() {
    // largest shock absorbable in one day: 𝔸(1) = $6.515 mn, 4.60% of TNA
    let p = sample::fund();
    let opt = optimal_pro_rata(&p, 1).unwrap();
    let rate = admissible_rate(&p, &opt.portfolio, 1).unwrap();
    assert_close(rate * p.tna().unwrap() / 1e6, 6.515, MN, "A(1)");
    assert_close(100.0 * rate, 4.60, PP, "rate");
}

#[test]
fn waterfall_table() {
    let p = sample::fund();
    let r = rcr_report(&p, shock(), &waterfall_portfolio(&p), 6).unwrap();
    for (h, lr, a, rcr, ls) in WATERFALL_RCR {
        let row = r.row(h).unwrap();
        assert_close(100.0 * row.lr, lr, PP, &format!("LR({h})"));
        assert_close(row.liquid / 1e6, a, MN, &format!("A({h})"));
        assert_close(100.0 * row.rcr, rcr, PP, &format!("RCR({h})"));
        assert_close(100.0 * row.ls, ls, PP, &format!("LS({h})"));
    }
}

#[test]
fn waterfall_schedule_is_exact() {
    let p = sample::fund();
    let s = build_schedule(&p, &waterfall_portfolio(&p), DEFAULT_MAX_DAYS).unwrap();
    assert_eq!(s.horizon(), 22);
    assert!(s.day(23).iter().all(|x| *x == 0.0));
    for (i, (full, limit, last)) in WATERFALL_RUNS.iter().enumerate() {
        for h in 1..=23 {
            let want = if h <= *full {
                *limit
            } else if h == full + 1 {
                *last
            } else {
                0.0
            };
            assert_eq!(s.day(h)[i], want, "asset {} day {h}", i + 1);
        }
    }
    assert_eq!(s.cumulative(22), sample::SHARES.to_vec());
}

fn check_weights(got: &[f64], want: &[f64; 7], tag: &str) {
    for (g, w) in got.iter().zip(want) {
        assert_close(100.0 * g, *w, PP, tag);
    }
}

#[test]
fn pro_rata_weight_tables() {
    let p = sample::fund();
    let s = build_schedule(&p, &pro_rata_portfolio(&p, 0.2).unwrap(), DEFAULT_MAX_DAYS).unwrap();
    for (k, want) in PRORATA_SOLD_WEIGHTS.iter().enumerate() {
        check_weights(&s.sold_weights(k + 1).unwrap(), want, &format!("w(q;{})", k + 1));
    }
    check_weights(&s.sold_weights(6).unwrap(), &PRORATA_SOLD_WEIGHTS[4], "w(q;6)");
    for (h, want) in PRORATA_LEFT_WEIGHTS.iter().enumerate() {
        check_weights(&s.remaining_weights(&sample::SHARES, h).unwrap(), want, &format!("w(w-q;{h})"));
    }
}

#[test]
fn waterfall_weight_tables() {
    let p = sample::fund();
    let s = build_schedule(&p, &waterfall_portfolio(&p), DEFAULT_MAX_DAYS).unwrap();
    for (k, want) in WATERFALL_SOLD_WEIGHTS.iter().enumerate() {
        check_weights(&s.sold_weights(k + 1).unwrap(), want, &format!("w(q;{})", k + 1));
    }
    for (k, want) in WATERFALL_LEFT_WEIGHTS.iter().enumerate() {
        check_weights(&s.remaining_weights(&sample::SHARES, k + 1).unwrap(), want, &format!("w(w-q;{})", k + 1));
    }
}

#[test]
fn liquidation_time_of_the_whole_fund() {
    let cases = [(1000.0, [18, 21, 22]), (20.0, [20, 46, 90])];
    for (limit, want) in cases {
        let p = sample::fund_with_last_limit(limit);
        let s = build_schedule(&p, &waterfall_portfolio(&p), DEFAULT_MAX_DAYS).unwrap();
        for (pr, w) in [0.95, 0.99, 1.0].iter().zip(want) {
            assert_eq!(s.liquidation_time(*pr).unwrap(), Days::Finite(w), "limit {limit} p {pr}");
        }
    }
}

#[test]
fn illiquid_share_of_a_stressed_fund() {
    let p = sample::fund_with_last_limit(20.0);
    let a = illiquid_assets(&p, 0.01).unwrap();
    assert_eq!(a.h_star, 22);
    assert_close(100.0 * a.fraction, 2.50, 0.005, "w*=1%");
    let b = illiquid_assets(&p, 0.005).unwrap();
    assert_eq!(b.h_star, 23);
    assert_close(100.0 * b.fraction, 1.52, 0.005, "w*=0.5%");
}

#[test]
fn daily_profile_matches_the_schedule() {
    // oracle: W(h) from the simulated waterfall schedule
    let p = sample::fund_with_last_limit(20.0);
    let prof = daily_liquidation_profile(&p).unwrap();
    let s = build_schedule(&p, &waterfall_portfolio(&p), DEFAULT_MAX_DAYS).unwrap();
    let tna = p.tna().unwrap();
    for h in 1..=prof.daily.len() {
        let w = (s.cumulative_value(h) - s.cumulative_value(h - 1)) / tna;
        assert_close(prof.daily_at(h), w, 1e-12, &format!("W({h})"));
    }
    assert_close(prof.daily.iter().sum::<f64>(), 1.0, 1e-12, "sum W");
}

#[test]
fn time_to_liquidity_from_a_report() {
    let p = sample::fund();
    let r = rcr_report(&p, shock(), &waterfall_portfolio(&p), 6).unwrap();
    assert_eq!(r.time_to_liquidity(1.0), Days::Finite(2));
    let q = pro_rata_portfolio(&p, 0.2).unwrap();
    let r = rcr_report(&p, shock(), &q, 4).unwrap();
    assert_eq!(r.time_to_liquidity(1.0), Days::Never);
}
