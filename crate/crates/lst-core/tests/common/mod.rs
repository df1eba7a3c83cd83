//! Published fixture tables shared by the integration tests.
#![allow(dead_code)]

/// Naive pro-rata at a 20% shock: (h, LR %, 𝔸 $mn, RCR %, LS %).
pub const PRORATA_RCR: [(usize, f64, f64, f64, f64); 6] = [
    (1, 52.53, 14.892, 52.53, 9.49),
    (2, 76.51, 21.689, 76.51, 4.70),
    (3, 91.51, 25.939, 91.51, 1.70),
    (4, 97.80, 27.722, 97.80, 0.44),
    (5, 100.00, 28.347, 100.00, 0.00),
    (6, 100.00, 28.347, 100.00, 0.00),
];

/// Optimal pro-rata: (τh, φ %, h, LR %, 𝔸 $mn, RCR %, LS %).
pub const OPTIMAL_RCR: [(usize, f64, usize, f64, f64, f64, f64); 15] = [
    (1, 4.60, 1, 100.00, 6.515, 22.98, 15.40),
    (2, 9.19, 1, 79.18, 10.317, 36.39, 12.72),
    (2, 9.19, 2, 100.00, 13.030, 45.97, 10.81),
    (3, 13.79, 1, 63.66, 12.443, 43.89, 11.22),
    (3, 13.79, 2, 90.02, 17.595, 62.07, 7.59),
    (3, 13.79, 3, 100.00, 19.545, 68.95, 6.21),
    (4, 18.39, 1, 54.81, 14.284, 50.39, 9.92),
    (4, 18.39, 2, 79.18, 20.633, 72.79, 5.44),
    (4, 18.39, 3, 93.17, 24.280, 85.65, 2.87),
    (4, 18.39, 4, 100.00, 26.060, 91.93, 1.61),
    (5, 22.98, 1, 47.13, 15.353, 54.16, 9.17),
    (5, 22.98, 2, 70.74, 23.044, 81.29, 3.74),
    (5, 22.98, 3, 85.68, 27.911, 98.46, 0.31),
    (5, 22.98, 4, 94.54, 30.795, 108.64, 0.00),
    (5, 22.98, 5, 100.00, 32.575, 114.92, 0.00),
];

/// Waterfall at a 20% shock: (h, LR %, 𝔸 $mn, RCR %, LS %).
pub const WATERFALL_RCR: [(usize, f64, f64, f64, f64); 6] = [
    (1, 11.80, 16.727, 59.01, 8.20),
    (2, 23.38, 33.136, 116.90, 0.00),
    (3, 34.06, 48.274, 170.30, 0.00),
    (4, 44.21, 62.661, 221.05, 0.00),
    (5, 52.53, 74.459, 262.67, 0.00),
    (6, 57.55, 81.572, 287.76, 0.00),
];

/// Day-by-day shares sold under naive pro-rata at 20%.
pub const PRORATA_SCHEDULE: [[f64; 7]; 5] = [
    [20000.0, 20000.0, 10000.0, 20000.0, 15100.0, 2000.0, 360.0],
    [20000.0, 20000.0, 80.0, 20000.0, 0.0, 1500.0, 0.0],
    [20000.0, 20000.0, 0.0, 100.0, 0.0, 0.0, 0.0],
    [20000.0, 20.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [7020.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
];

/// Waterfall schedule, run-length encoded per security: (full days at the
/// limit, limit, last-day remainder).
pub const WATERFALL_RUNS: [(usize, f64, f64); 7] = [
    (21, 20000.0, 15100.0),
    (15, 20000.0, 100.0),
    (5, 10000.0, 400.0),
    (10, 20000.0, 500.0),
    (3, 20000.0, 15500.0),
    (8, 2000.0, 1500.0),
    (1, 1000.0, 800.0),
];

/// w(q;h) in %, naive pro-rata, h = 1..5 (rows 5 and 6 coincide).
pub const PRORATA_SOLD_WEIGHTS: [[f64; 7]; 5] = [
    [11.95, 16.52, 32.77, 13.70, 16.93, 4.28, 3.84],
    [16.41, 22.68, 22.68, 18.81, 11.63, 5.15, 2.64],
    [20.59, 28.45, 18.96, 15.77, 9.72, 4.30, 2.21],
    [25.68, 26.63, 17.74, 14.75, 9.10, 4.03, 2.06],
    [27.32, 26.04, 17.35, 14.43, 8.90, 3.94, 2.02],
];

/// w(ω − q;h) in %, naive pro-rata, h = 0..5.
pub const PRORATA_LEFT_WEIGHTS: [[f64; 7]; 6] = [
    [27.32, 26.04, 17.35, 14.43, 8.90, 3.94, 2.02],
    [29.13, 27.16, 15.54, 14.51, 7.95, 3.90, 1.80],
    [29.29, 26.65, 16.39, 13.64, 8.40, 3.72, 1.91],
    [28.83, 25.50, 16.99, 14.13, 8.71, 3.86, 1.98],
    [27.72, 25.90, 17.26, 14.35, 8.85, 3.92, 2.01],
    [27.32, 26.04, 17.35, 14.43, 8.90, 3.94, 2.02],
];

/// w(q;h) in %, waterfall, h = 1..6.
pub const WATERFALL_SOLD_WEIGHTS: [[f64; 7]; 6] = [
    [10.64, 14.71, 29.17, 12.20, 19.97, 3.81, 9.50],
    [10.74, 14.85, 29.45, 12.31, 20.16, 3.85, 8.63],
    [11.06, 15.29, 30.33, 12.68, 20.76, 3.96, 5.92],
    [11.36, 15.70, 31.15, 13.02, 20.12, 4.07, 4.56],
    [11.95, 16.52, 32.77, 13.70, 16.93, 4.28, 3.84],
    [13.09, 18.09, 30.15, 15.01, 15.46, 4.69, 3.51],
];

/// w(ω − q;h) in %, waterfall, h = 1..6.
pub const WATERFALL_LEFT_WEIGHTS: [[f64; 7]; 6] = [
    [29.55, 27.56, 15.77, 14.73, 7.41, 3.96, 1.02],
    [32.38, 29.46, 13.66, 15.07, 5.46, 3.97, 0.00],
    [35.72, 31.60, 10.65, 15.33, 2.77, 3.93, 0.00],
    [39.97, 34.24, 6.42, 15.54, 0.00, 3.83, 0.00],
    [44.33, 36.58, 0.29, 15.24, 0.00, 3.56, 0.00],
    [46.61, 36.82, 0.00, 13.65, 0.00, 2.92, 0.00],
];

/// Liability RST with α = (20%, 30%, 0, 15%, 0, 0, 0). Floors and, per τh =
/// 1..5, ℝ^RST in $mn then 𝓡^RST in %, both in floor order.
pub const RST_ALPHA: [f64; 7] = [0.20, 0.30, 0.0, 0.15, 0.0, 0.0, 0.0];
pub const RST_FLOORS: [f64; 4] = [0.25, 0.50, 0.75, 1.00];
pub const RST_TABLE: [([f64; 4], [f64; 4]); 5] = [
    ([25.1, 12.6, 8.4, 6.3], [17.7, 8.9, 5.9, 4.4]),
    ([46.2, 23.1, 15.4, 11.5], [32.6, 16.3, 10.9, 8.1]),
    ([63.2, 31.6, 21.1, 15.8], [44.6, 22.3, 14.9, 11.1]),
    ([80.1, 40.1, 26.7, 20.0], [56.5, 28.3, 18.8, 14.4]),
    ([87.5, 43.8, 29.2, 21.9], [61.8, 30.9, 20.6, 15.4]),
];

/// (τh, floor index) of the RST cell whose % value contradicts its $ value.
pub const RST_MISPRINT: (usize, usize) = (4, 3);

/// Parametric HQLA RCR by τh (rows) and TNA in $bn (columns), for
/// H = 0.01 then H = 0.04.
pub const HQLA_TAUS: [f64; 5] = [1.0, 5.0, 10.0, 20.0, 60.0];
pub const HQLA_TNAS: [f64; 4] = [1.0, 5.0, 7.0, 10.0];
pub const HQLA_TABLE: [[[f64; 4]; 5]; 2] = [
    [
        [0.12, 0.07, 0.05, 0.02],
        [0.56, 0.34, 0.23, 0.11],
        [1.08, 0.65, 0.43, 0.22],
        [2.01, 1.20, 0.80, 0.40],
        [1.64, 0.99, 0.66, 0.33],
    ],
    [
        [0.09, 0.04, 0.02, 0.02],
        [0.42, 0.20, 0.11, 0.11],
        [0.81, 0.38, 0.22, 0.22],
        [1.50, 0.70, 0.40, 0.40],
        [1.23, 0.58, 0.33, 0.33],
    ],
];

/// Five redemption portfolios at a 10% shock and their published metrics:
/// TR bps, TC bps, TC spread bps, TC impact bps, 1 − LR(q;1) %.
pub const MIXES: [[f64; 7]; 5] = [
    [43510.0, 30010.0, 5040.0, 20050.0, 7550.0, 1750.0, 180.0],
    [0.0, 27000.0, 22238.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 34315.0, 17500.0, 1800.0],
    [20000.0, 20000.0, 10000.0, 20000.0, 18044.0, 0.0, 0.0],
    [29404.0, 24004.0, 8016.0, 20020.0, 13846.0, 700.0, 72.0],
];
pub const MIX_METRICS: [[f64; 5]; 5] = [
    [0.0, 22.4, 6.1, 16.2, 23.5],
    [79.6, 20.4, 4.5, 15.9, 48.2],
    [201.0, 42.5, 13.8, 28.7, 60.7],
    [35.4, 25.6, 6.6, 19.1, 0.0],
    [21.2, 22.6, 6.4, 16.2, 9.4],
];

pub const BP: f64 = 1e-4;

#[track_caller]
pub fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!((got - want).abs() <= tol, "{what}: got {got}, want {want} ± {tol}");
}
