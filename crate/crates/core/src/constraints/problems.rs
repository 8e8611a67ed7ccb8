//! Standard formulations of five engineering design problems.
//!
//! Several constraints are written in normalized form (`value / limit - 1`)
//! so that one feasibility tolerance is meaningful across problems whose raw
//! constraint magnitudes differ by orders of magnitude.

use std::f64::consts::{PI, SQRT_2};

use super::ConstrainedProblem;
use crate::error::{Error, Result};
use crate::space::Bounds;

pub const PROBLEM_NAMES: [&str; 5] = [
    "spring",
    "pressure_vessel",
    "welded_beam",
    "speed_reducer",
    "three_bar_truss",
];

/// Looks a problem up by name.
pub fn problem(name: &str) -> Result<ConstrainedProblem> {
    match name {
        "spring" => Ok(spring_problem()),
        "pressure_vessel" => Ok(pressure_vessel_problem()),
        "welded_beam" => Ok(welded_beam_problem()),
        "speed_reducer" => Ok(speed_reducer_problem()),
        "three_bar_truss" => Ok(three_bar_truss_problem()),
        _ => Err(Error::Config(format!(
            "unknown problem {name:?}; valid problems: {}",
            PROBLEM_NAMES.join(", ")
        ))),
    }
}

fn bounds(lower: &[f64], upper: &[f64]) -> Bounds {
    Bounds::new(lower.to_vec(), upper.to_vec()).expect("problem bounds are valid")
}

/// Tension/compression spring: wire diameter `d`, mean coil diameter `D`,
/// active coils `N`.
pub fn spring_problem() -> ConstrainedProblem {
    ConstrainedProblem::new(
        "spring",
        vec!["d", "D", "N"],
        bounds(&[0.05, 0.25, 2.0], &[2.0, 1.3, 15.0]),
        |x| {
            let (d, dm, n) = (x[0], x[1], x[2]);
            (n + 2.0) * dm * d * d
        },
        |x| {
            let (d, dm, n) = (x[0], x[1], x[2]);
            vec![
                1.0 - dm.powi(3) * n / (71785.0 * d.powi(4)),
                (4.0 * dm * dm - d * dm) / (12566.0 * (dm * d.powi(3) - d.powi(4)))
                    + 1.0 / (5108.0 * d * d)
                    - 1.0,
                1.0 - 140.45 * d / (dm * dm * n),
                (dm + d) / 1.5 - 1.0,
            ]
        },
        vec![0.06, 0.5, 10.0],
    )
    .expect("spring problem is well formed")
}

/// Cylindrical pressure vessel: shell thickness `Ts`, head thickness `Th`,
/// inner radius `R`, cylinder length `L`. Thicknesses are continuous.
pub fn pressure_vessel_problem() -> ConstrainedProblem {
    ConstrainedProblem::new(
        "pressure_vessel",
        vec!["Ts", "Th", "R", "L"],
        bounds(&[0.0, 0.0, 10.0, 10.0], &[99.0, 99.0, 200.0, 200.0]),
        |x| {
            let (ts, th, r, l) = (x[0], x[1], x[2], x[3]);
            0.6224 * ts * r * l + 1.7781 * th * r * r + 3.1661 * ts * ts * l + 19.84 * ts * ts * r
        },
        |x| {
            let (ts, th, r, l) = (x[0], x[1], x[2], x[3]);
            let volume = PI * r * r * l + 4.0 / 3.0 * PI * r.powi(3);
            vec![
                -ts + 0.0193 * r,
                -th + 0.00954 * r,
                1.0 - volume / 1_296_000.0,
                l / 240.0 - 1.0,
            ]
        },
        vec![1.0, 0.5, 50.0, 100.0],
    )
    .expect("pressure vessel problem is well formed")
}

/// Welded beam: weld thickness `h`, weld length `l`, bar height `t`, bar
/// thickness `b`.
pub fn welded_beam_problem() -> ConstrainedProblem {
    const P: f64 = 6000.0;
    const L: f64 = 14.0;
    const E: f64 = 30e6;
    const G: f64 = 12e6;
    const TAU_MAX: f64 = 13600.0;
    const SIGMA_MAX: f64 = 30000.0;
    const DELTA_MAX: f64 = 0.25;

    ConstrainedProblem::new(
        "welded_beam",
        vec!["h", "l", "t", "b"],
        bounds(&[0.1, 0.1, 0.1, 0.1], &[2.0, 10.0, 10.0, 2.0]),
        |x| {
            let (h, l, t, b) = (x[0], x[1], x[2], x[3]);
            1.10471 * h * h * l + 0.04811 * t * b * (14.0 + l)
        },
        |x| {
            let (h, l, t, b) = (x[0], x[1], x[2], x[3]);
            let tau_p = P / (SQRT_2 * h * l);
            let m = P * (L + l / 2.0);
            let r = (l * l / 4.0 + ((h + t) / 2.0).powi(2)).sqrt();
            let j = 2.0 * (SQRT_2 * h * l * (l * l / 12.0 + ((h + t) / 2.0).powi(2)));
            let tau_pp = m * r / j;
            let tau = (tau_p * tau_p + 2.0 * tau_p * tau_pp * l / (2.0 * r) + tau_pp * tau_pp).sqrt();
            let sigma = 6.0 * P * L / (b * t * t);
            let delta = 4.0 * P * L.powi(3) / (E * t.powi(3) * b);
            let pc = 4.013 * E * (t * t * b.powi(6) / 36.0).sqrt() / (L * L)
                * (1.0 - t / (2.0 * L) * (E / (4.0 * G)).sqrt());
            vec![
                tau / TAU_MAX - 1.0,
                sigma / SIGMA_MAX - 1.0,
                h - b,
                (0.10471 * h * h + 0.04811 * t * b * (14.0 + l)) / 5.0 - 1.0,
                0.125 - h,
                delta / DELTA_MAX - 1.0,
                1.0 - pc / P,
            ]
        },
        vec![0.3, 3.5, 9.0, 0.35],
    )
    .expect("welded beam problem is well formed")
}

/// Speed reducer: face width, tooth module, pinion teeth (rounded to an
/// integer at evaluation), shaft lengths and shaft diameters.
pub fn speed_reducer_problem() -> ConstrainedProblem {
    fn vars(x: &[f64]) -> [f64; 7] {
        [x[0], x[1], x[2].round(), x[3], x[4], x[5], x[6]]
    }
    ConstrainedProblem::new(
        "speed_reducer",
        vec!["x1", "x2", "x3", "x4", "x5", "x6", "x7"],
        bounds(
            &[2.6, 0.7, 17.0, 7.3, 7.3, 2.9, 5.0],
            &[3.6, 0.8, 28.0, 8.3, 8.3, 3.9, 5.5],
        ),
        |x| {
            let [x1, x2, x3, x4, x5, x6, x7] = vars(x);
            0.7854 * x1 * x2 * x2 * (3.3333 * x3 * x3 + 14.9334 * x3 - 43.0934)
                - 1.508 * x1 * (x6 * x6 + x7 * x7)
                + 7.4777 * (x6.powi(3) + x7.powi(3))
                + 0.7854 * (x4 * x6 * x6 + x5 * x7 * x7)
        },
        |x| {
            let [x1, x2, x3, x4, x5, x6, x7] = vars(x);
            vec![
                27.0 / (x1 * x2 * x2 * x3) - 1.0,
                397.5 / (x1 * x2 * x2 * x3 * x3) - 1.0,
                1.93 * x4.powi(3) / (x2 * x3 * x6.powi(4)) - 1.0,
                1.93 * x5.powi(3) / (x2 * x3 * x7.powi(4)) - 1.0,
                ((745.0 * x4 / (x2 * x3)).powi(2) + 16.9e6).sqrt() / (110.0 * x6.powi(3)) - 1.0,
                ((745.0 * x5 / (x2 * x3)).powi(2) + 157.5e6).sqrt() / (85.0 * x7.powi(3)) - 1.0,
                x2 * x3 / 40.0 - 1.0,
                5.0 * x2 / x1 - 1.0,
                x1 / (12.0 * x2) - 1.0,
                (1.5 * x6 + 1.9) / x4 - 1.0,
                (1.1 * x7 + 1.9) / x5 - 1.0,
            ]
        },
        vec![3.6, 0.7, 17.0, 7.5, 7.9, 3.5, 5.4],
    )
    .expect("speed reducer problem is well formed")
}

/// Three-bar truss: cross-sectional areas `A1`, `A2`.
pub fn three_bar_truss_problem() -> ConstrainedProblem {
    const LENGTH: f64 = 100.0;
    const LOAD: f64 = 2.0;
    const STRESS: f64 = 2.0;
    ConstrainedProblem::new(
        "three_bar_truss",
        vec!["A1", "A2"],
        bounds(&[0.0, 0.0], &[1.0, 1.0]),
        |x| (2.0 * SQRT_2 * x[0] + x[1]) * LENGTH,
        |x| {
            let (a1, a2) = (x[0], x[1]);
            let den = SQRT_2 * a1 * a1 + 2.0 * a1 * a2;
            vec![
                (SQRT_2 * a1 + a2) / den * LOAD - STRESS,
                a2 / den * LOAD - STRESS,
                1.0 / (a1 + SQRT_2 * a2) * LOAD - STRESS,
            ]
        },
        vec![0.9, 0.5],
    )
    .expect("three-bar truss problem is well formed")
}
