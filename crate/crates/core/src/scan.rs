//! Parameter sweeps over `(α, τ)` and the search for `max_τ K₃(α, τ)`.

use std::f64::consts::FRAC_PI_4;

use crate::correlations::{k3, Method};
use crate::error::LgiError;
use crate::optimize::golden_section_max;
use crate::par::{self, Execution};
use crate::pt_core::Alpha;

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub alpha: f64,
    pub tau: f64,
    pub c21: f64,
    pub c32: f64,
    pub c31: f64,
    pub k3: f64,
}

impl ScanRow {
    pub fn evaluate(alpha: Alpha, tau: f64, method: Method) -> Result<Self, LgiError> {
        let r = k3(alpha, tau, method)?;
        Ok(Self {
            alpha: alpha.value(),
            tau,
            c21: r.c21,
            c32: r.c32,
            c31: r.c31,
            k3: r.k3,
        })
    }
}

/// A grid point whose evaluation failed.
#[derive(Debug, Clone, PartialEq)]
pub struct PointError {
    pub alpha: f64,
    pub tau: f64,
    pub error: LgiError,
}

pub type SweepPoint = Result<ScanRow, PointError>;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub alphas: Vec<Alpha>,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_steps: usize,
    pub method: Method,
    pub execution: Execution,
}

impl SweepConfig {
    pub fn new(alphas: Vec<Alpha>, tau_min: f64, tau_max: f64, tau_steps: usize) -> Self {
        Self {
            alphas,
            tau_min,
            tau_max,
            tau_steps,
            method: Method::Simulation,
            execution: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<(), LgiError> {
        if !(self.tau_min.is_finite() && self.tau_max.is_finite()) {
            return Err(LgiError::InvalidConfig("tau bounds must be finite".into()));
        }
        if self.tau_min >= self.tau_max {
            return Err(LgiError::InvalidConfig(format!(
                "tau_min ({}) must be below tau_max ({})",
                self.tau_min, self.tau_max
            )));
        }
        if self.tau_steps < 2 {
            return Err(LgiError::InvalidConfig(format!(
                "tau_steps must be at least 2, got {}",
                self.tau_steps
            )));
        }
        Ok(())
    }

    /// Uniform τ grid including both endpoints.
    pub fn taus(&self) -> Vec<f64> {
        uniform_grid(self.tau_min, self.tau_max, self.tau_steps)
    }
}

fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let last = points - 1;
    (0..points)
        .map(|k| {
            if k == last {
                hi
            } else {
                lo + (hi - lo) * k as f64 / last as f64
            }
        })
        .collect()
}

/// Evaluates `K₃` on the `(α, τ)` grid, α outer and τ inner. Failed points
/// are returned in place rather than aborting the sweep.
pub fn sweep_k3(config: &SweepConfig) -> Result<Vec<SweepPoint>, LgiError> {
    config.validate()?;
    let taus = config.taus();
    let points: Vec<(Alpha, f64)> = config
        .alphas
        .iter()
        .flat_map(|&a| taus.iter().map(move |&t| (a, t)))
        .collect();
    let method = config.method;
    Ok(par::map(&points, config.execution, |&(alpha, tau)| {
        ScanRow::evaluate(alpha, tau, method).map_err(|error| PointError {
            alpha: alpha.value(),
            tau,
            error,
        })
    }))
}

/// Maximum of `K₃(α, ·)` and the smallest τ attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremumRecord {
    pub alpha: f64,
    pub k3_max: f64,
    pub tau_min_arg: f64,
}

/// Settings for [`k3_max_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxSearch {
    pub grid_points: usize,
    /// Upper end of the search window `(0, window_max]`.
    pub window_max: f64,
    /// Width at which golden-section refinement stops; also the value
    /// tolerance under which grid points count as tied.
    pub refine_tol: f64,
    pub method: Method,
    pub execution: Execution,
}

pub const DEFAULT_REFINE_TOL: f64 = 1e-10;
pub const DEFAULT_GRID_POINTS: usize = 512;

impl Default for MaxSearch {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            window_max: FRAC_PI_4,
            refine_tol: DEFAULT_REFINE_TOL,
            method: Method::Simulation,
            execution: Execution::default(),
        }
    }
}

/// [`k3_max_with`] over the default window `(0, π/4]`.
pub fn k3_max(alpha: Alpha, refine_tol: f64) -> Result<ExtremumRecord, LgiError> {
    k3_max_with(
        alpha,
        &MaxSearch {
            refine_tol,
            ..MaxSearch::default()
        },
    )
}

/// Dense grid over `(0, window_max]`, then golden-section refinement inside
/// the bracket around the earliest grid point within `refine_tol` of the grid
/// maximum.
pub fn k3_max_with(alpha: Alpha, search: &MaxSearch) -> Result<ExtremumRecord, LgiError> {
    if search.grid_points < 2 {
        return Err(LgiError::InvalidConfig(
            "grid_points must be at least 2".into(),
        ));
    }
    if !(search.refine_tol > 0.0) {
        return Err(LgiError::InvalidConfig(
            "refine_tol must be positive".into(),
        ));
    }
    if !(search.window_max.is_finite() && search.window_max > 0.0) {
        return Err(LgiError::InvalidConfig(
            "window_max must be positive".into(),
        ));
    }
    let n = search.grid_points;
    let step = search.window_max / n as f64;
    let taus: Vec<f64> = (1..=n)
        .map(|k| {
            if k == n {
                search.window_max
            } else {
                step * k as f64
            }
        })
        .collect();
    let eval = |tau: f64| k3(alpha, tau, search.method).map(|r| r.k3);
    let values = par::map(&taus, search.execution, |&t| eval(t))
        .into_iter()
        .collect::<Result<Vec<f64>, _>>()?;

    let grid_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let center = values
        .iter()
        .position(|&v| v >= grid_max - search.refine_tol)
        .expect("grid is nonempty");

    let lo = if center == 0 { 0.0 } else { taus[center - 1] };
    let hi = taus[(center + 1).min(n - 1)];
    // the objective is only ever evaluated at valid τ inside the bracket
    let (x, fx) = golden_section_max(
        |t| eval(t).unwrap_or(f64::NEG_INFINITY),
        lo,
        hi,
        search.refine_tol,
    );

    let (tau, value) = if fx > values[center] {
        (x, fx)
    } else {
        (taus[center], values[center])
    };
    Ok(ExtremumRecord {
        alpha: alpha.value(),
        k3_max: value.max(grid_max),
        tau_min_arg: tau,
    })
}

/// [`k3_max_with`] for each α, in input order.
pub fn k3_max_scan(alphas: &[Alpha], search: &MaxSearch) -> Result<Vec<ExtremumRecord>, LgiError> {
    par::map(alphas, search.execution, |&a| k3_max_with(a, search))
        .into_iter()
        .collect()
}

/// Correlations at the fixed step `τ = π/4`, one row per α.
pub fn correlations_at_quarter_tau(alphas: &[Alpha]) -> Result<Vec<ScanRow>, LgiError> {
    par::map(alphas, Execution::default(), |&a| {
        ScanRow::evaluate(a, FRAC_PI_4, Method::Simulation)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::ClosedFormVariant;
    use std::f64::consts::{FRAC_PI_6, PI};

    fn alpha(a: f64) -> Alpha {
        Alpha::new(a).unwrap()
    }

    #[test]
    fn sweep_ordering_and_endpoints() {
        let config = SweepConfig::new(vec![Alpha::ZERO, alpha(0.3)], 0.0, PI, 7);
        let rows = sweep_k3(&config).unwrap();
        assert_eq!(rows.len(), 14);
        let rows: Vec<ScanRow> = rows.into_iter().map(Result::unwrap).collect();
        assert_eq!(rows[0].tau, 0.0);
        assert_eq!(rows[6].tau, PI);
        assert_eq!(rows[6].alpha, 0.0);
        assert_eq!(rows[7].alpha, 0.3);
        // τ = π/2 saturates the algebraic minimum at α = 0
        assert!((rows[3].k3 + 3.0).abs() < 1e-14);
        for r in &rows {
            assert_eq!(r.k3, r.c21 + r.c32 - r.c31);
        }
    }

    #[test]
    fn sweep_hits_tsirelson_point() {
        // π/6 is the 2nd of 4 points on [0, π/2]
        let config = SweepConfig::new(vec![Alpha::ZERO], 0.0, 3.0 * FRAC_PI_6, 4);
        let rows = sweep_k3(&config).unwrap();
        let r = rows[1].as_ref().unwrap();
        assert!((r.tau - FRAC_PI_6).abs() < 1e-15);
        assert!((r.k3 - 1.5).abs() < 1e-14);
    }

    #[test]
    fn sweep_marks_failed_points() {
        let config = SweepConfig::new(vec![Alpha::ZERO], -1.0, 1.0, 3);
        let rows = sweep_k3(&config).unwrap();
        assert!(matches!(
            &rows[0],
            Err(PointError {
                error: LgiError::InvalidTau(_),
                ..
            })
        ));
        assert!(rows[1].is_ok() && rows[2].is_ok());
    }

    #[test]
    fn sweep_config_validation() {
        assert!(SweepConfig::new(vec![], 1.0, 1.0, 4).validate().is_err());
        assert!(SweepConfig::new(vec![], 0.0, 1.0, 1).validate().is_err());
        assert!(SweepConfig::new(vec![], 0.0, f64::NAN, 4)
            .validate()
            .is_err());
    }

    #[test]
    fn sequential_and_parallel_sweeps_are_identical() {
        let mut config = SweepConfig::new(vec![alpha(0.1), alpha(1.0)], 0.0, 2.0, 50);
        config.execution = Execution::Sequential;
        let a = sweep_k3(&config).unwrap();
        config.execution = Execution::Parallel;
        let b = sweep_k3(&config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unitary_maximum() {
        let rec = k3_max(Alpha::ZERO, DEFAULT_REFINE_TOL).unwrap();
        assert!((rec.k3_max - 1.5).abs() < 1e-12);
        assert!((rec.tau_min_arg - FRAC_PI_6).abs() < 1e-5, "{rec:?}");
    }

    #[test]
    fn near_exceptional_point_maximum() {
        let rec = k3_max(alpha(0.499 * PI), DEFAULT_REFINE_TOL).unwrap();
        assert!(rec.k3_max >= 2.99);
        assert!((rec.tau_min_arg - FRAC_PI_4).abs() < 0.01);
    }

    #[test]
    fn maximum_dominates_grid_and_grows() {
        let alphas: Vec<Alpha> = (0..=9).map(|k| alpha(k as f64 * 0.05 * PI)).collect();
        let recs = k3_max_scan(&alphas, &MaxSearch::default()).unwrap();
        for w in recs.windows(2) {
            assert!(w[1].k3_max > w[0].k3_max, "{w:?}");
        }
        for (a, rec) in alphas.iter().zip(&recs) {
            let config = SweepConfig::new(vec![*a], 1e-6, FRAC_PI_4, 97);
            for row in sweep_k3(&config).unwrap() {
                assert!(rec.k3_max >= row.unwrap().k3);
            }
            assert!((0.0..=FRAC_PI_4).contains(&rec.tau_min_arg));
        }
    }

    #[test]
    fn wider_window_and_closed_method() {
        let search = MaxSearch {
            window_max: PI,
            method: Method::ClosedForm(ClosedFormVariant::Repaired),
            ..MaxSearch::default()
        };
        let rec = k3_max_with(Alpha::ZERO, &search).unwrap();
        assert!((rec.k3_max - 1.5).abs() < 1e-12);
        assert!((rec.tau_min_arg - FRAC_PI_6).abs() < 1e-5);
    }

    #[test]
    fn quarter_tau_rows() {
        let rows = correlations_at_quarter_tau(&[Alpha::ZERO, alpha(FRAC_PI_4), alpha(0.49 * PI)])
            .unwrap();
        assert!(rows[0].c21.abs() < 1e-15 && rows[0].c32.abs() < 1e-15);
        assert!((rows[0].k3 - 1.0).abs() < 1e-15);
        assert!((rows[1].c21 - 0.5).abs() < 1e-14);
        assert!((rows[1].c32 - 2.0 / 3.0).abs() < 1e-14);
        assert!((rows[1].k3 - 13.0 / 6.0).abs() < 1e-13);
        assert!(rows[2].c21 > 0.99 && rows[2].c32 > 0.99);
        for r in &rows {
            assert!((r.c31 + 1.0).abs() < 1e-10);
        }
    }
}
