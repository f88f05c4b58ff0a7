//! Named experiment recipes: decay-threshold sweeps across box-doubling
//! ladders, the two-time and critical-weight probes, the extra-decay check
//! for the Duhamel term, and the consolidated bounds battery.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Field, Grid, GridError};
use crate::multiplier::{fractional_derivative, SpectralError};
use crate::norms::{homogeneous_norm, interpolation_check, sobolev_norm, weighted_norm};
use crate::params::{DispersionParams, ZeroModePolicy};
use crate::propagator::{
    linear_propagate, regularized_propagate, smoothing_gain, weight_commutation_residual,
    PropagatorError,
};
use crate::series::{classify, SeriesClass};
use crate::solver::{evolve, nonlinear_rhs, Scheme, SolveConfig, SolverError, Trajectory};
use crate::stein::{
    gagliardo_constant, logspace, low_freq_decay_check, nonintegrability_probe, phase_bound_ratio,
    standard_bump, QuadConfig, SteinError,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("bad experiment spec: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Propagator(#[from] PropagatorError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Stein(#[from] SteinError),
}

/// Proxy for the `|x|^{0+}` weight in the two-time identity.
pub const UCP_WEIGHT_EPS: f64 = 0.1;

/// Initial datum recipes. The spectral bump is built directly in frequency
/// space, so its low-frequency content is exactly what the recipe says.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatumRecipe {
    /// `amplitude * exp(-x^2 / (2 sigma^2)) * cos(modulation x)`
    Gaussian {
        sigma: f64,
        modulation: f64,
        amplitude: f64,
    },
    /// `u^(xi) = amplitude * bump((xi - center)/width)` mirrored evenly; with
    /// `center = 0` the spectrum is identically `amplitude` near the origin
    /// (the counterexample datum), with `center > width` it vanishes there
    /// (a fully compliant band packet).
    BumpSpectrum {
        center: f64,
        width: f64,
        amplitude: f64,
    },
    /// Explicit samples; only valid on a single-rung ladder of matching size.
    Custom { samples: Vec<f64> },
}

impl DatumRecipe {
    pub fn gaussian_packet(amplitude: f64, modulation: f64) -> Self {
        DatumRecipe::Gaussian {
            sigma: std::f64::consts::FRAC_1_SQRT_2,
            modulation,
            amplitude,
        }
    }

    pub fn counterexample_bump() -> Self {
        DatumRecipe::BumpSpectrum {
            center: 0.0,
            width: 2.0,
            amplitude: 1.0,
        }
    }

    pub fn build(&self, grid: &Grid) -> Result<Field, ExperimentError> {
        match self {
            DatumRecipe::Gaussian {
                sigma,
                modulation,
                amplitude,
            } => {
                if !(*sigma > 0.0) {
                    return Err(ExperimentError::BadSpec("gaussian sigma must be > 0".into()));
                }
                let (s, k, a) = (*sigma, *modulation, *amplitude);
                Ok(Field::from_fn(grid.clone(), move |x| {
                    a * (-x * x / (2.0 * s * s)).exp() * (k * x).cos()
                })?)
            }
            DatumRecipe::BumpSpectrum {
                center,
                width,
                amplitude,
            } => {
                if !(*width > 0.0) {
                    return Err(ExperimentError::BadSpec("bump width must be > 0".into()));
                }
                let spectrum: Vec<_> = grid
                    .freqs()
                    .iter()
                    .map(|&xi| {
                        let v = if *center == 0.0 {
                            standard_bump(xi / width)
                        } else {
                            standard_bump((xi - center) / width)
                                + standard_bump((xi + center) / width)
                        };
                        num_complex::Complex64::new(amplitude * v, 0.0)
                    })
                    .collect();
                Ok(Field::from_spectrum(grid.clone(), spectrum)?)
            }
            DatumRecipe::Custom { samples } => {
                if samples.len() != grid.n() {
                    return Err(ExperimentError::BadSpec(format!(
                        "custom datum has {} samples but the grid needs {}",
                        samples.len(),
                        grid.n()
                    )));
                }
                Ok(Field::from_samples(grid.clone(), samples.clone())?)
            }
        }
    }
}

/// Box-doubling ladder at fixed grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridLadder {
    pub base_length: f64,
    pub base_points: usize,
    pub rungs: usize,
}

impl GridLadder {
    pub fn grids(&self) -> Result<Vec<Grid>, ExperimentError> {
        if self.rungs == 0 {
            return Err(ExperimentError::BadSpec("ladder needs at least one rung".into()));
        }
        (0..self.rungs)
            .map(|r| {
                let scale = 1usize << r;
                Ok(Grid::new(self.base_points * scale, self.base_length * scale as f64)?)
            })
            .collect()
    }

    pub fn rung_labels(&self) -> Vec<(f64, usize)> {
        (0..self.rungs)
            .map(|r| {
                let scale = 1usize << r;
                (self.base_length * scale as f64, self.base_points * scale)
            })
            .collect()
    }
}

/// Solver settings without the dispersion parameters (those live once in the
/// experiment spec). `dt = 0` means the accuracy default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub mu: f64,
    pub horizon: f64,
    pub dt: f64,
    pub dealias: f64,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    pub scheme: Scheme,
    pub nonlinear: bool,
    pub store_every: usize,
}

impl SolverSettings {
    pub fn with_horizon(horizon: f64) -> Self {
        SolverSettings {
            mu: 0.0,
            horizon,
            dt: 0.0,
            dealias: 2.0 / 3.0,
            picard_tol: 1e-10,
            picard_max_iter: 60,
            scheme: Scheme::IfRk4,
            nonlinear: true,
            store_every: 1,
        }
    }

    pub fn to_config(&self, params: DispersionParams, grid: &Grid) -> SolveConfig {
        let dt = if self.dt > 0.0 {
            self.dt
        } else {
            SolveConfig::default_dt(grid.dx(), self.horizon)
        };
        SolveConfig {
            params,
            mu: self.mu,
            horizon: self.horizon,
            dt,
            dealias: self.dealias,
            picard_tol: self.picard_tol,
            picard_max_iter: self.picard_max_iter,
            scheme: self.scheme,
            nonlinear: self.nonlinear,
            store_every: self.store_every,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub params: DispersionParams,
    pub datum: DatumRecipe,
    pub ladder: GridLadder,
    pub thetas: Vec<f64>,
    pub times: Vec<f64>,
    pub solver: SolverSettings,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let margin = 0.25;
        let cap = self.params.theta_max() + margin;
        if let Some(&bad) = self.thetas.iter().find(|&&t| !(0.0..=cap).contains(&t)) {
            return Err(ExperimentError::BadSpec(format!(
                "theta = {bad} outside [0, theta_max + {margin}]"
            )));
        }
        if matches!(self.datum, DatumRecipe::Custom { .. }) && self.ladder.rungs > 1 {
            return Err(ExperimentError::BadSpec(
                "custom samples cannot ride a multi-rung ladder".into(),
            ));
        }
        self.ladder.grids().map(|_| ())
    }

    fn default_probe_times(&self) -> (f64, f64) {
        // Away from the datum and from the horizon.
        (0.25 * self.solver.horizon, 0.75 * self.solver.horizon)
    }
}

/// Datum as seen by the ladder experiments: the mean is removed. On the
/// torus the mean mode is a decoupled Galilean artifact with no counterpart
/// on the line (the group leaves its phase undefined, the solver transports
/// it), and the decay statements concern the spectrum near, not at, the
/// origin.
fn mean_free(phi: &Field) -> Field {
    let m = phi.mean();
    if m == 0.0 {
        phi.clone()
    } else {
        let samples: Vec<f64> = phi.samples().iter().map(|v| v - m).collect();
        Field::from_samples(phi.grid().clone(), samples).expect("finite samples stay finite")
    }
}

/// One classified value series along the ladder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LadderSeries {
    pub label: String,
    pub theta: f64,
    pub t: f64,
    pub values: Vec<f64>,
    pub class: SeriesClass,
}

impl LadderSeries {
    fn new(label: impl Into<String>, theta: f64, t: f64, values: Vec<f64>) -> Self {
        let class = classify(&values);
        LadderSeries {
            label: label.into(),
            theta,
            t,
            values,
            class,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecaySweepReport {
    pub spec: ExperimentSpec,
    pub rungs: Vec<(f64, usize)>,
    pub rows: Vec<LadderSeries>,
}

/// Weighted-norm ladder sweep of `|| |x|^theta u(t) ||` for the nonlinear
/// flow and the linear baseline.
pub fn decay_threshold_sweep(spec: &ExperimentSpec) -> Result<DecaySweepReport, ExperimentError> {
    spec.validate()?;
    if spec.times.is_empty() || spec.times.iter().any(|&t| t <= 0.0) {
        return Err(ExperimentError::BadSpec(
            "decay sweep needs strictly positive time samples".into(),
        ));
    }
    let grids = spec.ladder.grids()?;
    let mut tables: Vec<Vec<f64>> = Vec::new(); // [row][rung]
    let mut labels: Vec<(String, f64, f64)> = Vec::new();
    for theta in &spec.thetas {
        for t in &spec.times {
            for flow in ["nonlinear", "linear"] {
                labels.push((flow.to_string(), *theta, *t));
            }
        }
    }
    tables.resize(labels.len(), Vec::new());

    for grid in &grids {
        let phi = mean_free(&spec.datum.build(grid)?);
        let horizon = spec.times.iter().cloned().fold(f64::MIN, f64::max);
        let cfg = SolveConfig {
            horizon,
            ..spec.solver.to_config(spec.params, grid)
        };
        let traj = evolve(&phi, &cfg)?;
        let mut row = 0;
        for theta in &spec.thetas {
            for t in &spec.times {
                let u_nl = traj.field_near(*t);
                tables[row].push(weighted_norm(u_nl, *theta));
                row += 1;
                let u_lin = linear_propagate(&phi, *t, &spec.params);
                tables[row].push(weighted_norm(&u_lin, *theta));
                row += 1;
            }
        }
    }

    let rows = labels
        .into_iter()
        .zip(tables)
        .map(|((label, theta, t), values)| LadderSeries::new(label, theta, t, values))
        .collect();
    Ok(DecaySweepReport {
        spec: spec.clone(),
        rungs: spec.ladder.rung_labels(),
        rows,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UcpTwoTimeReport {
    pub spec: ExperimentSpec,
    pub rungs: Vec<(f64, usize)>,
    pub t1: f64,
    pub t2: f64,
    /// `|| |x|^{0+} U(t_j)(x phi - (2+a) t_j D^{1+a} phi) ||` per time.
    pub identity_rows: Vec<LadderSeries>,
    /// The four datum conditions, for each probed `theta > 1`:
    /// `D^{(1+a)(theta-1)}(x phi)` and `|x|^theta phi` versus
    /// `D^{(1+a)theta} phi` and `|x|^{theta-1} D^{1+a} phi`.
    pub condition_rows: Vec<LadderSeries>,
}

pub fn ucp_two_time_probe(
    spec: &ExperimentSpec,
    t1: f64,
    t2: f64,
) -> Result<UcpTwoTimeReport, ExperimentError> {
    spec.validate()?;
    if !(t2 > t1 && t1 >= 0.0) {
        return Err(ExperimentError::BadSpec("need t2 > t1 >= 0".into()));
    }
    let grids = spec.ladder.grids()?;
    let p = &spec.params;
    let policy = ZeroModePolicy::Annihilate;

    let mut identity: Vec<Vec<f64>> = vec![Vec::new(); 2];
    let cross_thetas: Vec<f64> = spec.thetas.iter().cloned().filter(|&t| t > 1.0).collect();
    let mut conditions: Vec<Vec<f64>> = vec![Vec::new(); 4 * cross_thetas.len()];

    for grid in &grids {
        let phi = mean_free(&spec.datum.build(grid)?);
        let d1a = fractional_derivative(&phi, 1.0 + p.a(), policy)?;
        for (slot, &t) in [t1, t2].iter().enumerate() {
            let arg = phi.mul_coord(|x| x).sub(&d1a.scale((2.0 + p.a()) * t));
            let w = linear_propagate(&arg, t, p);
            identity[slot].push(weighted_norm(&w, UCP_WEIGHT_EPS));
        }
        for (i, &theta) in cross_thetas.iter().enumerate() {
            let x_phi = phi.mul_coord(|x| x);
            conditions[4 * i].push(homogeneous_norm(
                &x_phi,
                (1.0 + p.a()) * (theta - 1.0),
                policy,
            )?);
            conditions[4 * i + 1].push(weighted_norm(&phi, theta));
            conditions[4 * i + 2].push(homogeneous_norm(&phi, (1.0 + p.a()) * theta, policy)?);
            conditions[4 * i + 3].push(weighted_norm(&d1a, theta - 1.0));
        }
    }

    let identity_rows = vec![
        LadderSeries::new("identity", UCP_WEIGHT_EPS, t1, identity[0].clone()),
        LadderSeries::new("identity", UCP_WEIGHT_EPS, t2, identity[1].clone()),
    ];
    let mut condition_rows = Vec::new();
    for (i, &theta) in cross_thetas.iter().enumerate() {
        let names = [
            "cond1_homog_of_x_phi",
            "cond1_weighted_phi",
            "cond2_homog_phi",
            "cond2_weighted_d1a_phi",
        ];
        for (j, name) in names.iter().enumerate() {
            condition_rows.push(LadderSeries::new(
                *name,
                theta,
                0.0,
                conditions[4 * i + j].clone(),
            ));
        }
    }
    Ok(UcpTwoTimeReport {
        spec: spec.clone(),
        rungs: spec.ladder.rung_labels(),
        t1,
        t2,
        identity_rows,
        condition_rows,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UcpCriticalReport {
    pub spec: ExperimentSpec,
    pub rungs: Vec<(f64, usize)>,
    pub theta_max: f64,
    pub b_crit: f64,
    /// Weighted norms of the evolved solution just below and at the critical
    /// exponent, at the two probe times.
    pub critical_rows: Vec<LadderSeries>,
    /// The obstruction mechanism: cutoff norms of the Stein derivative of
    /// the phase at order `theta_max - 1 = b_crit`.
    pub mechanism: crate::stein::NonintegrabilityReport,
}

pub fn ucp_critical_vanishing_probe(
    spec: &ExperimentSpec,
) -> Result<UcpCriticalReport, ExperimentError> {
    spec.validate()?;
    let p = &spec.params;
    let (t1, t2) = if spec.times.len() >= 2 {
        (spec.times[0], spec.times[1])
    } else {
        spec.default_probe_times()
    };
    if !(t2 > t1 && t1 >= 0.0) {
        return Err(ExperimentError::BadSpec("need t2 > t1 >= 0".into()));
    }
    let theta_hi = p.theta_max();
    let theta_lo = theta_hi - 0.05;
    let grids = spec.ladder.grids()?;
    let mut table: Vec<Vec<f64>> = vec![Vec::new(); 4];
    for grid in &grids {
        let phi = mean_free(&spec.datum.build(grid)?);
        let cfg = SolveConfig {
            horizon: spec.solver.horizon.max(t2),
            ..spec.solver.to_config(*p, grid)
        };
        let traj = evolve(&phi, &cfg)?;
        for (i, &t) in [t1, t2].iter().enumerate() {
            let u = traj.field_near(t);
            table[2 * i].push(weighted_norm(u, theta_lo));
            table[2 * i + 1].push(weighted_norm(u, theta_hi));
        }
    }
    let critical_rows = vec![
        LadderSeries::new("subcritical", theta_lo, t1, table[0].clone()),
        LadderSeries::new("critical", theta_hi, t1, table[1].clone()),
        LadderSeries::new("subcritical", theta_lo, t2, table[2].clone()),
        LadderSeries::new("critical", theta_hi, t2, table[3].clone()),
    ];
    let deltas = halving_cutoffs(1e-1, 1e-4);
    let mechanism = nonintegrability_probe(
        p,
        p.b_crit(),
        t2,
        2.0,
        &deltas,
        &QuadConfig::default(),
    )?;
    Ok(UcpCriticalReport {
        spec: spec.clone(),
        rungs: spec.ladder.rung_labels(),
        theta_max: theta_hi,
        b_crit: p.b_crit(),
        critical_rows,
        mechanism,
    })
}

/// Cutoff ladder obtained by halving `from` until it falls at or below `to`.
pub fn halving_cutoffs(from: f64, to: f64) -> Vec<f64> {
    assert!(from > to && to > 0.0);
    let mut v = vec![from];
    while *v.last().unwrap() > to {
        let next = 0.5 * v.last().unwrap();
        v.push(next);
        if v.len() > 64 {
            break;
        }
    }
    v
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtraDecayReport {
    pub spec: ExperimentSpec,
    pub rungs: Vec<(f64, usize)>,
    pub theta: f64,
    pub theta1: f64,
    pub rows: Vec<LadderSeries>,
}

/// Weighted norms of the Duhamel integral
/// `int_0^t U_mu(t - tau) N(u(tau)) dtau` (trapezoid over the stored
/// trajectory) at the solution's decay class `theta` and at the faster class
/// `theta1`, across the ladder.
pub fn extra_decay_check(spec: &ExperimentSpec) -> Result<ExtraDecayReport, ExperimentError> {
    spec.validate()?;
    if spec.thetas.is_empty() {
        return Err(ExperimentError::BadSpec("extra-decay needs a theta".into()));
    }
    let p = &spec.params;
    let theta = spec.thetas[0];
    let theta1 = if spec.thetas.len() > 1 {
        spec.thetas[1]
    } else {
        p.theta_mid()
    };
    if !(theta1 > theta) {
        return Err(ExperimentError::BadSpec(format!(
            "need theta1 > theta, got {theta1} <= {theta}"
        )));
    }
    let t_eval = if spec.times.is_empty() {
        spec.solver.horizon
    } else {
        spec.times.iter().cloned().fold(f64::MIN, f64::max)
    };
    let grids = spec.ladder.grids()?;
    let mut duhamel_lo = Vec::new();
    let mut duhamel_hi = Vec::new();
    let mut solution_lo = Vec::new();
    for grid in &grids {
        let phi = mean_free(&spec.datum.build(grid)?);
        let cfg = SolveConfig {
            horizon: t_eval,
            ..spec.solver.to_config(*p, grid)
        };
        let traj = evolve(&phi, &cfg)?;
        let d = duhamel_integral(&traj, t_eval, &cfg)?;
        duhamel_lo.push(weighted_norm(&d, theta));
        duhamel_hi.push(weighted_norm(&d, theta1));
        solution_lo.push(weighted_norm(traj.field_near(t_eval), theta));
    }
    let rows = vec![
        LadderSeries::new("duhamel", theta, t_eval, duhamel_lo),
        LadderSeries::new("duhamel", theta1, t_eval, duhamel_hi),
        LadderSeries::new("solution", theta, t_eval, solution_lo),
    ];
    Ok(ExtraDecayReport {
        spec: spec.clone(),
        rungs: spec.ladder.rung_labels(),
        theta,
        theta1,
        rows,
    })
}

/// Trapezoid evaluation of the Duhamel term over the stored trajectory.
/// With the nonlinearity disabled this is identically zero.
pub fn duhamel_integral(
    traj: &Trajectory,
    t: f64,
    cfg: &SolveConfig,
) -> Result<Field, ExperimentError> {
    let grid = traj.fields[0].grid().clone();
    if !cfg.nonlinear {
        return Ok(Field::zero(grid));
    }
    let upto: Vec<usize> = (0..traj.times.len())
        .filter(|&i| traj.times[i] <= t + 1e-12)
        .collect();
    let last = *upto.last().expect("trajectory starts at t = 0");
    let mut acc = Field::zero(grid);
    for &i in &upto {
        let tau = traj.times[i];
        let h_prev = if i == 0 { 0.0 } else { traj.times[i] - traj.times[i - 1] };
        let h_next = if i == last { 0.0 } else { traj.times[i + 1] - traj.times[i] };
        let weight = 0.5 * (h_prev + h_next);
        if weight == 0.0 {
            continue;
        }
        let integrand = nonlinear_rhs(&traj.fields[i], cfg.dealias);
        let term = regularized_propagate(&integrand, t - tau, &cfg.params, cfg.mu)?;
        acc = acc.add(&term.scale(weight));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Bounds battery
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub details: String,
    pub metrics: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatteryReport {
    pub a: f64,
    pub checks: Vec<CheckOutcome>,
}

impl BatteryReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Deterministic band-limited mean-free field from a seeded generator.
pub fn random_band_limited(grid: &Grid, seed: u64, k_max: usize) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let k_max = k_max.min(n / 2 - 1);
    let mut spectrum = vec![num_complex::Complex64::new(0.0, 0.0); n];
    for k in 1..=k_max {
        let re = rng.gen_range(-1.0..1.0);
        let im = rng.gen_range(-1.0..1.0);
        spectrum[k] = num_complex::Complex64::new(re, im);
        spectrum[n - k] = spectrum[k].conj();
    }
    Field::from_spectrum(grid.clone(), spectrum).expect("random spectrum is Hermitian")
}

fn check(name: &str, pass: bool, details: String, metrics: Vec<(String, f64)>) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        pass,
        details,
        metrics,
    }
}

fn propagator_algebra_check(p: &DispersionParams) -> CheckOutcome {
    let grid = Grid::new(512, 32.0 * std::f64::consts::PI).unwrap();
    let mut worst_identity: f64 = 0.0;
    let mut worst_group: f64 = 0.0;
    let mut worst_unitary: f64 = 0.0;
    let mut worst_commute: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..20u64 {
        let f = random_band_limited(&grid, 1000 + seed, 96);
        let norm = f.l2_norm();
        let t = rng.gen_range(-5.0..5.0);
        let s = rng.gen_range(-5.0..5.0);
        worst_identity = worst_identity.max(linear_propagate(&f, 0.0, p).l2_distance(&f) / norm);
        let two_step = linear_propagate(&linear_propagate(&f, s, p), t, p);
        let one_step = linear_propagate(&f, t + s, p);
        worst_group = worst_group.max(two_step.l2_distance(&one_step) / norm);
        worst_unitary = worst_unitary
            .max((linear_propagate(&f, t, p).l2_norm() - norm).abs() / norm);
        let ds_then_u = linear_propagate(
            &fractional_derivative(&f, 0.7, ZeroModePolicy::Annihilate).unwrap(),
            t,
            p,
        );
        let u_then_ds =
            fractional_derivative(&linear_propagate(&f, t, p), 0.7, ZeroModePolicy::Annihilate)
                .unwrap();
        worst_commute = worst_commute.max(ds_then_u.l2_distance(&u_then_ds) / norm);
    }
    let tol = 1e-12;
    let pass = worst_identity <= tol && worst_group <= tol && worst_unitary <= tol && worst_commute <= tol;
    check(
        "propagator_algebra",
        pass,
        format!("group law / unitarity / D^s commutation on 20 random band-limited fields, tol {tol:.0e}"),
        vec![
            ("identity_residual".into(), worst_identity),
            ("group_law_residual".into(), worst_group),
            ("unitarity_residual".into(), worst_unitary),
            ("commutation_residual".into(), worst_commute),
        ],
    )
}

fn weight_commutation_check(p: &DispersionParams) -> CheckOutcome {
    let grid = Grid::new(4096, 64.0 * std::f64::consts::PI).unwrap();
    let f = Field::from_fn(grid, |x| (-x * x / 4.0).exp() * (8.0 * x).cos()).unwrap();
    let mut worst: f64 = 0.0;
    let mut metrics = Vec::new();
    let mut failed = false;
    for &t in &[0.5, 1.0] {
        for &mu in &[0.0, 0.05] {
            match weight_commutation_residual(&f, t, p, mu) {
                Ok(r) => {
                    worst = worst.max(r);
                    metrics.push((format!("residual_t{t}_mu{mu}"), r));
                }
                Err(_) => failed = true,
            }
        }
    }
    let pass = !failed && worst <= 1e-8;
    check(
        "weight_commutation",
        pass,
        "x U_mu(t) f = U_mu(t)(x f - (2+a) t D^{1+a} f - 2 mu t f_x) on a modulated Gaussian, tol 1e-8".into(),
        metrics,
    )
}

fn smoothing_check(_p: &DispersionParams) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_excess: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for _ in 0..20 {
        let lambda = rng.gen_range(0.3..3.0);
        let mu_t = rng.gen_range(0.01..1.0);
        let bound = smoothing_gain(lambda, mu_t, 1.0);
        // lattice built to contain the continuum maximizer exactly
        let xi_star = (lambda / mu_t).sqrt();
        let k_star = 64.0;
        let length = 2.0 * std::f64::consts::PI * k_star / xi_star;
        let grid = Grid::new(1024, length).unwrap();
        let sup = grid
            .freqs()
            .iter()
            .map(|&xi| xi.abs().powf(2.0 * lambda) * (-mu_t * xi * xi).exp())
            .fold(0.0, f64::max);
        worst_excess = worst_excess.max((sup - bound) / bound);
        worst_gap = worst_gap.max((bound - sup) / bound);
    }
    let pass = worst_excess <= 1e-12 && worst_gap < 1e-6;
    check(
        "smoothing_bound",
        pass,
        "lattice sup of xi^{2 lambda} e^{-mu t xi^2} vs (lambda/(mu t e))^lambda, 20 seeded draws".into(),
        vec![
            ("worst_excess".into(), worst_excess),
            ("worst_equality_gap".into(), worst_gap),
        ],
    )
}

fn smoothing_gain_sampled_check(p: &DispersionParams) -> CheckOutcome {
    // ||U_mu(t) f||_{H^{s+lambda}} <= sup_xi <xi>^lambda e^{-mu t xi^2} ||f||_{H^s},
    // and the sup itself obeys the analytic envelope.
    let grid = Grid::new(1024, 32.0 * std::f64::consts::PI).unwrap();
    let f = random_band_limited(&grid, 99, 300);
    let (mu, t, s) = (0.2, 0.7, 0.5);
    let u = regularized_propagate(&f, t, p, mu).unwrap();
    let base = sobolev_norm(&f, s);
    let mut metrics = Vec::new();
    let mut pass = true;
    for lambda in [0.5, 1.0, 2.0] {
        let measured_sup = grid
            .freqs()
            .iter()
            .map(|&xi| (1.0 + xi * xi).powf(0.5 * lambda) * (-mu * t * xi * xi).exp())
            .fold(0.0, f64::max);
        let envelope =
            2f64.powf(0.5 * lambda) * (1.0 + smoothing_gain(0.5 * lambda, mu, t).sqrt());
        let gained = sobolev_norm(&u, s + lambda);
        pass &= measured_sup <= envelope * (1.0 + 1e-12);
        pass &= gained <= measured_sup * base * (1.0 + 1e-12);
        metrics.push((format!("sup_lambda{lambda}"), measured_sup));
        metrics.push((format!("envelope_lambda{lambda}"), envelope));
        metrics.push((format!("norm_ratio_lambda{lambda}"), gained / base));
    }
    check(
        "smoothing_gain_sampled",
        pass,
        "H^{s+lambda} gain of U_mu(t) within the analytic envelope for lambda in {0.5, 1, 2}".into(),
        metrics,
    )
}

fn stein_fourier_check(_p: &DispersionParams) -> CheckOutcome {
    let c_half = gagliardo_constant(0.5).unwrap();
    let two_pi = 2.0 * std::f64::consts::PI;
    let c_err = (c_half - two_pi).abs() / two_pi;
    let mut metrics = vec![("c_half_rel_err".into(), c_err)];
    let mut pass = c_err <= 1e-6;
    let q = QuadConfig::default();
    for b in [0.25, 0.5, 0.75] {
        let (lhs, rhs) = stein_fourier_sides(b, &q);
        let rel = (lhs - rhs).abs() / rhs;
        metrics.push((format!("identity_rel_err_b{b}"), rel));
        pass &= rel <= 1e-4;
    }
    check(
        "stein_fourier_identity",
        pass,
        "||D^b f||^2 = C_b ||D^b f||^2 for a Gaussian, b in {1/4, 1/2, 3/4}, tol 1e-4; C_{1/2} = 2 pi tol 1e-6".into(),
        metrics,
    )
}

/// Both sides of the p = 2 identity for `f = e^{-x^2}`: the pointwise Stein
/// quadrature integrated over `x` (with its analytic far tail) against the
/// spectral-side norm scaled by the quadrature constant.
pub fn stein_fourier_sides(b: f64, q: &QuadConfig) -> (f64, f64) {
    let g = |y: f64| (-y * y).exp();
    // outer integral over [-X, X] by composite Gauss panels
    let x_max = 30.0;
    let panels = 120;
    let w = 2.0 * x_max / panels as f64;
    let gl_x = [
        0.1834346424956498,
        0.5255324099163290,
        0.7966664774136267,
        0.9602898564975363,
    ];
    let gl_w = [
        0.3626837833783620,
        0.3137066458778873,
        0.2223810344533745,
        0.1012285362903763,
    ];
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|pi| {
            let c = -x_max + (pi as f64 + 0.5) * w;
            let h = 0.5 * w;
            (0..4).flat_map(move |i| {
                [(-1.0, i), (1.0, i)]
                    .into_iter()
                    .map(move |(sg, i): (f64, usize)| (c + sg * h * gl_x[i], gl_w[i] * h))
            })
        })
        .collect();
    use rayon::prelude::*;
    let grid_part: f64 = nodes
        .par_iter()
        .map(|&(x, wt)| {
            let v = crate::stein::stein_derivative(g, b, x, q).unwrap();
            wt * v * v
        })
        .sum();
    // Beyond |x| = X the difference integrand is g(y)^2 exactly, so the tail
    // of the outer integral is (1/2b) int g(y)^2 [(X-y)^{-2b} + (X+y)^{-2b}] dy.
    let mut tail = 0.0;
    let ty_panels = 300;
    let ty_w = 16.0 / ty_panels as f64;
    for piy in 0..ty_panels {
        let c = -8.0 + (piy as f64 + 0.5) * ty_w;
        let h = 0.5 * ty_w;
        for i in 0..4 {
            for sg in [-1.0f64, 1.0] {
                let y = c + sg * h * gl_x[i];
                let gg = g(y) * g(y);
                tail += gl_w[i]
                    * h
                    * gg
                    * ((x_max - y).powf(-2.0 * b) + (x_max + y).powf(-2.0 * b))
                    / (2.0 * b);
            }
        }
    }
    let lhs = grid_part + tail;
    // spectral side: f^ = sqrt(pi) e^{-xi^2/4}, ||D^b f||^2 = (1/2pi) int |xi|^{2b} |f^|^2
    let mut spectral = 0.0;
    let s_panels = 400;
    let s_w = 40.0 / s_panels as f64;
    for pis in 0..s_panels {
        let c = (pis as f64 + 0.5) * s_w;
        let h = 0.5 * s_w;
        for i in 0..4 {
            for sg in [-1.0f64, 1.0] {
                let xi: f64 = c + sg * h * gl_x[i];
                spectral += gl_w[i] * h * xi.powf(2.0 * b) * std::f64::consts::PI
                    * (-xi * xi / 2.0).exp();
            }
        }
    }
    spectral *= 2.0 / (2.0 * std::f64::consts::PI); // both half-lines
    let c_b = gagliardo_constant(b).unwrap();
    (lhs, c_b * spectral)
}

fn phase_bound_check(p: &DispersionParams) -> CheckOutcome {
    let xs = logspace(0.05, 50.0, 25);
    let q = QuadConfig::default();
    let mut pass = true;
    let mut metrics = Vec::new();
    for &b in &[0.3, 0.6, 0.9] {
        for &t in &[1.0, 5.0] {
            let coarse = phase_bound_ratio(p, b, t, &xs, &q).unwrap();
            let fine = phase_bound_ratio(p, b, t, &xs, &q.refined()).unwrap();
            let drift = if fine.max_ratio > 0.0 {
                coarse.max_ratio / fine.max_ratio
            } else {
                1.0
            };
            pass &= coarse.max_ratio.is_finite()
                && fine.max_ratio.is_finite()
                && drift < 2.0
                && drift > 0.5;
            metrics.push((format!("max_ratio_b{b}_t{t}"), fine.max_ratio));
            metrics.push((format!("refinement_drift_b{b}_t{t}"), drift));
        }
    }
    check(
        "phase_bound",
        pass,
        "D^b of the dispersive phase vs <t>|x|^{(1+a)b} over x in [0.05, 50]; stable under refinement".into(),
        metrics,
    )
}

fn nonintegrability_check(p: &DispersionParams) -> CheckOutcome {
    let deltas = halving_cutoffs(1e-1, 1e-4);
    let q = QuadConfig::default();
    let divergent = nonintegrability_probe(p, 0.6, 1.0, 2.0, &deltas, &q).unwrap();
    let bounded = nonintegrability_probe(p, 0.2, 1.0, 2.0, &deltas, &q).unwrap();
    let pass = divergent.class == SeriesClass::Divergent
        && bounded.class == SeriesClass::Convergent;
    check(
        "nonintegrability_dichotomy",
        pass,
        format!(
            "b = 0.6 > b_crit = {:.3}: {}; b = 0.2: {}",
            p.b_crit(),
            divergent.class,
            bounded.class
        ),
        vec![
            ("divergent_last".into(), divergent.rows.last().unwrap().1),
            ("bounded_last".into(), bounded.rows.last().unwrap().1),
        ],
    )
}

fn low_freq_decay_battery_check(p: &DispersionParams) -> CheckOutcome {
    let beta = -(2.0 + p.a());
    let xs = logspace(0.01, 10.0, 25);
    let q = QuadConfig::default();
    let mut pass = true;
    let mut metrics = Vec::new();
    for (label, signed) in [("plain", false), ("signed", true)] {
        let coarse = low_freq_decay_check(beta, 0.3, &xs, signed, &q).unwrap();
        let fine = low_freq_decay_check(beta, 0.3, &xs, signed, &q.refined()).unwrap();
        let drift = coarse.max_product / fine.max_product;
        pass &= coarse.max_product.is_finite() && drift < 2.0 && drift > 0.5;
        metrics.push((format!("max_product_{label}"), fine.max_product));
        metrics.push((format!("refinement_drift_{label}"), drift));
    }
    check(
        "low_freq_decay",
        pass,
        format!("D^theta(|xi|^-beta phi) |x|^{{beta+theta}} bounded, beta = {beta:.3}, theta = 0.3"),
        metrics,
    )
}

fn interpolation_battery_check(_p: &DispersionParams) -> CheckOutcome {
    let grid = Grid::new(512, 40.0).unwrap();
    let mut pass = true;
    let mut metrics = Vec::new();
    let cases = [(2.0, 1.0, 0.5), (1.5, 0.8, 0.3)];
    for seed in 0..5u64 {
        let f = if seed == 0 {
            Field::from_fn(grid.clone(), |x| (-x * x).exp()).unwrap()
        } else {
            // smooth decaying random packet
            let b = random_band_limited(&grid, 40 + seed, 40);
            b.mul_coord(|x| (-0.05 * x * x).exp())
        };
        for &(alpha, bb, beta) in &cases {
            let r = interpolation_check(&f, alpha, bb, beta);
            pass &= !r.degenerate && r.ratio.is_finite() && r.ratio < 10.0;
            if seed == 0 {
                metrics.push((format!("gaussian_ratio_a{alpha}_b{bb}_beta{beta}"), r.ratio));
            }
        }
    }
    check(
        "interpolation_ratio",
        pass,
        "weighted interpolation ratio finite and bounded over a smooth family".into(),
        metrics,
    )
}

fn embedding_check(p: &DispersionParams) -> CheckOutcome {
    let grid = Grid::new(512, 64.0 * std::f64::consts::PI).unwrap();
    let (theta, theta_tilde) = (0.3, 0.5);
    let mut worst: f64 = 0.0;
    for seed in 0..10u64 {
        let f = random_band_limited(&grid, 700 + seed, 200);
        let lhs = homogeneous_norm(&f, (1.0 + p.a()) * theta, ZeroModePolicy::Annihilate).unwrap();
        let rhs = homogeneous_norm(&f, (1.0 + p.a()) * theta_tilde, ZeroModePolicy::Annihilate)
            .unwrap()
            + f.l2_norm();
        worst = worst.max(lhs / rhs);
    }
    check(
        "embedding_ordering",
        worst <= 1.0 + 1e-12,
        format!("||D^{{(1+a)theta}}f|| <= ||D^{{(1+a)theta~}}f|| + ||f|| for theta {theta} <= {theta_tilde}"),
        vec![("worst_ratio".into(), worst)],
    )
}

fn exponent_algebra_check(p: &DispersionParams) -> CheckOutcome {
    let rejects_boundary = DispersionParams::new(-2.0).is_err();
    let near = DispersionParams::new(-2.0 - 1e-6).unwrap();
    let ordering = p.theta_low() < 1.0
        && 1.0 < p.theta_mid()
        && p.theta_mid() < p.theta_max()
        && p.theta_max() < 1.5;
    let ident = (p.theta_max() - 1.0 - p.b_crit()).abs() < 1e-12;
    check(
        "exponent_algebra",
        rejects_boundary && ordering && ident,
        "constructor rejects a = -2; theta_low < 1 < theta_mid < theta_max < 3/2; theta_max - 1 = b_crit".into(),
        vec![
            ("theta_low".into(), p.theta_low()),
            ("theta_mid".into(), p.theta_mid()),
            ("theta_max".into(), p.theta_max()),
            ("b_crit".into(), p.b_crit()),
            ("b_crit_near_minus_two".into(), near.b_crit()),
        ],
    )
}

/// Run every multiplier-estimate, norm, and propagator check at default
/// desk-scale sweeps. Individual failures are collected, not fatal.
pub fn bounds_battery(p: &DispersionParams) -> BatteryReport {
    let checks = vec![
        exponent_algebra_check(p),
        propagator_algebra_check(p),
        weight_commutation_check(p),
        smoothing_check(p),
        smoothing_gain_sampled_check(p),
        stein_fourier_check(p),
        phase_bound_check(p),
        nonintegrability_check(p),
        low_freq_decay_battery_check(p),
        interpolation_battery_check(p),
        embedding_check(p),
    ];
    BatteryReport { a: p.a(), checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> DispersionParams {
        DispersionParams::new(-2.25).unwrap()
    }

    fn tiny_spec() -> ExperimentSpec {
        ExperimentSpec {
            name: "tiny".into(),
            params: params(),
            datum: DatumRecipe::gaussian_packet(0.1, 8.0),
            ladder: GridLadder {
                base_length: 16.0 * std::f64::consts::PI,
                base_points: 256,
                rungs: 2,
            },
            thetas: vec![0.3],
            times: vec![0.2],
            solver: SolverSettings {
                dt: 0.02,
                ..SolverSettings::with_horizon(0.2)
            },
        }
    }

    #[test]
    fn ladder_doubles_length_and_points() {
        let l = GridLadder {
            base_length: 10.0,
            base_points: 64,
            rungs: 3,
        };
        let labels = l.rung_labels();
        assert_eq!(labels, vec![(10.0, 64), (20.0, 128), (40.0, 256)]);
        let grids = l.grids().unwrap();
        let dx: Vec<f64> = grids.iter().map(|g| g.dx()).collect();
        assert!((dx[0] - dx[1]).abs() < 1e-15 && (dx[1] - dx[2]).abs() < 1e-15);
    }

    #[test]
    fn spec_validation_catches_bad_theta_and_custom_ladder() {
        let mut s = tiny_spec();
        s.thetas = vec![5.0];
        assert!(matches!(s.validate(), Err(ExperimentError::BadSpec(_))));
        let mut s = tiny_spec();
        s.datum = DatumRecipe::Custom { samples: vec![0.0; 128] };
        assert!(matches!(s.validate(), Err(ExperimentError::BadSpec(_))));
    }

    #[test]
    fn bump_spectrum_datum_is_flat_near_zero() {
        let g = Grid::new(256, 64.0 * std::f64::consts::PI).unwrap();
        let phi = DatumRecipe::counterexample_bump().build(&g).unwrap();
        let sp = phi.spectrum();
        // lattice spacing is 1/32, well inside the flat part of the bump
        for k in 0..=8 {
            assert!((sp[k].re - 1.0).abs() < 1e-9, "mode {k}: {}", sp[k].re);
        }
        // band packet vanishes identically near the origin
        let packet = DatumRecipe::BumpSpectrum {
            center: 6.0,
            width: 2.0,
            amplitude: 1.0,
        }
        .build(&g)
        .unwrap();
        let sp = packet.spectrum();
        for k in 0..=16 {
            assert_eq!(sp[k].re, 0.0, "mode {k} should vanish");
        }
    }

    #[test]
    fn mass_row_is_flat_across_the_ladder() {
        let mut s = tiny_spec();
        s.thetas = vec![0.0];
        let report = decay_threshold_sweep(&s).unwrap();
        for row in &report.rows {
            assert_eq!(row.class, SeriesClass::Convergent, "{row:?}");
        }
    }

    #[test]
    fn duhamel_vanishes_with_nonlinearity_off() {
        let mut s = tiny_spec();
        s.solver.nonlinear = false;
        let grid = s.ladder.grids().unwrap()[0].clone();
        let phi = s.datum.build(&grid).unwrap();
        let cfg = s.solver.to_config(s.params, &grid);
        let traj = evolve(&phi, &cfg).unwrap();
        let d = duhamel_integral(&traj, 0.2, &cfg).unwrap();
        assert_eq!(d.l2_norm(), 0.0);
    }

    #[test]
    fn halving_ladder_endpoints() {
        let v = halving_cutoffs(1e-1, 1e-4);
        assert!((v[0] - 0.1).abs() < 1e-15);
        assert!(*v.last().unwrap() <= 1e-4);
        assert!(v.windows(2).all(|w| (w[1] - 0.5 * w[0]).abs() < 1e-18));
    }

    #[test]
    fn zero_datum_critical_probe_is_vacuously_convergent() {
        let mut s = tiny_spec();
        s.datum = DatumRecipe::Gaussian {
            sigma: 1.0,
            modulation: 0.0,
            amplitude: 0.0,
        };
        s.times = vec![0.05, 0.15];
        let report = ucp_critical_vanishing_probe(&s).unwrap();
        for row in &report.critical_rows {
            assert_eq!(row.class, SeriesClass::Convergent);
            assert!(row.values.iter().all(|&v| v == 0.0));
        }
        assert!((report.theta_max - 1.4).abs() < 1e-12);
        assert!((report.b_crit - 0.4).abs() < 1e-12);
    }
}
