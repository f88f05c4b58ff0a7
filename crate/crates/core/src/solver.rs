//! Time evolution of the equation and its parabolic regularization:
//! an integrating-factor RK4 production stepper, Picard iteration on the
//! Duhamel map, the blow-up majorant, and the vanishing-viscosity study.
//!
//! The linear symbol `S(xi) = i xi |xi|^{1+a} - mu xi^2` is bounded on the
//! lattice away from `xi = 0` because the dispersion has negative order, so
//! the usual KdV stiffness picture is inverted: high frequencies are mild
//! and the singularity sits at low frequency (where the zero mode is simply
//! annihilated). The integrating factor treats `S` exactly either way, and
//! the step size is accuracy-limited by the advection term, not
//! stability-limited.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Field, Grid};
use crate::multiplier::SpectralError;
use crate::norms::energy;
use crate::params::DispersionParams;
use crate::propagator::{regularized_propagate, PropagatorError};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solution lost finiteness at t = {t}{}", mu.map(|m| format!(" (mu = {m})")).unwrap_or_default())]
    BlowupDetected { t: f64, mu: Option<f64> },
    #[error("Picard iteration failed to contract after {iterations} sweeps (last ratio {last_ratio:.3})")]
    ContractionFailure { last_ratio: f64, iterations: usize },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Propagator(#[from] PropagatorError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    IfRk4,
    PicardDuhamel,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolveConfig {
    pub params: DispersionParams,
    pub mu: f64,
    pub horizon: f64,
    pub dt: f64,
    pub dealias: f64,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    pub scheme: Scheme,
    /// Test hook: disable the quadratic term to recover the exact linear flow.
    pub nonlinear: bool,
    /// Keep every k-th step in the trajectory (diagnostics are always per step).
    pub store_every: usize,
}

impl SolveConfig {
    pub fn new(params: DispersionParams, horizon: f64, dt: f64) -> Self {
        SolveConfig {
            params,
            mu: 0.0,
            horizon,
            dt,
            dealias: 2.0 / 3.0,
            picard_tol: 1e-10,
            picard_max_iter: 60,
            scheme: Scheme::IfRk4,
            nonlinear: true,
            store_every: 1,
        }
    }

    /// Accuracy-oriented default step: `min(dx/2, T/256)`.
    pub fn default_dt(dx: f64, horizon: f64) -> f64 {
        (0.5 * dx).min(horizon / 256.0)
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.dt > 0.0 && self.horizon >= self.dt) {
            return Err(SolverError::InvalidConfig(format!(
                "need 0 < dt <= horizon, got dt = {}, horizon = {}",
                self.dt, self.horizon
            )));
        }
        if !(self.dealias > 0.5 && self.dealias <= 1.0) {
            return Err(SolverError::InvalidConfig(format!(
                "dealias fraction must lie in (1/2, 1], got {}",
                self.dealias
            )));
        }
        if !(self.picard_tol > 0.0) {
            return Err(SolverError::InvalidConfig(
                "picard_tol must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.mu) {
            return Err(SolverError::InvalidConfig(format!(
                "viscosity must lie in [0, 1), got {}",
                self.mu
            )));
        }
        if self.store_every == 0 {
            return Err(SolverError::InvalidConfig("store_every must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StepDiagnostics {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub l2: f64,
    pub sup: f64,
    /// Drift of the (conserved) zero mode relative to the datum.
    pub zero_mode_drift: f64,
}

/// Time-indexed solution samples plus per-step diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub fields: Vec<Field>,
    pub diagnostics: Vec<StepDiagnostics>,
    pub picard_iterations: Vec<usize>,
}

impl Trajectory {
    pub fn final_field(&self) -> &Field {
        self.fields.last().expect("trajectory is never empty")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory is never empty")
    }

    /// Stored field closest to `t`.
    pub fn field_near(&self, t: f64) -> &Field {
        let idx = self
            .times
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                ((*a - t).abs())
                    .partial_cmp(&(*b - t).abs())
                    .expect("times are finite")
            })
            .map(|(i, _)| i)
            .expect("trajectory is never empty");
        &self.fields[idx]
    }
}

/// Dealiased quadratic right-hand side `-1/2 d/dx (u^2)`: modes above
/// `dealias * n/2` are zeroed both before and after squaring, and the output
/// is exactly mean-free.
pub fn nonlinear_rhs(u: &Field, dealias: f64) -> Field {
    let grid = u.grid().clone();
    let cut = dealias * std::f64::consts::PI / grid.dx();
    let projected: Vec<Complex64> = u
        .spectrum()
        .iter()
        .zip(grid.freqs())
        .map(|(v, &xi)| if xi.abs() > cut { Complex64::new(0.0, 0.0) } else { *v })
        .collect();
    let v = Field::from_spectrum_unchecked(grid.clone(), projected);
    let squared: Vec<f64> = v.samples().iter().map(|s| s * s).collect();
    let w = Field::from_samples_unchecked(grid.clone(), squared);
    let out: Vec<Complex64> = w
        .spectrum()
        .iter()
        .zip(grid.freqs())
        .enumerate()
        .map(|(i, (v, &xi))| {
            if xi.abs() > cut || i == grid.nyquist_index() {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -0.5 * xi) * v
            }
        })
        .collect();
    Field::from_spectrum_unchecked(grid, out)
}

struct Stepper {
    grid: Grid,
    dealias: f64,
    nonlinear: bool,
    /// e^{S dt}, e^{S dt/2}, e^{-S dt/2}, e^{-S dt}
    e_full: Vec<Complex64>,
    e_half: Vec<Complex64>,
    e_half_inv: Vec<Complex64>,
    e_full_inv: Vec<Complex64>,
}

impl Stepper {
    fn new(grid: Grid, p: &DispersionParams, mu: f64, dt: f64, dealias: f64, nonlinear: bool) -> Self {
        let n = grid.n();
        let symbol: Vec<Complex64> = grid
            .freqs()
            .iter()
            .enumerate()
            .map(|(i, &xi)| {
                if xi == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else if i == n / 2 {
                    // unpaired Nyquist mode: keep only the damping part
                    Complex64::new(-mu * xi * xi, 0.0)
                } else {
                    Complex64::new(-mu * xi * xi, p.phase_symbol(xi))
                }
            })
            .collect();
        let exp_scaled = |c: f64| -> Vec<Complex64> { symbol.iter().map(|s| (s * c).exp()).collect() };
        Stepper {
            grid,
            dealias,
            nonlinear,
            e_full: exp_scaled(dt),
            e_half: exp_scaled(0.5 * dt),
            e_half_inv: exp_scaled(-0.5 * dt),
            e_full_inv: exp_scaled(-dt),
        }
    }

    fn rhs_hat(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        if !self.nonlinear {
            return vec![Complex64::new(0.0, 0.0); spectrum.len()];
        }
        let u = Field::from_spectrum_unchecked(self.grid.clone(), spectrum.to_vec());
        nonlinear_rhs(&u, self.dealias).spectrum().to_vec()
    }

    /// One integrating-factor RK4 step in the transformed variable
    /// `w(tau) = e^{-tau S} u^(t_n + tau)`.
    fn step(&self, u_hat: &[Complex64], dt: f64) -> Vec<Complex64> {
        let n = u_hat.len();
        let mul = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
            a.iter().zip(b).map(|(x, y)| x * y).collect()
        };
        let k1 = self.rhs_hat(u_hat);
        let stage = |base: &[Complex64], k: &[Complex64], c: f64| -> Vec<Complex64> {
            base.iter().zip(k).map(|(b, kv)| b + kv * c).collect()
        };
        let k2 = mul(
            &self.e_half_inv,
            &self.rhs_hat(&mul(&self.e_half, &stage(u_hat, &k1, 0.5 * dt))),
        );
        let k3 = mul(
            &self.e_half_inv,
            &self.rhs_hat(&mul(&self.e_half, &stage(u_hat, &k2, 0.5 * dt))),
        );
        let k4 = mul(
            &self.e_full_inv,
            &self.rhs_hat(&mul(&self.e_full, &stage(u_hat, &k3, dt))),
        );
        (0..n)
            .map(|i| {
                let w = u_hat[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
                self.e_full[i] * w
            })
            .collect()
    }
}

fn diagnostics_for(u: &Field, t: f64, p: &DispersionParams, zero_mode_ref: f64) -> StepDiagnostics {
    let l2 = u.l2_norm();
    StepDiagnostics {
        t,
        mass: l2 * l2,
        energy: energy(u, p),
        l2,
        sup: u.sup_norm(),
        zero_mode_drift: (u.spectrum()[0].re - zero_mode_ref).abs(),
    }
}

/// Integrating-factor RK4 evolution (or Picard, per `cfg.scheme`).
///
/// The step count is `round(horizon / dt)` with the step adjusted to land on
/// the horizon exactly; diagnostics are recorded every step.
pub fn evolve(phi: &Field, cfg: &SolveConfig) -> Result<Trajectory, SolverError> {
    cfg.validate()?;
    if cfg.scheme == Scheme::PicardDuhamel {
        return picard_solve(phi, cfg);
    }
    let grid = phi.grid().clone();
    let steps = (cfg.horizon / cfg.dt).round().max(1.0) as usize;
    let dt = cfg.horizon / steps as f64;
    let stepper = Stepper::new(grid.clone(), &cfg.params, cfg.mu, dt, cfg.dealias, cfg.nonlinear);

    let zero_ref = phi.spectrum()[0].re;
    let mut u_hat = phi.spectrum().to_vec();
    let mut times = vec![0.0];
    let mut fields = vec![phi.clone()];
    let mut diagnostics = vec![diagnostics_for(phi, 0.0, &cfg.params, zero_ref)];

    for step in 1..=steps {
        let t = step as f64 * dt;
        u_hat = stepper.step(&u_hat, dt);
        if u_hat.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(SolverError::BlowupDetected {
                t: (step - 1) as f64 * dt,
                mu: Some(cfg.mu),
            });
        }
        // The quadratic term is a perfect derivative, so the zero mode is a
        // constant of the motion; enforce against rounding creep.
        debug_assert!(
            (u_hat[0].re - zero_ref).abs() <= 1e-10 * (1.0 + zero_ref.abs()),
            "zero mode drifted"
        );
        let u = Field::from_spectrum(grid.clone(), u_hat.clone())
            .map_err(|_| SolverError::BlowupDetected { t, mu: Some(cfg.mu) })?;
        diagnostics.push(diagnostics_for(&u, t, &cfg.params, zero_ref));
        if step % cfg.store_every == 0 || step == steps {
            times.push(t);
            fields.push(u);
        }
    }
    Ok(Trajectory {
        times,
        fields,
        diagnostics,
        picard_iterations: Vec::new(),
    })
}

/// Picard iteration on the discrete Duhamel map
/// `Phi(v)(t_i) = U_mu(t_i) phi + trapz_{tau <= t_i} U_mu(t_i - tau) N(v(tau))`
/// with `N(v) = -1/2 d/dx v^2`. Needs `mu > 0` (the contraction leans on the
/// parabolic gain) and a horizon small enough to contract.
pub fn picard_solve(phi: &Field, cfg: &SolveConfig) -> Result<Trajectory, SolverError> {
    cfg.validate()?;
    if cfg.mu <= 0.0 {
        return Err(SolverError::InvalidConfig(
            "Picard iteration requires mu > 0".into(),
        ));
    }
    let steps = (cfg.horizon / cfg.dt).round().max(1.0) as usize;
    let dt = cfg.horizon / steps as f64;
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();

    // Propagator table U_mu(k dt), k = 0..steps, each as a spectral diagonal.
    let grid = phi.grid().clone();
    let free: Vec<Field> = times
        .iter()
        .map(|&t| regularized_propagate(phi, t, &cfg.params, cfg.mu))
        .collect::<Result<_, _>>()?;

    let mut v: Vec<Field> = free.clone();
    let mut last_ratio = f64::NAN;
    let mut prev_diff = f64::NAN;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let rhs: Vec<Field> = v
            .par_iter()
            .map(|vi| {
                if cfg.nonlinear {
                    nonlinear_rhs(vi, cfg.dealias)
                } else {
                    Field::zero(grid.clone())
                }
            })
            .collect();
        let next: Vec<Field> = (0..=steps)
            .into_par_iter()
            .map(|i| {
                let mut acc = free[i].clone();
                for j in 0..=i {
                    let weight = if j == 0 || j == i { 0.5 * dt } else { dt };
                    if weight == 0.0 {
                        continue;
                    }
                    let term = regularized_propagate(
                        &rhs[j],
                        times[i] - times[j],
                        &cfg.params,
                        cfg.mu,
                    )?;
                    acc = acc.add(&term.scale(weight));
                }
                Ok(acc)
            })
            .collect::<Result<_, SolverError>>()?;

        let diff = v
            .iter()
            .zip(&next)
            .map(|(a, b)| {
                a.samples()
                    .iter()
                    .zip(b.samples())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        v = next;
        if diff < cfg.picard_tol {
            break;
        }
        if prev_diff.is_finite() && prev_diff > 0.0 {
            last_ratio = diff / prev_diff;
        }
        prev_diff = diff;
        if iterations >= cfg.picard_max_iter {
            return Err(SolverError::ContractionFailure {
                last_ratio,
                iterations,
            });
        }
    }

    let zero_ref = phi.spectrum()[0].re;
    let diagnostics = times
        .iter()
        .zip(&v)
        .map(|(&t, u)| diagnostics_for(u, t, &cfg.params, zero_ref))
        .collect();
    Ok(Trajectory {
        times,
        fields: v,
        diagnostics,
        picard_iterations: vec![iterations],
    })
}

/// Closed-form blow-up majorant from the energy differential inequality
/// `rho_1' = c_s rho_1^{3/2}`, `rho_1(0) = hs_norm_sq`:
///
/// `rho_1(t) = rho_1(0) / (1 - (c_s/2) sqrt(rho_1(0)) t)^2`, blowing up at
/// `T* = 2 / (c_s sqrt(rho_1(0)))`, and
/// `rho(t) = rho_1(t) + (homog_norm + c_s int_0^t rho_1)^2` with the integral
/// in closed form.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Majorant {
    pub rho1_0: f64,
    pub homog_norm: f64,
    pub c_s: f64,
    pub t_star: f64,
}

pub fn majorant(hs_norm_sq: f64, homog_norm: f64, c_s: f64) -> Majorant {
    assert!(hs_norm_sq >= 0.0 && homog_norm >= 0.0 && c_s > 0.0);
    let t_star = if hs_norm_sq == 0.0 {
        f64::INFINITY
    } else {
        2.0 / (c_s * hs_norm_sq.sqrt())
    };
    Majorant {
        rho1_0: hs_norm_sq,
        homog_norm,
        c_s,
        t_star,
    }
}

impl Majorant {
    fn slope(&self) -> f64 {
        0.5 * self.c_s * self.rho1_0.sqrt()
    }

    pub fn rho1(&self, t: f64) -> f64 {
        if t >= self.t_star {
            return f64::INFINITY;
        }
        let d = 1.0 - self.slope() * t;
        self.rho1_0 / (d * d)
    }

    /// `int_0^t rho_1 = rho_1(0) t / (1 - (c_s/2) sqrt(rho_1(0)) t)`.
    pub fn rho1_integral(&self, t: f64) -> f64 {
        if t >= self.t_star {
            return f64::INFINITY;
        }
        self.rho1_0 * t / (1.0 - self.slope() * t)
    }

    pub fn rho(&self, t: f64) -> f64 {
        let tail = self.homog_norm + self.c_s * self.rho1_integral(t);
        self.rho1(t) + tail * tail
    }
}

/// Pairwise distance table for the vanishing-viscosity ladder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MuContinuationTable {
    /// `((mu_i, mu_{i+1}), sup_{t <= T} ||u_{mu_i}(t) - u_{mu_{i+1}}(t)||)`
    pub rows: Vec<((f64, f64), f64)>,
}

impl MuContinuationTable {
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].1 < w[0].1)
    }
}

/// Evolve the same datum down a decreasing viscosity ladder and report the
/// sup-in-time `L^2` distances between consecutive runs.
pub fn mu_continuation(
    phi: &Field,
    mus: &[f64],
    cfg: &SolveConfig,
) -> Result<MuContinuationTable, SolverError> {
    if mus.len() < 2 || mus.windows(2).any(|w| w[1] > w[0]) {
        return Err(SolverError::InvalidConfig(
            "need a decreasing viscosity ladder with at least two entries".into(),
        ));
    }
    let runs: Vec<Trajectory> = mus
        .par_iter()
        .map(|&mu| {
            let run_cfg = SolveConfig { mu, ..*cfg };
            evolve(phi, &run_cfg).map_err(|e| match e {
                SolverError::BlowupDetected { t, .. } => {
                    SolverError::BlowupDetected { t, mu: Some(mu) }
                }
                other => other,
            })
        })
        .collect::<Result<_, _>>()?;
    let rows = runs
        .windows(2)
        .zip(mus.windows(2))
        .map(|(pair, mu_pair)| {
            let dist = pair[0]
                .fields
                .iter()
                .zip(&pair[1].fields)
                .map(|(a, b)| a.l2_distance(b))
                .fold(0.0, f64::max);
            ((mu_pair[0], mu_pair[1]), dist)
        })
        .collect();
    Ok(MuContinuationTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::propagator::linear_propagate;

    const TAU: f64 = 2.0 * std::f64::consts::PI;

    fn params() -> DispersionParams {
        DispersionParams::new(-2.25).unwrap()
    }

    #[test]
    fn rhs_of_constant_vanishes() {
        let g = Grid::new(64, TAU).unwrap();
        let c = Field::from_fn(g, |_| 2.5).unwrap();
        assert!(nonlinear_rhs(&c, 2.0 / 3.0).l2_norm() < 1e-14);
    }

    #[test]
    fn rhs_of_sine_is_trig_identity() {
        // -1/2 d/dx sin^2 x = -1/2 sin 2x
        let g = Grid::new(64, TAU).unwrap();
        let f = Field::from_fn(g, |x| x.sin()).unwrap();
        let r = nonlinear_rhs(&f, 2.0 / 3.0);
        for (v, x) in r.samples().iter().zip(r.grid().points()) {
            assert!((v + 0.5 * (2.0 * x).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn rhs_is_exactly_mean_free() {
        let g = Grid::new(128, 30.0).unwrap();
        let f = Field::from_fn(g, |x| (-0.1 * x * x).exp() + 0.5).unwrap();
        let r = nonlinear_rhs(&f, 2.0 / 3.0);
        assert_eq!(r.spectrum()[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn linear_hook_matches_exact_propagator() {
        // mean-free datum: the group annihilates the zero mode while the
        // stepper conserves it, so only the mean-free sector is comparable
        let g = Grid::new(128, 40.0).unwrap();
        let raw = Field::from_fn(g.clone(), |x| (-0.2 * x * x).exp() * (3.0 * x).cos()).unwrap();
        let m = raw.mean();
        let phi = Field::from_fn(g, |x| (-0.2 * x * x).exp() * (3.0 * x).cos() - m).unwrap();
        let mut cfg = SolveConfig::new(params(), 1.0, 0.01);
        cfg.mu = 0.05;
        cfg.nonlinear = false;
        let traj = evolve(&phi, &cfg).unwrap();
        let exact = regularized_propagate(&phi, 1.0, &params(), 0.05).unwrap();
        let err = traj.final_field().l2_distance(&exact);
        assert!(err <= 1e-12 * phi.l2_norm(), "integrating factor error {err:.3e}");
    }

    #[test]
    fn single_mode_linear_flow_is_exact() {
        let g = Grid::new(64, TAU).unwrap();
        let phi = Field::from_fn(g, |x| (2.0 * x).cos()).unwrap();
        let mut cfg = SolveConfig::new(params(), 0.5, 0.05);
        cfg.nonlinear = false;
        let traj = evolve(&phi, &cfg).unwrap();
        let exact = linear_propagate(&phi, 0.5, &params());
        assert!(traj.final_field().l2_distance(&exact) < 1e-12);
    }

    #[test]
    fn zero_datum_picard_converges_immediately() {
        let g = Grid::new(64, TAU).unwrap();
        let phi = Field::zero(g);
        let mut cfg = SolveConfig::new(params(), 0.5, 0.05);
        cfg.mu = 0.1;
        let traj = picard_solve(&phi, &cfg).unwrap();
        assert_eq!(traj.picard_iterations, vec![1]);
        assert!(traj.final_field().l2_norm() == 0.0);
    }

    #[test]
    fn picard_requires_viscosity() {
        let g = Grid::new(64, TAU).unwrap();
        let phi = Field::from_fn(g, |x| 0.1 * x.sin()).unwrap();
        let cfg = SolveConfig::new(params(), 0.5, 0.05);
        assert!(matches!(
            picard_solve(&phi, &cfg),
            Err(SolverError::InvalidConfig(_))
        ));
    }

    #[test]
    fn picard_flags_non_contraction() {
        // enormous datum and long horizon: the smallness condition fails
        let g = Grid::new(64, TAU).unwrap();
        let phi = Field::from_fn(g, |x| 50.0 * x.sin()).unwrap();
        let mut cfg = SolveConfig::new(params(), 2.0, 0.1);
        cfg.mu = 0.01;
        cfg.picard_max_iter = 8;
        assert!(matches!(
            picard_solve(&phi, &cfg),
            Err(SolverError::ContractionFailure { .. })
        ));
    }

    #[test]
    fn majorant_formula_points() {
        let m = majorant(1.0, 0.0, 2.0);
        assert!((m.t_star - 1.0).abs() < 1e-15);
        assert!((m.rho1(0.5) - 4.0).abs() < 1e-12);
        assert_eq!(majorant(0.0, 1.0, 1.0).t_star, f64::INFINITY);
    }

    #[test]
    fn majorant_is_nondecreasing() {
        let m = majorant(2.0, 0.7, 1.0);
        let mut prev = m.rho(0.0);
        for i in 1..50 {
            let t = 0.98 * m.t_star * i as f64 / 50.0;
            let v = m.rho(t);
            assert!(v >= prev);
            prev = v;
        }
        assert!((m.rho(0.0) - (m.rho1_0 + m.homog_norm * m.homog_norm)).abs() < 1e-14);
    }

    #[test]
    fn mu_table_rejects_increasing_ladder() {
        let g = Grid::new(64, TAU).unwrap();
        let phi = Field::from_fn(g, |x| 0.1 * x.sin()).unwrap();
        let cfg = SolveConfig::new(params(), 0.2, 0.05);
        assert!(matches!(
            mu_continuation(&phi, &[1e-3, 1e-2], &cfg),
            Err(SolverError::InvalidConfig(_))
        ));
    }

    #[test]
    fn equal_viscosities_give_zero_distance() {
        let g = Grid::new(64, TAU).unwrap();
        let phi = Field::from_fn(g, |x| 0.3 * x.sin()).unwrap();
        let mut cfg = SolveConfig::new(params(), 0.2, 0.02);
        cfg.mu = 0.05;
        let table = mu_continuation(&phi, &[0.05, 0.05], &cfg).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].1, 0.0);
    }
}
