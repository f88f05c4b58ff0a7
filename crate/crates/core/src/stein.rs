//! Stein fractional derivative as a singular-integral quadrature, and the
//! multiplier-estimate probes built on it.
//!
//! `D^b g (x) = ( int |g(x) - g(y)|^2 / |x - y|^{1+2b} dy )^{1/2}` with the
//! integral split into
//!
//! * a singular window `|y - x| < delta`, replaced by the local Taylor
//!   correction `2 |g'(x)|^2 delta^{2-2b} / (2-2b)` (the integrand is
//!   nonnegative, so this is a one-sided convergent add-back);
//! * dyadic shells `delta 2^j <= |y - x| < delta 2^{j+1}` integrated with
//!   uniform Gauss panels, refined per shell until two successive panel
//!   counts agree;
//! * a far-field tail beyond the last shell, estimated from the edge values
//!   as `|g(x) - g(x +- R)|^2 R^{-2b} / (2b)` per side.
//!
//! Complex integrands are handled verbatim with `|.|` the complex modulus.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::DispersionParams;
use crate::series::{classify, SeriesClass};

#[derive(Debug, Error)]
pub enum SteinError {
    #[error("fractional order must lie in (0, 1), got {0}")]
    OrderOutOfRange(f64),
    #[error("integrand sample is not finite at y = {0}")]
    EvalError(f64),
    #[error("probe point x = 0 is singular")]
    SingularPoint,
    #[error("the non-integrability statement excludes t = 0")]
    DegenerateProbe,
    #[error("bad quadrature configuration: {0}")]
    BadConfig(String),
}

/// Quadrature layout for one Stein-derivative evaluation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Half-width `delta` of the excluded singular window around `x`.
    pub inner_cut: f64,
    /// Truncation radius `R`; shells march outward until they reach it or
    /// the tail bound drops below `1e-10` of the accumulated value.
    pub far_limit: f64,
    /// Starting panel count per dyadic shell.
    pub panels_per_shell: usize,
    /// Panel-doubling budget per shell.
    pub max_refinements: usize,
    /// Relative agreement demanded between successive panel counts.
    pub shell_rel_tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            inner_cut: 1e-6,
            far_limit: 1e8,
            panels_per_shell: 16,
            max_refinements: 8,
            shell_rel_tol: 1e-6,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<(), SteinError> {
        if !(self.inner_cut > 0.0 && self.inner_cut < self.far_limit) {
            return Err(SteinError::BadConfig(format!(
                "need 0 < inner_cut < far_limit, got {} and {}",
                self.inner_cut, self.far_limit
            )));
        }
        if self.panels_per_shell < 8 {
            return Err(SteinError::BadConfig(format!(
                "need at least 8 panels per shell, got {}",
                self.panels_per_shell
            )));
        }
        Ok(())
    }

    /// One notch of quadrature refinement: twice the panels, half the
    /// singular window.
    pub fn refined(&self) -> QuadConfig {
        QuadConfig {
            inner_cut: 0.5 * self.inner_cut,
            panels_per_shell: 2 * self.panels_per_shell,
            ..*self
        }
    }
}

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
const GL8_X: [f64; 4] = [
    0.1834346424956498,
    0.5255324099163290,
    0.7966664774136267,
    0.9602898564975363,
];
const GL8_W: [f64; 4] = [
    0.3626837833783620,
    0.3137066458778873,
    0.2223810344533745,
    0.1012285362903763,
];

/// Japanese bracket `<t> = (1 + t^2)^{1/2}`.
pub fn time_bracket(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// Smooth cutoff, identically 1 on `[-1/2, 1/2]`, supported in `[-1, 1]`.
pub fn standard_bump(x: f64) -> f64 {
    let r = x.abs();
    if r <= 0.5 {
        1.0
    } else if r >= 1.0 {
        0.0
    } else {
        // C^infty glue via exp(-1/s)
        let s = 2.0 * (1.0 - r);
        let e = |v: f64| if v > 0.0 { (-1.0 / v).exp() } else { 0.0 };
        e(s) / (e(s) + e(1.0 - s))
    }
}

struct SteinIntegrator<'a> {
    g: &'a dyn Fn(f64) -> Complex64,
    gx: Complex64,
    b: f64,
    g_sup: f64,
    bad_at: Option<f64>,
}

impl<'a> SteinIntegrator<'a> {
    fn integrand(&mut self, y: f64) -> f64 {
        let gy = (self.g)(y);
        if !gy.re.is_finite() || !gy.im.is_finite() {
            self.bad_at.get_or_insert(y);
            return 0.0;
        }
        self.g_sup = self.g_sup.max(gy.norm());
        let d = self.gx - gy;
        d.norm_sqr()
    }

    /// Composite GL8 over `panels` uniform panels of `[lo, hi]`, weighted by
    /// the kernel `|x - y|^{-1-2b}` with `x` encoded in `dist`.
    fn panels(&mut self, x: f64, lo: f64, hi: f64, panels: usize) -> f64 {
        let w = (hi - lo) / panels as f64;
        let mut acc = 0.0;
        for p in 0..panels {
            let c = lo + (p as f64 + 0.5) * w;
            let h = 0.5 * w;
            for i in 0..4 {
                for s in [-1.0, 1.0] {
                    let y = c + s * h * GL8_X[i];
                    let dist = (y - x).abs();
                    acc += GL8_W[i] * h * self.integrand(y) * dist.powf(-1.0 - 2.0 * self.b);
                }
            }
        }
        acc
    }

    /// Integrate `[lo, hi]` with per-segment panel-doubling refinement. If
    /// the interval straddles the origin it is split there and subdivided
    /// dyadically toward it, which resolves algebraic singularities and
    /// accelerating oscillation of the integrand at `y = 0`.
    fn segment(&mut self, x: f64, lo: f64, hi: f64, q: &QuadConfig) -> f64 {
        if lo < 0.0 && hi > 0.0 {
            return self.toward_zero(x, lo, 0.0, q) + self.toward_zero(x, 0.0, hi, q);
        }
        if lo == 0.0 || hi == 0.0 {
            return self.toward_zero(x, lo, hi, q);
        }
        self.refine(x, lo, hi, q)
    }

    fn toward_zero(&mut self, x: f64, lo: f64, hi: f64, q: &QuadConfig) -> f64 {
        let width = hi - lo;
        if width <= 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        if lo == 0.0 {
            // [0, hi]: sub-intervals [hi 2^{-m-1}, hi 2^{-m}]
            let mut upper = hi;
            for _ in 0..60 {
                let lower = 0.5 * upper;
                acc += self.refine(x, lower, upper, q);
                upper = lower;
                if upper < 1e-14 * (x.abs() + 1.0) {
                    break;
                }
            }
        } else {
            // [lo, 0] with lo < 0: sub-intervals [lo 2^{-m}, lo 2^{-m-1}]
            let mut lower = lo;
            for _ in 0..60 {
                let upper = 0.5 * lower;
                acc += self.refine(x, lower, upper, q);
                lower = upper;
                if -lower < 1e-14 * (x.abs() + 1.0) {
                    break;
                }
            }
        }
        acc
    }

    fn refine(&mut self, x: f64, lo: f64, hi: f64, q: &QuadConfig) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let mut count = q.panels_per_shell;
        let mut prev = self.panels(x, lo, hi, count);
        for _ in 0..q.max_refinements {
            count *= 2;
            let next = self.panels(x, lo, hi, count);
            let diff = (next - prev).abs();
            if diff <= q.shell_rel_tol * next.abs().max(f64::MIN_POSITIVE) {
                return next;
            }
            prev = next;
        }
        prev
    }
}

fn stein_sq(
    g: &dyn Fn(f64) -> Complex64,
    b: f64,
    x: f64,
    q: &QuadConfig,
) -> Result<f64, SteinError> {
    if !(b > 0.0 && b < 1.0) {
        return Err(SteinError::OrderOutOfRange(b));
    }
    q.validate()?;
    let gx = g(x);
    if !gx.re.is_finite() || !gx.im.is_finite() {
        return Err(SteinError::EvalError(x));
    }
    let mut it = SteinIntegrator {
        g,
        gx,
        b,
        g_sup: gx.norm(),
        bad_at: None,
    };

    // Singular window: second-order Taylor add-back.
    let delta = q.inner_cut;
    let h = 0.5 * delta;
    let gp = (g(x + h) - g(x - h)) / Complex64::new(2.0 * h, 0.0);
    let mut total = 2.0 * gp.norm_sqr() * delta.powf(2.0 - 2.0 * b) / (2.0 - 2.0 * b);

    // Dyadic shells outward from the window.
    let mut r_lo = delta;
    let mut r_hi;
    loop {
        r_hi = (2.0 * r_lo).min(q.far_limit);
        total += it.segment(x, x + r_lo, x + r_hi, q);
        total += it.segment(x, x - r_hi, x - r_lo, q);
        if let Some(y) = it.bad_at {
            return Err(SteinError::EvalError(y));
        }
        if r_hi >= q.far_limit {
            break;
        }
        let tail_bound = (4.0 / b) * it.g_sup * it.g_sup * r_hi.powf(-2.0 * b);
        if total > 0.0 && tail_bound <= 1e-10 * total && r_hi >= 64.0 * (1.0 + x.abs()) {
            break;
        }
        r_lo = r_hi;
    }

    // Far-field tail from the edge values.
    let edge = (gx - g(x + r_hi)).norm_sqr() + (gx - g(x - r_hi)).norm_sqr();
    total += edge * r_hi.powf(-2.0 * b) / (2.0 * b);
    Ok(total)
}

/// Stein derivative of a real scalar function at a point.
pub fn stein_derivative(
    g: impl Fn(f64) -> f64,
    b: f64,
    x: f64,
    q: &QuadConfig,
) -> Result<f64, SteinError> {
    let gc = |y: f64| Complex64::new(g(y), 0.0);
    Ok(stein_sq(&gc, b, x, q)?.sqrt())
}

/// Stein derivative of a complex-valued function (joint difference modulus).
pub fn stein_derivative_complex(
    g: impl Fn(f64) -> Complex64,
    b: f64,
    x: f64,
    q: &QuadConfig,
) -> Result<f64, SteinError> {
    Ok(stein_sq(&g, b, x, q)?.sqrt())
}

/// Constant in the exact `p = 2` identity `||D^b f||^2 = C_b ||D^b f||^2`,
/// namely `C_b = 2 int (1 - cos u) / |u|^{1+2b} du`, computed by quadrature.
///
/// `C_{1/2} = 2 pi`.
pub fn gagliardo_constant(b: f64) -> Result<f64, SteinError> {
    if !(b > 0.0 && b < 1.0) {
        return Err(SteinError::OrderOutOfRange(b));
    }
    Ok(gagliardo_quadrature(b, 0.1, 14, 0.5))
}

/// Quadrature backend with explicit resolution, exposed so refinement
/// stability can be checked.
pub fn gagliardo_quadrature(b: f64, eps: f64, shells: u32, max_panel: f64) -> f64 {
    let s = 1.0 + 2.0 * b;
    // 1 - cos u = u^2/2 - u^4/24 + u^6/720 - ... on [0, eps]
    let near = eps.powf(2.0 - 2.0 * b) / (2.0 * (2.0 - 2.0 * b))
        - eps.powf(4.0 - 2.0 * b) / (24.0 * (4.0 - 2.0 * b))
        + eps.powf(6.0 - 2.0 * b) / (720.0 * (6.0 - 2.0 * b));
    let mut mid = 0.0;
    let mut lo = eps;
    for _ in 0..shells {
        let hi = 2.0 * lo;
        let panels = ((hi - lo) / max_panel).ceil().max(8.0) as usize;
        let w = (hi - lo) / panels as f64;
        for p in 0..panels {
            let c = lo + (p as f64 + 0.5) * w;
            let h = 0.5 * w;
            for i in 0..4 {
                for sg in [-1.0, 1.0] {
                    let u: f64 = c + sg * h * GL8_X[i];
                    mid += GL8_W[i] * h * (1.0 - u.cos()) * u.powf(-s);
                }
            }
        }
        lo = hi;
    }
    let a = lo;
    // int_A^inf u^{-s} du exactly, minus the oscillatory remainder by
    // integration by parts (three terms, error O(A^{-s-3})).
    let tail_one = a.powf(1.0 - s) / (s - 1.0);
    let cos_tail = -a.sin() * a.powf(-s)
        + s * a.cos() * a.powf(-s - 1.0)
        + s * (s + 1.0) * a.sin() * a.powf(-s - 2.0);
    4.0 * (near + mid + tail_one - cos_tail)
}

/// Dispersive phase `e^{i t x |x|^{1+a}}` as a complex function of `x`.
pub fn dispersive_phase(p: &DispersionParams, t: f64) -> impl Fn(f64) -> Complex64 + Sync + '_ {
    let a = p.a();
    move |y: f64| {
        if y == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            let phase = t * y.signum() * y.abs().powf(2.0 + a);
            Complex64::new(phase.cos(), phase.sin())
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseBoundReport {
    pub b: f64,
    pub t: f64,
    /// `(x, D^b(phase)(x) / (<t> |x|^{(1+a)b}))` per probe point.
    pub rows: Vec<(f64, f64)>,
    pub max_ratio: f64,
    pub argmax: f64,
}

/// Ratio of the Stein derivative of the dispersive phase to its claimed
/// envelope `<t> |x|^{(1+a)b}`, maximized over the probe points.
pub fn phase_bound_ratio(
    p: &DispersionParams,
    b: f64,
    t: f64,
    xs: &[f64],
    q: &QuadConfig,
) -> Result<PhaseBoundReport, SteinError> {
    if xs.iter().any(|&x| x == 0.0) {
        return Err(SteinError::SingularPoint);
    }
    let phase = dispersive_phase(p, t);
    let envelope = |x: f64| time_bracket(t) * x.abs().powf((1.0 + p.a()) * b);
    let rows: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let v = stein_derivative_complex(&phase, b, x, q)?;
            Ok((x, v / envelope(x)))
        })
        .collect::<Result<_, SteinError>>()?;
    let (argmax, max_ratio) = rows
        .iter()
        .fold((f64::NAN, f64::NEG_INFINITY), |(ax, m), &(x, r)| {
            if r > m {
                (x, r)
            } else {
                (ax, m)
            }
        });
    Ok(PhaseBoundReport {
        b,
        t,
        rows,
        max_ratio,
        argmax,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonintegrabilityReport {
    pub b: f64,
    pub t: f64,
    pub lp: f64,
    /// `(delta, truncated L^p norm over delta < |x| < 1/2)`, delta decreasing.
    pub rows: Vec<(f64, f64)>,
    /// `Divergent` means growth at every cutoff halving; `Convergent` plays
    /// the role of BOUNDED (successive values plateau).
    pub class: SeriesClass,
}

/// Truncated `L^p` norms of `D^b(e^{itx|x|^{1+a}} phi)` outside shrinking
/// cutoffs, classifying the blow-up of the cutoff integral.
pub fn nonintegrability_probe(
    p: &DispersionParams,
    b: f64,
    t: f64,
    lp: f64,
    deltas: &[f64],
    q: &QuadConfig,
) -> Result<NonintegrabilityReport, SteinError> {
    if t == 0.0 {
        return Err(SteinError::DegenerateProbe);
    }
    if lp < 1.0 {
        return Err(SteinError::BadConfig(format!("need p >= 1, got {lp}")));
    }
    if deltas.len() < 2
        || deltas.windows(2).any(|w| w[1] >= w[0])
        || deltas.iter().any(|&d| d <= 0.0 || d >= 0.5)
    {
        return Err(SteinError::BadConfig(
            "cutoffs must decrease strictly inside (0, 1/2)".into(),
        ));
    }
    let phase = dispersive_phase(p, t);
    let g = |y: f64| phase(y) * standard_bump(y);

    // Quadrature cells in x: [delta_{j+1}, delta_j] plus the cap up to 1/2.
    let mut edges: Vec<f64> = deltas.to_vec();
    edges.reverse(); // increasing
    edges.push(0.5);
    let cells: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
    let cell_integrals: Vec<f64> = cells
        .par_iter()
        .map(|&(lo, hi)| {
            let c = 0.5 * (lo + hi);
            let h = 0.5 * (hi - lo);
            let mut acc = 0.0;
            for i in 0..4 {
                for sg in [-1.0, 1.0] {
                    let x = c + sg * h * GL8_X[i];
                    let v = stein_derivative_complex(&g, b, x, q)?;
                    acc += GL8_W[i] * h * v.powf(lp);
                }
            }
            Ok(acc)
        })
        .collect::<Result<_, SteinError>>()?;

    let mut rows = Vec::with_capacity(deltas.len());
    for (j, &delta) in deltas.iter().enumerate() {
        // cells to the right of delta: the last j+1 entries of the increasing list
        let from = cells.len() - 1 - j;
        let sum: f64 = cell_integrals[from..].iter().sum();
        rows.push((delta, (2.0 * sum).powf(1.0 / lp)));
    }
    let values: Vec<f64> = rows.iter().map(|r| r.1).collect();
    Ok(NonintegrabilityReport {
        b,
        t,
        lp,
        rows,
        class: classify(&values),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowFreqDecayReport {
    pub beta: f64,
    pub theta: f64,
    pub signed: bool,
    /// `(x, D^theta(|xi|^{-beta} phi)(x) * |x|^{beta+theta})`
    pub rows: Vec<(f64, f64)>,
    pub max_product: f64,
    pub argmax: f64,
}

/// Decay probe for the low-frequency multiplier `|xi|^{-beta} phi(xi)` (and
/// its sign-weighted variant): the product against `|x|^{beta+theta}` should
/// stay bounded over the probe points.
pub fn low_freq_decay_check(
    beta: f64,
    theta: f64,
    xs: &[f64],
    signed: bool,
    q: &QuadConfig,
) -> Result<LowFreqDecayReport, SteinError> {
    if !(beta > 0.0 && beta < 0.5) {
        return Err(SteinError::BadConfig(format!(
            "need beta in (0, 1/2), got {beta}"
        )));
    }
    if xs.iter().any(|&x| x == 0.0) {
        return Err(SteinError::SingularPoint);
    }
    let g = move |y: f64| {
        if y == 0.0 {
            0.0
        } else {
            let sgn = if signed { y.signum() } else { 1.0 };
            sgn * y.abs().powf(-beta) * standard_bump(y)
        }
    };
    let rows: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let v = stein_derivative(g, theta, x, q)?;
            Ok((x, v * x.abs().powf(beta + theta)))
        })
        .collect::<Result<_, SteinError>>()?;
    let (argmax, max_product) = rows
        .iter()
        .fold((f64::NAN, f64::NEG_INFINITY), |(ax, m), &(x, r)| {
            if r > m {
                (x, r)
            } else {
                (ax, m)
            }
        });
    Ok(LowFreqDecayReport {
        beta,
        theta,
        signed,
        rows,
        max_product,
        argmax,
    })
}

/// Log-spaced probe points, endpoints included.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}
