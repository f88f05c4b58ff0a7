//! Periodic grid and real-valued fields with cached spectra.
//!
//! Transform convention, fixed here and used everywhere else:
//!
//! ```text
//! forward:  F_k = sum_j f(x_j) e^{-i xi_k x_j} dx        (approximates the line transform)
//! inverse:  f_j = (1/L) sum_k F_k e^{+i xi_k x_j}
//! ```
//!
//! with grid points `x_j = -L/2 + j L/n` and frequencies `xi_k = 2 pi k / L`
//! for `k in [-n/2, n/2)`. Parseval then reads
//! `sum_j f_j^2 dx = (1/L) sum_k |F_k|^2`, so `F_k` plays the role of the
//! continuum Fourier transform evaluated at `xi_k`.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("point count must be a power of two >= 8, got {0}")]
    BadPointCount(usize),
    #[error("box size must be positive and finite, got {0}")]
    BadLength(f64),
    #[error("sample length {got} does not match grid size {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("spectrum breaks Hermitian symmetry (relative asymmetry {0:.3e}); field would not be real")]
    NotHermitian(f64),
    #[error("non-finite sample encountered")]
    NonFinite,
}

struct GridInner {
    n: usize,
    length: f64,
    points: Vec<f64>,
    freqs: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Uniform periodic grid on `[-L/2, L/2)` with its dual frequency lattice.
///
/// Cheap to clone; the transform plans are shared.
#[derive(Clone)]
pub struct Grid(Arc<GridInner>);

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.0.n)
            .field("length", &self.0.length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.n == other.0.n && self.0.length == other.0.length)
    }
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self, GridError> {
        if n < 8 || !n.is_power_of_two() {
            return Err(GridError::BadPointCount(n));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(GridError::BadLength(length));
        }
        let dx = length / n as f64;
        let points: Vec<f64> = (0..n).map(|j| -0.5 * length + j as f64 * dx).collect();
        // FFT storage order: k = i for i < n/2, k = i - n for i >= n/2.
        // The single Nyquist mode sits at i = n/2 with k = -n/2.
        let freqs: Vec<f64> = (0..n)
            .map(|i| {
                let k = if i < n / 2 { i as isize } else { i as isize - n as isize };
                2.0 * std::f64::consts::PI * k as f64 / length
            })
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Grid(Arc::new(GridInner {
            n,
            length,
            points,
            freqs,
            forward,
            inverse,
        })))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn length(&self) -> f64 {
        self.0.length
    }

    pub fn dx(&self) -> f64 {
        self.0.length / self.0.n as f64
    }

    /// Grid points `x_j = -L/2 + j dx` (the sawtooth box coordinate).
    pub fn points(&self) -> &[f64] {
        &self.0.points
    }

    /// Frequency lattice in FFT storage order.
    pub fn freqs(&self) -> &[f64] {
        &self.0.freqs
    }

    pub fn nyquist_index(&self) -> usize {
        self.0.n / 2
    }

    /// Largest resolved |frequency| below Nyquist.
    pub fn max_freq(&self) -> f64 {
        std::f64::consts::PI / self.dx() * (1.0 - 2.0 / self.0.n as f64)
    }

    /// Forward transform of real samples per the module convention.
    pub fn forward(&self, samples: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(samples.len(), self.0.n);
        let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.0.forward.process(&mut buf);
        let dx = self.dx();
        // x_0 = -L/2 turns into the alternating phase (-1)^k.
        for (i, v) in buf.iter_mut().enumerate() {
            let sign = if i % 2 == 0 { dx } else { -dx };
            *v *= sign;
        }
        buf
    }

    /// Inverse transform back to real samples. The imaginary residue is
    /// dropped; callers enforce Hermitian symmetry beforehand.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<f64> {
        debug_assert_eq!(spectrum.len(), self.0.n);
        let mut buf: Vec<Complex64> = spectrum
            .iter()
            .enumerate()
            .map(|(i, &v)| if i % 2 == 0 { v } else { -v })
            .collect();
        self.0.inverse.process(&mut buf);
        let scale = 1.0 / self.0.length;
        buf.iter().map(|v| v.re * scale).collect()
    }
}

/// Real-valued function sampled on a [`Grid`], with the spectrum computed on
/// demand and then cached. Immutable after construction: every operation
/// returns a fresh field, so concurrent reads are safe.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Grid,
    samples: OnceLock<Vec<f64>>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl Field {
    pub fn from_samples(grid: Grid, samples: Vec<f64>) -> Result<Self, GridError> {
        if samples.len() != grid.n() {
            return Err(GridError::LengthMismatch {
                got: samples.len(),
                expected: grid.n(),
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(GridError::NonFinite);
        }
        let cell = OnceLock::new();
        cell.set(samples).unwrap();
        Ok(Field {
            grid,
            samples: cell,
            spectrum: OnceLock::new(),
        })
    }

    /// Build a field from spectral data. The spectrum must be Hermitian
    /// symmetric (`F_{-k} = conj(F_k)`, real zero and Nyquist modes) so that
    /// the samples come out real.
    pub fn from_spectrum(grid: Grid, spectrum: Vec<Complex64>) -> Result<Self, GridError> {
        if spectrum.len() != grid.n() {
            return Err(GridError::LengthMismatch {
                got: spectrum.len(),
                expected: grid.n(),
            });
        }
        if spectrum.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(GridError::NonFinite);
        }
        let n = grid.n();
        let scale: f64 = spectrum.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            let mut asym: f64 = spectrum[0].im.abs().max(spectrum[n / 2].im.abs());
            for i in 1..n / 2 {
                asym = asym.max((spectrum[i] - spectrum[n - i].conj()).norm() * 0.5);
            }
            if asym > 1e-10 * scale {
                return Err(GridError::NotHermitian(asym / scale));
            }
        }
        let cell = OnceLock::new();
        cell.set(spectrum).unwrap();
        Ok(Field {
            grid,
            samples: OnceLock::new(),
            spectrum: cell,
        })
    }

    pub fn zero(grid: Grid) -> Self {
        let n = grid.n();
        Field::from_samples(grid, vec![0.0; n]).unwrap()
    }

    /// Internal constructor that skips validation so non-finite values can
    /// flow through solver internals and be caught as blow-up at step level.
    pub(crate) fn from_spectrum_unchecked(grid: Grid, spectrum: Vec<Complex64>) -> Self {
        let cell = OnceLock::new();
        cell.set(spectrum).unwrap();
        Field {
            grid,
            samples: OnceLock::new(),
            spectrum: cell,
        }
    }

    pub(crate) fn from_samples_unchecked(grid: Grid, samples: Vec<f64>) -> Self {
        let cell = OnceLock::new();
        cell.set(samples).unwrap();
        Field {
            grid,
            samples: cell,
            spectrum: OnceLock::new(),
        }
    }

    /// Sample a function of the box coordinate.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self, GridError> {
        let samples: Vec<f64> = grid.points().iter().map(|&x| f(x)).collect();
        Field::from_samples(grid, samples)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        self.samples
            .get_or_init(|| self.grid.inverse(self.spectrum.get().expect("field holds no data")))
    }

    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum
            .get_or_init(|| self.grid.forward(self.samples.get().expect("field holds no data")))
    }

    /// `L^2` norm `(sum f^2 dx)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        if let Some(s) = self.samples.get() {
            (s.iter().map(|v| v * v).sum::<f64>() * self.grid.dx()).sqrt()
        } else {
            let sp = self.spectrum();
            (sp.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.grid.length()).sqrt()
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        if let Some(sp) = self.spectrum.get() {
            sp[0].re / self.grid.length()
        } else {
            self.samples().iter().sum::<f64>() / self.grid.n() as f64
        }
    }

    /// Pointwise sum; grids must match.
    pub fn add(&self, other: &Field) -> Field {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let samples: Vec<f64> = self
            .samples()
            .iter()
            .zip(other.samples())
            .map(|(a, b)| a + b)
            .collect();
        Field::from_samples_unchecked(self.grid.clone(), samples)
    }

    pub fn sub(&self, other: &Field) -> Field {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let samples: Vec<f64> = self
            .samples()
            .iter()
            .zip(other.samples())
            .map(|(a, b)| a - b)
            .collect();
        Field::from_samples_unchecked(self.grid.clone(), samples)
    }

    pub fn scale(&self, c: f64) -> Field {
        let samples: Vec<f64> = self.samples().iter().map(|v| c * v).collect();
        Field::from_samples_unchecked(self.grid.clone(), samples)
    }

    /// Pointwise multiplication by a function of the box coordinate.
    pub fn mul_coord(&self, w: impl Fn(f64) -> f64) -> Field {
        let samples: Vec<f64> = self
            .samples()
            .iter()
            .zip(self.grid.points())
            .map(|(v, &x)| v * w(x))
            .collect();
        Field::from_samples_unchecked(self.grid.clone(), samples)
    }

    /// Distance `||self - other||_{L^2}`.
    pub fn l2_distance(&self, other: &Field) -> f64 {
        self.sub(other).l2_norm()
    }
}
