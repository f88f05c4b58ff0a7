//! Fourier multiplier operators, including the singular negative-order
//! derivatives `D^s` for `s < 0`.

use num_complex::Complex64;
use thiserror::Error;

use crate::grid::Field;
use crate::params::ZeroModePolicy;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("field carries a nonzero mean (|mean|/||f|| = {0:.3e}) under the Reject policy")]
    MeanCarryingField(f64),
    #[error("multiplier is not Hermitian-compatible (asymmetry {0:.3e}); output would not be real")]
    SymmetryViolation(f64),
    #[error("multiplier evaluates to a non-finite value at xi = {0}")]
    NonFiniteMultiplier(f64),
}

/// Relative mean threshold above which the Reject policy refuses a field.
pub const MEAN_REJECT_TOL: f64 = 1e-13;

const HERMITIAN_TOL: f64 = 1e-12;

/// Apply a frequency multiplier `m` to a field: `spectrum_k <- m(xi_k) spectrum_k`.
///
/// `m` must satisfy `m(-xi) = conj(m(xi))` on the lattice so the output stays
/// real; `m(0)` must be real and finite. The unpaired Nyquist mode is zeroed
/// whenever `m` takes a non-real value there, since it cannot participate in
/// a conjugate pair.
pub fn apply_multiplier(
    f: &Field,
    m: impl Fn(f64) -> Complex64,
) -> Result<Field, SpectralError> {
    let grid = f.grid().clone();
    let n = grid.n();
    let freqs = grid.freqs();
    let values: Vec<Complex64> = freqs.iter().map(|&xi| m(xi)).collect();
    for (i, v) in values.iter().enumerate() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(SpectralError::NonFiniteMultiplier(freqs[i]));
        }
    }
    let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let mut asym = values[0].im.abs();
    for i in 1..n / 2 {
        asym = asym.max((values[i] - values[n - i].conj()).norm() * 0.5);
    }
    if asym > HERMITIAN_TOL * scale {
        return Err(SpectralError::SymmetryViolation(asym / scale));
    }

    let spectrum = f.spectrum();
    let out: Vec<Complex64> = (0..n)
        .map(|i| {
            if i == n / 2 && values[i].im != 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                values[i] * spectrum[i]
            }
        })
        .collect();
    // Symmetry holds by construction; skip re-validation so non-finite data
    // (blow-up in progress) passes through instead of panicking here.
    Ok(Field::from_spectrum_unchecked(grid, out))
}

/// Fractional derivative `D^s f = (|xi|^s f^)^v`.
///
/// For `s < 0` the symbol diverges at the origin and `policy` decides what
/// happens to the zero mode.
pub fn fractional_derivative(
    f: &Field,
    s: f64,
    policy: ZeroModePolicy,
) -> Result<Field, SpectralError> {
    if s == 0.0 {
        return Ok(f.clone());
    }
    if s < 0.0 && policy == ZeroModePolicy::Reject {
        let norm = f.l2_norm();
        let mean_mass = f.mean().abs() * f.grid().length().sqrt();
        if mean_mass > MEAN_REJECT_TOL * norm && norm > 0.0 {
            return Err(SpectralError::MeanCarryingField(mean_mass / norm));
        }
    }
    apply_multiplier(f, |xi| {
        if xi == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(xi.abs().powf(s), 0.0)
        }
    })
}

/// Hilbert transform, symbol `-i sgn(xi)` with the zero mode annihilated.
///
/// Skew-symmetric: `<Hf, g> = -<f, Hg>`, so the quadratic form `<Hg, g>`
/// vanishes; this is the cancellation that closes the energy estimates.
/// Note `D = H \partial_x`, equivalently `\partial_x = -H D` (because
/// `H^2 = -I` on mean-free fields).
pub fn hilbert_transform(f: &Field) -> Field {
    apply_multiplier(f, |xi| {
        if xi == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -xi.signum())
        }
    })
    .expect("Hilbert symbol is Hermitian")
}

/// Spatial derivative, symbol `i xi` (Nyquist zeroed to keep outputs real).
pub fn derivative(f: &Field) -> Field {
    apply_multiplier(f, |xi| Complex64::new(0.0, xi)).expect("derivative symbol is Hermitian")
}

/// Bessel potential `J^s f = (<xi>^s f^)^v` with `<xi> = (1 + xi^2)^{1/2}`.
pub fn bessel_potential(f: &Field, s: f64) -> Field {
    apply_multiplier(f, |xi| Complex64::new((1.0 + xi * xi).powf(0.5 * s), 0.0))
        .expect("Bessel symbol is Hermitian")
}

/// Inner product `<f, g> = sum f_j g_j dx`.
pub fn inner_product(f: &Field, g: &Field) -> f64 {
    assert_eq!(f.grid(), g.grid(), "grid mismatch");
    f.samples()
        .iter()
        .zip(g.samples())
        .map(|(a, b)| a * b)
        .sum::<f64>()
        * f.grid().dx()
}
