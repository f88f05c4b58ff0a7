//! Dispersion exponent and the critical decay exponents derived from it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("dispersion exponent a must lie strictly inside (-5/2, -2), got {0}")]
    OutOfRange(f64),
}

/// Dispersion exponent `a` of the symbol `xi |xi|^{1+a}` together with the
/// decay thresholds it determines.
///
/// The admissible range is the open interval `(-5/2, -2)`, where the
/// derivative in the dispersive term has negative order: strong at low
/// frequency, weak at high frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionParams {
    a: f64,
    theta_low: f64,
    theta_mid: f64,
    theta_max: f64,
    b_crit: f64,
}

impl DispersionParams {
    pub fn new(a: f64) -> Result<Self, ParamError> {
        if !(a > -2.5 && a < -2.0) {
            return Err(ParamError::OutOfRange(a));
        }
        let p = DispersionParams {
            a,
            theta_low: (2.0 + a) / (1.0 + a),
            theta_mid: -3.0 / (2.0 * (1.0 + a)),
            theta_max: (1.0 + 2.0 * a) / (2.0 * (1.0 + a)),
            b_crit: -1.0 / (2.0 * (1.0 + a)),
        };
        // Exponent algebra that must hold throughout the admissible range.
        assert!(0.0 < p.theta_low && p.theta_low < 1.0);
        assert!(1.0 < p.theta_mid && p.theta_mid < p.theta_max && p.theta_max < 1.5);
        assert!(p.b_crit > 1.0 / 3.0 && p.b_crit < 0.5);
        assert!((p.theta_max - 1.0 - p.b_crit).abs() < 1e-12);
        Ok(p)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Order `1 + a` of the fractional derivative in the dispersive term.
    pub fn dispersion_order(&self) -> f64 {
        1.0 + self.a
    }

    /// Minimum homogeneous index for the existence theory.
    pub fn theta_low(&self) -> f64 {
        self.theta_low
    }

    /// Decay ceiling of the contraction theory, `-3/(2(1+a))`.
    pub fn theta_mid(&self) -> f64 {
        self.theta_mid
    }

    /// Absolute decay ceiling, `(1+2a)/(2(1+a))`.
    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    /// Non-integrability threshold for the Stein derivative of the phase,
    /// `-1/(2(1+a)) = theta_max - 1`.
    pub fn b_crit(&self) -> f64 {
        self.b_crit
    }

    /// Dispersion relation `xi |xi|^{1+a} = sgn(xi) |xi|^{2+a}`.
    ///
    /// Diverges as `xi -> 0`; callers must handle the zero mode themselves.
    pub fn phase_symbol(&self, xi: f64) -> f64 {
        xi.signum() * xi.abs().powf(2.0 + self.a)
    }
}

/// What a negative-order multiplier does with the (divergent) zero mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ZeroModePolicy {
    /// Force the multiplier value at `xi = 0` to zero.
    #[default]
    Annihilate,
    /// Error out if the field carries a nonzero mean.
    Reject,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_exponents_at_reference_a() {
        let p = DispersionParams::new(-2.25).unwrap();
        assert!((p.theta_low() - 0.2).abs() < 1e-14);
        assert!((p.theta_mid() - 1.2).abs() < 1e-14);
        assert!((p.theta_max() - 1.4).abs() < 1e-14);
        assert!((p.b_crit() - 0.4).abs() < 1e-14);
    }

    #[test]
    fn rejects_boundary_and_outside_values() {
        assert!(DispersionParams::new(-2.0).is_err());
        assert!(DispersionParams::new(-2.5).is_err());
        assert!(DispersionParams::new(-1.5).is_err());
        assert!(DispersionParams::new(-3.0).is_err());
        assert!(DispersionParams::new(f64::NAN).is_err());
        assert!(DispersionParams::new(-2.0 - 1e-6).is_ok());
    }

    #[test]
    fn b_crit_tends_to_half_near_minus_two() {
        let p = DispersionParams::new(-2.0 - 1e-6).unwrap();
        assert!((p.b_crit() - 0.5).abs() < 1e-5);
        let p = DispersionParams::new(-2.5 + 1e-9).unwrap();
        assert!((p.b_crit() - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn phase_symbol_signs() {
        let p = DispersionParams::new(-2.25).unwrap();
        assert!((p.phase_symbol(1.0) - 1.0).abs() < 1e-15);
        assert!((p.phase_symbol(-1.0) + 1.0).abs() < 1e-15);
        // Negative order: larger magnitude at smaller |xi|.
        assert!(p.phase_symbol(0.1) > p.phase_symbol(10.0));
    }
}
