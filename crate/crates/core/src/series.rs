//! Ladder-series classifier shared by the decay experiments and the
//! truncated-norm probes.

use serde::{Deserialize, Serialize};

/// Plateau tolerance: the final adjacent pair must agree to 1%.
pub const PLATEAU_TOL: f64 = 0.01;
/// Growth tolerance: every doubling must grow the value by at least 5%.
pub const GROWTH_TOL: f64 = 0.05;

/// Verdict for a sequence of truncated-norm values along a doubling ladder.
///
/// `Convergent` is the discrete proxy for membership (the values plateau),
/// `Divergent` for non-membership (steady growth at every doubling). The
/// gray zone is reported as `Inconclusive` rather than forced either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesClass {
    Convergent,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for SeriesClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SeriesClass::Convergent => "CONVERGENT",
            SeriesClass::Divergent => "DIVERGENT",
            SeriesClass::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

/// Classify a ladder series. Deterministic: identical inputs give identical
/// classifications.
pub fn classify(values: &[f64]) -> SeriesClass {
    if values.len() < 2 {
        return SeriesClass::Inconclusive;
    }
    if values.iter().any(|v| !v.is_finite()) {
        return SeriesClass::Divergent;
    }
    let all_growing = values.windows(2).all(|w| {
        let floor = w[0].abs().max(f64::MIN_POSITIVE);
        w[1] > w[0] && (w[1] - w[0]) / floor >= GROWTH_TOL
    });
    if all_growing {
        return SeriesClass::Divergent;
    }
    let last = values[values.len() - 1];
    let prev = values[values.len() - 2];
    let scale = last.abs().max(prev.abs());
    if scale == 0.0 || (last - prev).abs() <= PLATEAU_TOL * scale {
        return SeriesClass::Convergent;
    }
    SeriesClass::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_is_convergent() {
        assert_eq!(classify(&[1.0, 1.2, 1.25, 1.251]), SeriesClass::Convergent);
    }

    #[test]
    fn steady_growth_is_divergent() {
        assert_eq!(classify(&[1.0, 1.19, 1.42, 1.69]), SeriesClass::Divergent);
    }

    #[test]
    fn gray_zone_is_inconclusive() {
        // grows, but not at every rung by 5%, and no final plateau
        assert_eq!(classify(&[1.0, 1.2, 1.22, 1.3]), SeriesClass::Inconclusive);
    }

    #[test]
    fn zeros_are_convergent() {
        assert_eq!(classify(&[0.0, 0.0, 0.0]), SeriesClass::Convergent);
    }

    #[test]
    fn non_finite_is_divergent() {
        assert_eq!(classify(&[1.0, f64::INFINITY]), SeriesClass::Divergent);
    }

    #[test]
    fn too_short_is_inconclusive() {
        assert_eq!(classify(&[1.0]), SeriesClass::Inconclusive);
    }
}
