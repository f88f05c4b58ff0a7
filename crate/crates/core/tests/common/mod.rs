//! Oracle utilities shared by the integration tests. Everything here is an
//! independent computation path: direct DFT sums instead of the FFT, adaptive
//! Gauss quadrature instead of the production shell quadrature, closed forms
//! via the gamma function, and an embedded RK45 stepper.

#![allow(dead_code)]

use num_complex::Complex64;

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
const GL_X: [f64; 4] = [
    0.1834346424956498,
    0.5255324099163290,
    0.7966664774136267,
    0.9602898564975363,
];
const GL_W: [f64; 4] = [
    0.3626837833783620,
    0.3137066458778873,
    0.2223810344533745,
    0.1012285362903763,
];

fn gl8(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..4 {
        acc += GL_W[i] * (f(c + h * GL_X[i]) + f(c - h * GL_X[i]));
    }
    acc * h
}

/// Adaptive Gauss quadrature by interval bisection.
pub fn adaptive_gauss(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = gl8(f, a, m);
        let right = gl8(f, m, b);
        if depth > 40 || (left + right - whole).abs() <= tol {
            return left + right;
        }
        recurse(f, a, m, left, 0.5 * tol, depth + 1) + recurse(f, m, b, right, 0.5 * tol, depth + 1)
    }
    let whole = gl8(&f, a, b);
    recurse(&f, a, b, whole, tol, 0)
}

/// Forward transform by direct summation, independent of the FFT path:
/// `F_k = sum_j f_j e^{-i xi_k x_j} dx` with `x_j = -L/2 + j dx` and the
/// frequency lattice in FFT storage order.
pub fn direct_dft(samples: &[f64], length: f64) -> Vec<Complex64> {
    let n = samples.len();
    let dx = length / n as f64;
    (0..n)
        .map(|i| {
            let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
            let xi = 2.0 * std::f64::consts::PI * k / length;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in samples.iter().enumerate() {
                let x = -0.5 * length + j as f64 * dx;
                let phase = -xi * x;
                acc += Complex64::new(v * phase.cos(), v * phase.sin());
            }
            acc * dx
        })
        .collect()
}

/// Inverse transform by direct summation.
pub fn direct_idft(spectrum: &[Complex64], length: f64) -> Vec<f64> {
    let n = spectrum.len();
    let dx = length / n as f64;
    (0..n)
        .map(|j| {
            let x = -0.5 * length + j as f64 * dx;
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &v) in spectrum.iter().enumerate() {
                let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
                let xi = 2.0 * std::f64::consts::PI * k / length;
                acc += v * Complex64::new((xi * x).cos(), (xi * x).sin());
            }
            acc.re / length
        })
        .collect()
}

/// Closed form for the Gagliardo constant via the gamma function:
/// `C_b = 4 cos(pi b) Gamma(2 - 2b) / (2b (1 - 2b))`, with the removable
/// singularity `C_{1/2} = 2 pi`.
pub fn gagliardo_closed_form(b: f64) -> f64 {
    use statrs::function::gamma::gamma;
    if (b - 0.5).abs() < 1e-9 {
        return 2.0 * std::f64::consts::PI;
    }
    4.0 * (std::f64::consts::PI * b).cos() * gamma(2.0 - 2.0 * b) / (2.0 * b * (1.0 - 2.0 * b))
}

/// Adaptive Runge-Kutta-Fehlberg 4(5) for a scalar ODE `y' = f(t, y)`.
pub fn rkf45(f: impl Fn(f64, f64) -> f64, y0: f64, t0: f64, t1: f64, tol: f64) -> f64 {
    let mut t = t0;
    let mut y = y0;
    let mut h = (t1 - t0) / 64.0;
    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        let k1 = h * f(t, y);
        let k2 = h * f(t + 0.25 * h, y + 0.25 * k1);
        let k3 = h * f(t + 3.0 / 8.0 * h, y + 3.0 / 32.0 * k1 + 9.0 / 32.0 * k2);
        let k4 = h * f(
            t + 12.0 / 13.0 * h,
            y + 1932.0 / 2197.0 * k1 - 7200.0 / 2197.0 * k2 + 7296.0 / 2197.0 * k3,
        );
        let k5 = h * f(
            t + h,
            y + 439.0 / 216.0 * k1 - 8.0 * k2 + 3680.0 / 513.0 * k3 - 845.0 / 4104.0 * k4,
        );
        let k6 = h * f(
            t + 0.5 * h,
            y - 8.0 / 27.0 * k1 + 2.0 * k2 - 3544.0 / 2565.0 * k3 + 1859.0 / 4104.0 * k4
                - 11.0 / 40.0 * k5,
        );
        let y4 = y + 25.0 / 216.0 * k1 + 1408.0 / 2565.0 * k3 + 2197.0 / 4104.0 * k4 - 0.2 * k5;
        let y5 = y + 16.0 / 135.0 * k1 + 6656.0 / 12825.0 * k3 + 28561.0 / 56430.0 * k4
            - 9.0 / 50.0 * k5
            + 2.0 / 55.0 * k6;
        let err = (y5 - y4).abs().max(1e-300);
        let scale = tol * (1.0 + y.abs());
        if err <= scale {
            t += h;
            y = y5;
        }
        h *= 0.9 * (scale / err).powf(0.2);
    }
    y
}

/// Relative difference guarded against a zero reference.
pub fn rel_err(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1e-300)
}
