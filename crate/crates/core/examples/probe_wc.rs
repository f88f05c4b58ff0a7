// temporary: compute golden values for freezing into tests
use fkdv_core::*;
use num_complex::Complex64;

fn direct_dft(samples: &[f64], length: f64) -> Vec<Complex64> {
    let n = samples.len();
    let dx = length / n as f64;
    (0..n).map(|i| {
        let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
        let xi = 2.0 * std::f64::consts::PI * k / length;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &v) in samples.iter().enumerate() {
            let x = -0.5 * length + j as f64 * dx;
            acc += Complex64::new(v * (-xi * x).cos(), v * (-xi * x).sin());
        }
        acc * dx
    }).collect()
}

fn main() {
    let p = DispersionParams::new(-2.25).unwrap();
    // 1. D^{-5/4} mean-removed gaussian at x=0, L=64pi n=2048 (production + direct oracle)
    let g = Grid::new(2048, 64.0 * std::f64::consts::PI).unwrap();
    let raw = Field::from_fn(g.clone(), |x| (-x * x).exp()).unwrap();
    let m = raw.mean();
    let f = Field::from_fn(g.clone(), move |x| (-x * x).exp() - m).unwrap();
    let d = fractional_derivative(&f, -1.25, ZeroModePolicy::Annihilate).unwrap();
    let j0 = g.n() / 2; // x = 0 exactly
    assert_eq!(g.points()[j0], 0.0);
    println!("frac_deriv golden (production) = {:.15e}", d.samples()[j0]);
    // oracle: direct dft -> multiply -> direct value at x=0
    let sp = direct_dft(f.samples(), g.length());
    let mut acc = 0.0;
    for (i, v) in sp.iter().enumerate() {
        let xi: f64 = g.freqs()[i];
        if xi != 0.0 {
            // e^{i xi 0} = 1
            acc += (v * xi.abs().powf(-1.25)).re;
        }
    }
    acc /= g.length();
    println!("frac_deriv golden (direct oracle) = {:.15e}", acc);

    // 2. energy golden, same mean-removed gaussian
    println!("energy golden (production) = {:.15e}", energy(&f, &p));
    let quad: f64 = sp.iter().zip(g.freqs()).filter(|(_, &xi)| xi != 0.0)
        .map(|(v, &xi)| xi.abs().powf(-1.25) * v.norm_sqr()).sum::<f64>() / g.length();
    let cubic: f64 = f.samples().iter().map(|v| v * v * v).sum::<f64>() * g.dx();
    println!("energy golden (direct oracle) = {:.15e}", 0.5 * quad - cubic / 6.0);

    // 3. z-norm components, modulated gaussian, theta=1.3 s=2.5, L=64pi n=2048
    let f2 = Field::from_fn(g.clone(), |x| (-x * x).exp() * (8.0 * x).cos()).unwrap();
    let zn = z_norms(&f2, 2.5, 1.3, &p, ZeroModePolicy::Annihilate).unwrap();
    println!("zn sobolev   = {:.15e}", zn.sobolev);
    println!("zn homog     = {:.15e}", zn.homogeneous);
    println!("zn weighted  = {:.15e}", zn.weighted);
    println!("zn cross_wd  = {:.15e}", zn.cross_weighted_derivative.unwrap());
    println!("zn cross_dw  = {:.15e}", zn.cross_derivative_weighted.unwrap());

    // 4. phase bound golden b=0.6 t=1 xs=logspace(0.05,50,200)
    let xs = logspace(0.05, 50.0, 200);
    let r = phase_bound_ratio(&p, 0.6, 1.0, &xs, &QuadConfig::default()).unwrap();
    println!("phase golden max_ratio = {:.12e} at x = {:.12e}", r.max_ratio, r.argmax);
    let r5 = phase_bound_ratio(&p, 0.6, 5.0, &xs, &QuadConfig::default()).unwrap();
    println!("phase t=5 max_ratio = {:.12e}", r5.max_ratio);

    // 5. interpolation golden (2, 1, 0.5) gaussian on L=40 n=256, and n=512
    let g1 = Grid::new(256, 40.0).unwrap();
    let f3 = Field::from_fn(g1, |x| (-x * x).exp()).unwrap();
    println!("interp ratio n=256 = {:.15e}", interpolation_check(&f3, 2.0, 1.0, 0.5).ratio);
    let g2 = Grid::new(512, 40.0).unwrap();
    let f4 = Field::from_fn(g2, |x| (-x * x).exp()).unwrap();
    println!("interp ratio n=512 = {:.15e}", interpolation_check(&f4, 2.0, 1.0, 0.5).ratio);

    // 6. stein far outside support: g = standard bump, b = 1/2, x = 5
    let q = QuadConfig::default();
    let v = stein_derivative(standard_bump, 0.5, 5.0, &q).unwrap();
    println!("stein bump at 5 (production) = {:.12e}", v);

    // 7. low-freq far field x = 100, beta 0.25 theta 0.3
    let lf = low_freq_decay_check(0.25, 0.3, &[100.0], false, &q).unwrap();
    println!("lowfreq at 100: D = {:.12e} product = {:.12e}", lf.rows[0].1 / 100.0f64.powf(0.55), lf.max_product);
    // golden sweep values
    let xs2 = logspace(0.01, 10.0, 100);
    let lf2 = low_freq_decay_check(0.25, 0.3, &xs2, false, &q).unwrap();
    println!("lowfreq sweep max = {:.12e} at {:.6}", lf2.max_product, lf2.argmax);
    let lf3 = low_freq_decay_check(0.25, 0.05, &xs2, false, &q).unwrap();
    println!("lowfreq theta=0.05 max = {:.12e}", lf3.max_product);
}
