// exploratory calibration runs; not part of the deliverable
use fkdv_core::*;
use std::time::Instant;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    let p = DispersionParams::new(-2.25).unwrap();
    match which.as_str() {
        "wc" => {
            // criterion 2: weight commutation residual
            for a in [-2.25, -2.4] {
                let p = DispersionParams::new(a).unwrap();
                let g = Grid::new(4096, 64.0 * std::f64::consts::PI).unwrap();
                let f = Field::from_fn(g, |x| (-x * x / 4.0).exp() * (8.0 * x).cos()).unwrap();
                for t in [0.5, 1.0] {
                    for mu in [0.0, 0.05] {
                        let t0 = Instant::now();
                        let r = weight_commutation_residual(&f, t, &p, mu);
                        println!("a={a} t={t} mu={mu}: {:?} ({:?})", r, t0.elapsed());
                    }
                }
            }
        }
        "stein1" => {
            // single stein eval timing + golden values
            let q = QuadConfig::default();
            let t0 = Instant::now();
            let v = stein_derivative(|y| (-y * y).exp(), 0.5, 0.0, &q).unwrap();
            println!("D^0.5 gauss at 0: {v:.12} ({:?})", t0.elapsed());
            let t0 = Instant::now();
            let v2 = stein_derivative(|y| (-y * y).exp(), 0.5, 0.0, &q.refined()).unwrap();
            println!("refined:          {v2:.12} ({:?})", t0.elapsed());
            for b in [0.25, 0.5, 0.75] {
                println!("C_{b} = {:.10}", gagliardo_constant(b).unwrap());
            }
        }
        "sf" => {
            // criterion 4: identity both sides
            let q = QuadConfig::default();
            for b in [0.25, 0.5, 0.75] {
                let t0 = Instant::now();
                let (lhs, rhs) = fkdv_core::experiments::stein_fourier_sides(b, &q);
                println!(
                    "b={b}: lhs={lhs:.8} rhs={rhs:.8} rel={:.3e} ({:?})",
                    (lhs - rhs).abs() / rhs,
                    t0.elapsed()
                );
            }
        }
        "phase" => {
            // criterion 5 sweep timing
            let xs = logspace(0.05, 50.0, 40);
            let q = QuadConfig::default();
            let t0 = Instant::now();
            for b in [0.3, 0.6, 0.9] {
                for t in [0.5, 1.0, 2.0, 5.0] {
                    let r1 = phase_bound_ratio(&p, b, t, &xs, &q).unwrap();
                    let r2 = phase_bound_ratio(&p, b, t, &xs, &q.refined()).unwrap();
                    println!(
                        "b={b} t={t}: max={:.6} at {:.3}; refined max={:.6}; drift {:.4}",
                        r1.max_ratio,
                        r1.argmax,
                        r2.max_ratio,
                        r1.max_ratio / r2.max_ratio
                    );
                }
            }
            println!("total {:?}", t0.elapsed());
        }
        "noninteg" => {
            let deltas = fkdv_core::experiments::halving_cutoffs(1e-1, 1e-4);
            let q = QuadConfig::default();
            let t0 = Instant::now();
            for b in [0.6, 0.4, 0.2] {
                let r = nonintegrability_probe(&p, b, 1.0, 2.0, &deltas, &q).unwrap();
                println!("b={b}: {:?}", r.class);
                for (d, v) in &r.rows {
                    print!(" {d:.1e}:{v:.5}");
                }
                println!();
            }
            println!("total {:?}", t0.elapsed());
        }
        "cons" => {
            // criterion 3: conservation, dt halving
            let g = Grid::new(1024, 32.0 * std::f64::consts::PI).unwrap();
            let phi = Field::from_fn(g.clone(), |x| 0.2 * (-x * x).exp()).unwrap();
            for dt in [0.5 / 4.0, 0.5 / 8.0, 0.5 / 16.0, 0.5 / 32.0, 0.5/64.0] {
                let mut cfg = SolveConfig::new(p, 0.5, dt);
                cfg.store_every = 1000;
                let t0 = Instant::now();
                let traj = evolve(&phi, &cfg).unwrap();
                let m0 = traj.diagnostics[0].mass;
                let e0 = traj.diagnostics[0].energy;
                let md = traj
                    .diagnostics
                    .iter()
                    .map(|d| (d.mass - m0).abs() / m0)
                    .fold(0.0, f64::max);
                let ed = traj
                    .diagnostics
                    .iter()
                    .map(|d| (d.energy - e0).abs() / e0.abs())
                    .fold(0.0, f64::max);
                println!("dt={dt:.6}: mass drift {md:.3e}, energy drift {ed:.3e} ({:?})", t0.elapsed());
            }
        }
        "mu" => {
            let g = Grid::new(1024, 32.0 * std::f64::consts::PI).unwrap();
            let phi = Field::from_fn(g.clone(), |x| 0.5 * (-x * x).exp() * (4.0 * x).cos()).unwrap();
            let cfg = SolveConfig::new(p, 0.25, 0.25 / 128.0);
            let t0 = Instant::now();
            let table = mu_continuation(&phi, &[1e-1, 1e-2, 1e-3, 1e-4], &cfg).unwrap();
            for ((a, b), d) in &table.rows {
                println!("mu {a} -> {b}: {d:.6e}");
            }
            println!("decreasing: {} ({:?})", table.strictly_decreasing(), t0.elapsed());
        }
        "sweep" => {
            // criterion 9: bump datum dichotomy
            let spec = ExperimentSpec {
                name: "decay".into(),
                params: p,
                datum: DatumRecipe::counterexample_bump(),
                ladder: GridLadder {
                    base_length: 512.0 * std::f64::consts::PI,
                    base_points: 8192,
                    rungs: 4,
                },
                thetas: vec![0.3, 0.5],
                times: vec![1.0],
                solver: SolverSettings {
                    nonlinear: false,
                    dt: 1.0 / 128.0,
                    store_every: 128,
                    ..SolverSettings::with_horizon(1.0)
                },
            };
            let t0 = Instant::now();
            let rep = decay_threshold_sweep(&spec).unwrap();
            for row in &rep.rows {
                println!(
                    "{} theta={} t={}: {:?} {:?}",
                    row.label, row.theta, row.t, row.values, row.class
                );
            }
            println!("total {:?}", t0.elapsed());
            // small-amplitude nonlinear variant
            let mut spec2 = spec.clone();
            spec2.datum = DatumRecipe::BumpSpectrum {
                center: 0.0,
                width: 2.0,
                amplitude: 0.1,
            };
            spec2.solver.nonlinear = true;
            let t0 = Instant::now();
            let rep = decay_threshold_sweep(&spec2).unwrap();
            for row in &rep.rows {
                println!(
                    "NL {} theta={} t={}: {:?} {:?}",
                    row.label, row.theta, row.t, row.values, row.class
                );
            }
            println!("nonlinear total {:?}", t0.elapsed());
        }
        "extra" => {
            // criterion 10
            let spec = ExperimentSpec {
                name: "extra".into(),
                params: p,
                datum: DatumRecipe::gaussian_packet(0.05, 8.0),
                ladder: GridLadder {
                    base_length: 64.0 * std::f64::consts::PI,
                    base_points: 8192,
                    rungs: 4,
                },
                thetas: vec![1.15, 1.2],
                times: vec![0.5],
                solver: SolverSettings {
                    dt: 0.5 / 256.0,
                    store_every: 4,
                    ..SolverSettings::with_horizon(0.5)
                },
            };
            let t0 = Instant::now();
            let rep = extra_decay_check(&spec).unwrap();
            for row in &rep.rows {
                println!(
                    "{} theta={} t={}: {:?} {:?}",
                    row.label, row.theta, row.t, row.values, row.class
                );
            }
            println!("total {:?}", t0.elapsed());
        }
        "ucpc" => {
            // critical vanishing probe feasibility
            for amp in [0.4] {
                for (t1, t2) in [(0.2, 0.6)] {
                    let spec = ExperimentSpec {
                        name: "ucpc".into(),
                        params: p,
                        datum: DatumRecipe::BumpSpectrum {
                            center: 2.0,
                            width: 1.5,
                            amplitude: amp,
                        },
                        ladder: GridLadder {
                            base_length: 32.0 * std::f64::consts::PI,
                            base_points: 1024,
                            rungs: 4,
                        },
                        thetas: vec![],
                        times: vec![t1, t2],
                        solver: SolverSettings {
                            dt: 1.0 / 256.0,
                            store_every: 64,
                            ..SolverSettings::with_horizon(t2)
                        },
                    };
                    let t0 = Instant::now();
                    match ucp_critical_vanishing_probe(&spec) {
                        Ok(rep) => {
                            println!("amp={amp} t=({t1},{t2})  mech: {:?}", rep.mechanism.class);
                            for row in &rep.critical_rows {
                                println!(
                                    "  {} theta={:.2} t={}: {:?} {:?}",
                                    row.label, row.theta, row.t, row.values, row.class
                                );
                            }
                        }
                        Err(e) => println!("amp={amp}: {e}"),
                    }
                    println!("  ({:?})", t0.elapsed());
                }
            }
        }
        "ucp2" => {
            let spec = ExperimentSpec {
                name: "ucp2".into(),
                params: p,
                datum: DatumRecipe::gaussian_packet(1.0, 8.0),
                ladder: GridLadder {
                    base_length: 64.0 * std::f64::consts::PI,
                    base_points: 2048,
                    rungs: 4,
                },
                thetas: vec![1.3],
                times: vec![],
                solver: SolverSettings::with_horizon(1.0),
            };
            let rep = ucp_two_time_probe(&spec, 0.25, 0.75).unwrap();
            for row in rep.identity_rows.iter().chain(&rep.condition_rows) {
                println!(
                    "{} theta={} t={}: {:?} {:?}",
                    row.label, row.theta, row.t, row.values, row.class
                );
            }
            let mut spec2 = spec.clone();
            spec2.datum = DatumRecipe::counterexample_bump();
            let rep = ucp_two_time_probe(&spec2, 0.25, 0.75).unwrap();
            println!("bump datum:");
            for row in rep.identity_rows.iter().chain(&rep.condition_rows) {
                println!(
                    "{} theta={} t={}: {:?} {:?}",
                    row.label, row.theta, row.t, row.values, row.class
                );
            }
        }
        "battery" => {
            let t0 = Instant::now();
            let rep = bounds_battery(&p);
            for c in &rep.checks {
                println!("{}: {}", c.name, if c.pass { "PASS" } else { "FAIL" });
                if !c.pass {
                    println!("   {}", c.details);
                    for (k, v) in &c.metrics {
                        println!("   {k} = {v:.6e}");
                    }
                }
            }
            println!("all_pass={} ({:?})", rep.all_pass(), t0.elapsed());
        }
        other => println!("unknown probe '{other}'"),
    }
}
