use std::sync::Arc;

use irlab::fit::fit_line;
use irlab::fock::*;
use irlab::nrqed::*;
use irlab::spectral::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid3(ir: f64, polarized: bool) -> GridSpec {
    GridSpec {
        dimension: 3,
        ir_cutoff: ir,
        uv_cutoff: 1.0,
        points_per_decade: 2,
        directions: DirectionSet::Axes6,
        polarized,
    }
}

fn electron(e: f64, ir: f64) -> NelsonFiberParams {
    NelsonFiberParams {
        mass: 1.0,
        coupling: e,
        profile: ChargeProfile::Electron { rho0: 1.0, cutoff: 1.0 },
        variant: CouplingVariant::Scalar,
        grid: grid3(ir, false),
        max_total: 3,
        max_per_mode: 3,
    }
}

fn opts() -> LanczosOptions {
    LanczosOptions {
        tol: 1e-11,
        ..LanczosOptions::default()
    }
}

const P: [f64; 3] = [0.0, 0.0, 0.3];

#[test]
fn free_fiber_is_exact() {
    let params = electron(0.0, 0.1);
    let model = FiberModel::new(params.clone()).unwrap();
    for p in [[0.0, 0.0, 0.0], P, [0.0, -0.2, 0.45]] {
        let e = ground_state(&model, &p, &opts()).unwrap().eigenvalue;
        let exact = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0;
        assert!((e - exact).abs() < 1e-12, "{e} vs {exact}");
    }
    let v = velocity(&model, &P, &opts()).unwrap();
    assert!((v.velocity[2] - 0.3).abs() < 1e-10 && v.velocity[0] == 0.0 && v.velocity[1] == 0.0);
    let h = fiber_hamiltonian(&params, &P).unwrap();
    let lowest = dense_lowest(&h).unwrap().eigenvalue;
    assert!((lowest - 0.045).abs() < 1e-12);
}

#[test]
fn single_mode_two_level_closed_form() {
    let (e, c, m) = (0.3, 0.7, 2.0);
    let grid = Arc::new(
        ModeGrid::from_modes(
            1,
            vec![Mode {
                index: 0,
                momentum: [1.0, 0.0, 0.0],
                polarization: None,
                weight: 1.0,
            }],
            0.5,
            1.0,
        )
        .unwrap(),
    );
    let params = NelsonFiberParams {
        mass: m,
        coupling: e,
        profile: ChargeProfile::Flat { rho0: c * 2f64.sqrt() },
        variant: CouplingVariant::Scalar,
        grid: GridSpec {
            dimension: 1,
            ir_cutoff: 0.5,
            uv_cutoff: 1.0,
            points_per_decade: 1,
            directions: DirectionSet::Line,
            polarized: false,
        },
        max_total: 1,
        max_per_mode: 1,
    };
    let model = FiberModel::with_grid(params, grid).unwrap();
    let h = model.fiber_operator(&[0.0; 3]).unwrap().to_sparse().unwrap();
    assert_eq!(h.dim(), 2);
    let a = 1.0 + 1.0 / (2.0 * m);
    let exact = 0.5 * (a - (a * a + 4.0 * e * e * c * c).sqrt());
    assert!((dense_lowest(&h).unwrap().eigenvalue - exact).abs() < 1e-14);
    let lanczos = lowest_eigenpair(&h, 1e-12, 100, 0).unwrap().eigenvalue;
    assert!((lanczos - exact).abs() < 1e-12);
}

#[test]
fn random_fibers_are_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..6 {
        let variant = match trial % 3 {
            0 => CouplingVariant::Scalar,
            1 => CouplingVariant::Transversal { a_squared: true },
            _ => CouplingVariant::Transversal { a_squared: false },
        };
        let params = NelsonFiberParams {
            mass: rng.random_range(0.5..3.0),
            coupling: rng.random_range(-1.0..1.0),
            profile: if rng.random_bool(0.5) {
                ChargeProfile::Electron { rho0: 1.0, cutoff: 1.0 }
            } else {
                ChargeProfile::Atom { rho0: 2.0, cutoff: 1.0 }
            },
            variant,
            grid: grid3(0.3, !matches!(variant, CouplingVariant::Scalar)),
            max_total: 2,
            max_per_mode: 2,
        };
        let p = [rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)];
        let h = fiber_hamiltonian(&params, &p).unwrap();
        assert!(h.is_hermitian());
        assert!(h.hermiticity_defect() <= 1e-12);
    }
}

#[test]
fn dispersion_is_even_on_symmetric_grids() {
    let model = FiberModel::new(electron(0.4, 0.1)).unwrap();
    for p in [P, [0.2, -0.1, 0.35]] {
        let minus = [-p[0], -p[1], -p[2]];
        let a = ground_state(&model, &p, &opts()).unwrap().eigenvalue;
        let b = ground_state(&model, &minus, &opts()).unwrap().eigenvalue;
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn second_order_error_is_quartic() {
    let couplings = [1e-3, 2e-3, 4e-3];
    let mut errors = Vec::new();
    for e in couplings {
        let model = FiberModel::new(electron(e, 0.1)).unwrap();
        assert!(model.basis().len() <= 512);
        let h = model.fiber_operator(&[0.0; 3]).unwrap().to_sparse().unwrap();
        let exact = dense_lowest(&h).unwrap().eigenvalue;
        errors.push((exact - second_order_energy(&model, &[0.0; 3]).unwrap()).abs());
    }
    let x: Vec<f64> = couplings.iter().map(|e| e.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let fit = fit_line(&x, &y).unwrap();
    assert!(fit.slope >= 3.5, "error exponent {} ({errors:?})", fit.slope);
}

#[test]
fn transversal_second_order_energy() {
    for a_squared in [true, false] {
        let mut params = electron(2e-3, 0.1);
        params.variant = CouplingVariant::Transversal { a_squared };
        params.grid.polarized = true;
        params.max_total = 2;
        let model = FiberModel::new(params).unwrap();
        let e = ground_state(&model, &P, &opts()).unwrap().eigenvalue;
        let e2 = second_order_energy(&model, &P).unwrap();
        assert!((e - e2).abs() < 1e-10, "{e} vs {e2}");
        assert!((e2 - 0.045).abs() > 1e-8);
    }
}

#[test]
fn tabulated_group_velocity() {
    let params = electron(0.0, 0.1);
    let line: Vec<[f64; 3]> = (-3..=3).map(|j| [0.0, 0.0, 0.1 * j as f64]).collect();
    let table = dispersion(&params, &line, &opts(), 1).unwrap();
    for (i, p) in line.iter().enumerate().take(6).skip(1) {
        let v = group_velocity(&table, i).unwrap();
        assert!((v[2] - p[2]).abs() < 1e-10);
    }
    assert!(table.velocities[0].is_none() && table.velocities[6].is_none());
    assert!(matches!(group_velocity(&table, 0), Err(irlab::Error::Range { .. })));
    assert!(matches!(group_velocity(&table, 6), Err(irlab::Error::Range { .. })));

    let coupled = dispersion(&electron(0.5, 0.1), &line, &opts(), 2).unwrap();
    assert!(coupled.failures.iter().all(Option::is_none));
    let v0 = group_velocity(&coupled, 3).unwrap();
    assert!(v0.iter().all(|x| x.abs() < 1e-9), "{v0:?}");
    assert!(coupled.energies.iter().all(|&e| e >= coupled.energies[3] - 1e-12));
}

#[test]
fn velocity_richardson_bound_holds() {
    let model = FiberModel::new(electron(0.5, 0.1)).unwrap();
    let est = velocity(&model, &P, &opts()).unwrap();
    assert!(est.bound > 0.0);
    let h = 2.5e-3;
    let e = |z: f64| ground_state(&model, &[0.0, 0.0, z], &opts()).unwrap().eigenvalue;
    let fine = (e(0.3 + h) - e(0.3 - h)) / (2.0 * h);
    assert!((est.velocity[2] - fine).abs() <= est.bound, "{} {fine} {}", est.velocity[2], est.bound);
    assert!(est.velocity[2] < 0.3);
}

#[test]
fn cloud_vanishing_cases_and_domain() {
    let model = FiberModel::new(electron(0.0, 0.1)).unwrap();
    let f = cloud_function(&model, &[0.0, 0.0, 0.3]).unwrap();
    assert_eq!(f.norm_sqr(), 0.0);
    let mut params = electron(0.7, 0.1);
    params.variant = CouplingVariant::Transversal { a_squared: true };
    params.grid.polarized = true;
    let model = FiberModel::new(params).unwrap();
    assert_eq!(cloud_function(&model, &[0.0; 3]).unwrap().norm_sqr(), 0.0);
    assert!(cloud_function(&model, &[0.0, 0.0, 0.3]).unwrap().norm_sqr() > 0.0);
    assert!(matches!(cloud_function(&model, &[0.0, 0.0, 1.0]), Err(irlab::Error::Domain(_))));
    assert!(matches!(cloud_function(&model, &[0.8, 0.7, 0.0]), Err(irlab::Error::Domain(_))));
}

#[test]
fn cloud_norm_diverges_logarithmically() {
    let (e, v) = (0.5, 0.3);
    let mut params = electron(e, 1e-4);
    params.grid.points_per_decade = 6;
    params.grid.directions = DirectionSet::GaussProduct { polar: 12, azimuthal: 4 };
    params.max_total = 1;
    params.max_per_mode = 1;
    let model = FiberModel::new(params).unwrap();
    let f = cloud_function(&model, &[0.0, 0.0, v]).unwrap();
    let lambdas: Vec<f64> = (0..=6).map(|j| 10f64.powf(-1.0 - 0.5 * j as f64)).collect();
    let x: Vec<f64> = lambdas.iter().map(|l| (1.0 / l).ln()).collect();
    let y: Vec<f64> = lambdas.iter().map(|&l| f.shell_norm_sqr(l, 1.0)).collect();
    let fit = fit_line(&x, &y).unwrap();
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    assert!(fit.rms_residual < 0.01 * mean, "{fit:?}");
    // ∫ d³k e²ρ̃²/(2|k|³(1 − k̂·v)²) grows like 2π e² log(Λ/λ)/(1 − v²)
    let slope = 2.0 * std::f64::consts::PI * e * e / (1.0 - v * v);
    assert!((fit.slope - slope).abs() < 0.02 * slope, "{} vs {slope}", fit.slope);
    // direct radial quadrature of the same shell with the exact angular factor
    let radial = irlab::quad::integrate(
        |k| {
            let rho = (1.0 - k * k).powi(2);
            slope * rho * rho / k
        },
        1e-4,
        1.0,
        Default::default(),
    )
    .unwrap();
    let total = f.norm_sqr();
    assert!((total - radial.value).abs() < 0.01 * radial.value, "{total} vs {}", radial.value);
}

#[test]
fn free_dressing_is_identity() {
    let model = FiberModel::new(electron(0.0, 0.1)).unwrap();
    let d = dressed_hamiltonian(&model, &P, 1e-8, &opts()).unwrap();
    assert_eq!(d.leakage, 0.0);
    let h = model.fiber_operator(&P).unwrap().to_sparse().unwrap();
    assert_eq!(d.operator.to_sparse().unwrap(), h);
}

#[test]
fn dressing_preserves_the_ground_energy() {
    let model = FiberModel::new(electron(0.1, 0.1)).unwrap();
    let tol = 1e-11;
    let d = dressed_hamiltonian(&model, &P, 1e-2, &opts()).unwrap();
    let e = ground_state(&model, &P, &opts()).unwrap().eigenvalue;
    let ew = lowest_eigenpair(&d.operator, tol, 20000, 0).unwrap().eigenvalue;
    assert!((e - ew).abs() <= d.leakage + 10.0 * tol, "{e} {ew} leakage {}", d.leakage);
    assert!(matches!(
        dressed_hamiltonian(&model, &P, 1e-30, &opts()),
        Err(irlab::Error::Leakage { .. })
    ));
}

#[test]
fn free_scan_rows() {
    let rows = ir_scan(&electron(0.0, 0.1), &P, &[0.1, 0.01], &ScanOptions::default()).unwrap();
    for row in rows {
        let row = row.unwrap();
        assert!(row.mean_photon_number < 1e-12);
        assert!((row.vacuum_overlap - 1.0).abs() < 1e-12);
        assert!(row.dressed_mean_photon_number < 1e-12);
    }
    assert!(ir_scan(&electron(0.0, 0.1), &P, &[0.01, 0.1], &ScanOptions::default()).is_err());
}

#[test]
fn electron_cloud_grows_while_dressed_cloud_does_not() {
    let schedule = [10f64.powf(-1.5), 1e-2, 10f64.powf(-2.5)];
    let rows: Vec<IrScanRow> = ir_scan(&electron(0.025, 0.1), &P, &schedule, &ScanOptions::default())
        .unwrap()
        .into_iter()
        .map(|r| r.unwrap())
        .collect();
    for w in rows.windows(2) {
        assert!(w[1].mean_photon_number > w[0].mean_photon_number);
        assert!(w[1].cloud_norm_sqr > w[0].cloud_norm_sqr);
    }
    for r in &rows {
        assert!(r.dressed_mean_photon_number < r.mean_photon_number);
        assert!(r.vacuum_overlap <= 1.0 && r.vacuum_overlap > 0.0);
    }
}

#[test]
fn scans_do_not_depend_on_thread_count() {
    let schedule = [0.1, 10f64.powf(-1.5)];
    let run = |threads| {
        ir_scan(
            &electron(0.05, 0.1),
            &P,
            &schedule,
            &ScanOptions {
                threads,
                ..ScanOptions::default()
            },
        )
        .unwrap()
        .into_iter()
        .map(|r| r.unwrap())
        .collect::<Vec<_>>()
    };
    let one = run(1);
    let four = run(4);
    for (a, b) in one.iter().zip(&four) {
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.mean_photon_number.to_bits(), b.mean_photon_number.to_bits());
        assert_eq!(a.dressed_mean_photon_number.to_bits(), b.dressed_mean_photon_number.to_bits());
    }
}

fn approx_vectors(e: f64) -> ApproximatingVectors {
    ApproximatingVectors::new(FiberModel::new(electron(e, 0.1)).unwrap(), &P, ApproxOptions::default()).unwrap()
}

#[test]
fn approximating_vectors_at_time_zero() {
    let av = approx_vectors(0.3);
    let w = WeylOperator::new(av.model().basis(), av.cloud()).unwrap();
    let expected = w.apply(&av.ground().eigenvector).unwrap();
    assert!(av.cfp(0.0).unwrap().vector.distance(&expected) < 1e-12);
    assert!(av.bdg(0.0).unwrap().vector.distance(&av.dressed_ground().eigenvector) < 1e-12);
}

#[test]
fn free_approximating_vectors_stay_in_the_vacuum() {
    let av = approx_vectors(0.0);
    let vacuum = FockVector::vacuum(av.model().basis().len());
    for t in [0.0, 1.0, 4.0] {
        assert!(av.cfp(t).unwrap().vector.phase_quotient_distance(&vacuum) < 1e-10);
        assert!(av.bdg(t).unwrap().vector.phase_quotient_distance(&vacuum) < 1e-10);
    }
}

#[test]
fn cauchy_distances_ignore_dollard_phases() {
    let av = approx_vectors(0.3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut random = || DollardPhases {
        c_p: rng.random_range(-10.0..10.0),
        gamma_prime: rng.random_range(-10.0..10.0),
        gamma_double_prime: rng.random_range(-10.0..10.0),
        gamma: rng.random_range(-10.0..10.0),
    };
    for kind in [ApproxKind::Cfp, ApproxKind::Bdg] {
        let base = av.cauchy_residuals(kind, &[1.0, 2.0, 4.0]).unwrap();
        let shuffled: Vec<ApproxVector> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&t| av.vector(kind, t, &random()).unwrap())
            .collect();
        for (a, b) in base.iter().zip(consecutive_distances(&shuffled)) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}

#[test]
fn bdg_cloud_norm_stays_bounded() {
    let mut bdg = Vec::new();
    let mut plain = Vec::new();
    for lambda in [1e-1, 1e-2, 1e-3] {
        let model = FiberModel::new(electron(0.3, lambda)).unwrap();
        let f = cloud_function(&model, &P).unwrap();
        bdg.push(bdg_cloud_norm_sqr(&f, 4.0));
        plain.push(f.norm_sqr());
    }
    assert!(plain[2] > 1.5 * plain[0]);
    assert!((bdg[2] - bdg[0]).abs() < 0.1 * bdg[0], "{bdg:?}");
    assert!((bdg[2] - bdg[1]).abs() < 0.05 * (bdg[1] - bdg[0]).abs(), "{bdg:?}");
    assert_eq!(bdg_cloud_norm_sqr(&cloud_function(&FiberModel::new(electron(0.3, 0.1)).unwrap(), &P).unwrap(), 0.0), 0.0);
}

#[test]
fn capacity_errors_surface() {
    let mut params = electron(0.1, 1e-6);
    params.max_total = 12;
    params.max_per_mode = 12;
    assert!(matches!(FiberModel::new(params), Err(irlab::Error::Capacity { .. })));
}

#[test]
fn invalid_parameters_are_rejected() {
    let mut params = electron(0.1, 0.1);
    params.mass = 0.0;
    assert!(FiberModel::new(params).is_err());
    let mut params = electron(0.1, 0.1);
    params.variant = CouplingVariant::Transversal { a_squared: true };
    assert!(FiberModel::new(params).is_err());
    let mut params = electron(0.1, 0.1);
    params.profile = ChargeProfile::Electron { rho0: 1.0, cutoff: 0.5 };
    assert!(FiberModel::new(params).is_err());
    let model = FiberModel::new(electron(0.1, 0.1)).unwrap();
    assert!(model.fiber_operator(&[f64::NAN, 0.0, 0.0]).is_err());
}
