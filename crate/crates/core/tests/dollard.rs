use irlab::dollard::*;
use irlab::Complex64;

const MASS: f64 = 1.0;

/// Packet of width 8 at the origin moving right with p = 2 on a grid wide
/// enough for t ≤ 128 at dx = 0.25.
fn canonical_packet() -> GridWavefunction {
    GridWavefunction::gaussian(Grid1d::new(-200.0, 600.0, 0.25).unwrap(), 0.0, 8.0, 2.0).unwrap()
}

const LADDER: [f64; 5] = [8.0, 16.0, 32.0, 64.0, 128.0];

#[test]
fn phase_trivial_cases() {
    let v0 = LongRangePotential::regularized_coulomb(0.0, 1.0).unwrap();
    assert_eq!(asymptotic_phase(&v0, 2.0, MASS, 50.0).unwrap(), 0.0);
    let v = LongRangePotential::regularized_coulomb(0.5, 1.0).unwrap();
    assert_eq!(asymptotic_phase(&v, 2.0, MASS, 0.0).unwrap(), 0.0);
    assert!(matches!(asymptotic_phase(&v, 0.0, MASS, 1.0), Err(irlab::Error::Domain(_))));
    assert!(asymptotic_phase(&v, 1.0, MASS, -1.0).is_err());
}

#[test]
fn closed_forms_match_quadrature() {
    let forms = [
        PotentialForm::Coulomb3dRadial,
        PotentialForm::RegularizedCoulomb1d,
        PotentialForm::PowerLaw { exponent: 0.5 },
        PotentialForm::PowerLaw { exponent: 1.0 },
        PotentialForm::PowerLaw { exponent: 3.0 },
    ];
    for form in forms {
        let v = LongRangePotential::new(form, 0.7, 1.5).unwrap();
        for (p, t) in [(0.5, 3.0), (2.0, 40.0), (-1.3, 200.0)] {
            let exact = asymptotic_phase(&v, p, 2.0, t).unwrap();
            let quad = asymptotic_phase_quadrature(&v, p, 2.0, t).unwrap();
            assert!((exact - quad).abs() < 1e-9 * exact.abs().max(1.0), "{form:?}: {exact} vs {quad}");
        }
    }
}

#[test]
fn coulomb_phase_grows_logarithmically() {
    let (e, p) = (0.5, 2.0);
    let v = LongRangePotential::regularized_coulomb(e, 1.0).unwrap();
    let times: Vec<f64> = (0..6).map(|j| 1e3 * 4f64.powi(j)).collect();
    let x: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let y: Vec<f64> = times.iter().map(|&t| asymptotic_phase(&v, p, MASS, t).unwrap()).collect();
    let fit = irlab::fit::fit_line(&x, &y).unwrap();
    let slope = e * MASS / p;
    assert!((fit.slope - slope).abs() < 0.01 * slope);
    let soft = LongRangePotential::new(PotentialForm::Coulomb3dRadial, e, 1.0).unwrap();
    let y: Vec<f64> = times.iter().map(|&t| asymptotic_phase(&soft, p, MASS, t).unwrap()).collect();
    assert!((irlab::fit::fit_line(&x, &y).unwrap().slope - slope).abs() < 0.01 * slope);
    let short = LongRangePotential::power_law(e, 3.0, 1.0).unwrap();
    assert!(!short.is_long_range() && v.is_long_range());
    let a = asymptotic_phase(&short, p, MASS, 1e4).unwrap();
    let b = asymptotic_phase(&short, p, MASS, 1e6).unwrap();
    assert!((a - b).abs() < 1e-8);
}

#[test]
fn modifier_is_unitary_and_invertible() {
    let psi = canonical_packet();
    let k = psi.grid.momenta();
    let hat = psi.momentum_amplitudes();
    let v = LongRangePotential::regularized_coulomb(0.5, 1.0).unwrap();
    let once = dollard_modifier_apply(&hat, &k, &v, MASS, 37.0);
    let norm = |a: &[Complex64]| a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    assert!((norm(&once) - norm(&hat)).abs() < 1e-14);
    let back = dollard_modifier_apply(&once, &k, &v, MASS, -37.0);
    assert!(back.iter().zip(&hat).all(|(a, b)| (a - b).norm() < 1e-14));
    let free = LongRangePotential::regularized_coulomb(0.0, 1.0).unwrap();
    assert_eq!(dollard_modifier_apply(&hat, &k, &free, MASS, 37.0), hat);
}

#[test]
fn free_gaussian_spreads_as_in_closed_form() {
    let grid = Grid1d::new(-60.0, 140.0, 0.2).unwrap();
    let (c, s, p0, t) = (0.0, 3.0, 1.5, 40.0);
    let psi = GridWavefunction::gaussian(grid.clone(), c, s, p0).unwrap();
    let zero = LongRangePotential::regularized_coulomb(0.0, 1.0).unwrap();
    let opts = PropagationOptions { dt: 2e-3, absorb: false };
    let evolved = propagate_full(&psi, &zero, MASS, t, &opts).unwrap();
    let tau = t / (2.0 * MASS * s * s);
    let vel = p0 / MASS;
    let denom = Complex64::new(1.0, tau);
    let exact: Vec<Complex64> = grid
        .positions()
        .iter()
        .map(|&x| {
            let y = x - c;
            let arg = -(y - vel * t).powi(2) / (4.0 * s * s * denom) + Complex64::new(0.0, p0 * (y - 0.5 * vel * t));
            arg.exp() / denom.sqrt()
        })
        .collect();
    let exact = GridWavefunction::new(grid, exact).unwrap();
    assert!(evolved.distance(&exact) < 1e-6, "{}", evolved.distance(&exact));
    assert!(free_evolve(&psi, MASS, t).distance(&exact) < 1e-6);
}

#[test]
fn split_step_is_unitary_and_checks_the_step() {
    let psi = canonical_packet();
    let v = LongRangePotential::regularized_coulomb(0.5, 1.0).unwrap();
    let closed = PropagationOptions { dt: 5e-3, absorb: false };
    assert_eq!(propagate_full(&psi, &v, MASS, 0.0, &closed).unwrap(), psi);
    let out = propagate_full(&psi, &v, MASS, 20.0, &closed).unwrap();
    assert!((out.norm() - 1.0).abs() < 1e-8);
    let coarse = PropagationOptions { dt: 0.01, absorb: false };
    assert!(matches!(propagate_full(&psi, &v, MASS, 1.0, &coarse), Err(irlab::Error::Argument(_))));
}

#[test]
fn free_moller_vectors_coincide() {
    let psi = canonical_packet();
    let v = LongRangePotential::regularized_coulomb(0.0, 1.0).unwrap();
    for modified in [false, true] {
        let d = moller_residual(&psi, &v, MASS, &[4.0, 8.0, 16.0], modified, &MollerOptions::default()).unwrap();
        assert!(d.residuals.iter().flatten().all(|&r| r <= 1e-8));
        for i in 0..3 {
            assert_eq!(d.residuals[i][i], 0.0);
        }
        let fit = coulomb_log_slope_fit(&moller_residual(&psi, &v, MASS, &LADDER, false, &MollerOptions::default()).unwrap())
            .unwrap();
        assert!(fit.slope.abs() < 1e-8);
    }
}

#[test]
fn absorbed_packets_are_reported() {
    let psi = GridWavefunction::gaussian(Grid1d::new(-50.0, 100.0, 0.25).unwrap(), 0.0, 4.0, 2.0).unwrap();
    let v = LongRangePotential::regularized_coulomb(0.5, 1.0).unwrap();
    let err = moller_residual(&psi, &v, MASS, &[8.0, 64.0], false, &MollerOptions::default()).unwrap_err();
    assert!(matches!(err, irlab::Error::MassLoss { .. }));
}

#[test]
fn short_range_scattering_converges_unmodified() {
    let psi = canonical_packet();
    let v = LongRangePotential::power_law(0.5, 3.0, 1.0).unwrap();
    let d = moller_residual(&psi, &v, MASS, &LADDER, false, &MollerOptions::default()).unwrap();
    let r = d.consecutive();
    assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
    assert!(*r.last().unwrap() < 1e-3);
    // the Dollard phase converges, so the modified limit is the unmodified
    // wave operator applied to the asymptotically phased packet
    let t = *LADDER.last().unwrap();
    let opts = PropagationOptions::default();
    let modified = moller_vector(&psi, &v, MASS, t, true, &opts).unwrap();
    let phased = psi.with_momentum_amplitudes(&dollard_modifier_apply(
        &psi.momentum_amplitudes(),
        &psi.grid.momenta(),
        &v,
        MASS,
        1e9,
    ));
    let aligned = moller_vector(&phased, &v, MASS, t, false, &opts).unwrap();
    assert!(modified.distance(&aligned) < 1e-3, "{}", modified.distance(&aligned));
}

#[test]
fn coulomb_dichotomy() {
    let psi = canonical_packet();
    let (e, r0) = (0.5, 1.0);
    let v = LongRangePotential::regularized_coulomb(e, r0).unwrap();
    let plain = moller_residual(&psi, &v, MASS, &LADDER, false, &MollerOptions::default()).unwrap();
    let fit = coulomb_log_slope_fit(&plain).unwrap();
    let predicted = e * MASS / psi.mean_abs_momentum();
    assert!((fit.slope - predicted).abs() < 0.05 * predicted, "{} vs {predicted}", fit.slope);
    let floor = plain.consecutive();
    assert!(floor.iter().all(|&r| r > 0.1), "{floor:?}");

    let modified = moller_residual(&psi, &v, MASS, &LADDER, true, &MollerOptions::default()).unwrap();
    let r = modified.consecutive();
    for w in r.windows(2) {
        assert!(w[0] >= 2.0 * w[1], "{r:?}");
    }
    assert!(modified.mass_loss.iter().all(|&l| l < 1e-3));
}

#[test]
fn radial_s_wave_keeps_its_parity_and_log_phase() {
    let grid = Grid1d::new(-350.0, 350.0, 0.25).unwrap();
    let psi = GridWavefunction::s_wave(grid, 20.0, 6.0, 2.0).unwrap();
    let e = 0.5;
    let v = LongRangePotential::new(PotentialForm::Coulomb3dRadial, e, 1.0).unwrap();
    let times = [4.0, 8.0, 16.0, 32.0, 64.0];
    let d = moller_residual(&psi, &v, MASS, &times, false, &MollerOptions::default()).unwrap();
    let fit = coulomb_log_slope_fit(&d).unwrap();
    // the packet starts at r = 20, so the ballistic phase of the same
    // window is (em/p)(asinh((20 + pt/m)/r0) − asinh(20/r0))
    let p = psi.mean_abs_momentum();
    let ballistic: Vec<f64> = times
        .iter()
        .map(|t| e * MASS / p * ((20.0 + p * t / MASS).asinh() - 20f64.asinh()))
        .collect();
    let x: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let predicted = irlab::fit::fit_line(&x, &ballistic).unwrap().slope;
    assert!((fit.slope - predicted).abs() < 0.05 * predicted, "{} vs {predicted}", fit.slope);
    let out = moller_vector(&psi, &v, MASS, 16.0, false, &PropagationOptions::default()).unwrap();
    let n = out.grid.len();
    // x_j and x_{n-j} are mirror images on this symmetric grid
    let odd = (1..n / 2).map(|j| (out.amplitudes[j] + out.amplitudes[n - j]).norm()).fold(0.0, f64::max);
    assert!(odd < 1e-10, "{odd}");
}

#[test]
fn log_slope_fit_needs_four_octaves() {
    let times = [1.0, 2.0, 4.0, 8.0, 16.0];
    let synthetic = MollerDiagnostics {
        times: times.to_vec(),
        residuals: vec![vec![0.0; 5]; 5],
        phase_track: times.iter().map(|t| 0.3 * t.ln()).collect(),
        mass_loss: vec![0.0; 5],
    };
    let fit = coulomb_log_slope_fit(&synthetic).unwrap();
    assert!((fit.slope - 0.3).abs() < 1e-12 && (fit.r_squared - 1.0).abs() < 1e-12);
    let short = MollerDiagnostics {
        times: vec![1.0, 2.0, 4.0, 8.0, 15.0],
        ..synthetic
    };
    assert!(coulomb_log_slope_fit(&short).is_err());
}
