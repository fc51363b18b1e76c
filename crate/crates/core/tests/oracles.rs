//! Closed-form and independently computed reference values.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use abphase_core::cylinders::{
    full_system_phase_difference, gaussian_pointer_overlap, which_path_charge_record,
    ApparatusMotion, CylinderScenario, SourceModel,
};
use abphase_core::phase::{electromagnetic_phase, lagrangian_phase, LineRule};
use abphase_core::ring::{
    analytic_periods, conductance, direct_phase_shift, kinematic_phase_shift, scan_periods,
    ConductanceModel, RingParams, ScanAxis,
};
use abphase_core::solenoid::{
    dipole_vector_potential, loop_flux, loop_flux_closed_form, naive_energy_phase,
    sheet_integral_closed_form, solenoid_phase_rate, DipoleSolenoidGeometry, SphericalPoint,
};
use abphase_core::solver::observables::observables;
use abphase_core::solver::{
    gaussian_packet, Axis, HamiltonianSpec, JointWavefunction, WkbApparatus,
};
use abphase_core::{
    energy_integral_difference, potential_phase, Complex, ConfigPath, Constants64, FluxLine,
    Interpolation, PotentialPulse, SpacetimePath, ZeroField,
};
use nalgebra::DMatrix;

fn nat() -> Constants64 {
    Constants64::natural()
}

#[test]
fn triangular_pulse_against_dense_trapezoid() {
    let pulse = PotentialPulse::new(
        vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)],
        Interpolation::PiecewiseLinear,
    )
    .unwrap();
    let got = potential_phase(&pulse, 2.0, 0.0, 2.0, &nat()).unwrap();

    let v = |t: f64| if t < 1.0 { t } else { 2.0 - t };
    let n = 1_000_000;
    let h = 2.0 / n as f64;
    let inner: f64 = (1..n).map(|i| v(i as f64 * h)).sum();
    let trapezoid = h * (0.5 * v(0.0) + inner + 0.5 * v(2.0));
    let oracle = 2.0 * trapezoid;
    assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
    assert!((got - 2.0).abs() < 1e-14);
}

#[test]
fn flux_loop_phase_is_minus_flux() {
    let path = SpacetimePath::circle((0.0, 0.0), 2.0, 10_000, 0.0, 1.0, 1.0).unwrap();
    let zero = PotentialPulse::constant(0.0, 0.0, 1.0).unwrap();
    let phi = electromagnetic_phase(
        &path,
        &zero,
        &FluxLine::new(5.0),
        &nat(),
        LineRule::default(),
    )
    .unwrap();
    assert!(((phi + 5.0) / 5.0).abs() < 1e-9, "{phi}");
}

#[test]
fn radial_out_and_back_path_has_no_flux_phase() {
    let mut positions = Vec::new();
    for i in 0..=100 {
        positions.push([1.0 + i as f64 * 0.03, 0.5, 0.0]);
    }
    for i in (0..100).rev() {
        positions.push([1.0 + i as f64 * 0.03, 0.5, 0.0]);
    }
    let times = (0..positions.len()).map(|i| i as f64).collect();
    let path = SpacetimePath::new(times, positions, 1.0).unwrap();
    let zero = PotentialPulse::constant(0.0, 0.0, 200.0).unwrap();
    let phi = electromagnetic_phase(
        &path,
        &zero,
        &FluxLine::new(5.0),
        &nat(),
        LineRule::default(),
    )
    .unwrap();
    assert!(phi.abs() < 1e-9);
}

#[test]
fn zero_vector_potential_reduces_to_scalar_phase() {
    let path = SpacetimePath::circle((0.0, 0.0), 1.0, 64, 0.0, 3.0, 1.5).unwrap();
    let pulse = PotentialPulse::new(
        vec![(0.0, 0.2), (1.0, 1.1), (3.0, -0.4)],
        Interpolation::PiecewiseLinear,
    )
    .unwrap();
    let a = electromagnetic_phase(&path, &pulse, &ZeroField, &nat(), LineRule::default()).unwrap();
    let b = potential_phase(&pulse, 1.5, 0.0, 3.0, &nat()).unwrap();
    assert!(((a - b) / b).abs() < 1e-12);
}

#[test]
fn free_particle_lagrangian_phase() {
    // E = p²/2m = 2, q = 2t on [0, 1]: ∫(E − p q̇)dt = 2 − 4.
    let n = 11;
    let times: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let coords = times.iter().map(|t| vec![2.0 * t]).collect();
    let moms = vec![vec![2.0]; n];
    let path = ConfigPath::new(times, coords, moms, vec![2.0; n]).unwrap();
    assert!((lagrangian_phase(&path, &nat()) + 2.0).abs() < 1e-14);
}

#[test]
fn energy_exchange_between_subsystems_cancels() {
    // Direct sum of the two subsystem histories on a fine grid.
    let times: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
    let particle = |t: f64| if (1.0..4.0).contains(&t) { 3.0 } else { 0.0 };
    let source = |t: f64| 10.0 - particle(t);
    let a_energy: Vec<f64> = times.iter().map(|&t| particle(t) + source(t)).collect();
    let stationary = |e: Vec<f64>| ConfigPath::stationary(times.clone(), 2, e).unwrap();
    let a = stationary(a_energy);
    let b = stationary(vec![10.0; times.len()]);
    assert_eq!(energy_integral_difference(&a, &b).unwrap(), 0.0);
}

fn cylinder(v: f64, kappa: f64, sigma: f64) -> CylinderScenario<f64> {
    let pulse = PotentialPulse::rectangular(1.0, 3.0, v).unwrap();
    let source = SourceModel {
        capacitance: 1.0,
        kappa,
        pointer_width: sigma,
    };
    CylinderScenario::new(pulse, 1.0, 0.0, 4.0, source).unwrap()
}

#[test]
fn moving_source_charges_give_force_mediated_phase() {
    // One apparatus charge moves as q = t², p = 2t only when the particle is
    // in the pulsed arm: ∫p dq = ∫ 4t² dt = 4T³/3.
    let n = 4001;
    let times: Vec<f64> = (0..n).map(|i| 4.0 * i as f64 / (n - 1) as f64).collect();
    let moving = ConfigPath::new(
        times.clone(),
        times.iter().map(|t| vec![t * t]).collect(),
        times.iter().map(|t| vec![2.0 * t]).collect(),
        vec![0.0; n],
    )
    .unwrap();
    let still = ConfigPath::stationary(times, 1, vec![0.0; n]).unwrap();
    let sc = cylinder(1.0, 1.0, 0.5)
        .with_motion(ApparatusMotion {
            with_particle: moving,
            without_particle: still,
        })
        .unwrap();
    let f = full_system_phase_difference(&sc, &nat()).unwrap();
    let oracle = -4.0 * 64.0 / 3.0;
    assert!(((f.force_mediated_phase - oracle) / oracle).abs() < 1e-6);
    assert!(f.energy_phase.abs() < 1e-12);
}

#[test]
fn complete_which_path_record() {
    let rec = which_path_charge_record(&cylinder(1.0, 1.0, 0.01));
    assert_eq!(rec.charge_difference, 1.0);
    let oracle = (-1.0f64 / (8.0 * 1e-4)).exp();
    assert!(rec.visibility < 1e-8);
    assert!((rec.visibility - oracle).abs() <= 1e-300_f64.max(oracle * 1e-12));
}

#[test]
fn gaussian_pointer_overlap_by_quadrature() {
    // ∫ χ(y − Δ/2) χ(y + Δ/2) dy for a normalised real Gaussian amplitude.
    let (delta, sigma) = (0.9, 0.4);
    let chi =
        |y: f64| (2.0 * PI * sigma * sigma).powf(-0.25) * (-y * y / (4.0 * sigma * sigma)).exp();
    let h = 1e-4;
    let overlap: f64 = (-100_000..=100_000)
        .map(|i| {
            let y = i as f64 * h;
            chi(y - delta / 2.0) * chi(y + delta / 2.0) * h
        })
        .sum();
    assert!((gaussian_pointer_overlap(delta, sigma) - overlap).abs() < 1e-12);
}

#[test]
fn ring_identity_example() {
    let r = RingParams::new(10.0, 1.0, 1.0).unwrap();
    let k = kinematic_phase_shift(&r, 0.1, &nat());
    assert!((k.phase - direct_phase_shift(&r, 0.1, &nat())).abs() < 1e-14);
    assert!((k.phase - 1.0).abs() < 1e-12);
    // e ΔV t_o / ħ = 2π marks adjacent conductance peaks.
    let dv = TAU / r.traversal_time();
    assert!((direct_phase_shift(&r, dv, &nat()) - TAU).abs() < 1e-12);
}

#[test]
fn conductance_interference_rule() {
    let r = RingParams::new(10.0, 1.0, 1.0).unwrap();
    let m = ConductanceModel::new(2.0, 0.5, r).unwrap();
    let c = nat();
    assert!((conductance(&m, 0.0, 0.0, &c) - 1.5).abs() < 1e-15);
    // Total phase π from flux Φ = h/2e.
    assert!((conductance(&m, PI, 0.0, &c) - 2.5).abs() < 1e-12);
}

#[test]
fn scanned_periods_match_closed_forms() {
    let r = RingParams::new(10.0, 1.0, 1.0).unwrap();
    let m = ConductanceModel::new(1.0, 0.5, r).unwrap();
    let c = nat();
    let (fp, vp) = analytic_periods(&r, &c);
    assert!((fp - TAU).abs() < 1e-15);
    assert!((vp - TAU / 10.0).abs() < 1e-15);
    let flux = ScanAxis::new(-0.1 * fp, 3.1 * fp, 1001).unwrap();
    let bias = ScanAxis::new(-0.1 * vp, 3.1 * vp, 1001).unwrap();
    let p = scan_periods(&m, &flux, &bias, &c).unwrap();
    assert!((p.flux_period - fp).abs() <= p.flux_cell);
    assert!((p.voltage_period - vp).abs() <= p.voltage_cell);
}

fn mu0_4pi() -> Constants64 {
    Constants64::new(1.0, 1.0, 4.0 * PI).unwrap()
}

#[test]
fn dipole_potential_substitution() {
    let a = dipole_vector_potential(
        SphericalPoint::new(1.0, FRAC_PI_2).unwrap(),
        1.0,
        &mu0_4pi(),
    )
    .unwrap();
    // (μ0/4π) μ sin θ / r² = 1.
    assert!((a - 1.0).abs() < 1e-15);
}

#[test]
fn loop_flux_at_the_dipole_plane() {
    let g = DipoleSolenoidGeometry::new(1.0, 1.0, 1.0, 1.0, 10.0).unwrap();
    let c = mu0_4pi();
    assert!((loop_flux(&g, 0.0, &c).unwrap() - TAU).abs() < 1e-9);
    for z in [-3.0, -0.4, 0.0, 0.7, 2.5] {
        let closed = loop_flux_closed_form(&g, z, &c);
        assert!((loop_flux(&g, z, &c).unwrap() - closed).abs() <= 1e-9 * closed.abs());
    }
}

#[test]
fn long_solenoid_rate_and_energy_phase() {
    let c = Constants64::natural().with_mu0(1.0).unwrap();
    let g = DipoleSolenoidGeometry::new(1.0, 1.0, 1.0, 1.0, 100.0).unwrap();
    let rate = solenoid_phase_rate(&g, &c).unwrap();
    // Sheet integral in closed form: μ0 μ (L/2)/√(R² + L²/4).
    let oracle = sheet_integral_closed_form(&g, &c);
    assert!(((rate - oracle) / oracle).abs() < 1e-9);
    assert!((rate - 1.0).abs() < 1e-3);
    let t = 3.0;
    let naive = naive_energy_phase(1.0, g.interior_field(&c), t, &c).unwrap();
    assert!(((rate * t - naive) / naive).abs() < 1e-3);
}

#[test]
fn off_centre_dipole_rate_is_stable() {
    let c = Constants64::natural().with_mu0(1.0).unwrap();
    let g = DipoleSolenoidGeometry::new(1.0, 1.0, 1.0, 1.0, 100.0).unwrap();
    let centred = solenoid_phase_rate(&g, &c).unwrap();
    let shifted = solenoid_phase_rate(&g.with_offset(25.0).unwrap(), &c).unwrap();
    assert!(((shifted - centred) / centred).abs() < 1e-3);
}

/// Lowest eigenpair of the 1-D spectral-kinetic plus diagonal-potential
/// matrix on `axis`.
fn ground_state(axis: &Axis<f64>, mass: f64, v: impl Fn(f64) -> f64) -> (f64, Vec<f64>) {
    let n = axis.len();
    let xs = axis.points();
    let ks = axis.wavenumbers();
    let mut h = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let k: f64 = ks
                .iter()
                .map(|k| k * k / (2.0 * mass) * (k * (xs[i] - xs[j])).cos())
                .sum::<f64>()
                / n as f64;
            h[(i, j)] = k + if i == j { v(xs[i]) } else { 0.0 };
        }
    }
    let eig = h.symmetric_eigen();
    let (imin, emin) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, e)| (i, *e))
        .unwrap();
    (
        emin,
        eig.eigenvectors.column(imin).iter().copied().collect(),
    )
}

#[test]
fn ground_state_energy_matches_diagonalisation() {
    let x = Axis::centered(0.0, 12.0, 32).unwrap();
    let y = Axis::centered(0.5, 10.0, 32).unwrap();
    let (m, big_m) = (1.0, 2.0);
    let wx = |x: f64| 0.5 * 1.5 * x * x;
    let wy = move |y: f64| 0.5 * big_m * (y - 0.5) * (y - 0.5) + 0.25;
    let (ex, phi) = ground_state(&x, m, wx);
    let (ey, chi) = ground_state(&y, big_m, wy);
    let psi = JointWavefunction::from_fn(x, y, |a, b| {
        let i = ((a - x.min()) / x.spacing()).round() as usize;
        let j = ((b - y.min()) / y.spacing()).round() as usize;
        Complex::new(phi[i] * chi[j], 0.0)
    });
    let h = HamiltonianSpec::new(m, big_m)
        .unwrap()
        .with_internal_potential(wy)
        .with_interaction(move |x, _| wx(x));
    let o = observables(&psi, &h, &nat());
    assert!(
        (o.energy - (ex + ey)).abs() < 1e-6,
        "{} vs {}",
        o.energy,
        ex + ey
    );
}

#[test]
fn normalised_gaussian_and_symmetric_state() {
    let x = Axis::centered(0.0, 20.0, 128).unwrap();
    let y = Axis::centered(0.0, 12.0, 64).unwrap();
    let h = HamiltonianSpec::new(1.0, 1.0).unwrap();
    let psi = JointWavefunction::product(
        x,
        y,
        &gaussian_packet(&x, 0.0, 1.0, 0.0),
        &gaussian_packet(&y, 0.0, 1.0, 0.0),
    )
    .unwrap();
    assert!((observables(&psi, &h, &nat()).norm - 1.0).abs() < 1e-12);
    let odd = JointWavefunction::from_fn(x, y, |a, b| {
        Complex::new(a * (-(a * a + b * b) / 2.0).exp(), 0.0)
    });
    assert!(observables(&odd, &h, &nat()).mean_x.abs() < 1e-12);
}

#[test]
fn wkb_harmonic_characteristics() {
    let c = nat();
    let (mass, omega, yc, w0) = (2.0, 1.5, 0.3, 0.7);
    let h = HamiltonianSpec::new(1.0, mass)
        .unwrap()
        .with_internal_potential(move |y| 0.5 * mass * omega * omega * (y - yc) * (y - yc) + w0);
    let mut s = WkbApparatus::gaussian(yc, 0.5, 0.0, 41, 4.0, mass, &c).unwrap();
    let y0 = s.positions().to_vec();
    let p0 = s.density();
    let (dt, steps) = (1e-4, 5000);
    s.advance(&h, dt, steps).unwrap();
    let t = dt * steps as f64;
    let centre = 20;
    assert!((s.action()[centre] + w0 * t).abs() < 1e-12);
    let (cos, sin2) = ((omega * t).cos(), (2.0 * omega * t).sin());
    for j in 0..y0.len() {
        let a = y0[j] - yc;
        let y = yc + a * cos;
        let action = -w0 * t - mass * omega * a * a / 4.0 * sin2;
        assert!((s.positions()[j] - y).abs() < 1e-8);
        assert!((s.action()[j] - action).abs() < 1e-8);
        assert!((s.density()[j] - p0[j] / cos).abs() < 1e-7 * p0[j] / cos + 1e-15);
    }
}
