//! `abphase run`: one scenario config in, CSV tables and a phase ledger out.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use abphase_core::cylinders::{
    detector_angles, fringe_pattern, full_system_phase_difference, naive_phase_difference,
    which_path_charge_record, ApparatusMotion, CylinderScenario, SourceModel, Subsystem,
};
use abphase_core::ring::{
    analytic_periods, conductance_map, direct_phase_shift, kinematic_phase_shift, scan_periods,
    ConductanceModel, RingParams, ScanAxis,
};
use abphase_core::solenoid::{
    convergence_table, naive_energy_phase, solenoid_phase_rate, DipoleSolenoidGeometry,
};
use abphase_core::solver::checkpoint;
use abphase_core::solver::{
    factorized_product, first_order_interaction_phase, gaussian_packet, observables,
    phase_discrepancy, AbsorbingBoundary, Axis, ExternalPulse, HamiltonianSpec, JointWavefunction,
    ParticleSplitStep, ParticleWavefunction, SplitStep, WkbApparatus, TAIL_WARNING_FRACTION,
};
use abphase_core::{ConfigPath, Constants64, PhaseError};

use crate::config::{
    CylindersConfig, JointConfig, Kind, MovingChargeConfig, RingConfig, ScenarioConfig,
    SolenoidConfig,
};
use crate::error::{CliError, Result};
use crate::ledger::{Classification, PhaseLedger};
use crate::output::{fmt_f64, write_csv, write_table};

/// What a run produced, for the console summary.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

impl RunReport {
    fn file(&mut self, p: PathBuf) {
        self.files.push(p);
    }

    fn line(&mut self, k: &str, v: impl ToString) {
        self.summary.push((k.to_string(), v.to_string()));
    }
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<RunReport> {
    std::fs::create_dir_all(out)?;
    let consts = cfg.constants.build()?;
    let table = |k: Kind| CliError::Config(format!("missing key `{}`", k.table()));
    match cfg.kind {
        Kind::Cylinders => run_cylinders(
            cfg,
            cfg.cylinders.as_ref().ok_or(table(cfg.kind))?,
            &consts,
            out,
        ),
        Kind::Ring => run_ring(cfg.ring.as_ref().ok_or(table(cfg.kind))?, &consts, out),
        Kind::Solenoid => run_solenoid(
            cfg,
            cfg.solenoid.as_ref().ok_or(table(cfg.kind))?,
            &consts,
            out,
        ),
        Kind::JointEvolve => run_joint(cfg.joint.as_ref().ok_or(table(cfg.kind))?, &consts, out),
    }
}

fn motion_path(rows: &[[f64; 3]]) -> Result<ConfigPath<f64>> {
    Ok(ConfigPath::new(
        rows.iter().map(|r| r[0]).collect(),
        rows.iter().map(|r| vec![r[1]]).collect(),
        rows.iter().map(|r| vec![r[2]]).collect(),
        vec![0.0; rows.len()],
    )?)
}

fn motion(m: &MovingChargeConfig) -> Result<ApparatusMotion<f64>> {
    Ok(ApparatusMotion {
        with_particle: motion_path(&m.with_particle)?,
        without_particle: motion_path(&m.without_particle)?,
    })
}

pub fn cylinder_scenario(c: &CylindersConfig) -> Result<CylinderScenario<f64>> {
    let pulse = c.pulse.build("cylinders.pulse")?;
    let source = SourceModel {
        capacitance: c.capacitance,
        kappa: c.kappa,
        pointer_width: c.pointer_width,
    };
    let sc = CylinderScenario::new(pulse, c.charge, c.t_enter, c.t_exit, source)?;
    match &c.moving_charge {
        Some(m) => Ok(sc.with_motion(motion(m)?)?),
        None => Ok(sc),
    }
}

fn run_cylinders(
    cfg: &ScenarioConfig,
    c: &CylindersConfig,
    consts: &Constants64,
    out: &Path,
) -> Result<RunReport> {
    if c.detector_points < 2 {
        return Err(CliError::Config(
            "cylinders.detector_points must be at least 2".into(),
        ));
    }
    let sc = cylinder_scenario(c)?;
    let naive = naive_phase_difference(&sc, consts)?;
    let full = full_system_phase_difference(&sc, consts)?;
    let record = which_path_charge_record(&sc);
    let full_phase = full.energy_phase + full.force_mediated_phase;

    let theta = detector_angles::<f64>(c.detector_points);
    let mut report = RunReport::default();
    for (name, visibility, phase) in [
        ("fringe_naive.csv", 1.0, naive),
        ("fringe_full_system.csv", record.visibility, full_phase),
    ] {
        let intensity = fringe_pattern(visibility, phase, &theta)?;
        let path = out.join(name);
        write_table(
            &path,
            &["theta", "intensity"],
            theta.iter().zip(&intensity).map(|(t, i)| vec![*t, *i]),
        )?;
        report.file(path);
    }

    let suppressed = record.visibility < cfg.tolerances.visibility_floor;
    let energy_class = if suppressed {
        Classification::RecordSuppressed
    } else {
        Classification::Ab
    };
    let mut ledger = PhaseLedger::new("two-cylinder interferometer: pulsed arm minus grounded arm");
    ledger.note(
        "naive single-particle phase (q/hbar)*int V dt",
        fmt_f64(naive),
    );
    ledger.note("full-system phase", fmt_f64(full_phase));
    ledger.note(
        "which-path charge difference",
        fmt_f64(record.charge_difference),
    );
    ledger.note("record visibility", fmt_f64(record.visibility));
    for contrib in &full.contributions {
        let class = match contrib.subsystem {
            Subsystem::ApparatusCharges => Classification::ForceMediated,
            _ => energy_class,
        };
        ledger.push(
            contrib.subsystem.label(),
            contrib.energy_phase,
            -contrib.momentum_phase,
            class,
        );
    }
    ledger.check(cfg.tolerances.ledger)?;
    let residual = ledger.energy_sum();
    if residual.abs() > cfg.tolerances.cancellation {
        return Err(
            PhaseError::Tolerance(format!("energy terms sum to {residual:e}, not zero")).into(),
        );
    }
    ledger.write(out)?;
    report.file(out.join("ledger.txt"));
    report.file(out.join("ledger.csv"));

    report.line("naive phase", fmt_f64(naive));
    report.line("full-system phase", fmt_f64(full_phase));
    report.line("energy-term sum", fmt_f64(residual));
    report.line("force-mediated phase", fmt_f64(full.force_mediated_phase));
    report.line("visibility", fmt_f64(record.visibility));
    Ok(report)
}

pub fn ring_model(r: &RingConfig) -> Result<ConductanceModel<f64>> {
    let ring = RingParams::new(r.path_length, r.speed, r.mass)?;
    Ok(ConductanceModel::new(r.baseline, r.amplitude, ring)?)
}

fn run_ring(r: &RingConfig, consts: &Constants64, out: &Path) -> Result<RunReport> {
    let model = ring_model(r)?;
    let ring = *model.ring();
    let (fp, vp) = analytic_periods(&ring, consts);
    let flux_cut = ScanAxis::new(0.0, r.flux_periods * fp, r.cut_points)?;
    let bias_cut = ScanAxis::new(0.0, r.voltage_periods * vp, r.cut_points)?;
    let periods = scan_periods(&model, &flux_cut, &bias_cut, consts)?;

    let mut report = RunReport::default();
    let flux_map = ScanAxis::new(0.0, r.flux_periods * fp, r.map_points)?;
    let bias_map = ScanAxis::new(0.0, r.voltage_periods * vp, r.map_points)?;
    let scan = out.join("scan.csv");
    write_table(
        &scan,
        &["flux", "voltage", "conductance"],
        conductance_map(&model, &flux_map, &bias_map, consts)
            .into_iter()
            .map(|(f, v, g)| vec![f, v, g]),
    )?;
    report.file(scan);
    let periods_path = out.join("periods.csv");
    write_csv(
        &periods_path,
        &["quantity", "measured", "analytic", "grid_cell"],
        [
            ("flux_period", periods.flux_period, fp, periods.flux_cell),
            (
                "voltage_period",
                periods.voltage_period,
                vp,
                periods.voltage_cell,
            ),
        ]
        .into_iter()
        .map(|(q, m, a, c)| vec![q.to_string(), fmt_f64(m), fmt_f64(a), fmt_f64(c)]),
    )?;
    report.file(periods_path);

    let flux_phase = 2.0 * PI * r.ledger_flux * consts.e_charge() / consts.planck_h();
    let kin = kinematic_phase_shift(&ring, r.ledger_bias, consts);
    let direct = direct_phase_shift(&ring, r.ledger_bias, consts);
    let mut ledger = PhaseLedger::new("mesoscopic ring: recombining pair minus direct path");
    ledger.note("flux", fmt_f64(r.ledger_flux));
    ledger.note("bias", fmt_f64(r.ledger_bias));
    ledger.note("traversal time t_o", fmt_f64(ring.traversal_time()));
    ledger.note("kinematic shift 2*pi*s*m*dv/h", fmt_f64(kin.phase));
    ledger.note("direct shift e*V*t_o/hbar", fmt_f64(direct));
    ledger.note(
        "bias within perturbative range",
        kin.perturbative.to_string(),
    );
    ledger.push(
        "enclosed magnetic flux",
        0.0,
        flux_phase,
        Classification::Ab,
    );
    ledger.push(
        "bias (speed change of carriers)",
        0.0,
        kin.phase,
        Classification::ForceMediated,
    );
    ledger.check(1e-12)?;
    ledger.write(out)?;
    report.file(out.join("ledger.txt"));
    report.file(out.join("ledger.csv"));

    report.line(
        "flux period",
        format!("{} (h/e = {})", fmt_f64(periods.flux_period), fmt_f64(fp)),
    );
    report.line(
        "voltage period",
        format!(
            "{} (2*pi*hbar/(e*t_o) = {})",
            fmt_f64(periods.voltage_period),
            fmt_f64(vp)
        ),
    );
    Ok(report)
}

pub fn solenoid_geometry(s: &SolenoidConfig) -> Result<DipoleSolenoidGeometry<f64>> {
    let g =
        DipoleSolenoidGeometry::new(s.moment, s.turns_per_length, s.current, s.radius, s.length)?;
    Ok(g.with_offset(s.dipole_offset)?)
}

fn run_solenoid(
    cfg: &ScenarioConfig,
    s: &SolenoidConfig,
    consts: &Constants64,
    out: &Path,
) -> Result<RunReport> {
    let geom = solenoid_geometry(s)?;
    let table = convergence_table(&geom, &s.aspect_ratios, consts)?;
    let mut report = RunReport::default();
    let path = out.join("convergence.csv");
    write_table(
        &path,
        &["L_over_R", "phase_rate", "relative_error"],
        table.iter().map(|(a, r, e)| vec![*a, *r, *e]),
    )?;
    report.file(path);

    let rate = solenoid_phase_rate(&geom, consts)?;
    let energy = naive_energy_phase(s.moment, geom.interior_field(consts), s.duration, consts)?;
    let winding = rate * s.duration;
    let mut ledger =
        PhaseLedger::new("dipole inside a pulsed solenoid: current-on path minus current-off path");
    ledger.note("duration", fmt_f64(s.duration));
    ledger.note("naive energy phase mu*B*t/hbar", fmt_f64(energy));
    ledger.note("winding phase rate", fmt_f64(rate));
    ledger.note("L/R", fmt_f64(geom.aspect_ratio()));
    ledger.push("dipole (energy -mu.B)", energy, 0.0, Classification::Ab);
    ledger.push(
        "solenoid supply (compensating energy)",
        -energy,
        0.0,
        Classification::Ab,
    );
    ledger.push(
        "winding charges in the dipole vector potential",
        0.0,
        winding,
        Classification::Ab,
    );
    ledger.check(cfg.tolerances.ledger)?;
    ledger.write(out)?;
    report.file(out.join("ledger.txt"));
    report.file(out.join("ledger.csv"));

    report.line("winding phase", fmt_f64(winding));
    report.line("naive energy phase", fmt_f64(energy));
    report.line(
        "relative difference",
        fmt_f64((winding - energy).abs() / energy.abs().max(f64::MIN_POSITIVE)),
    );
    Ok(report)
}

pub fn joint_hamiltonian(j: &JointConfig) -> Result<HamiltonianSpec<f64>> {
    let mut h = HamiltonianSpec::new(j.particle_mass, j.apparatus_mass)?;
    if j.coupling != 0.0 {
        h = h.with_bilinear_coupling(j.coupling);
    }
    if let Some(w) = j.harmonic {
        let k = j.apparatus_mass * w.omega * w.omega;
        h = h.with_internal_potential(move |y| 0.5 * k * (y - w.center) * (y - w.center));
    }
    if let Some(p) = &j.pulse {
        h = h.with_pulse(ExternalPulse {
            pulse: p.profile.build("joint.pulse.profile")?,
            charge: p.charge,
            region: p.region.map(|r| (r[0], r[1])),
        });
    }
    Ok(h)
}

/// Picks the branch of `raw` nearest to `previous`.
fn unwrap_phase(previous: f64, raw: f64) -> f64 {
    let two_pi = 2.0 * PI;
    raw + two_pi * ((previous - raw) / two_pi).round()
}

fn run_joint(j: &JointConfig, consts: &Constants64, out: &Path) -> Result<RunReport> {
    if j.sample_every == 0 {
        return Err(CliError::Config(
            "joint.sample_every must be at least 1".into(),
        ));
    }
    let x = Axis::new(j.x.min, j.x.max, j.x.points)?;
    let y = Axis::new(j.y.min, j.y.max, j.y.points)?;
    let h = joint_hamiltonian(j)?;
    let phi = gaussian_packet(&x, j.particle.center, j.particle.sigma, j.particle.k0);
    let chi = gaussian_packet(&y, j.apparatus.center, j.apparatus.sigma, j.apparatus.k0);
    let psi0 = JointWavefunction::product(x, y, &phi, &chi)?;

    let mut stepper = SplitStep::new(&x, &y, &h, j.dt, consts)?;
    if let Some(w) = j.absorbing_width {
        stepper = stepper.with_absorbing_boundary(&x, &y, AbsorbingBoundary { width: w });
    }
    let mut factorized = if j.compare_factorized {
        Some((
            ParticleSplitStep::new(&x, &h, j.dt, consts)?,
            ParticleWavefunction::new(x, phi.clone(), 0.0)?,
            WkbApparatus::from_grid(&y, &chi, j.apparatus_mass, consts)?,
        ))
    } else {
        None
    };

    let o0 = observables(&psi0, &h, consts);
    let mut psi = psi0.clone();
    let mut obs_rows = vec![observable_row(&o0, 0.0)];
    let mut back_rows = Vec::new();
    let mut report = RunReport::default();
    let mut discrepancy = 0.0;
    if factorized.is_some() {
        back_rows.push(vec![0.0, 0.0, 0.0, 0.0]);
    }
    let mut done = 0;
    while done < j.steps {
        let chunk = j.sample_every.min(j.steps - done);
        stepper.run(&mut psi, chunk)?;
        done += chunk;
        let o = observables(&psi, &h, consts);
        let t = psi.time();
        if o.spectral_tail_fraction > TAIL_WARNING_FRACTION {
            report.warnings.push(format!(
                "spectral tail fraction {:e} at t = {t}: grid may be under-resolved",
                o.spectral_tail_fraction
            ));
        }
        obs_rows.push(observable_row(&o, t));
        if let Some((pstep, particle, apparatus)) = factorized.as_mut() {
            pstep.run(particle, chunk)?;
            apparatus.advance(&h, j.dt, chunk)?;
            let fact = factorized_product(particle, apparatus, y, consts)?;
            discrepancy = unwrap_phase(discrepancy, phase_discrepancy(&psi, &fact)?);
            let estimate = first_order_interaction_phase(&psi0, &h, t, consts);
            let shift = (o.mean_py - o0.mean_py).abs() / o0.spread_py;
            back_rows.push(vec![t, discrepancy, estimate, shift]);
        }
    }

    let obs_path = out.join("observables.csv");
    write_table(
        &obs_path,
        &[
            "time",
            "norm",
            "energy",
            "mean_x",
            "mean_y",
            "mean_px",
            "mean_py",
            "spread_py",
            "spectral_tail_fraction",
        ],
        obs_rows,
    )?;
    report.file(obs_path);
    let ckpt = out.join("final.abph");
    checkpoint::write(&ckpt, &psi)?;
    report.file(ckpt);

    let o1 = observables(&psi, &h, consts);
    report.line("final time", fmt_f64(psi.time()));
    report.line("norm drift", fmt_f64((o1.norm - o0.norm) / o0.norm));
    report.line(
        "energy drift",
        fmt_f64((o1.energy - o0.energy) / o0.energy.abs().max(f64::MIN_POSITIVE)),
    );

    if factorized.is_some() {
        let path = out.join("backaction.csv");
        write_table(
            &path,
            &[
                "time",
                "phase_discrepancy",
                "first_order_estimate",
                "relative_momentum_shift",
            ],
            back_rows.iter().cloned(),
        )?;
        report.file(path);
        let last = back_rows.last().cloned().unwrap_or_default();
        let mut ledger =
            PhaseLedger::new("joint evolution against the factorized semiclassical apparatus");
        ledger.note("time", fmt_f64(psi.time()));
        ledger.note("first-order estimate <V_int>t/hbar", fmt_f64(last[2]));
        ledger.note("relative apparatus momentum shift", fmt_f64(last[3]));
        ledger.push(
            "apparatus back-action missed by factorization",
            0.0,
            discrepancy,
            Classification::ForceMediated,
        );
        ledger.check(1e-12)?;
        ledger.write(out)?;
        report.file(out.join("ledger.txt"));
        report.file(out.join("ledger.csv"));
        report.line("phase discrepancy", fmt_f64(discrepancy));
        report.line("first-order estimate", fmt_f64(last[2]));
        report.line("relative momentum shift", fmt_f64(last[3]));
    }
    Ok(report)
}

fn observable_row(o: &abphase_core::solver::Observables<f64>, t: f64) -> Vec<f64> {
    vec![
        t,
        o.norm,
        o.energy,
        o.mean_x,
        o.mean_y,
        o.mean_px,
        o.mean_py,
        o.spread_py,
        o.spectral_tail_fraction,
    ]
}
