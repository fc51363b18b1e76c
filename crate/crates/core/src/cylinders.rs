//! The two-cylinder interferometer: one arm's cylinder is pulsed to V(t)
//! while the particle is inside. Three accounts of the resulting phase:
//! the single-particle potential phase, the full-system Lagrangian phase with
//! the source's compensating energy change, and the which-path record left in
//! the charge drawn from the supply.

use crate::constants::PhysicalConstants;
use crate::error::{PhaseError, Result};
use crate::phase::{
    energy_integral, energy_integral_difference, lagrangian_phase, momentum_integral,
    potential_phase, ConfigPath, PotentialPulse,
};
use crate::scalar::Real;

/// How the voltage supply reacts to the particle's presence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceModel<T> {
    /// Cylinder capacitance C.
    pub capacitance: T,
    /// Fraction κ of the particle charge induced on the cylinder; κ = 1 is
    /// the enclosing-sphere limit.
    pub kappa: T,
    /// Width σ_Q of the supply's charge pointer state.
    pub pointer_width: T,
}

/// Particle motion along either arm (identical on both arms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleKinematics<T> {
    pub momentum: T,
    pub speed: T,
}

impl<T: Real> Default for ParticleKinematics<T> {
    fn default() -> Self {
        Self {
            momentum: T::one(),
            speed: T::one(),
        }
    }
}

impl<T: Real> ParticleKinematics<T> {
    pub fn kinetic_energy(&self) -> T {
        T::lit(0.5) * self.momentum * self.speed
    }
}

/// Apparatus charge histories for the two branches (particle in the pulsed
/// cylinder or not). Only the coordinates and momenta are used; the energy
/// column of each path is ignored because the scenario does the energy
/// bookkeeping itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ApparatusMotion<T> {
    pub with_particle: ConfigPath<T>,
    pub without_particle: ConfigPath<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CylinderScenario<T> {
    pub pulse: PotentialPulse<T>,
    pub charge: T,
    pub t_enter: T,
    pub t_exit: T,
    pub source: SourceModel<T>,
    pub particle: ParticleKinematics<T>,
    /// Energy of the rest of the system when the pulse is off.
    pub source_energy: T,
    pub motion: Option<ApparatusMotion<T>>,
    /// Labels of the interferometer endpoints.
    pub endpoints: (String, String),
}

impl<T: Real> CylinderScenario<T> {
    pub fn new(
        pulse: PotentialPulse<T>,
        charge: T,
        t_enter: T,
        t_exit: T,
        source: SourceModel<T>,
    ) -> Result<Self> {
        let sc = Self {
            pulse,
            charge,
            t_enter,
            t_exit,
            source,
            particle: ParticleKinematics::default(),
            source_energy: T::zero(),
            motion: None,
            endpoints: ("a".into(), "b".into()),
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn with_motion(mut self, motion: ApparatusMotion<T>) -> Result<Self> {
        self.motion = Some(motion);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_enter.is_finite() && self.t_exit.is_finite() && self.t_enter < self.t_exit) {
            return Err(PhaseError::invalid(format!(
                "transit window must satisfy t_enter < t_exit (got [{}, {}])",
                self.t_enter, self.t_exit
            )));
        }
        if let Some((lo, hi)) = self.pulse.support() {
            if lo < self.t_enter || hi > self.t_exit {
                return Err(PhaseError::invalid(format!(
                    "pulse support [{lo}, {hi}] must lie inside the transit window [{}, {}]",
                    self.t_enter, self.t_exit
                )));
            }
        }
        if !self.charge.is_finite() {
            return Err(PhaseError::invalid("particle charge must be finite"));
        }
        let s = &self.source;
        if !(s.capacitance.is_finite() && s.capacitance > T::zero()) {
            return Err(PhaseError::invalid(format!(
                "capacitance C must be > 0 (got {})",
                s.capacitance
            )));
        }
        if !(s.kappa >= T::zero() && s.kappa <= T::one()) {
            return Err(PhaseError::invalid(format!(
                "induced-charge coefficient kappa must lie in [0, 1] (got {})",
                s.kappa
            )));
        }
        if !(s.pointer_width.is_finite() && s.pointer_width > T::zero()) {
            return Err(PhaseError::invalid(format!(
                "charge pointer width sigma_q must be > 0 (got {})",
                s.pointer_width
            )));
        }
        if let Some(m) = &self.motion {
            for (name, path) in [
                ("with_particle", &m.with_particle),
                ("without_particle", &m.without_particle),
            ] {
                let (a, b) = path.span();
                if a != self.t_enter || b != self.t_exit {
                    return Err(PhaseError::invalid(format!(
                        "apparatus motion '{name}' must span the transit window exactly"
                    )));
                }
            }
            if m.with_particle.dimension() != m.without_particle.dimension() {
                return Err(PhaseError::invalid(
                    "apparatus motion branches must have the same dimension",
                ));
            }
        }
        Ok(())
    }

    /// Peak |V| of the pulse.
    pub fn peak_voltage(&self) -> T {
        self.pulse
            .samples()
            .iter()
            .fold(T::zero(), |m, (_, v)| m.max(v.abs()))
    }

    /// The same scenario with the pulse delayed by `dt` (must stay inside
    /// the transit window).
    pub fn with_pulse_shift(&self, dt: T) -> Result<Self> {
        let mut sc = self.clone();
        sc.pulse = self.pulse.shifted(dt);
        sc.validate()?;
        Ok(sc)
    }
}

/// (q/ħ)∫V dt on the pulsed arm minus the grounded arm (zero).
pub fn naive_phase_difference<T: Real>(
    sc: &CylinderScenario<T>,
    consts: &PhysicalConstants<T>,
) -> Result<T> {
    sc.validate()?;
    potential_phase(&sc.pulse, sc.charge, sc.t_enter, sc.t_exit, consts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Particle,
    Source,
    ApparatusCharges,
}

impl Subsystem {
    pub fn label(self) -> &'static str {
        match self {
            Self::Particle => "particle",
            Self::Source => "voltage source",
            Self::ApparatusCharges => "apparatus charges",
        }
    }
}

/// One subsystem's share of the pulsed-minus-grounded phase difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsystemPhase<T> {
    pub subsystem: Subsystem,
    /// (1/ħ) Δ∫E dt.
    pub energy_phase: T,
    /// (1/ħ) Δ Σ∫p dq (enters the total with a minus sign).
    pub momentum_phase: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullSystemPhase<T> {
    /// (1/ħ)Δ∫E dt between the two arms' configuration paths; the only term
    /// a potential-driven effect could contribute to.
    pub energy_phase: T,
    /// −(1/ħ)Δ Σ∫p dq from apparatus charges that move differently on the
    /// two branches. Driven by electric forces; kept apart from
    /// `energy_phase` and never reported as a potential effect.
    pub force_mediated_phase: T,
    /// Lagrangian phase of each arm's full configuration path.
    pub arm_phases: (T, T),
    pub contributions: Vec<SubsystemPhase<T>>,
    pub paths: (ConfigPath<T>, ConfigPath<T>),
}

fn arm_time_grid<T: Real>(sc: &CylinderScenario<T>, motion: Option<&ConfigPath<T>>) -> Vec<T> {
    if let Some(m) = motion {
        return m.times().to_vec();
    }
    let mut times = vec![sc.t_enter];
    times.extend(
        sc.pulse
            .samples()
            .iter()
            .map(|(t, _)| *t)
            .filter(|t| *t > sc.t_enter && *t < sc.t_exit),
    );
    times.push(sc.t_exit);
    times
}

/// Configuration path of one arm: particle coordinate, then any apparatus
/// charge coordinates; total energy constant.
fn arm_path<T: Real>(
    sc: &CylinderScenario<T>,
    pulsed: bool,
    motion: Option<&ConfigPath<T>>,
) -> Result<ConfigPath<T>> {
    let times = arm_time_grid(sc, motion);
    let kin = sc.particle;
    let base = kin.kinetic_energy();
    let mut coords = Vec::with_capacity(times.len());
    let mut moms = Vec::with_capacity(times.len());
    let mut energy = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let mut q = vec![kin.speed * (t - sc.t_enter)];
        let mut p = vec![kin.momentum];
        if let Some(m) = motion {
            q.extend_from_slice(&m.coordinates()[k]);
            p.extend_from_slice(&m.momenta()[k]);
        }
        coords.push(q);
        moms.push(p);
        let delta = if pulsed {
            sc.charge * sc.pulse.value_at(t)
        } else {
            T::zero()
        };
        // Particle gains qV; the rest of the system gives it up.
        let particle_e = base + delta;
        let source_e = sc.source_energy - delta;
        energy.push(particle_e + source_e);
    }
    ConfigPath::new(times, coords, moms, energy)
}

pub fn full_system_phase_difference<T: Real>(
    sc: &CylinderScenario<T>,
    consts: &PhysicalConstants<T>,
) -> Result<FullSystemPhase<T>> {
    sc.validate()?;
    let motion = sc.motion.as_ref();
    let pulsed = arm_path(sc, true, motion.map(|m| &m.with_particle))?;
    let grounded = arm_path(sc, false, motion.map(|m| &m.without_particle))?;

    let hbar = consts.hbar();
    let energy_phase = energy_integral_difference(&pulsed, &grounded)? / hbar;
    let arm_phases = (
        lagrangian_phase(&pulsed, consts),
        lagrangian_phase(&grounded, consts),
    );

    let charge_momentum =
        |path: Option<&ConfigPath<T>>| path.map_or(T::zero(), |p| momentum_integral(p));
    let apparatus_momentum = (charge_momentum(motion.map(|m| &m.with_particle))
        - charge_momentum(motion.map(|m| &m.without_particle)))
        / hbar;

    // Subsystem energy shares are exact integrals of ±qV, so they cancel
    // bit-for-bit.
    let particle_energy = potential_phase(&sc.pulse, sc.charge, sc.t_enter, sc.t_exit, consts)?;
    let contributions = vec![
        SubsystemPhase {
            subsystem: Subsystem::Particle,
            energy_phase: particle_energy,
            momentum_phase: T::zero(),
        },
        SubsystemPhase {
            subsystem: Subsystem::Source,
            energy_phase: -particle_energy,
            momentum_phase: T::zero(),
        },
        SubsystemPhase {
            subsystem: Subsystem::ApparatusCharges,
            energy_phase: T::zero(),
            momentum_phase: apparatus_momentum,
        },
    ];
    Ok(FullSystemPhase {
        energy_phase,
        force_mediated_phase: -apparatus_momentum,
        arm_phases,
        contributions,
        paths: (pulsed, grounded),
    })
}

/// Per-arm ∫E dt, for callers that want the raw action rather than a phase.
pub fn arm_energy_integrals<T: Real>(f: &FullSystemPhase<T>) -> (T, T) {
    (energy_integral(&f.paths.0), energy_integral(&f.paths.1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhichPathRecord<T> {
    /// Difference in charge drawn from the supply with and without the
    /// particle inside the pulsed cylinder, κ·|q|.
    pub charge_difference: T,
    /// Overlap of the two Gaussian supply pointer states.
    pub visibility: T,
}

/// Gaussian pointer overlap exp(−Δ²/(8σ²)) for pointer states whose
/// probability densities have standard deviation σ and centres Δ apart.
pub fn gaussian_pointer_overlap<T: Real>(displacement: T, width: T) -> T {
    (-(displacement * displacement) / (T::lit(8.0) * width * width)).exp()
}

pub fn which_path_charge_record<T: Real>(sc: &CylinderScenario<T>) -> WhichPathRecord<T> {
    let dq = sc.source.kappa * sc.charge.abs();
    WhichPathRecord {
        charge_difference: dq,
        visibility: gaussian_pointer_overlap(dq, sc.source.pointer_width),
    }
}

/// Two-beam fringe I(θ) = 1 + visibility·cos(φ + θ).
pub fn fringe_pattern<T: Real>(visibility: T, phase: T, detector: &[T]) -> Result<Vec<T>> {
    if !(visibility >= T::zero() && visibility <= T::one()) {
        return Err(PhaseError::domain(format!(
            "visibility must lie in [0, 1], got {visibility}"
        )));
    }
    Ok(detector
        .iter()
        .map(|&theta| T::one() + visibility * (phase + theta).cos())
        .collect())
}

/// `n` detector angles evenly covering [−π, π].
pub fn detector_angles<T: Real>(n: usize) -> Vec<T> {
    if n == 1 {
        return vec![T::zero()];
    }
    let step = T::two_pi() / T::from_usize_lossy(n - 1);
    (0..n)
        .map(|i| -T::PI() + step * T::from_usize_lossy(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn nat() -> PhysicalConstants<f64> {
        PhysicalConstants::natural()
    }

    fn source(kappa: f64, sigma: f64) -> SourceModel<f64> {
        SourceModel {
            capacitance: 1.0,
            kappa,
            pointer_width: sigma,
        }
    }

    fn scenario(tau: f64, v: f64) -> CylinderScenario<f64> {
        let pulse = PotentialPulse::rectangular(1.0, 1.0 + tau, v).unwrap();
        CylinderScenario::new(pulse, 1.0, 0.0, 2.0 + tau, source(1.0, 0.01)).unwrap()
    }

    #[test]
    fn naive_rectangular_pulse() {
        let sc = scenario(TAU, 1.0);
        assert!((naive_phase_difference(&sc, &nat()).unwrap() - TAU).abs() < 1e-12);
        let zero = scenario(TAU, 0.0);
        assert_eq!(naive_phase_difference(&zero, &nat()).unwrap(), 0.0);
        let double = scenario(2.0 * TAU, 1.0);
        let r = naive_phase_difference(&double, &nat()).unwrap()
            / naive_phase_difference(&sc, &nat()).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pulse_outside_transit_is_invalid() {
        let pulse = PotentialPulse::rectangular(1.0, 3.0, 1.0).unwrap();
        let err = CylinderScenario::new(pulse, 1.0, 1.5, 5.0, source(1.0, 0.1));
        assert!(matches!(err, Err(PhaseError::ScenarioInvalid { .. })));
        let never_off = PotentialPulse::constant(1.0, 0.0, 1.0).unwrap();
        assert!(CylinderScenario::new(never_off, 1.0, 0.0, 1.0, source(1.0, 0.1)).is_err());
    }

    #[test]
    fn source_model_is_validated() {
        let pulse = PotentialPulse::rectangular(1.0, 2.0, 1.0).unwrap();
        assert!(CylinderScenario::new(pulse.clone(), 1.0, 0.0, 3.0, source(1.5, 0.1)).is_err());
        assert!(CylinderScenario::new(pulse.clone(), 1.0, 0.0, 3.0, source(0.5, 0.0)).is_err());
        let mut s = source(0.5, 0.1);
        s.capacitance = 0.0;
        assert!(CylinderScenario::new(pulse, 1.0, 0.0, 3.0, s).is_err());
    }

    #[test]
    fn full_system_energy_terms_cancel() {
        let sc = scenario(3.0, 2.5);
        let f = full_system_phase_difference(&sc, &nat()).unwrap();
        assert_eq!(f.energy_phase, 0.0);
        assert_eq!(f.force_mediated_phase, 0.0);
        let total: f64 = f.contributions.iter().map(|c| c.energy_phase).sum();
        assert_eq!(total, 0.0);
    }

    #[test]
    fn explicit_plus_minus_bookkeeping() {
        // ΔE·t/ħ = 17.3 on the particle.
        let pulse = PotentialPulse::rectangular(1.0, 2.0, 17.3).unwrap();
        let sc = CylinderScenario::new(pulse, 1.0, 0.0, 3.0, source(1.0, 0.1)).unwrap();
        let f = full_system_phase_difference(&sc, &nat()).unwrap();
        assert!((f.contributions[0].energy_phase - 17.3).abs() < 1e-12);
        assert!((f.contributions[1].energy_phase + 17.3).abs() < 1e-12);
        assert_eq!(
            f.contributions[0].energy_phase + f.contributions[1].energy_phase,
            0.0
        );
    }

    #[test]
    fn which_path_limits() {
        let sc = scenario(1.0, 1.0);
        let rec = which_path_charge_record(&sc);
        assert_eq!(rec.charge_difference, 1.0);
        assert!(rec.visibility < 1e-8);

        let mut none = sc.clone();
        none.source.kappa = 0.0;
        assert_eq!(which_path_charge_record(&none).visibility, 1.0);

        let mut neutral = sc.clone();
        neutral.charge = 0.0;
        let r = which_path_charge_record(&neutral);
        assert_eq!((r.charge_difference, r.visibility), (0.0, 1.0));
    }

    #[test]
    fn fringes() {
        let theta = detector_angles::<f64>(181);
        let i0 = fringe_pattern(1.0, 0.0, &theta).unwrap();
        assert!((i0[90] - 2.0).abs() < 1e-15);
        let ipi = fringe_pattern(1.0, PI, &theta).unwrap();
        assert!(ipi[90].abs() < 1e-15);
        let flat = fringe_pattern(0.0, 0.3, &theta).unwrap();
        assert!(flat.iter().all(|v| *v == 1.0));
        assert!(fringe_pattern(1.2, 0.0, &theta).is_err());
    }
}
