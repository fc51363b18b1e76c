//! Two-junction metal ring: conductance oscillations in flux and bias, and
//! the kinematic origin of the bias dependence (a momentum kick of the
//! tunnelling carriers rather than a potential acting in a field-free region).

use crate::constants::PhysicalConstants;
use crate::error::{PhaseError, Result};
use crate::scalar::Real;

/// Above this ratio of e|ΔV| to the carrier kinetic energy the linearised
/// speed change Δv = eΔV/(mv) is flagged as non-perturbative.
pub const PERTURBATIVE_RATIO: f64 = 0.25;

/// Carrier kinematics between the two junctions. Traversal time and de
/// Broglie wavelength are always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingParams<T> {
    path_length: T,
    speed: T,
    mass: T,
}

impl<T: Real> RingParams<T> {
    pub fn new(path_length: T, speed: T, mass: T) -> Result<Self> {
        for (name, v) in [
            ("path length s", path_length),
            ("speed v", speed),
            ("mass m", mass),
        ] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(PhaseError::invalid(format!("{name} must be > 0 (got {v})")));
            }
        }
        Ok(Self {
            path_length,
            speed,
            mass,
        })
    }

    pub fn path_length(&self) -> T {
        self.path_length
    }

    pub fn speed(&self) -> T {
        self.speed
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    /// t_o = s / v.
    pub fn traversal_time(&self) -> T {
        self.path_length / self.speed
    }

    /// λ = h / (m v).
    pub fn de_broglie_wavelength(&self, consts: &PhysicalConstants<T>) -> T {
        consts.planck_h() / (self.mass * self.speed)
    }

    /// Mechanical phase 2πs/λ accumulated over the traversal.
    pub fn mechanical_phase(&self, consts: &PhysicalConstants<T>) -> T {
        T::two_pi() * self.path_length / self.de_broglie_wavelength(consts)
    }

    pub fn kinetic_energy(&self) -> T {
        T::lit(0.5) * self.mass * self.speed * self.speed
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicShift<T> {
    pub phase: T,
    /// Speed change Δv = eΔV/(mv).
    pub delta_speed: T,
    /// False when e|ΔV| exceeds [`PERTURBATIVE_RATIO`] of ½mv².
    pub perturbative: bool,
}

/// Δφ from the speed change a bias step imparts: Δv = eΔV/(mv), then
/// Δφ = 2π s m Δv / h.
pub fn kinematic_phase_shift<T: Real>(
    ring: &RingParams<T>,
    dv: T,
    consts: &PhysicalConstants<T>,
) -> KinematicShift<T> {
    let e = consts.e_charge();
    let delta_speed = e * dv / (ring.mass * ring.speed);
    let phase = T::two_pi() * ring.path_length * ring.mass * delta_speed / consts.planck_h();
    let perturbative = (e * dv).abs() <= T::lit(PERTURBATIVE_RATIO) * ring.kinetic_energy();
    KinematicShift {
        phase,
        delta_speed,
        perturbative,
    }
}

/// e ΔV t_o / ħ.
pub fn direct_phase_shift<T: Real>(
    ring: &RingParams<T>,
    dv: T,
    consts: &PhysicalConstants<T>,
) -> T {
    consts.e_charge() * dv * ring.traversal_time() / consts.hbar()
}

/// Kinematic shift with the bias energy shared between the two carriers:
/// the electron takes `alpha·eΔV`, the hole the rest. Returns the per-branch
/// phases `(electron, hole)`; their sum does not depend on `alpha`.
pub fn split_kinematic_phase_shift<T: Real>(
    ring: &RingParams<T>,
    dv: T,
    alpha: T,
    consts: &PhysicalConstants<T>,
) -> Result<(T, T)> {
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(PhaseError::domain(format!(
            "energy split alpha must lie in [0, 1], got {alpha}"
        )));
    }
    let electron = kinematic_phase_shift(ring, alpha * dv, consts).phase;
    let hole = kinematic_phase_shift(ring, (T::one() - alpha) * dv, consts).phase;
    Ok((electron, hole))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConductanceModel<T> {
    baseline: T,
    amplitude: T,
    ring: RingParams<T>,
}

impl<T: Real> ConductanceModel<T> {
    pub fn new(baseline: T, amplitude: T, ring: RingParams<T>) -> Result<Self> {
        if !(amplitude >= T::zero() && amplitude <= baseline && baseline.is_finite()) {
            return Err(PhaseError::invalid(format!(
                "conductance requires 0 <= G1 <= G0 (got G0 = {baseline}, G1 = {amplitude})"
            )));
        }
        Ok(Self {
            baseline,
            amplitude,
            ring,
        })
    }

    pub fn baseline(&self) -> T {
        self.baseline
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn ring(&self) -> &RingParams<T> {
        &self.ring
    }

    /// Phase difference between the "no tunnelling" path and the
    /// "pair recombines across the ring" path.
    pub fn interference_phase(&self, flux: T, bias: T, consts: &PhysicalConstants<T>) -> T {
        T::two_pi() * flux * consts.e_charge() / consts.planck_h()
            + direct_phase_shift(&self.ring, bias, consts)
    }
}

/// G = G0 − G1 cos(2πΦe/h + eVt_o/ħ). A total phase that is a multiple of
/// 2π reinforces the non-conducting path and suppresses G.
pub fn conductance<T: Real>(
    model: &ConductanceModel<T>,
    flux: T,
    bias: T,
    consts: &PhysicalConstants<T>,
) -> T {
    model.baseline - model.amplitude * model.interference_phase(flux, bias, consts).cos()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanAxis<T> {
    pub start: T,
    pub end: T,
    pub points: usize,
}

impl<T: Real> ScanAxis<T> {
    pub fn new(start: T, end: T, points: usize) -> Result<Self> {
        if points < 3 || !(end > start) {
            return Err(PhaseError::domain(format!(
                "scan axis needs end > start and >= 3 points (got [{start}, {end}], {points})"
            )));
        }
        Ok(Self { start, end, points })
    }

    pub fn step(&self) -> T {
        (self.end - self.start) / T::from_usize_lossy(self.points - 1)
    }

    pub fn value(&self, i: usize) -> T {
        self.start + self.step() * T::from_usize_lossy(i)
    }

    pub fn values(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.points).map(move |i| self.value(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Periods<T> {
    pub flux_period: T,
    pub voltage_period: T,
    /// Grid cells of each scan, the resolution the periods are good to.
    pub flux_cell: T,
    pub voltage_cell: T,
}

/// Conductance maxima located on a sampled curve, strict on the left and
/// non-strict on the right so flat-topped plateaus report once.
fn peak_positions<T: Real>(axis: &ScanAxis<T>, values: &[T]) -> Vec<T> {
    (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .map(|i| axis.value(i))
        .collect()
}

fn mean_spacing<T: Real>(peaks: &[T], what: &str) -> Result<T> {
    if peaks.len() < 2 {
        return Err(PhaseError::InsufficientRange(format!(
            "{what} scan found {} conductance peak(s); need at least 2",
            peaks.len()
        )));
    }
    Ok((peaks[peaks.len() - 1] - peaks[0]) / T::from_usize_lossy(peaks.len() - 1))
}

/// Flux period at zero bias and bias period at zero flux, from the mean
/// spacing of conductance maxima on each scan.
pub fn scan_periods<T: Real>(
    model: &ConductanceModel<T>,
    flux: &ScanAxis<T>,
    bias: &ScanAxis<T>,
    consts: &PhysicalConstants<T>,
) -> Result<Periods<T>> {
    let g_flux: Vec<T> = flux
        .values()
        .map(|f| conductance(model, f, T::zero(), consts))
        .collect();
    let g_bias: Vec<T> = bias
        .values()
        .map(|v| conductance(model, T::zero(), v, consts))
        .collect();
    Ok(Periods {
        flux_period: mean_spacing(&peak_positions(flux, &g_flux), "flux")?,
        voltage_period: mean_spacing(&peak_positions(bias, &g_bias), "voltage")?,
        flux_cell: flux.step(),
        voltage_cell: bias.step(),
    })
}

/// Full (flux, bias, conductance) table, flux-major.
pub fn conductance_map<T: Real>(
    model: &ConductanceModel<T>,
    flux: &ScanAxis<T>,
    bias: &ScanAxis<T>,
    consts: &PhysicalConstants<T>,
) -> Vec<(T, T, T)> {
    flux.values()
        .flat_map(|f| {
            bias.values()
                .map(move |v| (f, v, conductance(model, f, v, consts)))
        })
        .collect()
}

/// Closed-form periods: h/e in flux, 2πħ/(e t_o) in bias.
pub fn analytic_periods<T: Real>(ring: &RingParams<T>, consts: &PhysicalConstants<T>) -> (T, T) {
    (
        consts.planck_h() / consts.e_charge(),
        T::two_pi() * consts.hbar() / (consts.e_charge() * ring.traversal_time()),
    )
}
