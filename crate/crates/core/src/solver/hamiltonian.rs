use std::fmt;
use std::sync::Arc;

use crate::error::{PhaseError, Result};
use crate::phase::PotentialPulse;
use crate::scalar::Real;

pub type Potential1<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
pub type Potential2<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// Time-dependent electric potential acting on the particle, optionally
/// restricted to `region = (x_lo, x_hi)` (one interferometer arm).
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalPulse<T> {
    pub pulse: PotentialPulse<T>,
    pub charge: T,
    pub region: Option<(T, T)>,
}

impl<T: Real> ExternalPulse<T> {
    pub fn applies_at(&self, x: T) -> bool {
        self.region.is_none_or(|(lo, hi)| x >= lo && x < hi)
    }

    /// Potential energy qV(t) felt at `x`.
    pub fn energy(&self, x: T, t: T) -> T {
        if self.applies_at(x) {
            self.charge * self.pulse.value_at(t)
        } else {
            T::zero()
        }
    }
}

/// H = p_x²/2m + p_y²/2M + W(y) + V_int(x, y) + qV(t) for one particle
/// coordinate x and one collective apparatus coordinate y.
#[derive(Clone)]
pub struct HamiltonianSpec<T> {
    particle_mass: T,
    apparatus_mass: T,
    internal: Option<Potential1<T>>,
    interaction: Option<Potential2<T>>,
    pulse: Option<ExternalPulse<T>>,
}

impl<T: Real> fmt::Debug for HamiltonianSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianSpec")
            .field("particle_mass", &self.particle_mass)
            .field("apparatus_mass", &self.apparatus_mass)
            .field("internal", &self.internal.is_some())
            .field("interaction", &self.interaction.is_some())
            .field("pulse", &self.pulse)
            .finish()
    }
}

impl<T: Real> HamiltonianSpec<T> {
    pub fn new(particle_mass: T, apparatus_mass: T) -> Result<Self> {
        for (name, m) in [
            ("particle mass", particle_mass),
            ("apparatus mass", apparatus_mass),
        ] {
            if !(m.is_finite() && m > T::zero()) {
                return Err(PhaseError::malformed(format!(
                    "{name} must be > 0, got {m}"
                )));
            }
        }
        Ok(Self {
            particle_mass,
            apparatus_mass,
            internal: None,
            interaction: None,
            pulse: None,
        })
    }

    /// Apparatus self-potential W(y).
    pub fn with_internal_potential(mut self, w: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.internal = Some(Arc::new(w));
        self
    }

    /// Particle–apparatus coupling V_int(x, y).
    pub fn with_interaction(mut self, v: impl Fn(T, T) -> T + Send + Sync + 'static) -> Self {
        self.interaction = Some(Arc::new(v));
        self
    }

    /// V_int = λ·x·y.
    pub fn with_bilinear_coupling(self, lambda: T) -> Self {
        self.with_interaction(move |x, y| lambda * x * y)
    }

    pub fn with_pulse(mut self, pulse: ExternalPulse<T>) -> Self {
        self.pulse = Some(pulse);
        self
    }

    /// The same Hamiltonian with the coupling removed.
    pub fn without_interaction(&self) -> Self {
        let mut h = self.clone();
        h.interaction = None;
        h
    }

    pub fn particle_mass(&self) -> T {
        self.particle_mass
    }

    pub fn apparatus_mass(&self) -> T {
        self.apparatus_mass
    }

    pub fn pulse(&self) -> Option<&ExternalPulse<T>> {
        self.pulse.as_ref()
    }

    pub fn has_interaction(&self) -> bool {
        self.interaction.is_some()
    }

    pub fn is_time_dependent(&self) -> bool {
        self.pulse.is_some()
    }

    pub fn internal_potential(&self, y: T) -> T {
        self.internal.as_ref().map_or(T::zero(), |w| w(y))
    }

    pub fn interaction(&self, x: T, y: T) -> T {
        self.interaction.as_ref().map_or(T::zero(), |v| v(x, y))
    }

    /// W(y) + V_int(x, y).
    pub fn static_potential(&self, x: T, y: T) -> T {
        self.internal_potential(y) + self.interaction(x, y)
    }

    pub fn pulse_energy(&self, x: T, t: T) -> T {
        self.pulse.as_ref().map_or(T::zero(), |p| p.energy(x, t))
    }

    /// dW/dy by a five-point stencil.
    pub fn internal_force(&self, y: T) -> T {
        let Some(w) = self.internal.as_ref() else {
            return T::zero();
        };
        let h = T::epsilon().powf(T::lit(0.2)) * y.abs().max(T::one());
        let d = (w(y - h - h) - T::lit(8.0) * w(y - h) + T::lit(8.0) * w(y + h) - w(y + h + h))
            / (T::lit(12.0) * h);
        -d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masses_must_be_positive() {
        assert!(HamiltonianSpec::<f64>::new(0.0, 1.0).is_err());
        assert!(HamiltonianSpec::<f64>::new(1.0, -2.0).is_err());
    }

    #[test]
    fn harmonic_force() {
        let h = HamiltonianSpec::new(1.0, 1.0)
            .unwrap()
            .with_internal_potential(|y: f64| 0.5 * 3.0 * (y - 1.0).powi(2));
        assert!((h.internal_force(2.5) + 4.5).abs() < 1e-9);
        assert_eq!(
            HamiltonianSpec::<f64>::new(1.0, 1.0)
                .unwrap()
                .internal_force(3.0),
            0.0
        );
    }

    #[test]
    fn pulse_region() {
        let p = ExternalPulse {
            pulse: PotentialPulse::constant(2.0, 0.0, 1.0).unwrap(),
            charge: 3.0,
            region: Some((0.0, 1.0)),
        };
        assert_eq!(p.energy(0.5, 0.2), 6.0);
        assert_eq!(p.energy(-0.5, 0.2), 0.0);
    }
}
