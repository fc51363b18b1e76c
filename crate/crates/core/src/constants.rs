use crate::error::{PhaseError, Result};
use crate::scalar::Real;

/// Physical constants threaded explicitly through every phase computation.
///
/// `planck_h` is always derived as `2π·hbar`, never stored independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T> {
    hbar: T,
    e_charge: T,
    mu0: T,
    planck_h: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn new(hbar: T, e_charge: T, mu0: T) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("e_charge", e_charge), ("mu0", mu0)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(PhaseError::malformed(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(Self {
            hbar,
            e_charge,
            mu0,
            planck_h: T::two_pi() * hbar,
        })
    }

    /// ħ = e = μ0 = 1 (and unit masses by convention at call sites).
    pub fn natural() -> Self {
        Self::new(T::one(), T::one(), T::one()).expect("unit constants are valid")
    }

    /// CODATA 2018 SI values.
    pub fn si() -> Self {
        Self::new(
            T::lit(1.054_571_817e-34),
            T::lit(1.602_176_634e-19),
            T::lit(1.256_637_062_12e-6),
        )
        .expect("SI constants are valid")
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn e_charge(&self) -> T {
        self.e_charge
    }

    pub fn mu0(&self) -> T {
        self.mu0
    }

    pub fn planck_h(&self) -> T {
        self.planck_h
    }

    /// Frequency associated with an energy through E = hν.
    pub fn frequency_of(&self, energy: T) -> T {
        energy / self.planck_h
    }

    pub fn with_mu0(self, mu0: T) -> Result<Self> {
        Self::new(self.hbar, self.e_charge, mu0)
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::natural()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planck_is_two_pi_hbar() {
        let c = PhysicalConstants::<f64>::si();
        assert_eq!(c.planck_h(), std::f64::consts::TAU * c.hbar());
        let n = PhysicalConstants::<f32>::natural();
        assert_eq!(n.planck_h(), std::f32::consts::TAU);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(PhysicalConstants::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, -1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn energy_frequency_relation() {
        let c = PhysicalConstants::<f64>::natural();
        assert!((c.frequency_of(std::f64::consts::TAU) - 1.0).abs() < 1e-15);
    }
}
