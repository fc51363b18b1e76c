//! A magnetic dipole on the axis of a finite solenoid. The winding charges
//! circulate through the dipole's azimuthal vector potential; the phase rate
//! they accumulate is compared against the energy-based estimate μB/ħ.
//!
//! The closed-form oracle used in the tests is derived here rather than
//! quoted: the flux of an on-axis dipole through a coaxial loop of radius R
//! at height z is (μ0μ/2)·R²/(R² + z²)^{3/2}, and integrating over a sheet of
//! length L gives μ0μ·(L/2)/√(R² + L²/4) → μ0μ as L/R → ∞.

use crate::constants::PhysicalConstants;
use crate::error::{PhaseError, Result};
use crate::phase::VectorPotentialField;
use crate::quadrature::AdaptiveSimpson;
use crate::scalar::Real;

/// Default number of uniform segments for loop line integrals.
pub const DEFAULT_LOOP_SEGMENTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSolenoidGeometry<T> {
    /// Dipole moment along +z.
    pub moment: T,
    /// Turns per unit length.
    pub turns_per_length: T,
    pub current: T,
    pub radius: T,
    pub length: T,
    /// Axial position of the dipole measured from the solenoid centre.
    pub dipole_offset: T,
}

impl<T: Real> DipoleSolenoidGeometry<T> {
    pub fn new(moment: T, turns_per_length: T, current: T, radius: T, length: T) -> Result<Self> {
        let g = Self {
            moment,
            turns_per_length,
            current,
            radius,
            length,
            dipole_offset: T::zero(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_offset(mut self, offset: T) -> Result<Self> {
        self.dipole_offset = offset;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("turns per length n", self.turns_per_length),
            ("current I", self.current),
            ("radius R_s", self.radius),
            ("length L_s", self.length),
        ] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(PhaseError::invalid(format!("{name} must be > 0 (got {v})")));
            }
        }
        if !self.moment.is_finite() || !self.dipole_offset.is_finite() {
            return Err(PhaseError::invalid(
                "dipole moment and offset must be finite",
            ));
        }
        Ok(())
    }

    /// Interior field of the ideal long solenoid, B = μ0 n I.
    pub fn interior_field(&self, consts: &PhysicalConstants<T>) -> T {
        consts.mu0() * self.turns_per_length * self.current
    }

    pub fn aspect_ratio(&self) -> T {
        self.length / self.radius
    }

    pub fn with_aspect_ratio(mut self, l_over_r: T) -> Result<Self> {
        self.length = l_over_r * self.radius;
        self.validate()?;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint<T> {
    pub r: T,
    pub theta: T,
}

impl<T: Real> SphericalPoint<T> {
    pub fn new(r: T, theta: T) -> Result<Self> {
        if !(r.is_finite() && r >= T::zero()) {
            return Err(PhaseError::domain(format!(
                "radial distance must be >= 0, got {r}"
            )));
        }
        if !(theta >= T::zero() && theta <= T::PI()) {
            return Err(PhaseError::domain(format!(
                "polar angle must lie in [0, π], got {theta}"
            )));
        }
        Ok(Self { r, theta })
    }
}

/// A_φ = (μ0/4π) μ sinθ / r², positive in the right-handed sense about +z.
pub fn dipole_vector_potential<T: Real>(
    p: SphericalPoint<T>,
    moment: T,
    consts: &PhysicalConstants<T>,
) -> Result<T> {
    if p.r == T::zero() {
        return Err(PhaseError::Singular(
            "dipole vector potential at r = 0".into(),
        ));
    }
    Ok(consts.mu0() / (T::lit(4.0) * T::PI()) * moment * p.theta.sin() / (p.r * p.r))
}

/// Point dipole on the z axis as a [`VectorPotentialField`]:
/// A = (μ0/4π) μ ẑ × r / |r|³.
#[derive(Debug, Clone, Copy)]
pub struct DipoleField<T> {
    pub moment: T,
    pub z: T,
    pub mu0: T,
}

impl<T: Real> VectorPotentialField<T> for DipoleField<T> {
    fn vector_potential(&self, r: [T; 3]) -> [T; 3] {
        let (x, y, z) = (r[0], r[1], r[2] - self.z);
        let d2 = x * x + y * y + z * z;
        let k = self.mu0 / (T::lit(4.0) * T::PI()) * self.moment / (d2 * d2.sqrt());
        [-y * k, x * k, T::zero()]
    }

    fn description(&self) -> &str {
        "on-axis magnetic dipole"
    }
}

/// ∮A·dl around one coaxial winding at height `z` above the dipole, by the
/// midpoint rule in the loop angle over `segments` uniform arcs.
pub fn loop_flux_segments<T: Real>(
    geom: &DipoleSolenoidGeometry<T>,
    z: T,
    segments: usize,
    consts: &PhysicalConstants<T>,
) -> Result<T> {
    if geom.radius == T::zero() && z == T::zero() {
        return Err(PhaseError::Singular(
            "winding passes through the dipole".into(),
        ));
    }
    if segments == 0 {
        return Err(PhaseError::domain(
            "loop integral needs at least one segment",
        ));
    }
    let field = DipoleField {
        moment: geom.moment,
        z: T::zero(),
        mu0: consts.mu0(),
    };
    let n = T::from_usize_lossy(segments);
    let dphi = T::two_pi() / n;
    let r = geom.radius;
    let sum = (0..segments).fold(T::zero(), |acc, k| {
        let phi = (T::from_usize_lossy(k) + T::lit(0.5)) * dphi;
        let (s, c) = phi.sin_cos();
        let a = field.vector_potential([r * c, r * s, z]);
        // dl/dφ = R(−sin φ, cos φ, 0)
        acc + (a[0] * (-s) + a[1] * c) * r
    });
    let flux = sum * dphi;
    if !flux.is_finite() {
        return Err(PhaseError::Singular(format!(
            "loop flux at z = {z} is not finite"
        )));
    }
    Ok(flux)
}

pub fn loop_flux<T: Real>(
    geom: &DipoleSolenoidGeometry<T>,
    z: T,
    consts: &PhysicalConstants<T>,
) -> Result<T> {
    loop_flux_segments(geom, z, DEFAULT_LOOP_SEGMENTS, consts)
}

/// (μ0 μ / 2) R² / (R² + z²)^{3/2}.
pub fn loop_flux_closed_form<T: Real>(
    geom: &DipoleSolenoidGeometry<T>,
    z: T,
    consts: &PhysicalConstants<T>,
) -> T {
    let r2 = geom.radius * geom.radius;
    let d2 = r2 + z * z;
    consts.mu0() * geom.moment * T::lit(0.5) * r2 / (d2 * d2.sqrt())
}

/// (1/ħ)·n·I·∫ loop_flux dz over the winding sheet, by adaptive Simpson at
/// relative tolerance 1e-10. Windings span `[−L/2, L/2]` relative to the
/// solenoid centre; the dipole sits at `dipole_offset`.
pub fn solenoid_phase_rate<T: Real>(
    geom: &DipoleSolenoidGeometry<T>,
    consts: &PhysicalConstants<T>,
) -> Result<T> {
    geom.validate()?;
    if geom.moment == T::zero() {
        return Ok(T::zero());
    }
    let half = geom.length * T::lit(0.5);
    let lo = -half - geom.dipole_offset;
    let hi = half - geom.dipole_offset;
    let quad = AdaptiveSimpson::default();
    // The integrand is smooth but sharply peaked at z = 0 for long solenoids;
    // splitting there keeps every panel on one side of the peak.
    let integrand = |z: T| loop_flux(geom, z, consts).unwrap_or(T::nan());
    let total = if lo < T::zero() && hi > T::zero() {
        quad.integrate(integrand, lo, T::zero())? + quad.integrate(integrand, T::zero(), hi)?
    } else {
        quad.integrate(integrand, lo, hi)?
    };
    Ok(geom.turns_per_length * geom.current * total / consts.hbar())
}

/// Discrete-turn variant: Σ_k I·loop_flux(z_k)/ħ over `turns` evenly spaced
/// windings (centred in their length cells).
pub fn discrete_turn_phase_rate<T: Real>(
    geom: &DipoleSolenoidGeometry<T>,
    turns: usize,
    consts: &PhysicalConstants<T>,
) -> Result<T> {
    geom.validate()?;
    if turns == 0 {
        return Err(PhaseError::domain(
            "discrete solenoid needs at least one turn",
        ));
    }
    let cell = geom.length / T::from_usize_lossy(turns);
    let start = -geom.length * T::lit(0.5) - geom.dipole_offset;
    let mut sum = T::zero();
    for k in 0..turns {
        let z = start + (T::from_usize_lossy(k) + T::lit(0.5)) * cell;
        sum = sum + loop_flux(geom, z, consts)?;
    }
    // n·L turns in total carry the same current as the continuous sheet.
    let turn_weight = geom.turns_per_length * cell;
    Ok(turn_weight * geom.current * sum / consts.hbar())
}

/// μ0 μ (L/2)/√(R² + L²/4) for a centred dipole.
pub fn sheet_integral_closed_form<T: Real>(
    geom: &DipoleSolenoidGeometry<T>,
    consts: &PhysicalConstants<T>,
) -> T {
    let half = geom.length * T::lit(0.5);
    consts.mu0() * geom.moment * half / (geom.radius * geom.radius + half * half).sqrt()
}

/// μ B t / ħ.
pub fn naive_energy_phase<T: Real>(
    moment: T,
    field: T,
    t: T,
    consts: &PhysicalConstants<T>,
) -> Result<T> {
    if !(t >= T::zero()) {
        return Err(PhaseError::domain(format!(
            "duration must be >= 0, got {t}"
        )));
    }
    Ok(moment * field * t / consts.hbar())
}

/// Phase-rate ratio against μ μ0 n I / ħ at each aspect ratio.
pub fn convergence_table<T: Real>(
    geom: &DipoleSolenoidGeometry<T>,
    aspect_ratios: &[T],
    consts: &PhysicalConstants<T>,
) -> Result<Vec<(T, T, T)>> {
    let limit = geom.moment * geom.interior_field(consts) / consts.hbar();
    aspect_ratios
        .iter()
        .map(|&ar| {
            let g = geom.with_aspect_ratio(ar)?;
            let rate = solenoid_phase_rate(&g, consts)?;
            Ok((ar, rate, (rate / limit - T::one()).abs()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn geom() -> DipoleSolenoidGeometry<f64> {
        DipoleSolenoidGeometry::new(1.0, 1.0, 1.0, 1.0, 100.0).unwrap()
    }

    fn mu0_4pi() -> PhysicalConstants<f64> {
        PhysicalConstants::new(1.0, 1.0, 4.0 * PI).unwrap()
    }

    #[test]
    fn vector_potential_values() {
        let c = mu0_4pi();
        let on_axis = SphericalPoint::new(2.0, 0.0).unwrap();
        assert_eq!(dipole_vector_potential(on_axis, 1.0, &c).unwrap(), 0.0);
        let eq = SphericalPoint::new(1.0, FRAC_PI_2).unwrap();
        assert!((dipole_vector_potential(eq, 1.0, &c).unwrap() - 1.0).abs() < 1e-15);
        let far = SphericalPoint::new(2.0, FRAC_PI_2).unwrap();
        assert!((dipole_vector_potential(far, 1.0, &c).unwrap() - 0.25).abs() < 1e-15);
        let origin = SphericalPoint::new(0.0, 1.0).unwrap();
        assert!(matches!(
            dipole_vector_potential(origin, 1.0, &c),
            Err(PhaseError::Singular(_))
        ));
    }

    #[test]
    fn field_matches_spherical_formula() {
        let c = mu0_4pi();
        let f = DipoleField {
            moment: 1.3,
            z: 0.0,
            mu0: c.mu0(),
        };
        let (r, th) = (1.7f64, 0.6f64);
        let a = f.vector_potential([r * th.sin(), 0.0, r * th.cos()]);
        let expect = dipole_vector_potential(SphericalPoint::new(r, th).unwrap(), 1.3, &c).unwrap();
        assert!((a[1] - expect).abs() < 1e-14);
        assert!(a[0].abs() < 1e-18);
    }

    #[test]
    fn loop_flux_in_the_plane_of_the_dipole() {
        let c = mu0_4pi();
        let v = loop_flux(&geom(), 0.0, &c).unwrap();
        assert!((v - TAU).abs() < 1e-12);
    }

    #[test]
    fn loop_flux_is_even_and_decays() {
        let c = PhysicalConstants::natural();
        let g = geom();
        let up = loop_flux(&g, 0.731, &c).unwrap();
        let down = loop_flux(&g, -0.731, &c).unwrap();
        assert!((up - down).abs() < 1e-12);
        assert!(loop_flux(&g, 1e6, &c).unwrap() < 1e-17);
    }

    #[test]
    fn singular_winding() {
        let mut g = geom();
        g.radius = 0.0;
        assert!(loop_flux(&g, 0.0, &PhysicalConstants::natural()).is_err());
    }

    #[test]
    fn rate_scales_linearly() {
        let c = PhysicalConstants::natural();
        let g = geom();
        let r1 = solenoid_phase_rate(&g, &c).unwrap();
        let mut g2 = g;
        g2.current = 2.0;
        let r2 = solenoid_phase_rate(&g2, &c).unwrap();
        assert!((r2 - 2.0 * r1).abs() < 1e-12);
        let mut g0 = g;
        g0.moment = 0.0;
        assert_eq!(solenoid_phase_rate(&g0, &c).unwrap(), 0.0);
    }

    #[test]
    fn rate_matches_sheet_closed_form() {
        let c = PhysicalConstants::natural();
        for ar in [2.0, 10.0, 100.0] {
            let g = geom().with_aspect_ratio(ar).unwrap();
            let rate = solenoid_phase_rate(&g, &c).unwrap();
            let exact = sheet_integral_closed_form(&g, &c);
            assert!(
                (rate - exact).abs() / exact < 1e-9,
                "L/R {ar}: {rate} vs {exact}"
            );
        }
    }

    #[test]
    fn discrete_turns_converge_to_sheet() {
        let c = PhysicalConstants::natural();
        let g = geom().with_aspect_ratio(10.0).unwrap();
        let sheet = solenoid_phase_rate(&g, &c).unwrap();
        let coarse = (discrete_turn_phase_rate(&g, 40, &c).unwrap() - sheet).abs();
        let fine = (discrete_turn_phase_rate(&g, 400, &c).unwrap() - sheet).abs();
        assert!(fine < coarse / 50.0, "coarse {coarse}, fine {fine}");
        assert!(fine / sheet < 1e-4);
    }

    #[test]
    fn naive_phase() {
        let c = PhysicalConstants::natural();
        assert_eq!(naive_energy_phase(1.0, 1.0, 1.0, &c).unwrap(), 1.0);
        assert_eq!(naive_energy_phase(1.0, 1.0, 0.0, &c).unwrap(), 0.0);
        assert!(naive_energy_phase(1.0, 1.0, -1.0, &c).is_err());
    }
}
