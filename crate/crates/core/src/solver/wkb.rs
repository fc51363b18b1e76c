//! Semiclassical apparatus evolution along Lagrangian characteristics.
//!
//! Each characteristic j carries a position y_j, momentum p_j = ∂S/∂y, the
//! action S_j and a conserved probability weight w_j. Positions and momenta
//! follow Hamilton's equations for p²/2M + W(y) under a kick-drift-kick
//! leapfrog; S accumulates the classical action ∫(p²/2M − W)dt and the
//! density is recovered as P_j = w_j / (local spacing). The apparatus never
//! sees the particle coordinate.

use rustfft::num_complex::Complex;

use super::evolve::ParticleSplitStep;
use super::grid::{normalize_1d, Axis, JointWavefunction, ParticleWavefunction};
use super::hamiltonian::HamiltonianSpec;
use super::observables::interaction_expectation;
use crate::constants::PhysicalConstants;
use crate::error::{PhaseError, Result};
use crate::scalar::Real;

/// Characteristics below this share of the peak density are not used to
/// seed a WKB state from grid data.
const SEED_DENSITY_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq)]
pub struct WkbApparatus<T> {
    positions: Vec<T>,
    momenta: Vec<T>,
    action: Vec<T>,
    weights: Vec<T>,
    time: T,
    mass: T,
}

impl<T: Real> WkbApparatus<T> {
    /// Builds a state from explicit characteristics; weights are normalised
    /// to sum to one.
    pub fn new(
        positions: Vec<T>,
        momenta: Vec<T>,
        action: Vec<T>,
        weights: Vec<T>,
        mass: T,
    ) -> Result<Self> {
        let n = positions.len();
        if n < 3 {
            return Err(PhaseError::malformed(
                "a WKB state needs at least 3 characteristics",
            ));
        }
        if momenta.len() != n || action.len() != n || weights.len() != n {
            return Err(PhaseError::malformed(
                "characteristic arrays differ in length",
            ));
        }
        if !(mass > T::zero() && mass.is_finite()) {
            return Err(PhaseError::malformed(format!(
                "apparatus mass must be positive, got {mass}"
            )));
        }
        let all = positions
            .iter()
            .chain(&momenta)
            .chain(&action)
            .chain(&weights);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(PhaseError::malformed("characteristic data must be finite"));
        }
        if weights.iter().any(|w| *w < T::zero()) {
            return Err(PhaseError::malformed(
                "probability weights must be non-negative",
            ));
        }
        if positions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(PhaseError::malformed(
                "characteristic positions must be strictly increasing",
            ));
        }
        let total = weights.iter().fold(T::zero(), |a, w| a + *w);
        if total <= T::zero() {
            return Err(PhaseError::malformed("probability weights sum to zero"));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self {
            positions,
            momenta,
            action,
            weights,
            time: T::zero(),
            mass,
        })
    }

    /// Gaussian packet R² ∝ exp(−(y−c)²/2σ²) with S = ħk₀(y−c), sampled by
    /// `n` characteristics on c ± `half_width_sigmas`·σ.
    pub fn gaussian(
        center: T,
        sigma: T,
        k0: T,
        n: usize,
        half_width_sigmas: T,
        mass: T,
        consts: &PhysicalConstants<T>,
    ) -> Result<Self> {
        if !(sigma > T::zero()) || n < 3 {
            return Err(PhaseError::malformed(
                "gaussian WKB state needs σ > 0 and at least 3 characteristics",
            ));
        }
        let half = half_width_sigmas * sigma;
        let step = (half + half) / T::from_usize_lossy(n - 1);
        let positions: Vec<T> = (0..n)
            .map(|j| center - half + step * T::from_usize_lossy(j))
            .collect();
        let hbar = consts.hbar();
        let two = T::lit(2.0);
        let weights = positions
            .iter()
            .map(|y| {
                let d = (*y - center) / sigma;
                (-(d * d) / two).exp()
            })
            .collect();
        let momenta = vec![hbar * k0; n];
        let action = positions
            .iter()
            .map(|y| hbar * k0 * (*y - center))
            .collect();
        let mut s = Self::new(positions, momenta, action, weights, mass)?;
        s.reweight_to_density(&gaussian_density(center, sigma));
        Ok(s)
    }

    /// Seeds one characteristic per grid point where χ is non-negligible,
    /// reading S from the unwrapped phase of χ and p from its derivative.
    pub fn from_grid(
        axis: &Axis<T>,
        chi: &[Complex<T>],
        mass: T,
        consts: &PhysicalConstants<T>,
    ) -> Result<Self> {
        if chi.len() != axis.len() {
            return Err(PhaseError::malformed(
                "apparatus samples do not match the axis",
            ));
        }
        let peak = chi.iter().fold(T::zero(), |a, c| a.max(c.norm_sqr()));
        let floor = peak * T::lit(SEED_DENSITY_FLOOR);
        let keep: Vec<usize> = (0..chi.len())
            .filter(|&i| chi[i].norm_sqr() > floor)
            .collect();
        let (first, last) = match (keep.first(), keep.last()) {
            (Some(a), Some(b)) if b - a >= 2 => (*a, *b),
            _ => {
                return Err(PhaseError::malformed(
                    "apparatus state has too few significant samples",
                ))
            }
        };
        let idx: Vec<usize> = (first..=last).collect();
        let hbar = consts.hbar();
        let dy = axis.spacing();
        let positions: Vec<T> = idx.iter().map(|&i| axis.point(i)).collect();
        let mut phase = Vec::with_capacity(idx.len());
        let mut acc = chi[first].arg();
        phase.push(acc);
        for w in idx.windows(2) {
            acc = acc + (chi[w[1]] * chi[w[0]].conj()).arg();
            phase.push(acc);
        }
        let n = phase.len();
        let momenta = (0..n)
            .map(|j| {
                let (a, b) = (j.saturating_sub(1), (j + 1).min(n - 1));
                hbar * (phase[b] - phase[a]) / (dy * T::from_usize_lossy(b - a))
            })
            .collect();
        let action = phase.iter().map(|p| *p * hbar).collect();
        let density: Vec<T> = idx.iter().map(|&i| chi[i].norm_sqr()).collect();
        let mut s = Self::new(positions, momenta, action, density.clone(), mass)?;
        s.set_weights_from_density(&density);
        Ok(s)
    }

    fn widths(&self) -> Vec<T> {
        let y = &self.positions;
        let n = y.len();
        let half = T::lit(0.5);
        (0..n)
            .map(|j| match j {
                0 => y[1] - y[0],
                _ if j == n - 1 => y[n - 1] - y[n - 2],
                _ => (y[j + 1] - y[j - 1]) * half,
            })
            .collect()
    }

    fn set_weights_from_density(&mut self, density: &[T]) {
        let w = self.widths();
        let raw: Vec<T> = density.iter().zip(&w).map(|(p, d)| *p * *d).collect();
        let total = raw.iter().fold(T::zero(), |a, v| a + *v);
        self.weights = raw.into_iter().map(|v| v / total).collect();
    }

    fn reweight_to_density(&mut self, f: &dyn Fn(T) -> T) {
        let density: Vec<T> = self.positions.iter().map(|y| f(*y)).collect();
        self.set_weights_from_density(&density);
    }

    pub fn positions(&self) -> &[T] {
        &self.positions
    }

    pub fn momenta(&self) -> &[T] {
        &self.momenta
    }

    pub fn action(&self) -> &[T] {
        &self.action
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    /// P = R² at each characteristic.
    pub fn density(&self) -> Vec<T> {
        self.weights
            .iter()
            .zip(self.widths())
            .map(|(w, d)| *w / d)
            .collect()
    }

    pub fn mean_position(&self) -> T {
        self.positions
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |a, (y, w)| a + *y * *w)
    }

    pub fn mean_momentum(&self) -> T {
        self.momenta
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |a, (p, w)| a + *p * *w)
    }

    /// Interval index and fraction for `y`, or `None` outside the span.
    fn locate(&self, y: T) -> Option<(usize, T)> {
        let p = &self.positions;
        let last = p.len() - 1;
        if !(y >= p[0] && y <= p[last]) {
            return None;
        }
        let i = p.partition_point(|v| *v <= y).clamp(1, last) - 1;
        Some((i, (y - p[i]) / (p[i + 1] - p[i])))
    }

    /// R(y) by linear interpolation of P; zero outside the characteristics.
    pub fn amplitude_at(&self, y: T) -> T {
        let Some((i, u)) = self.locate(y) else {
            return T::zero();
        };
        let d = self.density();
        (d[i] + (d[i + 1] - d[i]) * u).max(T::zero()).sqrt()
    }

    /// S(y) by cubic Hermite interpolation using ∂S/∂y = p.
    pub fn action_at(&self, y: T) -> Option<T> {
        let (i, u) = self.locate(y)?;
        let h = self.positions[i + 1] - self.positions[i];
        let (s0, s1) = (self.action[i], self.action[i + 1]);
        let (m0, m1) = (self.momenta[i] * h, self.momenta[i + 1] * h);
        let (two, three) = (T::lit(2.0), T::lit(3.0));
        let u2 = u * u;
        let u3 = u2 * u;
        let h00 = two * u3 - three * u2 + T::one();
        let h10 = u3 - two * u2 + u;
        let h01 = -two * u3 + three * u2;
        let h11 = u3 - u2;
        Some(h00 * s0 + h10 * m0 + h01 * s1 + h11 * m1)
    }

    /// χ(y) = R exp(iS/ħ) sampled on `axis`, normalised on that grid.
    pub fn wavefunction_on(
        &self,
        axis: &Axis<T>,
        consts: &PhysicalConstants<T>,
    ) -> Vec<Complex<T>> {
        let hbar = consts.hbar();
        let mut v: Vec<Complex<T>> = axis
            .points()
            .into_iter()
            .map(|y| match self.action_at(y) {
                Some(s) => Complex::from_polar(self.amplitude_at(y), s / hbar),
                None => Complex::new(T::zero(), T::zero()),
            })
            .collect();
        normalize_1d(&mut v, axis.spacing());
        v
    }

    /// Leapfrog over `steps` × `dt` in W alone. Crossing characteristics
    /// raise [`PhaseError::WkbBreakdown`].
    pub fn advance(&mut self, h: &HamiltonianSpec<T>, dt: T, steps: usize) -> Result<()> {
        if !dt.is_finite() || dt == T::zero() {
            return Err(PhaseError::domain(format!(
                "time step must be finite and non-zero, got {dt}"
            )));
        }
        let half = T::lit(0.5);
        let m = self.mass;
        for step in 0..steps {
            for j in 0..self.positions.len() {
                let y = self.positions[j];
                let w0 = h.internal_potential(y);
                let p_half = self.momenta[j] + h.internal_force(y) * dt * half;
                let y_new = y + p_half / m * dt;
                let w1 = h.internal_potential(y_new);
                self.momenta[j] = p_half + h.internal_force(y_new) * dt * half;
                self.positions[j] = y_new;
                self.action[j] =
                    self.action[j] + dt * p_half * p_half / (m + m) - half * dt * (w0 + w1);
            }
            if let Some(j) = self.positions.windows(2).position(|w| !(w[1] > w[0])) {
                return Err(PhaseError::WkbBreakdown(format!(
                    "characteristics {j} and {} crossed at t = {}",
                    j + 1,
                    self.time + dt * T::from_usize_lossy(step + 1)
                )));
            }
        }
        self.time = self.time + dt * T::from_usize_lossy(steps);
        Ok(())
    }
}

fn gaussian_density<T: Real>(center: T, sigma: T) -> impl Fn(T) -> T {
    move |y| {
        let d = (y - center) / sigma;
        (-(d * d) * T::lit(0.5)).exp()
    }
}

/// Advances the particle under p²/2m plus the external pulse and the
/// apparatus under W alone. V_int is ignored: the factorized picture leaves
/// no channel for the particle to act on the apparatus.
pub fn evolve_factorized<T: Real>(
    mut particle: ParticleWavefunction<T>,
    mut apparatus: WkbApparatus<T>,
    h: &HamiltonianSpec<T>,
    dt: T,
    steps: usize,
    consts: &PhysicalConstants<T>,
) -> Result<(ParticleWavefunction<T>, WkbApparatus<T>)> {
    let axis = *particle.axis();
    ParticleSplitStep::new(&axis, h, dt, consts)?.run(&mut particle, steps)?;
    apparatus.advance(h, dt, steps)?;
    Ok((particle, apparatus))
}

/// ψ(x)·χ(y) on the joint grid.
pub fn factorized_product<T: Real>(
    particle: &ParticleWavefunction<T>,
    apparatus: &WkbApparatus<T>,
    y: Axis<T>,
    consts: &PhysicalConstants<T>,
) -> Result<JointWavefunction<T>> {
    let chi = apparatus.wavefunction_on(&y, consts);
    let mut psi = JointWavefunction::product(*particle.axis(), y, particle.data(), &chi)?;
    psi.set_time(particle.time());
    Ok(psi)
}

/// arg⟨Ψ_joint|Ψ_fact⟩: the phase the factorized evolution misses.
pub fn phase_discrepancy<T: Real>(
    joint: &JointWavefunction<T>,
    factorized: &JointWavefunction<T>,
) -> Result<T> {
    let o = joint.inner(factorized)?;
    if o.norm() == T::zero() {
        return Err(PhaseError::domain(
            "states are orthogonal; the relative phase is undefined",
        ));
    }
    Ok(o.arg())
}

/// First-order estimate ⟨V_int⟩₀·t/ħ of [`phase_discrepancy`].
pub fn first_order_interaction_phase<T: Real>(
    psi0: &JointWavefunction<T>,
    h: &HamiltonianSpec<T>,
    t: T,
    consts: &PhysicalConstants<T>,
) -> T {
    interaction_expectation(psi0, h) * t / consts.hbar()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_characteristics_drift_linearly() {
        let c = PhysicalConstants::<f64>::natural();
        let h = HamiltonianSpec::new(1.0, 4.0).unwrap();
        let mut s = WkbApparatus::gaussian(0.0, 1.0, 2.0, 65, 6.0, 4.0, &c).unwrap();
        s.advance(&h, 0.01, 100).unwrap();
        // v = ħk/M = 0.5
        assert!((s.mean_position() - 0.5).abs() < 1e-12);
        assert!((s.mean_momentum() - 2.0).abs() < 1e-12);
        // Free action along a characteristic: S₀ + p²t/2M.
        let j = 32;
        assert!((s.action()[j] - (0.0 + 4.0 * 1.0 / 8.0)).abs() < 1e-12);
    }

    #[test]
    fn focusing_packet_breaks_down() {
        let n = 33;
        let positions: Vec<f64> = (0..n)
            .map(|j| -1.0 + 2.0 * j as f64 / (n - 1) as f64)
            .collect();
        let momenta: Vec<f64> = positions.iter().map(|y| -y).collect();
        let action = vec![0.0; n];
        let weights = vec![1.0; n];
        let mut s = WkbApparatus::new(positions, momenta, action, weights, 1.0).unwrap();
        let h = HamiltonianSpec::new(1.0, 1.0).unwrap();
        assert!(matches!(
            s.advance(&h, 0.01, 200),
            Err(PhaseError::WkbBreakdown(_))
        ));
    }

    #[test]
    fn hermite_action_is_exact_for_quadratics() {
        let positions: Vec<f64> = (0..9).map(|j| j as f64 * 0.5).collect();
        let action = positions.iter().map(|y| 0.5 * y * y).collect();
        let momenta = positions.clone();
        let s = WkbApparatus::new(positions, momenta, action, vec![1.0; 9], 1.0).unwrap();
        assert!((s.action_at(1.3).unwrap() - 0.845).abs() < 1e-14);
        assert!(s.action_at(5.0).is_none());
        assert_eq!(s.amplitude_at(-1.0), 0.0);
    }
}
