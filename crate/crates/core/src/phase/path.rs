use crate::error::{PhaseError, Result};
use crate::scalar::Real;

fn check_times<T: Real>(times: &[T], what: &str) -> Result<()> {
    if times.len() < 2 {
        return Err(PhaseError::malformed(format!(
            "{what} needs at least 2 samples, got {}",
            times.len()
        )));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(PhaseError::malformed(format!(
            "{what} times must be finite"
        )));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
        return Err(PhaseError::malformed(format!(
            "{what} times must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Trajectory of every system coordinate with conjugate momenta and the total
/// energy, sampled at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigPath<T> {
    times: Vec<T>,
    coordinates: Vec<Vec<T>>,
    momenta: Vec<Vec<T>>,
    energy: Vec<T>,
}

impl<T: Real> ConfigPath<T> {
    pub fn new(
        times: Vec<T>,
        coordinates: Vec<Vec<T>>,
        momenta: Vec<Vec<T>>,
        energy: Vec<T>,
    ) -> Result<Self> {
        check_times(&times, "config path")?;
        let n = times.len();
        if coordinates.len() != n || momenta.len() != n || energy.len() != n {
            return Err(PhaseError::malformed(format!(
                "config path lists must match {n} times (coordinates {}, momenta {}, energy {})",
                coordinates.len(),
                momenta.len(),
                energy.len()
            )));
        }
        let dim = coordinates[0].len();
        if dim == 0 {
            return Err(PhaseError::malformed("config path dimension must be >= 1"));
        }
        for (k, (q, p)) in coordinates.iter().zip(&momenta).enumerate() {
            if q.len() != dim {
                return Err(PhaseError::malformed(format!(
                    "coordinate dimension changes along path at sample {k}: {} vs {dim}",
                    q.len()
                )));
            }
            if p.len() != q.len() {
                return Err(PhaseError::malformed(format!(
                    "momentum/coordinate dimension mismatch at sample {k}: {} vs {}",
                    p.len(),
                    q.len()
                )));
            }
        }
        let finite = coordinates
            .iter()
            .chain(&momenta)
            .flatten()
            .chain(&energy)
            .all(|v| v.is_finite());
        if !finite {
            return Err(PhaseError::malformed("config path values must be finite"));
        }
        Ok(Self {
            times,
            coordinates,
            momenta,
            energy,
        })
    }

    /// A path whose coordinates never move: only the energy history matters.
    pub fn stationary(times: Vec<T>, dim: usize, energy: Vec<T>) -> Result<Self> {
        let n = times.len();
        Self::new(
            times,
            vec![vec![T::zero(); dim]; n],
            vec![vec![T::zero(); dim]; n],
            energy,
        )
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn coordinates(&self) -> &[Vec<T>] {
        &self.coordinates
    }

    pub fn momenta(&self) -> &[Vec<T>] {
        &self.momenta
    }

    pub fn energy(&self) -> &[T] {
        &self.energy
    }

    pub fn dimension(&self) -> usize {
        self.coordinates[0].len()
    }

    pub fn span(&self) -> (T, T) {
        (self.times[0], self.times[self.times.len() - 1])
    }
}

/// Particle worldline in three dimensions with its charge.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimePath<T> {
    times: Vec<T>,
    positions: Vec<[T; 3]>,
    charge: T,
}

impl<T: Real> SpacetimePath<T> {
    pub fn new(times: Vec<T>, positions: Vec<[T; 3]>, charge: T) -> Result<Self> {
        check_times(&times, "spacetime path")?;
        if positions.len() != times.len() {
            return Err(PhaseError::malformed(format!(
                "spacetime path has {} times but {} positions",
                times.len(),
                positions.len()
            )));
        }
        if positions.iter().flatten().any(|v| !v.is_finite()) || !charge.is_finite() {
            return Err(PhaseError::malformed(
                "spacetime path positions and charge must be finite",
            ));
        }
        Ok(Self {
            times,
            positions,
            charge,
        })
    }

    /// Planar polygon approximating a circle of `radius` about `(cx, cy)`,
    /// traversed counter-clockwise over `[t0, t1]` with `segments` chords.
    pub fn circle(
        center: (T, T),
        radius: T,
        segments: usize,
        t0: T,
        t1: T,
        charge: T,
    ) -> Result<Self> {
        if segments < 3 {
            return Err(PhaseError::malformed("a closed loop needs >= 3 segments"));
        }
        let n = T::from_usize_lossy(segments);
        let (times, positions) = (0..=segments)
            .map(|k| {
                let frac = T::from_usize_lossy(k) / n;
                // Close the loop bit-exactly on the starting point.
                let ang = if k == segments {
                    T::zero()
                } else {
                    T::two_pi() * frac
                };
                (
                    t0 + (t1 - t0) * frac,
                    [
                        center.0 + radius * ang.cos(),
                        center.1 + radius * ang.sin(),
                        T::zero(),
                    ],
                )
            })
            .unzip();
        Self::new(times, positions, charge)
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn positions(&self) -> &[[T; 3]] {
        &self.positions
    }

    pub fn charge(&self) -> T {
        self.charge
    }

    pub fn span(&self) -> (T, T) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    /// Same time samples, positions visited in the opposite order.
    pub fn reversed(&self) -> Self {
        let mut positions = self.positions.clone();
        positions.reverse();
        Self {
            times: self.times.clone(),
            positions,
            charge: self.charge,
        }
    }
}
