use crate::error::{PhaseError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Value `v_i` holds on `[t_i, t_{i+1})`.
    PiecewiseConstant,
    #[default]
    PiecewiseLinear,
}

/// Scalar potential history V(t) on one interferometer arm.
///
/// Outside the sampled span the boundary value is held, so a pulse is "off"
/// before and after only when its first and last samples are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPulse<T> {
    samples: Vec<(T, T)>,
    interpolation: Interpolation,
}

impl<T: Real> PotentialPulse<T> {
    pub fn new(samples: Vec<(T, T)>, interpolation: Interpolation) -> Result<Self> {
        if samples.len() < 2 {
            return Err(PhaseError::malformed(format!(
                "a pulse needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if samples
            .iter()
            .any(|(t, v)| !t.is_finite() || !v.is_finite())
        {
            return Err(PhaseError::malformed("pulse samples must be finite"));
        }
        if let Some(w) = samples.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(PhaseError::malformed(format!(
                "pulse times must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            )));
        }
        Ok(Self {
            samples,
            interpolation,
        })
    }

    /// V ≡ `value` on `[t0, t1]`.
    pub fn constant(value: T, t0: T, t1: T) -> Result<Self> {
        Self::new(
            vec![(t0, value), (t1, value)],
            Interpolation::PiecewiseLinear,
        )
    }

    /// Zero outside `[t_on, t_off)`, `height` inside.
    pub fn rectangular(t_on: T, t_off: T, height: T) -> Result<Self> {
        // Leading zero sample so the held boundary value before t_on is 0.
        let lead = t_on - (t_off - t_on).abs().max(T::one());
        Self::new(
            vec![(lead, T::zero()), (t_on, height), (t_off, T::zero())],
            Interpolation::PiecewiseConstant,
        )
    }

    pub fn samples(&self) -> &[(T, T)] {
        &self.samples
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn start(&self) -> T {
        self.samples[0].0
    }

    pub fn end(&self) -> T {
        self.samples[self.samples.len() - 1].0
    }

    pub fn value_at(&self, t: T) -> T {
        let s = &self.samples;
        let last = s.len() - 1;
        if t <= s[0].0 {
            return s[0].1;
        }
        if t >= s[last].0 {
            return s[last].1;
        }
        // First index with time > t; t lies in [s[i-1].0, s[i].0).
        let i = s.partition_point(|(ti, _)| *ti <= t);
        let (t0, v0) = s[i - 1];
        let (t1, v1) = s[i];
        match self.interpolation {
            Interpolation::PiecewiseConstant => v0,
            Interpolation::PiecewiseLinear => v0 + (v1 - v0) * (t - t0) / (t1 - t0),
        }
    }

    /// Exact ∫_{t0}^{t1} V(t) dt under the interpolation rule.
    pub fn integral(&self, t0: T, t1: T) -> Result<T> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(PhaseError::domain("integration bounds must be finite"));
        }
        if t0 >= t1 {
            return Err(PhaseError::domain(format!(
                "integration requires t0 < t1, got [{t0}, {t1}]"
            )));
        }
        // Breakpoints inside (t0, t1) split the range into pieces on which V
        // is constant or linear; each piece integrates exactly.
        let mut knots = Vec::with_capacity(self.samples.len() + 2);
        knots.push(t0);
        knots.extend(
            self.samples
                .iter()
                .map(|(t, _)| *t)
                .filter(|t| *t > t0 && *t < t1),
        );
        knots.push(t1);
        let half = T::lit(0.5);
        let total = knots.windows(2).fold(T::zero(), |acc, w| {
            let (a, b) = (w[0], w[1]);
            let piece = match self.interpolation {
                // The value on [a, b) is the value at a.
                Interpolation::PiecewiseConstant => self.value_at(a) * (b - a),
                Interpolation::PiecewiseLinear => {
                    (self.value_at(a) + self.value_at(b)) * half * (b - a)
                }
            };
            acc + piece
        });
        Ok(total)
    }

    /// Same shape, delayed by `dt`.
    pub fn shifted(&self, dt: T) -> Self {
        Self {
            samples: self.samples.iter().map(|(t, v)| (*t + dt, *v)).collect(),
            interpolation: self.interpolation,
        }
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            samples: self
                .samples
                .iter()
                .map(|(t, v)| (*t, *v * factor))
                .collect(),
            interpolation: self.interpolation,
        }
    }

    /// Closure of the time set on which V ≠ 0, or `None` for an all-zero pulse.
    ///
    /// Unbounded supports (non-zero boundary samples) are reported with
    /// infinite endpoints.
    pub fn support(&self) -> Option<(T, T)> {
        let s = &self.samples;
        let first = s.iter().position(|(_, v)| *v != T::zero())?;
        let last = s.iter().rposition(|(_, v)| *v != T::zero())?;
        let lo = if first == 0 {
            T::neg_infinity()
        } else {
            match self.interpolation {
                Interpolation::PiecewiseConstant => s[first].0,
                Interpolation::PiecewiseLinear => s[first - 1].0,
            }
        };
        let hi = if last == s.len() - 1 {
            T::infinity()
        } else {
            s[last + 1].0
        };
        Some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_and_unsorted() {
        assert!(PotentialPulse::new(vec![(0.0, 1.0)], Interpolation::PiecewiseLinear).is_err());
        assert!(
            PotentialPulse::new(vec![(0.0, 1.0), (0.0, 2.0)], Interpolation::PiecewiseLinear)
                .is_err()
        );
        assert!(PotentialPulse::new(
            vec![(1.0, 1.0), (0.0, 2.0)],
            Interpolation::PiecewiseConstant
        )
        .is_err());
    }

    #[test]
    fn boundary_values_hold_outside_span() {
        let p = PotentialPulse::new(vec![(0.0, 3.0), (1.0, 5.0)], Interpolation::PiecewiseLinear)
            .unwrap();
        assert_eq!(p.value_at(-10.0), 3.0);
        assert_eq!(p.value_at(10.0), 5.0);
        assert_eq!(p.value_at(0.5), 4.0);
    }

    #[test]
    fn piecewise_constant_integral_is_exact() {
        let p = PotentialPulse::new(
            vec![(0.0f64, 0.0), (1.0, 2.0), (1.5, -1.0), (4.0, 0.0)],
            Interpolation::PiecewiseConstant,
        )
        .unwrap();
        // 2·0.5 − 1·2.5 = −1.5
        assert!((p.integral(-1.0, 9.0).unwrap() + 1.5).abs() < 1e-15);
        // Partial window [1.25, 2]: 2·0.25 − 0.5
        assert!(p.integral(1.25, 2.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn rectangular_support() {
        let p = PotentialPulse::rectangular(2.0f64, 5.0, 1.5).unwrap();
        assert_eq!(p.support(), Some((2.0, 5.0)));
        assert!((p.integral(0.0, 10.0).unwrap() - 4.5).abs() < 1e-15);
        let tri = PotentialPulse::new(
            vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)],
            Interpolation::PiecewiseLinear,
        )
        .unwrap();
        assert_eq!(tri.support(), Some((0.0, 2.0)));
    }

    #[test]
    fn reversed_bounds_are_a_domain_error() {
        let p = PotentialPulse::constant(1.0, 0.0, 1.0).unwrap();
        assert!(matches!(p.integral(1.0, 1.0), Err(PhaseError::Domain(_))));
        assert!(matches!(p.integral(2.0, 1.0), Err(PhaseError::Domain(_))));
    }
}
