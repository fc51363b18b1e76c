//! Closed-form phase functionals: the scalar-potential phase, the combined
//! scalar/vector-potential phase along a worldline, and the Lagrangian phase
//! over a configuration-space path. Phases are returned unwrapped.

mod field;
mod path;
mod pulse;

pub use field::{FluxLine, FnField, VectorPotentialField, ZeroField};
pub use path::{ConfigPath, SpacetimePath};
pub use pulse::{Interpolation, PotentialPulse};

use crate::constants::PhysicalConstants;
use crate::error::{PhaseError, Result};
use crate::quadrature::{gauss_legendre3_unit, trapezoid};
use crate::scalar::Real;

/// φ = (q/ħ) ∫_{t0}^{t1} V(t) dt, integrated exactly for the pulse's
/// piecewise-constant or piecewise-linear shape.
pub fn potential_phase<T: Real>(
    pulse: &PotentialPulse<T>,
    charge: T,
    t0: T,
    t1: T,
    consts: &PhysicalConstants<T>,
) -> Result<T> {
    Ok(charge / consts.hbar() * pulse.integral(t0, t1)?)
}

/// Per-segment rule for ∫A·dr along a polygonal path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LineRule {
    /// A at the chord midpoint; second order in segment length.
    Midpoint,
    /// Endpoints and midpoint; fourth order.
    #[default]
    Simpson,
    /// Three Gauss–Legendre nodes per chord; sixth order.
    GaussLegendre3,
}

/// ∫A·dr along the straight chords joining consecutive path positions.
pub fn vector_line_integral<T: Real>(
    positions: &[[T; 3]],
    field: &dyn VectorPotentialField<T>,
    rule: LineRule,
) -> T {
    let dot = |a: [T; 3], b: [T; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let lerp = |a: [T; 3], b: [T; 3], s: T| {
        [
            a[0] + (b[0] - a[0]) * s,
            a[1] + (b[1] - a[1]) * s,
            a[2] + (b[2] - a[2]) * s,
        ]
    };
    let half = T::lit(0.5);
    let sixth = T::lit(1.0 / 6.0);
    let nodes = gauss_legendre3_unit::<T>();
    positions.windows(2).fold(T::zero(), |acc, w| {
        let (a, b) = (w[0], w[1]);
        let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let avg_a = match rule {
            LineRule::Midpoint => dot(field.vector_potential(lerp(a, b, half)), d),
            LineRule::Simpson => {
                let fa = dot(field.vector_potential(a), d);
                let fm = dot(field.vector_potential(lerp(a, b, half)), d);
                let fb = dot(field.vector_potential(b), d);
                (fa + T::lit(4.0) * fm + fb) * sixth
            }
            LineRule::GaussLegendre3 => nodes.iter().fold(T::zero(), |s, (x, wgt)| {
                s + *wgt * dot(field.vector_potential(lerp(a, b, *x)), d)
            }),
        };
        acc + avg_a
    })
}

/// φ = (q/ħ)[∫V dt − ∫A·dr] along a worldline.
///
/// `potential` is the scalar potential experienced along the path as a
/// function of time; it is integrated over the path's time span.
pub fn electromagnetic_phase<T: Real>(
    path: &SpacetimePath<T>,
    potential: &PotentialPulse<T>,
    field: &dyn VectorPotentialField<T>,
    consts: &PhysicalConstants<T>,
    rule: LineRule,
) -> Result<T> {
    let (t0, t1) = path.span();
    let scalar = potential.integral(t0, t1)?;
    let vector = vector_line_integral(path.positions(), field, rule);
    let phase = path.charge() / consts.hbar() * (scalar - vector);
    if !phase.is_finite() {
        return Err(PhaseError::Singular(format!(
            "vector potential '{}' is singular on the path",
            field.description()
        )));
    }
    Ok(phase)
}

/// ∫E dt by the trapezoid rule.
pub fn energy_integral<T: Real>(path: &ConfigPath<T>) -> T {
    trapezoid(path.times(), path.energy())
}

/// Σ_i ∫p_i dq_i with trapezoid weighting of p on each increment of q.
pub fn momentum_integral<T: Real>(path: &ConfigPath<T>) -> T {
    let half = T::lit(0.5);
    path.coordinates()
        .windows(2)
        .zip(path.momenta().windows(2))
        .fold(T::zero(), |acc, (q, p)| {
            (0..q[0].len()).fold(acc, |acc, i| {
                acc + (p[0][i] + p[1][i]) * half * (q[1][i] - q[0][i])
            })
        })
}

/// φ = (1/ħ)[∫E dt − Σ_i ∫p_i dq_i].
pub fn lagrangian_phase<T: Real>(path: &ConfigPath<T>, consts: &PhysicalConstants<T>) -> T {
    (energy_integral(path) - momentum_integral(path)) / consts.hbar()
}

/// ∫E_a dt − ∫E_b dt for two paths spanning the same observation window.
pub fn energy_integral_difference<T: Real>(a: &ConfigPath<T>, b: &ConfigPath<T>) -> Result<T> {
    let (a0, a1) = a.span();
    let (b0, b1) = b.span();
    let scale = a0
        .abs()
        .max(a1.abs())
        .max(b0.abs())
        .max(b1.abs())
        .max(T::one());
    let tol = T::epsilon() * T::lit(16.0) * scale;
    if (a0 - b0).abs() > tol || (a1 - b1).abs() > tol {
        return Err(PhaseError::domain(format!(
            "paths must share a time span: [{a0}, {a1}] vs [{b0}, {b1}]"
        )));
    }
    Ok(energy_integral(a) - energy_integral(b))
}
