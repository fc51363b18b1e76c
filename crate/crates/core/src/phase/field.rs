use crate::scalar::Real;

/// Static vector potential A(r). Evaluation must be deterministic.
pub trait VectorPotentialField<T: Real>: Send + Sync {
    fn vector_potential(&self, r: [T; 3]) -> [T; 3];

    fn description(&self) -> &str;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroField;

impl<T: Real> VectorPotentialField<T> for ZeroField {
    fn vector_potential(&self, _r: [T; 3]) -> [T; 3] {
        [T::zero(); 3]
    }

    fn description(&self) -> &str {
        "zero"
    }
}

/// Infinitely thin flux line along z through `(cx, cy)`:
/// A = Φ/(2πρ) φ̂, curl-free everywhere except on the line.
#[derive(Debug, Clone, Copy)]
pub struct FluxLine<T> {
    pub flux: T,
    pub center: (T, T),
}

impl<T: Real> FluxLine<T> {
    pub fn new(flux: T) -> Self {
        Self {
            flux,
            center: (T::zero(), T::zero()),
        }
    }
}

impl<T: Real> VectorPotentialField<T> for FluxLine<T> {
    fn vector_potential(&self, r: [T; 3]) -> [T; 3] {
        let x = r[0] - self.center.0;
        let y = r[1] - self.center.1;
        let rho2 = x * x + y * y;
        let k = self.flux / (T::two_pi() * rho2);
        [-y * k, x * k, T::zero()]
    }

    fn description(&self) -> &str {
        "ideal flux line"
    }
}

/// Wraps a closure as a field.
pub struct FnField<F> {
    f: F,
    label: String,
}

impl<F> FnField<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self {
            f,
            label: label.into(),
        }
    }
}

impl<T: Real, F> VectorPotentialField<T> for FnField<F>
where
    F: Fn([T; 3]) -> [T; 3] + Send + Sync,
{
    fn vector_potential(&self, r: [T; 3]) -> [T; 3] {
        (self.f)(r)
    }

    fn description(&self) -> &str {
        &self.label
    }
}
