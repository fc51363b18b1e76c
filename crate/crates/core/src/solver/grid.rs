use rustfft::num_complex::Complex;

use crate::error::{PhaseError, Result};
use crate::scalar::Real;

/// Periodic, uniformly sampled axis: `n` points `min + i·(max − min)/n`,
/// `max` itself excluded. `n` must be a power of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis<T> {
    min: T,
    max: T,
    n: usize,
}

impl<T: Real> Axis<T> {
    pub fn new(min: T, max: T, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(PhaseError::malformed(format!(
                "axis bounds must be finite with max > min (got [{min}, {max}])"
            )));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(PhaseError::malformed(format!(
                "axis length must be a power of two >= 2, got {n}"
            )));
        }
        Ok(Self { min, max, n })
    }

    /// Axis of `n` points centred on `center` with total extent `width`.
    pub fn centered(center: T, width: T, n: usize) -> Result<Self> {
        let h = width * T::lit(0.5);
        Self::new(center - h, center + h, n)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn min(&self) -> T {
        self.min
    }

    pub fn max(&self) -> T {
        self.max
    }

    pub fn extent(&self) -> T {
        self.max - self.min
    }

    pub fn spacing(&self) -> T {
        self.extent() / T::from_usize_lossy(self.n)
    }

    pub fn point(&self, i: usize) -> T {
        self.min + self.spacing() * T::from_usize_lossy(i)
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<T> {
        let dk = T::two_pi() / self.extent();
        let n = self.n;
        (0..n)
            .map(|j| {
                if j < n / 2 {
                    dk * T::from_usize_lossy(j)
                } else {
                    -dk * T::from_usize_lossy(n - j)
                }
            })
            .collect()
    }

    pub fn nyquist(&self) -> T {
        T::PI() / self.spacing()
    }
}

/// Normalised Gaussian packet on `axis` whose probability density has
/// standard deviation `sigma`, centred at `center` with mean wavenumber `k0`.
pub fn gaussian_packet<T: Real>(axis: &Axis<T>, center: T, sigma: T, k0: T) -> Vec<Complex<T>> {
    let quarter = T::lit(0.25);
    let mut v: Vec<Complex<T>> = axis
        .points()
        .into_iter()
        .map(|x| {
            let d = x - center;
            Complex::from_polar((-(d * d) * quarter / (sigma * sigma)).exp(), k0 * d)
        })
        .collect();
    normalize_1d(&mut v, axis.spacing());
    v
}

pub fn norm_1d<T: Real>(v: &[Complex<T>], spacing: T) -> T {
    v.iter().fold(T::zero(), |a, c| a + c.norm_sqr()) * spacing
}

pub fn normalize_1d<T: Real>(v: &mut [Complex<T>], spacing: T) {
    let n = norm_1d(v, spacing);
    if n > T::zero() {
        let s = T::one() / n.sqrt();
        v.iter_mut().for_each(|c| *c = *c * s);
    }
}

/// Ψ(x, y, t) on an `N_x × N_y` lattice, stored row-major with x as the row
/// index: element `(i, j)` lives at `i·N_y + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointWavefunction<T> {
    x: Axis<T>,
    y: Axis<T>,
    data: Vec<Complex<T>>,
    time: T,
}

impl<T: Real> JointWavefunction<T> {
    pub fn new(x: Axis<T>, y: Axis<T>, data: Vec<Complex<T>>, time: T) -> Result<Self> {
        if data.len() != x.len() * y.len() {
            return Err(PhaseError::malformed(format!(
                "grid data has {} values, expected {} x {}",
                data.len(),
                x.len(),
                y.len()
            )));
        }
        Ok(Self { x, y, data, time })
    }

    pub fn from_fn(x: Axis<T>, y: Axis<T>, f: impl Fn(T, T) -> Complex<T>) -> Self {
        let ys = y.points();
        let data = x
            .points()
            .into_iter()
            .flat_map(|xv| ys.iter().map(|&yv| f(xv, yv)).collect::<Vec<_>>())
            .collect();
        Self {
            x,
            y,
            data,
            time: T::zero(),
        }
    }

    /// ψ(x)·χ(y).
    pub fn product(x: Axis<T>, y: Axis<T>, psi: &[Complex<T>], chi: &[Complex<T>]) -> Result<Self> {
        if psi.len() != x.len() || chi.len() != y.len() {
            return Err(PhaseError::malformed("factor lengths must match the axes"));
        }
        let data = psi
            .iter()
            .flat_map(|a| chi.iter().map(move |b| *a * *b))
            .collect();
        Self::new(x, y, data, T::zero())
    }

    pub fn x_axis(&self) -> &Axis<T> {
        &self.x
    }

    pub fn y_axis(&self) -> &Axis<T> {
        &self.y
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x.len(), self.y.len())
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn set_time(&mut self, t: T) {
        self.time = t;
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex<T> {
        self.data[ix * self.y.len() + iy]
    }

    /// Row of amplitudes χ(y) at fixed particle index `ix`.
    pub fn row(&self, ix: usize) -> &[Complex<T>] {
        let ny = self.y.len();
        &self.data[ix * ny..(ix + 1) * ny]
    }

    pub fn cell_area(&self) -> T {
        self.x.spacing() * self.y.spacing()
    }

    /// Σ|Ψ|² dx dy.
    pub fn norm(&self) -> T {
        self.data.iter().fold(T::zero(), |a, c| a + c.norm_sqr()) * self.cell_area()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > T::zero() {
            let s = T::one() / n.sqrt();
            self.data.iter_mut().for_each(|c| *c = *c * s);
        }
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }

    /// ⟨self|other⟩ = Σ Ψ̄_self Ψ_other dx dy.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if !self.same_grid(other) {
            return Err(PhaseError::malformed("inner product needs identical grids"));
        }
        let s = self
            .data
            .iter()
            .zip(&other.data)
            .fold(Complex::new(T::zero(), T::zero()), |a, (u, v)| {
                a + u.conj() * *v
            });
        Ok(s * self.cell_area())
    }

    /// ‖self − other‖ in L².
    pub fn l2_distance(&self, other: &Self) -> Result<T> {
        if !self.same_grid(other) {
            return Err(PhaseError::malformed("distance needs identical grids"));
        }
        let s = self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |a, (u, v)| a + (*u - *v).norm_sqr());
        Ok((s * self.cell_area()).sqrt())
    }

    /// ∫|Ψ|² dy as a function of x.
    pub fn x_marginal(&self) -> Vec<T> {
        let dy = self.y.spacing();
        self.data
            .chunks(self.y.len())
            .map(|row| row.iter().fold(T::zero(), |a, c| a + c.norm_sqr()) * dy)
            .collect()
    }

    /// ∫|Ψ|² dx as a function of y.
    pub fn y_marginal(&self) -> Vec<T> {
        let dx = self.x.spacing();
        let mut out = vec![T::zero(); self.y.len()];
        for row in self.data.chunks(self.y.len()) {
            for (o, c) in out.iter_mut().zip(row) {
                *o = *o + c.norm_sqr();
            }
        }
        out.iter_mut().for_each(|v| *v = *v * dx);
        out
    }

    pub fn has_non_finite(&self) -> bool {
        self.data
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
    }
}

/// Single-particle ψ(x, t) on a periodic axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleWavefunction<T> {
    axis: Axis<T>,
    data: Vec<Complex<T>>,
    time: T,
}

impl<T: Real> ParticleWavefunction<T> {
    pub fn new(axis: Axis<T>, data: Vec<Complex<T>>, time: T) -> Result<Self> {
        if data.len() != axis.len() {
            return Err(PhaseError::malformed(format!(
                "particle wavefunction has {} values for an axis of {}",
                data.len(),
                axis.len()
            )));
        }
        Ok(Self { axis, data, time })
    }

    pub fn gaussian(axis: Axis<T>, center: T, sigma: T, k0: T) -> Self {
        let data = gaussian_packet(&axis, center, sigma, k0);
        Self {
            axis,
            data,
            time: T::zero(),
        }
    }

    pub fn axis(&self) -> &Axis<T> {
        &self.axis
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn set_time(&mut self, t: T) {
        self.time = t;
    }

    pub fn norm(&self) -> T {
        norm_1d(&self.data, self.axis.spacing())
    }
}
