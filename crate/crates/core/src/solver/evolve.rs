use rayon::prelude::*;
use rustfft::num_complex::Complex;

use super::fft::{Fft1, Fft2};
use super::grid::{Axis, JointWavefunction, ParticleWavefunction};
use super::hamiltonian::{ExternalPulse, HamiltonianSpec};
use super::observables::spectral_tail_fraction;
use crate::constants::PhysicalConstants;
use crate::error::{PhaseError, Result};
use crate::scalar::Real;

/// Spectral power beyond this fraction signals an under-resolved grid.
pub const TAIL_WARNING_FRACTION: f64 = 1e-6;

const BLOWUP_CHECK_INTERVAL: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverWarning {
    /// Spectral-tail power fraction exceeded [`TAIL_WARNING_FRACTION`].
    UnderResolved { tail_fraction: f64, time: f64 },
}

/// Edge layer that damps outgoing amplitude instead of letting it wrap
/// around the periodic box. `width` is the layer thickness as a fraction of
/// each axis extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorbingBoundary<T> {
    pub width: T,
}

impl<T: Real> AbsorbingBoundary<T> {
    fn profile(&self, axis: &Axis<T>) -> Vec<T> {
        let layer = self.width * axis.extent();
        let eighth = T::lit(0.125);
        axis.points()
            .into_iter()
            .map(|p| {
                let from_edge = (p - axis.min()).min(axis.max() - p);
                if layer <= T::zero() || from_edge >= layer {
                    T::one()
                } else {
                    let depth = T::one() - from_edge / layer;
                    (T::FRAC_PI_2() * depth).cos().max(T::zero()).powf(eighth)
                }
            })
            .collect()
    }
}

fn cis<T: Real>(angle: T) -> Complex<T> {
    Complex::from_polar(T::one(), angle)
}

fn check_dt<T: Real>(dt: T) -> Result<()> {
    if !dt.is_finite() || dt == T::zero() {
        return Err(PhaseError::domain(format!(
            "time step must be finite and non-zero, got {dt}"
        )));
    }
    Ok(())
}

/// Second-order Strang propagator exp(−iKdt/2ħ)·exp(−iVdt/ħ)·exp(−iKdt/2ħ)
/// on a periodic 2-D grid. A negative `dt` runs time backwards.
pub struct SplitStep<T: Real> {
    nx: usize,
    ny: usize,
    dt: T,
    hbar: T,
    xs: Vec<T>,
    fft: Fft2<T>,
    half_kinetic: Vec<Complex<T>>,
    full_kinetic: Vec<Complex<T>>,
    static_phase: Vec<Complex<T>>,
    pulse: Option<ExternalPulse<T>>,
    mask: Option<Vec<T>>,
}

impl<T: Real> SplitStep<T> {
    pub fn new(
        x: &Axis<T>,
        y: &Axis<T>,
        h: &HamiltonianSpec<T>,
        dt: T,
        consts: &PhysicalConstants<T>,
    ) -> Result<Self> {
        check_dt(dt)?;
        let hbar = consts.hbar();
        let (nx, ny) = (x.len(), y.len());
        let kx = x.wavenumbers();
        let ky = y.wavenumbers();
        let half = T::lit(0.5);
        let (m, big_m) = (h.particle_mass(), h.apparatus_mass());
        // Kinetic phase: ħ k²/(2m) · τ.
        let kinetic = |tau: T| -> Vec<Complex<T>> {
            kx.iter()
                .flat_map(|&a| {
                    ky.iter().map(move |&b| {
                        let omega = hbar * (a * a / m + b * b / big_m) * half;
                        cis(-omega * tau)
                    })
                })
                .collect()
        };
        let xs = x.points();
        let ys = y.points();
        let mut static_phase = Vec::with_capacity(nx * ny);
        for &xv in &xs {
            for &yv in &ys {
                let v = h.static_potential(xv, yv);
                if !v.is_finite() {
                    return Err(PhaseError::malformed(format!(
                        "potential is not finite at (x, y) = ({xv}, {yv})"
                    )));
                }
                static_phase.push(cis(-v * dt / hbar));
            }
        }
        Ok(Self {
            nx,
            ny,
            dt,
            hbar,
            xs,
            fft: Fft2::new(nx, ny),
            half_kinetic: kinetic(dt * half),
            full_kinetic: kinetic(dt),
            static_phase,
            pulse: h.pulse().cloned(),
            mask: None,
        })
    }

    pub fn with_absorbing_boundary(
        mut self,
        x: &Axis<T>,
        y: &Axis<T>,
        b: AbsorbingBoundary<T>,
    ) -> Self {
        let px = b.profile(x);
        let py = b.profile(y);
        self.mask = Some(
            px.iter()
                .flat_map(|a| py.iter().map(move |c| *a * *c))
                .collect(),
        );
        self
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    fn kinetic(&mut self, psi: &mut [Complex<T>], full: bool) {
        self.fft.forward(psi);
        let k = if full {
            &self.full_kinetic
        } else {
            &self.half_kinetic
        };
        psi.par_iter_mut()
            .zip(k.par_iter())
            .for_each(|(a, b)| *a = *a * *b);
        self.fft.inverse(psi);
    }

    /// Pointwise potential factor, pulse evaluated at the sub-step midpoint.
    fn potential(&self, psi: &mut [Complex<T>], t_start: T) {
        psi.par_iter_mut()
            .zip(self.static_phase.par_iter())
            .for_each(|(a, b)| *a = *a * *b);
        if let Some(p) = &self.pulse {
            let tc = t_start + self.dt * T::lit(0.5);
            let ny = self.ny;
            let dt = self.dt;
            let hbar = self.hbar;
            psi.par_chunks_mut(ny)
                .zip(self.xs.par_iter())
                .for_each(|(row, &x)| {
                    let e = p.energy(x, tc);
                    if e != T::zero() {
                        let f = cis(-e * dt / hbar);
                        row.iter_mut().for_each(|a| *a = *a * f);
                    }
                });
        }
        if let Some(mask) = &self.mask {
            psi.par_iter_mut()
                .zip(mask.par_iter())
                .for_each(|(a, m)| *a = *a * *m);
        }
    }

    /// Advances `psi` by `steps` Strang steps, merging adjacent kinetic
    /// half-steps.
    pub fn run(&mut self, psi: &mut JointWavefunction<T>, steps: usize) -> Result<()> {
        if psi.shape() != (self.nx, self.ny) {
            return Err(PhaseError::malformed(
                "wavefunction grid does not match the propagator",
            ));
        }
        if steps == 0 {
            return Ok(());
        }
        let t0 = psi.time();
        let data = psi.data_mut();
        self.kinetic(data, false);
        for i in 0..steps {
            let t_start = t0 + self.dt * T::from_usize_lossy(i);
            self.potential(data, t_start);
            self.kinetic(data, i + 1 < steps);
            if (i + 1) % BLOWUP_CHECK_INTERVAL == 0 && has_non_finite(data) {
                return Err(PhaseError::NumericalBlowup(format!(
                    "non-finite amplitude after {} steps",
                    i + 1
                )));
            }
        }
        psi.set_time(t0 + self.dt * T::from_usize_lossy(steps));
        if psi.has_non_finite() {
            return Err(PhaseError::NumericalBlowup(format!(
                "non-finite amplitude after {steps} steps"
            )));
        }
        Ok(())
    }
}

fn has_non_finite<T: Real>(data: &[Complex<T>]) -> bool {
    data.par_iter()
        .any(|c| !(c.re.is_finite() && c.im.is_finite()))
}

#[derive(Debug, Clone)]
pub struct JointEvolution<T> {
    pub psi: JointWavefunction<T>,
    pub warnings: Vec<SolverWarning>,
}

/// Evolves the joint wavefunction under the full Hamiltonian for
/// `steps` × `dt`. Under-resolution is reported as a warning, not an error.
pub fn evolve_joint<T: Real>(
    mut psi: JointWavefunction<T>,
    h: &HamiltonianSpec<T>,
    dt: T,
    steps: usize,
    consts: &PhysicalConstants<T>,
) -> Result<JointEvolution<T>> {
    let mut warnings = Vec::new();
    let mut check = |psi: &JointWavefunction<T>| {
        let tail = spectral_tail_fraction(psi).as_f64();
        if tail > TAIL_WARNING_FRACTION {
            warnings.push(SolverWarning::UnderResolved {
                tail_fraction: tail,
                time: psi.time().as_f64(),
            });
        }
    };
    check(&psi);
    let x = *psi.x_axis();
    let y = *psi.y_axis();
    let mut stepper = SplitStep::new(&x, &y, h, dt, consts)?;
    stepper.run(&mut psi, steps)?;
    check(&psi);
    Ok(JointEvolution { psi, warnings })
}

/// Strang propagator for the particle alone: kinetic p²/2m plus the
/// Hamiltonian's external pulse (no apparatus coupling).
pub struct ParticleSplitStep<T: Real> {
    dt: T,
    hbar: T,
    xs: Vec<T>,
    fft: Fft1<T>,
    half_kinetic: Vec<Complex<T>>,
    full_kinetic: Vec<Complex<T>>,
    pulse: Option<ExternalPulse<T>>,
}

impl<T: Real> ParticleSplitStep<T> {
    pub fn new(
        axis: &Axis<T>,
        h: &HamiltonianSpec<T>,
        dt: T,
        consts: &PhysicalConstants<T>,
    ) -> Result<Self> {
        check_dt(dt)?;
        let hbar = consts.hbar();
        let m = h.particle_mass();
        let k = axis.wavenumbers();
        let kinetic = |tau: T| -> Vec<Complex<T>> {
            k.iter()
                .map(|&a| cis(-hbar * a * a / (T::lit(2.0) * m) * tau))
                .collect()
        };
        Ok(Self {
            dt,
            hbar,
            xs: axis.points(),
            fft: Fft1::new(axis.len()),
            half_kinetic: kinetic(dt * T::lit(0.5)),
            full_kinetic: kinetic(dt),
            pulse: h.pulse().cloned(),
        })
    }

    fn kinetic(&mut self, psi: &mut [Complex<T>], full: bool) {
        self.fft.forward(psi);
        let k = if full {
            &self.full_kinetic
        } else {
            &self.half_kinetic
        };
        psi.iter_mut().zip(k).for_each(|(a, b)| *a = *a * *b);
        self.fft.inverse(psi);
    }

    pub fn run(&mut self, psi: &mut ParticleWavefunction<T>, steps: usize) -> Result<()> {
        if psi.data().len() != self.xs.len() {
            return Err(PhaseError::malformed(
                "particle grid does not match the propagator",
            ));
        }
        if steps == 0 {
            return Ok(());
        }
        let t0 = psi.time();
        let data = psi.data_mut();
        self.kinetic(data, false);
        for i in 0..steps {
            if let Some(p) = &self.pulse {
                let tc = t0 + self.dt * (T::from_usize_lossy(i) + T::lit(0.5));
                for (a, &x) in data.iter_mut().zip(&self.xs) {
                    let e = p.energy(x, tc);
                    if e != T::zero() {
                        *a = *a * cis(-e * self.dt / self.hbar);
                    }
                }
            }
            self.kinetic(data, i + 1 < steps);
        }
        if data.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(PhaseError::NumericalBlowup(
                "non-finite particle amplitude".into(),
            ));
        }
        psi.set_time(t0 + self.dt * T::from_usize_lossy(steps));
        Ok(())
    }
}
