use super::fft::Fft2;
use super::grid::JointWavefunction;
use super::hamiltonian::HamiltonianSpec;
use crate::constants::PhysicalConstants;
use crate::scalar::Real;

/// Modes beyond this fraction of the Nyquist wavenumber on either axis count
/// towards the spectral tail.
pub const TAIL_BAND: f64 = 0.75;

/// Conservation diagnostics. Expectation values are normalised by `norm`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables<T> {
    pub norm: T,
    pub energy: T,
    pub mean_x: T,
    pub mean_y: T,
    pub mean_px: T,
    pub mean_py: T,
    /// √(⟨p_y²⟩ − ⟨p_y⟩²).
    pub spread_py: T,
    pub spectral_tail_fraction: T,
}

struct Spectrum<T> {
    power: Vec<T>,
    total: T,
}

fn spectrum<T: Real>(psi: &JointWavefunction<T>) -> Spectrum<T> {
    let (nx, ny) = psi.shape();
    let mut buf = psi.data().to_vec();
    Fft2::new(nx, ny).forward(&mut buf);
    let power: Vec<T> = buf.iter().map(|c| c.norm_sqr()).collect();
    let total = power.iter().fold(T::zero(), |a, p| a + *p);
    Spectrum { power, total }
}

fn tail_fraction<T: Real>(psi: &JointWavefunction<T>, s: &Spectrum<T>) -> T {
    if s.total == T::zero() {
        return T::zero();
    }
    let kx = psi.x_axis().wavenumbers();
    let ky = psi.y_axis().wavenumbers();
    let cut_x = T::lit(TAIL_BAND) * psi.x_axis().nyquist();
    let cut_y = T::lit(TAIL_BAND) * psi.y_axis().nyquist();
    let ny = ky.len();
    let tail = s.power.iter().enumerate().fold(T::zero(), |a, (idx, p)| {
        if kx[idx / ny].abs() > cut_x || ky[idx % ny].abs() > cut_y {
            a + *p
        } else {
            a
        }
    });
    tail / s.total
}

/// Fraction of spectral power in the outer band of either axis.
pub fn spectral_tail_fraction<T: Real>(psi: &JointWavefunction<T>) -> T {
    tail_fraction(psi, &spectrum(psi))
}

pub fn observables<T: Real>(
    psi: &JointWavefunction<T>,
    h: &HamiltonianSpec<T>,
    consts: &PhysicalConstants<T>,
) -> Observables<T> {
    let hbar = consts.hbar();
    let norm = psi.norm();
    let s = spectrum(psi);
    let kx = psi.x_axis().wavenumbers();
    let ky = psi.y_axis().wavenumbers();
    let ny = ky.len();
    let half = T::lit(0.5);
    let (m, big_m) = (h.particle_mass(), h.apparatus_mass());

    let (mut kin, mut px, mut py, mut py2) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (idx, p) in s.power.iter().enumerate() {
        let (a, b) = (kx[idx / ny], ky[idx % ny]);
        kin = kin + *p * hbar * hbar * (a * a / m + b * b / big_m) * half;
        px = px + *p * hbar * a;
        py = py + *p * hbar * b;
        py2 = py2 + *p * hbar * hbar * b * b;
    }
    let inv_total = if s.total > T::zero() {
        T::one() / s.total
    } else {
        T::zero()
    };
    let (kin, px, py, py2) = (
        kin * inv_total,
        px * inv_total,
        py * inv_total,
        py2 * inv_total,
    );

    let xs = psi.x_axis().points();
    let ys = psi.y_axis().points();
    let t = psi.time();
    let (mut pot, mut mx, mut my, mut w) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (ix, &x) in xs.iter().enumerate() {
        let pulse = h.pulse_energy(x, t);
        for (iy, &y) in ys.iter().enumerate() {
            let rho = psi.at(ix, iy).norm_sqr();
            pot = pot + rho * (h.static_potential(x, y) + pulse);
            mx = mx + rho * x;
            my = my + rho * y;
            w = w + rho;
        }
    }
    let inv_w = if w > T::zero() {
        T::one() / w
    } else {
        T::zero()
    };

    Observables {
        norm,
        energy: kin + pot * inv_w,
        mean_x: mx * inv_w,
        mean_y: my * inv_w,
        mean_px: px,
        mean_py: py,
        spread_py: (py2 - py * py).max(T::zero()).sqrt(),
        spectral_tail_fraction: tail_fraction(psi, &s),
    }
}

/// ⟨V_int⟩ over a (normalised) state.
pub fn interaction_expectation<T: Real>(psi: &JointWavefunction<T>, h: &HamiltonianSpec<T>) -> T {
    let xs = psi.x_axis().points();
    let ys = psi.y_axis().points();
    let (mut acc, mut w) = (T::zero(), T::zero());
    for (ix, &x) in xs.iter().enumerate() {
        for (iy, &y) in ys.iter().enumerate() {
            let rho = psi.at(ix, iy).norm_sqr();
            acc = acc + rho * h.interaction(x, y);
            w = w + rho;
        }
    }
    if w > T::zero() {
        acc / w
    } else {
        T::zero()
    }
}

/// Standard deviation of x under |Ψ|².
pub fn position_spread_x<T: Real>(psi: &JointWavefunction<T>) -> T {
    let xs = psi.x_axis().points();
    let marg = psi.x_marginal();
    let w = marg.iter().fold(T::zero(), |a, v| a + *v);
    let mean = xs
        .iter()
        .zip(&marg)
        .fold(T::zero(), |a, (x, p)| a + *x * *p)
        / w;
    let var = xs
        .iter()
        .zip(&marg)
        .fold(T::zero(), |a, (x, p)| a + (*x - mean) * (*x - mean) * *p)
        / w;
    var.sqrt()
}
