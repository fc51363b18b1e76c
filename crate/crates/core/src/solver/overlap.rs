use rustfft::num_complex::Complex;

use super::grid::JointWavefunction;
use crate::error::{PhaseError, Result};
use crate::scalar::Real;

/// Smallest share of the particle probability a conditioning window may hold.
pub const MIN_WINDOW_PROBABILITY: f64 = 0.01;

const POWER_ITERATIONS: usize = 500;

fn window_rows<T: Real>(psi: &JointWavefunction<T>, w: (T, T)) -> Vec<usize> {
    psi.x_axis()
        .points()
        .into_iter()
        .enumerate()
        .filter(|(_, x)| *x >= w.0 && *x < w.1)
        .map(|(i, _)| i)
        .collect()
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |s, (u, v)| {
            s + u.conj() * *v
        })
}

fn normalize<T: Real>(v: &mut [Complex<T>]) -> T {
    let n = v.iter().fold(T::zero(), |a, c| a + c.norm_sqr()).sqrt();
    if n > T::zero() {
        v.iter_mut().for_each(|c| *c = *c / n);
    }
    n
}

/// Normalised apparatus state conditioned on the particle lying in `w`: the
/// dominant eigenvector of ρ_w(y, y') = ∫_w Ψ(x, y) Ψ̄(x, y') dx. Its phase is
/// fixed so that the overlap with the most probable row in the window is
/// real and positive.
pub fn conditional_apparatus_state<T: Real>(
    psi: &JointWavefunction<T>,
    w: (T, T),
) -> Result<Vec<Complex<T>>> {
    if !(w.0 < w.1) {
        return Err(PhaseError::domain(format!(
            "window [{}, {}] is empty",
            w.0, w.1
        )));
    }
    let rows = window_rows(psi, w);
    let marg = psi.x_marginal();
    let total = marg.iter().fold(T::zero(), |a, v| a + *v);
    let inside = rows.iter().fold(T::zero(), |a, &i| a + marg[i]);
    if rows.is_empty() || total == T::zero() || inside / total < T::lit(MIN_WINDOW_PROBABILITY) {
        return Err(PhaseError::domain(format!(
            "window [{}, {}] holds too little particle probability",
            w.0, w.1
        )));
    }
    let anchor = *rows
        .iter()
        .max_by(|a, b| {
            marg[**a]
                .partial_cmp(&marg[**b])
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("non-empty window");
    let reference = psi.row(anchor).to_vec();
    let mut v = reference.clone();
    normalize(&mut v);
    let mut eigen = T::zero();
    for _ in 0..POWER_ITERATIONS {
        // ρ v = Σ_x ψ_x (ψ_x† v)
        let mut next = vec![Complex::new(T::zero(), T::zero()); v.len()];
        for &i in &rows {
            let row = psi.row(i);
            let c = dot(row, &v);
            for (n, r) in next.iter_mut().zip(row) {
                *n = *n + *r * c;
            }
        }
        let lambda = normalize(&mut next);
        let converged = (lambda - eigen).abs() <= T::epsilon() * T::lit(64.0) * lambda;
        v = next;
        eigen = lambda;
        if converged {
            break;
        }
    }
    let gauge = dot(&v, &reference);
    if gauge.norm() > T::zero() {
        let phase = gauge / gauge.norm();
        v.iter_mut().for_each(|c| *c = *c * phase);
    }
    Ok(v)
}

/// ⟨χ_a|χ_b⟩ for apparatus states conditioned on the particle lying in two
/// disjoint x windows. Its modulus is the interference visibility.
pub fn conditional_apparatus_overlap<T: Real>(
    psi: &JointWavefunction<T>,
    window_a: (T, T),
    window_b: (T, T),
) -> Result<Complex<T>> {
    let disjoint = window_a.1 <= window_b.0 || window_b.1 <= window_a.0;
    if !disjoint {
        return Err(PhaseError::domain("conditioning windows must be disjoint"));
    }
    let a = conditional_apparatus_state(psi, window_a)?;
    let b = conditional_apparatus_state(psi, window_b)?;
    Ok(dot(&a, &b))
}

/// Purity Tr(ρ_x²) of the particle's reduced state.
pub fn reduced_purity<T: Real>(psi: &JointWavefunction<T>) -> T {
    let (nx, ny) = psi.shape();
    let norm = psi.data().iter().fold(T::zero(), |a, c| a + c.norm_sqr());
    if norm == T::zero() {
        return T::zero();
    }
    // Gram matrix over the shorter dimension has the same non-zero spectrum.
    let mut purity = T::zero();
    if nx <= ny {
        for i in 0..nx {
            for j in 0..nx {
                purity = purity + dot(psi.row(i), psi.row(j)).norm_sqr();
            }
        }
    } else {
        let cols: Vec<Vec<Complex<T>>> = (0..ny)
            .map(|j| (0..nx).map(|i| psi.at(i, j)).collect())
            .collect();
        for a in &cols {
            for b in &cols {
                purity = purity + dot(a, b).norm_sqr();
            }
        }
    }
    purity / (norm * norm)
}

/// Effective number of Schmidt modes, 1/Tr(ρ²); exactly 1 for a product state.
pub fn schmidt_number<T: Real>(psi: &JointWavefunction<T>) -> T {
    T::one() / reduced_purity(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::grid::{gaussian_packet, Axis};

    fn branches(delta: f64, sigma: f64) -> JointWavefunction<f64> {
        let x = Axis::centered(0.0, 40.0, 128).unwrap();
        let y = Axis::centered(0.0, 16.0, 128).unwrap();
        let left = gaussian_packet(&x, -8.0, 1.0, 0.0);
        let right = gaussian_packet(&x, 8.0, 1.0, 0.4);
        let up = gaussian_packet(&y, 0.5 * delta, sigma, 0.0);
        let down = gaussian_packet(&y, -0.5 * delta, sigma, 0.0);
        let a = JointWavefunction::product(x, y, &left, &up).unwrap();
        let b = JointWavefunction::product(x, y, &right, &down).unwrap();
        let data = a.data().iter().zip(b.data()).map(|(u, v)| u + v).collect();
        let mut psi = JointWavefunction::new(x, y, data, 0.0).unwrap();
        psi.normalize();
        psi
    }

    #[test]
    fn product_state_is_indistinguishable() {
        let psi = branches(0.0, 0.8);
        let o = conditional_apparatus_overlap(&psi, (-20.0, -1.0), (1.0, 20.0)).unwrap();
        assert!((o.norm() - 1.0).abs() < 1e-10);
        assert!((schmidt_number(&psi) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn displaced_pointer_matches_gaussian_law() {
        let (delta, sigma) = (1.3, 0.6);
        let psi = branches(delta, sigma);
        let o = conditional_apparatus_overlap(&psi, (-20.0, -1.0), (1.0, 20.0)).unwrap();
        let expect = (-delta * delta / (8.0 * sigma * sigma)).exp();
        assert!(
            (o.norm() - expect).abs() < 1e-10,
            "{} vs {expect}",
            o.norm()
        );
        assert!(schmidt_number(&psi) > 1.0);
    }

    #[test]
    fn orthogonal_pointers() {
        let psi = branches(10.0, 0.5);
        let o = conditional_apparatus_overlap(&psi, (-20.0, -1.0), (1.0, 20.0)).unwrap();
        assert!(o.norm() < 1e-8);
    }

    #[test]
    fn window_errors() {
        let psi = branches(1.0, 0.5);
        assert!(conditional_apparatus_overlap(&psi, (-20.0, 1.0), (0.0, 20.0)).is_err());
        assert!(matches!(
            conditional_apparatus_overlap(&psi, (-1.0, -0.5), (1.0, 20.0)),
            Err(PhaseError::Domain(_))
        ));
    }
}
