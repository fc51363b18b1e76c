use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::Real;

/// Unnormalised forward / normalised inverse FFT on a row-major
/// `nx × ny` array. Rows (y direction) are transformed in place; the x
/// direction goes through a transpose buffer.
pub(crate) struct Fft2<T: Real> {
    nx: usize,
    ny: usize,
    fwd_x: Arc<dyn Fft<T>>,
    inv_x: Arc<dyn Fft<T>>,
    fwd_y: Arc<dyn Fft<T>>,
    inv_y: Arc<dyn Fft<T>>,
    transposed: Vec<Complex<T>>,
}

impl<T: Real> Fft2<T> {
    pub fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            nx,
            ny,
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
            transposed: vec![Complex::new(T::zero(), T::zero()); nx * ny],
        }
    }

    pub fn forward(&mut self, data: &mut [Complex<T>]) {
        let (fx, fy) = (self.fwd_x.clone(), self.fwd_y.clone());
        self.apply(data, &fx, &fy);
    }

    pub fn inverse(&mut self, data: &mut [Complex<T>]) {
        let (ix, iy) = (self.inv_x.clone(), self.inv_y.clone());
        self.apply(data, &ix, &iy);
        let scale = T::one() / T::from_usize_lossy(self.nx * self.ny);
        data.par_iter_mut().for_each(|c| *c = *c * scale);
    }

    fn apply(&mut self, data: &mut [Complex<T>], fx: &Arc<dyn Fft<T>>, fy: &Arc<dyn Fft<T>>) {
        let (nx, ny) = (self.nx, self.ny);
        rows(data, ny, fy);
        transpose(data, &mut self.transposed, nx, ny);
        rows(&mut self.transposed, nx, fx);
        transpose(&self.transposed, data, ny, nx);
    }
}

fn rows<T: Real>(data: &mut [Complex<T>], len: usize, fft: &Arc<dyn Fft<T>>) {
    let scratch_len = fft.get_inplace_scratch_len();
    data.par_chunks_mut(len).for_each_init(
        || vec![Complex::new(T::zero(), T::zero()); scratch_len],
        |scratch, row| fft.process_with_scratch(row, scratch),
    );
}

/// `src` is `rows × cols` row-major; `dst` becomes `cols × rows`.
fn transpose<T: Real>(src: &[Complex<T>], dst: &mut [Complex<T>], rows: usize, cols: usize) {
    dst.par_chunks_mut(rows).enumerate().for_each(|(c, out)| {
        for (r, o) in out.iter_mut().enumerate() {
            *o = src[r * cols + c];
        }
    });
}

/// 1-D forward/inverse pair for single-particle propagation.
pub(crate) struct Fft1<T: Real> {
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
    scratch: Vec<Complex<T>>,
}

impl<T: Real> Fft1<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Self {
            fwd,
            inv,
            scratch: vec![Complex::new(T::zero(), T::zero()); len],
        }
    }

    pub fn forward(&mut self, data: &mut [Complex<T>]) {
        self.fwd.process_with_scratch(data, &mut self.scratch);
    }

    pub fn inverse(&mut self, data: &mut [Complex<T>]) {
        self.inv.process_with_scratch(data, &mut self.scratch);
        let scale = T::one() / T::from_usize_lossy(data.len());
        data.iter_mut().for_each(|c| *c = *c * scale);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_plane_wave() {
        let (nx, ny) = (8usize, 16usize);
        let mut fft = Fft2::<f64>::new(nx, ny);
        // e^{i(2π·1·i/nx + 2π·3·j/ny)} lands on bin (1, 3).
        let mut data: Vec<Complex<f64>> = (0..nx * ny)
            .map(|k| {
                let (i, j) = ((k / ny) as f64, (k % ny) as f64);
                Complex::from_polar(
                    1.0,
                    std::f64::consts::TAU * (i / nx as f64 + 3.0 * j / ny as f64),
                )
            })
            .collect();
        let orig = data.clone();
        fft.forward(&mut data);
        let peak = data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap()
            .0;
        assert_eq!((peak / ny, peak % ny), (1, 3));
        assert!((data[peak].norm() - (nx * ny) as f64).abs() < 1e-9);
        fft.inverse(&mut data);
        let err = data
            .iter()
            .zip(&orig)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-13);
    }
}
