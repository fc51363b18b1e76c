//! One-dimensional quadrature rules shared by the phase functionals and the
//! solenoid flux integral.

use crate::error::{PhaseError, Result};
use crate::scalar::Real;

/// Trapezoid rule over samples `(xs[i], ys[i])`. Exact for piecewise-linear data.
pub fn trapezoid<T: Real>(xs: &[T], ys: &[T]) -> T {
    debug_assert_eq!(xs.len(), ys.len());
    xs.windows(2)
        .zip(ys.windows(2))
        .fold(T::zero(), |acc, (x, y)| {
            acc + (x[1] - x[0]) * (y[0] + y[1]) * T::lit(0.5)
        })
}

/// Adaptive Simpson integration of `f` on `[a, b]`.
///
/// Stops refining a panel once the Richardson estimate `|S2 - S1| / 15` falls
/// below its share of `rel_tol · |I|` (with `abs_floor` guarding `I ≈ 0`).
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSimpson<T> {
    pub rel_tol: T,
    pub abs_floor: T,
    pub max_depth: u32,
}

impl<T: Real> Default for AdaptiveSimpson<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            abs_floor: T::lit(1e-300).max(T::min_positive_value()),
            max_depth: 48,
        }
    }
}

impl<T: Real> AdaptiveSimpson<T> {
    pub fn integrate<F>(&self, f: F, a: T, b: T) -> Result<T>
    where
        F: Fn(T) -> T,
    {
        if a == b {
            return Ok(T::zero());
        }
        let half = T::lit(0.5);
        let fa = f(a);
        let fb = f(b);
        let m = (a + b) * half;
        let fm = f(m);
        let whole = simpson(a, b, fa, fm, fb);
        // Seed the absolute target from a coarse composite estimate so that
        // peaked integrands are not declared converged on the first panel.
        let coarse = composite_estimate(&f, a, b, 64);
        let target = (self.rel_tol * coarse.abs()).max(self.abs_floor);
        let mut failed = false;
        let value = self.recurse(
            &f,
            a,
            b,
            fa,
            fm,
            fb,
            whole,
            target,
            self.max_depth,
            &mut failed,
        );
        if failed {
            return Err(PhaseError::Tolerance(format!(
                "adaptive Simpson on [{a}, {b}] hit depth {} before reaching rel_tol {}",
                self.max_depth, self.rel_tol
            )));
        }
        if !value.is_finite() {
            return Err(PhaseError::Tolerance(format!(
                "adaptive Simpson on [{a}, {b}] produced a non-finite value"
            )));
        }
        Ok(value)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F>(
        &self,
        f: &F,
        a: T,
        b: T,
        fa: T,
        fm: T,
        fb: T,
        whole: T,
        tol: T,
        depth: u32,
        failed: &mut bool,
    ) -> T
    where
        F: Fn(T) -> T,
    {
        let half = T::lit(0.5);
        let m = (a + b) * half;
        let lm = (a + m) * half;
        let rm = (m + b) * half;
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        if depth == 0 {
            *failed = true;
            return left + right + delta / T::lit(15.0);
        }
        if delta.abs() <= T::lit(15.0) * tol {
            return left + right + delta / T::lit(15.0);
        }
        self.recurse(f, a, m, fa, flm, fm, left, tol * half, depth - 1, failed)
            + self.recurse(f, m, b, fm, frm, fb, right, tol * half, depth - 1, failed)
    }
}

fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

fn composite_estimate<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, panels: usize) -> T {
    let h = (b - a) / T::from_usize_lossy(panels);
    (0..panels)
        .map(|i| {
            let x0 = a + h * T::from_usize_lossy(i);
            let x1 = x0 + h;
            simpson(x0, x1, f(x0), f((x0 + x1) * T::lit(0.5)), f(x1))
        })
        .fold(T::zero(), |acc, v| acc + v)
}

/// Three-point Gauss–Legendre nodes on `[0, 1]` with their weights.
pub fn gauss_legendre3_unit<T: Real>() -> [(T, T); 3] {
    let d = T::lit(0.5) * T::lit(0.6).sqrt();
    let h = T::lit(0.5);
    [
        (h - d, T::lit(5.0 / 18.0)),
        (h, T::lit(8.0 / 18.0)),
        (h + d, T::lit(5.0 / 18.0)),
    ]
}
