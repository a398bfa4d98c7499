//! Periodic grid and n-dimensional FFT plumbing.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub(crate) struct FftPlans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Uniform grid on the torus `[0, 2*pi)^n` with `points` samples per axis.
///
/// The discrete frequency set per axis is `{-N/2, ..., N/2 - 1}` in the usual
/// FFT layout; `N` must be even and at least 8. The forward transform is
/// normalized so that `f(x) = sum_xi c(xi) exp(i xi.x)`, i.e. a constant field
/// has its only coefficient at `xi = 0`.
#[derive(Clone)]
pub struct Grid {
    dim: usize,
    points: usize,
    plans: Arc<FftPlans>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("points", &self.points)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points
    }
}
impl Eq for Grid {}

impl Grid {
    pub fn new(dim: usize, points: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dimension must be 2 or 3, got {dim}")));
        }
        if points < 8 || points % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and >= 8, got {points}"
            )));
        }
        let mut planner = FftPlanner::new();
        let plans = FftPlans {
            forward: planner.plan_fft_forward(points),
            inverse: planner.plan_fft_inverse(points),
        };
        Ok(Grid { dim, points, plans: Arc::new(plans) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Total number of modes (= number of grid points), `N^n`.
    pub fn mode_count(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    /// Grid spacing `2*pi / N`.
    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.points as f64
    }

    /// Volume of the torus, `(2*pi)^n`.
    pub fn volume(&self) -> f64 {
        (2.0 * std::f64::consts::PI).powi(self.dim as i32)
    }

    /// Frequency associated with a per-axis sample index.
    #[inline]
    pub fn axis_freq(&self, idx: usize) -> i64 {
        let n = self.points as i64;
        let i = idx as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Integer wavevector of a flat mode index. Only the first `dim` entries
    /// are meaningful; the rest are zero.
    #[inline]
    pub fn wavevector(&self, flat: usize) -> [i64; 3] {
        let mut xi = [0i64; 3];
        let mut rem = flat;
        for axis in (0..self.dim).rev() {
            xi[axis] = self.axis_freq(rem % self.points);
            rem /= self.points;
        }
        xi
    }

    #[inline]
    pub fn wavenumber_sq(&self, flat: usize) -> f64 {
        let xi = self.wavevector(flat);
        (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64
    }

    #[inline]
    pub fn wavenumber(&self, flat: usize) -> f64 {
        self.wavenumber_sq(flat).sqrt()
    }

    /// Flat index of the mode with the given per-axis sample indices.
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dim);
        let mut flat = 0;
        for &i in idx {
            flat = flat * self.points + i;
        }
        flat
    }

    /// Flat index of an integer wavevector (entries in `[-N/2, N/2)`).
    pub fn mode_index(&self, xi: &[i64]) -> usize {
        let n = self.points as i64;
        let mut flat = 0usize;
        for &x in xi.iter().take(self.dim) {
            let i = x.rem_euclid(n) as usize;
            flat = flat * self.points + i;
        }
        flat
    }

    /// Flat index of `-xi` given the flat index of `xi`.
    #[inline]
    pub fn conj_index(&self, flat: usize) -> usize {
        let mut rem = flat;
        let mut out = 0usize;
        let mut strides = [0usize; 3];
        for axis in (0..self.dim).rev() {
            strides[axis] = rem % self.points;
            rem /= self.points;
        }
        for axis in 0..self.dim {
            let i = strides[axis];
            let neg = if i == 0 { 0 } else { self.points - i };
            out = out * self.points + neg;
        }
        out
    }

    /// Physical coordinates of a flat grid-point index.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let h = self.spacing();
        let mut x = [0f64; 3];
        let mut rem = flat;
        for axis in (0..self.dim).rev() {
            x[axis] = (rem % self.points) as f64 * h;
            rem /= self.points;
        }
        x
    }

    /// Largest per-axis frequency magnitude kept by the dealiasing rule.
    ///
    /// Products of three kept modes must never wrap back onto a kept mode,
    /// which requires `3 * bound < N`; hence `floor((N - 1) / 3)` rather than
    /// the nominal `floor(N / 3)` (the two agree unless `3 | N`).
    pub fn dealias_bound(&self) -> i64 {
        ((self.points - 1) / 3) as i64
    }

    /// True when the mode survives the two-thirds dealiasing rule.
    #[inline]
    pub fn dealias_keep(&self, flat: usize) -> bool {
        let bound = self.dealias_bound();
        let xi = self.wavevector(flat);
        xi[..self.dim].iter().all(|&x| x.abs() <= bound)
    }

    /// In-place forward DFT over all axes, normalized by `1/N^n`.
    pub(crate) fn forward_complex(&self, data: &mut [Complex64]) {
        self.transform_axes(data, false);
        let scale = 1.0 / self.mode_count() as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }

    /// In-place unnormalized inverse DFT over all axes.
    pub(crate) fn inverse_complex(&self, data: &mut [Complex64]) {
        self.transform_axes(data, true);
    }

    fn transform_axes(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.mode_count(), "buffer does not match grid");
        let n = self.points;
        let fft = if inverse { &self.plans.inverse } else { &self.plans.forward };
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let mut line = vec![Complex64::new(0.0, 0.0); n];

        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            if stride == 1 {
                for chunk in data.chunks_exact_mut(n) {
                    fft.process_with_scratch(chunk, &mut scratch);
                }
            } else {
                let block = stride * n;
                let outer = data.len() / block;
                for o in 0..outer {
                    for inner in 0..stride {
                        let base = o * block + inner;
                        for (k, z) in line.iter_mut().enumerate() {
                            *z = data[base + k * stride];
                        }
                        fft.process_with_scratch(&mut line, &mut scratch);
                        for (k, z) in line.iter().enumerate() {
                            data[base + k * stride] = *z;
                        }
                    }
                }
            }
        }
    }
}
