//! Spectral fields: the common carrier for velocities, stresses and all
//! derived quantities.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::Grid;

/// Tensorial rank of a field.
///
/// Symmetric tensors are stored packed (upper triangle, row by row), which
/// makes `tau_ij = tau_ji` a structural fact rather than an invariant to
/// police. `Tensor` is the full `n x n` rank used for velocity gradients and
/// skew parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank {
    Scalar,
    Vector,
    SymTensor,
    Tensor,
}

impl Rank {
    pub fn components(self, dim: usize) -> usize {
        match self {
            Rank::Scalar => 1,
            Rank::Vector => dim,
            Rank::SymTensor => dim * (dim + 1) / 2,
            Rank::Tensor => dim * dim,
        }
    }
}

/// Index of entry `(i, j)` in packed symmetric storage.
#[inline]
pub fn sym_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * dim - i - 1) / 2 + j
}

/// A scalar/vector/tensor field stored as Fourier coefficients on a [`Grid`].
///
/// The coefficient layout is component-major: `data[c * modes + flat]`.
/// Fields carrying real-space data keep conjugate symmetry
/// `c(-xi) = conj(c(xi))` up to roundoff; the `real` flag records that claim.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    rank: Rank,
    real: bool,
    data: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid, rank: Rank) -> Self {
        let len = rank.components(grid.dim()) * grid.mode_count();
        SpectralField {
            grid: grid.clone(),
            rank,
            real: true,
            data: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// Transform real-space samples (component-major, row-major per
    /// component) into a spectral field.
    pub fn from_real(grid: &Grid, rank: Rank, samples: &[f64]) -> Result<Self> {
        let comps = rank.components(grid.dim());
        let modes = grid.mode_count();
        if samples.len() != comps * modes {
            return Err(Error::DimensionMismatch(format!(
                "expected {} samples ({} components x {} points), got {}",
                comps * modes,
                comps,
                modes,
                samples.len()
            )));
        }
        let mut field = SpectralField::zeros(grid, rank);
        let mut buf = vec![Complex64::new(0.0, 0.0); modes];
        for c in 0..comps {
            for (z, &s) in buf.iter_mut().zip(&samples[c * modes..(c + 1) * modes]) {
                *z = Complex64::new(s, 0.0);
            }
            grid.forward_complex(&mut buf);
            field.data[c * modes..(c + 1) * modes].copy_from_slice(&buf);
        }
        Ok(field)
    }

    /// Build a field by sampling a closure at the grid points.
    pub fn from_fn(grid: &Grid, rank: Rank, f: impl Fn(&[f64], usize) -> f64) -> Self {
        let comps = rank.components(grid.dim());
        let modes = grid.mode_count();
        let mut samples = vec![0.0; comps * modes];
        for c in 0..comps {
            for p in 0..modes {
                let x = grid.point(p);
                samples[c * modes + p] = f(&x[..grid.dim()], c);
            }
        }
        SpectralField::from_real(grid, rank, &samples).expect("sizes match by construction")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn components(&self) -> usize {
        self.rank.components(self.grid.dim())
    }

    /// Whether the field is declared real-valued in physical space.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn set_real(&mut self, real: bool) {
        self.real = real;
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let m = self.grid.mode_count();
        &self.data[c * m..(c + 1) * m]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let m = self.grid.mode_count();
        &mut self.data[c * m..(c + 1) * m]
    }

    #[inline]
    pub fn coeff(&self, c: usize, flat: usize) -> Complex64 {
        self.data[c * self.grid.mode_count() + flat]
    }

    #[inline]
    pub fn coeff_mut(&mut self, c: usize, flat: usize) -> &mut Complex64 {
        let m = self.grid.mode_count();
        &mut self.data[c * m + flat]
    }

    /// Set `c(xi)` and `c(-xi) = conj(value)` in one go.
    pub fn set_mode_pair(&mut self, c: usize, xi: &[i64], value: Complex64) {
        let flat = self.grid.mode_index(xi);
        let conj = self.grid.conj_index(flat);
        *self.coeff_mut(c, flat) = value;
        if conj != flat {
            *self.coeff_mut(c, conj) = value.conj();
        } else {
            *self.coeff_mut(c, flat) = Complex64::new(value.re, 0.0);
        }
    }

    /// Entry `(i, j)` of a tensor-ranked field at a mode, resolving packed
    /// symmetric storage.
    pub fn tensor_entry(&self, i: usize, j: usize, flat: usize) -> Complex64 {
        let dim = self.grid.dim();
        match self.rank {
            Rank::SymTensor => self.coeff(sym_index(dim, i, j), flat),
            Rank::Tensor => self.coeff(i * dim + j, flat),
            _ => panic!("tensor_entry on non-tensor field"),
        }
    }

    /// Inverse transform; returns component-major real samples together with
    /// the largest imaginary residual encountered.
    pub fn to_real(&self) -> (Vec<f64>, f64) {
        let comps = self.components();
        let modes = self.grid.mode_count();
        let mut out = vec![0.0; comps * modes];
        let mut buf = vec![Complex64::new(0.0, 0.0); modes];
        let mut imag_max = 0.0f64;
        for c in 0..comps {
            buf.copy_from_slice(self.component(c));
            self.grid.inverse_complex(&mut buf);
            for (o, z) in out[c * modes..(c + 1) * modes].iter_mut().zip(&buf) {
                *o = z.re;
                imag_max = imag_max.max(z.im.abs());
            }
        }
        (out, imag_max)
    }

    /// Inverse transform keeping complex samples (for fields that are not
    /// real-valued, e.g. single complex exponentials in tests).
    pub fn to_complex(&self) -> Vec<Complex64> {
        let comps = self.components();
        let modes = self.grid.mode_count();
        let mut out = vec![Complex64::new(0.0, 0.0); comps * modes];
        for c in 0..comps {
            let buf = &mut out[c * modes..(c + 1) * modes];
            buf.copy_from_slice(self.component(c));
            self.grid.inverse_complex(buf);
        }
        out
    }

    /// Pointwise magnitude over components in physical space. Packed
    /// symmetric off-diagonal entries count twice so the result matches the
    /// Frobenius norm of the full tensor.
    pub fn pointwise_magnitude(&self) -> Vec<f64> {
        let comps = self.components();
        let modes = self.grid.mode_count();
        let weights = self.component_weights();
        let samples = self.to_complex();
        let mut mag = vec![0.0; modes];
        for c in 0..comps {
            let w = weights[c];
            for (m, z) in mag.iter_mut().zip(&samples[c * modes..(c + 1) * modes]) {
                *m += w * z.norm_sqr();
            }
        }
        for m in mag.iter_mut() {
            *m = m.sqrt();
        }
        mag
    }

    /// Multiplicity of each stored component in full-tensor contractions.
    pub fn component_weights(&self) -> Vec<f64> {
        let dim = self.grid.dim();
        match self.rank {
            Rank::SymTensor => {
                let mut w = Vec::with_capacity(self.components());
                for i in 0..dim {
                    for j in i..dim {
                        w.push(if i == j { 1.0 } else { 2.0 });
                    }
                }
                w
            }
            _ => vec![1.0; self.components()],
        }
    }

    /// `L^2` norm over the torus via Parseval:
    /// `||f||^2 = (2 pi)^n sum_xi w_c |c(xi)|^2`.
    pub fn l2_norm(&self) -> f64 {
        let weights = self.component_weights();
        let modes = self.grid.mode_count();
        let mut acc = 0.0;
        for (c, w) in weights.iter().enumerate() {
            for z in &self.data[c * modes..(c + 1) * modes] {
                acc += w * z.norm_sqr();
            }
        }
        (acc * self.grid.volume()).sqrt()
    }

    /// Mean value (the `xi = 0` coefficient) of one component.
    pub fn mean(&self, c: usize) -> Complex64 {
        self.coeff(c, 0)
    }

    /// Copy with the mean of every component removed.
    pub fn without_mean(&self) -> SpectralField {
        let mut out = self.clone();
        for c in 0..out.components() {
            *out.coeff_mut(c, 0) = Complex64::new(0.0, 0.0);
        }
        out
    }

    /// Largest violation of `c(-xi) = conj(c(xi))`, relative to the largest
    /// coefficient magnitude. Zero for the zero field.
    pub fn conj_symmetry_residual(&self) -> f64 {
        let modes = self.grid.mode_count();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for c in 0..self.components() {
            let comp = self.component(c);
            for flat in 0..modes {
                let conj = self.grid.conj_index(flat);
                if conj < flat {
                    continue;
                }
                let d = (comp[flat] - comp[conj].conj()).norm();
                worst = worst.max(d);
                scale = scale.max(comp[flat].norm());
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// Restore exact conjugate symmetry by averaging paired coefficients.
    pub fn enforce_conj_symmetry(&mut self) {
        let modes = self.grid.mode_count();
        for c in 0..self.components() {
            for flat in 0..modes {
                let conj = self.grid.conj_index(flat);
                if conj < flat {
                    continue;
                }
                if conj == flat {
                    let z = self.coeff(c, flat);
                    *self.coeff_mut(c, flat) = Complex64::new(z.re, 0.0);
                } else {
                    let a = self.coeff(c, flat);
                    let b = self.coeff(c, conj);
                    let avg = 0.5 * (a + b.conj());
                    *self.coeff_mut(c, flat) = avg;
                    *self.coeff_mut(c, conj) = avg.conj();
                }
            }
        }
    }

    pub fn scale(&mut self, a: f64) {
        for z in self.data.iter_mut() {
            *z *= a;
        }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &SpectralField) -> Result<()> {
        self.check_compatible(other)?;
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
        self.real = self.real && other.real;
        Ok(())
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        let mut out = self.clone();
        out.axpy(1.0, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }

    /// Apply a radial (or general per-mode) multiplier to every component.
    pub fn apply_multiplier(&self, mult: impl Fn(&Grid, usize) -> f64) -> SpectralField {
        let mut out = self.clone();
        let modes = self.grid.mode_count();
        let factors: Vec<f64> = (0..modes).map(|flat| mult(&self.grid, flat)).collect();
        for c in 0..out.components() {
            for (z, &f) in out.component_mut(c).iter_mut().zip(&factors) {
                *z *= f;
            }
        }
        out
    }

    /// Largest coefficient magnitude (spectral sup).
    pub fn spectral_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_compatible(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: other.rank });
        }
        Ok(())
    }
}
