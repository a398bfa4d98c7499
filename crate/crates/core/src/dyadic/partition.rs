//! The dyadic partition of unity and its frequency blocks.

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Smooth step: 1 for `t <= 0`, 0 for `t >= 1`, `C^infinity` monotone in
/// between (the classical `e^{-1/t}` glue).
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let g = |s: f64| (-1.0 / s).exp();
        let a = g(1.0 - t);
        a / (a + g(t))
    }
}

/// Radial low-pass profile: 1 on `|xi| <= 3/4`, 0 on `|xi| >= 4/3`,
/// smooth and nonincreasing.
pub fn chi_profile(r: f64) -> f64 {
    smooth_step((r - 0.75) / (4.0 / 3.0 - 0.75))
}

/// Annular profile `phi(r) = chi(r/2) - chi(r)`, supported in
/// `3/4 <= |xi| <= 8/3` and telescoping to a partition of unity.
pub fn phi_profile(r: f64) -> f64 {
    chi_profile(r / 2.0) - chi_profile(r)
}

/// A truncated dyadic filter bank attached to a grid.
///
/// Block `j` isolates the annulus `|xi| ~ 2^j` via `phi(2^-j |xi|)`. The
/// range `[j_min, j_max]` is chosen so that every nonzero grid frequency is
/// covered exactly: `sum_j phi(2^-j xi) = 1` there. `j0` is the low/high
/// split index. Homogeneous norms built from the blocks ignore the mean
/// (`phi(0) = 0`).
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Grid,
    j_min: i32,
    j_max: i32,
    j0: i32,
}

impl DyadicPartition {
    pub fn new(grid: &Grid, j0: i32) -> Result<Self> {
        let n = grid.points() as f64;
        let root_dim = (grid.dim() as f64).sqrt();
        // lowest block catching |xi| = 1 is j = -1; one block of slack below
        let j_min = -2;
        let j_max = (n * root_dim / 2.0).log2().ceil() as i32 + 1;
        if j0 < j_min || j0 > j_max {
            return Err(Error::Config(format!(
                "split index j0 = {j0} outside the block range [{j_min}, {j_max}]"
            )));
        }
        Ok(DyadicPartition { grid: grid.clone(), j_min, j_max, j0 })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn j0(&self) -> i32 {
        self.j0
    }

    pub fn blocks(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    pub fn block_count(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn block_offset(&self, j: i32) -> usize {
        debug_assert!(j >= self.j_min && j <= self.j_max);
        (j - self.j_min) as usize
    }

    /// `phi(2^-j |xi|)` for a radius.
    #[inline]
    pub fn block_weight(&self, j: i32, radius: f64) -> f64 {
        phi_profile(radius * (-j as f64).exp2())
    }

    fn check_block(&self, j: i32) -> Result<()> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::BlockOutOfRange { j, j_min: self.j_min, j_max: self.j_max });
        }
        Ok(())
    }

    /// The dyadic block: per-mode multiplication by `phi(2^-j |xi|)`.
    pub fn dyadic_block(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        self.check_block(j)?;
        Ok(f.apply_multiplier(|g, flat| self.block_weight(j, g.wavenumber(flat))))
    }

    /// Low-frequency cutoff: multiplication by `chi(2^-k |xi|)`. Passes the
    /// mean through (`chi(0) = 1`).
    pub fn low_cutoff(&self, f: &SpectralField, k: i32) -> SpectralField {
        f.apply_multiplier(|g, flat| chi_profile(g.wavenumber(flat) * (-k as f64).exp2()))
    }

    /// Split into oscillation parts: blocks `j <= j0` and `j > j0`. The mean
    /// belongs to neither part.
    pub fn low_high_split(&self, f: &SpectralField) -> (SpectralField, SpectralField) {
        let low = f.apply_multiplier(|g, flat| {
            let r = g.wavenumber(flat);
            (self.j_min..=self.j0).map(|j| self.block_weight(j, r)).sum()
        });
        let high = f.apply_multiplier(|g, flat| {
            let r = g.wavenumber(flat);
            ((self.j0 + 1)..=self.j_max).map(|j| self.block_weight(j, r)).sum()
        });
        (low, high)
    }

    /// Worst deviation of `sum_j phi(2^-j |xi|)` from 1 over the nonzero
    /// grid frequencies.
    pub fn partition_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for flat in 1..self.grid.mode_count() {
            let r = self.grid.wavenumber(flat);
            if r == 0.0 {
                continue;
            }
            let total: f64 = self.blocks().map(|j| self.block_weight(j, r)).sum();
            worst = worst.max((total - 1.0).abs());
        }
        worst
    }

    /// Per-block `L^2` norms for all blocks, computed spectrally in one pass.
    pub fn block_l2_norms(&self, f: &SpectralField) -> Vec<f64> {
        let weights = f.component_weights();
        let modes = self.grid.mode_count();
        let vol = self.grid.volume();
        let mut acc = vec![0.0f64; self.block_count()];
        for flat in 0..modes {
            let r = self.grid.wavenumber(flat);
            if r == 0.0 {
                continue;
            }
            let mut energy = 0.0;
            for (c, w) in weights.iter().enumerate() {
                energy += w * f.coeff(c, flat).norm_sqr();
            }
            if energy == 0.0 {
                continue;
            }
            for j in self.blocks() {
                let w = self.block_weight(j, r);
                if w > 0.0 {
                    acc[self.block_offset(j)] += w * w * energy;
                }
            }
        }
        acc.iter().map(|e| (e * vol).sqrt()).collect()
    }

    /// Per-block `L^p` norms for all blocks (physical-space evaluation).
    pub fn block_lp_norms(&self, f: &SpectralField, p: f64) -> Vec<f64> {
        if p == 2.0 {
            return self.block_l2_norms(f);
        }
        self.blocks()
            .map(|j| {
                let block = self.dyadic_block(f, j).expect("j in range");
                crate::spectral::ops::lp_norm(&block, p)
            })
            .collect()
    }

    /// Zero out everything except the mean; used to compare reconstructions.
    pub fn mean_part(&self, f: &SpectralField) -> SpectralField {
        let mut out = SpectralField::zeros(&self.grid, f.rank());
        for c in 0..f.components() {
            *out.coeff_mut(c, 0) = f.mean(c);
        }
        out
    }

    /// `sum_j` of all dyadic blocks: reconstructs `f` minus its mean.
    pub fn reconstruct(&self, f: &SpectralField) -> SpectralField {
        f.apply_multiplier(|g, flat| {
            let r = g.wavenumber(flat);
            self.blocks().map(|j| self.block_weight(j, r)).sum()
        })
    }
}
