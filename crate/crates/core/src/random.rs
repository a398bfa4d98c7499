//! Seeded random band-limited fields.
//!
//! Draw order depends only on the requested frequency box, never on the grid,
//! so the same seed realizes the same trigonometric polynomial on any grid
//! that resolves it. Empirical-constant sweeps rely on this to compare grids.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::spectral::ops::leray_project;
use crate::spectral::{Grid, Rank, SpectralField};

/// Wavevectors in the closed annulus `k_min <= |xi| <= k_max`, restricted to
/// a lexicographic half-space so each conjugate pair appears once. The order
/// is deterministic and grid-independent.
pub fn annulus_modes(dim: usize, k_min: i64, k_max: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    let k2_min = k_min * k_min;
    let k2_max = k_max * k_max;
    let range = -k_max..=k_max;
    let mut push = |xi: [i64; 3]| {
        let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if r2 < k2_min || r2 > k2_max {
            return;
        }
        // keep the lexicographically positive representative
        let lead = xi.iter().find(|&&x| x != 0);
        if matches!(lead, Some(&x) if x > 0) {
            out.push(xi);
        }
    };
    if dim == 2 {
        for x0 in range.clone() {
            for x1 in range.clone() {
                push([x0, x1, 0]);
            }
        }
    } else {
        for x0 in range.clone() {
            for x1 in range.clone() {
                for x2 in range.clone() {
                    push([x0, x1, x2]);
                }
            }
        }
    }
    out
}

/// Random real field with independent complex-Gaussian coefficients on the
/// annulus, normalized so the expected `L^2` norm is order one.
pub fn random_field(grid: &Grid, rank: Rank, k_min: i64, k_max: i64, seed: u64) -> SpectralField {
    let dim = grid.dim();
    let modes = annulus_modes(dim, k_min, k_max);
    assert!(
        k_max < grid.points() as i64 / 2,
        "requested band exceeds the grid's resolvable frequencies"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field = SpectralField::zeros(grid, rank);
    let comps = rank.components(dim);
    let scale = 1.0 / ((modes.len().max(1) * comps) as f64).sqrt();
    for c in 0..comps {
        for xi in &modes {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            field.set_mode_pair(c, &xi[..dim], scale * Complex64::new(re, im));
        }
    }
    field
}

pub fn scalar_field(grid: &Grid, k_min: i64, k_max: i64, seed: u64) -> SpectralField {
    random_field(grid, Rank::Scalar, k_min, k_max, seed)
}

pub fn vector_field(grid: &Grid, k_min: i64, k_max: i64, seed: u64) -> SpectralField {
    random_field(grid, Rank::Vector, k_min, k_max, seed)
}

pub fn symtensor_field(grid: &Grid, k_min: i64, k_max: i64, seed: u64) -> SpectralField {
    random_field(grid, Rank::SymTensor, k_min, k_max, seed)
}

/// Random divergence-free velocity (random vector field, Leray projected).
pub fn divfree_field(grid: &Grid, k_min: i64, k_max: i64, seed: u64) -> SpectralField {
    leray_project(&vector_field(grid, k_min, k_max, seed)).expect("vector rank by construction")
}

/// Mean-free scalar with spectrum spread over the whole dealiased range,
/// useful for reconstruction tests.
pub fn broadband_scalar(grid: &Grid, seed: u64) -> SpectralField {
    scalar_field(grid, 1, grid.dealias_bound(), seed)
}

/// Random magnitudes with aligned (zero) phases. Coherent fields peak at the
/// origin like the band's extremizers, which keeps sup-norm inequality
/// constants comparable across scales.
pub fn coherent_scalar(grid: &Grid, k_min: i64, k_max: i64, seed: u64) -> SpectralField {
    let dim = grid.dim();
    let modes = annulus_modes(dim, k_min, k_max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field = SpectralField::zeros(grid, Rank::Scalar);
    let scale = 1.0 / (modes.len().max(1) as f64).sqrt();
    for xi in &modes {
        let g: f64 = rng.sample(StandardNormal);
        field.set_mode_pair(0, &xi[..dim], Complex64::new(scale * g.abs(), 0.0));
    }
    field
}
