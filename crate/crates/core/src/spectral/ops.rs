//! Differential multipliers, Leray projection, fractional powers, products.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::field::sym_index;
use crate::spectral::{Rank, SpectralField};

/// Partial derivative along one axis: multiplication by `i xi_axis`.
pub fn derivative(f: &SpectralField, axis: usize) -> Result<SpectralField> {
    let dim = f.grid().dim();
    if axis >= dim {
        return Err(Error::ParamOutOfRange(format!("axis {axis} on a {dim}-d grid")));
    }
    let mut out = f.clone();
    let grid = f.grid().clone();
    for c in 0..out.components() {
        for (flat, z) in out.component_mut(c).iter_mut().enumerate() {
            let xi = grid.wavevector(flat);
            *z *= Complex64::new(0.0, xi[axis] as f64);
        }
    }
    Ok(out)
}

/// Gradient of a scalar field.
pub fn gradient(f: &SpectralField) -> Result<SpectralField> {
    expect_rank(f, Rank::Scalar)?;
    let grid = f.grid().clone();
    let mut out = SpectralField::zeros(&grid, Rank::Vector);
    for a in 0..grid.dim() {
        let d = derivative(f, a)?;
        out.component_mut(a).copy_from_slice(d.component(0));
    }
    out.set_real(f.is_real());
    Ok(out)
}

/// Velocity gradient in Jacobian convention: entry `(i, j) = d_j u_i`.
pub fn jacobian(u: &SpectralField) -> Result<SpectralField> {
    expect_rank(u, Rank::Vector)?;
    let grid = u.grid().clone();
    let dim = grid.dim();
    let mut out = SpectralField::zeros(&grid, Rank::Tensor);
    for i in 0..dim {
        for j in 0..dim {
            let c = i * dim + j;
            let src = u.component(i);
            let dst = out.component_mut(c);
            for (flat, z) in dst.iter_mut().enumerate() {
                let xi = grid.wavevector(flat);
                *z = src[flat] * Complex64::new(0.0, xi[j] as f64);
            }
        }
    }
    out.set_real(u.is_real());
    Ok(out)
}

/// Divergence of a vector field.
pub fn divergence(v: &SpectralField) -> Result<SpectralField> {
    expect_rank(v, Rank::Vector)?;
    let grid = v.grid().clone();
    let mut out = SpectralField::zeros(&grid, Rank::Scalar);
    for a in 0..grid.dim() {
        let src = v.component(a);
        let dst = out.component_mut(0);
        for (flat, z) in dst.iter_mut().enumerate() {
            let xi = grid.wavevector(flat);
            *z += src[flat] * Complex64::new(0.0, xi[a] as f64);
        }
    }
    out.set_real(v.is_real());
    Ok(out)
}

/// Row divergence of a (symmetric or full) tensor: `(div T)_i = d_j T_ij`.
pub fn divergence_tensor(t: &SpectralField) -> Result<SpectralField> {
    let grid = t.grid().clone();
    let dim = grid.dim();
    if t.rank() != Rank::SymTensor && t.rank() != Rank::Tensor {
        return Err(Error::RankMismatch { expected: Rank::SymTensor, got: t.rank() });
    }
    let mut out = SpectralField::zeros(&grid, Rank::Vector);
    for i in 0..dim {
        let dst = out.component_mut(i);
        for (flat, z) in dst.iter_mut().enumerate() {
            let xi = grid.wavevector(flat);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..dim {
                acc += t.tensor_entry(i, j, flat) * Complex64::new(0.0, xi[j] as f64);
            }
            *z = acc;
        }
    }
    out.set_real(t.is_real());
    Ok(out)
}

/// Laplacian: multiplication by `-|xi|^2`.
pub fn laplacian(f: &SpectralField) -> SpectralField {
    f.apply_multiplier(|g, flat| -g.wavenumber_sq(flat))
}

/// Leray projection onto divergence-free fields:
/// `v -> v - xi (xi . v) / |xi|^2` per mode, `xi = 0` passed through.
pub fn leray_project(v: &SpectralField) -> Result<SpectralField> {
    expect_rank(v, Rank::Vector)?;
    let grid = v.grid().clone();
    let dim = grid.dim();
    let mut out = v.clone();
    for flat in 0..grid.mode_count() {
        let xi = grid.wavevector(flat);
        let k2 = grid.wavenumber_sq(flat);
        if k2 == 0.0 {
            continue;
        }
        let mut dot = Complex64::new(0.0, 0.0);
        for a in 0..dim {
            dot += out.coeff(a, flat) * xi[a] as f64;
        }
        let factor = dot / k2;
        for a in 0..dim {
            *out.coeff_mut(a, flat) -= factor * xi[a] as f64;
        }
    }
    Ok(out)
}

/// Fractional power of `(-Laplacian)^(1/2)`: multiplication by `|xi|^s`.
///
/// For `s > 0` the mean is annihilated; for `s < 0` the input must be
/// mean-free (relative to its spectral scale) or the operator is ill-posed.
/// `s = 0` is the identity.
pub fn lambda_power(f: &SpectralField, s: f64) -> Result<SpectralField> {
    if s == 0.0 {
        return Ok(f.clone());
    }
    if s < 0.0 {
        let scale = spectral_l2_scale(f);
        let mean: f64 = (0..f.components()).map(|c| f.mean(c).norm()).fold(0.0, f64::max);
        if mean > 1e-12 * scale && scale > 0.0 {
            return Err(Error::NonzeroMean { mean, scale });
        }
    }
    let mut out = f.apply_multiplier(|g, flat| {
        let k = g.wavenumber(flat);
        if k == 0.0 {
            0.0
        } else {
            k.powf(s)
        }
    });
    out.set_real(f.is_real());
    Ok(out)
}

fn spectral_l2_scale(f: &SpectralField) -> f64 {
    let mut acc = 0.0;
    for c in 0..f.components() {
        for z in f.component(c) {
            acc += z.norm_sqr();
        }
    }
    acc.sqrt()
}

/// Symmetric and skew parts of the velocity gradient:
/// `D = (J + J^T)/2` (packed symmetric), `W = (J - J^T)/2` (full tensor).
pub fn sym_skew_parts(u: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    let jac = jacobian(u)?;
    let grid = u.grid().clone();
    let dim = grid.dim();
    let modes = grid.mode_count();
    let mut d = SpectralField::zeros(&grid, Rank::SymTensor);
    let mut w = SpectralField::zeros(&grid, Rank::Tensor);
    for i in 0..dim {
        for j in 0..dim {
            for flat in 0..modes {
                let a = jac.coeff(i * dim + j, flat);
                let b = jac.coeff(j * dim + i, flat);
                if i <= j {
                    *d.coeff_mut(sym_index(dim, i, j), flat) = 0.5 * (a + b);
                }
                *w.coeff_mut(i * dim + j, flat) = 0.5 * (a - b);
            }
        }
    }
    d.set_real(u.is_real());
    w.set_real(u.is_real());
    Ok((d, w))
}

/// Zero every mode with any `|xi_i|` beyond the two-thirds bound.
pub fn dealias(f: &mut SpectralField) {
    let grid = f.grid().clone();
    for c in 0..f.components() {
        for (flat, z) in f.component_mut(c).iter_mut().enumerate() {
            if !grid.dealias_keep(flat) {
                *z = Complex64::new(0.0, 0.0);
            }
        }
    }
}

/// Dealiased pointwise product of two scalar fields.
pub fn multiply(a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    expect_rank(a, Rank::Scalar)?;
    expect_rank(b, Rank::Scalar)?;
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = a.grid().clone();
    let (ar, _) = a.to_real();
    let (br, _) = b.to_real();
    let prod: Vec<f64> = ar.iter().zip(&br).map(|(x, y)| x * y).collect();
    let mut out = SpectralField::from_real(&grid, Rank::Scalar, &prod)?;
    dealias(&mut out);
    Ok(out)
}

/// Convective derivative `u . grad(z)` for a scalar/vector/sym-tensor `z`,
/// evaluated pointwise in physical space and dealiased.
pub fn convect(u: &SpectralField, z: &SpectralField) -> Result<SpectralField> {
    expect_rank(u, Rank::Vector)?;
    if u.grid() != z.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = u.grid().clone();
    let dim = grid.dim();
    let modes = grid.mode_count();
    let (ur, _) = u.to_real();
    let comps = z.components();
    let mut prod = vec![0.0; comps * modes];
    for m in 0..dim {
        let dz = derivative(z, m)?;
        let (dzr, _) = dz.to_real();
        let um = &ur[m * modes..(m + 1) * modes];
        for c in 0..comps {
            let slab = &mut prod[c * modes..(c + 1) * modes];
            let src = &dzr[c * modes..(c + 1) * modes];
            for (p, (o, s)) in slab.iter_mut().zip(src).enumerate() {
                *o += um[p] * s;
            }
        }
    }
    let mut out = SpectralField::from_real(&grid, z.rank(), &prod)?;
    dealias(&mut out);
    Ok(out)
}

/// `div(u (x) z)`: the conservative form of advection. Equal to
/// `u . grad(z)` to machine precision when `div u = 0`, because the strict
/// dealias bound keeps triple-mode interactions alias-free.
pub fn advect_conservative(u: &SpectralField, z: &SpectralField) -> Result<SpectralField> {
    expect_rank(u, Rank::Vector)?;
    if u.grid() != z.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = u.grid().clone();
    let dim = grid.dim();
    let modes = grid.mode_count();
    let (ur, _) = u.to_real();
    let (zr, _) = z.to_real();
    let comps = z.components();
    let mut out = SpectralField::zeros(&grid, z.rank());
    let mut buf = vec![Complex64::new(0.0, 0.0); modes];
    for c in 0..comps {
        let zc = &zr[c * modes..(c + 1) * modes];
        for m in 0..dim {
            let um = &ur[m * modes..(m + 1) * modes];
            for (p, zv) in buf.iter_mut().enumerate() {
                *zv = Complex64::new(um[p] * zc[p], 0.0);
            }
            grid.forward_complex(&mut buf);
            let dst = out.component_mut(c);
            for (flat, z) in dst.iter_mut().enumerate() {
                let xi = grid.wavevector(flat);
                *z += buf[flat] * Complex64::new(0.0, xi[m] as f64);
            }
        }
    }
    dealias(&mut out);
    Ok(out)
}

/// `L^2` inner product over the torus, via Parseval. For real fields this is
/// `integral of a.b`; packed symmetric off-diagonals count twice so tensor
/// pairings are full Frobenius contractions.
pub fn l2_inner(a: &SpectralField, b: &SpectralField) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch { expected: a.rank(), got: b.rank() });
    }
    let weights = a.component_weights();
    let modes = a.grid().mode_count();
    let mut acc = 0.0;
    for (c, w) in weights.iter().enumerate() {
        let ac = a.component(c);
        let bc = b.component(c);
        for flat in 0..modes {
            acc += w * (ac[flat] * bc[flat].conj()).re;
        }
    }
    Ok(acc * a.grid().volume())
}

/// Frobenius `L^2` pairing of two tensor-ranked fields, tolerant of mixed
/// packed/full storage: `integral of sum_ij A_ij B_ij`.
pub fn tensor_inner(a: &SpectralField, b: &SpectralField) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let tensorial = |r: Rank| matches!(r, Rank::SymTensor | Rank::Tensor);
    if !tensorial(a.rank()) || !tensorial(b.rank()) {
        return Err(Error::RankMismatch { expected: Rank::SymTensor, got: a.rank() });
    }
    if a.rank() == b.rank() {
        return l2_inner(a, b);
    }
    let dim = a.grid().dim();
    let modes = a.grid().mode_count();
    let mut acc = 0.0;
    for flat in 0..modes {
        for i in 0..dim {
            for j in 0..dim {
                acc += (a.tensor_entry(i, j, flat) * b.tensor_entry(i, j, flat).conj()).re;
            }
        }
    }
    Ok(acc * a.grid().volume())
}

/// Discrete `L^p` norm: `(mean |f|^p (2 pi)^n)^(1/p)`, sup norm for
/// `p = infinity`. Consistent with [`SpectralField::l2_norm`] at `p = 2`.
pub fn lp_norm(f: &SpectralField, p: f64) -> f64 {
    if p == 2.0 {
        return f.l2_norm();
    }
    let mag = f.pointwise_magnitude();
    if p.is_infinite() {
        return mag.iter().fold(0.0f64, |a, &b| a.max(b));
    }
    let mean = mag.iter().map(|m| m.powf(p)).sum::<f64>() / mag.len() as f64;
    (mean * f.grid().volume()).powf(1.0 / p)
}

pub(crate) fn expect_rank(f: &SpectralField, rank: Rank) -> Result<()> {
    if f.rank() != rank {
        return Err(Error::RankMismatch { expected: rank, got: f.rank() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::spectral::Grid;

    fn grid() -> Grid {
        Grid::new(2, 32).unwrap()
    }

    #[test]
    fn derivative_of_sine_is_cosine() {
        let g = grid();
        let f = SpectralField::from_fn(&g, Rank::Scalar, |x, _| x[0].sin());
        let df = derivative(&f, 0).unwrap();
        let expect = SpectralField::from_fn(&g, Rank::Scalar, |x, _| x[0].cos());
        assert!(df.sub(&expect).unwrap().spectral_max() < 1e-13);
    }

    #[test]
    fn div_grad_is_laplacian() {
        let g = grid();
        let f = random::scalar_field(&g, 1, 9, 42);
        let lhs = divergence(&gradient(&f).unwrap()).unwrap();
        let rhs = laplacian(&f);
        let scale = rhs.spectral_max().max(1.0);
        assert!(lhs.sub(&rhs).unwrap().spectral_max() <= 1e-11 * scale);
    }

    #[test]
    fn laplacian_scales_unit_mode() {
        let g = grid();
        let mut f = SpectralField::zeros(&g, Rank::Scalar);
        f.set_mode_pair(0, &[1, 0], Complex64::new(0.3, 0.1));
        let lf = laplacian(&f);
        let got = lf.coeff(0, g.mode_index(&[1, 0]));
        assert!((got - Complex64::new(-0.3, -0.1)).norm() < 1e-15);
    }

    #[test]
    fn leray_kills_gradients_and_fixes_divfree() {
        let g = grid();
        let f = random::scalar_field(&g, 1, 9, 7);
        let gradf = gradient(&f).unwrap();
        let proj = leray_project(&gradf).unwrap();
        assert!(proj.spectral_max() <= 1e-13 * gradf.spectral_max());

        let u = random::divfree_field(&g, 1, 9, 8);
        let pu = leray_project(&u).unwrap();
        assert!(pu.sub(&u).unwrap().spectral_max() <= 1e-13 * u.spectral_max());
    }

    #[test]
    fn leray_output_is_divergence_free_and_idempotent() {
        let g = grid();
        let v = random::vector_field(&g, 1, 9, 11);
        let pv = leray_project(&v).unwrap();
        let div = divergence(&pv).unwrap();
        assert!(div.spectral_max() <= 1e-12 * v.spectral_max());
        let ppv = leray_project(&pv).unwrap();
        assert!(ppv.sub(&pv).unwrap().spectral_max() <= 1e-13 * v.spectral_max());
    }

    #[test]
    fn lambda_powers_compose() {
        let g = grid();
        let f = random::scalar_field(&g, 1, 9, 5);
        let l2f = lambda_power(&f, 2.0).unwrap();
        let neg_lap = laplacian(&f).apply_multiplier(|_, _| -1.0);
        let scale = f.spectral_max();
        assert!(l2f.sub(&neg_lap).unwrap().spectral_max() <= 1e-11 * scale);

        let back = lambda_power(&lambda_power(&f, 1.0).unwrap(), -1.0).unwrap();
        assert!(back.sub(&f).unwrap().spectral_max() <= 1e-12 * scale);
    }

    #[test]
    fn lambda_scales_by_radius() {
        let g = grid();
        let mut f = SpectralField::zeros(&g, Rank::Scalar);
        f.set_mode_pair(0, &[3, 4], Complex64::new(1.0, 0.0));
        let lf = lambda_power(&f, 1.0).unwrap();
        let got = lf.coeff(0, g.mode_index(&[3, 4]));
        assert!((got - Complex64::new(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn lambda_inverse_rejects_nonzero_mean() {
        let g = grid();
        let f = SpectralField::from_fn(&g, Rank::Scalar, |x, _| 1.0 + 0.1 * x[0].sin());
        let err = lambda_power(&f, -1.0).unwrap_err();
        assert!(matches!(err, Error::NonzeroMean { .. }));
    }

    #[test]
    fn shear_flow_splits_into_sym_and_skew() {
        let g = grid();
        // u = (sin(x2), 0): J = [[0, cos(x2)], [0, 0]] in Jacobian convention
        let u = SpectralField::from_fn(&g, Rank::Vector, |x, c| if c == 0 { x[1].sin() } else { 0.0 });
        let (d, w) = sym_skew_parts(&u).unwrap();
        let half_cos = SpectralField::from_fn(&g, Rank::Scalar, |x, _| 0.5 * x[1].cos());
        let d01 = d.coeff(sym_index(2, 0, 1), g.mode_index(&[0, 1]));
        let expect = half_cos.coeff(0, g.mode_index(&[0, 1]));
        assert!((d01 - expect).norm() < 1e-13);
        // skew part: W01 = +1/2 cos(x2), W10 = -1/2 cos(x2)
        let w01 = w.coeff(1, g.mode_index(&[0, 1]));
        let w10 = w.coeff(2, g.mode_index(&[0, 1]));
        assert!((w01 - expect).norm() < 1e-13);
        assert!((w10 + expect).norm() < 1e-13);
        // diagonal of D vanishes for this flow
        assert!(d.component(0).iter().all(|z| z.norm() < 1e-13));
        assert!(d.component(2).iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn trace_of_d_matches_divergence() {
        let g = grid();
        let u = random::divfree_field(&g, 1, 9, 3);
        let (d, w) = sym_skew_parts(&u).unwrap();
        let dim = g.dim();
        let mut worst = 0.0f64;
        for flat in 0..g.mode_count() {
            let mut tr = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                tr += d.tensor_entry(i, i, flat);
            }
            worst = worst.max(tr.norm());
        }
        assert!(worst <= 1e-12 * u.spectral_max());
        // skew symmetry: W + W^T = 0
        let mut skew = 0.0f64;
        for flat in 0..g.mode_count() {
            for i in 0..dim {
                for j in 0..dim {
                    skew = skew
                        .max((w.tensor_entry(i, j, flat) + w.tensor_entry(j, i, flat)).norm());
                }
            }
        }
        assert!(skew <= 1e-13 * u.spectral_max());
    }

    #[test]
    fn conservative_and_convective_advection_agree_for_divfree_u() {
        let g = grid();
        let u = random::divfree_field(&g, 1, 6, 21);
        let z = random::scalar_field(&g, 1, 6, 22);
        let a = advect_conservative(&u, &z).unwrap();
        let b = convect(&u, &z).unwrap();
        let scale = a.spectral_max().max(1e-300);
        assert!(a.sub(&b).unwrap().spectral_max() <= 1e-11 * scale);
    }

    #[test]
    fn product_parseval_consistency() {
        let g = grid();
        let a = random::scalar_field(&g, 1, 6, 31);
        let b = random::scalar_field(&g, 1, 6, 32);
        let ab = multiply(&a, &b).unwrap();
        // <ab, 1> should match the plain grid average of the product
        let (ar, _) = a.to_real();
        let (br, _) = b.to_real();
        let direct: f64 =
            ar.iter().zip(&br).map(|(x, y)| x * y).sum::<f64>() / ar.len() as f64 * g.volume();
        let spectral = ab.mean(0).re * g.volume();
        assert!((direct - spectral).abs() <= 1e-10 * direct.abs().max(1.0));
    }

    #[test]
    fn lp_norm_matches_l2_at_p2() {
        let g = grid();
        let f = random::vector_field(&g, 1, 9, 17);
        let a = lp_norm(&f, 2.0);
        let mag = f.pointwise_magnitude();
        let direct =
            (mag.iter().map(|m| m * m).sum::<f64>() / mag.len() as f64 * g.volume()).sqrt();
        assert!((a - direct).abs() <= 1e-10 * a);
    }
}
