//! Paraproduct splitting of a pointwise product by relative frequency:
//! `uv = T_u v + T_v u + R(u, v)`.

use crate::dyadic::DyadicPartition;
use crate::error::Result;
use crate::spectral::ops::{expect_rank, multiply};
use crate::spectral::{Rank, SpectralField};

/// Decompose the product of two scalar fields into the two paraproducts and
/// the diagonal remainder:
///
/// * `T_u v = sum_j S_{j-1} u . block_j v`
/// * `R(u, v) = sum_j block_j u . (block_{j-1} + block_j + block_{j+1}) v`
///
/// Each elementary product is dealiased; on mean-free inputs the three parts
/// sum back to the dealiased product exactly (the truncated bank telescopes
/// exactly on grid frequencies).
pub fn bony_decompose(
    part: &DyadicPartition,
    u: &SpectralField,
    v: &SpectralField,
) -> Result<(SpectralField, SpectralField, SpectralField)> {
    expect_rank(u, Rank::Scalar)?;
    expect_rank(v, Rank::Scalar)?;
    let grid = part.grid();

    let para = |a: &SpectralField, b: &SpectralField| -> Result<SpectralField> {
        let mut acc = SpectralField::zeros(grid, Rank::Scalar);
        for j in part.blocks() {
            let low = part.low_cutoff(a, j - 1);
            let blk = part.dyadic_block(b, j)?;
            acc.axpy(1.0, &multiply(&low, &blk)?)?;
        }
        Ok(acc)
    };

    let t_uv = para(u, v)?;
    let t_vu = para(v, u)?;

    let mut remainder = SpectralField::zeros(grid, Rank::Scalar);
    for j in part.blocks() {
        let bu = part.dyadic_block(u, j)?;
        let mut tilde = SpectralField::zeros(grid, Rank::Scalar);
        for k in (j - 1)..=(j + 1) {
            if k >= part.j_min() && k <= part.j_max() {
                tilde.axpy(1.0, &part.dyadic_block(v, k)?)?;
            }
        }
        remainder.axpy(1.0, &multiply(&bu, &tilde)?)?;
    }

    Ok((t_uv, t_vu, remainder))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::spectral::ops::dealias;
    use crate::spectral::Grid;
    use num_complex::Complex64;

    fn partition() -> DyadicPartition {
        let g = Grid::new(2, 64).unwrap();
        DyadicPartition::new(&g, 2).unwrap()
    }

    fn drop_mean(f: &SpectralField) -> SpectralField {
        let mut out = f.clone();
        *out.coeff_mut(0, 0) = Complex64::new(0.0, 0.0);
        out
    }

    #[test]
    fn reconstruction_matches_dealiased_product() {
        let part = partition();
        let g = part.grid().clone();
        let u = drop_mean(&random::scalar_field(&g, 1, 15, 41));
        let v = drop_mean(&random::scalar_field(&g, 1, 15, 42));
        let (tuv, tvu, r) = bony_decompose(&part, &u, &v).unwrap();
        let mut sum = tuv;
        sum.axpy(1.0, &tvu).unwrap();
        sum.axpy(1.0, &r).unwrap();
        let mut product = multiply(&u, &v).unwrap();
        dealias(&mut product);
        let scale = product.spectral_max().max(1e-300);
        let err = sum.sub(&product).unwrap().spectral_max();
        assert!(err <= 1e-8 * scale, "relative error {}", err / scale);
    }

    #[test]
    fn separated_bands_route_through_one_paraproduct() {
        let part = partition();
        let g = part.grid().clone();
        // u low (|xi| <= 2), v in a single distant block (|xi| ~ 16)
        let u = random::scalar_field(&g, 1, 2, 43);
        let v = random::scalar_field(&g, 14, 18, 44);
        let (tuv, tvu, r) = bony_decompose(&part, &u, &v).unwrap();
        let product = multiply(&u, &v).unwrap();
        let scale = product.spectral_max();
        // the product lives in T_u v; the other two parts are negligible
        assert!(tvu.spectral_max() <= 1e-10 * scale);
        assert!(r.spectral_max() <= 1e-10 * scale);
        assert!(tuv.sub(&product).unwrap().spectral_max() <= 1e-8 * scale);
    }

    #[test]
    fn constant_factor_flows_through_the_low_cutoff() {
        let part = partition();
        let g = part.grid().clone();
        let mut u = SpectralField::zeros(&g, crate::spectral::Rank::Scalar);
        *u.coeff_mut(0, 0) = Complex64::new(2.0, 0.0); // u = 2
        let v = drop_mean(&random::scalar_field(&g, 1, 10, 45));
        let (tuv, tvu, r) = bony_decompose(&part, &u, &v).unwrap();
        let mut expect = v.clone();
        expect.scale(2.0);
        assert!(tvu.spectral_max() <= 1e-12, "blocks of a constant vanish");
        let mut sum = tuv;
        sum.axpy(1.0, &r).unwrap();
        assert!(sum.sub(&expect).unwrap().spectral_max() <= 1e-10 * expect.spectral_max());
        assert!(r.spectral_max() <= 1e-12);
    }
}
