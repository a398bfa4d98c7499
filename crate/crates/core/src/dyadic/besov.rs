//! Besov norms over the truncated filter bank, time-space variants, and
//! Bernstein derivative ratios.

use crate::dyadic::DyadicPartition;
use crate::error::{Error, Result};
use crate::spectral::ops::{derivative, lp_norm};
use crate::spectral::SpectralField;

/// Identifies a (homogeneous, summation exponent 1) Besov norm.
///
/// `p` is the spatial integrability, `f64::INFINITY` allowed. The mean of a
/// field never contributes: block weights vanish at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovSpec {
    pub s: f64,
    pub p: f64,
}

impl BesovSpec {
    pub fn new(s: f64, p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::ParamOutOfRange(format!("integrability p = {p} must be >= 1")));
        }
        if !s.is_finite() {
            return Err(Error::ParamOutOfRange(format!("regularity s = {s} must be finite")));
        }
        Ok(BesovSpec { s, p })
    }
}

/// Which part of the block range a norm sums over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Low,
    High,
    Full,
}

impl Split {
    pub fn contains(self, j: i32, j0: i32) -> bool {
        match self {
            Split::Low => j <= j0,
            Split::High => j > j0,
            Split::Full => true,
        }
    }
}

/// Time exponent of a time-space Besov norm. Only the two values the a
/// priori estimates use are supported: `L^1` (trapezoid in time) and
/// `L^infinity` (running sup in time).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeExponent {
    One,
    Infinity,
}

/// `sum_j 2^(j s) || block_j f ||_{L^p}` over the requested split.
pub fn besov_norm(part: &DyadicPartition, f: &SpectralField, spec: BesovSpec, split: Split) -> f64 {
    let norms = part.block_lp_norms(f, spec.p);
    besov_from_block_norms(part, &norms, spec.s, split)
}

/// Assemble a Besov norm from precomputed per-block `L^p` norms.
pub fn besov_from_block_norms(
    part: &DyadicPartition,
    block_norms: &[f64],
    s: f64,
    split: Split,
) -> f64 {
    assert_eq!(block_norms.len(), part.block_count());
    part.blocks()
        .filter(|&j| split.contains(j, part.j0()))
        .map(|j| (j as f64 * s).exp2() * block_norms[part.block_offset(j)])
        .sum()
}

/// Time-space Besov norm of a sampled trajectory:
/// block-wise `L^q` in time first, then the weighted block sum.
///
/// `q = 1` integrates each block norm with the trapezoid rule over
/// `[t_0, T]`; `q = infinity` takes the sup over samples. Needs at least two
/// samples with strictly increasing times.
pub fn chemin_lerner_norm(
    part: &DyadicPartition,
    series: &[(f64, SpectralField)],
    spec: BesovSpec,
    q: TimeExponent,
    split: Split,
) -> Result<f64> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort { len: series.len() });
    }
    for w in series.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::Precondition("time samples must be strictly increasing".into()));
        }
    }
    let per_time: Vec<Vec<f64>> =
        series.iter().map(|(_, f)| part.block_lp_norms(f, spec.p)).collect();
    let times: Vec<f64> = series.iter().map(|(t, _)| *t).collect();
    let mut total = 0.0;
    for j in part.blocks() {
        if !split.contains(j, part.j0()) {
            continue;
        }
        let idx = part.block_offset(j);
        let value = match q {
            TimeExponent::Infinity => {
                per_time.iter().map(|n| n[idx]).fold(0.0f64, f64::max)
            }
            TimeExponent::One => {
                let mut acc = 0.0;
                for k in 1..times.len() {
                    acc += 0.5 * (per_time[k][idx] + per_time[k - 1][idx]) * (times[k] - times[k - 1]);
                }
                acc
            }
        };
        total += (j as f64 * spec.s).exp2() * value;
    }
    Ok(total)
}

/// Declared frequency support of a band-limited field: a ball or an annulus
/// of scale `lambda`.
#[derive(Clone, Copy, Debug)]
pub enum Support {
    Ball(f64),
    Annulus(f64),
}

impl Support {
    pub fn lambda(self) -> f64 {
        match self {
            Support::Ball(l) | Support::Annulus(l) => l,
        }
    }
}

/// Ratio form of the Bernstein derivative inequality:
/// `|| d^alpha f ||_{L^q} / (lambda^(k + n(1/p - 1/q)) || f ||_{L^p})`
/// with `k = |alpha|`. A family of these over random band-limited fields is
/// an empirical constant for the inequality.
pub fn bernstein_ratio(
    f: &SpectralField,
    support: Support,
    alpha: &[usize],
    p: f64,
    q: f64,
) -> Result<f64> {
    let dim = f.grid().dim();
    if alpha.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "multi-index has {} entries on a {dim}-d grid",
            alpha.len()
        )));
    }
    if !(p >= 1.0) || !(q >= 1.0) || q < p {
        return Err(Error::ParamOutOfRange(format!("need 1 <= p <= q, got p = {p}, q = {q}")));
    }
    let denom_norm = lp_norm(f, p);
    if denom_norm == 0.0 {
        return Err(Error::DegenerateInput("zero field in a Bernstein ratio".into()));
    }
    let mut df = f.clone();
    let mut k = 0usize;
    for (axis, &order) in alpha.iter().enumerate() {
        for _ in 0..order {
            df = derivative(&df, axis)?;
            k += 1;
        }
    }
    let num = lp_norm(&df, q);
    let lambda = support.lambda();
    let scale = lambda.powf(k as f64 + dim as f64 * (1.0 / p - 1.0 / q));
    Ok(num / (scale * denom_norm))
}
