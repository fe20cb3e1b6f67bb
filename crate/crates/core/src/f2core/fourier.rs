//! Brute-force discrete Fourier transform on V, for small instances.
//!
//! Tables are indexed by [`NetPoint::to_index`](super::NetPoint::to_index).

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest nS accepted by the transform.
pub const MAX_FOURIER_DIGITS: usize = 22;

fn check_table(len: usize, n: usize, s: usize) -> Result<usize> {
    let bits = n * s;
    if bits > MAX_FOURIER_DIGITS {
        return Err(Error::Capacity {
            what: "Fourier table",
            log2_size: bits,
            cap: MAX_FOURIER_DIGITS,
        });
    }
    if len != 1usize << bits {
        return Err(Error::Shape(format!(
            "table has {len} entries, expected 2^{bits}"
        )));
    }
    Ok(bits)
}

#[inline]
fn sign(b: usize, a: usize) -> f64 {
    if (a & b).count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// f̂(A) = (1/|V|) Σ_B f(B)⟨B|A⟩, computed as a plain double loop.
pub fn fourier_transform(f: &[f64], n: usize, s: usize) -> Result<Vec<f64>> {
    let bits = check_table(f.len(), n, s)?;
    let scale = (-(bits as f64)).exp2();
    Ok((0..f.len())
        .into_par_iter()
        .map(|a| {
            f.iter()
                .enumerate()
                .map(|(b, &fb)| fb * sign(b, a))
                .sum::<f64>()
                * scale
        })
        .collect())
}

/// f(B) = Σ_A f̂(A)⟨B|A⟩, the inverse of [`fourier_transform`].
pub fn fourier_expand(f_hat: &[f64], n: usize, s: usize) -> Result<Vec<f64>> {
    check_table(f_hat.len(), n, s)?;
    Ok((0..f_hat.len())
        .into_par_iter()
        .map(|b| {
            f_hat
                .iter()
                .enumerate()
                .map(|(a, &fa)| fa * sign(b, a))
                .sum()
        })
        .collect())
}
