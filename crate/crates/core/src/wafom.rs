//! The Walsh figure of merit WF(P) = Σ_{A∈P^⊥−{0}} 2^{−μ(A)}.
//!
//! Three routes are provided:
//!
//! * [`wafom_dual`] sums over the dual space directly. Exponential in nS − d,
//!   so it serves as the reference for small instances.
//! * [`wafom_inversion`] averages Π_{T,j}(1 + (−1)^{b_{T,j}} 2^{−j}) − 1 over
//!   the points of P, which costs O(nSN).
//! * [`wafom_sequential`] does the same for a sequential generator, where
//!   consecutive points share S − 1 rows and each step costs O(n).

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2core::{dual_space, LinearNet, NetPoint, DEFAULT_ENUMERATION_CAP};
use crate::netgen::{SequentialGenerator, TransformTable};
use crate::sum::CompensatedSum;

/// Points per work unit in [`wafom_inversion`]. Fixed so that the reduction
/// order, and therefore the result, does not depend on the thread count.
const INVERSION_CHUNK_LOG2: usize = 12;

/// Default interval, in points, between full recomputations of the running
/// product in [`wafom_sequential`].
pub const DEFAULT_RENORMALIZE_EVERY: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WafomMethod {
    Dual,
    Inversion,
    Sequential,
}

impl WafomMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            WafomMethod::Dual => "dual",
            WafomMethod::Inversion => "inversion",
            WafomMethod::Sequential => "sequential",
        }
    }
}

impl fmt::Display for WafomMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WafomReport {
    pub value: f64,
    pub log2_value: f64,
    pub n: usize,
    pub s: usize,
    pub d: usize,
    pub method: WafomMethod,
    pub points_used: u64,
}

impl WafomReport {
    fn new(
        value: f64,
        n: usize,
        s: usize,
        d: usize,
        method: WafomMethod,
        points_used: u64,
    ) -> Self {
        WafomReport {
            value,
            log2_value: value.log2(),
            n,
            s,
            d,
            method,
            points_used,
        }
    }

    pub const CSV_HEADER: &'static str = "method,n,S,d,wafom,log2_wafom";

    /// `method,n,S,d,wafom,log2_wafom` with 17 significant digits.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.method,
            self.n,
            self.s,
            self.d,
            crate::fmt_f64(self.value),
            crate::fmt_f64(self.log2_value)
        )
    }
}

/// μ(A) = Σ_{T,j} j·a_{T,j}.
pub fn mu(a: &NetPoint) -> u64 {
    mu_rows(a.rows(), a.n())
}

#[inline]
fn mu_rows(rows: &[u64], n: usize) -> u64 {
    rows.iter().map(|&r| mu_row(r, n)).sum()
}

#[inline]
fn mu_row(mut r: u64, n: usize) -> u64 {
    let mut total = 0u64;
    while r != 0 {
        let p = r.trailing_zeros() as u64;
        total += n as u64 - p;
        r &= r - 1;
    }
    total
}

/// Per-row factor h(b) = Π_{j=1}^{n} (1 + (−1)^{b_j} 2^{−j}) via byte tables.
#[derive(Debug, Clone)]
pub(crate) struct RowFactorTable {
    chunks: Vec<(u32, u64, [f64; 256])>,
}

impl RowFactorTable {
    pub(crate) fn new(n: usize) -> Self {
        let mut chunks = Vec::new();
        let mut first_digit = 1;
        while first_digit <= n {
            let width = (n - first_digit + 1).min(8);
            let shift = (n - (first_digit + width - 1)) as u32;
            let mut table = [0.0; 256];
            for (v, slot) in table.iter_mut().enumerate().take(1 << width) {
                *slot = (0..width)
                    .map(|k| {
                        let j = first_digit + k;
                        let bit = (v >> (width - 1 - k)) & 1;
                        let term = (-(j as f64)).exp2();
                        if bit == 0 {
                            1.0 + term
                        } else {
                            1.0 - term
                        }
                    })
                    .product();
            }
            chunks.push((shift, (1u64 << width) - 1, table));
            first_digit += width;
        }
        RowFactorTable { chunks }
    }

    #[inline]
    pub(crate) fn factor(&self, row: u64) -> f64 {
        let mut h = 1.0;
        for (shift, mask, table) in &self.chunks {
            h *= table[((row >> shift) & mask) as usize];
        }
        h
    }
}

/// ĉ(B) = (1/|V|) Π_{T,j} (1 + (−1)^{b_{T,j}} 2^{−j}), the Fourier transform of A ↦ 2^{−μ(A)}.
pub fn c_hat(b: &NetPoint) -> f64 {
    let table = RowFactorTable::new(b.n());
    let prod: f64 = b.rows().iter().map(|&r| table.factor(r)).product();
    prod * (-((b.n() * b.s()) as f64)).exp2()
}

/// WF(P) by direct summation over P^⊥ − {0}.
pub fn wafom_dual(net: &LinearNet) -> Result<WafomReport> {
    wafom_dual_capped(net, DEFAULT_ENUMERATION_CAP)
}

pub fn wafom_dual_capped(net: &LinearNet, log2_cap: usize) -> Result<WafomReport> {
    let dual = dual_space(net);
    if dual.dim() > log2_cap {
        return Err(Error::Capacity {
            what: "dual space enumeration",
            log2_size: dual.dim(),
            cap: log2_cap,
        });
    }
    let n = net.n();
    let mut acc = CompensatedSum::new();
    // Gray index 0 is the zero matrix, which is excluded.
    dual.for_each_in_range(1, 1u64 << dual.dim(), |rows| {
        acc.add((-(mu_rows(rows, n) as f64)).exp2());
    });
    Ok(WafomReport::new(
        acc.value(),
        n,
        net.s(),
        net.dim(),
        WafomMethod::Dual,
        1u64 << dual.dim(),
    ))
}

/// Σ over Gray indices in `start..end` of (Π_T h(b_T) − 1).
///
/// Row factors are cached and only rows touched by the flipped basis vector
/// are re-evaluated.
fn inversion_partial(
    net: &LinearNet,
    table: &RowFactorTable,
    start: u64,
    end: u64,
) -> CompensatedSum {
    let mut acc = CompensatedSum::new();
    if start >= end {
        return acc;
    }
    let s = net.s();
    let basis = net.basis();
    let mut rows = vec![0u64; s];
    let gray = start ^ (start >> 1);
    for (i, b) in basis.iter().enumerate() {
        if (gray >> i) & 1 == 1 {
            for (r, x) in rows.iter_mut().zip(b.rows()) {
                *r ^= x;
            }
        }
    }
    let mut factors: Vec<f64> = rows.iter().map(|&r| table.factor(r)).collect();
    acc.add(factors.iter().product::<f64>() - 1.0);
    for k in start + 1..end {
        let b = basis[k.trailing_zeros() as usize].rows();
        for t in 0..s {
            if b[t] != 0 {
                rows[t] ^= b[t];
                factors[t] = table.factor(rows[t]);
            }
        }
        acc.add(factors.iter().product::<f64>() - 1.0);
    }
    acc
}

fn inversion_chunks(net: &LinearNet) -> Vec<(u64, u64)> {
    let total = 1u64 << net.dim();
    let chunk = 1u64 << INVERSION_CHUNK_LOG2;
    (0..total.div_ceil(chunk))
        .map(|c| (c * chunk, ((c + 1) * chunk).min(total)))
        .collect()
}

fn check_inversion_cap(net: &LinearNet) -> Result<()> {
    if net.dim() > DEFAULT_ENUMERATION_CAP {
        return Err(Error::Capacity {
            what: "point enumeration",
            log2_size: net.dim(),
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    Ok(())
}

fn finish_inversion(net: &LinearNet, partials: &[CompensatedSum]) -> WafomReport {
    let value = if net.is_full() {
        0.0
    } else {
        let mut acc = CompensatedSum::new();
        for p in partials {
            acc.merge(p);
        }
        acc.value() * (-(net.dim() as f64)).exp2()
    };
    WafomReport::new(
        value,
        net.n(),
        net.s(),
        net.dim(),
        WafomMethod::Inversion,
        1u64 << net.dim(),
    )
}

/// WF(P) = (1/|P|) Σ_{B∈P} [Π_{T,j}(1 + (−1)^{b_{T,j}} 2^{−j}) − 1].
///
/// Work is split into fixed-size chunks summed on the rayon pool and merged in
/// chunk order, so the result is bit-identical for any number of threads.
pub fn wafom_inversion(net: &LinearNet) -> Result<WafomReport> {
    check_inversion_cap(net)?;
    let table = RowFactorTable::new(net.n());
    let partials: Vec<CompensatedSum> = inversion_chunks(net)
        .into_par_iter()
        .map(|(a, b)| inversion_partial(net, &table, a, b))
        .collect();
    Ok(finish_inversion(net, &partials))
}

/// Single-threaded [`wafom_inversion`]; returns the identical value.
pub fn wafom_inversion_serial(net: &LinearNet) -> Result<WafomReport> {
    check_inversion_cap(net)?;
    let table = RowFactorTable::new(net.n());
    let partials: Vec<CompensatedSum> = inversion_chunks(net)
        .into_iter()
        .map(|(a, b)| inversion_partial(net, &table, a, b))
        .collect();
    Ok(finish_inversion(net, &partials))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequentialOptions {
    /// Rebuild the running product from the stored row factors every this
    /// many points; `None` never rebuilds.
    pub renormalize_every: Option<usize>,
}

impl Default for SequentialOptions {
    fn default() -> Self {
        SequentialOptions {
            renormalize_every: Some(DEFAULT_RENORMALIZE_EVERY),
        }
    }
}

/// WF(WU) for a sequential generator in O(nN).
pub fn wafom_sequential(generator: &SequentialGenerator) -> WafomReport {
    wafom_sequential_with(generator, SequentialOptions::default())
}

pub fn wafom_sequential_with(
    generator: &SequentialGenerator,
    options: SequentialOptions,
) -> WafomReport {
    let table = RowFactorTable::new(generator.n());
    let transform = TransformTable::new(generator.transform());
    let value = sequential_sum(generator, &table, &transform, options);
    let d = generator.d();
    WafomReport::new(
        value,
        generator.n(),
        generator.s(),
        d,
        WafomMethod::Sequential,
        1u64 << d,
    )
}

pub(crate) fn sequential_sum(
    generator: &SequentialGenerator,
    table: &RowFactorTable,
    transform: &TransformTable,
    options: SequentialOptions,
) -> f64 {
    let s = generator.s();
    let d = generator.d();
    if d == generator.n() * s {
        return 0.0;
    }
    let period = (1u64 << d) - 1;
    let renorm = options
        .renormalize_every
        .map_or(u64::MAX, |r| r.max(1) as u64);
    let mut lfsr = generator.lfsr();
    let mut ring: Vec<f64> = Vec::with_capacity(s);
    for _ in 0..s {
        ring.push(table.factor(transform.apply(lfsr.window())));
        lfsr.step();
    }
    let mut acc = CompensatedSum::new();
    acc.add(table.factor(0).powi(s as i32) - 1.0);
    let mut prod: f64 = ring.iter().product();
    let mut slot = 0usize;
    for k in 0..period {
        if k > 0 && k % renorm == 0 {
            prod = ring.iter().product();
        }
        acc.add(prod - 1.0);
        let h = table.factor(transform.apply(lfsr.window()));
        lfsr.step();
        prod = prod * h / ring[slot];
        ring[slot] = h;
        slot += 1;
        if slot == s {
            slot = 0;
        }
    }
    acc.value() * (-(d as f64)).exp2()
}
