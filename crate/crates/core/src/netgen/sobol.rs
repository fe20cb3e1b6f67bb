//! Sobol digital nets from Joe–Kuo direction numbers.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::f2core::{LinearNet, NetPoint};

/// Embedded Joe–Kuo (new-joe-kuo-6) direction numbers for dimensions 2..=21.
pub const EMBEDDED_DIRECTION_NUMBERS: &str = include_str!("../../data/new-joe-kuo-6.21.txt");

/// Direction numbers carry this many bits.
pub const SOBOL_BITS: usize = 32;

/// One row of the direction-number table: `dim s a m_1 … m_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionEntry {
    pub dim: usize,
    pub degree: usize,
    pub coeff: u32,
    pub initial: Vec<u32>,
}

/// Direction numbers for Sobol dimensions 1..=len(); dimension 1 is implicit.
#[derive(Debug, Clone)]
pub struct SobolTable {
    vectors: Vec<[u32; SOBOL_BITS]>,
}

impl SobolTable {
    pub fn embedded() -> &'static SobolTable {
        static TABLE: OnceLock<SobolTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            SobolTable::parse(EMBEDDED_DIRECTION_NUMBERS).expect("embedded table is well formed")
        })
    }

    /// Parses the published text layout; a header line starting with `d` is skipped.
    pub fn parse(text: &str) -> Result<SobolTable> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('d') || line.starts_with('#') {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|f| f.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(i + 1, e.to_string()))?;
            if nums.len() < 4 || nums.len() != 3 + nums[1] as usize {
                return Err(Error::parse(i + 1, "expected 'dim s a m_1 .. m_s'"));
            }
            entries.push(DirectionEntry {
                dim: nums[0] as usize,
                degree: nums[1] as usize,
                coeff: nums[2],
                initial: nums[3..].to_vec(),
            });
        }
        SobolTable::from_entries(&entries)
    }

    pub fn from_entries(entries: &[DirectionEntry]) -> Result<SobolTable> {
        let mut vectors = Vec::with_capacity(entries.len() + 1);
        vectors.push(std::array::from_fn(|i| 1u32 << (SOBOL_BITS - 1 - i)));
        for (k, e) in entries.iter().enumerate() {
            if e.dim != k + 2 {
                return Err(Error::parse(
                    k + 1,
                    format!("expected dimension {}, got {}", k + 2, e.dim),
                ));
            }
            let s = e.degree;
            if s == 0 || s >= SOBOL_BITS || e.initial.len() != s {
                return Err(Error::parse(k + 1, "bad polynomial degree"));
            }
            let mut v = [0u32; SOBOL_BITS];
            for i in 0..SOBOL_BITS {
                v[i] = if i < s {
                    let m = e.initial[i];
                    if m % 2 == 0 || m >= 1 << (i + 1) {
                        return Err(Error::parse(
                            k + 1,
                            format!("m_{} = {m} must be odd and < 2^{}", i + 1, i + 1),
                        ));
                    }
                    m << (SOBOL_BITS - 1 - i)
                } else {
                    let mut x = v[i - s] ^ (v[i - s] >> s);
                    for j in 1..s {
                        if (e.coeff >> (s - 1 - j)) & 1 == 1 {
                            x ^= v[i - j];
                        }
                    }
                    x
                };
            }
            vectors.push(v);
        }
        Ok(SobolTable { vectors })
    }

    /// Number of dimensions available.
    pub fn dims(&self) -> usize {
        self.vectors.len()
    }

    /// Direction number v_i of dimension `dim` (1-based), as a 32-bit fraction.
    pub fn direction(&self, dim: usize, i: usize) -> u32 {
        self.vectors[dim - 1][i]
    }
}

/// The first 2^d Sobol points in dimensions 1..=s at n-digit precision.
pub fn sobol_net(d: usize, s: usize, n: usize) -> Result<LinearNet> {
    let dims: Vec<usize> = (1..=s).collect();
    sobol_net_with_dims(d, n, &dims)
}

/// As [`sobol_net`], drawing coordinates from the listed Sobol dimensions (1-based).
pub fn sobol_net_with_dims(d: usize, n: usize, dims: &[usize]) -> Result<LinearNet> {
    let table = SobolTable::embedded();
    if dims.is_empty() || dims.iter().any(|&k| k == 0 || k > table.dims()) {
        return Err(Error::Shape(format!(
            "Sobol dimensions must lie in 1..={}",
            table.dims()
        )));
    }
    if n == 0 || n > SOBOL_BITS {
        return Err(Error::Shape(format!(
            "precision n={n} outside 1..={SOBOL_BITS}"
        )));
    }
    if d > 30 || d > n {
        return Err(Error::Shape(format!(
            "d={d} must satisfy d ≤ 30 and d ≤ n={n}"
        )));
    }
    let shift = SOBOL_BITS - n;
    let basis = (0..d)
        .map(|i| {
            let rows = dims
                .iter()
                .map(|&k| (table.direction(k, i) >> shift) as u64)
                .collect();
            NetPoint::from_rows(n, rows)
        })
        .collect::<Result<Vec<_>>>()?;
    LinearNet::new(n, dims.len(), basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2core::{to_unit_cube, NetPoint};

    #[test]
    fn embedded_table_has_21_dims() {
        let t = SobolTable::embedded();
        assert_eq!(t.dims(), 21);
        // dimension 2 is t+1 with m=1: v_i = 2^{-i} ^ 2^{-i-1}… pattern 1,3,5,15,…
        let top: Vec<u32> = (0..4).map(|i| t.direction(2, i) >> 28).collect();
        assert_eq!(top, vec![0b1000, 0b1100, 0b1010, 0b1111]);
    }

    #[test]
    fn first_dimension_is_van_der_corput() {
        let net = sobol_net(4, 1, 30).unwrap();
        let mut xs: Vec<f64> = net
            .points()
            .unwrap()
            .map(|p| to_unit_cube(&p, false)[0])
            .collect();
        xs.sort_by(f64::total_cmp);
        let expected: Vec<f64> = (0..16).map(|k| k as f64 / 16.0).collect();
        assert_eq!(xs, expected);
    }

    /// Unscrambled Sobol points 1..=7 in dimensions 1..=4, as produced by scipy.stats.qmc.Sobol.
    #[test]
    fn matches_reference_points() {
        let expected = [
            [0.5, 0.5, 0.5, 0.5],
            [0.75, 0.25, 0.25, 0.25],
            [0.25, 0.75, 0.75, 0.75],
            [0.375, 0.375, 0.625, 0.875],
            [0.875, 0.875, 0.125, 0.375],
            [0.625, 0.125, 0.875, 0.625],
            [0.125, 0.625, 0.375, 0.125],
        ];
        let net = sobol_net(3, 4, 30).unwrap();
        // point k is Σ g_i v_i over the bits of the Gray code g of k
        for (k, e) in expected.iter().enumerate() {
            let k = k + 1;
            let g = k ^ (k >> 1);
            let mut p = NetPoint::zero(30, 4).unwrap();
            for (i, b) in net.basis().iter().enumerate() {
                if (g >> i) & 1 == 1 {
                    p.xor_assign(b);
                }
            }
            assert_eq!(to_unit_cube(&p, false), e.to_vec(), "point {k}");
        }
    }

    #[test]
    fn rank_is_d() {
        for s in [1, 4, 8, 16, 21] {
            for d in [1, 5, 10, 20, 30] {
                assert_eq!(sobol_net(d, s, 30).unwrap().dim(), d);
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(sobol_net(10, 22, 30).is_err());
        assert!(sobol_net(31, 2, 32).is_err());
        assert!(sobol_net(10, 2, 33).is_err());
        assert!(sobol_net(10, 2, 8).is_err());
    }

    #[test]
    fn parse_rejects_bad_rows() {
        assert!(SobolTable::parse("2 1 0 2\n").is_err());
        assert!(SobolTable::parse("3 1 0 1\n").is_err());
        assert!(SobolTable::parse("2 2 0 1\n").is_err());
        assert_eq!(SobolTable::parse("d s a m\n2 1 0 1\n").unwrap().dims(), 2);
    }
}
