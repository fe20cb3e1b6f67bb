use std::fmt;

use super::{parse_bit_string, row_mask};
use crate::error::{Error, Result};

/// A dense rows×cols matrix over F₂ with at most 64 columns.
/// Each row is packed into a `u64`, column 1 in bit cols−1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        BitMatrix::from_rows(cols, vec![0; rows])
    }

    pub fn identity(size: usize) -> Result<Self> {
        BitMatrix::from_rows(size, (0..size).map(|i| 1u64 << (size - 1 - i)).collect())
    }

    pub fn from_rows(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if cols == 0 || cols > 64 {
            return Err(Error::Shape(format!("column count {cols} outside 1..=64")));
        }
        if rows.iter().any(|&r| r & !row_mask(cols) != 0) {
            return Err(Error::Shape(format!("row wider than {cols} columns")));
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn from_bit_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let packed = rows
            .iter()
            .map(|r| {
                let r = r.as_ref();
                if r.len() != cols {
                    return Err(Error::Shape("rows of unequal length".into()));
                }
                parse_bit_string(r).ok_or_else(|| Error::Shape(format!("'{r}' is not binary")))
            })
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(cols, packed)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Entry (i, j), both 0-based.
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> (self.cols - 1 - j)) & 1 == 1
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for bit in (0..self.cols).rev() {
            let Some(pos) = (rank..rows.len()).find(|&i| (rows[i] >> bit) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pos);
            let pivot = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && (*r >> bit) & 1 == 1 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Horizontal concatenation [self | right].
    pub fn hconcat(&self, right: &BitMatrix) -> Result<BitMatrix> {
        if self.nrows() != right.nrows() {
            return Err(Error::Shape(format!(
                "cannot concatenate {} rows with {} rows",
                self.nrows(),
                right.nrows()
            )));
        }
        let cols = self.cols + right.cols;
        let rows = self
            .rows
            .iter()
            .zip(&right.rows)
            .map(|(&l, &r)| (l << right.cols) | r)
            .collect();
        BitMatrix::from_rows(cols, rows)
    }

    /// Appends `extra` zero columns on the right.
    pub fn zero_extend(&self, extra: usize) -> Result<BitMatrix> {
        BitMatrix::from_rows(
            self.cols + extra,
            self.rows.iter().map(|r| r << extra).collect(),
        )
    }

    /// Row vector times matrix: XOR of the rows selected by `v`, whose bit
    /// `nrows−1−i` selects row i.
    pub fn left_mul(&self, v: u64) -> u64 {
        let d = self.rows.len();
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, _)| (v >> (d - 1 - i)) & 1 == 1)
            .fold(0, |acc, (_, r)| acc ^ r)
    }

    pub fn to_bit_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| format!("{:0width$b}", r, width = self.cols))
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix{:?}", self.to_bit_strings())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_concat() {
        let m = BitMatrix::from_bit_strings(&["110", "011", "101"]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(BitMatrix::identity(5).unwrap().rank(), 5);
        let r = BitMatrix::from_bit_strings(&["1", "0", "1"]).unwrap();
        let c = m.hconcat(&r).unwrap();
        assert_eq!(c.to_bit_strings(), vec!["1101", "0110", "1011"]);
        assert_eq!(
            m.zero_extend(2).unwrap().to_bit_strings(),
            vec!["11000", "01100", "10100"]
        );
        assert!(m.get(0, 0) && !m.get(0, 2));
    }

    #[test]
    fn left_mul_selects_rows() {
        let m = BitMatrix::from_bit_strings(&["1100", "0110", "0011"]).unwrap();
        assert_eq!(m.left_mul(0b100), 0b1100);
        assert_eq!(m.left_mul(0b101), 0b1111);
        assert_eq!(m.left_mul(0), 0);
    }
}
