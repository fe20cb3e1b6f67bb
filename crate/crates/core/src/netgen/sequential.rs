//! Sequential generators: nets WU built from M-sequence windows.
//!
//! Point k (0 ≤ k ≤ 2^d − 2) is C_k·U, where row T of C_k is the window
//! (x_{k+T−1}, …, x_{k+T+d−2}) and U is a d×n output transform of rank d.
//! Row T+1 of C_k·U is row T of C_{k+1}·U, so each new point costs one new row.

use std::collections::VecDeque;
use std::fmt::Write as _;

use super::lfsr::{Lfsr, PrimitivePoly};
use crate::error::{Error, Result};
use crate::f2core::{
    parse_bit_field, parse_shape_line, BitMatrix, LinearNet, NetPoint, MAX_DIGITS,
};

pub const GEN_FILE_HEADER: &str = "wafom-gen v1";

/// Precomputed byte tables for v ↦ v·U.
#[derive(Debug, Clone)]
pub(crate) struct TransformTable {
    tables: Vec<[u64; 256]>,
}

impl TransformTable {
    pub(crate) fn new(u: &BitMatrix) -> Self {
        let d = u.nrows();
        let chunks = d.div_ceil(8);
        let tables = (0..chunks)
            .map(|c| {
                let mut t = [0u64; 256];
                for (v, slot) in t.iter_mut().enumerate() {
                    *slot = u.left_mul(((v as u64) << (8 * c)) & ((1u64 << d) - 1));
                }
                t
            })
            .collect();
        TransformTable { tables }
    }

    #[inline]
    pub(crate) fn apply(&self, window: u64) -> u64 {
        self.tables.iter().enumerate().fold(0, |acc, (c, t)| {
            acc ^ t[((window >> (8 * c)) & 0xff) as usize]
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SequentialGenerator {
    poly: PrimitivePoly,
    init: u64,
    transform: BitMatrix,
    s: usize,
}

impl std::fmt::Debug for SequentialGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SequentialGenerator")
            .field("poly", &self.poly)
            .field(
                "init",
                &format!("{:0w$b}", self.init, w = self.poly.degree()),
            )
            .field("transform", &self.transform)
            .field("s", &self.s)
            .finish()
    }
}

impl SequentialGenerator {
    /// Generator with the initial state (1, 0, …, 0).
    pub fn new(poly: PrimitivePoly, transform: BitMatrix, s: usize) -> Result<Self> {
        let d = poly.degree();
        SequentialGenerator::with_init(poly, 1 << (d - 1), transform, s)
    }

    /// `init` packs (x₀, …, x_{d−1}) with x₀ most significant.
    pub fn with_init(
        poly: PrimitivePoly,
        init: u64,
        transform: BitMatrix,
        s: usize,
    ) -> Result<Self> {
        let d = poly.degree();
        if init == 0 || init >> d != 0 {
            return Err(Error::InvalidState(format!(
                "initial state {init:#b} is zero or wider than d={d}"
            )));
        }
        if transform.nrows() != d {
            return Err(Error::Shape(format!(
                "transform has {} rows, degree is {d}",
                transform.nrows()
            )));
        }
        if transform.ncols() > MAX_DIGITS {
            return Err(Error::Shape(format!(
                "transform has {} columns, at most {MAX_DIGITS} supported",
                transform.ncols()
            )));
        }
        let r = transform.rank();
        if r != d {
            return Err(Error::Rank {
                expected: d,
                found: r,
            });
        }
        if s == 0 {
            return Err(Error::Shape("dimension S must be positive".into()));
        }
        Ok(SequentialGenerator {
            poly,
            init,
            transform,
            s,
        })
    }

    pub fn poly(&self) -> &PrimitivePoly {
        &self.poly
    }

    pub fn init(&self) -> u64 {
        self.init
    }

    pub fn transform(&self) -> &BitMatrix {
        &self.transform
    }

    pub fn d(&self) -> usize {
        self.poly.degree()
    }

    pub fn n(&self) -> usize {
        self.transform.ncols()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub(crate) fn lfsr(&self) -> Lfsr {
        Lfsr::new(&self.poly, self.init)
    }

    /// The 2^d points: 0 first, then C_k·U for k = 0, …, 2^d − 2.
    pub fn points(&self) -> SequentialPoints {
        SequentialPoints::new(self)
    }

    /// A basis of WU: the images of C₀ for each unit initial state.
    pub fn to_linear_net(&self) -> Result<LinearNet> {
        let d = self.d();
        let table = TransformTable::new(&self.transform);
        let basis = (0..d)
            .map(|m| {
                let mut lfsr = Lfsr::new(&self.poly, 1 << (d - 1 - m));
                let rows = (0..self.s)
                    .map(|_| {
                        let row = table.apply(lfsr.window());
                        lfsr.step();
                        row
                    })
                    .collect();
                NetPoint::from_rows(self.n(), rows)
            })
            .collect::<Result<Vec<_>>>()?;
        LinearNet::new(self.n(), self.s, basis)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{GEN_FILE_HEADER}").unwrap();
        writeln!(out, "n={} S={} d={}", self.n(), self.s, self.d()).unwrap();
        writeln!(out, "poly={}", self.poly.coeffs()).unwrap();
        writeln!(out, "init={:0w$b}", self.init, w = self.d()).unwrap();
        for row in self.transform.to_bit_strings() {
            writeln!(out, "{row}").unwrap();
        }
        out
    }

    /// Parses the `wafom-gen v1` format written by [`Self::to_file_string`].
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        if lines.first().map(|l| l.trim_end()) != Some(GEN_FILE_HEADER) {
            return Err(Error::parse(
                1,
                format!("expected header '{GEN_FILE_HEADER}'"),
            ));
        }
        let shape = lines
            .get(1)
            .ok_or_else(|| Error::parse(2, "missing shape line"))?;
        let v = parse_shape_line(shape, 2, &["n", "S", "d"])?;
        let (n, s, d) = (v[0], v[1], v[2]);
        if n == 0 || n > MAX_DIGITS || s == 0 || d == 0 || d > n.min(super::MAX_DEGREE) {
            return Err(Error::parse(
                2,
                format!("unsupported shape n={n} S={s} d={d}"),
            ));
        }
        let field = |idx: usize, key: &str| -> Result<&str> {
            lines
                .get(idx)
                .and_then(|l| l.trim_end().strip_prefix(key))
                .ok_or_else(|| Error::parse(idx + 1, format!("expected '{key}<bits>'")))
        };
        let poly_bits = field(2, "poly=")?;
        if poly_bits.len() != d {
            return Err(Error::parse(
                3,
                format!("poly has {} coefficients, d={d}", poly_bits.len()),
            ));
        }
        let poly = PrimitivePoly::from_coeffs(poly_bits)?;
        let init = parse_bit_field(field(3, "init=")?, d, 4)?;
        let body: Vec<&str> = lines[4..]
            .iter()
            .copied()
            .filter(|l| !l.trim().is_empty())
            .collect();
        if body.len() != d {
            return Err(Error::parse(
                5,
                format!("expected {d} transform rows, found {}", body.len()),
            ));
        }
        let rows = body
            .iter()
            .enumerate()
            .map(|(i, l)| parse_bit_field(l.trim(), n, i + 5))
            .collect::<Result<Vec<_>>>()?;
        SequentialGenerator::with_init(poly, init, BitMatrix::from_rows(n, rows)?, s)
    }
}

/// Stream of generator points. Each step computes one new row.
#[derive(Debug, Clone)]
pub struct SequentialPoints {
    n: usize,
    s: usize,
    table: TransformTable,
    lfsr: Lfsr,
    rows: VecDeque<u64>,
    emitted: u64,
    total: u64,
}

impl SequentialPoints {
    fn new(generator: &SequentialGenerator) -> Self {
        let table = TransformTable::new(&generator.transform);
        let mut lfsr = generator.lfsr();
        let rows = (0..generator.s)
            .map(|_| {
                let r = table.apply(lfsr.window());
                lfsr.step();
                r
            })
            .collect();
        SequentialPoints {
            n: generator.n(),
            s: generator.s,
            table,
            lfsr,
            rows,
            emitted: 0,
            total: 1u64 << generator.d(),
        }
    }
}

impl Iterator for SequentialPoints {
    type Item = NetPoint;

    fn next(&mut self) -> Option<NetPoint> {
        if self.emitted >= self.total {
            return None;
        }
        let point = if self.emitted == 0 {
            NetPoint::from_rows(self.n, vec![0; self.s])
        } else {
            let p = NetPoint::from_rows(self.n, self.rows.iter().copied().collect());
            self.rows.pop_front();
            self.rows.push_back(self.table.apply(self.lfsr.window()));
            self.lfsr.step();
            p
        };
        self.emitted += 1;
        Some(point.expect("rows are masked to n digits"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.emitted) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for SequentialPoints {}

/// The net WU of `generator` together with its ordered point stream.
pub fn generate_net(generator: &SequentialGenerator) -> Result<(LinearNet, SequentialPoints)> {
    Ok((generator.to_linear_net()?, generator.points()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn poly(c: &str) -> PrimitivePoly {
        PrimitivePoly::from_coeffs(c).unwrap()
    }

    #[test]
    fn identity_transform_reproduces_windows() {
        // t²+t+1 from (1,0): x = 1,0,1,1,0,1,… so windows are 10, 01, 11.
        let g = SequentialGenerator::new(poly("11"), BitMatrix::identity(2).unwrap(), 1).unwrap();
        let pts: Vec<_> = g.points().map(|p| p.rows()[0]).collect();
        assert_eq!(pts, vec![0b00, 0b10, 0b01, 0b11]);
    }

    #[test]
    fn shift_property_and_distinct_points() {
        let u = BitMatrix::from_bit_strings(&["1010110", "0110011", "0011101", "1100000"]).unwrap();
        let g = SequentialGenerator::new(poly("0011"), u, 3).unwrap();
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts.len(), 16);
        let distinct: HashSet<_> = pts.iter().cloned().collect();
        assert_eq!(distinct.len(), 16);
        for w in pts[1..].windows(2) {
            assert_eq!(w[0].rows()[1..], w[1].rows()[..2]);
        }
    }

    #[test]
    fn stream_matches_linear_net() {
        let u = BitMatrix::from_bit_strings(&["10110", "01011", "00111"]).unwrap();
        let g = SequentialGenerator::new(poly("101"), u, 2).unwrap();
        let (net, stream) = generate_net(&g).unwrap();
        assert_eq!(net.dim(), 3);
        let a: HashSet<_> = stream.collect();
        let b: HashSet<_> = net.points().unwrap().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_invalid_generators() {
        let singular = BitMatrix::from_bit_strings(&["110", "110"]).unwrap();
        assert!(matches!(
            SequentialGenerator::new(poly("11"), singular, 2),
            Err(Error::Rank {
                expected: 2,
                found: 1
            })
        ));
        let u = BitMatrix::identity(2).unwrap();
        assert!(matches!(
            SequentialGenerator::with_init(poly("11"), 0, u.clone(), 2),
            Err(Error::InvalidState(_))
        ));
        assert!(SequentialGenerator::new(poly("11"), u, 0).is_err());
    }

    #[test]
    fn file_round_trip() {
        let u = BitMatrix::from_bit_strings(&["10110", "01011", "00111"]).unwrap();
        let g = SequentialGenerator::with_init(poly("101"), 0b011, u, 4).unwrap();
        let text = g.to_file_string();
        assert_eq!(
            text,
            "wafom-gen v1\nn=5 S=4 d=3\npoly=101\ninit=011\n10110\n01011\n00111\n"
        );
        assert_eq!(SequentialGenerator::parse(&text).unwrap(), g);
        assert!(SequentialGenerator::parse(&text.replace("poly=101", "poly=100")).is_err());
        assert!(SequentialGenerator::parse(&text.replace("00111\n", "")).is_err());
    }
}
