//! Bit-exact linear algebra over V = (F₂ⁿ)^S.
//!
//! A [`NetPoint`] is an S×n bit matrix. Row T is packed into one `u64` with
//! digit b₁ in bit n−1, so the integer value of a row is the numerator of its
//! binary fraction over 2ⁿ. Flattened vector order is row-major: row T outer,
//! digit j inner, most significant digit first.

mod fourier;
mod matrix;
mod netfile;

pub use fourier::{fourier_expand, fourier_transform, MAX_FOURIER_DIGITS};
pub use matrix::BitMatrix;
pub(crate) use netfile::{parse_bit_field, parse_shape_line};
pub use netfile::{parse_net, write_net, NET_FILE_HEADER};

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported degree of discretization. Keeps every coordinate and its
/// midpoint exactly representable in an `f64`.
pub const MAX_DIGITS: usize = 52;

/// Default enumeration cap, as log₂ of the number of points.
pub const DEFAULT_ENUMERATION_CAP: usize = 26;

fn check_digits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIGITS {
        return Err(Error::Shape(format!(
            "digit count n={n} outside 1..={MAX_DIGITS}"
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn row_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// One n-digit binary fraction b = Σ b_j 2^{-j}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitRow {
    bits: u64,
    n: usize,
}

impl BitRow {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_digits(n)?;
        if bits & !row_mask(n) != 0 {
            return Err(Error::Shape(format!(
                "row value {bits:#x} has more than {n} digits"
            )));
        }
        Ok(BitRow { bits, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Packed digits, b₁ in the most significant used bit.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Digit b_j for 1 ≤ j ≤ n.
    pub fn digit(&self, j: usize) -> u8 {
        assert!(
            (1..=self.n).contains(&j),
            "digit index {j} out of 1..={}",
            self.n
        );
        ((self.bits >> (self.n - j)) & 1) as u8
    }

    pub fn fraction(&self) -> f64 {
        self.bits as f64 / (self.n as f64).exp2()
    }
}

/// An S×n matrix over F₂, equivalently a point of [0,1)^S with n-digit coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NetPoint {
    n: usize,
    rows: Vec<u64>,
}

impl NetPoint {
    pub fn zero(n: usize, s: usize) -> Result<Self> {
        check_digits(n)?;
        if s == 0 {
            return Err(Error::Shape("dimension S must be positive".into()));
        }
        Ok(NetPoint {
            n,
            rows: vec![0; s],
        })
    }

    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self> {
        check_digits(n)?;
        if rows.is_empty() {
            return Err(Error::Shape("dimension S must be positive".into()));
        }
        if let Some(r) = rows.iter().find(|&&r| r & !row_mask(n) != 0) {
            return Err(Error::Shape(format!(
                "row value {r:#x} has more than {n} digits"
            )));
        }
        Ok(NetPoint { n, rows })
    }

    /// Parses rows written as binary strings, digit b₁ first.
    pub fn from_bit_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut packed = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::Shape("rows of unequal length".into()));
            }
            packed.push(
                parse_bit_string(r)
                    .ok_or_else(|| Error::Shape(format!("'{r}' is not a binary string")))?,
            );
        }
        NetPoint::from_rows(n, packed)
    }

    /// Matrix with a single one at row `t`, digit `j` (0-based row, 1-based digit).
    pub fn unit(n: usize, s: usize, t: usize, j: usize) -> Result<Self> {
        let mut p = NetPoint::zero(n, s)?;
        if t >= s || j == 0 || j > n {
            return Err(Error::Shape(format!("entry ({t},{j}) outside {s}x{n}")));
        }
        p.rows[t] = 1 << (n - j);
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, t: usize) -> BitRow {
        BitRow {
            bits: self.rows[t],
            n: self.n,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Number of bits of the flattened vector, nS.
    pub fn flat_len(&self) -> usize {
        self.n * self.rows.len()
    }

    /// Entry at flat index `p = T·n + (j−1)` (0-based T, 1-based j).
    #[inline]
    pub fn flat_bit(&self, p: usize) -> bool {
        let (t, k) = (p / self.n, p % self.n);
        (self.rows[t] >> (self.n - 1 - k)) & 1 == 1
    }

    #[inline]
    fn flip_flat(&mut self, p: usize) {
        let (t, k) = (p / self.n, p % self.n);
        self.rows[t] ^= 1 << (self.n - 1 - k);
    }

    fn first_flat_one(&self) -> Option<usize> {
        self.rows.iter().enumerate().find_map(|(t, &r)| {
            (r != 0).then(|| t * self.n + (r.leading_zeros() as usize - (64 - self.n)))
        })
    }

    pub fn xor_assign(&mut self, other: &NetPoint) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            *a ^= b;
        }
    }

    pub fn same_shape(&self, other: &NetPoint) -> bool {
        self.n == other.n && self.rows.len() == other.rows.len()
    }

    /// Integer index of the flattened vector, first flat bit most significant.
    /// Only defined for nS ≤ 63.
    pub fn to_index(&self) -> u64 {
        assert!(
            self.flat_len() <= 63,
            "nS={} too large for an index",
            self.flat_len()
        );
        self.rows.iter().fold(0u64, |acc, &r| (acc << self.n) | r)
    }

    pub fn from_index(index: u64, n: usize, s: usize) -> Result<Self> {
        check_digits(n)?;
        if n * s > 63 || (n * s < 64 && index >> (n * s) != 0) {
            return Err(Error::Shape(format!("index {index} does not fit {s}x{n}")));
        }
        let mask = row_mask(n);
        let rows = (0..s)
            .map(|t| (index >> (n * (s - 1 - t))) & mask)
            .collect();
        NetPoint::from_rows(n, rows)
    }
}

impl fmt::Debug for NetPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NetPoint[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{:0width$b}", r, width = self.n)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn parse_bit_string(s: &str) -> Option<u64> {
    if s.is_empty() || s.len() > 64 {
        return None;
    }
    s.bytes().try_fold(0u64, |acc, c| match c {
        b'0' => Some(acc << 1),
        b'1' => Some((acc << 1) | 1),
        _ => None,
    })
}

fn check_same_shape(a: &NetPoint, b: &NetPoint) -> Result<()> {
    if !a.same_shape(b) {
        return Err(Error::Shape(format!(
            "{}x{} vs {}x{}",
            a.s(),
            a.n(),
            b.s(),
            b.n()
        )));
    }
    Ok(())
}

/// (B|A) = Σ b_{T,j} a_{T,j} mod 2.
pub fn inner_product(b: &NetPoint, a: &NetPoint) -> Result<u8> {
    check_same_shape(b, a)?;
    Ok(inner_product_unchecked(b.rows(), a.rows()))
}

#[inline]
pub(crate) fn inner_product_unchecked(b: &[u64], a: &[u64]) -> u8 {
    let ones: u32 = b.iter().zip(a).map(|(x, y)| (x & y).count_ones()).sum();
    (ones & 1) as u8
}

/// ⟨B|A⟩ = (−1)^{(B|A)}.
pub fn character(b: &NetPoint, a: &NetPoint) -> Result<i8> {
    Ok(if inner_product(b, a)? == 0 { 1 } else { -1 })
}

/// Reduced row echelon basis of a set of vectors, pivots on the first flat one.
#[derive(Debug, Clone)]
struct Echelon {
    rows: Vec<(usize, NetPoint)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, v: &mut NetPoint) {
        for (p, r) in &self.rows {
            if v.flat_bit(*p) {
                v.xor_assign(r);
            }
        }
    }

    /// Inserts `v`, returning false when it is already in the span.
    fn insert(&mut self, mut v: NetPoint) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.first_flat_one() else {
            return false;
        };
        for (_, r) in self.rows.iter_mut() {
            if r.flat_bit(p) {
                r.xor_assign(&v);
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// F₂-rank of the span of `points`.
pub fn rank(points: &[NetPoint]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| Error::Shape("rank of an empty list".into()))?;
    let mut ech = Echelon::new();
    for p in points {
        check_same_shape(first, p)?;
        ech.insert(p.clone());
    }
    Ok(ech.rows.len())
}

/// An F₂-linear subspace of V, stored as a basis of d independent points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearNet {
    n: usize,
    s: usize,
    basis: Vec<NetPoint>,
}

impl LinearNet {
    /// Builds a net from a basis, rejecting dependent or misshapen vectors.
    pub fn new(n: usize, s: usize, basis: Vec<NetPoint>) -> Result<Self> {
        NetPoint::zero(n, s)?;
        if let Some(b) = basis.iter().find(|b| b.n() != n || b.s() != s) {
            return Err(Error::Shape(format!(
                "basis vector is {}x{}, net is {s}x{n}",
                b.s(),
                b.n()
            )));
        }
        if basis.len() > n * s {
            return Err(Error::Rank {
                expected: basis.len(),
                found: n * s,
            });
        }
        let r = if basis.is_empty() { 0 } else { rank(&basis)? };
        if r != basis.len() {
            return Err(Error::Rank {
                expected: basis.len(),
                found: r,
            });
        }
        Ok(LinearNet { n, s, basis })
    }

    /// Net spanned by `vectors`, which may be dependent.
    pub fn span(n: usize, s: usize, vectors: &[NetPoint]) -> Result<Self> {
        NetPoint::zero(n, s)?;
        let mut ech = Echelon::new();
        let mut basis = Vec::new();
        for v in vectors {
            if v.n() != n || v.s() != s {
                return Err(Error::Shape("vector shape differs from net shape".into()));
            }
            if ech.insert(v.clone()) {
                basis.push(v.clone());
            }
        }
        Ok(LinearNet { n, s, basis })
    }

    /// The trivial subspace {0}.
    pub fn zero(n: usize, s: usize) -> Result<Self> {
        LinearNet::new(n, s, Vec::new())
    }

    /// The whole space V.
    pub fn full(n: usize, s: usize) -> Result<Self> {
        let basis = (0..s)
            .flat_map(|t| (1..=n).map(move |j| (t, j)))
            .map(|(t, j)| NetPoint::unit(n, s, t, j))
            .collect::<Result<Vec<_>>>()?;
        LinearNet::new(n, s, basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Dimension d of the subspace; the net has 2^d points.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[NetPoint] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n * self.s
    }

    pub fn contains(&self, p: &NetPoint) -> Result<bool> {
        if p.n() != self.n || p.s() != self.s {
            return Err(Error::Shape("point shape differs from net shape".into()));
        }
        let mut ech = Echelon::new();
        for b in &self.basis {
            ech.insert(b.clone());
        }
        let mut v = p.clone();
        ech.reduce(&mut v);
        Ok(v.is_zero())
    }

    /// Whether both nets span the same subspace.
    pub fn same_subspace(&self, other: &LinearNet) -> Result<bool> {
        if self.n != other.n || self.s != other.s {
            return Err(Error::Shape("nets have different shapes".into()));
        }
        if self.dim() != other.dim() {
            return Ok(false);
        }
        for b in &other.basis {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Gray-code stream over all 2^d points with the default cap.
    pub fn points(&self) -> Result<GrayPoints<'_>> {
        self.points_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn points_capped(&self, log2_cap: usize) -> Result<GrayPoints<'_>> {
        if self.dim() > log2_cap {
            return Err(Error::Capacity {
                what: "point enumeration",
                log2_size: self.dim(),
                cap: log2_cap,
            });
        }
        Ok(GrayPoints {
            basis: &self.basis,
            current: NetPoint {
                n: self.n,
                rows: vec![0; self.s],
            },
            next_index: 0,
            end: 1u64 << self.dim(),
        })
    }

    /// Visits points with Gray-code index in `start..end`, passing packed rows.
    ///
    /// Point k is the XOR of the basis vectors selected by the bits of k ^ (k >> 1),
    /// so consecutive points differ by exactly one basis vector.
    pub(crate) fn for_each_in_range(&self, start: u64, end: u64, mut visit: impl FnMut(&[u64])) {
        debug_assert!(end <= 1u64 << self.dim());
        if start >= end {
            return;
        }
        let mut cur = vec![0u64; self.s];
        let gray = start ^ (start >> 1);
        for (i, b) in self.basis.iter().enumerate() {
            if (gray >> i) & 1 == 1 {
                for (c, r) in cur.iter_mut().zip(b.rows()) {
                    *c ^= r;
                }
            }
        }
        visit(&cur);
        for k in start + 1..end {
            let b = &self.basis[k.trailing_zeros() as usize];
            for (c, r) in cur.iter_mut().zip(b.rows()) {
                *c ^= r;
            }
            visit(&cur);
        }
    }
}

/// Stream of the points of a [`LinearNet`] in Gray-code order, starting at 0.
#[derive(Debug, Clone)]
pub struct GrayPoints<'a> {
    basis: &'a [NetPoint],
    current: NetPoint,
    next_index: u64,
    end: u64,
}

impl Iterator for GrayPoints<'_> {
    type Item = NetPoint;

    fn next(&mut self) -> Option<NetPoint> {
        if self.next_index >= self.end {
            return None;
        }
        if self.next_index > 0 {
            let flip = &self.basis[self.next_index.trailing_zeros() as usize];
            self.current.xor_assign(flip);
        }
        self.next_index += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next_index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for GrayPoints<'_> {}

/// All 2^d points of `net`, Gray-code order, capped at 2^26.
pub fn enumerate_points(net: &LinearNet) -> Result<GrayPoints<'_>> {
    net.points()
}

/// Basis of P^⊥ = {A : (B|A) = 0 for all B ∈ P}, of dimension nS − d.
pub fn dual_space(net: &LinearNet) -> LinearNet {
    let total = net.n * net.s;
    let mut ech = Echelon::new();
    for b in &net.basis {
        ech.insert(b.clone());
    }
    let mut pivot_of = vec![None; total];
    for (i, (p, _)) in ech.rows.iter().enumerate() {
        pivot_of[*p] = Some(i);
    }
    let mut basis = Vec::with_capacity(total - net.dim());
    for free in (0..total).filter(|&p| pivot_of[p].is_none()) {
        let mut a = NetPoint {
            n: net.n,
            rows: vec![0; net.s],
        };
        a.flip_flat(free);
        for (p, r) in &ech.rows {
            if r.flat_bit(free) {
                a.flip_flat(*p);
            }
        }
        basis.push(a);
    }
    LinearNet {
        n: net.n,
        s: net.s,
        basis,
    }
}

/// Σ_{B∈P} ⟨B|A⟩, which is |P| when A ∈ P^⊥ and 0 otherwise.
pub fn character_sum(net: &LinearNet, a: &NetPoint) -> Result<i64> {
    if a.n() != net.n || a.s() != net.s {
        return Err(Error::Shape(
            "character argument shape differs from net".into(),
        ));
    }
    let points = net.points()?;
    let mut total = 0i64;
    for b in points {
        total += if inner_product_unchecked(b.rows(), a.rows()) == 0 {
            1
        } else {
            -1
        };
    }
    Ok(total)
}

/// Coordinates of `b` in [0,1)^S, shifted to the cube midpoint when `midpoint` is set.
pub fn to_unit_cube(b: &NetPoint, midpoint: bool) -> Vec<f64> {
    let mut out = vec![0.0; b.s()];
    to_unit_cube_into(b.rows(), b.n(), midpoint, &mut out);
    out
}

#[inline]
pub(crate) fn to_unit_cube_into(rows: &[u64], n: usize, midpoint: bool, out: &mut [f64]) {
    let scale = (-(n as f64)).exp2();
    let shift = if midpoint { 0.5 * scale } else { 0.0 };
    for (o, &r) in out.iter_mut().zip(rows) {
        *o = r as f64 * scale + shift;
    }
}
