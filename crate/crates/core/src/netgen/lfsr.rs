//! M-sequences and primitive polynomials over F₂.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported polynomial degree.
pub const MAX_DEGREE: usize = 32;

/// Probability that a free coefficient is drawn as 1 in [`random_primitive_poly`].
pub const COEFF_ONE_BIAS: f64 = 0.75;

/// Distinct prime factors of 2^d − 1 for d = 1..=32.
const MERSENNE_PRIME_FACTORS: [&[u64]; MAX_DEGREE] = [
    &[],
    &[3],
    &[7],
    &[3, 5],
    &[31],
    &[3, 7],
    &[127],
    &[3, 5, 17],
    &[7, 73],
    &[3, 11, 31],
    &[23, 89],
    &[3, 5, 7, 13],
    &[8191],
    &[3, 43, 127],
    &[7, 31, 151],
    &[3, 5, 17, 257],
    &[131071],
    &[3, 7, 19, 73],
    &[524287],
    &[3, 5, 11, 31, 41],
    &[7, 127, 337],
    &[3, 23, 89, 683],
    &[47, 178481],
    &[3, 5, 7, 13, 17, 241],
    &[31, 601, 1801],
    &[3, 2731, 8191],
    &[7, 73, 262657],
    &[3, 5, 29, 43, 113, 127],
    &[233, 1103, 2089],
    &[3, 7, 11, 31, 151, 331],
    &[2147483647],
    &[3, 5, 17, 257, 65537],
];

/// t^d + a₁t^{d−1} + … + a_d, stored as recurrence taps: bit m−1 holds a_m.
///
/// Only primitive polynomials can be constructed through [`PrimitivePoly::new`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimitivePoly {
    degree: usize,
    taps: u64,
}

impl PrimitivePoly {
    pub fn new(degree: usize, taps: u64) -> Result<Self> {
        if !is_primitive(degree, taps)? {
            return Err(Error::InvalidState(format!(
                "polynomial {} is not primitive",
                coeff_string(degree, taps)
            )));
        }
        Ok(PrimitivePoly { degree, taps })
    }

    /// Parses the coefficient string a₁…a_d.
    pub fn from_coeffs(coeffs: &str) -> Result<Self> {
        let degree = coeffs.len();
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::Domain(format!(
                "degree {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        let mut taps = 0u64;
        for (m, c) in coeffs.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => taps |= 1 << m,
                _ => return Err(Error::Invalid(format!("'{coeffs}' is not a binary string"))),
            }
        }
        PrimitivePoly::new(degree, taps)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Recurrence taps; bit m−1 is a_m.
    pub fn taps(&self) -> u64 {
        self.taps
    }

    /// Coefficient a_m for 1 ≤ m ≤ d.
    pub fn coeff(&self, m: usize) -> u8 {
        ((self.taps >> (m - 1)) & 1) as u8
    }

    /// The coefficient string a₁…a_d.
    pub fn coeffs(&self) -> String {
        coeff_string(self.degree, self.taps)
    }
}

impl fmt::Debug for PrimitivePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimitivePoly({})", self.coeffs())
    }
}

fn coeff_string(degree: usize, taps: u64) -> String {
    (1..=degree)
        .map(|m| if (taps >> (m - 1)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Dense polynomial bits: bit k is the coefficient of t^k.
fn poly_bits(degree: usize, taps: u64) -> u64 {
    let mut f = 1u64 << degree;
    for m in 1..=degree {
        if (taps >> (m - 1)) & 1 == 1 {
            f |= 1 << (degree - m);
        }
    }
    f
}

fn mul_mod(a: u64, b: u64, f: u64, degree: usize) -> u64 {
    let mut r = 0u64;
    for bit in (0..degree).rev() {
        r <<= 1;
        if (r >> degree) & 1 == 1 {
            r ^= f;
        }
        if (b >> bit) & 1 == 1 {
            r ^= a;
        }
    }
    r
}

fn pow_mod(base: u64, mut e: u64, f: u64, degree: usize) -> u64 {
    let mut result = 1u64;
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, b, f, degree);
        }
        b = mul_mod(b, b, f, degree);
        e >>= 1;
    }
    result
}

fn poly_degree(a: u64) -> Option<usize> {
    (a != 0).then(|| 63 - a.leading_zeros() as usize)
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("division by zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// t mod f, as residue bits.
fn t_residue(f: u64, degree: usize) -> u64 {
    if degree == 1 {
        poly_rem(0b10, f)
    } else {
        0b10
    }
}

fn is_irreducible(f: u64, degree: usize) -> bool {
    let t = t_residue(f, degree);
    let mut t_pow = t;
    for _ in 1..=degree / 2 {
        t_pow = mul_mod(t_pow, t_pow, f, degree);
        if poly_gcd(f, t_pow ^ t) != 1 {
            return false;
        }
    }
    true
}

/// Whether t^d + a₁t^{d−1} + … + a_d (taps bit m−1 = a_m) is primitive over F₂.
pub fn is_primitive(degree: usize, taps: u64) -> Result<bool> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "degree {degree} outside 1..={MAX_DEGREE}"
        )));
    }
    if taps >> degree != 0 {
        return Err(Error::Domain(format!(
            "taps {taps:#x} exceed degree {degree}"
        )));
    }
    if (taps >> (degree - 1)) & 1 == 0 {
        return Ok(false);
    }
    let f = poly_bits(degree, taps);
    if !is_irreducible(f, degree) {
        return Ok(false);
    }
    let order = (1u64 << degree) - 1;
    let t = t_residue(f, degree);
    if pow_mod(t, order, f, degree) != 1 {
        return Ok(false);
    }
    Ok(MERSENNE_PRIME_FACTORS[degree - 1]
        .iter()
        .all(|&p| pow_mod(t, order / p, f, degree) != 1))
}

/// Draws a₁…a_{d−1} with P(1) = 3/4 and a_d = 1 until the polynomial is primitive.
pub fn random_primitive_poly<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Result<PrimitivePoly> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "degree {degree} outside 1..={MAX_DEGREE}"
        )));
    }
    loop {
        let mut taps = 1u64 << (degree - 1);
        for m in 1..degree {
            if rng.gen_bool(COEFF_ONE_BIAS) {
                taps |= 1 << (m - 1);
            }
        }
        if is_primitive(degree, taps)? {
            return Ok(PrimitivePoly { degree, taps });
        }
    }
}

/// Sliding window (x_i, …, x_{i+d−1}) of a linear recurring sequence,
/// x_i in bit d−1.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Lfsr {
    window: u64,
    taps: u64,
    mask: u64,
}

impl Lfsr {
    pub(crate) fn new(poly: &PrimitivePoly, window: u64) -> Self {
        let mask = (1u64 << poly.degree) - 1;
        Lfsr {
            window: window & mask,
            taps: poly.taps,
            mask,
        }
    }

    #[inline]
    pub(crate) fn window(&self) -> u64 {
        self.window
    }

    /// Advances by one: x_{i+d} = a₁x_{i+d−1} + … + a_d x_i.
    #[inline]
    pub(crate) fn step(&mut self) {
        let next = ((self.window & self.taps).count_ones() & 1) as u64;
        self.window = ((self.window << 1) & self.mask) | next;
    }
}

/// Packs (x₀, …, x_{d−1}) into a window with x₀ most significant.
pub(crate) fn pack_state(bits: &[u8]) -> Result<u64> {
    bits.iter().try_fold(0u64, |acc, &b| match b {
        0 | 1 => Ok((acc << 1) | b as u64),
        _ => Err(Error::InvalidState(format!("state entry {b} is not a bit"))),
    })
}

/// The first `length` terms of the linear recurring sequence of `poly` from `init`.
pub fn msequence(poly: &PrimitivePoly, init: &[u8], length: usize) -> Result<Vec<u8>> {
    if init.len() != poly.degree {
        return Err(Error::InvalidState(format!(
            "initial state has {} entries, degree is {}",
            init.len(),
            poly.degree
        )));
    }
    let window = pack_state(init)?;
    if window == 0 {
        return Err(Error::InvalidState("initial state is zero".into()));
    }
    let mut lfsr = Lfsr::new(poly, window);
    let top = poly.degree - 1;
    let mut out = Vec::with_capacity(length);
    for _ in 0..length {
        out.push(((lfsr.window() >> top) & 1) as u8);
        lfsr.step();
    }
    Ok(out)
}
