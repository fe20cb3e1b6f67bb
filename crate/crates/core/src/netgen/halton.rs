//! Halton and Faure sequences (non-digital baselines).

/// First `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut c = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= c)
            .all(|&p| !c.is_multiple_of(p))
        {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

fn smallest_prime_at_least(x: u64) -> u64 {
    let mut c = x.max(2);
    while (2..c)
        .take_while(|p| p * p <= c)
        .any(|p| c.is_multiple_of(p))
    {
        c += 1;
    }
    c
}

/// Radical inverse φ_b(k): the base-b digits of k mirrored about the point.
pub fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut x = 0.0;
    while k > 0 {
        x += (k % base) as f64 * scale;
        k /= base;
        scale *= inv;
    }
    x
}

/// Halton points with indices 1..=count, coordinate T in base p_T.
pub fn halton_points(count: usize, s: usize) -> Vec<Vec<f64>> {
    let primes = first_primes(s);
    (1..=count as u64)
        .map(|k| primes.iter().map(|&b| radical_inverse(k, b)).collect())
        .collect()
}

/// Base used by [`faure_points`]: the smallest prime ≥ S.
pub fn faure_base(s: usize) -> u64 {
    smallest_prime_at_least(s as u64)
}

/// Faure points with indices 1..=count.
///
/// Coordinate i applies the i-th power of the Pascal matrix mod b to the digit
/// vector of k, entries C(c, r)·i^{c−r}, before the radical inverse.
pub fn faure_points(count: usize, s: usize) -> Vec<Vec<f64>> {
    let b = faure_base(s);
    let max_digits = {
        let mut m = 1;
        let mut cap = b;
        while cap <= count as u64 {
            cap = cap.saturating_mul(b);
            m += 1;
        }
        m
    };
    // binomials mod b
    let mut binom = vec![vec![0u64; max_digits]; max_digits];
    for c in 0..max_digits {
        binom[c][0] = 1;
        for r in 1..=c {
            binom[c][r] = (binom[c - 1][r - 1] + if r < c { binom[c - 1][r] } else { 0 }) % b;
        }
    }
    let inv = 1.0 / b as f64;
    (1..=count as u64)
        .map(|k| {
            let mut digits = Vec::with_capacity(max_digits);
            let mut q = k;
            while q > 0 {
                digits.push(q % b);
                q /= b;
            }
            (0..s as u64)
                .map(|i| {
                    let mut x = 0.0;
                    let mut scale = inv;
                    #[allow(clippy::needless_range_loop)]
                    for r in 0..digits.len() {
                        let mut y = 0u64;
                        let mut ipow = 1u64;
                        for c in r..digits.len() {
                            y = (y + binom[c][r] * ipow % b * digits[c]) % b;
                            ipow = ipow * (i % b) % b;
                        }
                        x += y as f64 * scale;
                        scale *= inv;
                    }
                    x
                })
                .collect()
        })
        .collect()
}
