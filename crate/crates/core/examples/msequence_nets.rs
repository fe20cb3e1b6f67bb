//! Primitive polynomials, M-sequences and the nets built from their sliding windows.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wafomlab::f2core::to_unit_cube;
use wafomlab::netgen::{generate_net, is_primitive, msequence, random_primitive_poly};
use wafomlab::{BitMatrix, PrimitivePoly, SequentialGenerator};

fn main() -> wafomlab::Result<()> {
    // t^4 + t + 1 in the a1..a4 convention: x_{i+4} = x_{i+3}·a1 + ... + x_i·a4.
    let poly = PrimitivePoly::from_coeffs("0011")?;
    let seq = msequence(&poly, &[0, 0, 0, 1], 30)?;
    let text: String = seq.iter().map(|b| char::from(b'0' + b)).collect();
    println!("period-15 M-sequence: {text}");

    let primitive = (1u64..16)
        .filter(|&taps| taps & 0b1000 != 0 && is_primitive(4, taps).unwrap())
        .count();
    println!("primitive polynomials of degree 4: {primitive}");

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = random_primitive_poly(12, &mut rng)?;
    println!("random degree-12 primitive polynomial: a = {}", p.coeffs());

    // Identity transform: each point is S consecutive windows read as binary fractions.
    let generator = SequentialGenerator::new(poly, BitMatrix::identity(4)?, 2)?;
    let (net, points) = generate_net(&generator)?;
    println!(
        "\nnet of dimension {} with {} points in [0,1)^2:",
        net.dim(),
        1 << net.dim()
    );
    for (k, p) in points.enumerate().take(8) {
        let x = to_unit_cube(&p, false);
        println!("  point {k:>2}: ({:.4}, {:.4})", x[0], x[1]);
    }
    Ok(())
}
