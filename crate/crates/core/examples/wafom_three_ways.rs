//! WAFOM of one net via the dual sum, the inversion formula and the sequential route.
//!
//! Run with `cargo run --release --example wafom_three_ways`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wafomlab::netgen::random_primitive_poly;
use wafomlab::search::random_full_rank_matrix;
use wafomlab::wafom::{wafom_dual, wafom_inversion, wafom_sequential};
use wafomlab::{fmt_f64, LinearNet, NetPoint, SequentialGenerator, WafomReport};

fn main() -> wafomlab::Result<()> {
    // A two-point net in one dimension: {0, 0.11₂}.
    let tiny = LinearNet::new(2, 1, vec![NetPoint::from_bit_strings(&["11"])?])?;
    println!(
        "span{{(1,1)}}: dual {}  inversion {}",
        wafom_dual(&tiny)?.value,
        wafom_inversion(&tiny)?.value
    );

    // A random sequential generator with 2^10 points in 4 dimensions at 30 digits.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let poly = random_primitive_poly(10, &mut rng)?;
    let u = random_full_rank_matrix(10, 30, &mut rng)?;
    let generator = SequentialGenerator::new(poly, u, 4)?;
    let net = generator.to_linear_net()?;

    println!("\n{}", WafomReport::CSV_HEADER);
    let inversion = wafom_inversion(&net)?;
    let sequential = wafom_sequential(&generator);
    println!("{}", inversion.csv_row());
    println!("{}", sequential.csv_row());
    // The dual has dimension 4·30 − 10 = 110, far beyond enumeration.
    match wafom_dual(&net) {
        Ok(r) => println!("{}", r.csv_row()),
        Err(e) => println!("# dual skipped: {e}"),
    }
    let rel = (inversion.value - sequential.value).abs() / inversion.value;
    println!("relative deviation {}", fmt_f64(rel));
    Ok(())
}
