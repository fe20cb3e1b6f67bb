//! Two-stage random search for a low-WAFOM generator, then saving it to disk.
//!
//! `cargo run --release --example two_stage_search -- 12 7` searches d=12 with seed 7.

use wafomlab::f2core::write_net;
use wafomlab::netgen::sobol_net;
use wafomlab::search::search;
use wafomlab::wafom::wafom_inversion;
use wafomlab::{fmt_f64, SearchConfig};

fn main() -> wafomlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(12, |a| a.parse().expect("d"));
    let seed: u64 = args.next().map_or(1, |a| a.parse().expect("seed"));

    let config = SearchConfig::new(d, 30, 4)
        .with_budget(1000, 400)
        .with_seed(seed);
    let result = search(&config)?;
    let sobol = wafom_inversion(&sobol_net(d, 4, 30)?)?.value;

    println!("polynomial a = {}", result.poly.coeffs());
    println!(
        "stage 1 best (n = d):  {}",
        fmt_f64(result.stage1_best_wafom)
    );
    println!(
        "stage 2 best (n = 30): {}  (trial {})",
        fmt_f64(result.best_wafom),
        result.best_trial
    );
    println!("Sobol at d = {d}:      {}", fmt_f64(sobol));

    let path = std::env::temp_dir().join(format!("wafomlab-d{d}.gen"));
    std::fs::write(&path, result.generator().to_file_string())?;
    println!("generator written to {}", path.display());
    println!("\nfirst lines of the net file:");
    for line in write_net(&result.net()).lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
