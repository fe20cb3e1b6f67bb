//! Walsh coefficients of the Asian payoff grouped by weight μ(A).

use std::collections::BTreeMap;
use wafomlab::qmc::{asian_integrand, walsh_spectrum};
use wafomlab::AsianParams;

fn main() -> wafomlab::Result<()> {
    let (n, s) = (5, 3);
    let params = AsianParams {
        steps: s,
        ..AsianParams::default()
    };
    let rows = walsh_spectrum(&asian_integrand(params)?, n, s)?;
    println!("{} coefficients at n={n}, S={s}", rows.len());

    // Largest |f̂(A)| per weight; smooth functions decay roughly like 2^{−μ}.
    let mut by_mu: BTreeMap<u64, f64> = BTreeMap::new();
    for r in &rows {
        let e = by_mu.entry(r.mu).or_insert(0.0);
        *e = e.max(r.abs_coeff);
    }
    println!("{:>4} {:>12} {:>10}", "mu", "max|f^|", "log2");
    for (mu, v) in by_mu.iter().take(16) {
        println!("{mu:>4} {v:>12.4e} {:>10.2}", v.log2());
    }
    Ok(())
}
