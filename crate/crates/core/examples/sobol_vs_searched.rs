//! WAFOM of searched generators against Sobol nets over a range of d, with a fitted slope.

use wafomlab::cli::ols_slope;
use wafomlab::netgen::sobol_net;
use wafomlab::search::search;
use wafomlab::wafom::wafom_inversion;
use wafomlab::SearchConfig;

fn main() -> wafomlab::Result<()> {
    let (mut ds, mut best, mut sob) = (Vec::new(), Vec::new(), Vec::new());
    println!("{:>3} {:>14} {:>14}", "d", "log2 searched", "log2 sobol");
    for d in 8..=16 {
        let r = search(
            &SearchConfig::new(d, 30, 4)
                .with_budget(500, 200)
                .with_seed(5),
        )?;
        let s = wafom_inversion(&sobol_net(d, 4, 30)?)?.value;
        println!("{d:>3} {:>14.3} {:>14.3}", r.best_wafom.log2(), s.log2());
        ds.push(d as f64);
        best.push(r.best_wafom.log2());
        sob.push(s.log2());
    }
    println!(
        "slope: searched {:.3}, sobol {:.3}",
        ols_slope(&ds, &best),
        ols_slope(&ds, &sob)
    );
    Ok(())
}
