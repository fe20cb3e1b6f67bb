//! Pricing an arithmetic Asian call with a searched net, Sobol and Halton points.

use wafomlab::netgen::{halton_points, sobol_net};
use wafomlab::qmc::{asian_integrand, integrate_net, qmc_integrate, reference_price};
use wafomlab::search::search;
use wafomlab::{AsianParams, SearchConfig};

fn main() -> wafomlab::Result<()> {
    let params = AsianParams::default();
    let reference = reference_price(&params)?;
    let f = asian_integrand(params)?;
    println!("parameters {:?}", params.to_map());
    println!("reference price (2^20 Sobol points) {reference:.10}\n");
    println!(
        "{:>3} {:>12} {:>12} {:>12}",
        "d", "searched", "sobol", "halton"
    );
    for d in 8..=12 {
        let net = search(
            &SearchConfig::new(d, 30, 4)
                .with_budget(500, 200)
                .with_seed(1),
        )?
        .net();
        let searched = integrate_net(&net, &f, true)? - reference;
        let sobol = integrate_net(&sobol_net(d, 4, 30)?, &f, true)? - reference;
        let halton = qmc_integrate(&halton_points(1 << d, 4), &f)? - reference;
        println!(
            "{d:>3} {:>12.3e} {:>12.3e} {:>12.3e}",
            searched.abs(),
            sobol.abs(),
            halton.abs()
        );
    }
    Ok(())
}
