//! Integration-side checks: reference prices, payoff shape and the discretization gap.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wafomlab::f2core::{dual_space, fourier_transform, parse_net, write_net, LinearNet, NetPoint};
use wafomlab::netgen::sobol_net;
use wafomlab::qmc::{
    asian_integrand, discretization_gap, error_curve, error_curve_csv, integrate_net,
    inverse_normal_cdf, net_to_points, reference_price, reference_price_with, AffineIntegrand,
};
use wafomlab::{AsianParams, Integrand};

/// f(x) = table[B] where B holds the first n binary digits of x.
fn table_integrand(table: Vec<f64>, n: usize, s: usize) -> Integrand {
    let scale = (n as f64).exp2();
    Integrand::new(
        "table",
        s,
        BTreeMap::new(),
        Some(table.iter().sum::<f64>() / table.len() as f64),
        Arc::new(move |x: &[f64]| {
            let idx = x
                .iter()
                .fold(0u64, |acc, &xi| (acc << n) | (xi * scale) as u64);
            table[idx as usize]
        }),
    )
}

#[test]
fn qmc_error_is_the_dual_fourier_tail() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let (n, s) = [(3, 3), (4, 2), (2, 5), (6, 2), (10, 1)][rng.gen_range(0..5)];
        let d = rng.gen_range(0..=n * s);
        let net = loop {
            let vecs: Vec<NetPoint> = (0..d)
                .map(|_| {
                    NetPoint::from_rows(n, (0..s).map(|_| rng.gen_range(0..1u64 << n)).collect())
                        .unwrap()
                })
                .collect();
            if let Ok(net) = LinearNet::new(n, s, vecs) {
                break net;
            }
        };
        let table: Vec<f64> = (0..1usize << (n * s))
            .map(|_| rng.gen_range(-2.0..2.0))
            .collect();
        let f_hat = fourier_transform(&table, n, s).unwrap();
        let tail: f64 = dual_space(&net)
            .points()
            .unwrap()
            .filter(|a| !a.is_zero())
            .map(|a| f_hat[a.to_index() as usize])
            .sum();
        let f = table_integrand(table, n, s);
        let error = integrate_net(&net, &f, true).unwrap() - f.exact_integral().unwrap();
        assert!((error - tail).abs() <= 1e-10, "{error} vs {tail}");
    }
}

#[test]
fn midpoint_coordinates_stay_below_one() {
    for n in [1usize, 5, 30, 52] {
        let net = LinearNet::new(
            n,
            1,
            vec![NetPoint::from_rows(n, vec![(1u64 << n) - 1]).unwrap()],
        )
        .unwrap();
        let pts = net_to_points(&net, true).unwrap();
        let max = pts.iter().map(|p| p[0]).fold(0.0, f64::max);
        assert!(max < 1.0);
        assert_eq!(max, 1.0 - (-(n as f64) - 1.0).exp2());
    }
}

#[test]
fn corner_evaluation_gap_by_hand() {
    let f = AffineIntegrand {
        intercept: 0.0,
        gradient: vec![1.0],
    };
    let points: Vec<NetPoint> = (0..16)
        .map(|k| NetPoint::from_rows(4, vec![k]).unwrap())
        .collect();
    assert_eq!(
        discretization_gap(&f, &points, false).unwrap(),
        (-5.0f64).exp2()
    );
    assert!(discretization_gap(&f, &points, true).unwrap() <= 1e-15);
    assert!((-5.0f64).exp2() <= f.discretization_bound(4));
}

#[test]
fn payoff_nonnegative_and_price_nonincreasing_in_strike() {
    let net = sobol_net(12, 4, 30).unwrap();
    let mut last = f64::INFINITY;
    for k in (60..=140).step_by(5) {
        let params = AsianParams {
            strike: k as f64,
            ..AsianParams::default()
        };
        let f = asian_integrand(params).unwrap();
        let price = integrate_net(&net, &f, true).unwrap();
        assert!(price <= last, "K={k}: {price} > {last}");
        last = price;
    }
    let f = asian_integrand(AsianParams::default()).unwrap();
    for p in net_to_points(&sobol_net(10, 4, 30).unwrap(), true).unwrap() {
        assert!(f.eval(&p) >= 0.0);
    }
}

#[test]
fn inverse_normal_is_strictly_increasing() {
    let grid: Vec<f64> = (1..=10_000).map(|i| i as f64 / 10_001.0).collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&u| inverse_normal_cdf(u).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert!((inverse_normal_cdf(0.975).unwrap() - 1.959964).abs() < 1e-5);
    assert!(inverse_normal_cdf(0.0).is_err() && inverse_normal_cdf(1.0).is_err());
}

#[test]
fn zero_volatility_reference_matches_closed_form() {
    for (rate, strike) in [(0.0, 0.0), (0.05, 90.0), (0.03, 100.0), (0.1, 120.0)] {
        let params = AsianParams {
            sigma: 0.0,
            rate,
            strike,
            ..AsianParams::default()
        };
        let reference = reference_price_with(&params, 12, &[1, 2, 3, 4]).unwrap();
        assert!((reference - params.zero_volatility_price()).abs() <= 1e-10);
    }
}

#[test]
fn reference_price_is_self_consistent() {
    let params = AsianParams::default();
    let base = reference_price(&params).unwrap();
    let doubled = reference_price_with(&params, 21, &[1, 2, 3, 4]).unwrap();
    assert!((doubled - base).abs() / base < 1e-4, "{base} vs {doubled}");
    let reordered = reference_price_with(&params, 20, &[5, 3, 7, 2]).unwrap();
    assert!(
        (reordered - base).abs() / base < 1e-3,
        "{base} vs {reordered}"
    );
}

#[test]
fn error_curve_constant_and_serialization() {
    let nets: Vec<LinearNet> = (6..=9)
        .rev()
        .map(|d| sobol_net(d, 4, 30).unwrap())
        .collect();
    let rows = error_curve(&nets, &Integrand::constant(3.0, 4), 3.0).unwrap();
    assert!(rows.iter().all(|r| r.abs_error == 0.0));
    assert_eq!(
        rows.iter().map(|r| r.d).collect::<Vec<_>>(),
        vec![6, 7, 8, 9]
    );

    let f = asian_integrand(AsianParams::default()).unwrap();
    let first = error_curve_csv(&error_curve(&nets, &f, 6.9).unwrap());
    let reloaded: Vec<LinearNet> = nets
        .iter()
        .map(|n| parse_net(&write_net(n)).unwrap())
        .collect();
    assert_eq!(
        first,
        error_curve_csv(&error_curve(&reloaded, &f, 6.9).unwrap())
    );
}
