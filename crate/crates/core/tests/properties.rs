//! Property tests over random small subspaces and tables.

use proptest::prelude::*;
use wafomlab::f2core::{
    character_sum, dual_space, fourier_expand, fourier_transform, LinearNet, NetPoint,
};
use wafomlab::netgen::{generate_net, random_primitive_poly};
use wafomlab::search::{random_full_rank_matrix, trial_rng};
use wafomlab::wafom::{wafom_dual, wafom_inversion, wafom_inversion_serial, wafom_sequential};
use wafomlab::SequentialGenerator;

/// (n, S, raw rows for up to nS candidate vectors).
fn shape_and_vectors(max_bits: usize) -> impl Strategy<Value = (usize, usize, Vec<Vec<u64>>)> {
    (1..=max_bits)
        .prop_flat_map(move |s| (1..=max_bits / s, Just(s)))
        .prop_flat_map(|(n, s)| {
            let row = 0u64..(1u64 << n);
            let vec = proptest::collection::vec(row, s);
            (Just(n), Just(s), proptest::collection::vec(vec, 0..=n * s))
        })
}

fn span_of(n: usize, s: usize, raw: &[Vec<u64>]) -> LinearNet {
    let pts: Vec<NetPoint> = raw
        .iter()
        .map(|r| NetPoint::from_rows(n, r.clone()).unwrap())
        .collect();
    LinearNet::span(n, s, &pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dimensions_add_up((n, s, raw) in shape_and_vectors(10)) {
        let net = span_of(n, s, &raw);
        let dual = dual_space(&net);
        prop_assert_eq!(net.dim() + dual.dim(), n * s);
        prop_assert!(dual_space(&dual).same_subspace(&net).unwrap());
    }

    #[test]
    fn character_sums((n, s, raw) in shape_and_vectors(10), a_idx in any::<u64>()) {
        let net = span_of(n, s, &raw);
        let a = NetPoint::from_index(a_idx % (1u64 << (n * s)), n, s).unwrap();
        let sum = character_sum(&net, &a).unwrap();
        let expected = if dual_space(&net).contains(&a).unwrap() { 1i64 << net.dim() } else { 0 };
        prop_assert_eq!(sum, expected);
    }

    #[test]
    fn dual_matches_inversion((n, s, raw) in shape_and_vectors(10)) {
        let net = span_of(n, s, &raw);
        let a = wafom_dual(&net).unwrap().value;
        let b = wafom_inversion(&net).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
        prop_assert_eq!(b.to_bits(), wafom_inversion_serial(&net).unwrap().value.to_bits());
    }

    #[test]
    fn basis_choice_is_irrelevant((n, s, raw) in shape_and_vectors(8), seed in any::<u64>()) {
        let net = span_of(n, s, &raw);
        // Replace each basis vector by itself plus a random combination of the later ones.
        let mut rng = trial_rng(seed, 0, 0);
        let mut basis: Vec<NetPoint> = net.basis().to_vec();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                if rand::Rng::gen::<bool>(&mut rng) {
                    let other = basis[j].clone();
                    basis[i].xor_assign(&other);
                }
            }
        }
        basis.reverse();
        let other = LinearNet::new(n, s, basis).unwrap();
        prop_assert!(other.same_subspace(&net).unwrap());
        let (a, b) = (wafom_inversion(&net).unwrap().value, wafom_inversion(&other).unwrap().value);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn fourier_round_trip(n in 1usize..=4, s in 1usize..=3, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 1, 0);
        let f: Vec<f64> = (0..1usize << (n * s)).map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0)).collect();
        let back = fourier_expand(&fourier_transform(&f, n, s).unwrap(), n, s).unwrap();
        for (x, y) in f.iter().zip(&back) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generated_net_is_the_enumerated_span(d in 1usize..=12, extra in 0usize..=8, s in 1usize..=4, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 2, 0);
        let poly = random_primitive_poly(d, &mut rng).unwrap();
        let u = random_full_rank_matrix(d, d + extra, &mut rng).unwrap();
        let generator = SequentialGenerator::new(poly, u, s).unwrap();
        let (net, points) = generate_net(&generator).unwrap();
        let mut from_gen: Vec<Vec<u64>> = points.map(|p| p.rows().to_vec()).collect();
        let mut from_net: Vec<Vec<u64>> = net.points().unwrap().map(|p| p.rows().to_vec()).collect();
        from_gen.sort_unstable();
        from_net.sort_unstable();
        prop_assert_eq!(from_gen, from_net);
        let seq = wafom_sequential(&generator).value;
        let inv = wafom_inversion(&net).unwrap().value;
        // The inversion sum cancels terms of order one, so tiny values carry ~1e-15 absolute error.
        prop_assert!((seq - inv).abs() <= 1e-9 * inv + 1e-13, "{} vs {}", seq, inv);
    }
}
