//! Property tests: the linear engine against the quadratic oracle, the
//! classification census against the totient counts, and the exactness
//! laws of the rational series arithmetic.

use dlog_graphs::graph::{analyze, naive_analyze};
use dlog_graphs::numtheory::{build_map, classify_m, mod_pow, PrimeContext};
use dlog_graphs::series::PowerSeries;
use num::{BigInt, BigRational, One, Zero};
use proptest::prelude::*;

fn arb_table() -> impl Strategy<Value = Vec<u32>> {
    (1..150usize).prop_flat_map(|n| proptest::collection::vec(1..=n as u32, n))
}

const SMALL_PRIMES: [u64; 12] = [3, 5, 7, 11, 13, 101, 211, 499, 743, 997, 2027, 3371];

fn arb_series(order: usize) -> impl Strategy<Value = PowerSeries> {
    proptest::collection::vec((-40i64..=40, 1i64..=12), order + 1).prop_map(|pairs| {
        PowerSeries::from_coeffs(
            pairs
                .into_iter()
                .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    })
}

#[test]
fn every_graph_is_m_ary_exhaustively_at_small_p() {
    // direct verification of the in-degree classification for every g
    for p in [7u64, 211, 499, 997] {
        let ctx = PrimeContext::new(p).unwrap();
        for g in 1..p {
            let m = classify_m(g, &ctx).unwrap();
            let map = build_map(g, &ctx).unwrap();
            let mut indeg = vec![0u64; map.n()];
            for &v in map.table() {
                indeg[(v - 1) as usize] += 1;
            }
            assert!(indeg.iter().all(|&d| d == 0 || d == m), "p={p} g={g} m={m}");
        }
    }
}

proptest! {
    #[test]
    fn engines_agree_on_arbitrary_tables(table in arb_table()) {
        let fast = analyze(&table).unwrap();
        let slow = naive_analyze(&table).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn stats_invariants_hold(table in arb_table()) {
        let s = analyze(&table).unwrap();
        prop_assert_eq!(s.cyclic_nodes + s.tail_nodes, s.n);
        prop_assert_eq!(s.image_nodes + s.terminal_nodes, s.n);
        prop_assert!(s.components >= 1 && s.components <= s.cyclic_nodes);
        prop_assert!(s.fixed_points <= s.cyclic_nodes);
        prop_assert!(s.max_cycle <= s.cyclic_nodes);
        prop_assert!(s.sum_cycle_over_nodes <= s.n * s.max_cycle);
        prop_assert!(s.sum_tail_over_nodes <= s.n * s.max_tail);
        // unit-cycle graphs are exactly those whose cycles are all fixed points
        prop_assert_eq!(s.max_cycle == 1, s.components == s.fixed_points);
    }

    #[test]
    fn census_matches_totient_counts(p in proptest::sample::select(&SMALL_PRIMES[..])) {
        let ctx = PrimeContext::new(p).unwrap();
        let mut census = std::collections::BTreeMap::new();
        for g in 1..p {
            *census.entry(classify_m(g, &ctx).unwrap()).or_insert(0u64) += 1;
        }
        for (m, count) in ctx.class_counts() {
            prop_assert_eq!(census.get(&m).copied().unwrap_or(0), count);
        }
    }

    #[test]
    fn graphs_are_m_ary(
        p in proptest::sample::select(&SMALL_PRIMES[..8]),
        seed in 1u64..10_000,
    ) {
        // every in-degree of the graph of g is 0 or m
        let ctx = PrimeContext::new(p).unwrap();
        let g = seed % (p - 1) + 1;
        let m = classify_m(g, &ctx).unwrap();
        let map = build_map(g, &ctx).unwrap();
        let mut indeg = vec![0u64; map.n()];
        for &v in map.table() {
            indeg[(v - 1) as usize] += 1;
        }
        prop_assert!(indeg.iter().all(|&d| d == 0 || d == m));
        // image node count comes straight from m
        let stats = analyze(map.table()).unwrap();
        prop_assert_eq!(stats.image_nodes, (p - 1) / m);
    }

    #[test]
    fn mod_pow_matches_iterated_product(
        p in proptest::sample::select(&SMALL_PRIMES[..]),
        base in 0u64..5000,
        exp in 0u64..3000,
    ) {
        let base = base % p;
        let mut want = 1u64;
        for _ in 0..exp {
            want = want * base % p;
        }
        prop_assert_eq!(mod_pow(base, exp, p).unwrap(), want);
    }

    #[test]
    fn build_map_recurrence(
        p in proptest::sample::select(&SMALL_PRIMES[..]),
        seed in 1u64..10_000,
    ) {
        let ctx = PrimeContext::new(p).unwrap();
        let g = seed % (p - 1) + 1;
        let map = build_map(g, &ctx).unwrap();
        prop_assert_eq!(map.apply(1), g);
        for x in 1..p - 1 {
            prop_assert_eq!(map.apply(x + 1), map.apply(x) * g % p);
        }
    }

    #[test]
    fn series_ring_laws(a in arb_series(8), b in arb_series(8), c in arb_series(8)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&b).add(&b), a);
    }

    #[test]
    fn series_inverse_laws(a in arb_series(8)) {
        // force an invertible constant term and a 1 there for ln/sqrt
        let mut coeffs = a.coeffs().to_vec();
        coeffs[0] = BigRational::one();
        let f = PowerSeries::from_coeffs(coeffs);
        let order = f.order();
        prop_assert_eq!(f.mul(&f.reciprocal()), PowerSeries::one(order));
        prop_assert_eq!(f.ln().exp(), f.clone());
        prop_assert_eq!(f.sqrt().pow(2), f.clone());
        // exp turns sums into products
        let mut zc = f.coeffs().to_vec();
        zc[0] = BigRational::zero();
        let g = PowerSeries::from_coeffs(zc);
        prop_assert_eq!(g.add(&g).exp(), g.exp().mul(&g.exp()));
    }
}
