use attnet_core::network::{shortest_paths, CorrelationNetwork};
use attnet_core::rng::seeded;
use proptest::prelude::*;
use rand::Rng;

fn random_network(k: usize, seed: u64, absent_share: f64) -> CorrelationNetwork {
    let mut rng = seeded(seed);
    let mut m = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let w = if rng.random_bool(absent_share) {
                0.0
            } else {
                rng.random_range(0.02..1.0)
            };
            m[i][j] = w;
            m[j][i] = w;
        }
    }
    CorrelationNetwork::unlabelled(m).unwrap()
}

/// Cheapest simple path from `s` to every node, by depth-first enumeration,
/// accumulating costs from the source outwards.
fn enumerate_paths(net: &CorrelationNetwork, s: usize) -> Vec<f64> {
    fn walk(net: &CorrelationNetwork, u: usize, cost: f64, seen: &mut Vec<bool>, best: &mut Vec<f64>) {
        if cost < best[u] {
            best[u] = cost;
        }
        for v in 0..net.node_count() {
            let w = net.weight(u, v);
            if !seen[v] && w != 0.0 {
                seen[v] = true;
                walk(net, v, cost + 1.0 / w.abs(), seen, best);
                seen[v] = false;
            }
        }
    }
    let k = net.node_count();
    let mut best = vec![f64::INFINITY; k];
    let mut seen = vec![false; k];
    seen[s] = true;
    walk(net, s, 0.0, &mut seen, &mut best);
    best
}

#[test]
fn dijkstra_matches_path_enumeration_on_random_networks() {
    for seed in 0..200u64 {
        let net = random_network(8, seed, if seed % 2 == 0 { 0.0 } else { 0.4 });
        let dm = shortest_paths(&net);
        let brute: Vec<Vec<f64>> = (0..8).map(|s| enumerate_paths(&net, s)).collect();
        for i in 0..8 {
            assert_eq!(dm.get(i, i), 0.0);
            for j in 0..8 {
                let expected = if i == j { 0.0 } else { brute[i][j].min(brute[j][i]) };
                assert_eq!(dm.get(i, j), expected, "seed {seed} pair ({i},{j})");
            }
        }
        if dm.connected {
            let mut total = 0.0;
            for i in 0..8 {
                for j in i + 1..8 {
                    total += brute[i][j].min(brute[j][i]);
                }
            }
            assert_eq!(dm.aspl().unwrap(), total / 28.0);
            let closeness = dm.closeness().unwrap();
            for (i, c) in closeness.iter().enumerate() {
                let sum: f64 = (0..8)
                    .map(|j| if i == j { 0.0 } else { brute[i][j].min(brute[j][i]) })
                    .sum();
                assert_eq!(*c, 1.0 / sum);
                assert!(*c > 0.0);
            }
        }
    }
}

#[test]
fn raising_an_edge_never_lengthens_paths() {
    let mut rng = seeded(77);
    for case in 0..1000u64 {
        let k = rng.random_range(3..=9);
        let net = random_network(k, 10_000 + case, 0.3);
        let i = rng.random_range(0..k);
        let j = (i + rng.random_range(1..k)) % k;
        let w = net.weight(i, j);
        let raised = net.with_weight(i, j, rng.random_range(w..=1.0)).unwrap();
        let (a, b) = (shortest_paths(&net), shortest_paths(&raised));
        for s in 0..k {
            for t in 0..k {
                assert!(b.get(s, t) <= a.get(s, t), "case {case}: d({s},{t}) grew");
            }
        }
        if let (Ok(ca), Ok(cb)) = (a.closeness(), b.closeness()) {
            assert!(ca.iter().zip(&cb).all(|(x, y)| y >= x), "case {case}: closeness fell");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn triangle_inequality(seed in 0u64..1_000_000, k in 3usize..10) {
        let dm = shortest_paths(&random_network(k, seed, 0.2));
        for i in 0..k {
            for j in 0..k {
                prop_assert_eq!(dm.get(i, j), dm.get(j, i));
                for h in 0..k {
                    let via = dm.get(i, h) + dm.get(h, j);
                    prop_assert!(dm.get(i, j) <= via * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn scaling_all_weights_divides_aspl(seed in 0u64..1_000_000, lambda in 1.01f64..5.0) {
        let base = random_network(7, seed, 0.0);
        let scaled_matrix: Vec<Vec<f64>> = base.matrix().iter().map(|r| r.iter().map(|w| w / 5.0 * lambda).collect()).collect();
        let small_matrix: Vec<Vec<f64>> = base.matrix().iter().map(|r| r.iter().map(|w| w / 5.0).collect()).collect();
        let small = shortest_paths(&CorrelationNetwork::unlabelled(small_matrix).unwrap()).aspl().unwrap();
        let scaled = shortest_paths(&CorrelationNetwork::unlabelled(scaled_matrix).unwrap()).aspl().unwrap();
        prop_assert!(scaled < small);
        prop_assert!((scaled * lambda - small).abs() <= 1e-9 * small);
    }
}
