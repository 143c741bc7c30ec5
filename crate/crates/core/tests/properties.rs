use betagraph::bounds::{beta_estimate, BetaConfig};
use betagraph::graphs::{lexicographic, weighted_independence, xor_product};
use betagraph::pauli::{parse_pauli, PauliString};
use betagraph::represent::{frustration_graph, random_standard_saur, standard_saur};
use betagraph::sdp::{lovasz_theta, q_upper_ppt, SdpOptions};
use betagraph::seesaw::{q_lower, Operators};
use betagraph::Graph;
use proptest::prelude::*;

mod common;

fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if bits[k] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

/// Largest weight of an independent set, by enumerating every subset.
fn brute_alpha(g: &Graph, w: &[f64]) -> f64 {
    let n = g.n();
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let independent = members
            .iter()
            .enumerate()
            .all(|(a, &i)| members[a + 1..].iter().all(|&j| !g.has_edge(i, j)));
        if independent {
            best = best.max(members.iter().map(|&i| w[i]).sum());
        }
    }
    best
}

fn arb_paulis(n_qubits: usize, max_len: usize) -> impl Strategy<Value = Vec<PauliString>> {
    proptest::collection::vec(proptest::collection::vec(0..4usize, n_qubits), 1..=max_len).prop_map(move |words| {
        let mut out: Vec<PauliString> = Vec::new();
        for w in words {
            let text: String = w.iter().map(|&k| ['I', 'X', 'Y', 'Z'][k]).collect();
            let p = parse_pauli(&text).unwrap();
            if !p.is_identity() && !out.contains(&p) {
                out.push(p);
            }
        }
        if out.is_empty() {
            out.push(PauliString::single(n_qubits, 0, 'Z').unwrap());
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn theta_dominates_alpha(g in arb_graph(9)) {
        let w = vec![1.0; g.n()];
        let theta = lovasz_theta(&g, &w, &SdpOptions::default()).unwrap().value;
        let alpha = brute_alpha(&g, &w);
        prop_assert!(theta >= alpha - 1e-6, "theta {theta} alpha {alpha}");
        prop_assert!(theta <= g.n() as f64 + 1e-6);
    }

    #[test]
    fn exact_independence_matches_enumeration(g in arb_graph(9), seed in any::<u64>()) {
        let w: Vec<f64> = (0..g.n()).map(|i| 0.25 + ((seed >> (i % 60)) & 7) as f64).collect();
        let (value, set) = weighted_independence(&g, &w).unwrap();
        prop_assert!((value - brute_alpha(&g, &w)).abs() < 1e-9);
        prop_assert!((set.iter().map(|&i| w[i]).sum::<f64>() - value).abs() < 1e-9);
    }

    #[test]
    fn random_saurs_reproduce_their_graph(g in arb_graph(8), seed in any::<u64>()) {
        let strings = random_standard_saur(&g, seed).unwrap();
        prop_assert_eq!(frustration_graph(&strings).unwrap(), g);
    }

    #[test]
    fn weighted_sandwich(g in arb_graph(6), raw in proptest::collection::vec(0.1f64..3.0, 6)) {
        let w = raw[..g.n()].to_vec();
        let cfg = BetaConfig { seesaw: common::quick_seesaw(4), ..Default::default() };
        let est = beta_estimate(&g, &w, &cfg).unwrap();
        let alpha = brute_alpha(&g, &w);
        let theta = lovasz_theta(&g, &w, &SdpOptions::default()).unwrap().value;
        prop_assert!(alpha <= est.lower + 1e-9, "alpha {alpha} lower {}", est.lower);
        prop_assert!(est.lower <= est.upper + 1e-9, "lower {} upper {}", est.lower, est.upper);
        prop_assert!(est.upper <= theta + 1e-6, "upper {} theta {theta}", est.upper);
    }

    #[test]
    fn lower_bound_below_theta_of_frustration_graph(strings in arb_paulis(3, 7)) {
        let g = frustration_graph(&strings).unwrap();
        let w = vec![1.0; strings.len()];
        let low = q_lower(&strings, &w, &common::quick_seesaw(3)).unwrap().value;
        let theta = lovasz_theta(&g, &w, &SdpOptions::default()).unwrap().value;
        prop_assert!(low <= theta + 1e-6, "lower {low} theta {theta}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lower_bound_below_ppt_relaxation(strings in arb_paulis(2, 6)) {
        let w = vec![1.0; strings.len()];
        let low = q_lower(&strings, &w, &common::quick_seesaw(3)).unwrap().value;
        let ppt = q_upper_ppt(&Operators::Pauli(strings), &w, &[], &SdpOptions::default()).unwrap().value;
        prop_assert!(low <= ppt + 1e-6, "lower {low} ppt {ppt}");
    }
}

#[test]
fn xor_product_is_super_multiplicative() {
    let cfg = common::quick_seesaw(8);
    let lower = |g: &Graph| q_lower(&standard_saur(g, None).unwrap(), &vec![1.0; g.n()], &cfg).unwrap().value;
    let (c5, k2) = (Graph::cycle(5), Graph::complete(2));
    for (a, b) in [(&c5, &k2), (&k2, &k2)] {
        let product = lower(&xor_product(a, b));
        assert!(product >= lower(a) * lower(b) - 1e-6, "{product}");
    }
}

#[test]
fn vertex_deletions_of_c5_k2_stay_at_two() {
    let g = lexicographic(&Graph::cycle(5), &Graph::complete(2));
    let cfg = common::quick_seesaw(4);
    let n = g.n();
    let mut checked = 0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() != 7 {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sub = g.induced_subgraph(&keep);
        let low = q_lower(&standard_saur(&sub, None).unwrap(), &[1.0; 7], &cfg).unwrap().value;
        assert!(low <= 2.0 + 1e-6, "{keep:?}: {low}");
        checked += 1;
    }
    assert_eq!(checked, 120);
}

#[test]
fn corpus_counts_match_known_enumeration() {
    let corpus = common::corpus();
    let mut counts = [0usize; 8];
    for entry in &corpus {
        assert!(entry.graph.is_connected());
        counts[entry.graph.n()] += 1;
    }
    assert_eq!(counts, [0, 1, 1, 2, 6, 21, 112, 853]);
}
