//! Graph measures checked against brute-force definitions on every small
//! connected graph, plus structural invariants of the preferential-attachment
//! generator.

use likesim::graph::{
    betweenness, closeness, diameter, eigenvector_centrality, generate_ba, local_clustering,
    mean_clustering, Graph,
};
use proptest::prelude::*;

const UNREACHABLE: usize = usize::MAX / 4;

/// All connected graphs on `n` labelled nodes, by edge-subset bitmask.
fn connected_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
    (0u32..(1 << pairs.len())).filter_map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).ok()?;
        g.is_connected().then_some(g)
    })
}

fn floyd_warshall(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
        for &w in g.neighbors(v) {
            row[w] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Every simple path from `s` to `t`, as node sequences.
fn simple_paths(g: &Graph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(g: &Graph, t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for &w in g.neighbors(v) {
            if !path.contains(&w) {
                path.push(w);
                walk(g, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(g, t, &mut vec![s], &mut out);
    out
}

/// Sum over unordered pairs of the share of shortest paths through each node.
fn brute_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut cb = vec![0.0; n];
    for s in 0..n {
        for t in (s + 1)..n {
            let paths = simple_paths(g, s, t);
            let shortest = paths.iter().map(Vec::len).min().unwrap();
            let geodesics: Vec<_> = paths.iter().filter(|p| p.len() == shortest).collect();
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = geodesics.iter().filter(|p| p.contains(&v)).count();
                cb[v] += through as f64 / geodesics.len() as f64;
            }
        }
    }
    cb
}

/// Triangles through `v` over connected triples centred on `v`.
fn brute_clustering(g: &Graph, v: usize) -> f64 {
    let n = g.n();
    let (mut triples, mut closed) = (0, 0);
    for a in 0..n {
        for b in (a + 1)..n {
            if a != v && b != v && g.has_edge(v, a) && g.has_edge(v, b) {
                triples += 1;
                if g.has_edge(a, b) {
                    closed += 1;
                }
            }
        }
    }
    if triples == 0 {
        0.0
    } else {
        closed as f64 / triples as f64
    }
}

fn check_graph(g: &Graph) {
    let n = g.n();
    let d = floyd_warshall(g);
    let diam = d.iter().flatten().copied().max().unwrap();
    assert_eq!(diameter(g).unwrap(), diam);

    let bc = betweenness(g).unwrap();
    for (a, b) in bc.iter().zip(brute_betweenness(g)) {
        assert!((a - b).abs() < 1e-12, "{bc:?}");
    }
    for v in 0..n {
        let total: usize = d[v].iter().sum();
        let expect = (n - 1) as f64 / total as f64;
        assert!((closeness(g, v).unwrap() - expect).abs() < 1e-15);
        assert_eq!(local_clustering(g, v), brute_clustering(g, v));
    }

    // Perron vector: positive, unit norm, and an eigenvector of the adjacency.
    let x = eigenvector_centrality(g, 1e-13, 1_000_000).unwrap();
    assert!(x.iter().all(|&v| v > 0.0));
    assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
    let ax: Vec<f64> = (0..n).map(|v| g.neighbors(v).iter().map(|&w| x[w]).sum()).collect();
    let lambda: f64 = ax.iter().zip(&x).map(|(a, b)| a * b).sum();
    let resid = ax.iter().zip(&x).map(|(a, b)| (a - lambda * b).abs()).fold(0.0, f64::max);
    assert!(resid < 1e-9, "eigen residual {resid:e}");
}

#[test]
fn exhaustive_up_to_five_nodes() {
    let mut graphs = 0;
    for n in 2..=5 {
        for g in connected_graphs(n) {
            check_graph(&g);
            graphs += 1;
        }
    }
    // Labelled connected graphs: 1 + 4 + 38 + 728.
    assert_eq!(graphs, 771);
}

#[test]
fn exhaustive_six_nodes() {
    let count = connected_graphs(6).inspect(check_graph).count();
    assert_eq!(count, 26704);
}

#[test]
fn triangle_with_pendant_clustering() {
    // Node 0 closes one of its three triples; nodes 1 and 2 sit in a
    // triangle; node 3 has a single friend.
    let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
    assert!((mean_clustering(&g) - 7.0 / 12.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ba_invariants(seed in any::<u64>(), m in 1usize..5, extra in 1usize..40) {
        let n = m + extra;
        let g = generate_ba(n, m, seed).unwrap();
        prop_assert_eq!(g.n(), n);
        prop_assert_eq!(g.edge_count(), m * (m + 1) / 2 + m * (n - m - 1));
        prop_assert!(g.is_connected());
        prop_assert!(g.min_degree() >= m);
        for v in 0..n {
            prop_assert!(!g.has_edge(v, v));
            let nb = g.neighbors(v);
            let mut sorted = nb.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), nb.len());
        }
        // Node v > m attaches to exactly m earlier nodes.
        for v in (m + 1)..n {
            prop_assert_eq!(g.neighbors(v).iter().filter(|&&w| w < v).count(), m);
        }
        prop_assert_eq!(generate_ba(n, m, seed).unwrap(), g);
    }
}
