//! Independent three-node solutions shared by the oracle and acceptance
//! suites.

#![allow(dead_code)]

use likesim::graph::Graph;
use likesim::likecentrality::{solve_lc, RateMatrix, SolverSettings};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rates on a triangle, `r[i][j]` = rate at which `j` likes `i`.
pub type TriangleRates = [[f64; 3]; 3];

/// Solves the triangle system by eliminating `L1` and `L2` for a given `L0`.
///
/// Node 0's equation fixes `L1 = rho L2` with `rho = (r02 - L0) / (L0 - r01)`;
/// node 1's equation is then a quadratic in `L2` with exactly one positive
/// root. What remains is a univariate function of `L0` (node 2's equation),
/// whose sign changes on `(min(r01, r02), max(r01, r02))` are bracketed on a
/// grid and bisected to machine precision.
pub fn triangle_oracle(r: &TriangleRates) -> Vec<[f64; 3]> {
    let (r01, r02) = (r[0][1], r[0][2]);
    let (r10, r12) = (r[1][0], r[1][2]);
    let (r20, r21) = (r[2][0], r[2][1]);
    let eval = |x: f64| {
        let rho = (r02 - x) / (x - r01);
        let (a, b, c) = (rho, rho * x - r12, -r10 * x);
        // Positive root of a t^2 + b t + c, written to avoid cancellation.
        let disc = (b * b - 4.0 * a * c).sqrt();
        let l2 = if b >= 0.0 { -2.0 * c / (b + disc) } else { (disc - b) / (2.0 * a) };
        let l1 = rho * l2;
        (l2 * (x + l1) - r20 * x - r21 * l1, l1, l2)
    };
    let (lo, hi) = (r01.min(r02), r01.max(r02));
    let grid = 4000;
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..grid {
        let x = lo + (hi - lo) * (k as f64 + 0.5) / grid as f64;
        let v = eval(x).0;
        if let Some((px, pv)) = prev {
            if (pv > 0.0) != (v > 0.0) {
                let (mut a, mut b) = (px, x);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    if (eval(a).0 > 0.0) != (eval(mid).0 > 0.0) {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                let x = 0.5 * (a + b);
                let (_, l1, l2) = eval(x);
                roots.push([x, l1, l2]);
            }
        }
        prev = Some((x, v));
    }
    roots
}

/// Path 0 - 1 - 2: both ends have one friend, so they take that friend's
/// rate and the middle is their weighted average.
pub fn path_oracle(r: &TriangleRates) -> [f64; 3] {
    let (l0, l2) = (r[0][1], r[2][1]);
    [l0, (r[1][0] * l0 + r[1][2] * l2) / (l0 + l2), l2]
}

pub fn triangle() -> Graph {
    Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
}

pub fn path3() -> Graph {
    Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
}

pub fn rate_matrix(g: &Graph, r: &TriangleRates) -> RateMatrix {
    let triples: Vec<_> = (0..3)
        .flat_map(|i| g.neighbors(i).iter().map(move |&j| (i, j, r[i][j])))
        .collect();
    RateMatrix::from_triples(g, &triples).unwrap()
}

pub fn random_rates(rng: &mut ChaCha8Rng) -> TriangleRates {
    let mut r = [[0.0; 3]; 3];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i != j {
                *v = rng.random();
            }
        }
    }
    r
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Largest sup-norm gap between the solver and the oracles over `count`
/// seeded instances, alternating triangle and path.
pub fn worst_oracle_gap(count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let settings = SolverSettings::default();
    let mut worst: f64 = 0.0;
    for k in 0..count {
        let r = random_rates(&mut rng);
        let (g, expect) = if k % 2 == 0 {
            let roots = triangle_oracle(&r);
            assert_eq!(roots.len(), 1, "instance {k}: {r:?}");
            (triangle(), roots[0])
        } else {
            (path3(), path_oracle(&r))
        };
        let lc = solve_lc(&g, &rate_matrix(&g, &r), &settings).unwrap();
        if !lc.converged {
            return f64::INFINITY;
        }
        worst = worst.max(sup_diff(&lc.values, &expect));
    }
    worst
}
