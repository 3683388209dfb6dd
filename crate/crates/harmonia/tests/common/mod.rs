//! Shared helpers for the integration suites: seeded random graph
//! generation and an independent fixed-point reference solver.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use harmonia::dirichlet::BoundaryData;
use harmonia::graph::{Subdomain, WeightedGraph};

/// Seeded random connected weighted graph with a random proper subdomain.
/// Vertex count lies in `4..=max_n`; weights in (0.1, 5].
pub fn random_graph(seed: u64, max_n: usize) -> (WeightedGraph<f64>, Subdomain) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(4..=max_n.max(4));
    let ids: Vec<String> = (0..n).map(|i| format!("v{i:03}")).collect();
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    // random spanning tree keeps the graph connected
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.push((ids[j].clone(), ids[i].clone(), 0.1 + 4.9 * rng.random::<f64>()));
    }
    // extra chords
    let extra = n / 2;
    for _ in 0..extra {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        let (a, b) = (i.min(j), i.max(j));
        if edges
            .iter()
            .any(|(x, y, _)| (x == &ids[a] && y == &ids[b]) || (x == &ids[b] && y == &ids[a]))
        {
            continue;
        }
        edges.push((ids[a].clone(), ids[b].clone(), 0.1 + 4.9 * rng.random::<f64>()));
    }
    let g = WeightedGraph::new(ids.clone(), &edges).expect("random graph is valid");

    // random proper nonempty interior; in a connected graph every interior
    // component then automatically has nonempty relative boundary
    let mut interior: Vec<&str> = ids
        .iter()
        .filter(|_| rng.random::<f64>() < 0.6)
        .map(|s| s.as_str())
        .collect();
    if interior.is_empty() {
        interior.push(ids[0].as_str());
    }
    if interior.len() == n {
        interior.pop();
    }
    let d = Subdomain::new(&g, &interior).expect("random subdomain is valid");
    (g, d)
}

/// Random nonnegative boundary data in [0, 1).
pub fn random_data(rng: &mut ChaCha8Rng, d: &Subdomain, g: &WeightedGraph<f64>) -> BoundaryData<f64> {
    BoundaryData::new(
        d.boundary()
            .iter()
            .map(|&b| (g.id(b).to_string(), rng.random::<f64>()))
            .collect(),
    )
}

/// Rectangular grid graph with unit conductances and 4-neighbor edges.
/// Vertices are labeled `c{i:02}_{j:02}` for `0 <= i < w`, `0 <= j < h`.
#[allow(dead_code)]
pub fn grid_graph(w: usize, h: usize) -> WeightedGraph<f64> {
    let id = |i: usize, j: usize| format!("c{i:02}_{j:02}");
    let mut edges = Vec::new();
    for i in 0..w {
        for j in 0..h {
            if i + 1 < w {
                edges.push((id(i, j), id(i + 1, j), 1.0));
            }
            if j + 1 < h {
                edges.push((id(i, j), id(i, j + 1), 1.0));
            }
        }
    }
    let ids: Vec<String> = (0..w)
        .flat_map(|i| (0..h).map(move |j| id(i, j)))
        .collect();
    WeightedGraph::new(ids, &edges).expect("grid graph is valid")
}

#[allow(dead_code)]
/// Independent reference solver: in-place Gauss-Seidel sweeps of the mean-value
/// identity `u(x) = sum_y mu(x,y) u(y) / deg(x)` until the sup-norm
/// increment drops below `inc_tol`.
pub fn mean_value_fixed_point(
    g: &WeightedGraph<f64>,
    d: &Subdomain,
    f: &BoundaryData<f64>,
    inc_tol: f64,
) -> HashMap<String, f64> {
    let mut u: HashMap<String, f64> = HashMap::new();
    for &b in d.boundary() {
        u.insert(g.id(b).to_string(), f.values[g.id(b)]);
    }
    for &x in d.interior() {
        u.insert(g.id(x).to_string(), 0.0);
    }
    for sweep in 0..5_000_000usize {
        let mut delta = 0.0f64;
        for &x in d.interior() {
            let mut num = 0.0;
            let mut deg = 0.0;
            for &(y, w) in g.neighbors(x) {
                if d.contains_closure(y) {
                    num += w * u[g.id(y)];
                    deg += w;
                }
            }
            let next = num / deg;
            let id = g.id(x).to_string();
            delta = delta.max((next - u[&id]).abs());
            u.insert(id, next);
        }
        if delta <= inc_tol {
            return u;
        }
        if sweep == 4_999_999 {
            panic!("fixed-point iteration did not converge");
        }
    }
    unreachable!()
}
