use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{build_dual, CycleRule, GGraph, GaugeOperator, HuboGraph, Plaquette};
use crate::error::{Error, Result};
use crate::hubo::HuboPolynomial;

const MAX_PAIRING_ATTEMPTS: usize = 20_000;

/// Periodic `L x L` square lattice with `J_p = -1` on every plaquette.
///
/// Link `(x, y, dir)` has index `2 (x L + y) + dir` with `dir = 0` pointing
/// from site `(x, y)` to `(x+1, y)` and `dir = 1` to `(x, y+1)`. Plaquette and
/// site `(x, y)` both have index `x L + y`; plaquette links are listed
/// counter-clockwise.
pub fn gen_torus_lattice(l: usize) -> Result<GGraph> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("torus size L = {l}, need L >= 2")));
    }
    let link = |x: usize, y: usize, dir: usize| 2 * ((x % l) * l + (y % l)) + dir;
    let mut plaquettes = Vec::with_capacity(l * l);
    let mut sites = Vec::with_capacity(l * l);
    for x in 0..l {
        for y in 0..l {
            plaquettes.push(Plaquette {
                coeff: -1.0,
                links: vec![link(x, y, 0), link(x + 1, y, 1), link(x, y + 1, 0), link(x, y, 1)],
            });
            sites.push(GaugeOperator {
                links: vec![link(x, y, 0), link(x, y, 1), link(x + l - 1, y, 0), link(x, y + l - 1, 1)],
            });
        }
    }
    GGraph::new(2 * l * l, plaquettes, sites)
}

/// Simple connected 4-regular graph on `n` vertices from the pairing model,
/// edges as sorted `(u, v)` pairs with `u < v`, listed in lexicographic order.
pub fn random_four_regular_edges(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    if n < 5 {
        return Err(Error::InvalidParameter(format!(
            "no simple 4-regular graph on {n} vertices"
        )));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v; 4]).collect();
    for _ in 0..MAX_PAIRING_ATTEMPTS {
        stubs.shuffle(rng);
        let mut edges: Vec<(usize, usize)> = stubs
            .chunks_exact(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if edges.iter().any(|&(a, b)| a == b) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        if is_connected(n, &edges) {
            return Ok(edges);
        }
    }
    Err(Error::Generation {
        attempts: MAX_PAIRING_ATTEMPTS,
    })
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Dual of a random four-regular graph: one link per edge, one four-link
/// plaquette with `J_p = -1` per vertex, sites from the short-cycle rule.
pub fn gen_four_regular_dual(n_vertices: usize, seed: u64, k_m: usize) -> Result<GGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = random_four_regular_edges(n_vertices, &mut rng)?;
    let mut incident = vec![Vec::with_capacity(4); n_vertices];
    for (e, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(e);
        incident[b].push(e);
    }
    let poly = HuboPolynomial::new(edges.len(), incident.into_iter().map(|links| (-1.0, links)))?;
    let graph = HuboGraph::build(&poly)?;
    build_dual(&graph, k_m, CycleRule::ShortCycles)
}
