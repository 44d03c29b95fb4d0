//! Efficient-cycle search on the HUBO-graph.
//!
//! Two rules are available:
//!
//! * [`CycleRule::Faces`] traces the faces of the embedding given by each
//!   vertex's rotation (the order its term lists its variables). Faces that
//!   are simple cycles of length at most `k_m` become gauge sites. This is the
//!   rule for HUBO instances whose terms are written as plaquette boundaries.
//! * [`CycleRule::ShortCycles`] ignores the rotation and collects every cycle
//!   of length at most `k_m` that is not a GF(2) sum of strictly shorter cycles
//!   (the relevant cycles of the graph, truncated at `k_m`). Such cycles are
//!   always chordless. This is the rule for graphs that come without an
//!   embedding, such as random four-regular graphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::HuboGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleRule {
    #[default]
    Faces,
    ShortCycles,
}

impl std::str::FromStr for CycleRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "faces" => Ok(Self::Faces),
            "short-cycles" | "short" => Ok(Self::ShortCycles),
            _ => Err(format!("unknown cycle rule `{s}` (faces | short-cycles)")),
        }
    }
}

/// Returns edge-index sets, each sorted, the list sorted lexicographically.
pub fn find_efficient_cycles(graph: &HuboGraph, k_m: usize, rule: CycleRule) -> Vec<Vec<usize>> {
    let set = match rule {
        CycleRule::Faces => face_cycles(graph, k_m),
        CycleRule::ShortCycles => relevant_cycles(graph, k_m),
    };
    set.into_iter().collect()
}

fn face_cycles(graph: &HuboGraph, k_m: usize) -> BTreeSet<Vec<usize>> {
    let n = graph.n_vertices();
    // rotation restricted to edges joining two vertices
    let rot: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            graph
                .rotation(v)
                .iter()
                .copied()
                .filter(|&e| graph.endpoints(e).is_some())
                .collect()
        })
        .collect();
    let other = |e: usize, u: usize| {
        let (a, b) = graph.endpoints(e).expect("joint edge");
        if a == u {
            b
        } else {
            a
        }
    };

    // dart (e, tail); index 0 is the lower endpoint as tail
    let dart_id = |e: usize, tail: usize| 2 * e + usize::from(graph.endpoints(e).unwrap().0 != tail);
    let mut used = vec![false; 2 * graph.n_edges()];
    let mut out = BTreeSet::new();
    for e0 in 0..graph.n_edges() {
        let Some((a, b)) = graph.endpoints(e0) else {
            continue;
        };
        for tail0 in [a, b] {
            if used[dart_id(e0, tail0)] {
                continue;
            }
            let mut edges = Vec::new();
            let mut verts = Vec::new();
            let (mut e, mut tail) = (e0, tail0);
            while !used[dart_id(e, tail)] {
                used[dart_id(e, tail)] = true;
                edges.push(e);
                verts.push(tail);
                let head = other(e, tail);
                let r = &rot[head];
                let i = r.iter().position(|&x| x == e).expect("edge in rotation");
                e = r[(i + 1) % r.len()];
                tail = head;
            }
            if edges.len() > k_m {
                continue;
            }
            let mut es = edges.clone();
            es.sort_unstable();
            let mut vs = verts;
            vs.sort_unstable();
            let simple = es.windows(2).all(|w| w[0] != w[1]) && vs.windows(2).all(|w| w[0] != w[1]);
            if simple {
                out.insert(es);
            }
        }
    }
    out
}

/// Simple cycles of length `<= k_m` with their vertex order.
fn enumerate_cycles(graph: &HuboGraph, k_m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    struct Search<'a> {
        adj: &'a [Vec<(usize, usize)>],
        k_m: usize,
        start: usize,
        on_path: Vec<bool>,
        verts: Vec<usize>,
        edges: Vec<usize>,
        seen: BTreeSet<Vec<usize>>,
        found: Vec<(Vec<usize>, Vec<usize>)>,
    }

    impl Search<'_> {
        fn dfs(&mut self, u: usize) {
            let depth = self.edges.len();
            for &(e, w) in &self.adj[u] {
                if w == self.start {
                    if depth == 0 || (depth == 1 && e == self.edges[0]) || depth + 1 > self.k_m {
                        continue;
                    }
                    let mut key = self.edges.clone();
                    key.push(e);
                    key.sort_unstable();
                    if self.seen.insert(key.clone()) {
                        self.found.push((key, self.verts.clone()));
                    }
                } else if w > self.start && !self.on_path[w] && depth + 2 <= self.k_m {
                    self.on_path[w] = true;
                    self.verts.push(w);
                    self.edges.push(e);
                    self.dfs(w);
                    self.edges.pop();
                    self.verts.pop();
                    self.on_path[w] = false;
                }
            }
        }
    }

    let adj = graph.adjacency();
    let mut search = Search {
        adj: &adj,
        k_m,
        start: 0,
        on_path: vec![false; graph.n_vertices()],
        verts: Vec::new(),
        edges: Vec::new(),
        seen: BTreeSet::new(),
        found: Vec::new(),
    };
    if k_m < 2 {
        return Vec::new();
    }
    for s in 0..graph.n_vertices() {
        search.start = s;
        search.on_path[s] = true;
        search.verts.push(s);
        search.dfs(s);
        search.verts.pop();
        search.on_path[s] = false;
    }
    search.found
}

fn is_chordless(adj: &[Vec<(usize, usize)>], edges: &[usize], verts: &[usize]) -> bool {
    let k = verts.len();
    if k <= 3 {
        return true;
    }
    let pos = |v: usize| verts.iter().position(|&x| x == v);
    for (i, &a) in verts.iter().enumerate() {
        for &(e, b) in &adj[a] {
            if edges.binary_search(&e).is_ok() {
                continue;
            }
            if let Some(j) = pos(b) {
                let d = i.abs_diff(j);
                if d != 1 && d != k - 1 {
                    return false;
                }
            }
        }
    }
    true
}

fn relevant_cycles(graph: &HuboGraph, k_m: usize) -> BTreeSet<Vec<usize>> {
    let adj = graph.adjacency();
    let mut cycles: Vec<Vec<usize>> = enumerate_cycles(graph, k_m)
        .into_iter()
        .filter(|(es, vs)| is_chordless(&adj, es, vs))
        .map(|(es, _)| es)
        .collect();
    cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let mut basis = Gf2Basis::new(graph.n_edges());
    let mut out = BTreeSet::new();
    let mut i = 0;
    while i < cycles.len() {
        let len = cycles[i].len();
        let j = i + cycles[i..].iter().take_while(|c| c.len() == len).count();
        let group = &cycles[i..j];
        let keep: Vec<bool> = group.iter().map(|c| !basis.spans(c)).collect();
        for (c, k) in group.iter().zip(keep) {
            if k {
                out.insert(c.clone());
            }
        }
        for c in group {
            basis.insert(c);
        }
        i = j;
    }
    out
}

/// Incrementally reduced basis of edge sets over GF(2).
struct Gf2Basis {
    words: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Gf2Basis {
    fn new(n_bits: usize) -> Self {
        Self {
            words: n_bits.div_ceil(64).max(1),
            rows: Vec::new(),
        }
    }

    fn bits(&self, set: &[usize]) -> Vec<u64> {
        let mut v = vec![0u64; self.words];
        for &e in set {
            v[e / 64] ^= 1 << (e % 64);
        }
        v
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (pivot, row) in &self.rows {
            if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                v.iter_mut().zip(row).for_each(|(a, b)| *a ^= b);
            }
        }
        v
    }

    fn spans(&self, set: &[usize]) -> bool {
        self.reduce(self.bits(set)).iter().all(|&w| w == 0)
    }

    fn insert(&mut self, set: &[usize]) {
        let v = self.reduce(self.bits(set));
        if let Some(w) = v.iter().position(|&w| w != 0) {
            let pivot = w * 64 + v[w].trailing_zeros() as usize;
            self.rows.push((pivot, v));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hubo::{parse_instance_ordered, HuboPolynomial, OrderedInstance};

    fn eq4_graph() -> HuboGraph {
        let inst =
            parse_instance_ordered("vars 8\n-1 1 3 5 4\n-1 2 4 6 3\n-1 1 8 5 7\n-1 2 7 6 8\n").unwrap();
        HuboGraph::build_ordered(&inst).unwrap()
    }

    fn one_based(cycles: &[Vec<usize>]) -> Vec<Vec<usize>> {
        cycles.iter().map(|c| c.iter().map(|e| e + 1).collect()).collect()
    }

    #[test]
    fn worked_example_faces() {
        let cycles = find_efficient_cycles(&eq4_graph(), 4, CycleRule::Faces);
        assert_eq!(
            one_based(&cycles),
            vec![vec![1, 2, 3, 7], vec![1, 2, 4, 8], vec![3, 5, 6, 7], vec![4, 5, 6, 8]]
        );
    }

    #[test]
    fn worked_example_short_cycles_sees_parallel_pairs() {
        // Without an embedding the abstract multigraph has four digons and
        // sixteen 4-cycles, none a sum of shorter ones.
        let cycles = find_efficient_cycles(&eq4_graph(), 4, CycleRule::ShortCycles);
        assert_eq!(cycles.iter().filter(|c| c.len() == 2).count(), 4);
        assert_eq!(cycles.iter().filter(|c| c.len() == 4).count(), 16);
    }

    /// Fig. 1(b)-style graph: a square s1 s2 s3 s4 and a triangle s4 s5 s6
    /// sharing s4. Vertices A..E = 0..4, each edge is one variable:
    /// s1=AB, s2=BC, s3=CD, s4=DA, s5=AE, s6=ED.
    fn square_and_triangle() -> OrderedInstance {
        // variables 0..5 are s1..s6; the vertex rotations give a planar
        // embedding with faces s1s2s3s4, s4s5s6 and the outer s1s2s3s6s5.
        let poly = HuboPolynomial::new(
            6,
            [
                (1.0, vec![0, 3, 4]), // A: s1 s4 s5
                (1.0, vec![0, 1]),    // B: s1 s2
                (1.0, vec![1, 2]),    // C: s2 s3
                (1.0, vec![2, 3, 5]), // D: s3 s4 s6
                (1.0, vec![4, 5]),    // E: s5 s6
            ],
        )
        .unwrap();
        OrderedInstance {
            poly,
            orders: vec![vec![0, 4, 3], vec![1, 0], vec![2, 1], vec![3, 5, 2], vec![5, 4]],
        }
    }

    #[test]
    fn decomposable_cycle_is_rejected() {
        let g = HuboGraph::build_ordered(&square_and_triangle()).unwrap();
        let cycles = find_efficient_cycles(&g, 8, CycleRule::ShortCycles);
        assert_eq!(cycles, vec![vec![0, 1, 2, 3], vec![3, 4, 5]]);
        assert!(!cycles.contains(&vec![0, 1, 2, 4, 5]));
    }

    #[test]
    fn planar_faces_bounded_by_km() {
        let g = HuboGraph::build_ordered(&square_and_triangle()).unwrap();
        let all = find_efficient_cycles(&g, 8, CycleRule::Faces);
        assert_eq!(all.len(), 3);
        // the outer face is the only 5-cycle; k_m = 4 drops it
        assert_eq!(
            find_efficient_cycles(&g, 4, CycleRule::Faces),
            vec![vec![0, 1, 2, 3], vec![3, 4, 5]]
        );
    }

    #[test]
    fn tree_has_no_cycles() {
        // path of three terms plus a branch
        let p = HuboPolynomial::new(
            4,
            [(1.0, vec![0]), (1.0, vec![0, 1, 2]), (1.0, vec![1]), (1.0, vec![2, 3])],
        )
        .unwrap();
        let g = HuboGraph::build(&p).unwrap();
        for rule in [CycleRule::Faces, CycleRule::ShortCycles] {
            for k in [0, 3, 10] {
                assert!(find_efficient_cycles(&g, k, rule).is_empty());
            }
        }
    }

    #[test]
    fn short_cycles_independent_of_edge_labels() {
        let g = HuboGraph::build_ordered(&square_and_triangle()).unwrap();
        let base = find_efficient_cycles(&g, 8, CycleRule::ShortCycles);
        // relabel variables with a permutation
        let perm = [4usize, 2, 5, 0, 3, 1];
        let inst = square_and_triangle();
        let terms: Vec<(f64, Vec<usize>)> = inst
            .poly
            .terms()
            .iter()
            .map(|t| (t.coeff, t.vars.iter().map(|&v| perm[v]).collect()))
            .collect();
        let g2 = HuboGraph::build(&HuboPolynomial::new(6, terms).unwrap()).unwrap();
        let mut mapped: Vec<Vec<usize>> = base
            .iter()
            .map(|c| {
                let mut m: Vec<usize> = c.iter().map(|&v| perm[v]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        mapped.sort();
        assert_eq!(find_efficient_cycles(&g2, 8, CycleRule::ShortCycles), mapped);
    }
}
