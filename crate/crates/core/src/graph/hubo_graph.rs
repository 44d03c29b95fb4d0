use crate::error::{Error, Result};
use crate::hubo::{HuboPolynomial, OrderedInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Variable occurs in no term.
    Free,
    /// Variable occurs in exactly one term.
    Dangling(usize),
    /// Variable shared by two terms.
    Joint(usize, usize),
}

/// One vertex per polynomial term, one edge per variable.
///
/// `rotation[v]` lists the edges at vertex `v` in the cyclic order the term
/// wrote its variables; face tracing uses it as the embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct HuboGraph {
    coeffs: Vec<f64>,
    edges: Vec<EdgeKind>,
    rotation: Vec<Vec<usize>>,
}

impl HuboGraph {
    /// Builds the graph with sorted variable order as the rotation.
    pub fn build(poly: &HuboPolynomial) -> Result<Self> {
        Self::build_ordered(&OrderedInstance::from_poly(poly.clone()))
    }

    pub fn build_ordered(inst: &OrderedInstance) -> Result<Self> {
        let poly = &inst.poly;
        let mut occ: Vec<Vec<usize>> = vec![Vec::new(); poly.n_vars()];
        for (t, term) in poly.terms().iter().enumerate() {
            for &v in &term.vars {
                occ[v].push(t);
            }
        }
        let edges = occ
            .iter()
            .enumerate()
            .map(|(var, ts)| match ts.as_slice() {
                [] => Ok(EdgeKind::Free),
                [a] => Ok(EdgeKind::Dangling(*a)),
                [a, b] => Ok(EdgeKind::Joint(*a, *b)),
                _ => Err(Error::VariableMultiplicity {
                    var: var + 1,
                    count: ts.len(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            coeffs: poly.terms().iter().map(|t| t.coeff).collect(),
            edges,
            rotation: inst.orders.clone(),
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.coeffs.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn edges(&self) -> &[EdgeKind] {
        &self.edges
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn n_dangling(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| matches!(e, EdgeKind::Dangling(_)))
            .count()
    }

    /// Number of edge ends at `v`; dangling edges count once.
    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Endpoints of a non-dangling edge.
    pub fn endpoints(&self, e: usize) -> Option<(usize, usize)> {
        match self.edges[e] {
            EdgeKind::Joint(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// `(edge, neighbour)` pairs for the non-dangling edges at `v`.
    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n_vertices()];
        for (e, kind) in self.edges.iter().enumerate() {
            if let EdgeKind::Joint(a, b) = *kind {
                adj[a].push((e, b));
                adj[b].push((e, a));
            }
        }
        adj
    }
}
