use crate::graph::GGraph;
use crate::hubo::{HuboPolynomial, SpinConfig};

/// Compressed incidence lists.
#[derive(Debug, Clone)]
pub(crate) struct Csr {
    offsets: Vec<usize>,
    items: Vec<usize>,
}

impl Csr {
    fn from_rows<'a>(rows: impl Iterator<Item = &'a [usize]>) -> Self {
        let mut offsets = vec![0];
        let mut items = Vec::new();
        for r in rows {
            items.extend_from_slice(r);
            offsets.push(items.len());
        }
        Self { offsets, items }
    }

    fn transpose(&self, n_cols: usize) -> Self {
        let mut rows = vec![Vec::new(); n_cols];
        for r in 0..self.len() {
            for &c in self.row(r) {
                rows[c].push(r);
            }
        }
        Self::from_rows(rows.iter().map(Vec::as_slice))
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub(crate) fn row(&self, r: usize) -> &[usize] {
        &self.items[self.offsets[r]..self.offsets[r + 1]]
    }
}

/// A G-graph prepared for repeated solver runs: flattened plaquette and site
/// incidence plus the classical objective.
#[derive(Debug, Clone)]
pub struct Problem {
    pub(crate) n_links: usize,
    pub(crate) coeffs: Vec<f64>,
    pub(crate) plaquettes: Csr,
    pub(crate) link_plaquettes: Csr,
    pub(crate) sites: Csr,
    poly: HuboPolynomial,
}

impl Problem {
    pub fn new(g: &GGraph) -> Self {
        let plaquettes = Csr::from_rows(g.plaquettes().iter().map(|p| p.links.as_slice()));
        let sites = Csr::from_rows(g.sites().iter().map(|s| s.links.as_slice()));
        Self {
            n_links: g.n_links(),
            coeffs: g.plaquettes().iter().map(|p| p.coeff).collect(),
            link_plaquettes: plaquettes.transpose(g.n_links()),
            plaquettes,
            sites,
            poly: g.to_polynomial(),
        }
    }

    pub fn n_links(&self) -> usize {
        self.n_links
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn polynomial(&self) -> &HuboPolynomial {
        &self.poly
    }

    pub fn energy(&self, spins: &SpinConfig) -> f64 {
        self.poly.evaluate_unchecked(spins.as_slice())
    }
}
