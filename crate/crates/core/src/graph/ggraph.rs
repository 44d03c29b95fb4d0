use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{find_efficient_cycles, CycleRule, HuboGraph};
use crate::error::{Error, Result};
use crate::hubo::{HuboPolynomial, OrderedInstance};

/// Plaquette term `coeff * prod_{l in links} sigma_z^l`. Links are stored in
/// boundary order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plaquette {
    pub coeff: f64,
    pub links: Vec<usize>,
}

/// Gauge operator `prod_{l in links} sigma_x^l`, target eigenvalue +1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeOperator {
    pub links: Vec<usize>,
}

/// The dual G-graph: spins on links, one plaquette per HUBO term, one site
/// per efficient cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GGraph {
    n_links: usize,
    plaquettes: Vec<Plaquette>,
    sites: Vec<GaugeOperator>,
}

impl GGraph {
    /// Validates indices and the even-overlap condition between every site
    /// and every plaquette.
    pub fn new(n_links: usize, plaquettes: Vec<Plaquette>, sites: Vec<GaugeOperator>) -> Result<Self> {
        let check = |links: &[usize], what: &str| -> Result<()> {
            if links.is_empty() {
                return Err(Error::InvalidParameter(format!("empty {what}")));
            }
            let mut sorted = links.to_vec();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("{what} repeats a link")));
            }
            if let Some(&l) = sorted.iter().find(|&&l| l >= n_links) {
                return Err(Error::InvalidParameter(format!(
                    "{what} link {l} out of range for {n_links} links"
                )));
            }
            Ok(())
        };
        for p in &plaquettes {
            check(&p.links, "plaquette")?;
        }
        for s in &sites {
            check(&s.links, "site")?;
        }
        let g = Self {
            n_links,
            plaquettes,
            sites,
        };
        g.check_commutation()?;
        Ok(g)
    }

    fn check_commutation(&self) -> Result<()> {
        let mut in_site = vec![false; self.n_links];
        for (v, site) in self.sites.iter().enumerate() {
            site.links.iter().for_each(|&l| in_site[l] = true);
            for (p, plaq) in self.plaquettes.iter().enumerate() {
                let overlap = plaq.links.iter().filter(|&&l| in_site[l]).count();
                if overlap % 2 == 1 {
                    return Err(Error::OddOverlap { site: v, plaquette: p });
                }
            }
            site.links.iter().for_each(|&l| in_site[l] = false);
        }
        Ok(())
    }

    pub fn n_links(&self) -> usize {
        self.n_links
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn sites(&self) -> &[GaugeOperator] {
        &self.sites
    }

    pub fn n_plaquettes(&self) -> usize {
        self.plaquettes.len()
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    /// `-sum |J_p|`; the ground energy whenever some configuration satisfies
    /// every plaquette, e.g. `-N_p` for all-`J_p = -1` instances.
    pub fn reference_energy(&self) -> f64 {
        -self.plaquettes.iter().map(|p| p.coeff.abs()).sum::<f64>()
    }

    /// The classical objective over link spins.
    pub fn to_polynomial(&self) -> HuboPolynomial {
        HuboPolynomial::new(
            self.n_links,
            self.plaquettes.iter().map(|p| (p.coeff, p.links.clone())),
        )
        .expect("validated plaquettes")
    }

    /// HUBO export keeping each plaquette's boundary order.
    pub fn to_instance(&self) -> OrderedInstance {
        let poly = self.to_polynomial();
        let orders = poly
            .terms()
            .iter()
            .map(|t| {
                self.plaquettes
                    .iter()
                    .find(|p| {
                        let mut s = p.links.clone();
                        s.sort_unstable();
                        s == t.vars
                    })
                    .map(|p| p.links.clone())
                    .expect("plaquette for every term")
            })
            .collect();
        OrderedInstance { poly, orders }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("links {}\n", self.n_links);
        for p in &self.plaquettes {
            write!(out, "plaq {}", p.coeff).unwrap();
            p.links.iter().for_each(|l| write!(out, " {}", l + 1).unwrap());
            out.push('\n');
        }
        for s in &self.sites {
            out.push_str("site");
            s.links.iter().for_each(|l| write!(out, " {}", l + 1).unwrap());
            out.push('\n');
        }
        out
    }
}

/// Reads the `links` / `plaq` / `site` text format (1-based link indices).
pub fn parse_ggraph(text: &str) -> Result<GGraph> {
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut n_links = None;
    let mut plaquettes = Vec::new();
    let mut sites = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let key = fields.next().unwrap_or_default();
        let Some(n) = n_links else {
            if key != "links" {
                return Err(err(line, "expected `links <n>` header".into()));
            }
            let n = fields
                .next()
                .and_then(|f| f.parse::<usize>().ok())
                .ok_or_else(|| err(line, "`links` needs a non-negative integer".into()))?;
            n_links = Some(n);
            continue;
        };
        let parse_links = |fields: std::str::SplitWhitespace<'_>| -> Result<Vec<usize>> {
            let links = fields
                .map(|f| match f.parse::<usize>() {
                    Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
                    _ => Err(err(line, format!("bad link index `{f}`"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if links.is_empty() {
                return Err(err(line, "no links listed".into()));
            }
            Ok(links)
        };
        match key {
            "plaq" => {
                let c = fields.next().unwrap_or_default();
                let coeff: f64 = c
                    .parse()
                    .ok()
                    .filter(|c: &f64| c.is_finite())
                    .ok_or_else(|| err(line, format!("bad coefficient `{c}`")))?;
                let links = parse_links(fields)?;
                plaquettes.push(Plaquette { coeff, links });
            }
            "site" => {
                let links = parse_links(fields)?;
                sites.push(GaugeOperator { links });
            }
            other => return Err(err(line, format!("unknown record `{other}`"))),
        }
    }
    let n = n_links.ok_or_else(|| err(text.lines().count().max(1), "missing `links` header".into()))?;
    GGraph::new(n, plaquettes, sites).map_err(|e| match e {
        Error::InvalidParameter(msg) => err(0, msg),
        other => other,
    })
}

/// Dualizes a HUBO-graph: term vertices become plaquettes (boundary order
/// from the vertex rotation), efficient cycles become gauge sites.
pub fn build_dual(graph: &HuboGraph, k_m: usize, rule: CycleRule) -> Result<GGraph> {
    let plaquettes = (0..graph.n_vertices())
        .map(|v| Plaquette {
            coeff: graph.coeffs()[v],
            links: graph.rotation(v).to_vec(),
        })
        .collect();
    let sites = find_efficient_cycles(graph, k_m, rule)
        .into_iter()
        .map(|links| GaugeOperator { links })
        .collect();
    GGraph::new(graph.n_edges(), plaquettes, sites)
}
