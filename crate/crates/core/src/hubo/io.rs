//! Plain-text instance format.
//!
//! ```text
//! # comment
//! vars 8
//! -1 1 3 5 4
//! ```
//!
//! Variable indices are 1-based in the file and 0-based in memory. The order in
//! which a term lists its variables is kept by [`parse_instance_ordered`]; it
//! fixes the cyclic edge order around that term's vertex in the HUBO-graph.

use std::collections::HashMap;
use std::fmt::Write;

use super::HuboPolynomial;
use crate::error::{Error, Result};

/// A polynomial together with the as-written variable order of each term.
///
/// `orders[i]` is a permutation of `poly.terms()[i].vars`. When several input
/// lines merge into one term, the first line's order wins.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedInstance {
    pub poly: HuboPolynomial,
    pub orders: Vec<Vec<usize>>,
}

impl OrderedInstance {
    /// Uses the sorted variable lists as the order.
    pub fn from_poly(poly: HuboPolynomial) -> Self {
        let orders = poly.terms().iter().map(|t| t.vars.clone()).collect();
        Self { poly, orders }
    }

    pub fn to_text(&self) -> String {
        write_text(
            self.poly.n_vars(),
            self.poly
                .terms()
                .iter()
                .zip(&self.orders)
                .map(|(t, o)| (t.coeff, o.as_slice())),
        )
    }
}

pub fn parse_instance(text: &str) -> Result<HuboPolynomial> {
    parse_instance_ordered(text).map(|inst| inst.poly)
}

pub fn parse_instance_ordered(text: &str) -> Result<OrderedInstance> {
    let mut n_vars: Option<usize> = None;
    let mut raw: Vec<(f64, Vec<usize>)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let first = fields.next().unwrap_or_default();
        let Some(n) = n_vars else {
            if first != "vars" {
                return Err(parse_err(lineno, "expected `vars <n>` header"));
            }
            let n = fields
                .next()
                .and_then(|f| f.parse::<usize>().ok())
                .ok_or_else(|| parse_err(lineno, "`vars` needs a non-negative integer"))?;
            if fields.next().is_some() {
                return Err(parse_err(lineno, "trailing tokens after `vars <n>`"));
            }
            n_vars = Some(n);
            continue;
        };
        let coeff: f64 = first
            .parse()
            .map_err(|_| parse_err(lineno, &format!("bad coefficient `{first}`")))?;
        if !coeff.is_finite() {
            return Err(parse_err(lineno, "coefficient must be finite"));
        }
        let mut vars = Vec::new();
        for f in fields {
            let i: usize = f
                .parse()
                .map_err(|_| parse_err(lineno, &format!("bad variable index `{f}`")))?;
            if i == 0 || i > n {
                return Err(parse_err(
                    lineno,
                    &format!("variable index {i} outside 1..={n}"),
                ));
            }
            if vars.contains(&(i - 1)) {
                return Err(parse_err(lineno, &format!("variable {i} repeated")));
            }
            vars.push(i - 1);
        }
        if vars.is_empty() {
            return Err(parse_err(lineno, "term has no variables"));
        }
        raw.push((coeff, vars));
    }
    let n = n_vars.ok_or_else(|| parse_err(text.lines().count().max(1), "missing `vars` header"))?;

    let mut first_order: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (_, vars) in &raw {
        let mut key = vars.clone();
        key.sort_unstable();
        first_order.entry(key).or_insert_with(|| vars.clone());
    }
    let poly = HuboPolynomial::new(n, raw)?;
    let orders = poly
        .terms()
        .iter()
        .map(|t| first_order[&t.vars].clone())
        .collect();
    Ok(OrderedInstance { poly, orders })
}

pub fn serialize_instance(poly: &HuboPolynomial) -> String {
    write_text(
        poly.n_vars(),
        poly.terms().iter().map(|t| (t.coeff, t.vars.as_slice())),
    )
}

fn write_text<'a>(n_vars: usize, terms: impl Iterator<Item = (f64, &'a [usize])>) -> String {
    let mut out = format!("vars {n_vars}\n");
    for (coeff, vars) in terms {
        write!(out, "{coeff}").unwrap();
        for v in vars {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}
