//! Multilinear polynomials over Ising spins.
//!
//! A [`HuboPolynomial`] is kept in canonical form: each term's variable set is
//! sorted and duplicate-free, no two terms share a variable set and
//! zero-coefficient terms are dropped.

mod io;

pub use io::{parse_instance, parse_instance_ordered, serialize_instance, OrderedInstance};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest variable count accepted by [`brute_force_minimum`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuboPolynomial {
    n_vars: usize,
    terms: Vec<Term>,
}

impl HuboPolynomial {
    /// Builds a canonical polynomial from raw `(coefficient, variables)` pairs.
    ///
    /// Variable lists are sorted, terms with equal variable sets are merged by
    /// adding coefficients and terms whose coefficient ends up zero are dropped.
    /// Term order follows the first occurrence of each variable set.
    pub fn new<I, V>(n_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, V)>,
        V: IntoIterator<Item = usize>,
    {
        let mut order: Vec<Vec<usize>> = Vec::new();
        let mut merged: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (coeff, vars) in terms {
            let mut vars: Vec<usize> = vars.into_iter().collect();
            validate_vars(n_vars, &mut vars)?;
            match merged.get_mut(&vars) {
                Some(c) => *c += coeff,
                None => {
                    merged.insert(vars.clone(), coeff);
                    order.push(vars);
                }
            }
        }
        let terms = order
            .into_iter()
            .filter_map(|vars| {
                let coeff = merged[&vars];
                (coeff != 0.0).then_some(Term { coeff, vars })
            })
            .collect();
        Ok(Self { n_vars, terms })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Energy of `spins`.
    pub fn evaluate(&self, spins: &SpinConfig) -> Result<f64> {
        if spins.len() != self.n_vars {
            return Err(Error::Dimension {
                expected: self.n_vars,
                got: spins.len(),
            });
        }
        Ok(self.evaluate_unchecked(spins.as_slice()))
    }

    pub(crate) fn evaluate_unchecked(&self, spins: &[i8]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let sign: i8 = t.vars.iter().map(|&v| spins[v]).product();
                t.coeff * f64::from(sign)
            })
            .sum()
    }

    /// Energy change caused by flipping spin `var`.
    pub fn flip_delta(&self, spins: &SpinConfig, var: usize) -> f64 {
        let s = spins.as_slice();
        -2.0 * self
            .terms
            .iter()
            .filter(|t| t.vars.binary_search(&var).is_ok())
            .map(|t| t.coeff * f64::from(t.vars.iter().map(|&v| s[v]).product::<i8>()))
            .sum::<f64>()
    }
}

fn validate_vars(n_vars: usize, vars: &mut Vec<usize>) -> Result<()> {
    if vars.is_empty() {
        return Err(Error::InvalidParameter("term with no variables".into()));
    }
    vars.sort_unstable();
    if vars.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter(format!(
            "term repeats a variable: {vars:?}"
        )));
    }
    if let Some(&v) = vars.last() {
        if v >= n_vars {
            return Err(Error::InvalidParameter(format!(
                "variable index {v} out of range for {n_vars} variables"
            )));
        }
    }
    Ok(())
}

/// Ising configuration with entries in {-1, +1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(i) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter(format!(
                "spin {i} is {}, expected -1 or +1",
                spins[i]
            )));
        }
        Ok(Self(spins))
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Spin `i` is -1 exactly when bit `i` of `code` is set.
    pub fn from_code(n: usize, code: u64) -> Self {
        Self((0..n).map(|i| if code >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    /// Signs of a real vector, with `sign(0) = +1`.
    pub fn from_signs(values: &[f64]) -> Self {
        Self(values.iter().map(|&w| if w < 0.0 { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }
}

impl TryFrom<Vec<i8>> for SpinConfig {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SpinConfig> for Vec<i8> {
    fn from(s: SpinConfig) -> Self {
        s.0
    }
}

/// Exhaustive minimum over all `2^n_vars` configurations.
///
/// Ties resolve to the lowest code in the encoding of [`SpinConfig::from_code`].
pub fn brute_force_minimum(poly: &HuboPolynomial) -> Result<(f64, SpinConfig)> {
    let n = poly.n_vars();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::Size {
            what: "n_vars",
            got: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let masks: Vec<(f64, u64)> = poly
        .terms()
        .iter()
        .map(|t| (t.coeff, t.vars.iter().fold(0u64, |m, &v| m | 1 << v)))
        .collect();
    let mut best = (f64::INFINITY, 0u64);
    for code in 0..1u64 << n {
        let e: f64 = masks
            .iter()
            .map(|&(c, m)| if (code & m).count_ones() % 2 == 0 { c } else { -c })
            .sum();
        if e < best.0 {
            best = (e, code);
        }
    }
    Ok((best.0, SpinConfig::from_code(n, best.1)))
}
