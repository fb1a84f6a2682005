//! Edge-reinforced random walks on undirected graphs.
//!
//! Crossing a non-loop edge adds one to its weight, crossing a loop adds two.
//! Both rules are captured by reading `T_{i,j} + T_{j,i}` for edge `{i, j}`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Distribution, History, PredictiveScheme, Sufficiency};
use crate::counts::TransitionCounts;
use crate::error::{Error, Result};
use crate::rational::{from_count, is_positive, to_f64, Rational};
use crate::space::{StateId, StateSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct ErrwParams {
    n_states: usize,
    /// Keyed by `(min, max)` endpoint.
    edges: BTreeMap<(StateId, StateId), Rational>,
    neighbors: Vec<Vec<(StateId, Rational, f64)>>,
    incident: Vec<Rational>,
}

fn key(a: StateId, b: StateId) -> (StateId, StateId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl ErrwParams {
    pub fn new<I>(space: &StateSpace, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (StateId, StateId, Rational)>,
    {
        let n = space.len();
        let mut map = BTreeMap::new();
        for (a, b, w) in edges {
            if !space.contains(a) || !space.contains(b) {
                return Err(Error::Input("edge endpoint outside the state space".into()));
            }
            if !is_positive(&w) {
                return Err(Error::Model(format!(
                    "edge {{{}, {}}} needs a positive weight",
                    space.label(a),
                    space.label(b)
                )));
            }
            if map.insert(key(a, b), w).is_some() {
                return Err(Error::Input(format!(
                    "duplicate edge {{{}, {}}}",
                    space.label(a),
                    space.label(b)
                )));
            }
        }
        let mut neighbors = vec![Vec::new(); n];
        let mut incident = vec![Rational::zero(); n];
        for (&(a, b), w) in &map {
            neighbors[a.index()].push((b, w.clone(), to_f64(w)));
            incident[a.index()] += w;
            if a != b {
                neighbors[b.index()].push((a, w.clone(), to_f64(w)));
                incident[b.index()] += w;
            }
        }
        for row in &mut neighbors {
            row.sort_by_key(|(s, _, _)| *s);
        }
        Ok(ErrwParams {
            n_states: n,
            edges: map,
            neighbors,
            incident,
        })
    }

    pub fn weight(&self, a: StateId, b: StateId) -> Option<&Rational> {
        self.edges.get(&key(a, b))
    }

    pub fn edges(&self) -> impl Iterator<Item = (StateId, StateId, &Rational)> {
        self.edges.iter().map(|(&(a, b), w)| (a, b, w))
    }

    /// `α_{(i,·)}`, the initial weight of all edges at `i` (loops once).
    pub fn incident_weight(&self, i: StateId) -> &Rational {
        &self.incident[i.index()]
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }
}

/// `p(j) = (α_{ij} + T_{ij} + T_{ji}) / (α_{i·} + T_{i·} + T_{·i})` over the
/// neighbours of `i`.
pub fn errw_predictive(
    params: &ErrwParams,
    counts: &TransitionCounts,
    i: StateId,
) -> Result<Distribution<Rational>> {
    let nbrs = params
        .neighbors
        .get(i.index())
        .filter(|n| !n.is_empty())
        .ok_or_else(|| Error::Model(format!("vertex {} has no incident edge", i.0)))?;
    let denom =
        params.incident[i.index()].clone() + from_count(counts.row_total(i) + counts.col_total(i));
    Ok(Distribution::new(
        nbrs.iter()
            .map(|(j, w, _)| {
                let num = w.clone() + from_count(counts.get(i, *j) + counts.get(*j, i));
                (*j, num / &denom)
            })
            .collect(),
    ))
}

#[derive(Clone, Debug)]
pub struct ErrwScheme {
    params: ErrwParams,
}

impl ErrwScheme {
    pub fn new(params: ErrwParams) -> Self {
        ErrwScheme { params }
    }

    pub fn params(&self) -> &ErrwParams {
        &self.params
    }
}

impl PredictiveScheme for ErrwScheme {
    fn sufficiency(&self) -> Sufficiency {
        Sufficiency::LastAndCounts
    }

    fn next_exact(&self, history: &History) -> Result<Distribution<Rational>> {
        errw_predictive(&self.params, history.counts(), history.last())
    }

    fn next_float(&self, history: &History) -> Result<Distribution<f64>> {
        let i = history.last();
        let counts = history.counts();
        let nbrs = self
            .params
            .neighbors
            .get(i.index())
            .filter(|n| !n.is_empty())
            .ok_or_else(|| Error::Model(format!("vertex {} has no incident edge", i.0)))?;
        let denom = to_f64(&self.params.incident[i.index()])
            + (counts.row_total(i) + counts.col_total(i)) as f64;
        Ok(Distribution::new(
            nbrs.iter()
                .map(|(j, _, w)| {
                    (
                        *j,
                        (w + (counts.get(i, *j) + counts.get(*j, i)) as f64) / denom,
                    )
                })
                .collect(),
        ))
    }
}
