//! Colored edge-reinforced random walks.
//!
//! Every directed edge `(i, j)` carries a color `c(i, j)` and a weight
//! `β_{i,j}`; every color carries a weight `α_c`. A step from `i` first picks a
//! color among `C(i)` proportionally to the reinforced color weights, then an
//! edge of that color out of `i` proportionally to the reinforced edge
//! weights. Both the chosen color and the chosen edge are reinforced.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use super::{Distribution, ErrwParams, History, HoppeParams, PredictiveScheme, Sufficiency};
use crate::counts::TransitionCounts;
use crate::error::{Error, Result};
use crate::rational::{from_count, is_positive, to_f64, Rational};
use crate::rng::{self, Rng};
use crate::space::{Path, StateId, StateSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorId(pub u32);

impl ColorId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Color {
    pub name: String,
    pub alpha: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredEdge {
    pub from: StateId,
    pub to: StateId,
    pub color: ColorId,
    pub beta: Rational,
}

/// A finite directed graph with colored, weighted edges.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    space: StateSpace,
    colors: Vec<Color>,
    /// Sorted by `(from, to)`.
    edges: Vec<ColoredEdge>,
    edge_index: HashMap<(StateId, StateId), usize>,
    out: Vec<Vec<usize>>,
    by_color: Vec<Vec<usize>>,
    color_sets: Vec<BTreeSet<ColorId>>,
    /// Distinct `(from, color)` pairs; `slot_of_edge[e]` indexes into it.
    slots: Vec<(StateId, ColorId)>,
    slot_of_edge: Vec<usize>,
    slot_beta: Vec<Rational>,
    set_alpha: Vec<Rational>,
}

impl PartialEq for ColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.colors == other.colors && self.edges == other.edges
    }
}

impl ColoredGraph {
    pub fn new(space: StateSpace, colors: Vec<Color>, mut edges: Vec<ColoredEdge>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for c in &colors {
            if !names.insert(c.name.as_str()) {
                return Err(Error::Input(format!("duplicate color `{}`", c.name)));
            }
            if !is_positive(&c.alpha) {
                return Err(Error::Model(format!("color `{}` needs α > 0", c.name)));
            }
        }
        edges.sort_by_key(|e| (e.from, e.to));
        let n = space.len();
        let mut edge_index = HashMap::new();
        let mut out = vec![Vec::new(); n];
        let mut by_color = vec![Vec::new(); colors.len()];
        let mut color_sets = vec![BTreeSet::new(); n];
        let mut slot_map: BTreeMap<(StateId, ColorId), usize> = BTreeMap::new();
        let mut slots = Vec::new();
        let mut slot_of_edge = Vec::with_capacity(edges.len());
        let mut slot_beta: Vec<Rational> = Vec::new();
        for (k, e) in edges.iter().enumerate() {
            let (from, to) = (checked_label(&space, e.from)?, checked_label(&space, e.to)?);
            if e.color.index() >= colors.len() {
                return Err(Error::Input(format!(
                    "edge ({from}, {to}) has an undeclared color"
                )));
            }
            if !is_positive(&e.beta) {
                return Err(Error::Model(format!("edge ({from}, {to}) needs β > 0")));
            }
            if edge_index.insert((e.from, e.to), k).is_some() {
                return Err(Error::Input(format!("duplicate edge ({from}, {to})")));
            }
            out[e.from.index()].push(k);
            by_color[e.color.index()].push(k);
            color_sets[e.from.index()].insert(e.color);
            let slot = *slot_map.entry((e.from, e.color)).or_insert_with(|| {
                slots.push((e.from, e.color));
                slot_beta.push(Rational::zero());
                slots.len() - 1
            });
            slot_beta[slot] += &e.beta;
            slot_of_edge.push(slot);
        }
        let set_alpha = color_sets
            .iter()
            .map(|set| {
                set.iter()
                    .fold(Rational::zero(), |acc, c| acc + &colors[c.index()].alpha)
            })
            .collect();
        Ok(ColoredGraph {
            space,
            colors,
            edges,
            edge_index,
            out,
            by_color,
            color_sets,
            slots,
            slot_of_edge,
            slot_beta,
            set_alpha,
        })
    }

    /// The ERRW on an undirected graph framed as a colored walk: each pair of
    /// directed edges `(i, j)`, `(j, i)` shares one color weighted by the
    /// undirected edge weight, and each loop `(i, i)` becomes the pair
    /// `(i, i°)`, `(i°, i)` through an auxiliary vertex `i°`.
    ///
    /// Returns the graph and, for each auxiliary vertex, the vertex it loops.
    pub fn from_errw(
        space: &StateSpace,
        params: &ErrwParams,
    ) -> Result<(ColoredGraph, BTreeMap<StateId, StateId>)> {
        let mut labels: Vec<String> = space.labels().to_vec();
        let mut aux = BTreeMap::new();
        let mut colors = Vec::new();
        let mut edges = Vec::new();
        let one = Rational::one();
        for (a, b, w) in params.edges() {
            let color = ColorId(colors.len() as u32);
            colors.push(Color {
                name: format!("{}~{}", space.label(a), space.label(b)),
                alpha: w.clone(),
            });
            let (x, y) = if a == b {
                let id = StateId(labels.len() as u32);
                labels.push(format!("{}°", space.label(a)));
                aux.insert(id, a);
                (a, id)
            } else {
                (a, b)
            };
            for (from, to) in [(x, y), (y, x)] {
                edges.push(ColoredEdge {
                    from,
                    to,
                    color,
                    beta: one.clone(),
                });
            }
        }
        let g = ColoredGraph::new(StateSpace::new(labels)?, colors, edges)?;
        Ok((g, aux))
    }

    /// The reinforced Hoppe urn as a monochromatic walk with
    /// `β_{i,j} = α_i q_i(j)`.
    pub fn from_hoppe(space: &StateSpace, params: &HoppeParams) -> Result<ColoredGraph> {
        let colors = vec![Color {
            name: "c".into(),
            alpha: Rational::one(),
        }];
        let mut edges = Vec::new();
        for i in space.ids() {
            for j in space.ids() {
                let beta = params.alpha(i) * params.q(i, j);
                if is_positive(&beta) {
                    edges.push(ColoredEdge {
                        from: i,
                        to: j,
                        color: ColorId(0),
                        beta,
                    });
                }
            }
        }
        ColoredGraph::new(space.clone(), colors, edges)
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color(&self, c: ColorId) -> &Color {
        &self.colors[c.index()]
    }

    pub fn color_id(&self, name: &str) -> Result<ColorId> {
        self.colors
            .iter()
            .position(|c| c.name == name)
            .map(|k| ColorId(k as u32))
            .ok_or_else(|| Error::Input(format!("unknown color `{name}`")))
    }

    pub fn color_ids(&self) -> impl Iterator<Item = ColorId> {
        (0..self.colors.len() as u32).map(ColorId)
    }

    pub fn edges(&self) -> &[ColoredEdge] {
        &self.edges
    }

    pub fn edge(&self, from: StateId, to: StateId) -> Option<&ColoredEdge> {
        self.edge_index.get(&(from, to)).map(|k| &self.edges[*k])
    }

    /// Edges out of `i`, sorted by target.
    pub fn out_edges(&self, i: StateId) -> impl Iterator<Item = &ColoredEdge> {
        self.out
            .get(i.index())
            .into_iter()
            .flatten()
            .map(|k| &self.edges[*k])
    }

    pub fn has_out_edges(&self, i: StateId) -> bool {
        self.out.get(i.index()).is_some_and(|o| !o.is_empty())
    }

    /// Vertices without outgoing edges.
    pub fn sinks(&self) -> Vec<StateId> {
        self.space
            .ids()
            .filter(|i| !self.has_out_edges(*i))
            .collect()
    }

    /// `E_c`.
    pub fn edges_of_color(&self, c: ColorId) -> impl Iterator<Item = &ColoredEdge> {
        self.by_color[c.index()].iter().map(|k| &self.edges[*k])
    }

    /// `C(i)`.
    pub fn color_set(&self, i: StateId) -> &BTreeSet<ColorId> {
        &self.color_sets[i.index()]
    }

    /// `A_{i,c}`: targets of color-`c` edges out of `i`.
    pub fn targets(&self, i: StateId, c: ColorId) -> Vec<StateId> {
        self.out_edges(i)
            .filter(|e| e.color == c)
            .map(|e| e.to)
            .collect()
    }

    pub fn alpha(&self, c: ColorId) -> &Rational {
        &self.colors[c.index()].alpha
    }

    /// `α_{C(i)}`.
    pub fn color_set_weight(&self, i: StateId) -> &Rational {
        &self.set_alpha[i.index()]
    }

    /// `β_{i,E_c}`.
    pub fn beta_color_total(&self, i: StateId, c: ColorId) -> Rational {
        self.out_edges(i)
            .filter(|e| e.color == c)
            .fold(Rational::zero(), |acc, e| acc + &e.beta)
    }

    /// Normalized edge weights `Q_{i,j} = β_{i,j} / Σ_{j'} β_{i,j'}`; rows of
    /// sinks are zero.
    pub fn weight_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.space.len();
        let mut q = vec![vec![Rational::zero(); n]; n];
        for i in self.space.ids() {
            let total = self
                .out_edges(i)
                .fold(Rational::zero(), |acc, e| acc + &e.beta);
            for e in self.out_edges(i) {
                q[i.index()][e.to.index()] = &e.beta / &total;
            }
        }
        q
    }

    /// `T_{E_c}` for every color.
    pub fn color_counts(&self, counts: &TransitionCounts) -> Vec<u64> {
        let mut out = vec![0; self.colors.len()];
        for ((from, to), k) in counts.iter() {
            if let Some(e) = self.edge(from, to) {
                out[e.color.index()] += k;
            }
        }
        out
    }

    /// Fails naming the first transition of `counts` that is not an edge.
    pub fn check_counts(&self, counts: &TransitionCounts) -> Result<()> {
        for ((from, to), _) in counts.iter() {
            if self.edge(from, to).is_none() {
                return Err(Error::Input(format!(
                    "missing edge ({}, {})",
                    self.space.label(from),
                    self.space.label(to)
                )));
            }
        }
        Ok(())
    }

    /// Weights after reinforcing by `counts`: `α_c + k_c T_{E_c}` and
    /// `β_{i,j} + k_e T_{i,j}`.
    pub fn reinforced(
        &self,
        counts: &TransitionCounts,
        color_increment: &Rational,
        edge_increment: &Rational,
    ) -> Result<ColoredGraph> {
        self.check_counts(counts)?;
        let tc = self.color_counts(counts);
        let colors = self
            .colors
            .iter()
            .zip(&tc)
            .map(|(c, t)| Color {
                name: c.name.clone(),
                alpha: &c.alpha + color_increment * from_count(*t),
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| ColoredEdge {
                beta: &e.beta + edge_increment * from_count(counts.get(e.from, e.to)),
                ..e.clone()
            })
            .collect();
        ColoredGraph::new(self.space.clone(), colors, edges)
    }
}

fn checked_label(space: &StateSpace, id: StateId) -> Result<&str> {
    if space.contains(id) {
        Ok(space.label(id))
    } else {
        Err(Error::Input(format!(
            "edge endpoint index {} outside the vertex set",
            id.0
        )))
    }
}

/// Predictive law of the colored walk out of `i` with unit reinforcements.
pub fn colored_predictive(
    graph: &ColoredGraph,
    counts: &TransitionCounts,
    i: StateId,
) -> Result<Distribution<Rational>> {
    ColoredScheme::new(graph.clone()).predictive(counts, i)
}

#[derive(Clone, Debug)]
pub struct ColoredScheme {
    graph: ColoredGraph,
    color_increment: Rational,
    edge_increment: Rational,
    f: FloatCache,
}

#[derive(Clone, Debug)]
struct FloatCache {
    alpha: Vec<f64>,
    set_alpha: Vec<f64>,
    beta: Vec<f64>,
    slot_beta: Vec<f64>,
    color_inc: f64,
    edge_inc: f64,
}

impl ColoredScheme {
    pub fn new(graph: ColoredGraph) -> Self {
        Self::with_increments(graph, Rational::one(), Rational::one())
            .expect("unit increments are valid")
    }

    /// Reinforces colors by `color_increment` and edges by `edge_increment`
    /// per crossing; zero disables reinforcement.
    pub fn with_increments(
        graph: ColoredGraph,
        color_increment: Rational,
        edge_increment: Rational,
    ) -> Result<Self> {
        if color_increment < Rational::zero() || edge_increment < Rational::zero() {
            return Err(Error::Model("reinforcements must be non-negative".into()));
        }
        let f = FloatCache {
            alpha: graph.colors.iter().map(|c| to_f64(&c.alpha)).collect(),
            set_alpha: graph.set_alpha.iter().map(to_f64).collect(),
            beta: graph.edges.iter().map(|e| to_f64(&e.beta)).collect(),
            slot_beta: graph.slot_beta.iter().map(to_f64).collect(),
            color_inc: to_f64(&color_increment),
            edge_inc: to_f64(&edge_increment),
        };
        Ok(ColoredScheme {
            graph,
            color_increment,
            edge_increment,
            f,
        })
    }

    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    pub fn color_increment(&self) -> &Rational {
        &self.color_increment
    }

    pub fn edge_increment(&self) -> &Rational {
        &self.edge_increment
    }

    fn sink_error(&self, i: StateId) -> Error {
        Error::Model(format!(
            "vertex `{}` has no outgoing edge",
            self.graph.space.label(i)
        ))
    }

    /// `T_{E_c}` for each color in `C(i)`, and `T_{i,E_c}` for each slot of `i`.
    fn aggregate(
        &self,
        counts: &TransitionCounts,
        i: StateId,
    ) -> (BTreeMap<ColorId, u64>, BTreeMap<usize, u64>) {
        let g = &self.graph;
        let per_color = g
            .color_set(i)
            .iter()
            .map(|c| {
                let t = g.edges_of_color(*c).map(|e| counts.get(e.from, e.to)).sum();
                (*c, t)
            })
            .collect();
        let mut per_slot = BTreeMap::new();
        for k in &g.out[i.index()] {
            let e = &g.edges[*k];
            *per_slot.entry(g.slot_of_edge[*k]).or_insert(0) += counts.get(e.from, e.to);
        }
        (per_color, per_slot)
    }

    /// Exact predictive law out of `i` given `counts`.
    pub fn predictive(
        &self,
        counts: &TransitionCounts,
        i: StateId,
    ) -> Result<Distribution<Rational>> {
        let g = &self.graph;
        if !g.has_out_edges(i) {
            return Err(self.sink_error(i));
        }
        let (per_color, per_slot) = self.aggregate(counts, i);
        let t_set: u64 = per_color.values().sum();
        let color_den = g.color_set_weight(i) + &self.color_increment * from_count(t_set);
        let entries = g.out[i.index()]
            .iter()
            .map(|k| {
                let e = &g.edges[*k];
                let slot = g.slot_of_edge[*k];
                let color_num =
                    g.alpha(e.color) + &self.color_increment * from_count(per_color[&e.color]);
                let edge_num = &e.beta + &self.edge_increment * from_count(counts.get(i, e.to));
                let edge_den =
                    &g.slot_beta[slot] + &self.edge_increment * from_count(per_slot[&slot]);
                (e.to, (color_num / &color_den) * (edge_num / edge_den))
            })
            .collect();
        Ok(Distribution::new(entries))
    }

    /// Floating-point predictive out of `i` from aggregated counts; shared by
    /// the generic path and [`ColoredWalk`] so both produce identical bits.
    fn float_probs(
        &self,
        i: StateId,
        color_count: impl Fn(ColorId) -> u64,
        slot_count: impl Fn(usize) -> u64,
        edge_count: impl Fn(usize) -> u64,
        out: &mut Vec<f64>,
    ) {
        let g = &self.graph;
        let f = &self.f;
        out.clear();
        let t_set: u64 = g.color_set(i).iter().map(|c| color_count(*c)).sum();
        let color_den = f.set_alpha[i.index()] + f.color_inc * t_set as f64;
        for k in &g.out[i.index()] {
            let e = &g.edges[*k];
            let slot = g.slot_of_edge[*k];
            let color_num = f.alpha[e.color.index()] + f.color_inc * color_count(e.color) as f64;
            let edge_num = f.beta[*k] + f.edge_inc * edge_count(*k) as f64;
            let edge_den = f.slot_beta[slot] + f.edge_inc * slot_count(slot) as f64;
            out.push((color_num / color_den) * (edge_num / edge_den));
        }
    }

    /// Simulates `n` steps with incremental counters; the result equals
    /// [`simulate_with`](super::simulate_with) on this scheme for the same
    /// generator state.
    pub fn walk(&self, x0: StateId, n: usize, rng: &mut Rng) -> Result<Path> {
        let mut w = ColoredWalk::new(self, x0);
        let mut path = Path::empty(x0);
        for _ in 0..n {
            path.push(w.step(rng)?);
        }
        Ok(path)
    }
}

impl PredictiveScheme for ColoredScheme {
    fn sufficiency(&self) -> Sufficiency {
        Sufficiency::LastAndCounts
    }

    fn next_exact(&self, history: &History) -> Result<Distribution<Rational>> {
        self.predictive(history.counts(), history.last())
    }

    fn next_float(&self, history: &History) -> Result<Distribution<f64>> {
        let i = history.last();
        let g = &self.graph;
        if !g.has_out_edges(i) {
            return Err(self.sink_error(i));
        }
        let counts = history.counts();
        let (per_color, per_slot) = self.aggregate(counts, i);
        let mut probs = Vec::new();
        self.float_probs(
            i,
            |c| per_color[&c],
            |s| per_slot[&s],
            |k| counts.get(g.edges[k].from, g.edges[k].to),
            &mut probs,
        );
        Ok(Distribution::new(
            g.out[i.index()]
                .iter()
                .zip(probs)
                .map(|(k, p)| (g.edges[*k].to, p))
                .collect(),
        ))
    }
}

/// A running colored walk with dense counters, for long simulations.
pub struct ColoredWalk<'a> {
    scheme: &'a ColoredScheme,
    current: StateId,
    steps: u64,
    color_counts: Vec<u64>,
    slot_counts: Vec<u64>,
    edge_counts: Vec<u64>,
    probs: Vec<f64>,
}

impl<'a> ColoredWalk<'a> {
    pub fn new(scheme: &'a ColoredScheme, x0: StateId) -> Self {
        let g = &scheme.graph;
        ColoredWalk {
            scheme,
            current: x0,
            steps: 0,
            color_counts: vec![0; g.colors.len()],
            slot_counts: vec![0; g.slots.len()],
            edge_counts: vec![0; g.edges.len()],
            probs: Vec::new(),
        }
    }

    pub fn current(&self) -> StateId {
        self.current
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Floating-point predictive law out of the current vertex, in the order
    /// of `out_edges(current)`.
    pub fn predictive(&mut self) -> Result<&[f64]> {
        let i = self.current;
        if !self.scheme.graph.has_out_edges(i) {
            return Err(self.scheme.sink_error(i));
        }
        let (cc, sc, ec) = (&self.color_counts, &self.slot_counts, &self.edge_counts);
        let mut probs = std::mem::take(&mut self.probs);
        self.scheme
            .float_probs(i, |c| cc[c.index()], |s| sc[s], |k| ec[k], &mut probs);
        self.probs = probs;
        Ok(&self.probs)
    }

    /// Probability of moving to `target` from the current vertex.
    pub fn prob_of(&mut self, target: StateId) -> Result<f64> {
        let i = self.current;
        let probs = self.predictive()?.to_vec();
        Ok(self
            .scheme
            .graph
            .out_edges(i)
            .zip(probs)
            .find(|(e, _)| e.to == target)
            .map(|(_, p)| p)
            .unwrap_or(0.0))
    }

    pub fn step(&mut self, rng: &mut Rng) -> Result<StateId> {
        self.predictive()?;
        let g = &self.scheme.graph;
        let pick = rng::categorical(rng, &self.probs)
            .ok_or_else(|| Error::Numeric("predictive distribution cannot be normalized".into()))?;
        let k = g.out[self.current.index()][pick];
        let e = &g.edges[k];
        self.color_counts[e.color.index()] += 1;
        self.slot_counts[g.slot_of_edge[k]] += 1;
        self.edge_counts[k] += 1;
        self.current = e.to;
        self.steps += 1;
        Ok(e.to)
    }
}
