//! The Dirichlet-mixture prior on transition matrices induced by a colored
//! walk with partitioned colors, its conjugate update, and the empirical
//! transition estimator.
//!
//! Under the prior, the color weights `P_m(c)` of each group `C_m` are
//! Dirichlet(`α_c`, `c ∈ C_m`), shared by every vertex whose color set is
//! `C_m`; the weights `P(j | i, c)` are Dirichlet(`β_{i,j}`, `j ∈ A_{i,c}`),
//! independent across `(i, c)`; and `P_{i,j} = P_m(c(i,j)) P(j | i, c(i,j))`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand_distr::{Distribution as _, Gamma};
use rayon::prelude::*;

use crate::counts::TransitionCounts;
use crate::error::{Error, Result};
use crate::exchangeability::{is_partitioned_colors, ColorPartition};
use crate::rational::{from_count, to_f64, Rational};
use crate::rng::{self, tags, Rng};
use crate::schemes::{ColorId, ColoredGraph, History, PredictiveScheme};
use crate::space::{Path, StateId, StateSpace};

/// The prior attached to a colored graph with partitioned colors and a start
/// state.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionedPrior {
    graph: ColoredGraph,
    partition: ColorPartition,
    x0: StateId,
}

impl PartitionedPrior {
    pub fn new(graph: ColoredGraph, x0: StateId) -> Result<Self> {
        if !graph.space().contains(x0) {
            return Err(Error::Input(format!(
                "start index {} outside the graph",
                x0.0
            )));
        }
        let partition = is_partitioned_colors(&graph)
            .ok_or_else(|| Error::Model("the graph's colors are not partitioned".into()))?;
        Ok(PartitionedPrior {
            graph,
            partition,
            x0,
        })
    }

    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    pub fn partition(&self) -> &ColorPartition {
        &self.partition
    }

    pub fn x0(&self) -> StateId {
        self.x0
    }

    /// Prior mean `E[P_{i,j}] = α_c/α_{C_m} · β_{i,j}/β_{i,E_c}`.
    pub fn mean(&self) -> TransitionMatrix<Rational> {
        let g = &self.graph;
        let mut m = TransitionMatrix::zeros(g.space().clone());
        for e in g.edges() {
            let v = g.alpha(e.color) / g.color_set_weight(e.from) * &e.beta
                / g.beta_color_total(e.from, e.color);
            m.set(e.from, e.to, v);
        }
        m
    }
}

/// A dense transition matrix; on a boundary-enlarged space the last index is
/// `∂`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix<T> {
    space: StateSpace,
    rows: Vec<Vec<T>>,
}

impl<T: Clone + Zero> TransitionMatrix<T> {
    pub fn zeros(space: StateSpace) -> Self {
        let n = space.len() + usize::from(space.has_boundary());
        TransitionMatrix {
            space,
            rows: vec![vec![T::zero(); n]; n],
        }
    }
}

impl<T: Clone> TransitionMatrix<T> {
    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    /// Number of rows, counting `∂` when present.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: StateId, j: StateId) -> &T {
        &self.rows[i.index()][j.index()]
    }

    pub fn set(&mut self, i: StateId, j: StateId, v: T) {
        self.rows[i.index()][j.index()] = v;
    }

    pub fn row(&self, i: StateId) -> &[T] {
        &self.rows[i.index()]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }
}

impl TransitionMatrix<f64> {
    /// `Π_k P_{x_{k-1}, x_k}`.
    pub fn path_product(&self, path: &Path) -> f64 {
        path.transitions().map(|(a, b)| *self.get(a, b)).product()
    }
}

impl TransitionMatrix<Rational> {
    pub fn to_f64(&self) -> TransitionMatrix<f64> {
        TransitionMatrix {
            space: self.space.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(to_f64).collect())
                .collect(),
        }
    }

    pub fn row_sum(&self, i: StateId) -> Rational {
        self.row(i).iter().fold(Rational::zero(), |a, x| a + x)
    }
}

/// One draw from the prior with its components.
#[derive(Clone, Debug, PartialEq)]
pub struct PriorDraw {
    /// `P_m(c)` for each group `m`.
    pub group_weights: Vec<BTreeMap<ColorId, f64>>,
    /// `P(j | i, c)` for each vertex and color leaving it.
    pub within: BTreeMap<(StateId, ColorId), Vec<(StateId, f64)>>,
    pub matrix: TransitionMatrix<f64>,
}

/// Dirichlet draw by normalized Gamma variates; one parameter gives `[1]`
/// without consuming randomness.
pub fn dirichlet(params: &[f64], rng: &mut Rng) -> Result<Vec<f64>> {
    match params.len() {
        0 => Err(Error::Model("Dirichlet over an empty set".into())),
        1 => Ok(vec![1.0]),
        _ => {
            let mut x = params
                .iter()
                .map(|a| {
                    Gamma::new(*a, 1.0)
                        .map(|g| g.sample(rng))
                        .map_err(|e| Error::Model(format!("Gamma({a}, 1): {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            let total: f64 = x.iter().sum();
            if !(total > 0.0 && total.is_finite()) {
                return Err(Error::Numeric("Dirichlet normalizer underflowed".into()));
            }
            for v in &mut x {
                *v /= total;
            }
            Ok(x)
        }
    }
}

/// Draws group weights first (groups in order, colors ascending), then the
/// within-color weights (vertices ascending, colors ascending).
pub fn sample_transition_matrix_with(prior: &PartitionedPrior, rng: &mut Rng) -> Result<PriorDraw> {
    let g = &prior.graph;
    let mut group_weights = Vec::with_capacity(prior.partition.len());
    for group in &prior.partition.groups {
        let alphas: Vec<f64> = group.iter().map(|c| to_f64(g.alpha(*c))).collect();
        let w = dirichlet(&alphas, rng)?;
        group_weights.push(group.iter().copied().zip(w).collect::<BTreeMap<_, _>>());
    }
    let mut within = BTreeMap::new();
    let mut matrix = TransitionMatrix::zeros(g.space().clone());
    for i in g.space().ids() {
        let Some(m) = prior.partition.group_of(i) else {
            continue;
        };
        for c in g.color_set(i) {
            let edges: Vec<_> = g.out_edges(i).filter(|e| e.color == *c).collect();
            if edges.is_empty() {
                return Err(Error::Model(format!(
                    "no edge of color `{}` leaves `{}`",
                    g.color(*c).name,
                    g.space().label(i)
                )));
            }
            let betas: Vec<f64> = edges.iter().map(|e| to_f64(&e.beta)).collect();
            let w = dirichlet(&betas, rng)?;
            let pc = group_weights[m][c];
            for (e, p) in edges.iter().zip(&w) {
                matrix.set(i, e.to, pc * p);
            }
            within.insert((i, *c), edges.iter().map(|e| e.to).zip(w).collect());
        }
    }
    Ok(PriorDraw {
        group_weights,
        within,
        matrix,
    })
}

/// One prior draw on the stream `[PRIOR]` of `seed`.
pub fn sample_transition_matrix(prior: &PartitionedPrior, seed: u64) -> Result<PriorDraw> {
    sample_transition_matrix_with(prior, &mut rng::stream(seed, &[tags::PRIOR]))
}

/// Conjugate update: `α'_c = α_c + T_{E_c}`, `β'_{i,j} = β_{i,j} + T_{i,j}`,
/// and the walk restarts from the last state of `path`.
pub fn posterior_update(prior: &PartitionedPrior, path: &Path) -> Result<PartitionedPrior> {
    if path.x0() != prior.x0 {
        return Err(Error::Input(format!(
            "path starts at `{}` but the prior starts at `{}`",
            prior.graph.space().label(path.x0()),
            prior.graph.space().label(prior.x0)
        )));
    }
    let counts = TransitionCounts::from_path(path);
    let one = Rational::one();
    let graph = prior.graph.reinforced(&counts, &one, &one)?;
    Ok(PartitionedPrior {
        graph,
        partition: prior.partition.clone(),
        x0: path.last(),
    })
}

/// `T̂_{i,j} = T_{i,j}/T_{i,·}` on the space enlarged with `∂`; rows without
/// transitions, and `∂` itself, put all mass on `∂`.
pub fn estimate_transition_matrix(
    path: &Path,
    space: &StateSpace,
) -> Result<TransitionMatrix<Rational>> {
    space.check_path(path)?;
    let star = space.with_boundary();
    let boundary = star.boundary().expect("enlarged space has a boundary");
    let counts = TransitionCounts::from_path(path);
    let mut m = TransitionMatrix::zeros(star);
    for i in space.ids() {
        let total = counts.row_total(i);
        if total == 0 {
            m.set(i, boundary, Rational::one());
            continue;
        }
        let t = from_count(total);
        for (j, k) in counts.row(i) {
            m.set(i, j, from_count(k) / &t);
        }
    }
    m.set(boundary, boundary, Rational::one());
    Ok(m)
}

/// `T̂_{i,j}` in floating point from counts, with no `∂` bookkeeping; `None`
/// for an unvisited row.
pub fn estimate_entry(counts: &TransitionCounts, i: StateId, j: StateId) -> Option<f64> {
    let total = counts.row_total(i);
    (total > 0).then(|| counts.get(i, j) as f64 / total as f64)
}

/// The scheme's predictive mass on `j` at every time the path sits at `i`,
/// including the final position.
pub fn successor_predictive_trace<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    path: &Path,
    i: StateId,
    j: StateId,
) -> Result<Vec<Rational>> {
    let mut history = History::new(path.x0());
    let mut out = Vec::new();
    for t in 0..=path.len() {
        if t > 0 {
            history.push(path.at(t));
        }
        if history.last() == i {
            out.push(scheme.next_exact(&history)?.get(j));
        }
    }
    Ok(out)
}

/// Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn from_sums(n: usize, sum: f64, sum_sq: f64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = ((sum_sq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
        Estimate {
            mean,
            std_error: (var / nf).sqrt(),
        }
    }

    /// `|mean - target| ≤ k · std_error`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

/// Monte Carlo estimate of `E[Π_k P_{x_{k-1},x_k}]` for each path over
/// `samples` prior draws. Draws are split into blocks of 4096; block `b` uses
/// the stream `[PRIOR, b]` of `seed`.
pub fn prior_path_moments(
    prior: &PartitionedPrior,
    paths: &[Path],
    samples: usize,
    seed: u64,
) -> Result<Vec<Estimate>> {
    const BLOCK: usize = 4096;
    let blocks = samples.div_ceil(BLOCK);
    let partial: Vec<Vec<(f64, f64)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng::stream(seed, &[tags::PRIOR, b as u64]);
            let n = BLOCK.min(samples - b * BLOCK);
            let mut acc = vec![(0.0, 0.0); paths.len()];
            for _ in 0..n {
                let draw = sample_transition_matrix_with(prior, &mut rng)?;
                for (a, p) in acc.iter_mut().zip(paths) {
                    let v = draw.matrix.path_product(p);
                    a.0 += v;
                    a.1 += v * v;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok((0..paths.len())
        .map(|k| {
            let (s, s2) = partial
                .iter()
                .fold((0.0, 0.0), |(a, b), block| (a + block[k].0, b + block[k].1));
            Estimate::from_sums(samples, s, s2)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::schemes::{
        path_probability, Color, ColoredEdge, ColoredScheme, HoppeParams, HoppeScheme,
    };

    pub(crate) fn four_vertex() -> ColoredGraph {
        let sp = StateSpace::new(["a", "b", "c", "d"]).unwrap();
        let colors = vec![
            Color {
                name: "c1".into(),
                alpha: int(1),
            },
            Color {
                name: "c2".into(),
                alpha: ratio(3, 2),
            },
            Color {
                name: "c3".into(),
                alpha: int(2),
            },
        ];
        let e = |f: u32, t: u32, c: u32, b: Rational| ColoredEdge {
            from: StateId(f),
            to: StateId(t),
            color: ColorId(c),
            beta: b,
        };
        let edges = vec![
            e(0, 1, 0, int(1)),
            e(0, 2, 1, int(1)),
            e(0, 3, 1, ratio(1, 2)),
            e(1, 0, 0, int(2)),
            e(1, 2, 1, int(1)),
            e(2, 3, 2, int(1)),
            e(2, 0, 2, int(1)),
            e(3, 0, 2, int(1)),
            e(3, 1, 2, int(1)),
        ];
        ColoredGraph::new(sp, colors, edges).unwrap()
    }

    #[test]
    fn draws_respect_structure() {
        let prior = PartitionedPrior::new(four_vertex(), StateId(0)).unwrap();
        assert_eq!(prior.partition().len(), 2);
        let mut rng = rng::stream(1, &[tags::PRIOR]);
        for _ in 0..200 {
            let d = sample_transition_matrix_with(&prior, &mut rng).unwrap();
            for i in 0..4 {
                let s: f64 = d.matrix.row(StateId(i)).iter().sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
            // a and b share group {c1, c2}: color mass agrees across rows
            let c1_a = d.matrix.get(StateId(0), StateId(1));
            let c1_b = d.matrix.get(StateId(1), StateId(0));
            assert!((c1_a - c1_b).abs() < 1e-15);
            // {c3} is a singleton group
            assert_eq!(d.group_weights[1][&ColorId(2)], 1.0);
            // b -> c is the only c2 edge out of b
            assert_eq!(d.within[&(StateId(1), ColorId(1))], vec![(StateId(2), 1.0)]);
        }
    }

    #[test]
    fn overlapping_colors_are_rejected() {
        let sp = StateSpace::new(["a", "b"]).unwrap();
        let colors = vec![
            Color {
                name: "x".into(),
                alpha: int(1),
            },
            Color {
                name: "y".into(),
                alpha: int(1),
            },
        ];
        let edges = vec![
            ColoredEdge {
                from: StateId(0),
                to: StateId(1),
                color: ColorId(0),
                beta: int(1),
            },
            ColoredEdge {
                from: StateId(0),
                to: StateId(0),
                color: ColorId(1),
                beta: int(1),
            },
            ColoredEdge {
                from: StateId(1),
                to: StateId(0),
                color: ColorId(0),
                beta: int(1),
            },
        ];
        let g = ColoredGraph::new(sp, colors, edges).unwrap();
        assert!(matches!(
            PartitionedPrior::new(g, StateId(0)),
            Err(Error::Model(_))
        ));
    }

    #[test]
    fn posterior_update_is_additive() {
        let prior = PartitionedPrior::new(four_vertex(), StateId(0)).unwrap();
        let sp = prior.graph().space().clone();
        let same = posterior_update(&prior, &Path::empty(StateId(0))).unwrap();
        assert_eq!(same, prior);
        let p = sp.path("a", &["b", "a", "c"]).unwrap();
        let post = posterior_update(&prior, &p).unwrap();
        let c1 = ColorId(0);
        assert_eq!(post.graph().alpha(c1), &int(3));
        assert_eq!(
            post.graph().edge(StateId(0), StateId(1)).unwrap().beta,
            int(2)
        );
        assert_eq!(post.x0(), sp.id("c").unwrap());
        let (head, tail) = p.split_at(1);
        let two = posterior_update(&posterior_update(&prior, &head).unwrap(), &tail).unwrap();
        assert_eq!(two, post);
        let bad = sp.path("a", &["b", "d"]).unwrap();
        assert_eq!(
            posterior_update(&prior, &bad).unwrap_err(),
            Error::Input("missing edge (b, d)".into())
        );
        assert!(posterior_update(&prior, &Path::empty(StateId(1))).is_err());
    }

    #[test]
    fn prior_mean_is_the_first_predictive() {
        let prior = PartitionedPrior::new(four_vertex(), StateId(0)).unwrap();
        let s = ColoredScheme::new(prior.graph().clone());
        let m = prior.mean();
        for i in prior.graph().space().ids() {
            let d = s.next_exact(&History::new(i)).unwrap();
            for j in prior.graph().space().ids() {
                assert_eq!(m.get(i, j), &d.get(j));
            }
            assert!(m.row_sum(i).is_one());
        }
    }

    #[test]
    fn estimator_with_boundary() {
        let sp = StateSpace::integers(3).unwrap();
        let p = sp.path("0", &["1", "0", "1"]).unwrap();
        let m = estimate_transition_matrix(&p, &sp).unwrap();
        assert_eq!(m.dim(), 4);
        let d = m.space().boundary().unwrap();
        assert_eq!(m.row(StateId(0)), &[int(0), int(1), int(0), int(0)]);
        assert_eq!(m.row(StateId(1)), &[int(1), int(0), int(0), int(0)]);
        assert_eq!(m.get(StateId(2), d), &int(1));
        assert_eq!(m.get(d, d), &int(1));
        let e = estimate_transition_matrix(&Path::empty(StateId(0)), &sp).unwrap();
        for i in 0..4 {
            assert_eq!(e.get(StateId(i), d), &int(1));
        }
    }

    #[test]
    fn hoppe_successor_trace_reads_only_successors() {
        let sp = StateSpace::integers(3).unwrap();
        let params = HoppeParams::uniform(&sp, int(2)).unwrap();
        let s = HoppeScheme::new(params);
        let p = sp.path("0", &["1", "0", "2", "2", "0", "0", "1"]).unwrap();
        let t = successor_predictive_trace(&s, &p, StateId(0), StateId(1)).unwrap();
        // successors of 0: 1, 2, 0, 1; the trace has one entry per visit
        let succ = [1u32, 2, 0];
        let mut hits = 0;
        for (n, v) in t.iter().enumerate() {
            assert_eq!(v, &((ratio(2, 3) + int(hits)) / (int(2) + int(n as i64))));
            if n < succ.len() && succ[n] == 1 {
                hits += 1;
            }
        }
        assert_eq!(t.len(), 4);
        assert!(
            successor_predictive_trace(&s, &Path::empty(StateId(0)), StateId(2), StateId(1))
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn prior_moments_match_path_probabilities() {
        let prior = PartitionedPrior::new(four_vertex(), StateId(0)).unwrap();
        let sp = prior.graph().space().clone();
        let s = ColoredScheme::new(prior.graph().clone());
        let paths = vec![
            sp.path("a", &["b", "a", "b"]).unwrap(),
            sp.path("a", &["c", "d", "a", "c"]).unwrap(),
        ];
        let est = prior_path_moments(&prior, &paths, 20_000, 4).unwrap();
        for (p, e) in paths.iter().zip(est) {
            let exact = to_f64(&path_probability(&s, p).unwrap());
            assert!(e.within(exact, 4.0), "{exact} vs {e:?}");
        }
    }
}
