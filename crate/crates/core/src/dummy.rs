//! Dummy states: edges `(i, j)` of a colored graph are given extra routes
//! `i → i* → j` through auxiliary states, and the walk on the augmented graph
//! is observed with the auxiliary states deleted.

use std::collections::BTreeMap;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bayes::{posterior_update, PartitionedPrior, TransitionMatrix};
use crate::counts::TransitionCounts;
use crate::enumerate::Budget;
use crate::error::{Error, Result};
use crate::exchangeability::is_partitioned_colors;
use crate::rational::{factorial, Rational};
use crate::rng::{self, tags, Rng};
use crate::schemes::{path_probability, ColorId, ColoredEdge, ColoredGraph, ColoredScheme};
use crate::space::{Path, StateId, StateSpace};

/// `count` dummy states on the edge `(from, to)`; the edges `(from, i*)` and
/// `(i*, to)` get the given colors and weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DummyPlacement {
    pub from: StateId,
    pub to: StateId,
    pub count: usize,
    pub in_color: ColorId,
    pub out_color: ColorId,
    pub in_beta: Rational,
    pub out_beta: Rational,
}

#[derive(Clone, Debug)]
pub struct AugmentedGraph {
    base: ColoredGraph,
    full: ColoredGraph,
    /// `I*_{i,j}` in the ids of the full graph.
    dummies: BTreeMap<(StateId, StateId), Vec<StateId>>,
    /// For each dummy state, the edge it sits on.
    origin: BTreeMap<StateId, (StateId, StateId)>,
}

/// Builds `G*`. Base states keep their ids and dummies are appended with
/// labels `i*j.k`. With `require_partitioned`, fails unless `G*` has
/// partitioned colors.
pub fn augment(
    base: &ColoredGraph,
    placements: &[DummyPlacement],
    require_partitioned: bool,
) -> Result<AugmentedGraph> {
    let sp = base.space();
    let mut labels: Vec<String> = sp.labels().to_vec();
    let mut edges: Vec<ColoredEdge> = base.edges().to_vec();
    let mut dummies: BTreeMap<(StateId, StateId), Vec<StateId>> = BTreeMap::new();
    let mut origin = BTreeMap::new();
    for p in placements {
        if !sp.contains(p.from) || !sp.contains(p.to) || base.edge(p.from, p.to).is_none() {
            return Err(Error::Input(format!(
                "dummy placement on a missing edge ({}, {})",
                label_or_index(sp, p.from),
                label_or_index(sp, p.to)
            )));
        }
        if dummies.contains_key(&(p.from, p.to)) {
            return Err(Error::Input(format!(
                "edge ({}, {}) has two dummy placements",
                sp.label(p.from),
                sp.label(p.to)
            )));
        }
        let mut ids = Vec::with_capacity(p.count);
        for k in 1..=p.count {
            let label = format!("{}*{}.{}", sp.label(p.from), sp.label(p.to), k);
            if labels.contains(&label) {
                return Err(Error::Input(format!(
                    "dummy label `{label}` collides with a state"
                )));
            }
            let id = StateId(labels.len() as u32);
            labels.push(label);
            edges.push(ColoredEdge {
                from: p.from,
                to: id,
                color: p.in_color,
                beta: p.in_beta.clone(),
            });
            edges.push(ColoredEdge {
                from: id,
                to: p.to,
                color: p.out_color,
                beta: p.out_beta.clone(),
            });
            origin.insert(id, (p.from, p.to));
            ids.push(id);
        }
        dummies.insert((p.from, p.to), ids);
    }
    let full = ColoredGraph::new(StateSpace::new(labels)?, base.colors().to_vec(), edges)?;
    if require_partitioned && is_partitioned_colors(&full).is_none() {
        return Err(Error::Model(
            "the augmented graph's colors are not partitioned".into(),
        ));
    }
    Ok(AugmentedGraph {
        base: base.clone(),
        full,
        dummies,
        origin,
    })
}

fn label_or_index(space: &StateSpace, id: StateId) -> String {
    if space.contains(id) {
        space.label(id).to_string()
    } else {
        format!("#{}", id.0)
    }
}

impl AugmentedGraph {
    pub fn base(&self) -> &ColoredGraph {
        &self.base
    }

    pub fn full(&self) -> &ColoredGraph {
        &self.full
    }

    /// `I*_{i,j}`, empty when the edge carries no dummies.
    pub fn dummies_on(&self, i: StateId, j: StateId) -> &[StateId] {
        self.dummies.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dummy_sets(&self) -> &BTreeMap<(StateId, StateId), Vec<StateId>> {
        &self.dummies
    }

    pub fn is_dummy(&self, s: StateId) -> bool {
        self.origin.contains_key(&s)
    }

    /// Deletes dummy states.
    pub fn project(&self, path: &Path) -> Path {
        Path::new(
            path.x0(),
            path.steps()
                .iter()
                .copied()
                .filter(|s| !self.is_dummy(*s))
                .collect(),
        )
    }

    /// The walk on `G*`.
    pub fn scheme(&self) -> ColoredScheme {
        ColoredScheme::new(self.full.clone())
    }

    fn options(&self, i: StateId, j: StateId) -> Vec<StateId> {
        let mut o = vec![j];
        o.extend_from_slice(self.dummies_on(i, j));
        o
    }

    fn check_path(&self, x: &Path) -> Result<()> {
        self.base.space().check_path(x)
    }

    /// `|A(x0, x)| = Π_t (1 + |I*_{x_{t-1}, x_t}|)`.
    pub fn completion_count(&self, x: &Path) -> BigUint {
        x.transitions()
            .map(|(i, j)| BigUint::from(1 + self.dummies_on(i, j).len()))
            .product()
    }
}

fn build(x0: StateId, slots: &[(StateId, StateId)], choice: &[StateId]) -> Path {
    let mut p = Path::empty(x0);
    for ((_, j), c) in slots.iter().zip(choice) {
        if c != j {
            p.push(*c);
        }
        p.push(*j);
    }
    p
}

/// Every string on `S*` that projects to `x`, in odometer order over the
/// transitions of `x` (direct route first, then dummies by id).
pub fn consistent_strings(aug: &AugmentedGraph, x: &Path, budget: Budget) -> Result<Vec<Path>> {
    aug.check_path(x)?;
    let total = aug.completion_count(x);
    if total > BigUint::from(budget.0) {
        return Err(Error::Budget {
            needed: format!("{total} consistent strings"),
            budget: budget.0,
        });
    }
    let slots: Vec<(StateId, StateId)> = x.transitions().collect();
    let options: Vec<Vec<StateId>> = slots.iter().map(|(i, j)| aug.options(*i, *j)).collect();
    let mut idx = vec![0usize; slots.len()];
    let mut out = Vec::new();
    loop {
        let choice: Vec<StateId> = idx.iter().zip(&options).map(|(k, o)| o[*k]).collect();
        out.push(build(x.x0(), &slots, &choice));
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `N_m = Π T! / ((T - Σ m)! Π m!)` over blocks `(T_{i,j}, m over I*_{i,j})`.
pub fn class_size(blocks: &[(u64, Vec<u64>)]) -> Result<BigUint> {
    let mut n = BigUint::one();
    for (t, m) in blocks {
        let used: u64 = m.iter().sum();
        if used > *t {
            return Err(Error::Input(format!(
                "dummy visits {used} exceed the {t} crossings of their edge"
            )));
        }
        let mut den = factorial(t - used);
        for k in m {
            den *= factorial(*k);
        }
        n *= factorial(*t) / den;
    }
    Ok(n)
}

/// Completions sharing the visit counts `m` of every dummy state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionClass {
    pub m: BTreeMap<StateId, u64>,
    /// The lexicographically first member.
    pub representative: Path,
    pub size: BigUint,
}

/// All vectors of `d` non-negative integers with sum at most `t`.
fn compositions(d: usize, t: u64) -> Vec<Vec<u64>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=t {
        for mut rest in compositions(d - 1, t - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> BigUint {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// The classes `A_m` of completions of `x`.
pub fn completion_classes(
    aug: &AugmentedGraph,
    x: &Path,
    budget: Budget,
) -> Result<Vec<CompletionClass>> {
    aug.check_path(x)?;
    let counts = TransitionCounts::from_path(x);
    let edges: Vec<((StateId, StateId), u64, &[StateId])> = aug
        .dummies
        .iter()
        .filter(|(_, ids)| !ids.is_empty())
        .map(|(e, ids)| (*e, counts.get(e.0, e.1), ids.as_slice()))
        .filter(|(_, t, _)| *t > 0)
        .collect();
    let n_classes: BigUint = edges
        .iter()
        .map(|(_, t, ids)| binomial(t + ids.len() as u64, ids.len() as u64))
        .product();
    if n_classes > BigUint::from(budget.0) {
        return Err(Error::Budget {
            needed: format!("{n_classes} completion classes"),
            budget: budget.0,
        });
    }
    let per_edge: Vec<Vec<Vec<u64>>> = edges
        .iter()
        .map(|(_, t, ids)| compositions(ids.len(), *t))
        .collect();
    let slots: Vec<(StateId, StateId)> = x.transitions().collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; edges.len()];
    loop {
        let mut m = BTreeMap::new();
        let mut blocks = Vec::new();
        for (k, (_, t, ids)) in edges.iter().enumerate() {
            let mk = &per_edge[k][idx[k]];
            for (id, v) in ids.iter().zip(mk) {
                m.insert(*id, *v);
            }
            blocks.push((*t, mk.clone()));
        }
        let size = class_size(&blocks)?;
        out.push(CompletionClass {
            representative: first_member(aug, x.x0(), &slots, &m),
            m,
            size,
        });
        let mut pos = edges.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_edge[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Greedy lexicographic minimum: the direct route whenever the remaining
/// crossings can still host the remaining dummy visits, else the
/// smallest-id dummy with visits left.
fn first_member(
    aug: &AugmentedGraph,
    x0: StateId,
    slots: &[(StateId, StateId)],
    m: &BTreeMap<StateId, u64>,
) -> Path {
    let mut left = m.clone();
    let mut remaining: BTreeMap<(StateId, StateId), u64> = BTreeMap::new();
    for s in slots {
        *remaining.entry(*s).or_insert(0) += 1;
    }
    let mut choice = Vec::with_capacity(slots.len());
    for (i, j) in slots {
        let r = remaining.get_mut(&(*i, *j)).unwrap();
        *r -= 1;
        let ids = aug.dummies_on(*i, *j);
        let owed: u64 = ids.iter().map(|d| left.get(d).copied().unwrap_or(0)).sum();
        if owed <= *r {
            choice.push(*j);
        } else {
            let d = *ids
                .iter()
                .find(|d| left.get(d).copied().unwrap_or(0) > 0)
                .unwrap();
            *left.get_mut(&d).unwrap() -= 1;
            choice.push(d);
        }
    }
    build(x0, slots, &choice)
}

fn uses_only_edges(aug: &AugmentedGraph, x: &Path) -> bool {
    x.transitions().all(|(i, j)| aug.base.edge(i, j).is_some())
}

/// `p(x) = Σ_m p*(x*_m) N_m`.
pub fn marginal_probability(aug: &AugmentedGraph, x: &Path, budget: Budget) -> Result<Rational> {
    aug.check_path(x)?;
    if !uses_only_edges(aug, x) {
        return Ok(Rational::zero());
    }
    let scheme = aug.scheme();
    let mut total = Rational::zero();
    for c in completion_classes(aug, x, budget)? {
        let p = path_probability(&scheme, &c.representative)?;
        total += p * Rational::from_integer(c.size.into());
    }
    Ok(total)
}

/// `p(x) = Σ_{x* ∈ A(x0, x)} p*(x*)`.
pub fn marginal_probability_enumerated(
    aug: &AugmentedGraph,
    x: &Path,
    budget: Budget,
) -> Result<Rational> {
    aug.check_path(x)?;
    if !uses_only_edges(aug, x) {
        return Ok(Rational::zero());
    }
    let scheme = aug.scheme();
    let mut total = Rational::zero();
    for s in consistent_strings(aug, x, budget)? {
        total += path_probability(&scheme, &s)?;
    }
    Ok(total)
}

/// Exact `p(x* | x)` for every completion of `x`, in odometer order.
pub fn completion_posterior(
    aug: &AugmentedGraph,
    x: &Path,
    budget: Budget,
) -> Result<Vec<(Path, Rational)>> {
    let scheme = aug.scheme();
    let strings = consistent_strings(aug, x, budget)?;
    let probs = strings
        .iter()
        .map(|s| path_probability(&scheme, s))
        .collect::<Result<Vec<_>>>()?;
    let total = probs.iter().fold(Rational::zero(), |a, p| a + p);
    if total.is_zero() {
        return Err(Error::Input(
            "the observed path has probability zero".into(),
        ));
    }
    Ok(strings
        .into_iter()
        .zip(probs)
        .map(|(s, p)| (s, p / &total))
        .collect())
}

/// Folds dummy mass back: `P_{i,j} = P*_{i,j} + Σ_{i* ∈ I*_{i,j}} P*_{i,i*}`.
pub fn induced_transition<T>(
    aug: &AugmentedGraph,
    p_star: &TransitionMatrix<T>,
) -> TransitionMatrix<T>
where
    T: Clone + Zero + Add<Output = T>,
{
    let sp = aug.base.space();
    let mut p = TransitionMatrix::zeros(sp.clone());
    for i in sp.ids() {
        for j in sp.ids() {
            let v = aug
                .dummies_on(i, j)
                .iter()
                .fold(p_star.get(i, j).clone(), |acc, d| {
                    acc + p_star.get(i, *d).clone()
                });
            p.set(i, j, v);
        }
    }
    p
}

/// Posterior prior on `G*` after observing a completion.
pub fn completion_update(prior: &PartitionedPrior, completion: &Path) -> Result<PartitionedPrior> {
    posterior_update(prior, completion)
}

#[derive(Clone, Debug)]
pub struct GibbsConfig {
    pub sweeps: usize,
    /// Defaults to ten sweeps per unknown successor.
    pub burn_in: Option<usize>,
    pub seed: u64,
    pub chain: u64,
}

impl GibbsConfig {
    pub fn new(sweeps: usize, seed: u64) -> Self {
        GibbsConfig {
            sweeps,
            burn_in: None,
            seed,
            chain: 0,
        }
    }
}

/// Completions recorded after each post-burn-in sweep.
#[derive(Clone, Debug)]
pub struct GibbsRun {
    pub burn_in: usize,
    pub samples: Vec<Path>,
}

impl GibbsRun {
    pub fn frequencies(&self) -> BTreeMap<Path, u64> {
        let mut f = BTreeMap::new();
        for s in &self.samples {
            *f.entry(s.clone()).or_insert(0) += 1;
        }
        f
    }
}

/// Systematic-scan Gibbs sampler over the unknown successors of `x`.
///
/// Each transition `(i, j)` of `x` on an edge with dummies is a slot whose
/// value ranges over `{j} ∪ I*_{i,j}`. A slot is resampled from the walk's
/// predictive at `i` given the counts of all other transitions; the
/// augmented graph must have partitioned colors. The chain starts from the
/// all-direct completion on the stream `[GIBBS, chain]` of the seed.
pub fn gibbs_successors(aug: &AugmentedGraph, x: &Path, config: &GibbsConfig) -> Result<GibbsRun> {
    aug.check_path(x)?;
    if !uses_only_edges(aug, x) {
        return Err(Error::Input("the observed path leaves the graph".into()));
    }
    if is_partitioned_colors(&aug.full).is_none() {
        return Err(Error::Model(
            "the augmented graph's colors are not partitioned".into(),
        ));
    }
    let mut rng = rng::stream(config.seed, &[tags::GIBBS, config.chain]);
    let scheme = aug.scheme();
    let slots: Vec<(StateId, StateId)> = x.transitions().collect();
    let unknown: Vec<usize> = (0..slots.len())
        .filter(|k| !aug.dummies_on(slots[*k].0, slots[*k].1).is_empty())
        .collect();
    let burn_in = config.burn_in.unwrap_or(10 * unknown.len());
    let mut choice: Vec<StateId> = slots.iter().map(|(_, j)| *j).collect();
    let mut counts = TransitionCounts::from_path(x);
    let mut samples = Vec::with_capacity(config.sweeps);
    for sweep in 0..burn_in + config.sweeps {
        for &k in &unknown {
            let (i, j) = slots[k];
            gibbs_update(aug, &scheme, &mut counts, i, j, &mut choice[k], &mut rng)?;
        }
        if sweep >= burn_in {
            samples.push(build(x.x0(), &slots, &choice));
        }
    }
    Ok(GibbsRun { burn_in, samples })
}

fn gibbs_update(
    aug: &AugmentedGraph,
    scheme: &ColoredScheme,
    counts: &mut TransitionCounts,
    i: StateId,
    j: StateId,
    current: &mut StateId,
    rng: &mut Rng,
) -> Result<()> {
    counts.remove(i, *current, 1);
    if *current != j {
        counts.remove(*current, j, 1);
    }
    let options = aug.options(i, j);
    let d = scheme.predictive(counts, i)?;
    let weights: Vec<f64> = options
        .iter()
        .map(|k| crate::rational::to_f64(&d.get(*k)))
        .collect();
    let pick = rng::categorical(rng, &weights)
        .ok_or_else(|| Error::Numeric("Gibbs full conditional cannot be normalized".into()))?;
    *current = options[pick];
    counts.add(i, *current, 1);
    if *current != j {
        counts.add(*current, j, 1);
    }
    Ok(())
}

/// The loop-inflation construction on a monochromatic graph: one dummy per
/// vertex on its loop, with `c_in` on `(i, i*)` and `c_out` on `(i*, i)`.
pub fn loop_dummies(base: &ColoredGraph, c_in: ColorId, c_out: ColorId) -> Vec<DummyPlacement> {
    base.space()
        .ids()
        .filter(|i| base.edge(*i, *i).is_some())
        .map(|i| DummyPlacement {
            from: i,
            to: i,
            count: 1,
            in_color: c_in,
            out_color: c_out,
            in_beta: Rational::one(),
            out_beta: Rational::one(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::sample_transition_matrix_with;
    use crate::is_equivalent;
    use crate::rational::{int, to_f64};
    use crate::schemes::Color;

    /// Base `{0, 1}`: `(0,1)`, `(1,0)` of color `c1`, loops of color `c2`,
    /// one dummy on `(0,1)` entered through `c2` and left through `c3`.
    pub(crate) fn inequality_instance() -> AugmentedGraph {
        let sp = StateSpace::integers(2).unwrap();
        let colors = ["c1", "c2", "c3"]
            .iter()
            .map(|n| Color {
                name: n.to_string(),
                alpha: int(1),
            })
            .collect();
        let e = |f: u32, t: u32, c: u32| ColoredEdge {
            from: StateId(f),
            to: StateId(t),
            color: ColorId(c),
            beta: int(1),
        };
        let g = ColoredGraph::new(
            sp,
            colors,
            vec![e(0, 1, 0), e(1, 0, 0), e(1, 1, 1), e(0, 0, 1)],
        )
        .unwrap();
        let placement = DummyPlacement {
            from: StateId(0),
            to: StateId(1),
            count: 1,
            in_color: ColorId(1),
            out_color: ColorId(2),
            in_beta: int(1),
            out_beta: int(1),
        };
        augment(&g, &[placement], true).unwrap()
    }

    fn loop_instance() -> AugmentedGraph {
        let sp = StateSpace::integers(3).unwrap();
        let colors = ["c1", "c2", "c3"]
            .iter()
            .map(|n| Color {
                name: n.to_string(),
                alpha: int(1),
            })
            .collect();
        let mut edges = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                edges.push(ColoredEdge {
                    from: StateId(i),
                    to: StateId(j),
                    color: ColorId(0),
                    beta: int(1),
                });
            }
        }
        let g = ColoredGraph::new(sp, colors, edges).unwrap();
        let p = loop_dummies(&g, ColorId(1), ColorId(2));
        augment(&g, &p, true).unwrap()
    }

    #[test]
    fn empty_placement_keeps_the_graph() {
        let aug = inequality_instance();
        let plain = augment(aug.base(), &[], true).unwrap();
        assert_eq!(plain.full(), aug.base());
    }

    #[test]
    fn loop_construction_is_partitioned() {
        let aug = loop_instance();
        let p = is_partitioned_colors(aug.full()).unwrap();
        assert_eq!(
            p.groups,
            vec![
                [ColorId(0), ColorId(1)].into_iter().collect(),
                [ColorId(2)].into_iter().collect()
            ]
        );
        for ids in aug.dummy_sets().values() {
            for d in ids {
                assert_eq!(aug.full().out_edges(*d).count(), 1);
            }
        }
    }

    #[test]
    fn placement_errors() {
        let aug = inequality_instance();
        let bad = DummyPlacement {
            from: StateId(1),
            to: StateId(0),
            count: 2,
            in_color: ColorId(0),
            out_color: ColorId(2),
            in_beta: int(1),
            out_beta: int(1),
        };
        let two = augment(aug.base(), std::slice::from_ref(&bad), false).unwrap();
        assert_eq!(two.dummies_on(StateId(1), StateId(0)).len(), 2);
        let missing = DummyPlacement {
            from: StateId(0),
            to: StateId(5),
            ..bad
        };
        assert!(matches!(
            augment(aug.base(), &[missing], false),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn completions_of_a_double_crossing() {
        let aug = inequality_instance();
        let sp = aug.base().space().clone();
        let x = sp.path("0", &["1", "0", "1"]).unwrap();
        let all = consistent_strings(&aug, &x, Budget::default()).unwrap();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|s| aug.project(s) == x));
        let classes = completion_classes(&aug, &x, Budget::default()).unwrap();
        let sizes: Vec<u64> = classes
            .iter()
            .map(|c| u64::try_from(&c.size).unwrap())
            .collect();
        assert_eq!(sizes, vec![1, 2, 1]);
        assert_eq!(classes[0].representative, x);
        let fs = aug.full().space();
        assert_eq!(
            fs.format_path(&classes[1].representative),
            "(0,1,0,0*1.1,1)"
        );
        let grouped = marginal_probability(&aug, &x, Budget::default()).unwrap();
        let full = marginal_probability_enumerated(&aug, &x, Budget::default()).unwrap();
        assert_eq!(grouped, full);
        assert!(grouped > int(0));
        let y = sp.path("0", &["1", "1"]).unwrap();
        assert_eq!(
            consistent_strings(&aug, &y, Budget::default())
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn class_sizes() {
        assert_eq!(class_size(&[(5, vec![0, 0])]).unwrap(), BigUint::one());
        assert_eq!(class_size(&[(2, vec![1])]).unwrap(), BigUint::from(2u32));
        assert_eq!(class_size(&[(3, vec![1, 1])]).unwrap(), BigUint::from(6u32));
        assert!(class_size(&[(1, vec![1, 1])]).is_err());
    }

    #[test]
    fn no_dummies_on_the_path() {
        let aug = inequality_instance();
        let sp = aug.base().space().clone();
        let x = sp.path("0", &["0", "0"]).unwrap();
        let p = marginal_probability(&aug, &x, Budget::default()).unwrap();
        assert_eq!(p, path_probability(&aug.scheme(), &x).unwrap());
        let run = gibbs_successors(&aug, &x, &GibbsConfig::new(20, 1)).unwrap();
        assert!(run.samples.iter().all(|s| *s == x));
    }

    #[test]
    fn projection_is_exchangeable() {
        let aug = loop_instance();
        let sp = aug.base().space().clone();
        let a = sp.path("0", &["1", "0", "0", "1"]).unwrap();
        let b = sp.path("0", &["0", "1", "0", "1"]).unwrap();
        assert!(is_equivalent(&a, &b));
        let pa = marginal_probability(&aug, &a, Budget::default()).unwrap();
        let pb = marginal_probability(&aug, &b, Budget::default()).unwrap();
        assert_eq!(pa, pb);
        assert_eq!(
            pa,
            marginal_probability_enumerated(&aug, &a, Budget::default()).unwrap()
        );
    }

    #[test]
    fn induced_rows_and_inequality() {
        let aug = inequality_instance();
        let prior = PartitionedPrior::new(aug.full().clone(), StateId(0)).unwrap();
        let mut rng = rng::stream(2, &[tags::PRIOR]);
        for _ in 0..500 {
            let d = sample_transition_matrix_with(&prior, &mut rng).unwrap();
            let p = induced_transition(&aug, &d.matrix);
            for i in 0..2 {
                let s: f64 = p.row(StateId(i)).iter().sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
            assert!(p.get(StateId(0), StateId(1)) > p.get(StateId(1), StateId(0)));
        }
        let mean = induced_transition(&aug, &prior.mean());
        assert_eq!(mean.row_sum(StateId(0)), int(1));
    }

    #[test]
    fn gibbs_matches_enumeration_on_a_small_instance() {
        let aug = inequality_instance();
        let sp = aug.base().space().clone();
        let x = sp.path("0", &["1", "0", "1"]).unwrap();
        let exact = completion_posterior(&aug, &x, Budget::default()).unwrap();
        let run = gibbs_successors(&aug, &x, &GibbsConfig::new(20_000, 7)).unwrap();
        let f = run.frequencies();
        let tv: f64 = exact
            .iter()
            .map(|(s, p)| (f.get(s).copied().unwrap_or(0) as f64 / 20_000.0 - to_f64(p)).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.05, "tv = {tv}");
    }
}
