//! Predictive schemes: rules mapping an observed history to the law of the
//! next state, and the exact path probabilities they induce through the chain
//! rule.

mod colored;
mod counterexample;
mod errw;
mod hoppe;
mod table;

pub use colored::{
    colored_predictive, Color, ColorId, ColoredEdge, ColoredGraph, ColoredScheme, ColoredWalk,
};
pub use counterexample::{counterexample_scheme, CounterexampleScheme};
pub use errw::{errw_predictive, ErrwParams, ErrwScheme};
pub use hoppe::{hoppe_pi, hoppe_predictive, HoppeParams, HoppeScheme, HoppeUrn};
pub use table::{Fallback, TableKey, TableScheme};

use num_traits::{One, Zero};

use crate::counts::TransitionCounts;
use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};
use crate::rng::{self, Rng};
use crate::space::{Path, StateId};

/// Which summary of the history a scheme actually reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sufficiency {
    /// The whole trajectory.
    FullHistory,
    /// The last state and the full transition-count table.
    LastAndCounts,
    /// The last state and the transition counts out of it.
    LastAndRow,
}

impl Sufficiency {
    pub fn name(self) -> &'static str {
        match self {
            Sufficiency::FullHistory => "full",
            Sufficiency::LastAndCounts => "last_counts",
            Sufficiency::LastAndRow => "last_row",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Sufficiency::FullHistory),
            "last_counts" => Ok(Sufficiency::LastAndCounts),
            "last_row" => Ok(Sufficiency::LastAndRow),
            other => Err(Error::Input(format!("unknown sufficiency `{other}`"))),
        }
    }
}

/// A trajectory together with its running transition counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct History {
    path: Path,
    counts: TransitionCounts,
}

impl History {
    pub fn new(x0: StateId) -> Self {
        History {
            path: Path::empty(x0),
            counts: TransitionCounts::empty(x0),
        }
    }

    pub fn from_path(path: &Path) -> Self {
        History {
            path: path.clone(),
            counts: TransitionCounts::from_path(path),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn counts(&self) -> &TransitionCounts {
        &self.counts
    }

    pub fn x0(&self) -> StateId {
        self.path.x0()
    }

    pub fn last(&self) -> StateId {
        self.path.last()
    }

    /// Number of steps taken so far.
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn push(&mut self, s: StateId) {
        self.path.push(s);
        self.counts.push(s);
    }

    pub fn pop(&mut self) -> Option<StateId> {
        let s = self.path.pop()?;
        self.counts.pop(self.path.last());
        Some(s)
    }
}

/// A finitely supported distribution, sorted by state with zero entries
/// dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<P> {
    entries: Vec<(StateId, P)>,
}

impl<P: Clone + Zero> Distribution<P> {
    pub fn new(mut entries: Vec<(StateId, P)>) -> Self {
        entries.retain(|(_, p)| !p.is_zero());
        entries.sort_by_key(|(s, _)| *s);
        Distribution { entries }
    }

    pub fn point(s: StateId) -> Self
    where
        P: One,
    {
        Distribution {
            entries: vec![(s, P::one())],
        }
    }

    pub fn get(&self, s: StateId) -> P {
        self.entries
            .binary_search_by_key(&s, |(t, _)| *t)
            .map(|k| self.entries[k].1.clone())
            .unwrap_or_else(|_| P::zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, &P)> {
        self.entries.iter().map(|(s, p)| (*s, p))
    }

    pub fn support(&self) -> impl Iterator<Item = StateId> + '_ {
        self.entries.iter().map(|(s, _)| *s)
    }

    pub fn total(&self) -> P {
        self.entries
            .iter()
            .fold(P::zero(), |acc, (_, p)| acc + p.clone())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Distribution<Rational> {
    pub fn to_f64(&self) -> Distribution<f64> {
        Distribution::new(self.entries.iter().map(|(s, p)| (*s, to_f64(p))).collect())
    }

    /// Non-negative with total exactly one.
    pub fn is_normalized(&self) -> bool {
        self.entries.iter().all(|(_, p)| *p >= Rational::zero()) && self.total().is_one()
    }
}

impl Distribution<f64> {
    pub fn is_normalized(&self, tol: f64) -> bool {
        self.entries.iter().all(|(_, p)| *p >= 0.0) && (self.total() - 1.0).abs() <= tol
    }
}

/// A rule giving the law of the next state from the history so far.
pub trait PredictiveScheme: Send + Sync {
    /// The summary of the history this scheme reads.
    fn sufficiency(&self) -> Sufficiency;

    /// Exact next-state law.
    fn next_exact(&self, history: &History) -> Result<Distribution<Rational>>;

    /// Floating-point next-state law, used for long simulations.
    fn next_float(&self, history: &History) -> Result<Distribution<f64>> {
        Ok(self.next_exact(history)?.to_f64())
    }
}

impl<T: PredictiveScheme + ?Sized> PredictiveScheme for Box<T> {
    fn sufficiency(&self) -> Sufficiency {
        (**self).sufficiency()
    }
    fn next_exact(&self, history: &History) -> Result<Distribution<Rational>> {
        (**self).next_exact(history)
    }
    fn next_float(&self, history: &History) -> Result<Distribution<f64>> {
        (**self).next_float(history)
    }
}

impl<T: PredictiveScheme + ?Sized> PredictiveScheme for &T {
    fn sufficiency(&self) -> Sufficiency {
        (**self).sufficiency()
    }
    fn next_exact(&self, history: &History) -> Result<Distribution<Rational>> {
        (**self).next_exact(history)
    }
    fn next_float(&self, history: &History) -> Result<Distribution<f64>> {
        (**self).next_float(history)
    }
}

/// The same law at every step, whatever the history.
#[derive(Clone, Debug)]
pub struct FixedScheme {
    dist: Distribution<Rational>,
}

impl FixedScheme {
    pub fn new(dist: Distribution<Rational>) -> Result<Self> {
        if !dist.is_normalized() {
            return Err(Error::Model("fixed distribution must sum to one".into()));
        }
        Ok(FixedScheme { dist })
    }

    pub fn point(s: StateId) -> Self {
        FixedScheme {
            dist: Distribution::point(s),
        }
    }
}

impl PredictiveScheme for FixedScheme {
    fn sufficiency(&self) -> Sufficiency {
        Sufficiency::LastAndRow
    }
    fn next_exact(&self, _history: &History) -> Result<Distribution<Rational>> {
        Ok(self.dist.clone())
    }
}

/// `p(y_1, ..., y_m | history)` by the chain rule; `history` is restored
/// before returning.
pub fn conditional_probability<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    history: &mut History,
    y: &[StateId],
) -> Result<Rational> {
    let mut prob = Rational::one();
    let mut pushed = 0;
    let mut result = Ok(());
    for s in y {
        match scheme.next_exact(history) {
            Ok(d) => {
                let p = d.get(*s);
                if p.is_zero() {
                    prob = Rational::zero();
                    break;
                }
                prob *= p;
                history.push(*s);
                pushed += 1;
            }
            Err(e) => {
                result = Err(e);
                break;
            }
        }
    }
    for _ in 0..pushed {
        history.pop();
    }
    result.map(|_| prob)
}

/// Exact probability of `path`; the empty path has probability one.
pub fn path_probability<S: PredictiveScheme + ?Sized>(scheme: &S, path: &Path) -> Result<Rational> {
    let mut h = History::new(path.x0());
    conditional_probability(scheme, &mut h, path.steps())
}

/// Natural log of the probability of `path` in floating point;
/// `-inf` for impossible paths.
pub fn path_log_probability<S: PredictiveScheme + ?Sized>(scheme: &S, path: &Path) -> Result<f64> {
    let mut h = History::new(path.x0());
    let mut log_p = 0.0;
    for s in path.steps() {
        let p = scheme.next_float(&h)?.get(*s);
        if p <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        log_p += p.ln();
        h.push(*s);
    }
    Ok(log_p)
}

/// Draws the next state from a floating-point law.
pub fn sample_next(rng: &mut Rng, dist: &Distribution<f64>) -> Result<StateId> {
    let weights: Vec<f64> = dist.iter().map(|(_, p)| *p).collect();
    rng::categorical(rng, &weights)
        .map(|k| dist.entries[k].0)
        .ok_or_else(|| Error::Numeric("predictive distribution cannot be normalized".into()))
}

/// Runs `n` steps of `scheme` from `history`, drawing from `rng`.
pub fn extend<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    history: &mut History,
    n: usize,
    rng: &mut Rng,
) -> Result<()> {
    for _ in 0..n {
        let d = scheme.next_float(history)?;
        let s = sample_next(rng, &d)?;
        history.push(s);
    }
    Ok(())
}

/// Simulates `n` steps from `x0`; the stream is fully determined by `seed`.
pub fn simulate<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    x0: StateId,
    n: usize,
    seed: u64,
) -> Result<Path> {
    let mut rng = rng::stream(seed, &[rng::tags::SIMULATE]);
    simulate_with(scheme, x0, n, &mut rng)
}

pub fn simulate_with<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    x0: StateId,
    n: usize,
    rng: &mut Rng,
) -> Result<Path> {
    let mut h = History::new(x0);
    extend(scheme, &mut h, n, rng)?;
    Ok(h.path)
}
