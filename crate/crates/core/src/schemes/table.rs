//! Table-driven predictive schemes, keyed by a declared summary of the
//! history.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{Distribution, History, PredictiveScheme, Sufficiency};
use crate::counts::TransitionCounts;
use crate::error::{Error, Result};
use crate::rational::{format_rational, from_count, parse_rational, Rational};
use crate::rng::Rng;
use crate::space::{Path, StateId, StateSpace};

/// A history reduced to the summary a table reads.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableKey {
    Full(Path),
    Counts(TransitionCounts),
    Row {
        last: StateId,
        row: Vec<(StateId, u64)>,
    },
}

impl TableKey {
    pub fn of(sufficiency: Sufficiency, history: &History) -> Self {
        match sufficiency {
            Sufficiency::FullHistory => TableKey::Full(history.path().clone()),
            Sufficiency::LastAndCounts => TableKey::Counts(history.counts().clone()),
            Sufficiency::LastAndRow => {
                let last = history.last();
                TableKey::Row {
                    last,
                    row: history.counts().row(last).collect(),
                }
            }
        }
    }
}

/// What a table does at a history it has no entry for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fallback {
    Uniform,
    Error,
}

impl Fallback {
    pub fn name(self) -> &'static str {
        match self {
            Fallback::Uniform => "uniform",
            Fallback::Error => "error",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Fallback::Uniform),
            "error" => Ok(Fallback::Error),
            other => Err(Error::Input(format!("unknown fallback `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TableScheme {
    space: StateSpace,
    x0: StateId,
    sufficiency: Sufficiency,
    fallback: Fallback,
    /// Each key keeps the first history inserted under it.
    entries: BTreeMap<TableKey, (Path, Distribution<Rational>)>,
}

impl TableScheme {
    pub fn new(
        space: StateSpace,
        x0: StateId,
        sufficiency: Sufficiency,
        fallback: Fallback,
    ) -> Self {
        TableScheme {
            space,
            x0,
            sufficiency,
            fallback,
            entries: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn x0(&self) -> StateId {
        self.x0
    }

    pub fn fallback(&self) -> Fallback {
        self.fallback
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Path, &Distribution<Rational>)> {
        self.entries.values().map(|(p, d)| (p, d))
    }

    pub fn get(&self, history: &Path) -> Option<&Distribution<Rational>> {
        self.entries
            .get(&TableKey::of(
                self.sufficiency,
                &History::from_path(history),
            ))
            .map(|(_, d)| d)
    }

    fn validate(&self, history: &Path, dist: &Distribution<Rational>) -> Result<()> {
        self.space.check_path(history)?;
        if history.x0() != self.x0 {
            return Err(Error::Input(format!(
                "history {} does not start at the table's x0",
                self.space.format_path(history)
            )));
        }
        if dist.support().any(|s| !self.space.contains(s)) {
            return Err(Error::Input("distribution outside the state space".into()));
        }
        if !dist.is_normalized() {
            return Err(Error::Input(format!(
                "distribution at {} does not sum to 1",
                self.space.format_path(history)
            )));
        }
        Ok(())
    }

    /// Adds an entry; a second history with the same summary must carry the
    /// same distribution.
    pub fn insert(&mut self, history: &Path, dist: Distribution<Rational>) -> Result<()> {
        self.validate(history, &dist)?;
        let key = TableKey::of(self.sufficiency, &History::from_path(history));
        if let Some((first, existing)) = self.entries.get(&key) {
            if *existing != dist {
                return Err(Error::Input(format!(
                    "histories {} and {} share a {} summary but have different entries",
                    self.space.format_path(first),
                    self.space.format_path(history),
                    self.sufficiency.name()
                )));
            }
            return Ok(());
        }
        self.entries.insert(key, (history.clone(), dist));
        Ok(())
    }

    /// Overwrites the entry read at `history`.
    pub fn set(&mut self, history: &Path, dist: Distribution<Rational>) -> Result<()> {
        self.validate(history, &dist)?;
        let key = TableKey::of(self.sufficiency, &History::from_path(history));
        self.entries.insert(key, (history.clone(), dist));
        Ok(())
    }

    /// Records `scheme` at every history of fewer than `max_len` steps that it
    /// reaches with positive probability.
    pub fn tabulate<S: PredictiveScheme + ?Sized>(
        scheme: &S,
        space: &StateSpace,
        x0: StateId,
        max_len: usize,
        sufficiency: Sufficiency,
    ) -> Result<Self> {
        let mut table = TableScheme::new(space.clone(), x0, sufficiency, Fallback::Uniform);
        let mut history = History::new(x0);
        table.tabulate_from(scheme, &mut history, max_len)?;
        Ok(table)
    }

    fn tabulate_from<S: PredictiveScheme + ?Sized>(
        &mut self,
        scheme: &S,
        history: &mut History,
        max_len: usize,
    ) -> Result<()> {
        if history.len() >= max_len {
            return Ok(());
        }
        let dist = scheme.next_exact(history)?;
        let key = TableKey::of(self.sufficiency, history);
        self.entries
            .entry(key)
            .or_insert_with(|| (history.path().clone(), dist.clone()));
        for s in dist.support() {
            history.push(s);
            self.tabulate_from(scheme, history, max_len)?;
            history.pop();
        }
        Ok(())
    }

    /// A table with independent random entries per summary: each state gets
    /// a weight in `{0, 1, 2, 3}`, redrawn until some weight is positive.
    pub fn random(
        space: &StateSpace,
        x0: StateId,
        max_len: usize,
        sufficiency: Sufficiency,
        rng: &mut Rng,
    ) -> Self {
        let mut table = TableScheme::new(space.clone(), x0, sufficiency, Fallback::Uniform);
        let mut history = History::new(x0);
        table.random_from(&mut history, max_len, rng);
        table
    }

    fn random_from(&mut self, history: &mut History, max_len: usize, rng: &mut Rng) {
        if history.len() >= max_len {
            return;
        }
        let key = TableKey::of(self.sufficiency, history);
        let dist = match self.entries.get(&key) {
            Some((_, d)) => d.clone(),
            None => {
                let d = random_distribution(self.space.len(), rng);
                self.entries
                    .insert(key, (history.path().clone(), d.clone()));
                d
            }
        };
        for s in dist.support() {
            history.push(s);
            self.random_from(history, max_len, rng);
            history.pop();
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("table file: {e}")))?;
        file.into_scheme()
    }

    pub fn to_json(&self) -> String {
        let file = TableFile {
            states: self.space.labels().to_vec(),
            x0: self.space.label(self.x0).to_string(),
            sufficiency: self.sufficiency.name().to_string(),
            fallback: Some(self.fallback.name().to_string()),
            entries: self
                .entries
                .values()
                .map(|(path, dist)| TableEntry {
                    history: path
                        .steps()
                        .iter()
                        .map(|s| self.space.label(*s).to_string())
                        .collect(),
                    next: dist
                        .iter()
                        .map(|(s, p)| (self.space.label(s).to_string(), format_rational(p)))
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("table serializes")
    }
}

fn random_distribution(n: usize, rng: &mut Rng) -> Distribution<Rational> {
    loop {
        let w: Vec<u64> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let total: u64 = w.iter().sum();
        if total > 0 {
            let t = from_count(total);
            return Distribution::new(
                w.iter()
                    .enumerate()
                    .map(|(k, x)| (StateId(k as u32), from_count(*x) / &t))
                    .collect(),
            );
        }
    }
}

impl PredictiveScheme for TableScheme {
    fn sufficiency(&self) -> Sufficiency {
        self.sufficiency
    }

    fn next_exact(&self, history: &History) -> Result<Distribution<Rational>> {
        if let Some((_, d)) = self.entries.get(&TableKey::of(self.sufficiency, history)) {
            return Ok(d.clone());
        }
        match self.fallback {
            Fallback::Uniform => {
                let p = Rational::from_integer(1.into()) / from_count(self.space.len() as u64);
                Ok(Distribution::new(
                    self.space.ids().map(|s| (s, p.clone())).collect(),
                ))
            }
            Fallback::Error => Err(Error::Model(format!(
                "no table entry for history {}",
                self.space.format_path(history.path())
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    states: Vec<String>,
    x0: String,
    sufficiency: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fallback: Option<String>,
    entries: Vec<TableEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntry {
    history: Vec<String>,
    next: BTreeMap<String, String>,
}

impl TableFile {
    fn into_scheme(self) -> Result<TableScheme> {
        let space = StateSpace::new(self.states)?;
        let x0 = space.id(&self.x0)?;
        let sufficiency = Sufficiency::parse(&self.sufficiency)?;
        let fallback = match &self.fallback {
            Some(f) => Fallback::parse(f)?,
            None => Fallback::Uniform,
        };
        let mut table = TableScheme::new(space, x0, sufficiency, fallback);
        for (k, e) in self.entries.into_iter().enumerate() {
            let path = table
                .space
                .path(&self.x0, &e.history)
                .map_err(|err| Error::Input(format!("entries[{k}].history: {err}")))?;
            let mut next = Vec::new();
            for (label, p) in &e.next {
                let s = table
                    .space
                    .id(label)
                    .map_err(|err| Error::Input(format!("entries[{k}].next: {err}")))?;
                let p = parse_rational(p)
                    .map_err(|err| Error::Input(format!("entries[{k}].next.{label}: {err}")))?;
                if p < Rational::zero() {
                    return Err(Error::Input(format!(
                        "entries[{k}].next.{label}: negative probability"
                    )));
                }
                next.push((s, p));
            }
            table
                .insert(&path, Distribution::new(next))
                .map_err(|err| Error::Input(format!("entries[{k}]: {err}")))?;
        }
        Ok(table)
    }
}
