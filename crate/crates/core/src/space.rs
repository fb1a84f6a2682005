//! State spaces and paths.
//!
//! Labels are opaque strings mapped to dense [`StateId`]s in insertion order.
//! The boundary symbol `∂` is reserved: it never appears as a user label and is
//! only materialized (as the index just past the user states) by the empirical
//! transition estimator.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Reserved label of the absorbing boundary state.
pub const BOUNDARY_LABEL: &str = "∂";

/// Dense index of a state inside a [`StateSpace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    labels: Vec<String>,
    index: HashMap<String, StateId>,
    has_boundary: bool,
}

impl StateSpace {
    /// Builds a space from distinct labels; at least two states are required.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut space = StateSpace {
            labels: Vec::new(),
            index: HashMap::new(),
            has_boundary: false,
        };
        for label in labels {
            let label = label.into();
            if space.index.contains_key(&label) {
                return Err(Error::InvalidSpace(format!("duplicate label `{label}`")));
            }
            space.insert(label)?;
        }
        if space.len() < 2 {
            return Err(Error::InvalidSpace(
                "a state space needs at least two states".into(),
            ));
        }
        Ok(space)
    }

    /// The space `{"0", "1", ..., "n-1"}`.
    pub fn integers(n: usize) -> Result<Self> {
        Self::new((0..n).map(|k| k.to_string()))
    }

    fn insert(&mut self, label: String) -> Result<StateId> {
        if label == BOUNDARY_LABEL {
            return Err(Error::InvalidSpace(format!(
                "`{BOUNDARY_LABEL}` is reserved for the boundary state"
            )));
        }
        if label.is_empty() {
            return Err(Error::InvalidSpace("empty state label".into()));
        }
        let id = StateId(self.labels.len() as u32);
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        Ok(id)
    }

    /// Returns the id of `label`, materializing the state on first reference.
    pub fn intern(&mut self, label: &str) -> Result<StateId> {
        match self.index.get(label) {
            Some(&id) => Ok(id),
            None => self.insert(label.to_string()),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.labels.len() as u32).map(StateId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn contains(&self, id: StateId) -> bool {
        id.index() < self.labels.len()
    }

    pub fn id(&self, label: &str) -> Result<StateId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Label of `id`; the boundary index maps to `∂` when enabled.
    pub fn label(&self, id: StateId) -> &str {
        if Some(id) == self.boundary() {
            BOUNDARY_LABEL
        } else {
            &self.labels[id.index()]
        }
    }

    pub fn has_boundary(&self) -> bool {
        self.has_boundary
    }

    /// A copy of this space whose boundary index is enabled.
    pub fn with_boundary(&self) -> Self {
        let mut s = self.clone();
        s.has_boundary = true;
        s
    }

    pub fn boundary(&self) -> Option<StateId> {
        self.has_boundary
            .then_some(StateId(self.labels.len() as u32))
    }

    /// Builds a path from labels.
    pub fn path<S: AsRef<str>>(&self, x0: &str, steps: &[S]) -> Result<Path> {
        let x0 = self.id(x0)?;
        let steps = steps
            .iter()
            .map(|s| self.id(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Path::new(x0, steps))
    }

    pub fn check_path(&self, path: &Path) -> Result<()> {
        match path.states().find(|s| !self.contains(*s)) {
            Some(s) => Err(Error::UnknownLabel(format!("state index {}", s.0))),
            None => Ok(()),
        }
    }

    pub fn format_path(&self, path: &Path) -> String {
        let parts: Vec<&str> = path.states().map(|s| self.label(s)).collect();
        format!("({})", parts.join(","))
    }

    pub fn format_steps(&self, steps: &[StateId]) -> String {
        let parts: Vec<&str> = steps.iter().map(|s| self.label(*s)).collect();
        format!("({})", parts.join(","))
    }
}

/// A finite trajectory `(x0, x1, ..., xn)` with a fixed start.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    x0: StateId,
    steps: Vec<StateId>,
}

impl Path {
    pub fn new(x0: StateId, steps: Vec<StateId>) -> Self {
        Path { x0, steps }
    }

    pub fn empty(x0: StateId) -> Self {
        Path {
            x0,
            steps: Vec::new(),
        }
    }

    pub fn x0(&self) -> StateId {
        self.x0
    }

    pub fn steps(&self) -> &[StateId] {
        &self.steps
    }

    /// Number of steps (transitions).
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> StateId {
        *self.steps.last().unwrap_or(&self.x0)
    }

    /// State at time `t`, with time 0 being `x0`.
    pub fn at(&self, t: usize) -> StateId {
        if t == 0 {
            self.x0
        } else {
            self.steps[t - 1]
        }
    }

    /// All states in time order, starting with `x0`.
    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        std::iter::once(self.x0).chain(self.steps.iter().copied())
    }

    /// Adjacent pairs `(x_{k-1}, x_k)`.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.states().zip(self.steps.iter().copied())
    }

    pub fn push(&mut self, s: StateId) {
        self.steps.push(s);
    }

    pub fn pop(&mut self) -> Option<StateId> {
        self.steps.pop()
    }

    /// Appends `tail`, which must start where `self` ends.
    pub fn concat(&self, tail: &Path) -> Result<Path> {
        if tail.x0 != self.last() {
            return Err(Error::Input(
                "concatenated path does not start at the last state".into(),
            ));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&tail.steps);
        Ok(Path::new(self.x0, steps))
    }

    /// Splits after `k` steps into `(x0..x_k)` and `(x_k..x_n)`.
    pub fn split_at(&self, k: usize) -> (Path, Path) {
        let head = Path::new(self.x0, self.steps[..k].to_vec());
        let tail = Path::new(head.last(), self.steps[k..].to_vec());
        (head, tail)
    }
}
