//! Executable versions of the predictive characterizations of Markov
//! exchangeability, plus a definition-level brute-force oracle.
//!
//! Every checker works up to a finite horizon: a "holds" verdict certifies
//! the condition only for strings of at most `max_len` steps, and the report
//! says so.

mod colored;
mod linear;
mod strings;

pub use colored::{check_colored_condition, color_product, is_partitioned_colors, ColorPartition};
pub use linear::{check_linear_condition, LinearProbe};
pub use strings::{
    brute_force_markov_exchangeable, check_condition_a, check_condition_b,
    check_one_step_vs_full_sufficiency, Explored,
};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::Result;
use crate::rational::{format_rational, Rational};
use crate::schemes::{conditional_probability, History, PredictiveScheme};
use crate::space::{Path, StateId, StateSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Process exit code: 0 holds, 1 violated, 3 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Violated => 1,
            Verdict::Inconclusive => 3,
        }
    }
}

/// What a witness compares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessDetail {
    /// `p(left | left_history)` against `p(right | right_history)`.
    Strings {
        left_history: Path,
        left: Vec<StateId>,
        right_history: Path,
        right: Vec<StateId>,
    },
    /// The two sides of `π(u|T)π(v|T+e_u) = π(v|T)π(u|T+e_v)` at state `i`.
    Linear {
        i: StateId,
        u: StateId,
        v: StateId,
        row: Vec<u64>,
    },
    /// Products of reinforced color-set weights along `left` and `right`
    /// after a common history.
    ColorProducts {
        history: Path,
        left: Vec<StateId>,
        right: Vec<StateId>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// `class`, `a`, `bi`, `bii`, `biii`, `k-step`, `linear` or `colored`.
    pub kind: String,
    pub detail: WitnessDetail,
    pub left_value: Rational,
    pub right_value: Rational,
}

impl Witness {
    /// Recomputes both probabilities of a [`WitnessDetail::Strings`] witness.
    pub fn reevaluate<S: PredictiveScheme + ?Sized>(
        &self,
        scheme: &S,
    ) -> Option<Result<(Rational, Rational)>> {
        match &self.detail {
            WitnessDetail::Strings {
                left_history,
                left,
                right_history,
                right,
            } => {
                let eval = |h: &Path, y: &[StateId]| {
                    conditional_probability(scheme, &mut History::from_path(h), y)
                };
                Some(eval(left_history, left).and_then(|l| Ok((l, eval(right_history, right)?))))
            }
            _ => None,
        }
    }

    pub fn render(&self, space: &StateSpace) -> String {
        let (l, r) = (
            format_rational(&self.left_value),
            format_rational(&self.right_value),
        );
        match &self.detail {
            WitnessDetail::Strings {
                left_history,
                left,
                right_history,
                right,
            } => {
                if left_history.is_empty() && right_history.is_empty() {
                    let lp = Path::new(left_history.x0(), left.clone());
                    let rp = Path::new(right_history.x0(), right.clone());
                    format!(
                        "[{}] p{} = {l} vs p{} = {r}",
                        self.kind,
                        space.format_path(&lp),
                        space.format_path(&rp)
                    )
                } else {
                    format!(
                        "[{}] p({} | {}) = {l} vs p({} | {}) = {r}",
                        self.kind,
                        space.format_steps(left),
                        space.format_path(left_history),
                        space.format_steps(right),
                        space.format_path(right_history)
                    )
                }
            }
            WitnessDetail::Linear { i, u, v, row } => format!(
                "[{}] i={} u={} v={} T_i={:?}: {l} vs {r}",
                self.kind,
                space.label(*i),
                space.label(*u),
                space.label(*v),
                row
            ),
            WitnessDetail::ColorProducts {
                history,
                left,
                right,
            } => format!(
                "[{}] after {}: y={} gives {l}, y'={} gives {r}",
                self.kind,
                space.format_path(history),
                space.format_steps(left),
                space.format_steps(right)
            ),
        }
    }
}

/// Outcome of a checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// Instances examined, by category.
    pub coverage: BTreeMap<String, u64>,
    /// Largest probability spread within one class, for the brute-force
    /// oracle.
    pub max_spread: Option<Rational>,
    pub max_len: usize,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub(crate) fn new(check: &str, max_len: usize) -> Self {
        CheckReport {
            check: check.to_string(),
            verdict: Verdict::Holds,
            witnesses: Vec::new(),
            coverage: BTreeMap::new(),
            max_spread: None,
            max_len,
            notes: Vec::new(),
        }
    }

    pub(crate) fn inconclusive(check: &str, max_len: usize, reason: String) -> Self {
        let mut r = CheckReport::new(check, max_len);
        r.verdict = Verdict::Inconclusive;
        r.notes.push(reason);
        r
    }

    pub(crate) fn count(&mut self, key: &str, n: u64) {
        *self.coverage.entry(key.to_string()).or_insert(0) += n;
    }

    pub(crate) fn push(&mut self, w: Witness) {
        self.verdict = Verdict::Violated;
        self.witnesses.push(w);
    }

    /// Sets the verdict from the witnesses; call after all pushes.
    pub(crate) fn finish(mut self) -> Self {
        if self.verdict != Verdict::Inconclusive {
            self.verdict = if self.witnesses.is_empty() {
                Verdict::Holds
            } else {
                Verdict::Violated
            };
        }
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    /// Witnesses of one kind.
    pub fn witnesses_of<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Witness> {
        self.witnesses.iter().filter(move |w| w.kind == kind)
    }

    /// Structured text ending with a `VERDICT:` line; at most `max_witnesses`
    /// witnesses are listed.
    pub fn render(&self, space: &StateSpace, max_witnesses: usize) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "check: {}", self.check);
        let _ = writeln!(s, "max_len: {}", self.max_len);
        for (k, v) in &self.coverage {
            let _ = writeln!(s, "coverage.{k}: {v}");
        }
        if let Some(spread) = &self.max_spread {
            let _ = writeln!(s, "max_spread: {}", format_rational(spread));
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "witnesses: {}", self.witnesses.len());
        for w in self.witnesses.iter().take(max_witnesses) {
            let _ = writeln!(s, "witness: {}", w.render(space));
        }
        if self.verdict == Verdict::Holds && self.max_len > 0 {
            let _ = writeln!(s, "note: holds up to {} steps only", self.max_len);
        }
        let _ = writeln!(s, "VERDICT: {}", self.verdict.name());
        s
    }
}
