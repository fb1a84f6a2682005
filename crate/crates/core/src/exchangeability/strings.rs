//! Checkers that evaluate a scheme on every string up to a horizon.

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::{CheckReport, Verdict, Witness, WitnessDetail};
use crate::counts::TransitionCounts;
use crate::enumerate::{condition_b_pairs, Budget, PatternBudget, PatternKind};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::schemes::{History, PredictiveScheme};
use crate::space::{Path, StateId, StateSpace};

/// Exact probabilities of every string of at most `max_len` steps from `x0`.
#[derive(Clone, Debug)]
pub struct Explored {
    x0: StateId,
    n_states: usize,
    max_len: usize,
    /// `levels[n]` lists the strings of `n` steps in lexicographic order.
    levels: Vec<Vec<Path>>,
    probs: HashMap<Path, Rational>,
}

impl Explored {
    /// Fails with a budget error when `Σ_{n ≤ max_len} |S|^n` exceeds `budget`.
    pub fn new<S: PredictiveScheme + ?Sized>(
        scheme: &S,
        space: &StateSpace,
        x0: StateId,
        max_len: usize,
        budget: Budget,
    ) -> Result<Self> {
        let k = space.len();
        let mut total: u64 = 0;
        for n in 1..=max_len {
            let level = budget.check_power(k, n)?;
            total = total.saturating_add(level);
        }
        if total > budget.0 {
            return Err(Error::Budget {
                needed: format!("Σ_{{n≤{max_len}}} {k}^n = {total}"),
                budget: budget.0,
            });
        }
        let mut root = History::new(x0);
        let first = if max_len > 0 {
            Some(scheme.next_exact(&root)?)
        } else {
            None
        };
        let blocks: Vec<Vec<(Path, Rational)>> = match &first {
            None => Vec::new(),
            Some(d) => (0..k as u32)
                .into_par_iter()
                .map(|s| {
                    let s = StateId(s);
                    let mut h = History::new(x0);
                    h.push(s);
                    let mut out = Vec::new();
                    descend(scheme, k, &mut h, d.get(s), max_len, &mut out)?;
                    Ok(out)
                })
                .collect::<Result<_>>()?,
        };
        root.pop();
        let mut levels = vec![Vec::new(); max_len + 1];
        let mut probs = HashMap::with_capacity(total as usize + 1);
        levels[0].push(Path::empty(x0));
        probs.insert(Path::empty(x0), Rational::from_integer(1.into()));
        for (p, prob) in blocks.into_iter().flatten() {
            levels[p.len()].push(p.clone());
            probs.insert(p, prob);
        }
        Ok(Explored {
            x0,
            n_states: k,
            max_len,
            levels,
            probs,
        })
    }

    pub fn x0(&self) -> StateId {
        self.x0
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// All strings of `n` steps, lexicographically.
    pub fn level(&self, n: usize) -> &[Path] {
        &self.levels[n]
    }

    pub fn probability(&self, path: &Path) -> Option<&Rational> {
        self.probs.get(path)
    }

    /// `p(y | history)`, or `None` past the horizon or at a null history.
    pub fn conditional(&self, history: &Path, y: &[StateId]) -> Option<Rational> {
        let ph = self.probs.get(history)?;
        if ph.is_zero() {
            return None;
        }
        let mut full = history.clone();
        for s in y {
            full.push(*s);
        }
        Some(self.probs.get(&full)? / ph)
    }

    /// Positive-probability strings of `n` steps grouped by transition counts,
    /// groups in order of their first member.
    fn positive_groups(&self, n: usize) -> Vec<Vec<&Path>> {
        let mut order: Vec<TransitionCounts> = Vec::new();
        let mut groups: HashMap<TransitionCounts, Vec<&Path>> = HashMap::new();
        for p in &self.levels[n] {
            if self.probs[p].is_zero() {
                continue;
            }
            let t = TransitionCounts::from_path(p);
            groups
                .entry(t.clone())
                .or_insert_with(|| {
                    order.push(t);
                    Vec::new()
                })
                .push(p);
        }
        order
            .into_iter()
            .map(|t| groups.remove(&t).unwrap())
            .collect()
    }

    /// Every class of `n` steps, including null strings.
    fn all_groups(&self, n: usize) -> Vec<Vec<&Path>> {
        let mut order: Vec<TransitionCounts> = Vec::new();
        let mut groups: HashMap<TransitionCounts, Vec<&Path>> = HashMap::new();
        for p in &self.levels[n] {
            let t = TransitionCounts::from_path(p);
            groups
                .entry(t.clone())
                .or_insert_with(|| {
                    order.push(t);
                    Vec::new()
                })
                .push(p);
        }
        order
            .into_iter()
            .map(|t| groups.remove(&t).unwrap())
            .collect()
    }

    /// Equal probability within every equivalence class.
    pub fn brute_force(&self) -> CheckReport {
        let mut report = CheckReport::new("brute", self.max_len);
        let mut max_spread = Rational::zero();
        for n in 1..=self.max_len {
            let groups = self.all_groups(n);
            report.count("classes", groups.len() as u64);
            report.count("strings", self.levels[n].len() as u64);
            for g in groups {
                let mut lo = g[0];
                let mut hi = g[0];
                for p in &g[1..] {
                    if self.probs[*p] < self.probs[lo] {
                        lo = p;
                    }
                    if self.probs[*p] > self.probs[hi] {
                        hi = p;
                    }
                }
                let spread = &self.probs[hi] - &self.probs[lo];
                if spread > max_spread {
                    max_spread = spread.clone();
                }
                if !spread.is_zero() {
                    report.push(Witness {
                        kind: "class".into(),
                        detail: WitnessDetail::Strings {
                            left_history: Path::empty(self.x0),
                            left: lo.steps().to_vec(),
                            right_history: Path::empty(self.x0),
                            right: hi.steps().to_vec(),
                        },
                        left_value: self.probs[lo].clone(),
                        right_value: self.probs[hi].clone(),
                    });
                }
            }
        }
        report.max_spread = Some(max_spread);
        report.finish()
    }

    /// The `k`-step joint predictive agrees across equivalent positive
    /// histories.
    pub fn k_step(&self, k: usize, name: &str) -> CheckReport {
        let mut report = CheckReport::new(name, self.max_len);
        if k == 0 || k > self.max_len {
            report
                .notes
                .push(format!("horizon {k} leaves nothing to check"));
            return report.finish();
        }
        let continuations: Vec<Vec<StateId>> =
            crate::enumerate::Strings::new(self.n_states, k).collect();
        for n in 0..=self.max_len - k {
            for g in self.positive_groups(n) {
                report.count("histories", g.len() as u64);
                let reference = g[0];
                'member: for other in &g[1..] {
                    report.count("pairs", 1);
                    for y in &continuations {
                        let l = self.conditional(reference, y).expect("within horizon");
                        let r = self.conditional(other, y).expect("within horizon");
                        if l != r {
                            report.push(Witness {
                                kind: name.into(),
                                detail: WitnessDetail::Strings {
                                    left_history: reference.clone(),
                                    left: y.clone(),
                                    right_history: (*other).clone(),
                                    right: y.clone(),
                                },
                                left_value: l,
                                right_value: r,
                            });
                            break 'member;
                        }
                    }
                }
            }
        }
        report.finish()
    }

    /// Block-switch invariance after every positive history, split into the
    /// `bi`, `bii` and `biii` shapes. `biii` pairs are compared in the
    /// shortened form `(u, j, w, i, v, j)` vs `(v, j, w, i, u, j)`, which is
    /// equivalent under condition a) and fits more instances in the horizon.
    pub fn condition_b(&self, space: &StateSpace, patterns: PatternBudget) -> CheckReport {
        let mut report = CheckReport::new("b", self.max_len);
        let relaxed = PatternBudget {
            max_total: None,
            ..patterns
        };
        let mut by_state: HashMap<StateId, Vec<KindedPair>> = HashMap::new();
        for n in 0..=self.max_len.saturating_sub(3) {
            for h in &self.levels[n] {
                if self.probs[h].is_zero() {
                    continue;
                }
                let i = h.last();
                let pairs = by_state.entry(i).or_insert_with(|| {
                    condition_b_pairs(i, space, relaxed)
                        .into_iter()
                        .map(|p| {
                            let (mut y, mut y2) = (p.y(), p.y_prime());
                            if p.kind() == PatternKind::Biii {
                                y.truncate(p.len() - p.w.len());
                                y2.truncate(p.len() - p.w.len());
                            }
                            (p.kind(), y, y2)
                        })
                        .collect()
                });
                for (kind, y, y2) in pairs.iter() {
                    if n + y.len() > self.max_len {
                        continue;
                    }
                    report.count(kind.name(), 1);
                    let l = self.conditional(h, y).expect("within horizon");
                    let r = self.conditional(h, y2).expect("within horizon");
                    if l != r {
                        report.push(Witness {
                            kind: kind.name().into(),
                            detail: WitnessDetail::Strings {
                                left_history: h.clone(),
                                left: y.clone(),
                                right_history: h.clone(),
                                right: y2.clone(),
                            },
                            left_value: l,
                            right_value: r,
                        });
                    }
                }
            }
        }
        for kind in [PatternKind::Bi, PatternKind::Bii, PatternKind::Biii] {
            let bad = report.witnesses_of(kind.name()).count();
            let tested = report.coverage.get(kind.name()).copied().unwrap_or(0);
            report.notes.push(format!(
                "{}: {tested} instances, {bad} violations",
                kind.name()
            ));
        }
        report.finish()
    }
}

fn descend<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    k: usize,
    history: &mut History,
    prob: Rational,
    max_len: usize,
    out: &mut Vec<(Path, Rational)>,
) -> Result<()> {
    let n = history.len();
    out.push((history.path().clone(), prob.clone()));
    if n >= max_len {
        return Ok(());
    }
    let dist = if prob.is_zero() {
        None
    } else {
        Some(scheme.next_exact(history)?)
    };
    for s in 0..k as u32 {
        let s = StateId(s);
        let p = match &dist {
            Some(d) => &prob * d.get(s),
            None => Rational::zero(),
        };
        history.push(s);
        let r = descend(scheme, k, history, p, max_len, out);
        history.pop();
        r?;
    }
    Ok(())
}

fn explore_or_report<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    space: &StateSpace,
    x0: StateId,
    max_len: usize,
    budget: Budget,
    check: &str,
) -> Result<std::result::Result<Explored, CheckReport>> {
    match Explored::new(scheme, space, x0, max_len, budget) {
        Ok(e) => Ok(Ok(e)),
        Err(Error::Budget { needed, budget }) => Ok(Err(CheckReport::inconclusive(
            check,
            max_len,
            format!("enumeration needs {needed} strings, budget {budget}"),
        ))),
        Err(e) => Err(e),
    }
}

type KindedPair = (PatternKind, Vec<StateId>, Vec<StateId>);

/// Checks the definition directly: every equivalence class of strings of at
/// most `max_len` steps has a single probability.
pub fn brute_force_markov_exchangeable<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    space: &StateSpace,
    x0: StateId,
    max_len: usize,
    budget: Budget,
) -> Result<CheckReport> {
    Ok(
        match explore_or_report(scheme, space, x0, max_len, budget, "brute")? {
            Ok(e) => e.brute_force(),
            Err(r) => r,
        },
    )
}

/// One-step predictive sufficiency of the last state and the transition
/// counts.
pub fn check_condition_a<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    space: &StateSpace,
    x0: StateId,
    max_len: usize,
    budget: Budget,
) -> Result<CheckReport> {
    Ok(
        match explore_or_report(scheme, space, x0, max_len, budget, "a")? {
            Ok(e) => e.k_step(1, "a"),
            Err(r) => r,
        },
    )
}

/// Block-switch invariance; fails with an input error when condition a) does
/// not hold up to the same horizon.
pub fn check_condition_b<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    space: &StateSpace,
    x0: StateId,
    max_len: usize,
    patterns: PatternBudget,
    budget: Budget,
) -> Result<CheckReport> {
    let e = match explore_or_report(scheme, space, x0, max_len, budget, "b")? {
        Ok(e) => e,
        Err(r) => return Ok(r),
    };
    let a = e.k_step(1, "a");
    if a.verdict == Verdict::Violated {
        return Err(Error::Input(format!(
            "condition a) fails ({} witnesses), so condition b) is not checked",
            a.witnesses.len()
        )));
    }
    Ok(e.condition_b(space, patterns))
}

/// The `k`-step joint predictive is a function of the last state and the
/// transition counts.
pub fn check_one_step_vs_full_sufficiency<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    space: &StateSpace,
    x0: StateId,
    max_len: usize,
    k: usize,
    budget: Budget,
) -> Result<CheckReport> {
    Ok(
        match explore_or_report(scheme, space, x0, max_len, budget, "k-step")? {
            Ok(e) => e.k_step(k, "k-step"),
            Err(r) => r,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::schemes::{
        counterexample_scheme, ErrwParams, ErrwScheme, HoppeParams, HoppeScheme, Sufficiency,
        TableScheme,
    };
    use crate::schemes::{Distribution, FixedScheme};

    fn triangle() -> (StateSpace, ErrwScheme) {
        let sp = StateSpace::new(["a", "b", "c"]).unwrap();
        let id = |l| sp.id(l).unwrap();
        let p = ErrwParams::new(
            &sp,
            vec![
                (id("a"), id("b"), int(1)),
                (id("b"), id("c"), int(1)),
                (id("a"), id("c"), int(1)),
            ],
        )
        .unwrap();
        (sp, ErrwScheme::new(p))
    }

    #[test]
    fn counterexample_brute_force() {
        let s = counterexample_scheme(5).unwrap();
        let sp = s.space().clone();
        let r = brute_force_markov_exchangeable(&s, &sp, sp.id("0").unwrap(), 5, Budget::default())
            .unwrap();
        assert!(r.is_violated());
        let bad = sp.path("0", &["1", "3", "1", "2", "3"]).unwrap();
        let good = sp.path("0", &["1", "2", "3", "1", "3"]).unwrap();
        let w = r
            .witnesses
            .iter()
            .find(|w| {
                w.detail
                    == WitnessDetail::Strings {
                        left_history: Path::empty(bad.x0()),
                        left: bad.steps().to_vec(),
                        right_history: Path::empty(bad.x0()),
                        right: good.steps().to_vec(),
                    }
            })
            .expect("the classic pair is reported");
        assert_eq!(w.left_value, int(0));
        assert!(w.right_value > int(0));
        for w in &r.witnesses {
            let (l, rr) = w.reevaluate(&s).unwrap().unwrap();
            assert_eq!((l, rr), (w.left_value.clone(), w.right_value.clone()));
        }
    }

    #[test]
    fn counterexample_passes_a_and_k_step_but_fails_b() {
        let s = counterexample_scheme(5).unwrap();
        let sp = s.space().clone();
        let x0 = sp.id("0").unwrap();
        assert!(check_condition_a(&s, &sp, x0, 5, Budget::default())
            .unwrap()
            .holds());
        assert!(
            check_one_step_vs_full_sufficiency(&s, &sp, x0, 5, 3, Budget::default())
                .unwrap()
                .holds()
        );
        let b =
            check_condition_b(&s, &sp, x0, 5, PatternBudget::default(), Budget::default()).unwrap();
        assert!(b.is_violated());
    }

    #[test]
    fn errw_triangle_holds_everywhere() {
        let (sp, s) = triangle();
        let x0 = sp.id("a").unwrap();
        let r = brute_force_markov_exchangeable(&s, &sp, x0, 5, Budget::default()).unwrap();
        assert!(r.holds());
        assert_eq!(r.max_spread, Some(int(0)));
        assert!(check_condition_a(&s, &sp, x0, 5, Budget::default())
            .unwrap()
            .holds());
        let b =
            check_condition_b(&s, &sp, x0, 5, PatternBudget::default(), Budget::default()).unwrap();
        assert!(b.holds());
        assert!(b.coverage["bii"] > 0);
    }

    #[test]
    fn hoppe_k_step() {
        let sp = StateSpace::integers(3).unwrap();
        let s = HoppeScheme::new(HoppeParams::uniform(&sp, int(1)).unwrap());
        let x0 = StateId(0);
        for k in 1..=3 {
            let r =
                check_one_step_vs_full_sufficiency(&s, &sp, x0, 5, k, Budget::default()).unwrap();
            assert!(r.holds(), "k = {k}");
        }
        let a = check_condition_a(&s, &sp, x0, 5, Budget::default()).unwrap();
        let k1 = check_one_step_vs_full_sufficiency(&s, &sp, x0, 5, 1, Budget::default()).unwrap();
        assert_eq!(a.coverage, k1.coverage);
    }

    #[test]
    fn planted_asymmetry_is_found_by_condition_a() {
        let sp = StateSpace::integers(3).unwrap();
        let s = HoppeScheme::new(HoppeParams::uniform(&sp, int(1)).unwrap());
        let x0 = StateId(0);
        let mut t = TableScheme::tabulate(&s, &sp, x0, 5, Sufficiency::FullHistory).unwrap();
        let x = sp.path("0", &["0", "1", "0", "1"]).unwrap();
        let x2 = sp.path("0", &["1", "0", "0", "1"]).unwrap();
        assert!(crate::is_equivalent(&x, &x2));
        t.set(
            &x2,
            Distribution::new(vec![(StateId(0), ratio(1, 2)), (StateId(1), ratio(1, 2))]),
        )
        .unwrap();
        let r = check_condition_a(&t, &sp, x0, 5, Budget::default()).unwrap();
        assert_eq!(r.witnesses.len(), 1);
        match &r.witnesses[0].detail {
            WitnessDetail::Strings {
                left_history,
                right_history,
                ..
            } => {
                assert_eq!((left_history, right_history), (&x, &x2));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            check_condition_b(&t, &sp, x0, 5, PatternBudget::default(), Budget::default()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn budget_makes_the_verdict_inconclusive() {
        let (sp, s) = triangle();
        let r = brute_force_markov_exchangeable(&s, &sp, StateId(0), 5, Budget(100)).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.render(&sp, 5).ends_with("VERDICT: inconclusive\n"));
    }

    #[test]
    fn degenerate_scheme_is_exchangeable() {
        let sp = StateSpace::integers(2).unwrap();
        let s = FixedScheme::point(StateId(1));
        let r = brute_force_markov_exchangeable(&s, &sp, StateId(0), 4, Budget::default()).unwrap();
        assert!(r.holds());
    }
}
