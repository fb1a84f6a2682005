//! Exhaustive enumeration over strings of a finite state space: equivalence
//! classes of paths and the block-switch pattern pairs used by the predictive
//! checkers.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::counts::TransitionCounts;
use crate::error::{Error, Result};
use crate::space::{Path, StateId, StateSpace};

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 2_000_000;

/// Upper bound on the number of strings an enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_ENUMERATION_BUDGET)
    }
}

impl Budget {
    /// Fails with a budget error naming `base^exp` when it exceeds the budget.
    pub fn check_power(&self, base: usize, exp: usize) -> Result<u64> {
        let needed = BigUint::from(base).pow(exp as u32);
        match u64::try_from(&needed) {
            Ok(n) if n <= self.0 => Ok(n),
            _ => Err(Error::Budget {
                needed: format!("{base}^{exp} = {needed}"),
                budget: self.0,
            }),
        }
    }
}

/// Odometer over all strings of length `n` on `{0..k}` in lexicographic order.
#[derive(Clone, Debug)]
pub struct Strings {
    k: u32,
    current: Vec<StateId>,
    done: bool,
}

impl Strings {
    pub fn new(k: usize, n: usize) -> Self {
        Strings {
            k: k as u32,
            current: vec![StateId(0); n],
            done: k == 0 && n > 0,
        }
    }

    fn with_prefix(k: usize, prefix: StateId, n: usize) -> impl Iterator<Item = Vec<StateId>> {
        Strings::new(k, n - 1).map(move |mut rest| {
            rest.insert(0, prefix);
            rest
        })
    }
}

impl Iterator for Strings {
    type Item = Vec<StateId>;

    fn next(&mut self) -> Option<Vec<StateId>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut pos = self.current.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            if self.current[pos].0 + 1 < self.k {
                self.current[pos].0 += 1;
                break;
            }
            self.current[pos] = StateId(0);
        }
        Some(out)
    }
}

/// One fiber of `(start, transition counts)` over strings of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub counts: TransitionCounts,
    /// Members in lexicographic order.
    pub members: Vec<Path>,
}

/// Groups all `|S|^n` step sequences from `x0` by transition-count table.
///
/// Classes are ordered by their lexicographically first member. Work is split
/// over first-step prefixes and merged in prefix order, so the output does not
/// depend on thread scheduling.
pub fn enumerate_equivalence_classes(
    space: &StateSpace,
    x0: StateId,
    n: usize,
    budget: Budget,
) -> Result<Vec<EquivalenceClass>> {
    if n == 0 {
        return Err(Error::Input("enumeration length must be at least 1".into()));
    }
    if !space.contains(x0) {
        return Err(Error::UnknownLabel(format!("state index {}", x0.0)));
    }
    budget.check_power(space.len(), n)?;
    let k = space.len();
    let blocks: Vec<Vec<(TransitionCounts, Path)>> = (0..k as u32)
        .into_par_iter()
        .map(|first| {
            Strings::with_prefix(k, StateId(first), n)
                .map(|steps| {
                    let p = Path::new(x0, steps);
                    (TransitionCounts::from_path(&p), p)
                })
                .collect()
        })
        .collect();
    let mut order: Vec<TransitionCounts> = Vec::new();
    let mut groups: HashMap<TransitionCounts, Vec<Path>> = HashMap::new();
    for (counts, path) in blocks.into_iter().flatten() {
        groups
            .entry(counts.clone())
            .or_insert_with(|| {
                order.push(counts);
                Vec::new()
            })
            .push(path);
    }
    Ok(order
        .into_iter()
        .map(|counts| {
            let members = groups.remove(&counts).unwrap_or_default();
            EquivalenceClass { counts, members }
        })
        .collect())
}

/// Length limits on the `u`, `v` and `w` blocks of a block-switch pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternBudget {
    pub max_u: usize,
    pub max_v: usize,
    pub max_w: usize,
    /// Optional cap on `|y| = |u| + |v| + 2|w| + 2`.
    pub max_total: Option<usize>,
}

impl Default for PatternBudget {
    fn default() -> Self {
        PatternBudget {
            max_u: 2,
            max_v: 2,
            max_w: 1,
            max_total: None,
        }
    }
}

impl PatternBudget {
    /// Every pattern whose `y` has at most `len` elements.
    pub fn within(len: usize) -> Self {
        PatternBudget {
            max_u: len,
            max_v: len,
            max_w: len,
            max_total: Some(len),
        }
    }
}

/// The three shapes a block-switch pair can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternKind {
    /// `w` empty and one of `u`, `v` empty: `(u,i,i)` vs `(i,u,i)`.
    Bi,
    /// `w` empty: `(u,i,v,i)` vs `(v,i,u,i)`.
    Bii,
    /// `w` non-empty.
    Biii,
}

impl PatternKind {
    pub fn name(self) -> &'static str {
        match self {
            PatternKind::Bi => "bi",
            PatternKind::Bii => "bii",
            PatternKind::Biii => "biii",
        }
    }
}

/// `y = (u, w, i, v, w, i)` and `y' = (v, w, i, u, w, i)` with the symbol sets
/// of `{i}`, `u`, `v`, `w` pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BPattern {
    pub i: StateId,
    pub u: Vec<StateId>,
    pub v: Vec<StateId>,
    pub w: Vec<StateId>,
}

impl BPattern {
    pub fn new(i: StateId, u: Vec<StateId>, v: Vec<StateId>, w: Vec<StateId>) -> Result<Self> {
        let p = BPattern { i, u, v, w };
        if !p.is_disjoint() {
            return Err(Error::Input(
                "pattern blocks must use disjoint states".into(),
            ));
        }
        Ok(p)
    }

    fn is_disjoint(&self) -> bool {
        let blocks = [&self.u, &self.v, &self.w];
        blocks.iter().all(|b| !b.contains(&self.i))
            && blocks.iter().enumerate().all(|(a, ba)| {
                blocks
                    .iter()
                    .skip(a + 1)
                    .all(|bb| ba.iter().all(|s| !bb.contains(s)))
            })
    }

    fn assemble(&self, first: &[StateId], second: &[StateId]) -> Vec<StateId> {
        let mut y = Vec::with_capacity(self.len());
        y.extend_from_slice(first);
        y.extend_from_slice(&self.w);
        y.push(self.i);
        y.extend_from_slice(second);
        y.extend_from_slice(&self.w);
        y.push(self.i);
        y
    }

    pub fn y(&self) -> Vec<StateId> {
        self.assemble(&self.u, &self.v)
    }

    pub fn y_prime(&self) -> Vec<StateId> {
        self.assemble(&self.v, &self.u)
    }

    pub fn len(&self) -> usize {
        self.u.len() + self.v.len() + 2 * self.w.len() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn kind(&self) -> PatternKind {
        if !self.w.is_empty() {
            PatternKind::Biii
        } else if self.u.is_empty() || self.v.is_empty() {
            PatternKind::Bi
        } else {
            PatternKind::Bii
        }
    }
}

/// All strings over `alphabet` with length at most `max_len`, shortest first.
fn strings_over(alphabet: &[StateId], max_len: usize) -> Vec<Vec<StateId>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for a in alphabet {
                let mut t: Vec<StateId> = s.clone();
                t.push(*a);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
        if alphabet.is_empty() {
            break;
        }
    }
    out
}

/// Every ordered block-switch pattern around `i` within `budget`, skipping the
/// trivial `u = v = ∅` instance where `y = y'`.
pub fn condition_b_pairs(i: StateId, space: &StateSpace, budget: PatternBudget) -> Vec<BPattern> {
    let others: Vec<StateId> = space.ids().filter(|s| *s != i).collect();
    let cap = budget.max_total.unwrap_or(usize::MAX);
    let fits = |u: usize, v: usize, w: usize| u + v + 2 * w + 2 <= cap;
    let mut out = Vec::new();
    let us = strings_over(&others, budget.max_u.min(cap.saturating_sub(2)));
    for u in &us {
        if !fits(u.len(), 0, 0) {
            continue;
        }
        let rest_u: Vec<StateId> = others.iter().copied().filter(|s| !u.contains(s)).collect();
        for v in strings_over(&rest_u, budget.max_v.min(cap.saturating_sub(2 + u.len()))) {
            if u.is_empty() && v.is_empty() {
                // y = y' for every w
                continue;
            }
            if !fits(u.len(), v.len(), 0) {
                continue;
            }
            let rest_w: Vec<StateId> = rest_u.iter().copied().filter(|s| !v.contains(s)).collect();
            let w_cap = budget
                .max_w
                .min(cap.saturating_sub(2 + u.len() + v.len()) / 2);
            for w in strings_over(&rest_w, w_cap) {
                out.push(BPattern {
                    i,
                    u: u.clone(),
                    v: v.clone(),
                    w,
                });
            }
        }
    }
    out
}

/// Groups strings by their exact transition-count table; convenience used by
/// tests and the brute-force oracle.
pub fn class_sizes(classes: &[EquivalenceClass]) -> BTreeMap<usize, usize> {
    let mut sizes = BTreeMap::new();
    for c in classes {
        *sizes.entry(c.members.len()).or_insert(0) += 1;
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts::is_equivalent;
    use std::collections::HashSet;

    fn ids(xs: &[u32]) -> Vec<StateId> {
        xs.iter().map(|x| StateId(*x)).collect()
    }

    /// Independent oracle: group by the sorted multiset of adjacent pairs.
    fn oracle_classes(k: u32, n: usize) -> Vec<Vec<Vec<u32>>> {
        let mut all: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..n {
            all = all
                .into_iter()
                .flat_map(|s| {
                    (0..k).map(move |a| {
                        let mut t = s.clone();
                        t.push(a);
                        t
                    })
                })
                .collect();
        }
        let mut groups: BTreeMap<Vec<(u32, u32)>, Vec<Vec<u32>>> = BTreeMap::new();
        for s in all {
            let mut full = vec![0u32];
            full.extend(&s);
            let mut pairs: Vec<(u32, u32)> = full.windows(2).map(|w| (w[0], w[1])).collect();
            pairs.sort();
            groups.entry(pairs).or_default().push(s);
        }
        groups.into_values().collect()
    }

    #[test]
    fn binary_length_four_has_eleven_classes() {
        let sp = StateSpace::integers(2).unwrap();
        let classes = enumerate_equivalence_classes(&sp, StateId(0), 4, Budget::default()).unwrap();
        let oracle = oracle_classes(2, 4);
        assert_eq!(oracle.len(), 11);
        assert_eq!(classes.len(), 11);
        assert_eq!(classes.iter().map(|c| c.members.len()).sum::<usize>(), 16);
        let mut ours: Vec<Vec<Vec<u32>>> = classes
            .iter()
            .map(|c| {
                c.members
                    .iter()
                    .map(|p| p.steps().iter().map(|s| s.0).collect())
                    .collect()
            })
            .collect();
        ours.sort();
        let mut theirs = oracle;
        theirs.sort();
        assert_eq!(ours, theirs);
    }

    #[test]
    fn specific_class_membership() {
        let sp = StateSpace::integers(2).unwrap();
        let classes = enumerate_equivalence_classes(&sp, StateId(0), 4, Budget::default()).unwrap();
        let (a, b) = (StateId(0), StateId(1));
        let target = classes
            .iter()
            .find(|c| {
                c.counts.get(a, a) == 2
                    && c.counts.get(a, b) == 1
                    && c.counts.get(b, a) == 1
                    && c.counts.table().len() == 3
            })
            .unwrap();
        let members: Vec<Vec<StateId>> =
            target.members.iter().map(|p| p.steps().to_vec()).collect();
        assert_eq!(
            members,
            vec![ids(&[0, 0, 1, 0]), ids(&[0, 1, 0, 0]), ids(&[1, 0, 0, 0])]
        );
    }

    #[test]
    fn length_one_classes_are_singletons() {
        let sp = StateSpace::integers(2).unwrap();
        let classes = enumerate_equivalence_classes(&sp, StateId(0), 1, Budget::default()).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.members.len() == 1));
    }

    #[test]
    fn budget_is_enforced() {
        let sp = StateSpace::integers(10).unwrap();
        let err = enumerate_equivalence_classes(&sp, StateId(0), 7, Budget::default()).unwrap_err();
        match err {
            Error::Budget { needed, budget } => {
                assert!(needed.contains("10^7"));
                assert_eq!(budget, DEFAULT_ENUMERATION_BUDGET);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn members_share_length_last_state_and_visits() {
        let sp = StateSpace::integers(3).unwrap();
        for n in 1..=5 {
            for c in enumerate_equivalence_classes(&sp, StateId(0), n, Budget::default()).unwrap() {
                let first = &c.members[0];
                for m in &c.members {
                    assert!(is_equivalent(first, m));
                    assert_eq!(m.len(), first.len());
                    assert_eq!(m.last(), first.last());
                    for s in sp.ids() {
                        let visits = |p: &Path| p.states().filter(|x| *x == s).count();
                        assert_eq!(visits(m), visits(first));
                    }
                }
            }
        }
    }

    #[test]
    fn pattern_instances() {
        let (i, a, b, c) = (StateId(0), StateId(1), StateId(2), StateId(3));
        let bii = BPattern::new(i, vec![a], vec![b], vec![]).unwrap();
        assert_eq!(bii.y(), ids(&[1, 0, 2, 0]));
        assert_eq!(bii.y_prime(), ids(&[2, 0, 1, 0]));
        assert_eq!(bii.kind(), PatternKind::Bii);
        let bi = BPattern::new(i, vec![a], vec![], vec![]).unwrap();
        assert_eq!(bi.y(), ids(&[1, 0, 0]));
        assert_eq!(bi.y_prime(), ids(&[0, 1, 0]));
        assert_eq!(bi.kind(), PatternKind::Bi);
        let biii = BPattern::new(i, vec![a], vec![b], vec![c]).unwrap();
        assert_eq!(biii.y(), ids(&[1, 3, 0, 2, 3, 0]));
        assert_eq!(biii.y_prime(), ids(&[2, 3, 0, 1, 3, 0]));
        assert_eq!(biii.kind(), PatternKind::Biii);
        assert!(BPattern::new(i, vec![a], vec![a], vec![]).is_err());
        assert!(BPattern::new(i, vec![i], vec![], vec![]).is_err());
    }

    #[test]
    fn pair_stream_is_disjoint_and_unique() {
        let sp = StateSpace::integers(4).unwrap();
        let pairs = condition_b_pairs(StateId(0), &sp, PatternBudget::default());
        let unique: HashSet<_> = pairs.iter().collect();
        assert_eq!(unique.len(), pairs.len());
        for p in &pairs {
            assert!(p.is_disjoint());
            assert!(p.u.len() <= 2 && p.v.len() <= 2 && p.w.len() <= 1);
            assert_ne!(p.y(), p.y_prime());
        }
        let want = BPattern::new(StateId(0), ids(&[1]), ids(&[2]), ids(&[3])).unwrap();
        assert!(pairs.contains(&want));
    }

    #[test]
    fn pair_stream_respects_total_length() {
        let sp = StateSpace::integers(3).unwrap();
        let pairs = condition_b_pairs(StateId(0), &sp, PatternBudget::within(5));
        assert!(pairs.iter().all(|p| p.len() <= 5));
        // u = (1,2,1) with v = w = ∅ only fits the unrestricted budget
        assert!(pairs
            .iter()
            .any(|p| p.u == ids(&[1, 2, 1]) && p.v.is_empty()));
    }
}
