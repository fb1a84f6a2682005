//! Transition counts and the Markov equivalence relation.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::space::{Path, StateId, StateSpace};

/// Sparse transition-count table of a path, with its start and last state.
///
/// Row and column totals are maintained alongside the table so that
/// `row_total(i) == Σ_j get(i, j)` and `col_total(i) == Σ_j get(j, i)` hold at
/// all times.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionCounts {
    start: StateId,
    last: StateId,
    total: u64,
    counts: BTreeMap<(StateId, StateId), u64>,
    rows: BTreeMap<StateId, u64>,
    cols: BTreeMap<StateId, u64>,
}

impl TransitionCounts {
    pub fn empty(start: StateId) -> Self {
        TransitionCounts {
            start,
            last: start,
            total: 0,
            counts: BTreeMap::new(),
            rows: BTreeMap::new(),
            cols: BTreeMap::new(),
        }
    }

    pub fn from_path(path: &Path) -> Self {
        let mut t = Self::empty(path.x0());
        for s in path.steps() {
            t.push(*s);
        }
        t
    }

    /// Records a move from the current last state to `next`.
    pub fn push(&mut self, next: StateId) {
        let from = self.last;
        self.add(from, next, 1);
        self.last = next;
    }

    /// Undoes the final move, given the state it came from.
    pub fn pop(&mut self, previous: StateId) {
        let to = self.last;
        self.remove(previous, to, 1);
        self.last = previous;
    }

    /// Adds `k` to `T[from][to]` without touching the start/last bookkeeping.
    pub fn add(&mut self, from: StateId, to: StateId, k: u64) {
        if k == 0 {
            return;
        }
        *self.counts.entry((from, to)).or_insert(0) += k;
        *self.rows.entry(from).or_insert(0) += k;
        *self.cols.entry(to).or_insert(0) += k;
        self.total += k;
    }

    /// Removes `k` from `T[from][to]`; panics if the entry is smaller than `k`.
    pub fn remove(&mut self, from: StateId, to: StateId, k: u64) {
        if k == 0 {
            return;
        }
        fn dec<K: Ord>(map: &mut BTreeMap<K, u64>, key: K, k: u64) {
            let v = map.get_mut(&key).expect("count underflow");
            assert!(*v >= k, "count underflow");
            *v -= k;
            if *v == 0 {
                map.remove(&key);
            }
        }
        dec(&mut self.counts, (from, to), k);
        dec(&mut self.rows, from, k);
        dec(&mut self.cols, to, k);
        self.total -= k;
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn last(&self) -> StateId {
        self.last
    }

    /// Total number of transitions, equal to the path length.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, from: StateId, to: StateId) -> u64 {
        self.counts.get(&(from, to)).copied().unwrap_or(0)
    }

    /// `T_{i,·}`: transitions out of `i`.
    pub fn row_total(&self, i: StateId) -> u64 {
        self.rows.get(&i).copied().unwrap_or(0)
    }

    /// `T_{·,i}`: transitions into `i`.
    pub fn col_total(&self, i: StateId) -> u64 {
        self.cols.get(&i).copied().unwrap_or(0)
    }

    /// Non-zero entries of row `i`.
    pub fn row(&self, i: StateId) -> impl Iterator<Item = (StateId, u64)> + '_ {
        self.counts
            .range((i, StateId(0))..=(i, StateId(u32::MAX)))
            .map(|(&(_, j), &c)| (j, c))
    }

    /// Non-zero entries in `(from, to)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((StateId, StateId), u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// The table itself, without start/last.
    pub fn table(&self) -> &BTreeMap<(StateId, StateId), u64> {
        &self.counts
    }

    /// Number of visits to `i`, counting time 0.
    pub fn visits(&self, i: StateId) -> u64 {
        self.col_total(i) + u64::from(i == self.start)
    }

    /// Out-degree minus in-degree is +1 at the start, -1 at the last state and
    /// 0 elsewhere (all zeros when start = last).
    pub fn is_flow_consistent(&self) -> bool {
        let mut states: Vec<StateId> = self.rows.keys().chain(self.cols.keys()).copied().collect();
        states.push(self.start);
        states.push(self.last);
        states.sort();
        states.dedup();
        let sums_ok = self.rows.values().sum::<u64>() == self.total
            && self.cols.values().sum::<u64>() == self.total
            && self.counts.values().sum::<u64>() == self.total;
        sums_ok
            && states.into_iter().all(|s| {
                let mut expected = 0i64;
                if s == self.start {
                    expected += 1;
                }
                if s == self.last {
                    expected -= 1;
                }
                self.row_total(s) as i64 - self.col_total(s) as i64 == expected
            })
    }
}

/// Counts adjacent pairs of `path`, validating every state against `space`.
pub fn transition_counts(space: &StateSpace, path: &Path) -> Result<TransitionCounts> {
    space.check_path(path)?;
    Ok(TransitionCounts::from_path(path))
}

/// Markov equivalence: same start and identical transition-count tables.
pub fn is_equivalent(p: &Path, q: &Path) -> bool {
    p.x0() == q.x0()
        && p.len() == q.len()
        && TransitionCounts::from_path(p).table() == TransitionCounts::from_path(q).table()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: usize) -> StateSpace {
        StateSpace::integers(n).unwrap()
    }

    #[test]
    fn counts_alternating_path() {
        let sp = s(2);
        let t = transition_counts(&sp, &sp.path("0", &["1", "0", "1"]).unwrap()).unwrap();
        let (a, b) = (sp.id("0").unwrap(), sp.id("1").unwrap());
        assert_eq!(t.get(a, b), 2);
        assert_eq!(t.get(b, a), 1);
        assert_eq!(t.table().len(), 2);
        assert_eq!(t.last(), b);
        assert_eq!(t.total(), 3);
    }

    #[test]
    fn empty_path_has_empty_table() {
        let sp = s(2);
        let t = transition_counts(&sp, &sp.path::<&str>("0", &[]).unwrap()).unwrap();
        assert!(t.table().is_empty());
        assert_eq!(t.last(), sp.id("0").unwrap());
        assert!(t.is_flow_consistent());
    }

    #[test]
    fn counts_counterexample_string() {
        let sp = s(4);
        let t = transition_counts(&sp, &sp.path("0", &["1", "3", "1", "2", "3"]).unwrap()).unwrap();
        let id = |l: &str| sp.id(l).unwrap();
        let expected: BTreeMap<_, _> = [
            ((id("0"), id("1")), 1),
            ((id("1"), id("3")), 1),
            ((id("3"), id("1")), 1),
            ((id("1"), id("2")), 1),
            ((id("2"), id("3")), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(t.table(), &expected);
        assert_eq!(t.last(), id("3"));
    }

    #[test]
    fn unknown_state_is_rejected() {
        let sp = s(2);
        let p = Path::new(StateId(0), vec![StateId(5)]);
        assert!(transition_counts(&sp, &p).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let sp = s(4);
        let a = sp.path("0", &["1", "3", "1", "2", "3"]).unwrap();
        let b = sp.path("0", &["1", "2", "3", "1", "3"]).unwrap();
        assert!(is_equivalent(&a, &b));
        assert!(is_equivalent(&a, &a));
        let c = sp.path("0", &["1", "0", "0", "1"]).unwrap();
        let d = sp.path("0", &["0", "1", "0", "1"]).unwrap();
        assert!(is_equivalent(&c, &d));
        let e = sp.path("1", &["1", "0", "0", "1"]).unwrap();
        assert!(!is_equivalent(&c, &e));
    }

    #[test]
    fn push_pop_restore_table() {
        let sp = s(3);
        let p = sp.path("0", &["1", "2", "1"]).unwrap();
        let mut t = TransitionCounts::from_path(&p);
        let before = t.clone();
        t.push(StateId(0));
        t.pop(StateId(1));
        assert_eq!(t, before);
    }

    fn arb_path(n: u32, max_len: usize) -> impl Strategy<Value = Path> {
        (0..n, proptest::collection::vec(0..n, 0..max_len)).prop_map(|(x0, steps)| {
            Path::new(StateId(x0), steps.into_iter().map(StateId).collect())
        })
    }

    proptest! {
        #[test]
        fn every_path_is_flow_consistent(p in arb_path(4, 40)) {
            let t = TransitionCounts::from_path(&p);
            prop_assert!(t.is_flow_consistent());
            prop_assert_eq!(t.total() as usize, p.len());
            for i in 0..4 {
                let i = StateId(i);
                let row: u64 = (0..4).map(|j| t.get(i, StateId(j))).sum();
                let col: u64 = (0..4).map(|j| t.get(StateId(j), i)).sum();
                prop_assert_eq!(row, t.row_total(i));
                prop_assert_eq!(col, t.col_total(i));
            }
        }

        #[test]
        fn equivalence_is_an_equivalence_relation(
            a in arb_path(2, 6), b in arb_path(2, 6), c in arb_path(2, 6)
        ) {
            prop_assert!(is_equivalent(&a, &a));
            prop_assert_eq!(is_equivalent(&a, &b), is_equivalent(&b, &a));
            if is_equivalent(&a, &b) && is_equivalent(&b, &c) {
                prop_assert!(is_equivalent(&a, &c));
            }
        }
    }
}
