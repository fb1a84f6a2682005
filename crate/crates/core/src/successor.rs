//! Successor matrices: for each state, the sequence of states that followed
//! its successive visits.
//!
//! On a finite path the final visit to the last state has no successor and is
//! simply left out of that row; unvisited states have empty rows.

use std::collections::BTreeMap;

use crate::space::{Path, StateId};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuccessorMatrix {
    rows: BTreeMap<StateId, Vec<StateId>>,
    visit_times: BTreeMap<StateId, Vec<usize>>,
}

impl SuccessorMatrix {
    pub fn from_path(path: &Path) -> Self {
        let mut m = SuccessorMatrix::default();
        let n = path.len();
        for (t, s) in path.states().enumerate() {
            m.visit_times.entry(s).or_default().push(t);
            if t < n {
                m.rows.entry(s).or_default().push(path.at(t + 1));
            }
        }
        m
    }

    /// `(V_{i,1}, V_{i,2}, ...)`; empty for unvisited states.
    pub fn row(&self, i: StateId) -> &[StateId] {
        self.rows.get(&i).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `(τ_1(i), τ_2(i), ...)`, the times at which `i` is visited.
    pub fn visit_times(&self, i: StateId) -> &[usize] {
        self.visit_times.get(&i).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `V_{i,n}` with `n` starting at 1.
    pub fn successor(&self, i: StateId, n: usize) -> Option<StateId> {
        n.checked_sub(1).and_then(|k| self.row(i).get(k).copied())
    }

    pub fn rows(&self) -> impl Iterator<Item = (StateId, &[StateId])> {
        self.rows.iter().map(|(s, r)| (*s, r.as_slice()))
    }

    /// Replays the rows from `x0`: each visit consumes the next successor of
    /// the current state until a row is exhausted.
    pub fn reconstruct(&self, x0: StateId) -> Path {
        let mut cursor: BTreeMap<StateId, usize> = BTreeMap::new();
        let mut path = Path::empty(x0);
        let mut current = x0;
        loop {
            let k = cursor.entry(current).or_insert(0);
            match self.row(current).get(*k) {
                Some(&next) => {
                    *k += 1;
                    path.push(next);
                    current = next;
                }
                None => return path,
            }
        }
    }
}

pub fn successor_matrix(path: &Path) -> SuccessorMatrix {
    SuccessorMatrix::from_path(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::StateSpace;
    use proptest::prelude::*;

    #[test]
    fn rows_and_visit_times() {
        let sp = StateSpace::integers(2).unwrap();
        let p = sp.path("0", &["1", "0", "1", "1"]).unwrap();
        let m = successor_matrix(&p);
        let (a, b) = (StateId(0), StateId(1));
        assert_eq!(m.row(a), &[b, b]);
        assert_eq!(m.row(b), &[a, b]);
        assert_eq!(m.visit_times(b), &[1, 3, 4]);
        assert_eq!(m.successor(b, 3), None);
        assert_eq!(m.successor(a, 1), Some(b));
    }

    #[test]
    fn empty_path_has_empty_rows() {
        let m = successor_matrix(&Path::empty(StateId(0)));
        assert!(m.row(StateId(0)).is_empty());
        assert_eq!(m.rows().count(), 0);
        assert_eq!(m.visit_times(StateId(0)), &[0]);
    }

    #[test]
    fn self_loops() {
        let sp = StateSpace::integers(2).unwrap();
        let m = successor_matrix(&sp.path("0", &["0", "0"]).unwrap());
        assert_eq!(m.row(StateId(0)), &[StateId(0), StateId(0)]);
    }

    proptest! {
        #[test]
        fn rows_reconstruct_the_path(
            x0 in 0u32..3, steps in proptest::collection::vec(0u32..3, 0..50)
        ) {
            let p = Path::new(StateId(x0), steps.into_iter().map(StateId).collect());
            let m = successor_matrix(&p);
            prop_assert_eq!(m.reconstruct(p.x0()), p.clone());
            for (i, row) in m.rows() {
                for (n, v) in row.iter().enumerate() {
                    let t = m.visit_times(i)[n];
                    prop_assert_eq!(p.at(t + 1), *v);
                }
            }
        }
    }
}
