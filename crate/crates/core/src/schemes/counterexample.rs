//! A one-step sufficient scheme that is not Markov exchangeable: after
//! `n - 1` steps the next state is uniform on `{1, ..., n}`.

use num_traits::One;

use super::{Distribution, History, PredictiveScheme, Sufficiency};
use crate::error::{Error, Result};
use crate::rational::{from_count, Rational};
use crate::space::{StateId, StateSpace};

#[derive(Clone, Debug)]
pub struct CounterexampleScheme {
    space: StateSpace,
    /// `by_value[k]` is the state labelled `k`, when present.
    by_value: Vec<Option<StateId>>,
}

impl CounterexampleScheme {
    /// Uses the states of `space` whose labels are decimal integers.
    pub fn new(space: StateSpace) -> Self {
        let mut by_value = Vec::new();
        for id in space.ids() {
            if let Ok(k) = space.label(id).parse::<usize>() {
                if by_value.len() <= k {
                    by_value.resize(k + 1, None);
                }
                by_value[k] = Some(id);
            }
        }
        CounterexampleScheme { space, by_value }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    fn state(&self, k: usize) -> Result<StateId> {
        self.by_value
            .get(k)
            .copied()
            .flatten()
            .ok_or_else(|| Error::Model(format!("state `{k}` is outside the configured space")))
    }
}

/// The scheme on `{0, 1, ..., max_len}`, enough for paths of `max_len` steps
/// from `0`.
pub fn counterexample_scheme(max_len: usize) -> Result<CounterexampleScheme> {
    Ok(CounterexampleScheme::new(StateSpace::integers(
        max_len.max(1) + 1,
    )?))
}

impl PredictiveScheme for CounterexampleScheme {
    fn sufficiency(&self) -> Sufficiency {
        // n = 1 + Σ T_{i,j}
        Sufficiency::LastAndCounts
    }

    fn next_exact(&self, history: &History) -> Result<Distribution<Rational>> {
        let n = history.len() + 1;
        let p = Rational::one() / from_count(n as u64);
        let entries = (1..=n)
            .map(|k| Ok((self.state(k)?, p.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Distribution::new(entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::schemes::path_probability;

    #[test]
    fn first_steps() {
        let s = counterexample_scheme(5).unwrap();
        let sp = s.space().clone();
        let id = |l: &str| sp.id(l).unwrap();
        let h = History::new(id("0"));
        assert_eq!(s.next_exact(&h).unwrap(), Distribution::point(id("1")));
        let h = History::from_path(&sp.path("0", &["1", "2"]).unwrap());
        let d = s.next_exact(&h).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.get(id("3")), ratio(1, 3));
        assert_eq!(d.get(id("0")), int(0));
    }

    #[test]
    fn the_two_equivalent_strings() {
        let s = counterexample_scheme(5).unwrap();
        let sp = s.space();
        let bad = sp.path("0", &["1", "3", "1", "2", "3"]).unwrap();
        let good = sp.path("0", &["1", "2", "3", "1", "3"]).unwrap();
        assert!(crate::is_equivalent(&bad, &good));
        assert_eq!(path_probability(&s, &bad).unwrap(), int(0));
        assert_eq!(path_probability(&s, &good).unwrap(), ratio(1, 120));
    }

    #[test]
    fn running_out_of_states_is_a_model_error() {
        let s = counterexample_scheme(2).unwrap();
        let sp = s.space();
        let h = History::from_path(&sp.path("0", &["1", "2"]).unwrap());
        assert!(matches!(s.next_exact(&h), Err(Error::Model(_))));
    }
}
