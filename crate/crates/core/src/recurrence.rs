//! Single-path recurrence diagnostics.
//!
//! Recurrence is an almost-sure statement about infinite paths, so every
//! quantity here is a diagnostic, not a proof: it shows how the relevant
//! series of predictive probabilities grows along a simulated path.

use std::collections::VecDeque;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};
use crate::rng::{self, tags, Rng};
use crate::schemes::{sample_next, History, PredictiveScheme};
use crate::space::StateId;

pub const DIAGNOSTIC_TAG: &str = "diagnostic, not proof";

/// How summands are computed. Both modes sample the path from the
/// floating-point predictive; exact mode evaluates each summand as a rational
/// first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    Float,
}

/// Partial sums `S_N = Σ_{n<N} p(x0 | x0, x_1, ..., x_n)` along one path.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceTrace {
    /// `partial_sums[N - 1] = S_N` for `N = 1..=n_steps`.
    pub partial_sums: Vec<f64>,
    /// Times `n ≥ 1` with `x_n = x0`.
    pub returns: Vec<usize>,
    pub tag: &'static str,
}

/// Partial sums of `P(X_{τ_n(i)+1} = j | past)` over the visits to `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReturnTrace {
    /// Times of the visits to `i` that were followed by a step.
    pub visit_times: Vec<usize>,
    /// `partial_sums[n - 1]` sums the first `n` summands.
    pub partial_sums: Vec<f64>,
    pub tag: &'static str,
}

impl ReturnTrace {
    pub fn is_empty(&self) -> bool {
        self.visit_times.is_empty()
    }
}

fn step<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    history: &History,
    target: StateId,
    arithmetic: Arithmetic,
    rng: &mut Rng,
) -> Result<(f64, StateId)> {
    match arithmetic {
        Arithmetic::Float => {
            let d = scheme.next_float(history)?;
            Ok((d.get(target), sample_next(rng, &d)?))
        }
        Arithmetic::Exact => {
            let d = scheme.next_exact(history)?;
            let p = to_f64(&d.get(target));
            Ok((p, sample_next(rng, &d.to_f64())?))
        }
    }
}

pub fn recurrence_sum_trace_with<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    x0: StateId,
    n_steps: usize,
    arithmetic: Arithmetic,
    rng: &mut Rng,
) -> Result<RecurrenceTrace> {
    if n_steps == 0 {
        return Err(Error::Input(
            "a recurrence trace needs at least one step".into(),
        ));
    }
    let mut history = History::new(x0);
    let mut sums = Vec::with_capacity(n_steps);
    let mut returns = Vec::new();
    let mut s = 0.0;
    for n in 0..n_steps {
        let (p, next) = step(scheme, &history, x0, arithmetic, rng)?;
        s += p;
        sums.push(s);
        history.push(next);
        if next == x0 {
            returns.push(n + 1);
        }
    }
    Ok(RecurrenceTrace {
        partial_sums: sums,
        returns,
        tag: DIAGNOSTIC_TAG,
    })
}

/// Simulates `n_steps` steps on the stream `[RECURRENCE]` of `seed`.
pub fn recurrence_sum_trace<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    x0: StateId,
    n_steps: usize,
    seed: u64,
) -> Result<RecurrenceTrace> {
    let mut rng = rng::stream(seed, &[tags::RECURRENCE]);
    recurrence_sum_trace_with(scheme, x0, n_steps, Arithmetic::Float, &mut rng)
}

/// Independent traces; replicate `r` uses the stream
/// `[RECURRENCE, REPLICATE, r]`.
pub fn recurrence_replicates<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    x0: StateId,
    n_steps: usize,
    replicates: usize,
    seed: u64,
    arithmetic: Arithmetic,
) -> Result<Vec<RecurrenceTrace>> {
    (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(seed, &[tags::RECURRENCE, tags::REPLICATE, r as u64]);
            recurrence_sum_trace_with(scheme, x0, n_steps, arithmetic, &mut rng)
        })
        .collect()
}

/// Accumulates `P(next = j | past)` at each visit to `i` before step
/// `n_steps`, along a path simulated on the stream `[RECURRENCE]` of `seed`.
pub fn return_diagnostic<S: PredictiveScheme + ?Sized>(
    scheme: &S,
    i: StateId,
    j: StateId,
    x0: StateId,
    n_steps: usize,
    seed: u64,
) -> Result<ReturnTrace> {
    let mut rng = rng::stream(seed, &[tags::RECURRENCE]);
    let mut history = History::new(x0);
    let mut visit_times = Vec::new();
    let mut sums = Vec::new();
    let mut s = 0.0;
    for t in 0..n_steps {
        let d = scheme.next_float(&history)?;
        if history.last() == i {
            s += d.get(j);
            sums.push(s);
            visit_times.push(t);
        }
        history.push(sample_next(&mut rng, &d)?);
    }
    Ok(ReturnTrace {
        visit_times,
        partial_sums: sums,
        tag: DIAGNOSTIC_TAG,
    })
}

/// `Σ_{n<N} α q / (α + n)` for `N = 1..=n_steps`: the per-step lower bound of
/// the reinforced urn's return sum when every state shares `α` and `q`.
pub fn hoppe_return_bound(alpha: f64, q_x0: f64, n_steps: usize) -> Vec<f64> {
    let mut s = 0.0;
    (0..n_steps)
        .map(|n| {
            s += alpha * q_x0 / (alpha + n as f64);
            s
        })
        .collect()
}

/// `α q (H_{N+1} - 1)` for `N = 1..=n_steps`; below [`hoppe_return_bound`]
/// whenever `α ≤ 2`.
pub fn harmonic_bound(alpha: f64, q_x0: f64, n_steps: usize) -> Vec<f64> {
    let mut h = 0.0;
    (1..=n_steps)
        .map(|n| {
            h += 1.0 / (n as f64 + 1.0);
            alpha * q_x0 * h
        })
        .collect()
}

/// Whether the directed graph of positive entries of `q` is strongly
/// connected. Each row must be zero or sum to one.
pub fn is_irreducible(q: &[Vec<Rational>]) -> Result<bool> {
    let n = q.len();
    for (i, row) in q.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Input(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if row.iter().any(|x| *x < Rational::zero()) {
            return Err(Error::Input(format!("row {i} has a negative entry")));
        }
        let total: Rational = row.iter().fold(Rational::zero(), |a, x| a + x);
        if !total.is_zero() && total != Rational::from_integer(1.into()) {
            return Err(Error::Input(format!("row {i} sums to {total}, not 1")));
        }
    }
    if n == 0 {
        return Ok(true);
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(a) = queue.pop_front() {
            for b in 0..n {
                let w = if forward { &q[a][b] } else { &q[b][a] };
                if !seen[b] && !w.is_zero() {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    Ok(reach(true) && reach(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::schemes::{ColoredGraph, FixedScheme, HoppeParams, HoppeScheme};
    use crate::space::StateSpace;

    fn hoppe() -> HoppeScheme {
        let sp = StateSpace::integers(2).unwrap();
        HoppeScheme::new(HoppeParams::uniform(&sp, int(1)).unwrap())
    }

    #[test]
    fn hoppe_trace_dominates_the_harmonic_bounds() {
        let t = recurrence_sum_trace(&hoppe(), StateId(0), 1000, 11).unwrap();
        let exact = hoppe_return_bound(1.0, 0.5, 1000);
        let h = harmonic_bound(1.0, 0.5, 1000);
        for n in 0..1000 {
            assert!(t.partial_sums[n] >= exact[n] && exact[n] >= h[n]);
        }
        assert!(t.partial_sums[999] >= 3.74);
        assert!(t.partial_sums.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(t.tag, DIAGNOSTIC_TAG);
    }

    #[test]
    fn exact_and_float_summands_agree() {
        let s = hoppe();
        let mut r1 = rng::stream(3, &[1]);
        let mut r2 = rng::stream(3, &[1]);
        let a = recurrence_sum_trace_with(&s, StateId(0), 300, Arithmetic::Exact, &mut r1).unwrap();
        let b = recurrence_sum_trace_with(&s, StateId(0), 300, Arithmetic::Float, &mut r2).unwrap();
        assert_eq!(a.returns, b.returns);
        for (x, y) in a.partial_sums.iter().zip(&b.partial_sums) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_schemes() {
        let never = FixedScheme::point(StateId(1));
        let t = recurrence_sum_trace(&never, StateId(0), 10, 1).unwrap();
        assert!(t.partial_sums.iter().all(|s| *s == 0.0));
        let always = FixedScheme::point(StateId(0));
        let t = recurrence_sum_trace(&always, StateId(0), 10, 1).unwrap();
        assert_eq!(
            t.partial_sums,
            (1..=10).map(|n| n as f64).collect::<Vec<_>>()
        );
        assert_eq!(t.returns.len(), 10);
    }

    #[test]
    fn return_diagnostic_bounds_and_empty_case() {
        let s = hoppe();
        let r = return_diagnostic(&s, StateId(1), StateId(0), StateId(0), 2000, 5).unwrap();
        let mut bound = 0.0;
        for (n, sum) in r.partial_sums.iter().enumerate() {
            bound += 0.5 / (1.0 + n as f64);
            assert!(*sum >= bound - 1e-12);
        }
        let never = FixedScheme::point(StateId(0));
        let r = return_diagnostic(&never, StateId(1), StateId(0), StateId(0), 100, 5).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn replicates_are_reproducible() {
        let s = hoppe();
        let a = recurrence_replicates(&s, StateId(0), 50, 4, 9, Arithmetic::Float).unwrap();
        let b = recurrence_replicates(&s, StateId(0), 50, 4, 9, Arithmetic::Float).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn irreducibility() {
        let (z, o) = (int(0), int(1));
        assert!(is_irreducible(&[vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]).unwrap());
        let block = vec![
            vec![o.clone(), z.clone(), z.clone()],
            vec![z.clone(), ratio(1, 2), ratio(1, 2)],
            vec![z.clone(), ratio(1, 2), ratio(1, 2)],
        ];
        assert!(!is_irreducible(&block).unwrap());
        assert!(
            is_irreducible(&[vec![o.clone(), ratio(1, 2)], vec![o.clone(), z.clone()]]).is_err()
        );
        let sp = StateSpace::new(["a", "b", "c"]).unwrap();
        let params = crate::schemes::ErrwParams::new(
            &sp,
            vec![
                (StateId(0), StateId(1), int(1)),
                (StateId(1), StateId(2), int(1)),
                (StateId(0), StateId(2), int(1)),
            ],
        )
        .unwrap();
        let (g, _) = ColoredGraph::from_errw(&sp, &params).unwrap();
        assert!(is_irreducible(&g.weight_matrix()).unwrap());
    }
}
