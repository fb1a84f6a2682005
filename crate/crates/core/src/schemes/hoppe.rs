//! Reinforced Hoppe urns: one urn per state, each holding `α_i` black balls
//! and a color law `q_i` on the states.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{Distribution, History, PredictiveScheme, Sufficiency};
use crate::counts::TransitionCounts;
use crate::error::{Error, Result};
use crate::rational::{from_count, is_positive, to_f64, Rational};
use crate::rng::{self, Rng};
use crate::space::{StateId, StateSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct HoppeParams {
    alpha: Vec<Rational>,
    q: Vec<Vec<Rational>>,
    alpha_f: Vec<f64>,
    /// `α_i q_i(j)` in floating point.
    prior_f: Vec<Vec<f64>>,
}

impl HoppeParams {
    /// `alpha[i] > 0` and each `q[i]` a probability vector over the space.
    pub fn new(space: &StateSpace, alpha: Vec<Rational>, q: Vec<Vec<Rational>>) -> Result<Self> {
        let n = space.len();
        if alpha.len() != n || q.len() != n {
            return Err(Error::Input(format!(
                "expected {n} urn weights and {n} color laws"
            )));
        }
        for (i, (a, row)) in alpha.iter().zip(&q).enumerate() {
            let label = space.label(StateId(i as u32));
            if !is_positive(a) {
                return Err(Error::Model(format!("urn `{label}` needs α > 0")));
            }
            if row.len() != n || row.iter().any(|p| *p < Rational::zero()) {
                return Err(Error::Model(format!(
                    "urn `{label}` has an invalid color law"
                )));
            }
            if !row.iter().fold(Rational::zero(), |acc, p| acc + p).is_one() {
                return Err(Error::Model(format!(
                    "color law of urn `{label}` must sum to one"
                )));
            }
        }
        let alpha_f = alpha.iter().map(to_f64).collect();
        let prior_f = alpha
            .iter()
            .zip(&q)
            .map(|(a, row)| row.iter().map(|p| to_f64(&(a * p))).collect())
            .collect();
        Ok(HoppeParams {
            alpha,
            q,
            alpha_f,
            prior_f,
        })
    }

    /// Every urn shares `alpha` and the color law `q`.
    pub fn common(space: &StateSpace, alpha: Rational, q: Vec<Rational>) -> Result<Self> {
        let n = space.len();
        Self::new(space, vec![alpha; n], vec![q; n])
    }

    /// Common `alpha` and uniform colors.
    pub fn uniform(space: &StateSpace, alpha: Rational) -> Result<Self> {
        let n = space.len();
        let u = Rational::new(1.into(), (n as i64).into());
        Self::common(space, alpha, vec![u; n])
    }

    pub fn alpha(&self, i: StateId) -> &Rational {
        &self.alpha[i.index()]
    }

    pub fn q(&self, i: StateId, j: StateId) -> &Rational {
        &self.q[i.index()][j.index()]
    }

    pub fn n_states(&self) -> usize {
        self.alpha.len()
    }
}

/// `π(j | T_i, i) = (α_i q_i(j) + T_{i,j}) / (α_i + T_{i,·})` with the row
/// given densely.
pub fn hoppe_pi(params: &HoppeParams, j: StateId, row: &[u64], i: StateId) -> Rational {
    let a = params.alpha(i);
    let total: u64 = row.iter().sum();
    (a * params.q(i, j) + from_count(row[j.index()])) / (a + from_count(total))
}

/// The Hoppe predictive law out of `i`, reading only the counts from `i`.
pub fn hoppe_predictive(
    params: &HoppeParams,
    counts: &TransitionCounts,
    i: StateId,
) -> Result<Distribution<Rational>> {
    if i.index() >= params.n_states() {
        return Err(Error::Input(format!(
            "state index {} outside the urn set",
            i.0
        )));
    }
    let a = params.alpha(i);
    let denom = a + from_count(counts.row_total(i));
    Ok(Distribution::new(
        (0..params.n_states() as u32)
            .map(StateId)
            .map(|j| {
                let num = a * params.q(i, j) + from_count(counts.get(i, j));
                (j, num / &denom)
            })
            .collect(),
    ))
}

#[derive(Clone, Debug)]
pub struct HoppeScheme {
    params: HoppeParams,
}

impl HoppeScheme {
    pub fn new(params: HoppeParams) -> Self {
        HoppeScheme { params }
    }

    pub fn params(&self) -> &HoppeParams {
        &self.params
    }
}

impl PredictiveScheme for HoppeScheme {
    fn sufficiency(&self) -> Sufficiency {
        Sufficiency::LastAndRow
    }

    fn next_exact(&self, history: &History) -> Result<Distribution<Rational>> {
        hoppe_predictive(&self.params, history.counts(), history.last())
    }

    fn next_float(&self, history: &History) -> Result<Distribution<f64>> {
        let i = history.last();
        let counts = history.counts();
        let k = i.index();
        let denom = self.params.alpha_f[k] + counts.row_total(i) as f64;
        Ok(Distribution::new(
            self.params.prior_f[k]
                .iter()
                .enumerate()
                .map(|(j, w)| {
                    let j = StateId(j as u32);
                    (j, (w + counts.get(i, j) as f64) / denom)
                })
                .collect(),
        ))
    }
}

/// Urn-level simulation of the reinforced Hoppe scheme on a countable state
/// space labelled by `u64`.
///
/// At each step a ball is drawn from the urn of the current state. A colored
/// ball is returned with a copy; a black ball is returned together with a new
/// ball whose color is drawn from that urn's base law. The walk moves to the
/// color of the added ball.
pub struct HoppeUrn<A, Q>
where
    A: Fn(u64) -> f64,
    Q: Fn(u64, &mut Rng) -> u64,
{
    alpha: A,
    base: Q,
}

#[derive(Default)]
struct Urn {
    balls: Vec<(u64, u64)>,
    total: u64,
}

impl<A, Q> HoppeUrn<A, Q>
where
    A: Fn(u64) -> f64,
    Q: Fn(u64, &mut Rng) -> u64,
{
    /// `alpha(i)` black balls in urn `i`; `base(i, rng)` samples its color law.
    pub fn new(alpha: A, base: Q) -> Self {
        HoppeUrn { alpha, base }
    }

    pub fn simulate(&self, x0: u64, n: usize, rng: &mut Rng) -> Vec<u64> {
        let mut urns: HashMap<u64, Urn> = HashMap::new();
        let mut current = x0;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let alpha = (self.alpha)(current);
            let urn = urns.entry(current).or_default();
            let u = rng::uniform(rng) * (alpha + urn.total as f64);
            let color = if u < alpha {
                let c = (self.base)(current, rng);
                match urn.balls.iter_mut().find(|(col, _)| *col == c) {
                    Some(ball) => ball.1 += 1,
                    None => urn.balls.push((c, 1)),
                }
                c
            } else {
                let mut acc = alpha;
                let mut pick = urn.balls.len() - 1;
                for (k, (_, count)) in urn.balls.iter().enumerate() {
                    acc += *count as f64;
                    if u < acc {
                        pick = k;
                        break;
                    }
                }
                urn.balls[pick].1 += 1;
                urn.balls[pick].0
            };
            urn.total += 1;
            out.push(color);
            current = color;
        }
        out
    }
}
