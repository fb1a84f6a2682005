//! Reinforced random walks and predictive characterizations of Markov
//! exchangeability.
//!
//! The crate is organised bottom-up:
//!
//! * [`space`], [`counts`], [`successor`], [`enumerate`]: state spaces, paths,
//!   transition-count tables, successor matrices and the combinatorics of the
//!   Markov equivalence relation.
//! * [`schemes`]: the [`PredictiveScheme`](schemes::PredictiveScheme) contract
//!   together with edge-reinforced walks, reinforced Hoppe urns, colored
//!   edge-reinforced walks, table-driven schemes and exact path probabilities.
//! * [`exchangeability`]: executable checkers for the predictive conditions that
//!   characterize Markov exchangeable laws, plus a brute-force oracle.
//! * [`recurrence`]: Monte Carlo recurrence diagnostics.
//! * [`bayes`]: the partitioned-colors Dirichlet prior, its conjugate update and
//!   the empirical transition estimator.
//! * [`dummy`]: graph augmentation with dummy states, grouped marginals and a
//!   Gibbs sampler over latent successors.
//! * [`specfile`] and [`cli`]: JSON graph specs, path/trace CSV and the command
//!   line front end.

pub mod bayes;
pub mod cli;
pub mod counts;
pub mod dummy;
pub mod enumerate;
pub mod error;
pub mod exchangeability;
pub mod ks;
pub mod rational;
pub mod recurrence;
pub mod rng;
pub mod schemes;
pub mod space;
pub mod specfile;
pub mod successor;

pub use counts::{is_equivalent, transition_counts, TransitionCounts};
pub use error::{Error, Result};
pub use rational::Rational;
pub use space::{Path, StateId, StateSpace};
