//! Monte-Carlo cross-check of the retrodiction engine via the
//! non-counterfactual protocol, three sequential projective steps per
//! trial: start in the pre-selected state, measure the intermediate PVM,
//! then filter on the post-selection.
//!
//! Each trial draws its randomness from a ChaCha8 stream keyed by the
//! configured seed with the trial index as the stream number, so counts are
//! independent of how trials are partitioned across workers and identical
//! runs are bit-reproducible.
//!
//! The pre-selection filter itself is not simulated: trials start directly
//! in the pre-selected state, which only rescales attempted-trial counts
//! because the initial state ahead of a projective filter is arbitrary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abl::{abl_probabilities, TwoState};
use crate::error::{Error, Result};
use crate::hilbert::{Pvm, StateVector};
use crate::tol::CONDITIONING_EPS;

/// Trial budget and seed for one simulation run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimConfig {
    /// Total trials attempted (before post-selection filtering).
    pub samples: u64,
    pub seed: u64,
}

/// Frequencies conditional on surviving post-selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimEstimate {
    /// Accepted-trial count per intermediate outcome.
    pub counts: Vec<u64>,
    pub accepted_total: u64,
    pub frequencies: Vec<f64>,
    /// Binomial standard errors sqrt(f(1-f)/accepted_total).
    pub std_errors: Vec<f64>,
}

/// One line of the verification report, pairing the simulated frequency of
/// an outcome with its predicted conditioned probability.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub outcome: usize,
    pub zeta: f64,
    pub freq: f64,
    pub se: f64,
    /// |freq - zeta| / se; absent when the standard error vanishes while
    /// the deviation does not.
    pub sigma_distance: Option<f64>,
    /// Deviation exceeds four standard errors.
    pub flag: bool,
}

/// Simulation-versus-prediction comparison over one PVM.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub outcomes: Vec<VerifyOutcome>,
    pub accepted_total: u64,
    pub samples: u64,
}

impl VerifyReport {
    pub fn flagged(&self) -> usize {
        self.outcomes.iter().filter(|o| o.flag).count()
    }
}

/// Per-outcome branch data, fixed for the whole run.
struct Branch {
    /// Born weight of this outcome from the pre-selected state.
    prob: f64,
    /// Running sum of Born weights, for inverse-CDF sampling.
    cumulative: f64,
    /// Post-selection survival probability of the collapsed branch.
    accept: f64,
}

fn branches(pre: &StateVector, m: &Pvm, post: &StateVector) -> Result<Vec<Branch>> {
    let mut out = Vec::with_capacity(m.len());
    let mut cumulative = 0.0;
    for p in m.elements() {
        let prob = p.born_probability(pre)?;
        let accept = if prob >= CONDITIONING_EPS {
            let collapsed = p.collapse(pre)?;
            post.inner(&collapsed)?.norm_sqr()
        } else {
            0.0
        };
        cumulative += prob;
        out.push(Branch {
            prob,
            cumulative,
            accept,
        });
    }
    Ok(out)
}

/// Runs the three-step protocol: sample the intermediate outcome with Born
/// probability from the pre-selected state, collapse, then accept the trial
/// with probability |⟨post|collapsed⟩|². Frequencies are conditional on
/// acceptance. Deterministic given the inputs and the seed.
pub fn simulate_pps(
    pre: &StateVector,
    m: &Pvm,
    post: &StateVector,
    cfg: &SimConfig,
) -> Result<SimEstimate> {
    if cfg.samples == 0 {
        return Err(Error::NoSamples);
    }
    if pre.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: pre.dim(),
        });
    }
    if post.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: post.dim(),
        });
    }
    let branches = branches(pre, m, post)?;
    let n_outcomes = branches.len();
    let seed = cfg.seed;

    let counts = (0..cfg.samples)
        .into_par_iter()
        .fold(
            || vec![0u64; n_outcomes],
            |mut acc, trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let u1: f64 = rng.random();
                let outcome = branches
                    .iter()
                    .position(|b| u1 < b.cumulative)
                    .unwrap_or(n_outcomes - 1);
                let u2: f64 = rng.random();
                if u2 < branches[outcome].accept {
                    acc[outcome] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n_outcomes],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    let accepted_total: u64 = counts.iter().sum();
    if accepted_total == 0 {
        return Err(Error::NoAcceptedTrials);
    }
    let frequencies: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / accepted_total as f64)
        .collect();
    let std_errors: Vec<f64> = frequencies
        .iter()
        .map(|&f| (f * (1.0 - f) / accepted_total as f64).sqrt())
        .collect();
    Ok(SimEstimate {
        counts,
        accepted_total,
        frequencies,
        std_errors,
    })
}

/// Analytic acceptance rate of the protocol: Σ_j |⟨post|Π_j|pre⟩|², which is
/// exactly the retrodiction denominator.
pub fn acceptance_rate(pre: &StateVector, m: &Pvm, post: &StateVector) -> Result<f64> {
    Ok(branches(pre, m, post)?
        .iter()
        .map(|b| b.prob * b.accept)
        .sum())
}

/// Pairs simulated frequencies with predicted conditioned probabilities and
/// flags outcomes deviating by more than four standard errors.
pub fn verify_abl(
    pre: &StateVector,
    m: &Pvm,
    post: &StateVector,
    cfg: &SimConfig,
) -> Result<VerifyReport> {
    let ts = TwoState::new(pre.clone(), post.clone())?;
    let predicted = abl_probabilities(&ts, m)?;
    let sim = simulate_pps(pre, m, post, cfg)?;
    let outcomes = predicted
        .zetas()
        .iter()
        .enumerate()
        .map(|(outcome, &zeta)| {
            let freq = sim.frequencies[outcome];
            let se = sim.std_errors[outcome];
            let delta = (freq - zeta).abs();
            let sigma_distance = if se > 0.0 {
                Some(delta / se)
            } else if delta == 0.0 {
                Some(0.0)
            } else {
                None
            };
            VerifyOutcome {
                outcome,
                zeta,
                freq,
                se,
                sigma_distance,
                flag: delta > 4.0 * se,
            }
        })
        .collect();
    Ok(VerifyReport {
        outcomes,
        accepted_total: sim.accepted_total,
        samples: cfg.samples,
    })
}
