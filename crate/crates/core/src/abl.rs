//! Retrodiction engine: the probability of an intermediate measurement
//! outcome conditioned on a pre- and a post-selected state, in both the
//! general PVM form and the dichotomic {Π, 𝟙−Π} form.
//!
//! For a two-state (|ψ⟩ pre, |φ⟩ post) and a PVM {Π_i} the conditioned
//! probability of outcome i is
//!
//! ```text
//! ζ_i = |⟨φ|Π_i|ψ⟩|² / Σ_j |⟨φ|Π_j|ψ⟩|²
//! ```
//!
//! Each ζ is conditioned on its own setting; no joint distribution across
//! settings is claimed anywhere in this module. That per-setting character
//! is exactly what makes the assignment context dependent.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{Projector, Pvm, StateVector};
use crate::pps::DichotomicSetting;
use crate::tol::{COMPOSITE_EPS, CONDITIONING_EPS};

/// Ordered pair of pre- and post-selection states of equal dimension.
#[derive(Debug, Clone)]
pub struct TwoState {
    pre: StateVector,
    post: StateVector,
}

impl TwoState {
    pub fn new(pre: StateVector, post: StateVector) -> Result<Self> {
        if pre.dim() != post.dim() {
            return Err(Error::DimensionMismatch {
                expected: pre.dim(),
                found: post.dim(),
            });
        }
        Ok(Self { pre, post })
    }

    pub fn pre(&self) -> &StateVector {
        &self.pre
    }

    pub fn post(&self) -> &StateVector {
        &self.post
    }

    pub fn dim(&self) -> usize {
        self.pre.dim()
    }
}

/// Conditioned outcome distribution over one PVM: each ζ_i lies in [0, 1]
/// and the ζ's sum to 1.
#[derive(Debug, Clone)]
pub struct AblDistribution {
    setting: Pvm,
    zetas: Vec<f64>,
}

impl AblDistribution {
    pub fn setting(&self) -> &Pvm {
        &self.setting
    }

    pub fn zetas(&self) -> &[f64] {
        &self.zetas
    }
}

/// Transition amplitude ⟨post|Π|pre⟩.
fn sandwich(post: &StateVector, p: &Projector, pre: &StateVector) -> Result<Complex64> {
    let image = p.apply(pre)?;
    if post.dim() != image.len() {
        return Err(Error::DimensionMismatch {
            expected: post.dim(),
            found: image.len(),
        });
    }
    Ok(post
        .amplitudes()
        .iter()
        .zip(image.iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Round-off below the guard is absorbed silently; anything larger means the
/// arithmetic itself went wrong.
fn clamp_zeta(z: f64) -> Result<f64> {
    if !(-COMPOSITE_EPS..=1.0 + COMPOSITE_EPS).contains(&z) {
        return Err(Error::Internal(format!(
            "conditioned probability {z} outside [0, 1] beyond tolerance"
        )));
    }
    Ok(z.clamp(0.0, 1.0))
}

/// Conditioned probabilities for every outcome of `m`.
///
/// Errors with [`Error::UndefinedConditioning`] when the denominator
/// Σ_j |⟨φ|Π_j|ψ⟩|² vanishes, i.e. the post-selection is impossible for
/// every intermediate outcome. Degenerate conditioning is an error rather
/// than a 0/0 convention: a silent convention would corrupt scans.
pub fn abl_probabilities(ts: &TwoState, m: &Pvm) -> Result<AblDistribution> {
    let numerators: Vec<f64> = m
        .elements()
        .iter()
        .map(|p| sandwich(ts.post(), p, ts.pre()).map(|a| a.norm_sqr()))
        .collect::<Result<_>>()?;
    let denominator: f64 = numerators.iter().sum();
    if denominator <= CONDITIONING_EPS {
        return Err(Error::UndefinedConditioning);
    }
    let zetas = numerators
        .iter()
        .map(|n| clamp_zeta(n / denominator))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!((zetas.iter().sum::<f64>() - 1.0).abs() < COMPOSITE_EPS);
    Ok(AblDistribution {
        setting: m.clone(),
        zetas,
    })
}

/// Conditioned probability that the filtered outcome Π of the setting
/// {Π, 𝟙−Π} occurs:
///
/// ```text
/// ζ = |⟨φ|Π|ψ⟩|² / (|⟨φ|Π|ψ⟩|² + |⟨φ|(𝟙−Π)|ψ⟩|²)
/// ```
///
/// Agrees with `abl_probabilities` on the induced two-element PVM.
pub fn abl_dichotomic(ts: &TwoState, p: &Projector) -> Result<f64> {
    dichotomic_zeta(ts, p, &p.complement())
}

/// Shared evaluation path for callers that cache the complement.
pub(crate) fn dichotomic_zeta(ts: &TwoState, p: &Projector, complement: &Projector) -> Result<f64> {
    let num = sandwich(ts.post(), p, ts.pre())?.norm_sqr();
    let rest = sandwich(ts.post(), complement, ts.pre())?.norm_sqr();
    let denominator = num + rest;
    if denominator <= CONDITIONING_EPS {
        return Err(Error::UndefinedConditioning);
    }
    clamp_zeta(num / denominator)
}

/// One ζ per contemplated setting, each via the dichotomic rule.
///
/// The result is a sequence of per-setting marginals; whether they admit a
/// joint distribution is left entirely to the caller. Conditioning failure
/// is reported with the index of the offending setting. A plain map with no
/// caching: settings lists stay at 9 elements or fewer in practice.
pub fn counterfactual_assignment(
    ts: &TwoState,
    settings: &[DichotomicSetting],
) -> Result<Vec<f64>> {
    settings
        .iter()
        .enumerate()
        .map(|(index, s)| {
            abl_dichotomic(ts, s.projector()).map_err(|e| match e {
                Error::UndefinedConditioning => Error::UndefinedConditioningAt { index },
                other => other,
            })
        })
        .collect()
}
