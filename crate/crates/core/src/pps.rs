//! Pre/post-selection scenarios and their classification.
//!
//! A counterfactual scenario pairs a two-state with a contemplated setting.
//! Two exclusive filtered outcomes whose conditioned probabilities sum above
//! 1 form a logical paradox (the exclusivity principle bounds the sum of
//! probabilities of mutually exclusive events by 1); two-states are
//! classified by whether any supplied exclusive pair produces such a
//! witness. The classic three-box scenario is provided as the canonical
//! paradoxical instance.

use crate::abl::{abl_dichotomic, abl_probabilities, AblDistribution, TwoState};
use crate::error::{Error, Result};
use crate::hilbert::{Projector, Pvm, StateVector};
use crate::tol::{COMPOSITE_EPS, PARADOX_GUARD};

/// A two-outcome setting {Π, 𝟙−Π}, tagged by its filtered outcome Π.
#[derive(Debug, Clone)]
pub struct DichotomicSetting {
    pi: Projector,
}

impl DichotomicSetting {
    pub fn new(pi: Projector) -> Self {
        Self { pi }
    }

    /// The filtered outcome.
    pub fn projector(&self) -> &Projector {
        &self.pi
    }

    /// The full two-outcome measurement.
    pub fn pvm(&self) -> Pvm {
        Pvm::dichotomic(&self.pi)
    }

    pub fn dim(&self) -> usize {
        self.pi.dim()
    }
}

/// A two-state together with one contemplated measurement setting.
#[derive(Debug, Clone)]
pub struct CounterfactualScenario {
    two_state: TwoState,
    setting: Pvm,
}

impl CounterfactualScenario {
    pub fn new(two_state: TwoState, setting: Pvm) -> Result<Self> {
        if two_state.dim() != setting.dim() {
            return Err(Error::DimensionMismatch {
                expected: two_state.dim(),
                found: setting.dim(),
            });
        }
        Ok(Self { two_state, setting })
    }

    pub fn two_state(&self) -> &TwoState {
        &self.two_state
    }

    pub fn setting(&self) -> &Pvm {
        &self.setting
    }

    /// Whether the conditioned distribution exists for this scenario.
    pub fn is_defined(&self) -> bool {
        self.distribution().is_ok()
    }

    pub fn distribution(&self) -> Result<AblDistribution> {
        abl_probabilities(&self.two_state, &self.setting)
    }
}

/// Evidence of a logical paradox: two exclusive outcomes whose conditioned
/// probabilities sum above 1.
#[derive(Debug, Clone)]
pub struct ParadoxWitness {
    two_state: TwoState,
    pi1: Projector,
    pi2: Projector,
    zeta1: f64,
    zeta2: f64,
}

impl ParadoxWitness {
    pub fn two_state(&self) -> &TwoState {
        &self.two_state
    }

    pub fn projectors(&self) -> (&Projector, &Projector) {
        (&self.pi1, &self.pi2)
    }

    pub fn zeta1(&self) -> f64 {
        self.zeta1
    }

    pub fn zeta2(&self) -> f64 {
        self.zeta2
    }

    pub fn sum(&self) -> f64 {
        self.zeta1 + self.zeta2
    }
}

/// Classification of a two-state with respect to a set of exclusive pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorLabel {
    /// At least one pair yields a paradox witness.
    Paradoxical,
    /// Every pair is defined and none yields a witness.
    NonParadoxical,
    /// Some conditioning failed and no pair yielded a witness.
    Undefined,
}

impl std::fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SectorLabel::Paradoxical => write!(f, "Paradoxical"),
            SectorLabel::NonParadoxical => write!(f, "NonParadoxical"),
            SectorLabel::Undefined => write!(f, "Undefined"),
        }
    }
}

fn ensure_exclusive(pi1: &Projector, pi2: &Projector) -> Result<()> {
    let trace = pi1.product_trace(pi2)?;
    if trace.abs() > COMPOSITE_EPS {
        return Err(Error::NotExclusive { trace });
    }
    Ok(())
}

/// Checks one exclusive pair for a logical paradox.
///
/// Returns a witness iff ζ_1 + ζ_2 > 1 + 1e-12. The strict inequality
/// carries a guard band so that sums of exactly 1 classify as
/// non-paradoxical: the exclusivity principle permits equality.
pub fn check_logical_paradox(
    ts: &TwoState,
    pi1: &Projector,
    pi2: &Projector,
) -> Result<Option<ParadoxWitness>> {
    ensure_exclusive(pi1, pi2)?;
    let zeta1 = abl_dichotomic(ts, pi1)?;
    let zeta2 = abl_dichotomic(ts, pi2)?;
    if zeta1 + zeta2 > 1.0 + PARADOX_GUARD {
        Ok(Some(ParadoxWitness {
            two_state: ts.clone(),
            pi1: pi1.clone(),
            pi2: pi2.clone(),
            zeta1,
            zeta2,
        }))
    } else {
        Ok(None)
    }
}

/// Classifies a two-state against a list of exclusive projector pairs.
///
/// Paradoxical if any pair yields a witness; otherwise Undefined if any
/// conditioning failed; otherwise NonParadoxical. Malformed (non-exclusive)
/// pairs are a hard error regardless. The order of pairs and the order
/// within a pair do not affect the outcome.
pub fn classify_sector(ts: &TwoState, pairs: &[(Projector, Projector)]) -> Result<SectorLabel> {
    let mut any_undefined = false;
    let mut any_witness = false;
    for (pi1, pi2) in pairs {
        match check_logical_paradox(ts, pi1, pi2) {
            Ok(Some(_)) => any_witness = true,
            Ok(None) => {}
            Err(Error::UndefinedConditioning) | Err(Error::UndefinedConditioningAt { .. }) => {
                any_undefined = true;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(if any_witness {
        SectorLabel::Paradoxical
    } else if any_undefined {
        SectorLabel::Undefined
    } else {
        SectorLabel::NonParadoxical
    })
}

/// The canonical three-box instance: a particle pre-selected in
/// (|A⟩+|B⟩+|C⟩)/√3 and post-selected in (|A⟩+|B⟩−|C⟩)/√3, with the two
/// box-opening settings {Π_A, 𝟙−Π_A} and {Π_B, 𝟙−Π_B}.
pub fn three_box_scenario() -> (TwoState, [DichotomicSetting; 2]) {
    let pre = StateVector::from_real(&[1.0, 1.0, 1.0]).expect("three-box pre-selection");
    let post = StateVector::from_real(&[1.0, 1.0, -1.0]).expect("three-box post-selection");
    let ts = TwoState::new(pre, post).expect("equal dimensions");
    let box_a = DichotomicSetting::new(Projector::rank1(
        &StateVector::basis(3, 0).expect("basis state"),
    ));
    let box_b = DichotomicSetting::new(Projector::rank1(
        &StateVector::basis(3, 1).expect("basis state"),
    ));
    (ts, [box_a, box_b])
}
