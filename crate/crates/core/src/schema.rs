//! Scenario wire format, shared between the library and the command line.
//!
//! Complex numbers serialize as two-element arrays `[re, im]`. Vectors may
//! arrive unnormalized; they are normalized on load.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::abl::TwoState;
use crate::contextuality::CycleInstance;
use crate::error::{Error, Result};
use crate::hilbert::{Projector, StateVector};
use crate::pps::DichotomicSetting;

/// One dichotomic setting, given by the vector generating its filtered
/// rank-1 projector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioSetting {
    pub vector: Vec<[f64; 2]>,
}

/// On-disk scenario: a two-state plus a list of contemplated settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub dim: usize,
    pub pre: Vec<[f64; 2]>,
    pub post: Vec<[f64; 2]>,
    pub settings: Vec<ScenarioSetting>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A scenario after validation: normalized states and built settings.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub two_state: TwoState,
    pub settings: Vec<DichotomicSetting>,
    pub labels: Vec<String>,
}

fn to_state(dim: usize, raw: &[[f64; 2]]) -> Result<StateVector> {
    if raw.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: raw.len(),
        });
    }
    StateVector::normalized(raw.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
}

fn from_state(s: &StateVector) -> Vec<[f64; 2]> {
    s.amplitudes().iter().map(|a| [a.re, a.im]).collect()
}

impl ScenarioFile {
    /// Deserializes from JSON text. Malformed documents surface the
    /// underlying serde error so callers can distinguish parse failures
    /// from validation failures.
    pub fn parse(json: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(json)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema types always serialize")
    }

    /// Normalizes every vector and builds the in-memory scenario.
    pub fn validate(&self) -> Result<LoadedScenario> {
        let pre = to_state(self.dim, &self.pre)?;
        let post = to_state(self.dim, &self.post)?;
        let two_state = TwoState::new(pre, post)?;
        let settings = self
            .settings
            .iter()
            .map(|s| Ok(DichotomicSetting::new(Projector::rank1(&to_state(self.dim, &s.vector)?))))
            .collect::<Result<Vec<_>>>()?;
        let labels = match &self.labels {
            Some(labels) => {
                if labels.len() != settings.len() {
                    return Err(Error::LengthMismatch {
                        expected: settings.len(),
                        found: labels.len(),
                    });
                }
                labels.clone()
            }
            None => (0..settings.len()).map(|i| format!("setting{i}")).collect(),
        };
        Ok(LoadedScenario {
            two_state,
            settings,
            labels,
        })
    }

    /// Scenario for a cycle instance: its generating vectors become the
    /// settings.
    pub fn from_cycle(inst: &CycleInstance, pre: &StateVector, post: &StateVector) -> Self {
        Self {
            dim: 3,
            pre: from_state(pre),
            post: from_state(post),
            settings: inst
                .vectors()
                .iter()
                .map(|v| ScenarioSetting {
                    vector: from_state(v),
                })
                .collect(),
            labels: None,
        }
    }

    /// The canonical three-box scenario file.
    pub fn three_box() -> Self {
        let (ts, _) = crate::pps::three_box_scenario();
        Self {
            dim: 3,
            pre: from_state(ts.pre()),
            post: from_state(ts.post()),
            settings: vec![
                ScenarioSetting {
                    vector: vec![[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
                },
                ScenarioSetting {
                    vector: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
                },
            ],
            labels: Some(vec!["boxA".into(), "boxB".into()]),
        }
    }
}
