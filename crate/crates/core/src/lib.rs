//! Numerical toolkit for retrodictive probability assignments on pre- and
//! post-selected quantum ensembles.
//!
//! The crate provides:
//!
//! - [`hilbert`] — states, projectors, PVMs, Born probabilities, collapse;
//! - [`abl`] — the retrodiction rule conditioning an intermediate outcome
//!   on pre- and post-selection, in general-PVM and dichotomic form;
//! - [`pps`] — logical paradox detection (exclusive outcomes with
//!   conditioned probabilities summing above 1) and sector classification,
//!   with the canonical three-box instance;
//! - [`contextuality`] — odd n-cycle test families in d = 3, the K
//!   functional, exclusivity evaluation, and the noncontextual bound;
//! - [`scan`] — exclusivity-constrained maximization of K over
//!   post-selections on the real sphere, region extraction, and
//!   paradox-witness search;
//! - [`mc`] — a seeded Monte-Carlo simulation of the three-measurement
//!   protocol that cross-checks the retrodiction engine;
//! - [`schema`] — the scenario JSON wire format.
//!
//! Everything is pure and immutable after construction; evaluation may be
//! freely parallelized. Seeded simulations and scans are bit-reproducible
//! regardless of worker count.

pub mod abl;
pub mod contextuality;
pub mod error;
pub mod hilbert;
pub mod mc;
pub mod pps;
pub mod scan;
pub mod schema;
pub mod tol;

pub use abl::{abl_dichotomic, abl_probabilities, counterfactual_assignment, AblDistribution, TwoState};
pub use contextuality::{
    exclusivity_ok, k_value, kcbs_projectors, ncycle_projectors, noncontextual_bound, CycleGraph,
    CycleInstance,
};
pub use error::{Error, Result};
pub use hilbert::{Projector, Pvm, StateVector};
pub use mc::{simulate_pps, verify_abl, SimConfig, SimEstimate, VerifyReport};
pub use pps::{
    check_logical_paradox, classify_sector, three_box_scenario, CounterfactualScenario,
    DichotomicSetting, ParadoxWitness, SectorLabel,
};
pub use scan::{
    constrained_max, paradox_search, region_above, scan_postselection, GridWitness, Optimum,
    ScanCell, ScanResult, SphereGrid,
};
pub use schema::{LoadedScenario, ScenarioFile};
