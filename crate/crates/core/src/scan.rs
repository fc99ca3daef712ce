//! Exclusivity-constrained scans of the K functional over post-selected
//! states, region extraction, local refinement, and paradox-witness search.
//!
//! Post-selections are parametrized on the real sphere as
//!
//! ```text
//! |post(θ, φ)⟩ = (cos θ, sin θ cos φ, sin θ sin φ)      θ ∈ [0, π], φ ∈ [0, 2π)
//! ```
//!
//! Grid cells are independent, so evaluation is partitioned across rayon
//! workers and merged by cell index: output is bit-identical regardless of
//! worker count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abl::{dichotomic_zeta, TwoState};
use crate::contextuality::{exclusivity_ok, CycleInstance};
use crate::error::{Error, Result};
use crate::hilbert::{Projector, StateVector};
use crate::pps::{check_logical_paradox, ParadoxWitness};
use crate::tol::COMPOSITE_EPS;

/// Below this step size (radians) refinement stops regardless of the
/// remaining halving budget.
const REFINE_MIN_STEP: f64 = 1e-7;

/// Number of top grid cells used to seed local refinement.
const REFINE_SEEDS: usize = 8;

/// Rectangular (θ, φ) grid: θ inclusive of both endpoints, φ periodic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereGrid {
    theta_steps: usize,
    phi_steps: usize,
}

impl SphereGrid {
    pub fn new(theta_steps: usize, phi_steps: usize) -> Result<Self> {
        if theta_steps < 2 || phi_steps < 4 {
            return Err(Error::InvalidGrid);
        }
        Ok(Self {
            theta_steps,
            phi_steps,
        })
    }

    pub fn theta_steps(&self) -> usize {
        self.theta_steps
    }

    pub fn phi_steps(&self) -> usize {
        self.phi_steps
    }

    pub fn theta(&self, i: usize) -> f64 {
        (i as f64 * std::f64::consts::PI) / (self.theta_steps - 1) as f64
    }

    pub fn phi(&self, j: usize) -> f64 {
        (j as f64 * std::f64::consts::TAU) / self.phi_steps as f64
    }

    pub fn len(&self) -> usize {
        self.theta_steps * self.phi_steps
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major node coordinates for a flat cell index.
    pub fn node(&self, idx: usize) -> (f64, f64) {
        let i = idx / self.phi_steps;
        let j = idx % self.phi_steps;
        (self.theta(i), self.phi(j))
    }
}

/// Post-selected state for a grid node.
pub fn post_state(theta: f64, phi: f64) -> StateVector {
    StateVector::from_real(&[
        theta.cos(),
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
    ])
    .expect("spherical parametrization has unit norm")
}

/// Post-selected state extended with two relative phases:
/// (cos θ, e^{iα} sin θ cos φ, e^{iβ} sin θ sin φ).
pub fn post_state_phases(theta: f64, phi: f64, alpha: f64, beta: f64) -> StateVector {
    let a = theta.sin() * phi.cos();
    let b = theta.sin() * phi.sin();
    StateVector::normalized(vec![
        Complex64::new(theta.cos(), 0.0),
        Complex64::from_polar(a.abs(), alpha + if a < 0.0 { std::f64::consts::PI } else { 0.0 }),
        Complex64::from_polar(b.abs(), beta + if b < 0.0 { std::f64::consts::PI } else { 0.0 }),
    ])
    .expect("spherical parametrization has unit norm")
}

/// Per-node record of the scan.
#[derive(Debug, Clone)]
pub struct ScanCell {
    pub theta: f64,
    pub phi: f64,
    /// One conditioned probability per cycle test; NaN when undefined.
    pub zetas: Vec<f64>,
    /// Σ zetas when defined, NaN otherwise.
    pub k: f64,
    /// Every edge sum within the exclusivity bound.
    pub exclusive: bool,
    /// All n conditionings produced a value.
    pub defined: bool,
}

impl ScanCell {
    pub fn feasible(&self) -> bool {
        self.defined && self.exclusive
    }
}

/// Full scan output: row-major cells over the grid.
#[derive(Debug, Clone)]
pub struct ScanResult {
    grid: SphereGrid,
    pre: StateVector,
    instance: CycleInstance,
    cells: Vec<ScanCell>,
}

impl ScanResult {
    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    pub fn pre(&self) -> &StateVector {
        &self.pre
    }

    pub fn instance(&self) -> &CycleInstance {
        &self.instance
    }

    pub fn cells(&self) -> &[ScanCell] {
        &self.cells
    }

    /// CSV export: header `theta,phi,zeta0..zeta{n-1},k,exclusive,defined`,
    /// row-major, flags as 1/0, numbers at 9 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        let n = self.instance.n();
        write!(w, "theta,phi")?;
        for i in 0..n {
            write!(w, ",zeta{i}")?;
        }
        writeln!(w, ",k,exclusive,defined")?;
        for cell in &self.cells {
            write!(w, "{},{}", sig9(cell.theta), sig9(cell.phi))?;
            for z in &cell.zetas {
                write!(w, ",{}", sig9(*z))?;
            }
            writeln!(
                w,
                ",{},{},{}",
                sig9(cell.k),
                cell.exclusive as u8,
                cell.defined as u8
            )?;
        }
        Ok(())
    }
}

/// Formats with 9 significant digits.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        "nan".to_owned()
    } else {
        format!("{x:.8e}")
    }
}

/// Evaluates one post-selection against every test of the instance.
fn eval_post(
    pre: &StateVector,
    projectors: &[Projector],
    complements: &[Projector],
    inst: &CycleInstance,
    theta: f64,
    phi: f64,
) -> ScanCell {
    let post = post_state(theta, phi);
    let ts = TwoState::new(pre.clone(), post).expect("pre checked to be d = 3");
    let n = projectors.len();
    let mut zetas = Vec::with_capacity(n);
    let mut defined = true;
    for (p, c) in projectors.iter().zip(complements) {
        match dichotomic_zeta(&ts, p, c) {
            Ok(z) => zetas.push(z),
            Err(Error::UndefinedConditioning) => {
                defined = false;
                zetas.push(f64::NAN);
            }
            Err(e) => unreachable!("dichotomic evaluation cannot fail otherwise: {e}"),
        }
    }
    let (exclusive, k) = if defined {
        let (ok, _) = exclusivity_ok(&zetas, inst.graph()).expect("lengths match");
        (ok, zetas.iter().sum())
    } else {
        (false, f64::NAN)
    };
    ScanCell {
        theta,
        phi,
        zetas,
        k,
        exclusive,
        defined,
    }
}

/// Evaluates every grid node. Cells whose conditioning fails anywhere are
/// marked `defined = false` and take no part in maxima; per-cell failures
/// are recorded, never thrown.
pub fn scan_postselection(
    pre: &StateVector,
    inst: &CycleInstance,
    grid: &SphereGrid,
) -> Result<ScanResult> {
    if pre.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: pre.dim(),
        });
    }
    let projectors = inst.projectors().to_vec();
    let complements: Vec<Projector> = projectors.iter().map(Projector::complement).collect();
    let cells: Vec<ScanCell> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (theta, phi) = grid.node(idx);
            eval_post(pre, &projectors, &complements, inst, theta, phi)
        })
        .collect();
    Ok(ScanResult {
        grid: *grid,
        pre: pre.clone(),
        instance: inst.clone(),
        cells,
    })
}

/// Nodes that are defined, exclusive, and strictly above `k_min`,
/// in row-major order. Nested: a lower threshold yields a superset.
pub fn region_above(scan: &ScanResult, k_min: f64) -> Vec<(f64, f64)> {
    scan.cells()
        .iter()
        .filter(|c| c.feasible() && c.k > k_min)
        .map(|c| (c.theta, c.phi))
        .collect()
}

/// Result of the constrained maximization.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Optimum {
    pub k_star: f64,
    pub theta_star: f64,
    pub phi_star: f64,
}

/// Best feasible grid cell, refined by derivative-free coordinate descent.
///
/// Starting from the highest-K feasible cells, θ and φ probes of the
/// current step are tried alternately; probes that lose definedness or
/// exclusivity are rejected outright. When neither axis improves, the step
/// halves. Stops after `refine_steps` halvings or once the step drops below
/// 1e-7 radians. With `refine_steps = 0` the raw best cell is returned.
/// The result never falls below the best raw grid value.
pub fn constrained_max(scan: &ScanResult, refine_steps: usize) -> Result<Optimum> {
    let mut feasible: Vec<&ScanCell> = scan.cells().iter().filter(|c| c.feasible()).collect();
    if feasible.is_empty() {
        return Err(Error::EmptyFeasibleSet);
    }
    feasible.sort_by(|a, b| b.k.partial_cmp(&a.k).expect("feasible cells are not NaN"));
    let projectors = scan.instance().projectors().to_vec();
    let complements: Vec<Projector> = projectors.iter().map(Projector::complement).collect();
    let eval = |theta: f64, phi: f64| -> Option<f64> {
        let cell = eval_post(
            scan.pre(),
            &projectors,
            &complements,
            scan.instance(),
            theta,
            phi,
        );
        cell.feasible().then_some(cell.k)
    };

    let dtheta0 = std::f64::consts::PI / (scan.grid().theta_steps() - 1) as f64;
    let dphi0 = std::f64::consts::TAU / scan.grid().phi_steps() as f64;

    let mut best = Optimum {
        k_star: feasible[0].k,
        theta_star: feasible[0].theta,
        phi_star: feasible[0].phi,
    };
    if refine_steps == 0 {
        return Ok(best);
    }

    for seed in feasible.iter().take(REFINE_SEEDS) {
        let (mut theta, mut phi, mut k) = (seed.theta, seed.phi, seed.k);
        let (mut dtheta, mut dphi) = (dtheta0, dphi0);
        let mut halvings = 0;
        loop {
            let mut improved = false;
            for sign in [1.0, -1.0] {
                let t = (theta + sign * dtheta).clamp(0.0, std::f64::consts::PI);
                if let Some(k_probe) = eval(t, phi) {
                    if k_probe > k {
                        theta = t;
                        k = k_probe;
                        improved = true;
                    }
                }
            }
            for sign in [1.0, -1.0] {
                let p = (phi + sign * dphi).rem_euclid(std::f64::consts::TAU);
                if let Some(k_probe) = eval(theta, p) {
                    if k_probe > k {
                        phi = p;
                        k = k_probe;
                        improved = true;
                    }
                }
            }
            if !improved {
                dtheta /= 2.0;
                dphi /= 2.0;
                halvings += 1;
                if halvings >= refine_steps || dtheta.max(dphi) < REFINE_MIN_STEP {
                    break;
                }
            }
        }
        if k > best.k_star {
            best = Optimum {
                k_star: k,
                theta_star: theta,
                phi_star: phi,
            };
        }
    }
    Ok(best)
}

/// A paradox witness located at a grid node.
#[derive(Debug, Clone)]
pub struct GridWitness {
    pub theta: f64,
    pub phi: f64,
    pub witness: ParadoxWitness,
}

/// Evaluates the paradox check for one exclusive pair at one node.
/// Undefined conditioning yields no witness rather than an error.
pub fn paradox_witness_at(
    pre: &StateVector,
    pi1: &Projector,
    pi2: &Projector,
    theta: f64,
    phi: f64,
) -> Result<Option<ParadoxWitness>> {
    let ts = TwoState::new(pre.clone(), post_state(theta, phi))?;
    match check_logical_paradox(&ts, pi1, pi2) {
        Ok(w) => Ok(w),
        Err(Error::UndefinedConditioning) | Err(Error::UndefinedConditioningAt { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Grid search for post-selections whose two-state yields a paradox witness
/// for the given exclusive pair. Row-major order.
pub fn paradox_search(
    pre: &StateVector,
    pi1: &Projector,
    pi2: &Projector,
    grid: &SphereGrid,
) -> Result<Vec<GridWitness>> {
    let trace = pi1.product_trace(pi2)?;
    if trace.abs() > COMPOSITE_EPS {
        return Err(Error::NotExclusive { trace });
    }
    if pre.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: pre.dim(),
        });
    }
    let witnesses: Vec<Option<GridWitness>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (theta, phi) = grid.node(idx);
            paradox_witness_at(pre, pi1, pi2, theta, phi)
                .expect("exclusivity and dimensions pre-checked")
                .map(|witness| GridWitness {
                    theta,
                    phi,
                    witness,
                })
        })
        .collect();
    Ok(witnesses.into_iter().flatten().collect())
}

/// Streaming result of the coarse phase-extended scan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PhaseOptimum {
    pub k_star: f64,
    pub theta_star: f64,
    pub phi_star: f64,
    pub alpha_star: f64,
    pub beta_star: f64,
    pub feasible_cells: u64,
    /// Feasible cells with K above the noncontextual bound ⌊n/2⌋.
    pub cells_above_bound: u64,
}

/// Coarse scan with two relative phases on the post-selection. Cells are
/// not materialized; only the feasible maximum and counts are tracked.
pub fn scan_postselection_phases(
    pre: &StateVector,
    inst: &CycleInstance,
    grid: &SphereGrid,
    phase_steps: usize,
) -> Result<PhaseOptimum> {
    if pre.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: pre.dim(),
        });
    }
    if phase_steps < 2 {
        return Err(Error::InvalidGrid);
    }
    let bound = (inst.n() / 2) as f64;
    let projectors = inst.projectors().to_vec();
    let complements: Vec<Projector> = projectors.iter().map(Projector::complement).collect();
    let dphase = std::f64::consts::TAU / phase_steps as f64;

    let combine = |a: PhaseOptimum, b: PhaseOptimum| {
        let mut best = if b.k_star > a.k_star { b } else { a };
        best.feasible_cells = a.feasible_cells + b.feasible_cells;
        best.cells_above_bound = a.cells_above_bound + b.cells_above_bound;
        best
    };
    let empty = PhaseOptimum {
        k_star: f64::NEG_INFINITY,
        theta_star: f64::NAN,
        phi_star: f64::NAN,
        alpha_star: f64::NAN,
        beta_star: f64::NAN,
        feasible_cells: 0,
        cells_above_bound: 0,
    };

    let result = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (theta, phi) = grid.node(idx);
            let mut local = empty;
            for ai in 0..phase_steps {
                for bi in 0..phase_steps {
                    let (alpha, beta) = (ai as f64 * dphase, bi as f64 * dphase);
                    let post = post_state_phases(theta, phi, alpha, beta);
                    let ts = TwoState::new(pre.clone(), post).expect("d = 3");
                    let mut zetas = Vec::with_capacity(projectors.len());
                    let mut defined = true;
                    for (p, c) in projectors.iter().zip(&complements) {
                        match dichotomic_zeta(&ts, p, c) {
                            Ok(z) => zetas.push(z),
                            Err(_) => {
                                defined = false;
                                break;
                            }
                        }
                    }
                    if !defined {
                        continue;
                    }
                    let (ok, _) = exclusivity_ok(&zetas, inst.graph()).expect("lengths match");
                    if !ok {
                        continue;
                    }
                    let k: f64 = zetas.iter().sum();
                    local.feasible_cells += 1;
                    if k > bound {
                        local.cells_above_bound += 1;
                    }
                    if k > local.k_star {
                        local.k_star = k;
                        local.theta_star = theta;
                        local.phi_star = phi;
                        local.alpha_star = alpha;
                        local.beta_star = beta;
                    }
                }
            }
            local
        })
        .reduce(|| empty, combine);

    if result.feasible_cells == 0 {
        return Err(Error::EmptyFeasibleSet);
    }
    Ok(result)
}

/// Result of scanning the pre-selection over an outer coarse grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PreScanOptimum {
    pub k_star: f64,
    pub pre_theta: f64,
    pub pre_phi: f64,
    pub theta_star: f64,
    pub phi_star: f64,
}

/// Scans the pre-selection too: for every node of `pre_grid` the full
/// post-selection scan runs on `post_grid` and the refined optimum is
/// tracked. Pre-selections with an empty feasible set are skipped.
pub fn scan_pre_and_post(
    inst: &CycleInstance,
    pre_grid: &SphereGrid,
    post_grid: &SphereGrid,
    refine_steps: usize,
) -> Result<PreScanOptimum> {
    let mut best: Option<PreScanOptimum> = None;
    for idx in 0..pre_grid.len() {
        let (pt, pp) = pre_grid.node(idx);
        let pre = post_state(pt, pp);
        let scan = scan_postselection(&pre, inst, post_grid)?;
        match constrained_max(&scan, refine_steps) {
            Ok(opt) => {
                if best.is_none_or(|b| opt.k_star > b.k_star) {
                    best = Some(PreScanOptimum {
                        k_star: opt.k_star,
                        pre_theta: pt,
                        pre_phi: pp,
                        theta_star: opt.theta_star,
                        phi_star: opt.phi_star,
                    });
                }
            }
            Err(Error::EmptyFeasibleSet) => continue,
            Err(e) => return Err(e),
        }
    }
    best.ok_or(Error::EmptyFeasibleSet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abl::abl_dichotomic;
    use crate::contextuality::kcbs_projectors;
    use crate::pps::three_box_scenario;
    use std::f64::consts::PI;

    fn pole() -> StateVector {
        StateVector::basis(3, 2).unwrap()
    }

    #[test]
    fn grid_shape_and_nodes() {
        let g = SphereGrid::new(2, 4).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.node(0), (0.0, 0.0));
        let (t, p) = g.node(7);
        assert_eq!(t, PI);
        assert!((p - 3.0 * PI / 2.0).abs() < 1e-15);
        assert!(matches!(SphereGrid::new(1, 4), Err(Error::InvalidGrid)));
        assert!(matches!(SphereGrid::new(2, 3), Err(Error::InvalidGrid)));
    }

    #[test]
    fn tiny_scan_has_all_flags_populated() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(2, 4).unwrap();
        let scan = scan_postselection(&pole(), &inst, &g).unwrap();
        assert_eq!(scan.cells().len(), 8);
        for cell in scan.cells() {
            if cell.defined {
                let k: f64 = cell.zetas.iter().sum();
                assert!((cell.k - k).abs() < 1e-15);
            } else {
                assert!(cell.k.is_nan());
                assert!(!cell.exclusive);
            }
        }
    }

    #[test]
    fn pole_cell_matches_closed_form() {
        // the 3×4 grid contains (θ, φ) = (π/2, π/2), i.e. post = pre = pole
        let inst = kcbs_projectors();
        let g = SphereGrid::new(3, 4).unwrap();
        let scan = scan_postselection(&pole(), &inst, &g).unwrap();
        let cell = scan
            .cells()
            .iter()
            .find(|c| (c.theta - PI / 2.0).abs() < 1e-15 && (c.phi - PI / 2.0).abs() < 1e-15)
            .expect("grid contains the pole node");
        assert!(cell.defined && cell.exclusive);
        let expect = 5.0 / (7.0 - 2.0 * 5.0_f64.sqrt());
        assert!((cell.k - expect).abs() < 1e-9, "k = {}", cell.k);
    }

    #[test]
    fn regions_are_nested() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(32, 64).unwrap();
        let scan = scan_postselection(&pole(), &inst, &g).unwrap();
        let thresholds = [1.4, 1.5, 1.6, 1.7, 2.0];
        let regions: Vec<_> = thresholds.iter().map(|&t| region_above(&scan, t)).collect();
        for w in regions.windows(2) {
            let (larger, smaller) = (&w[0], &w[1]);
            assert!(
                smaller.iter().all(|node| larger.contains(node)),
                "regions must be nested"
            );
        }
        let everything = region_above(&scan, 0.0);
        let feasible = scan.cells().iter().filter(|c| c.feasible()).count();
        assert_eq!(everything.len(), feasible);
    }

    #[test]
    fn refinement_disabled_returns_best_raw_cell() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(16, 32).unwrap();
        let scan = scan_postselection(&pole(), &inst, &g).unwrap();
        let raw = constrained_max(&scan, 0).unwrap();
        let best = scan
            .cells()
            .iter()
            .filter(|c| c.feasible())
            .map(|c| c.k)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(raw.k_star, best);
        let refined = constrained_max(&scan, 10).unwrap();
        assert!(refined.k_star >= raw.k_star);
    }

    #[test]
    fn refinement_result_is_sound_on_reevaluation() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(24, 48).unwrap();
        let scan = scan_postselection(&pole(), &inst, &g).unwrap();
        let opt = constrained_max(&scan, 12).unwrap();
        let post = post_state(opt.theta_star, opt.phi_star);
        let ts = TwoState::new(pole(), post).unwrap();
        let zetas: Vec<f64> = inst
            .projectors()
            .iter()
            .map(|p| abl_dichotomic(&ts, p).unwrap())
            .collect();
        let (ok, _) = exclusivity_ok(&zetas, inst.graph()).unwrap();
        assert!(ok, "refined optimum must satisfy every edge constraint");
        let k: f64 = zetas.iter().sum();
        assert!((k - opt.k_star).abs() < 1e-12);
    }

    #[test]
    fn scan_is_deterministic_across_worker_counts() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(12, 16).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| scan_postselection(&pole(), &inst, &g).unwrap())
        };
        let a = run(1);
        let b = run(3);
        for (x, y) in a.cells().iter().zip(b.cells()) {
            assert_eq!(x.theta.to_bits(), y.theta.to_bits());
            assert_eq!(x.phi.to_bits(), y.phi.to_bits());
            assert_eq!(x.k.to_bits(), y.k.to_bits());
            assert_eq!(x.exclusive, y.exclusive);
            assert_eq!(x.defined, y.defined);
            for (za, zb) in x.zetas.iter().zip(&y.zetas) {
                assert_eq!(za.to_bits(), zb.to_bits());
            }
        }
    }

    #[test]
    fn scan_cells_match_engine_reevaluation() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(16, 16).unwrap();
        let scan = scan_postselection(&pole(), &inst, &g).unwrap();
        let mut checked = 0;
        for cell in scan.cells().iter().filter(|c| c.defined).step_by(2) {
            let ts = TwoState::new(pole(), post_state(cell.theta, cell.phi)).unwrap();
            for (p, &z) in inst.projectors().iter().zip(&cell.zetas) {
                let again = abl_dichotomic(&ts, p).unwrap();
                assert!((again - z).abs() < 1e-12);
            }
            let (ok, _) = exclusivity_ok(&cell.zetas, inst.graph()).unwrap();
            assert_eq!(ok, cell.exclusive);
            checked += 1;
        }
        assert!(checked >= 100, "only {checked} cells re-evaluated");
    }

    #[test]
    fn three_box_angles_reproduce_the_paradox() {
        // post = (1, 1, -1)/√3 sits at θ = arccos(1/√3), φ = 7π/4
        let (_, settings) = three_box_scenario();
        let pre = StateVector::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let theta = (1.0 / 3.0_f64.sqrt()).acos();
        let phi = 7.0 * PI / 4.0;
        let w = paradox_witness_at(
            &pre,
            settings[0].projector(),
            settings[1].projector(),
            theta,
            phi,
        )
        .unwrap()
        .expect("witness at the three-box post-selection");
        assert!((w.sum() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn paradox_search_rejects_non_adjacent_pair() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(8, 8).unwrap();
        let err = paradox_search(
            &pole(),
            &inst.projectors()[0],
            &inst.projectors()[2],
            &g,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotExclusive { .. }));
    }

    #[test]
    fn paradox_search_coarse_grid_contract() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(2, 4).unwrap();
        // must not error; may legitimately be empty at this resolution
        let witnesses =
            paradox_search(&pole(), &inst.projectors()[0], &inst.projectors()[1], &g).unwrap();
        for w in &witnesses {
            assert!(w.witness.sum() > 1.0);
        }
    }

    #[test]
    fn paradox_search_finds_witnesses_at_moderate_resolution() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(64, 128).unwrap();
        let witnesses =
            paradox_search(&pole(), &inst.projectors()[0], &inst.projectors()[1], &g).unwrap();
        assert!(!witnesses.is_empty());
    }

    #[test]
    fn no_grid_node_reaches_a_double_unit_edge() {
        // double-unit assignments (both zetas of an edge equal to 1) exist
        // in the continuum but not at the nodes of the full default grid
        let inst = kcbs_projectors();
        let g = SphereGrid::new(512, 1024).unwrap();
        let scan = scan_postselection(&pole(), &inst, &g).unwrap();
        let mut max_edge = f64::NEG_INFINITY;
        for cell in scan.cells().iter().filter(|c| c.defined) {
            let (_, sums) = exclusivity_ok(&cell.zetas, inst.graph()).unwrap();
            for s in sums {
                max_edge = max_edge.max(s);
            }
        }
        assert!(max_edge < 2.0, "max edge sum {max_edge}");
    }

    #[test]
    fn eigenstate_pair_pins_the_edge_sum_to_one() {
        // pre an eigenstate of pi1, with pi2 exclusive to pi1 and
        // annihilating pre: zeta_1 = 1 and zeta_2 = 0 wherever defined, so
        // the pair sits exactly on the exclusivity boundary and never
        // yields a witness
        let pre = pole();
        let pi1 = Projector::rank1(&pre);
        let pi2 = Projector::rank1(&StateVector::basis(3, 0).unwrap());
        let g = SphereGrid::new(16, 32).unwrap();
        let witnesses = paradox_search(&pre, &pi1, &pi2, &g).unwrap();
        assert!(witnesses.is_empty());
        for idx in 0..g.len() {
            let (theta, phi) = g.node(idx);
            let ts = TwoState::new(pre.clone(), post_state(theta, phi)).unwrap();
            let (z1, z2) = match (abl_dichotomic(&ts, &pi1), abl_dichotomic(&ts, &pi2)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            assert!((z1 - 1.0).abs() < 1e-12, "zeta_1 = {z1} at node {idx}");
            assert!(z2.abs() < 1e-12, "zeta_2 = {z2} at node {idx}");
        }
    }

    #[test]
    fn phase_scan_runs_and_contains_real_slice() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(8, 16).unwrap();
        let opt = scan_postselection_phases(&pole(), &inst, &g, 4).unwrap();
        assert!(opt.feasible_cells > 0);
        // α = β = 0 cells coincide with the real scan, so the phase maximum
        // can only be at least the real one on the same grid
        let real = constrained_max(&scan_postselection(&pole(), &inst, &g).unwrap(), 0).unwrap();
        assert!(opt.k_star >= real.k_star - 1e-12);
    }

    #[test]
    fn pre_scan_covers_fixed_pre() {
        let inst = kcbs_projectors();
        let pre_grid = SphereGrid::new(3, 4).unwrap();
        let post_grid = SphereGrid::new(8, 16).unwrap();
        let opt = scan_pre_and_post(&inst, &pre_grid, &post_grid, 0).unwrap();
        // the pre grid contains the pole itself, so the joint optimum
        // dominates the fixed-pole optimum on the same post grid
        let fixed = constrained_max(
            &scan_postselection(&pole(), &inst, &post_grid).unwrap(),
            0,
        )
        .unwrap();
        assert!(opt.k_star >= fixed.k_star - 1e-12);
    }

    #[test]
    fn csv_export_shape() {
        let inst = kcbs_projectors();
        let g = SphereGrid::new(2, 4).unwrap();
        let scan = scan_postselection(&pole(), &inst, &g).unwrap();
        let mut buf = Vec::new();
        scan.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(
            lines[0],
            "theta,phi,zeta0,zeta1,zeta2,zeta3,zeta4,k,exclusive,defined"
        );
        assert_eq!(lines[1].split(',').count(), 10);
    }
}
