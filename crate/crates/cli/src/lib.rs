//! Command implementations and report formats behind the `tsvf` binary.
//!
//! Human-readable output rounds to 9 significant digits; JSON documents
//! keep full-precision floats so downstream checks at 1e-9 scale survive a
//! round trip. Every command is deterministic given its flags (and seed),
//! and repeated runs produce byte-identical output files.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use tsvf_core::contextuality::{kcbs_projectors, ncycle_projectors, noncontextual_bound, CycleInstance};
use tsvf_core::hilbert::StateVector;
use tsvf_core::mc::{verify_abl, SimConfig, VerifyReport};
use tsvf_core::pps::{classify_sector, three_box_scenario, DichotomicSetting};
use tsvf_core::scan::{
    constrained_max, paradox_search, region_above, scan_postselection, scan_postselection_phases,
    scan_pre_and_post, sig9, SphereGrid,
};
use tsvf_core::{counterfactual_assignment, ScenarioFile, TwoState};

/// Stable exit-code contract: 0 success, 2 parse, 3 validation, 4 I/O,
/// 5 domain error.
#[derive(Debug)]
pub enum CliError {
    Parse(serde_json::Error),
    Validation(tsvf_core::Error),
    Io(std::io::Error),
    Domain(tsvf_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Io(_) => 4,
            CliError::Domain(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "parse error: {e}"),
            CliError::Validation(e) => write!(f, "validation error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn domain(e: tsvf_core::Error) -> CliError {
    CliError::Domain(e)
}

/// Monte-Carlo verification attached to one setting.
#[derive(Debug, Serialize, Deserialize)]
pub struct McSection {
    pub label: String,
    pub seed: u64,
    pub report: VerifyReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ThreeBoxReport {
    pub zeta_a: f64,
    pub zeta_b: f64,
    pub sector: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<Vec<McSection>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SettingZeta {
    pub label: String,
    pub zeta: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AblReport {
    pub zetas: Vec<SettingZeta>,
    /// Index pairs of settings whose projectors are mutually exclusive.
    pub exclusive_pairs: Vec<[usize; 2]>,
    pub sector: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<Vec<McSection>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RegionCount {
    pub k_min: f64,
    pub cells: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PhaseSection {
    pub theta_steps: usize,
    pub phi_steps: usize,
    pub phase_steps: usize,
    pub k_star: f64,
    pub theta_star: f64,
    pub phi_star: f64,
    pub alpha_star: f64,
    pub beta_star: f64,
    pub feasible_cells: u64,
    pub cells_above_bound: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PreScanSection {
    pub pre_theta_steps: usize,
    pub pre_phi_steps: usize,
    pub k_star: f64,
    pub pre_theta: f64,
    pub pre_phi: f64,
    pub theta_star: f64,
    pub phi_star: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ScanSummary {
    pub n: usize,
    pub theta_steps: usize,
    pub phi_steps: usize,
    pub refine_steps: usize,
    pub noncontextual_bound: f64,
    pub k_star: f64,
    pub theta_star: f64,
    pub phi_star: f64,
    pub defined_cells: usize,
    pub exclusive_cells: usize,
    pub region_counts: Vec<RegionCount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<PhaseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_scan: Option<PreScanSection>,
}

fn mc_sections(
    ts: &TwoState,
    settings: &[DichotomicSetting],
    labels: &[String],
    cfg: &SimConfig,
) -> Result<Vec<McSection>, CliError> {
    settings
        .iter()
        .zip(labels)
        .enumerate()
        .map(|(i, (s, label))| {
            let seed = cfg.seed + i as u64;
            let report = verify_abl(
                ts.pre(),
                &s.pvm(),
                ts.post(),
                &SimConfig {
                    samples: cfg.samples,
                    seed,
                },
            )
            .map_err(domain)?;
            Ok(McSection {
                label: label.clone(),
                seed,
                report,
            })
        })
        .collect()
}

fn render_mc(out: &mut String, sections: &[McSection]) {
    let mut flags = 0;
    for section in sections {
        for o in &section.report.outcomes {
            out.push_str(&format!(
                "mc {}: outcome {} zeta {} freq {} se {} sigma {} flag {}\n",
                section.label,
                o.outcome,
                sig9(o.zeta),
                sig9(o.freq),
                sig9(o.se),
                o.sigma_distance.map_or("-".to_owned(), |s| format!("{s:.2}")),
                if o.flag { "YES" } else { "no" },
            ));
        }
        flags += section.report.flagged();
    }
    out.push_str(&format!("mc flags: {flags}\n"));
}

/// The canonical three-box demonstration.
pub fn cmd_three_box(json: bool, mc: Option<SimConfig>) -> Result<String, CliError> {
    let (ts, settings) = three_box_scenario();
    let zetas = counterfactual_assignment(&ts, &settings).map_err(domain)?;
    let pairs = vec![(
        settings[0].projector().clone(),
        settings[1].projector().clone(),
    )];
    let sector = classify_sector(&ts, &pairs).map_err(domain)?;
    let mc_out = match &mc {
        Some(cfg) => Some(mc_sections(
            &ts,
            &settings,
            &["boxA".to_owned(), "boxB".to_owned()],
            cfg,
        )?),
        None => None,
    };
    let report = ThreeBoxReport {
        zeta_a: zetas[0],
        zeta_b: zetas[1],
        sector: sector.to_string(),
        mc: mc_out,
    };
    if json {
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ));
    }
    let mut out = String::new();
    out.push_str(&format!("zeta_A = {}\n", sig9(report.zeta_a)));
    out.push_str(&format!("zeta_B = {}\n", sig9(report.zeta_b)));
    out.push_str(&format!("sector = {}\n", report.sector));
    if let Some(sections) = &report.mc {
        render_mc(&mut out, sections);
    }
    Ok(out)
}

/// Evaluates a scenario file: per-setting conditioned probabilities plus a
/// sector classification over every exclusive pair found among the
/// settings.
pub fn cmd_abl(path: &Path, json: bool, mc: Option<SimConfig>) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)?;
    let file = ScenarioFile::parse(&text).map_err(CliError::Parse)?;
    let loaded = file.validate().map_err(CliError::Validation)?;
    let ts = &loaded.two_state;
    let zetas = counterfactual_assignment(ts, &loaded.settings).map_err(domain)?;

    let mut exclusive_pairs = Vec::new();
    let mut pair_projectors = Vec::new();
    for i in 0..loaded.settings.len() {
        for j in (i + 1)..loaded.settings.len() {
            let t = loaded.settings[i]
                .projector()
                .product_trace(loaded.settings[j].projector())
                .map_err(domain)?;
            if t.abs() <= tsvf_core::tol::COMPOSITE_EPS {
                exclusive_pairs.push([i, j]);
                pair_projectors.push((
                    loaded.settings[i].projector().clone(),
                    loaded.settings[j].projector().clone(),
                ));
            }
        }
    }
    let sector = classify_sector(ts, &pair_projectors).map_err(domain)?;
    let mc_out = match &mc {
        Some(cfg) => Some(mc_sections(ts, &loaded.settings, &loaded.labels, cfg)?),
        None => None,
    };
    let report = AblReport {
        zetas: loaded
            .labels
            .iter()
            .zip(&zetas)
            .map(|(label, &zeta)| SettingZeta {
                label: label.clone(),
                zeta,
            })
            .collect(),
        exclusive_pairs,
        sector: sector.to_string(),
        mc: mc_out,
    };
    if json {
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ));
    }
    let mut out = String::new();
    for z in &report.zetas {
        out.push_str(&format!("{}: zeta = {}\n", z.label, sig9(z.zeta)));
    }
    out.push_str(&format!(
        "exclusive pairs: {}\n",
        if report.exclusive_pairs.is_empty() {
            "none".to_owned()
        } else {
            report
                .exclusive_pairs
                .iter()
                .map(|[i, j]| format!("({i},{j})"))
                .collect::<Vec<_>>()
                .join(" ")
        }
    ));
    out.push_str(&format!("sector = {}\n", report.sector));
    if let Some(sections) = &report.mc {
        render_mc(&mut out, sections);
    }
    Ok(out)
}

pub struct ScanOpts {
    pub theta_steps: usize,
    pub phi_steps: usize,
    pub k_min: Vec<f64>,
    pub refine: usize,
    pub n: usize,
    pub phases: bool,
    pub phase_steps: usize,
    pub scan_pre: bool,
    pub pre_theta_steps: usize,
    pub pre_phi_steps: usize,
    pub out_csv: std::path::PathBuf,
    pub out_json: std::path::PathBuf,
}

fn cycle_instance(n: usize) -> Result<CycleInstance, CliError> {
    if n == 5 {
        Ok(kcbs_projectors())
    } else {
        ncycle_projectors(n).map_err(domain)
    }
}

/// Fixed coarse grid for the phase-extension pass; four angles make the
/// full product too large for the main resolution.
const PHASE_GRID: (usize, usize) = (64, 128);

/// Runs the constrained scan, writes the cell CSV and the JSON summary,
/// and returns a short text summary.
pub fn cmd_kcbs_scan(opts: &ScanOpts) -> Result<String, CliError> {
    let inst = cycle_instance(opts.n)?;
    let pre = StateVector::basis(3, 2).expect("pole state");
    let grid = SphereGrid::new(opts.theta_steps, opts.phi_steps).map_err(domain)?;
    let scan = scan_postselection(&pre, &inst, &grid).map_err(domain)?;
    let opt = constrained_max(&scan, opts.refine).map_err(domain)?;

    let region_counts: Vec<RegionCount> = opts
        .k_min
        .iter()
        .map(|&k_min| RegionCount {
            k_min,
            cells: region_above(&scan, k_min).len(),
        })
        .collect();

    let phases = if opts.phases {
        let phase_grid = SphereGrid::new(PHASE_GRID.0, PHASE_GRID.1).map_err(domain)?;
        let p = scan_postselection_phases(&pre, &inst, &phase_grid, opts.phase_steps)
            .map_err(domain)?;
        Some(PhaseSection {
            theta_steps: PHASE_GRID.0,
            phi_steps: PHASE_GRID.1,
            phase_steps: opts.phase_steps,
            k_star: p.k_star,
            theta_star: p.theta_star,
            phi_star: p.phi_star,
            alpha_star: p.alpha_star,
            beta_star: p.beta_star,
            feasible_cells: p.feasible_cells,
            cells_above_bound: p.cells_above_bound,
        })
    } else {
        None
    };

    let pre_scan = if opts.scan_pre {
        let pre_grid =
            SphereGrid::new(opts.pre_theta_steps, opts.pre_phi_steps).map_err(domain)?;
        let p = scan_pre_and_post(&inst, &pre_grid, &grid, opts.refine).map_err(domain)?;
        Some(PreScanSection {
            pre_theta_steps: opts.pre_theta_steps,
            pre_phi_steps: opts.pre_phi_steps,
            k_star: p.k_star,
            pre_theta: p.pre_theta,
            pre_phi: p.pre_phi,
            theta_star: p.theta_star,
            phi_star: p.phi_star,
        })
    } else {
        None
    };

    let summary = ScanSummary {
        n: opts.n,
        theta_steps: opts.theta_steps,
        phi_steps: opts.phi_steps,
        refine_steps: opts.refine,
        noncontextual_bound: noncontextual_bound(opts.n).map_err(domain)?,
        k_star: opt.k_star,
        theta_star: opt.theta_star,
        phi_star: opt.phi_star,
        defined_cells: scan.cells().iter().filter(|c| c.defined).count(),
        exclusive_cells: scan.cells().iter().filter(|c| c.feasible()).count(),
        region_counts,
        phases,
        pre_scan,
    };

    let csv_file = std::fs::File::create(&opts.out_csv)?;
    let mut writer = std::io::BufWriter::new(csv_file);
    scan.write_csv(&mut writer)?;
    writer.flush()?;
    std::fs::write(
        &opts.out_json,
        format!(
            "{}\n",
            serde_json::to_string_pretty(&summary).expect("summary serializes")
        ),
    )?;

    let mut out = String::new();
    out.push_str(&format!(
        "n = {}, grid {}x{}, refine {}\n",
        summary.n, summary.theta_steps, summary.phi_steps, summary.refine_steps
    ));
    out.push_str(&format!(
        "k_star = {} at theta = {}, phi = {} (noncontextual bound {})\n",
        sig9(summary.k_star),
        sig9(summary.theta_star),
        sig9(summary.phi_star),
        summary.noncontextual_bound
    ));
    out.push_str(&format!(
        "cells: {} defined, {} exclusivity-satisfying\n",
        summary.defined_cells, summary.exclusive_cells
    ));
    for rc in &summary.region_counts {
        out.push_str(&format!("region k > {}: {} cells\n", rc.k_min, rc.cells));
    }
    if let Some(p) = &summary.phases {
        out.push_str(&format!(
            "phases ({}x{} grid, {} phase steps): k_star = {}, {} feasible cells, {} above bound\n",
            p.theta_steps, p.phi_steps, p.phase_steps, sig9(p.k_star), p.feasible_cells, p.cells_above_bound
        ));
    }
    if let Some(p) = &summary.pre_scan {
        out.push_str(&format!(
            "pre-scan ({}x{} outer grid): k_star = {} at pre ({}, {})\n",
            p.pre_theta_steps,
            p.pre_phi_steps,
            sig9(p.k_star),
            sig9(p.pre_theta),
            sig9(p.pre_phi)
        ));
    }
    out.push_str(&format!("csv: {}\n", opts.out_csv.display()));
    out.push_str(&format!("summary: {}\n", opts.out_json.display()));
    Ok(out)
}

pub struct ParadoxOpts {
    pub pair: (usize, usize),
    pub theta_steps: usize,
    pub phi_steps: usize,
    pub n: usize,
    pub out: std::path::PathBuf,
}

/// Grid search for paradox witnesses on one adjacent pair of the cycle.
pub fn cmd_paradox_search(opts: &ParadoxOpts) -> Result<String, CliError> {
    let inst = cycle_instance(opts.n)?;
    let (i, j) = opts.pair;
    let n = opts.n;
    if i >= n || j >= n {
        return Err(CliError::Domain(tsvf_core::Error::LengthMismatch {
            expected: n,
            found: i.max(j),
        }));
    }
    // core rejects non-orthogonal pairs as well; checking adjacency here
    // gives the clearer message for cycle indices
    let adjacent = (i + 1) % n == j || (j + 1) % n == i;
    if !adjacent {
        let trace = inst.projectors()[i]
            .product_trace(&inst.projectors()[j])
            .map_err(domain)?;
        return Err(CliError::Domain(tsvf_core::Error::NotExclusive { trace }));
    }
    let grid = SphereGrid::new(opts.theta_steps, opts.phi_steps).map_err(domain)?;
    let pre = StateVector::basis(3, 2).expect("pole state");
    let witnesses = paradox_search(
        &pre,
        &inst.projectors()[i],
        &inst.projectors()[j],
        &grid,
    )
    .map_err(domain)?;

    let file = std::fs::File::create(&opts.out)?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "theta,phi,zeta_i,zeta_j,sum")?;
    for gw in &witnesses {
        writeln!(
            w,
            "{},{},{},{},{}",
            sig9(gw.theta),
            sig9(gw.phi),
            sig9(gw.witness.zeta1()),
            sig9(gw.witness.zeta2()),
            sig9(gw.witness.sum())
        )?;
    }
    w.flush()?;

    Ok(format!(
        "pair ({i},{j}) on the {n}-cycle: {} witnesses at {}x{} -> {}\n",
        witnesses.len(),
        opts.theta_steps,
        opts.phi_steps,
        opts.out.display()
    ))
}
