use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::output::{format_float, io_err, write_table, Column};
use super::scenario::{CoherentControls, Scenario, ScanGrid};
use super::CliError;
use crate::closed_form::{classify_branch, BranchClass, FamilyParameter};
use crate::dynamics::{integrate_with, IntegratorOptions, SystemState, TimeSeries};
use crate::error::Error;
use crate::ladder::{coherent_closed_form, displacement_series, phase_adjusted_constancy, z_eigenvalue, ZLevel};
use crate::models::{Family, FrequencyProfile, Model};
use crate::observables::{
    ck_uncertainty_product, energy_contribution, invariant_drift, invariant_from_riccati, uncertainties,
};
use crate::quadrature::{trapezoid, uniform_grid};
use crate::transforms::{nl_to_ck_riccati, nl_to_expanding_riccati, physical_to_expanding};

/// Verification summary written next to the time series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub invariant_drift: f64,
    pub sr_residual_max: f64,
    /// Conservative runs only.
    pub z_phase_drift: Option<f64>,
    pub warnings: Vec<String>,
}

/// Coherent-state checks at the final stored state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherentReport {
    pub t: f64,
    pub re_z: f64,
    pub im_z: f64,
    pub n_max: usize,
    pub tail_bound: f64,
    pub series_max_error: f64,
    pub norm_quadrature: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: TimeSeries,
    /// One entry per stored state, all columns in [`Column::ALL`] order.
    pub rows: Vec<[f64; 15]>,
    pub columns: Vec<Column>,
    pub report: RunReport,
    pub coherent: Option<CoherentReport>,
}

fn options(s: &Scenario) -> IntegratorOptions {
    IntegratorOptions { accuracy_tol: s.accuracy_tol, stride: s.stride, ..Default::default() }
}

fn row(model: &Model, s: &SystemState) -> Result<[f64; 15], Error> {
    let c = s.riccati;
    let u = uncertainties(model.constants(), c)?;
    let inv = invariant_from_riccati(model, s.t, s.classical, c)?.value;
    let energy = energy_contribution(model.constants(), c, model.omega_at(s.t)?)?;
    let z = z_eigenvalue(model, s.classical, c, s.t, ZLevel::Invariant)?;
    Ok([
        s.t,
        s.classical.eta,
        s.classical.eta_dot,
        c.re(),
        c.im(),
        c.alpha()?,
        s.phase,
        inv,
        u.var_x,
        u.var_p,
        u.corr,
        u.u_product,
        energy,
        z.re(),
        z.im(),
    ])
}

fn coherent_check(model: &Model, s: &SystemState, cs: &CoherentControls) -> Result<CoherentReport, CliError> {
    let consts = model.constants();
    let z = z_eigenvalue(model, s.classical, s.riccati, s.t, ZLevel::Physical).map_err(CliError::from_run)?;
    let sigma = (0.5 * consts.hbar() / (consts.mass() * s.riccati.im())).sqrt();
    let center = {
        let alpha = s.riccati.alpha().map_err(CliError::from_run)?;
        z.re() * alpha * (2.0 * consts.hbar() / consts.mass()).sqrt()
    };
    let grid = uniform_grid(center, cs.grid_half_width * sigma, 2001);
    let closed = coherent_closed_form(consts, z, s.riccati, s.phase, &grid).map_err(|e| match e {
        Error::GridCoverage { .. } => CliError::invalid("coherent.grid_half_width", e),
        other => CliError::from_run(other),
    })?;
    let series = displacement_series(consts, z, s.riccati, s.phase, cs.n_max).map_err(CliError::from_run)?;
    let series_max_error =
        grid.iter().zip(&closed).map(|(&x, v)| (series.state.evaluate(x) - v).norm()).fold(0.0, f64::max);
    let density: Vec<f64> = closed.iter().map(|v| v.norm_sqr()).collect();
    let norm_quadrature = trapezoid(&grid, &density).map_err(CliError::from_run)?;
    Ok(CoherentReport {
        t: s.t,
        re_z: z.re(),
        im_z: z.im(),
        n_max: cs.n_max,
        tail_bound: series.tail_bound,
        series_max_error,
        norm_quadrature,
    })
}

/// Integrates a scenario and evaluates every output column.
pub fn run(s: &Scenario) -> Result<RunOutput, CliError> {
    let series = integrate_with(&s.model, s.initial, s.t_end, s.dt, &options(s)).map_err(CliError::from_run)?;
    let model = series.model().clone();
    let rows = series.states().iter().map(|st| row(&model, st)).collect::<Result<Vec<_>, _>>();
    let rows = rows.map_err(CliError::from_run)?;

    let invariants: Vec<f64> = rows.iter().map(|r| r[Column::Invariant.index()]).collect();
    let hbar = model.constants().hbar();
    let mut sr_residual_max = 0.0_f64;
    for st in series.states() {
        let u = uncertainties(model.constants(), st.riccati).map_err(CliError::from_run)?;
        sr_residual_max = sr_residual_max.max(u.sr_residual(hbar));
    }
    let z_phase_drift = if model.family() == Family::Conservative {
        Some(phase_adjusted_constancy(&series).map_err(CliError::from_run)?.max_drift)
    } else {
        None
    };

    let mut warnings = Vec::new();
    match model.family() {
        Family::CaldirolaKanai => warnings.push(
            "caldirola_kanai: re_c, im_c and the momentum columns refer to the canonical width and momentum".to_string(),
        ),
        Family::Expanding => {
            warnings.push("expanding: eta and eta_dot hold the expanding coordinate and its rate".to_string())
        }
        _ => {}
    }
    let final_bound = series.error_bounds().last().copied().unwrap_or(0.0);
    if final_bound > s.accuracy_tol {
        warnings.push(format!(
            "accumulated step error estimate {} exceeds accuracy_tol {}",
            format_float(final_bound),
            format_float(s.accuracy_tol)
        ));
    }

    let coherent = match &s.coherent {
        Some(cs) => Some(coherent_check(&model, series.last(), cs)?),
        None => None,
    };

    Ok(RunOutput {
        series,
        rows,
        columns: s.columns.clone(),
        report: RunReport { invariant_drift: invariant_drift(&invariants), sr_residual_max, z_phase_drift, warnings },
        coherent,
    })
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn write_csv(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    write_table(std::io::BufWriter::new(file), header, rows).map_err(|e| io_err(path, e))
}

/// Writes `timeseries.csv`, `report.json` and, when requested,
/// `coherent.json` into `dir`.
pub fn write_run(dir: &Path, out: &RunOutput) -> Result<Vec<PathBuf>, CliError> {
    prepare_dir(dir)?;
    let header: Vec<&str> = out.columns.iter().map(|c| c.name()).collect();
    let rows = out
        .rows
        .iter()
        .map(|r| out.columns.iter().map(|c| format_float(r[c.index()])).collect())
        .collect();
    let csv_path = dir.join("timeseries.csv");
    write_csv(&csv_path, &header, rows)?;
    let report_path = dir.join("report.json");
    write_json(&report_path, &out.report)?;
    let mut written = vec![csv_path, report_path];
    if let Some(c) = &out.coherent {
        let p = dir.join("coherent.json");
        write_json(&p, c)?;
        written.push(p);
    }
    Ok(written)
}

/// One point of a branch scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub index: usize,
    pub omega: f64,
    pub gamma: f64,
    pub w0: C64,
    pub class: BranchClass,
    /// `A` for the `+` and `−` roots.
    pub a: [C64; 2],
    pub physical: [bool; 2],
    pub equilibrium_alpha: Option<f64>,
    /// Width energy contribution of each branch's family member at the
    /// horizon.
    pub energies: [Option<f64>; 2],
}

/// Classifies every grid point; rows come back in grid order whatever the
/// scheduling.
pub fn scan(grid: &ScanGrid) -> Result<Vec<ScanRow>, CliError> {
    let points = grid.points();
    let mut rows = points
        .par_iter()
        .enumerate()
        .map(|(index, &(omega, gamma, w0))| {
            let profile = FrequencyProfile::constant(omega).map_err(|e| CliError::invalid("scan.omega", e))?;
            let model =
                Model::log_nlse(grid.constants, gamma, profile).map_err(|e| CliError::invalid("scan.gamma", e))?;
            let report = classify_branch(&model).map_err(CliError::from_run)?;
            let energies = report.branch_energies(&model, FamilyParameter::Finite(w0), grid.t_horizon);
            Ok(ScanRow {
                index,
                omega,
                gamma,
                w0,
                class: report.class,
                a: report.a_values(),
                physical: [report.solutions[0].physical, report.solutions[1].physical],
                equilibrium_alpha: report.equilibrium_alpha,
                energies,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    rows.sort_by_key(|r| r.index);
    Ok(rows)
}

const SCAN_HEADER: [&str; 15] = [
    "index",
    "omega",
    "gamma",
    "re_w0",
    "im_w0",
    "class",
    "re_a_plus",
    "im_a_plus",
    "re_a_minus",
    "im_a_minus",
    "physical_plus",
    "physical_minus",
    "equilibrium_alpha",
    "energy_plus",
    "energy_minus",
];

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

/// Writes `scan.csv` into `dir`.
pub fn write_scan(dir: &Path, rows: &[ScanRow]) -> Result<Vec<PathBuf>, CliError> {
    prepare_dir(dir)?;
    let records = rows
        .iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                format_float(r.omega),
                format_float(r.gamma),
                format_float(r.w0.re),
                format_float(r.w0.im),
                r.class.name().to_string(),
                format_float(r.a[0].re),
                format_float(r.a[0].im),
                format_float(r.a[1].re),
                format_float(r.a[1].im),
                r.physical[0].to_string(),
                r.physical[1].to_string(),
                opt(r.equilibrium_alpha),
                opt(r.energies[0]),
                opt(r.energies[1]),
            ]
        })
        .collect();
    let path = dir.join("scan.csv");
    write_csv(&path, &SCAN_HEADER, records)?;
    Ok(vec![path])
}

/// Cross-representation summary of a log-NLSE scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    /// `max_t max(|Î_CK − I_NL|, |Î_exp − I_NL|)`
    pub invariant_discrepancy: f64,
    /// `max_t |ĉ_CK − e^{γt} c_NL|`
    pub riccati_map_residual: f64,
    /// `max_t max(|Q − e^{γt/2}η|, |c_exp − c_NL − γ/2|)`
    pub expanding_map_residual: f64,
    pub u_product_min: f64,
    pub u_ck_min: f64,
    pub u_ck_final: f64,
    /// `U_CK` ends below `ħ²/4` while `u_product` never does.
    pub u_ck_below_bound: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CompareOutput {
    pub nl: TimeSeries,
    pub ck: TimeSeries,
    pub expanding: TimeSeries,
    /// `t, I_nl, I_ck, I_exp, map_residual, u_product, u_ck` per stored state.
    pub rows: Vec<[f64; 7]>,
    pub report: CompareReport,
}

const COMPARE_HEADER: [&str; 7] = ["t", "I_nl", "I_ck", "I_exp", "map_residual", "u_product", "u_ck"];

/// Integrates a log-NLSE scenario together with its Caldirola–Kanai and
/// expanding-coordinate images and compares them.
pub fn compare(s: &Scenario) -> Result<CompareOutput, CliError> {
    let model = &s.model;
    if model.family() != Family::LogNlse {
        return Err(CliError::invalid("model.family", "compare needs a log_nlse scenario"));
    }
    let (t0, g) = (s.initial.t, model.gamma());
    let ck_model = model.with_family(Family::CaldirolaKanai).map_err(|e| CliError::invalid("model", e))?;
    let exp_model = model.with_family(Family::Expanding).map_err(|e| CliError::invalid("model", e))?;
    let c_ck = nl_to_ck_riccati(s.initial.riccati, t0, g).map_err(CliError::from_run)?.into_value();
    let c_exp = nl_to_expanding_riccati(s.initial.riccati, g).map_err(CliError::from_run)?.into_value();
    let q0 = physical_to_expanding(s.initial.classical, t0, g).into_value();
    let ck_init = SystemState { riccati: c_ck, ..s.initial };
    let exp_init = SystemState { riccati: c_exp, classical: q0, ..s.initial };

    let opts = options(s);
    let ((nl, ck), expanding) = rayon::join(
        || {
            rayon::join(
                || integrate_with(model, s.initial, s.t_end, s.dt, &opts),
                || integrate_with(&ck_model, ck_init, s.t_end, s.dt, &opts),
            )
        },
        || integrate_with(&exp_model, exp_init, s.t_end, s.dt, &opts),
    );
    let (nl, ck, expanding) = (
        nl.map_err(CliError::from_run)?,
        ck.map_err(CliError::from_run)?,
        expanding.map_err(CliError::from_run)?,
    );
    let u_ck = ck_uncertainty_product(&ck).map_err(CliError::from_run)?;

    let mut rows = Vec::with_capacity(nl.len());
    let (mut inv_gap, mut map_res, mut exp_res) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut u_min = f64::INFINITY;
    for (k, ((a, b), e)) in nl.states().iter().zip(ck.states()).zip(expanding.states()).enumerate() {
        let t = a.t;
        let i_nl = invariant_from_riccati(model, t, a.classical, a.riccati).map_err(CliError::from_run)?.value;
        let i_ck = invariant_from_riccati(&ck_model, t, b.classical, b.riccati).map_err(CliError::from_run)?.value;
        let i_exp =
            invariant_from_riccati(&exp_model, t, e.classical, e.riccati).map_err(CliError::from_run)?.value;
        let residual = (b.riccati.0 - a.riccati.0 * (g * t).exp()).norm();
        let q_res = (e.classical.eta - (0.5 * g * t).exp() * a.classical.eta).abs();
        let c_res = (e.riccati.0 - a.riccati.0 - 0.5 * g).norm();
        let u = uncertainties(model.constants(), a.riccati).map_err(CliError::from_run)?.u_product;
        inv_gap = inv_gap.max((i_ck - i_nl).abs()).max((i_exp - i_nl).abs());
        map_res = map_res.max(residual);
        exp_res = exp_res.max(q_res).max(c_res);
        u_min = u_min.min(u);
        rows.push([t, i_nl, i_ck, i_exp, residual, u, u_ck[k]]);
    }

    let bound = 0.25 * model.constants().hbar().powi(2);
    let u_ck_min = u_ck.iter().copied().fold(f64::INFINITY, f64::min);
    let u_ck_final = *u_ck.last().unwrap_or(&f64::NAN);
    let mut warnings = Vec::new();
    if g == 0.0 {
        warnings.push("gamma = 0: the three descriptions coincide".to_string());
    }
    let report = CompareReport {
        invariant_discrepancy: inv_gap,
        riccati_map_residual: map_res,
        expanding_map_residual: exp_res,
        u_product_min: u_min,
        u_ck_min,
        u_ck_final,
        u_ck_below_bound: u_ck_final < bound && u_min >= bound - 1e-12 * bound,
        warnings,
    };
    Ok(CompareOutput { nl, ck, expanding, rows, report })
}

/// Writes `compare.csv` and `compare.json` into `dir`.
pub fn write_compare(dir: &Path, out: &CompareOutput) -> Result<Vec<PathBuf>, CliError> {
    prepare_dir(dir)?;
    let csv_path = dir.join("compare.csv");
    write_csv(&csv_path, &COMPARE_HEADER, out.rows.iter().map(|r| r.iter().map(|v| format_float(*v)).collect()).collect())?;
    let json_path = dir.join("compare.json");
    write_json(&json_path, &out.report)?;
    Ok(vec![csv_path, json_path])
}
