use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::output::Column;
use super::CliError;
use crate::dynamics::{riccati_from_ermakov, validate_run, ClassicalState, ErmakovState, RiccatiVar, SystemState};
use crate::error::Error;
use crate::models::{Family, FrequencyProfile, Model, PhysicalConstants};

/// Scenario and scan file format, printed by `--schema`.
pub const SCHEMA: &str = r#"Scenario files are TOML.

[model]
family = "log_nlse"        # conservative | caldirola_kanai | expanding | log_nlse
mass = 1.0                 # default 1
hbar = 1.0                 # default 1
gamma = 0.5                # friction, >= 0; must be 0 for conservative
[model.omega]
kind = "constant"          # constant | piecewise | sampled
value = 1.0                # constant
# breakpoints = [5.0]      # piecewise: values[k] holds from breakpoints[k-1]
# values = [1.0, 2.0]      #   (right-continuous), len(values) = len(breakpoints) + 1
# times = [0.0, 1.0, ...]  # sampled: linear interpolation, len(times) = len(values)

[initial]
eta = 1.0                  # packet centre; the expanding family takes Q
eta_dot = 0.0              # its rate; the expanding family takes dQ/dt
c = { re = 0.0, im = 1.0 } # width variable, im > 0
# alpha = 1.0              # or the Ermakov width instead of c
# alpha_dot = 0.0          #   (default 0)
t0 = 0.0                   # default 0
phase = 0.0                # accumulated phase at t0, default 0

[run]
t_end = 20.0
dt = 1e-3
stride = 10                # store every stride-th step, default 10
accuracy_tol = 1e-6        # per-step error bound, default 1e-6

[output]                   # optional
columns = ["t", "eta", "I"]  # subset of: t eta eta_dot re_c im_c alpha phase I
                             # var_x var_p corr u_product energy re_z im_z
                             # emitted in that fixed order; default all

[coherent]                 # optional: checks the coherent state at t_end
grid_half_width = 8.0      # grid half width in units of the position spread
n_max = 40                 # terms of the displacement series

Scan files (the `scan` command) are TOML as well:

[constants]                # optional
mass = 1.0
hbar = 1.0

[scan]
omega = [0.0, 1.0]
gamma = [0.0, 0.5]
w0 = [{ re = 0.5, im = -1.0 }]   # one-parameter family labels
t_horizon = 20.0                  # time at which branch energies are taken
"#;

fn one() -> f64 {
    1.0
}

fn default_stride() -> usize {
    10
}

fn default_tol() -> f64 {
    crate::dynamics::DEFAULT_ACCURACY_TOL
}

fn default_half_width() -> f64 {
    8.0
}

fn default_n_max() -> usize {
    40
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    model: RawModel,
    initial: RawInitial,
    run: RawRun,
    output: Option<RawOutput>,
    coherent: Option<CoherentControls>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    family: Family,
    #[serde(default = "one")]
    mass: f64,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default)]
    gamma: f64,
    omega: RawOmega,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawOmega {
    Constant { value: f64 },
    Piecewise { breakpoints: Vec<f64>, values: Vec<f64> },
    Sampled { times: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    re: f64,
    im: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    #[serde(default)]
    eta: f64,
    #[serde(default)]
    eta_dot: f64,
    c: Option<RawComplex>,
    alpha: Option<f64>,
    alpha_dot: Option<f64>,
    #[serde(default)]
    t0: f64,
    #[serde(default)]
    phase: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    t_end: f64,
    dt: f64,
    #[serde(default = "default_stride")]
    stride: usize,
    #[serde(default = "default_tol")]
    accuracy_tol: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    columns: Vec<String>,
}

/// Coherent-state checks performed at the end of a run.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherentControls {
    #[serde(default = "default_half_width")]
    pub grid_half_width: f64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: Model,
    pub initial: SystemState,
    pub t_end: f64,
    pub dt: f64,
    pub stride: usize,
    pub accuracy_tol: f64,
    pub columns: Vec<Column>,
    pub coherent: Option<CoherentControls>,
}

fn parse_toml<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::invalid("<file>", e.message()))?;
    serde_path_to_error::deserialize(table).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "<file>".to_string() } else { path };
        CliError::invalid(field, e.into_inner().message())
    })
}

fn check_positive(field: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::invalid(field, format!("must be positive and finite, got {v}")))
    }
}

fn build_model(raw: RawModel) -> Result<Model, CliError> {
    let constants = PhysicalConstants::new(raw.mass, raw.hbar).map_err(|e| CliError::invalid("model.mass", e))?;
    let omega = match raw.omega {
        RawOmega::Constant { value } => FrequencyProfile::constant(value),
        RawOmega::Piecewise { breakpoints, values } => FrequencyProfile::piecewise(breakpoints, values),
        RawOmega::Sampled { times, values } => FrequencyProfile::sampled(times, values),
    }
    .map_err(|e| CliError::invalid("model.omega", e))?;
    Model::new(raw.family, constants, raw.gamma, omega).map_err(|e| CliError::invalid("model.gamma", e))
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawScenario = parse_toml(text)?;
        let model = build_model(raw.model)?;

        let init = raw.initial;
        for (field, v) in [("initial.eta", init.eta), ("initial.eta_dot", init.eta_dot), ("initial.t0", init.t0), ("initial.phase", init.phase)] {
            if !v.is_finite() {
                return Err(CliError::invalid(field, "must be finite"));
            }
        }
        let riccati = match (init.c, init.alpha, init.alpha_dot) {
            (Some(_), Some(_), _) | (Some(_), None, Some(_)) => {
                return Err(CliError::invalid("initial", "give either `c` or `alpha`/`alpha_dot`, not both"));
            }
            (None, None, None) => return Err(CliError::invalid("initial.c", "missing width: give `c` or `alpha`")),
            (None, None, Some(_)) => return Err(CliError::invalid("initial.alpha", "`alpha_dot` needs `alpha`")),
            (Some(c), None, None) => {
                if !c.re.is_finite() {
                    return Err(CliError::invalid("initial.c.re", "must be finite"));
                }
                check_positive("initial.c.im", c.im)?;
                RiccatiVar::new(c.re, c.im)
            }
            (None, Some(alpha), alpha_dot) => {
                check_positive("initial.alpha", alpha)?;
                let alpha_dot = alpha_dot.unwrap_or(0.0);
                if !alpha_dot.is_finite() {
                    return Err(CliError::invalid("initial.alpha_dot", "must be finite"));
                }
                let e = ErmakovState::new(alpha, alpha_dot).map_err(|e| CliError::invalid("initial.alpha", e))?;
                riccati_from_ermakov(&model, init.t0, e).map_err(|e| CliError::invalid("initial.alpha", e))?
            }
        };
        let initial = SystemState::new(init.t0, ClassicalState::new(init.eta, init.eta_dot), riccati, init.phase);

        let run = raw.run;
        check_positive("run.dt", run.dt)?;
        if !(run.t_end.is_finite() && run.t_end > initial.t) {
            return Err(CliError::invalid("run.t_end", format!("must exceed t0 = {}, got {}", initial.t, run.t_end)));
        }
        if run.stride == 0 {
            return Err(CliError::invalid("run.stride", "must be at least 1"));
        }
        check_positive("run.accuracy_tol", run.accuracy_tol)?;
        validate_run(&model, initial.t, run.t_end, run.dt).map_err(|e| match e {
            Error::InvalidArgument(_) => CliError::invalid("model.omega.breakpoints", e),
            _ => CliError::invalid("model.omega", e),
        })?;

        let columns = match raw.output {
            None => Column::ALL.to_vec(),
            Some(out) => {
                let mut picked = Vec::new();
                for (k, name) in out.columns.iter().enumerate() {
                    let col = Column::from_name(name).ok_or_else(|| {
                        CliError::invalid(format!("output.columns[{k}]"), format!("unknown column `{name}`"))
                    })?;
                    picked.push(col);
                }
                if picked.is_empty() {
                    return Err(CliError::invalid("output.columns", "select at least one column"));
                }
                Column::ALL.iter().copied().filter(|c| picked.contains(c)).collect()
            }
        };

        if let Some(cs) = raw.coherent {
            check_positive("coherent.grid_half_width", cs.grid_half_width)?;
        }

        Ok(Scenario {
            model,
            initial,
            t_end: run.t_end,
            dt: run.dt,
            stride: run.stride,
            accuracy_tol: run.accuracy_tol,
            columns,
            coherent: raw.coherent,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScanFile {
    constants: Option<RawConstants>,
    scan: RawScan,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    #[serde(default = "one")]
    mass: f64,
    #[serde(default = "one")]
    hbar: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    omega: Vec<f64>,
    gamma: Vec<f64>,
    w0: Vec<RawComplex>,
    t_horizon: f64,
}

/// A validated branch-scan grid over `(ω, γ, w₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid {
    pub constants: PhysicalConstants,
    pub omega: Vec<f64>,
    pub gamma: Vec<f64>,
    pub w0: Vec<num_complex::Complex64>,
    pub t_horizon: f64,
}

impl ScanGrid {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawScanFile = parse_toml(text)?;
        let constants = match raw.constants {
            None => PhysicalConstants::natural(),
            Some(c) => PhysicalConstants::new(c.mass, c.hbar).map_err(|e| CliError::invalid("constants", e))?,
        };
        let scan = raw.scan;
        for (name, values) in [("scan.omega", &scan.omega), ("scan.gamma", &scan.gamma)] {
            if values.is_empty() {
                return Err(CliError::invalid(name, "must not be empty"));
            }
            for (k, v) in values.iter().enumerate() {
                if !(v.is_finite() && *v >= 0.0) {
                    return Err(CliError::invalid(format!("{name}[{k}]"), format!("must be finite and >= 0, got {v}")));
                }
            }
        }
        if scan.w0.is_empty() {
            return Err(CliError::invalid("scan.w0", "must not be empty"));
        }
        for (k, w) in scan.w0.iter().enumerate() {
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(CliError::invalid(format!("scan.w0[{k}]"), "must be finite"));
            }
        }
        if !(scan.t_horizon.is_finite() && scan.t_horizon >= 0.0) {
            return Err(CliError::invalid("scan.t_horizon", "must be finite and >= 0"));
        }
        Ok(ScanGrid {
            constants,
            omega: scan.omega,
            gamma: scan.gamma,
            w0: scan.w0.iter().map(|w| num_complex::Complex64::new(w.re, w.im)).collect(),
            t_horizon: scan.t_horizon,
        })
    }

    /// Grid points in index order: `ω` slowest, `w₀` fastest.
    pub fn points(&self) -> Vec<(f64, f64, num_complex::Complex64)> {
        let mut out = Vec::new();
        for &w in &self.omega {
            for &g in &self.gamma {
                for &w0 in &self.w0 {
                    out.push((w, g, w0));
                }
            }
        }
        out
    }
}
