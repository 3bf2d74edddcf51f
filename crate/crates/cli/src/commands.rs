//! The three subcommands, callable without going through argument parsing.

use std::path::{Path, PathBuf};

use serde::Serialize;

use kimura_core::verify::{
    generating_integral_checks, generating_series_checks, integral_identity_checks, orthogonality_checks,
    shifted_moment_checks, IdentityCheck, GENERATING_TS,
};
use kimura_core::wf::generation_for_time;
use kimura_core::{simulate, time_map, InitialCondition, MeasureSolution, WfConfig};

use crate::config::{load_config, ScenarioConfig};
use crate::output::{fmt_f64, write_file, Csv};
use crate::CliError;

/// Expansion variables at which the generating-integral series are checked.
const SERIES_TS: [f64; 4] = [-0.3, -0.1, 0.1, 0.3];
const SERIES_TERMS: usize = 30;
/// `|z|` above which `validate-mc` fails.
pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentitiesReport {
    pub path: PathBuf,
    pub checks: usize,
    pub failures: Vec<String>,
    pub max_abs_error: f64,
}

/// Every closed form against its reference for each `α`, plus the shifted
/// `α = 3/2` moments. Writes `identities.csv`.
pub fn cmd_identities(alphas: &[f64], n_max: usize, tol: f64, out: &Path) -> Result<IdentitiesReport, CliError> {
    if alphas.is_empty() {
        return Err(CliError::Usage("--alpha needs at least one value".into()));
    }
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let mut checks: Vec<IdentityCheck> = Vec::new();
    for &alpha in alphas {
        checks.extend(integral_identity_checks(alpha, n_max)?);
        // C_n^0 vanishes identically for n ≥ 1, so there is no norm to check
        if alpha != 0.0 {
            checks.extend(orthogonality_checks(alpha, n_max)?);
        }
        checks.extend(generating_integral_checks(alpha, &GENERATING_TS)?);
        checks.extend(generating_series_checks(alpha, &SERIES_TS, SERIES_TERMS)?);
    }
    checks.extend(shifted_moment_checks(n_max)?);

    let mut csv = Csv::new(&["identity", "alpha", "n", "closed_form", "quadrature", "abs_error"]);
    let mut failures = Vec::new();
    let mut max_abs_error = 0.0_f64;
    for c in &checks {
        let name = match c.t {
            Some(t) => format!("{}[t={t}]", c.identity),
            None => c.identity.to_string(),
        };
        let n = c.n.map(|n| n.to_string()).unwrap_or_default();
        csv.row(&[
            name.clone(),
            fmt_f64(c.alpha),
            n.clone(),
            fmt_f64(c.closed_form),
            fmt_f64(c.reference),
            fmt_f64(c.abs_error()),
        ]);
        max_abs_error = max_abs_error.max(c.abs_error());
        if !c.passes_mixed(tol) {
            failures.push(format!("{name} alpha={} n={n}: error {:.3e}", c.alpha, c.abs_error()));
        }
    }
    let path = csv.write(out, "identities.csv")?;
    Ok(IdentitiesReport { path, checks: checks.len(), failures, max_abs_error })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub truncation: usize,
    pub times: usize,
    pub max_mass_residual: f64,
    pub max_mean_residual: f64,
}

#[derive(Serialize)]
struct Meta<'a> {
    config: &'a ScenarioConfig,
    truncation: usize,
    quad_order: usize,
    coefficients: &'a [f64],
    diagnostics: Diagnostics,
}

#[derive(Serialize)]
struct Diagnostics {
    initial_mass: f64,
    initial_mean: f64,
    initial_heterozygosity: f64,
    normalization: f64,
    projection_error: Option<f64>,
    resolved_after: f64,
    pde_residual: Option<f64>,
    max_mass_residual: f64,
    max_mean_residual: f64,
    min_interior_density: Vec<f64>,
}

/// Solves the scenario in `config_path` and writes `summary.csv`, one
/// `density_<t>.csv` per time and `meta.json`.
pub fn cmd_solve(config_path: &Path, out: &Path) -> Result<SolveReport, CliError> {
    let cfg = load_config(config_path)?;
    solve_config(&cfg, out)
}

pub fn solve_config(cfg: &ScenarioConfig, out: &Path) -> Result<SolveReport, CliError> {
    let truncation = cfg.truncation();
    let quad_order = cfg.quad_order();
    let sol = MeasureSolution::new(&cfg.initial_condition, truncation, quad_order)?;
    let report = sol.conservation_report(&cfg.times, truncation / 2 + 2)?;

    let mut summary = Csv::new(&[
        "t",
        "a",
        "b",
        "interior_mass",
        "mass_residual",
        "mean_residual",
        "asymptotic_b",
    ]);
    for (i, &t) in cfg.times.iter().enumerate() {
        summary.row(&[
            fmt_f64(t),
            fmt_f64(sol.extinction_probability(t)?),
            fmt_f64(sol.fixation_probability(t)?),
            fmt_f64(report.interior_mass[i]),
            fmt_f64(report.mass_residual[i]),
            fmt_f64(report.mean_residual[i]),
            fmt_f64(sol.asymptotic_fixation(t)),
        ]);
    }
    summary.write(out, "summary.csv")?;

    let last = (cfg.output_grid - 1) as f64;
    for &t in &cfg.times {
        let mut density = Csv::new(&["x", "r"]);
        for i in 0..cfg.output_grid {
            let x = i as f64 / last;
            density.row(&[fmt_f64(x), fmt_f64(sol.interior_density(x, t)?)]);
        }
        density.write(out, &format!("density_{t}.csv"))?;
    }

    let pde_residual = match cfg.times.iter().copied().find(|&t| t > 0.0) {
        Some(t) => Some(sol.pde_residual(t)?),
        None => None,
    };
    let meta = Meta {
        config: cfg,
        truncation,
        quad_order,
        coefficients: sol.coefficients().values(),
        diagnostics: Diagnostics {
            initial_mass: sol.initial_mass(),
            initial_mean: sol.initial_mean(),
            initial_heterozygosity: sol.initial_heterozygosity(),
            normalization: sol.normalization(),
            projection_error: sol.projection_error(),
            resolved_after: sol.resolved_after(),
            pde_residual,
            max_mass_residual: report.max_mass_residual(),
            max_mean_residual: report.max_mean_residual(),
            min_interior_density: report.min_interior_density.clone(),
        },
    };
    let mut json = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Numerical(e.to_string()))?;
    json.push('\n');
    write_file(out, "meta.json", &json)?;

    Ok(SolveReport {
        truncation,
        times: cfg.times.len(),
        max_mass_residual: report.max_mass_residual(),
        max_mean_residual: report.max_mean_residual(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub path: PathBuf,
    pub rows: usize,
    pub max_abs_z: f64,
    /// Largest `|H(t)/H(0) − e^{−2t}|` in units of `3·SE + 1/N`.
    pub heterozygosity_excess: f64,
    pub heterozygosity_ok: bool,
}

impl McReport {
    pub fn passed(&self) -> bool {
        self.max_abs_z <= Z_LIMIT
    }
}

/// Runs the Wright-Fisher block of `config_path` and writes `mc_compare.csv`.
/// The spectral side is a point mass at the simulated start `round(N·x0)/N`.
pub fn cmd_validate_mc(config_path: &Path, out: &Path, seed: Option<u64>) -> Result<McReport, CliError> {
    let cfg = load_config(config_path)?;
    validate_mc_config(&cfg, out, seed)
}

pub fn validate_mc_config(cfg: &ScenarioConfig, out: &Path, seed: Option<u64>) -> Result<McReport, CliError> {
    let wf = cfg.wf.as_ref().ok_or_else(|| CliError::Config("at `wf`: validate-mc needs a wf block".into()))?;
    let x0 = match (wf.x0, &cfg.initial_condition) {
        (Some(x0), _) => x0,
        (None, InitialCondition::Delta { x0 }) => *x0,
        (None, _) => {
            return Err(CliError::Config(
                "at `wf.x0`: required unless the initial condition is a point mass".into(),
            ))
        }
    };
    let seed = seed
        .or(wf.seed)
        .ok_or_else(|| CliError::Config("at `wf.seed`: no seed in the config and no --seed given".into()))?;
    let last_time = cfg.times.last().copied().unwrap_or(0.0);
    let needed = generation_for_time(last_time, wf.population_size);
    let generations = wf.generations.unwrap_or(needed);
    if generations < needed {
        return Err(CliError::Config(format!(
            "at `wf.generations`: {generations} generations do not reach t = {last_time} (need {needed})"
        )));
    }
    let wf_cfg = WfConfig { population_size: wf.population_size, x0, generations, replicates: wf.replicates, seed };
    wf_cfg.validate().map_err(|e| CliError::Config(format!("at `wf`: {e}")))?;

    let stats = simulate(&wf_cfg)?;
    let start = InitialCondition::Delta { x0: wf_cfg.initial_frequency() };
    let sol = MeasureSolution::new(&start, cfg.truncation(), 0)?;
    let n_pop = wf_cfg.population_size;
    let h0 = stats.mean_heterozygosity[0];

    let mut csv = Csv::new(&["t", "b_spectral", "b_mc", "mc_stderr", "z_score"]);
    let mut max_abs_z = 0.0_f64;
    let mut heterozygosity_excess = 0.0_f64;
    for &t in &cfg.times {
        let g = generation_for_time(t, n_pop);
        let tg = time_map(g, n_pop);
        let b = sol.fixation_probability(tg)?;
        let p = stats.fixed_fraction[g];
        let stderr = stats.fraction_stderr(b).max(stats.fraction_stderr(p));
        let z = if stderr > 0.0 {
            (p - b) / stderr
        } else if p == b {
            0.0
        } else {
            f64::INFINITY.copysign(p - b)
        };
        max_abs_z = max_abs_z.max(z.abs());
        csv.row(&[fmt_f64(tg), fmt_f64(b), fmt_f64(p), fmt_f64(stderr), fmt_f64(z)]);

        let ratio = stats.mean_heterozygosity[g] / h0;
        let allowance = 3.0 * stats.heterozygosity_stderr[g] / h0 + 1.0 / n_pop as f64;
        heterozygosity_excess = heterozygosity_excess.max((ratio - (-2.0 * tg).exp()).abs() / allowance);
    }
    let path = csv.write(out, "mc_compare.csv")?;
    Ok(McReport {
        path,
        rows: cfg.times.len(),
        max_abs_z,
        heterozygosity_excess,
        heterozygosity_ok: heterozygosity_excess <= 1.0,
    })
}
