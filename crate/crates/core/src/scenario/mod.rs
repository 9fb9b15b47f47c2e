//! Parameter sweeps over the named scenarios, their configuration documents
//! and their tabular output.
//!
//! A configuration is a flat `key = value` text; `#` starts a comment. Times
//! accept a `pi` factor (`0.25pi`, `pi/4`, `3*pi`).

mod extrema;
mod presets;
mod table;

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{lossy_one_one_density, two_zero_coefficients};
use crate::fock::{Coupler, DensityOperator, ModeCutoff, PureState};
use crate::gaussian::{
    closed_form_nu, log_negativity_from_nu, ppt_symplectic_eigenvalues, FormulaMode,
    GaussianScenario, GaussianScenarioParams,
};
use crate::lindblad::{
    covariance_from_density, default_squeezed_cutoff, integrate_trajectory,
    single_mode_squeezed_fock, two_mode_squeezed_fock, IntegratorConfig,
};
use crate::negativity::{
    log_negativity_density, log_negativity_pure_bipartite, noon_logneg_analytic,
    one_one_logneg_analytic, LogBase,
};
use crate::{Error, Result, C64};

pub use extrema::{
    find_extrema, series_extrema, zero_intervals, Extremum, ExtremumKind, ZERO_THRESHOLD,
};
pub use presets::{
    loss_db_per_cm_to_rate, preset, presets, rate_to_loss_db_per_cm, time_from_length,
    MaterialPreset, PRESET_NAMES, SPEED_OF_LIGHT_CM_PER_S,
};
pub use table::{read_csv, read_csv_from, write_csv, write_csv_to, CSV_HEADER};

/// Largest `|analytic - numeric|` accepted from a `method = both` sweep.
pub const METHOD_AGREEMENT_TOL: f64 = 1e-6;

/// Memory cap for the density matrices a lossy numeric sweep keeps.
const TRAJECTORY_BYTES_LIMIT: f64 = 2.0 * 1024.0 * 1024.0 * 1024.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// `|1,1>` input.
    OneOne,
    /// `|2,0>` input.
    TwoZero,
    /// `(|N,0> + |0,N>)/sqrt 2` input.
    Noon(usize),
    /// A single-mode squeezed vacuum in each guide.
    SeparableSqueezed,
    /// Two-mode squeezed vacuum.
    EntangledSqueezed,
}

impl ScenarioKind {
    pub fn is_gaussian(self) -> bool {
        matches!(self, Self::SeparableSqueezed | Self::EntangledSqueezed)
    }

    /// Log base used when a config does not name one.
    pub fn default_base(self) -> LogBase {
        if self.is_gaussian() {
            LogBase::E
        } else {
            LogBase::Two
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OneOne => f.write_str("one-one"),
            Self::TwoZero => f.write_str("two-zero"),
            Self::Noon(n) => write!(f, "noon-{n}"),
            Self::SeparableSqueezed => f.write_str("sep-squeezed"),
            Self::EntangledSqueezed => f.write_str("ent-squeezed"),
        }
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "one-one" => Ok(Self::OneOne),
            "two-zero" => Ok(Self::TwoZero),
            "sep-squeezed" => Ok(Self::SeparableSqueezed),
            "ent-squeezed" => Ok(Self::EntangledSqueezed),
            _ => match s.strip_prefix("noon-").map(str::parse::<usize>) {
                Some(Ok(n)) if n >= 1 => Ok(Self::Noon(n)),
                _ => Err(Error::Domain(format!(
                    "unknown scenario `{s}` (one-one, two-zero, noon-N, sep-squeezed, ent-squeezed)"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Numeric,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Analytic => "analytic",
            Self::Numeric => "numeric",
            Self::Both => "both",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "analytic" => Ok(Self::Analytic),
            "numeric" => Ok(Self::Numeric),
            "both" => Ok(Self::Both),
            other => Err(Error::Domain(format!(
                "unknown method `{other}` (analytic, numeric, both)"
            ))),
        }
    }
}

/// Which route produced a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodTag {
    Analytic,
    Numeric,
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Analytic => "analytic",
            Self::Numeric => "numeric",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    /// Squeezing parameter; ignored by the Fock scenarios.
    pub r: f64,
    /// `gamma / J`.
    pub loss_ratio: f64,
    pub tau_start: f64,
    pub tau_end: f64,
    pub tau_points: usize,
    pub method: Method,
    /// `None` picks [`ScenarioKind::default_base`].
    pub base: Option<LogBase>,
    pub formula_mode: FormulaMode,
    /// Fock cutoff per mode for the numeric route. Defaults to the photon
    /// number of the input, or the squeezed-state default cutoff.
    pub n_max: Option<usize>,
    /// Integrator step for lossy numeric runs.
    pub step: Option<f64>,
    /// Step-halving tolerance for lossy numeric runs.
    pub trace_tolerance: Option<f64>,
    /// Largest NOON photon number the numeric route accepts.
    pub noon_numeric_limit: usize,
    /// Largest squeezed-state cutoff the numeric route accepts.
    pub max_cutoff: usize,
}

impl ScenarioConfig {
    /// Defaults: lossless, 401 points on `[0, pi]`, analytic.
    pub fn new(scenario: ScenarioKind) -> Self {
        Self {
            scenario,
            r: 0.0,
            loss_ratio: 0.0,
            tau_start: 0.0,
            tau_end: PI,
            tau_points: 401,
            method: Method::Analytic,
            base: None,
            formula_mode: FormulaMode::Consistent,
            n_max: None,
            step: None,
            trace_tolerance: None,
            noon_numeric_limit: 8,
            max_cutoff: 30,
        }
    }

    pub fn base(&self) -> LogBase {
        self.base.unwrap_or_else(|| self.scenario.default_base())
    }

    /// Equally spaced sweep times, both ends included.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.tau_points;
        let span = self.tau_end - self.tau_start;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.tau_end
                } else {
                    self.tau_start + span * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Domain(m));
        if self.tau_points < 2 {
            return bad(format!(
                "tau_points = {} must be at least 2",
                self.tau_points
            ));
        }
        if !self.tau_start.is_finite()
            || !self.tau_end.is_finite()
            || !(self.tau_end > self.tau_start)
        {
            return bad(format!(
                "need finite tau_end > tau_start, got [{}, {}]",
                self.tau_start, self.tau_end
            ));
        }
        if !(self.loss_ratio >= 0.0) || !self.loss_ratio.is_finite() {
            return bad(format!(
                "loss_ratio = {} must be finite and >= 0",
                self.loss_ratio
            ));
        }
        if self.loss_ratio > 0.0 && self.tau_start < 0.0 {
            return bad("lossy sweeps start at tau >= 0".into());
        }
        if !self.r.is_finite() {
            return bad(format!("r = {} must be finite", self.r));
        }
        for (name, v) in [
            ("step", self.step),
            ("trace_tolerance", self.trace_tolerance),
        ] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return bad(format!("{name} = {v} must be positive"));
                }
            }
        }
        if self.n_max == Some(0) {
            return bad("n_max must be at least 1".into());
        }
        Ok(())
    }

    /// The configuration as a `key = value` document that parses back to `self`.
    pub fn to_document(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        put("scenario", self.scenario.to_string());
        put("r", self.r.to_string());
        put("loss_ratio", self.loss_ratio.to_string());
        put("tau_start", self.tau_start.to_string());
        put("tau_end", self.tau_end.to_string());
        put("tau_points", self.tau_points.to_string());
        put("method", self.method.to_string());
        if let Some(b) = self.base {
            put("base", b.to_string());
        }
        put("formula_mode", self.formula_mode.to_string());
        if let Some(n) = self.n_max {
            put("n_max", n.to_string());
        }
        if let Some(h) = self.step {
            put("step", h.to_string());
        }
        if let Some(t) = self.trace_tolerance {
            put("trace_tolerance", t.to_string());
        }
        put("noon_numeric_limit", self.noon_numeric_limit.to_string());
        put("max_cutoff", self.max_cutoff.to_string());
        s
    }
}

/// Real number with an optional `pi` factor: `1.5`, `pi`, `0.25pi`, `3*pi`, `pi/4`, `3pi/4`.
fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    let Some((pre, post)) = s.split_once("pi") else {
        return s.parse().ok();
    };
    let pre = pre.trim().trim_end_matches('*').trim();
    let coef = if pre.is_empty() {
        1.0
    } else {
        pre.parse::<f64>().ok()?
    };
    let post = post.trim();
    let div = if post.is_empty() {
        1.0
    } else {
        post.strip_prefix('/')?.trim().parse::<f64>().ok()?
    };
    Some(coef * PI / div)
}

/// Parses a configuration document. `tau_end` defaults to `pi` for lossless
/// and `4 pi` for lossy sweeps.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if entries.iter().any(|(_, e, _)| *e == k) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate key `{k}`"),
            });
        }
        entries.push((line_no, k, v));
    }

    let Some((_, _, scenario)) = entries.iter().find(|(_, k, _)| k == "scenario") else {
        return Err(Error::Parse {
            line: 0,
            message: "missing required key `scenario`".into(),
        });
    };
    let scenario_line = entries
        .iter()
        .find(|(_, k, _)| k == "scenario")
        .map_or(0, |e| e.0);
    let scenario: ScenarioKind = scenario.parse().map_err(|e: Error| Error::Parse {
        line: scenario_line,
        message: e.to_string(),
    })?;
    let mut cfg = ScenarioConfig::new(scenario);
    let mut tau_end_set = false;

    for (line, k, v) in &entries {
        let perr = |what: &str| Error::Parse {
            line: *line,
            message: format!("`{k}`: expected {what}, got `{v}`"),
        };
        let real = || parse_real(v).ok_or_else(|| perr("a number"));
        let count = || {
            v.parse::<usize>()
                .map_err(|_| perr("a non-negative integer"))
        };
        match k.as_str() {
            "scenario" => {}
            "r" => cfg.r = real()?,
            "loss_ratio" => cfg.loss_ratio = real()?,
            "tau_start" => cfg.tau_start = real()?,
            "tau_end" => {
                cfg.tau_end = real()?;
                tau_end_set = true;
            }
            "tau_points" => cfg.tau_points = count()?,
            "method" => cfg.method = v.parse().map_err(|_| perr("analytic, numeric or both"))?,
            "base" => cfg.base = Some(v.parse().map_err(|_| perr("2 or e"))?),
            "formula_mode" => {
                cfg.formula_mode = v.parse().map_err(|_| perr("consistent or paper-exact"))?
            }
            "n_max" => cfg.n_max = Some(count()?),
            "step" => cfg.step = Some(real()?),
            "trace_tolerance" => cfg.trace_tolerance = Some(real()?),
            "noon_numeric_limit" => cfg.noon_numeric_limit = count()?,
            "max_cutoff" => cfg.max_cutoff = count()?,
            _ => return Err(Error::UnknownKey(k.clone())),
        }
    }
    if !tau_end_set && cfg.loss_ratio > 0.0 {
        cfg.tau_end = 4.0 * PI;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn read_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_config(&text)
}

pub fn write_config(config: &ScenarioConfig, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, config.to_document()).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// One sample. `diagnostic` is the smallest partially transposed symplectic
/// eigenvalue for the squeezed scenarios and the negativity `N` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub tau: f64,
    pub tau_over_pi: f64,
    pub e_n: f64,
    pub diagnostic: f64,
    pub method: MethodTag,
}

/// Rows ordered by `tau`; with both methods the analytic row comes first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn series(&self, method: MethodTag) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.method == method).collect()
    }

    /// `max |E_analytic - E_numeric|` over the shared grid, if both are present.
    pub fn max_method_gap(&self) -> Option<f64> {
        let a = self.series(MethodTag::Analytic);
        let n = self.series(MethodTag::Numeric);
        if a.is_empty() || n.is_empty() || a.len() != n.len() {
            return None;
        }
        Some(
            a.iter()
                .zip(&n)
                .map(|(x, y)| (x.e_n - y.e_n).abs())
                .fold(0.0, f64::max),
        )
    }

    /// Fails with an accuracy error when the two routes disagree beyond
    /// [`METHOD_AGREEMENT_TOL`].
    pub fn check_agreement(&self) -> Result<()> {
        match self.max_method_gap() {
            Some(gap) if !(gap < METHOD_AGREEMENT_TOL) => Err(Error::Accuracy(format!(
                "analytic and numeric log-negativity differ by {gap:e} (tolerance {METHOD_AGREEMENT_TOL:e})"
            ))),
            _ => Ok(()),
        }
    }
}

type Sample = (f64, f64);

pub fn run_sweep(cfg: &ScenarioConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let taus = cfg.grid();
    let analytic = match cfg.method {
        Method::Analytic | Method::Both => Some(analytic_series(cfg, &taus)?),
        Method::Numeric => None,
    };
    let numeric = match cfg.method {
        Method::Numeric | Method::Both => Some(numeric_series(cfg, &taus)?),
        Method::Analytic => None,
    };
    let mut rows = Vec::with_capacity(taus.len() * 2);
    for (i, &tau) in taus.iter().enumerate() {
        let tagged = [
            (MethodTag::Analytic, &analytic),
            (MethodTag::Numeric, &numeric),
        ];
        for (method, series) in tagged {
            if let Some(s) = series {
                let (e_n, diagnostic) = s[i];
                rows.push(SweepRow {
                    tau,
                    tau_over_pi: tau / PI,
                    e_n,
                    diagnostic,
                    method,
                });
            }
        }
    }
    Ok(SweepResult { rows })
}

/// `N = (base^E - 1) / 2`.
fn negativity_from_log(e: f64, base: LogBase) -> f64 {
    let x = match base {
        LogBase::Two => e.exp2(),
        LogBase::E => e.exp(),
    };
    0.5 * (x - 1.0)
}

fn fock_sample(e_base2: f64, base: LogBase) -> Sample {
    (
        LogBase::Two.convert(e_base2, base),
        negativity_from_log(e_base2, LogBase::Two),
    )
}

fn gaussian_scenario(cfg: &ScenarioConfig) -> GaussianScenario {
    match (cfg.scenario, cfg.loss_ratio > 0.0) {
        (ScenarioKind::SeparableSqueezed, false) => GaussianScenario::SeparableLossless,
        (ScenarioKind::SeparableSqueezed, true) => GaussianScenario::SeparableLossy,
        (_, false) => GaussianScenario::EntangledLossless,
        (_, true) => GaussianScenario::EntangledLossy,
    }
}

fn analytic_series(cfg: &ScenarioConfig, taus: &[f64]) -> Result<Vec<Sample>> {
    let base = cfg.base();
    let lossy = cfg.loss_ratio > 0.0;
    match cfg.scenario {
        ScenarioKind::TwoZero | ScenarioKind::Noon(_) if lossy => Err(Error::Domain(format!(
            "no closed form for lossy {}; use method = numeric",
            cfg.scenario
        ))),
        ScenarioKind::OneOne if lossy => taus
            .par_iter()
            .map(|&t| {
                let r = log_negativity_density(&lossy_one_one_density(t, cfg.loss_ratio)?, base)?;
                Ok((r.log_negativity, r.negativity))
            })
            .collect(),
        ScenarioKind::OneOne => Ok(taus
            .iter()
            .map(|&t| fock_sample(one_one_logneg_analytic(t), base))
            .collect()),
        ScenarioKind::TwoZero => taus
            .iter()
            .map(|&t| {
                Ok(fock_sample(
                    log_negativity_pure_bipartite(&two_zero_coefficients(t).by_mode_a_count())?,
                    base,
                ))
            })
            .collect(),
        ScenarioKind::Noon(n) => taus
            .iter()
            .map(|&t| Ok(fock_sample(noon_logneg_analytic(n, t)?, base)))
            .collect(),
        ScenarioKind::SeparableSqueezed | ScenarioKind::EntangledSqueezed => {
            let scenario = gaussian_scenario(cfg);
            taus.iter()
                .map(|&tau| {
                    let p = GaussianScenarioParams {
                        r: cfg.r,
                        tau,
                        loss_ratio: cfg.loss_ratio,
                        formula_mode: cfg.formula_mode,
                    };
                    let nu = closed_form_nu(scenario, &p)?.min();
                    Ok((log_negativity_from_nu(nu, base)?, nu))
                })
                .collect()
        }
    }
}

/// Input state and cutoff of the numeric route.
fn numeric_input(cfg: &ScenarioConfig) -> Result<PureState> {
    let fock_cutoff = |photons: usize| -> Result<ModeCutoff> {
        let n = cfg.n_max.unwrap_or(photons);
        if n < photons {
            return Err(Error::Domain(format!(
                "n_max = {n} cannot hold {photons} photons"
            )));
        }
        ModeCutoff::new(n)
    };
    let squeezed_cutoff = |two_mode: bool| -> Result<ModeCutoff> {
        let n = cfg
            .n_max
            .unwrap_or_else(|| default_squeezed_cutoff(cfg.r, two_mode));
        if n > cfg.max_cutoff {
            return Err(Error::ResourceGuard(format!(
                "squeezed-state cutoff n_max = {n} exceeds max_cutoff = {}",
                cfg.max_cutoff
            )));
        }
        ModeCutoff::new(n)
    };
    let one = C64::new(1.0, 0.0);
    match cfg.scenario {
        ScenarioKind::OneOne => PureState::basis(1, 1, fock_cutoff(2)?),
        ScenarioKind::TwoZero => PureState::basis(2, 0, fock_cutoff(2)?),
        ScenarioKind::Noon(n) => {
            if n > cfg.noon_numeric_limit {
                return Err(Error::ResourceGuard(format!(
                    "numeric NOON evolution limited to N <= {} (got N = {n}); raise noon_numeric_limit",
                    cfg.noon_numeric_limit
                )));
            }
            let amp = one * std::f64::consts::FRAC_1_SQRT_2;
            PureState::from_components(&[(n, 0, amp), (0, n, amp)], fock_cutoff(n)?)
        }
        ScenarioKind::SeparableSqueezed => {
            single_mode_squeezed_fock(cfg.r, squeezed_cutoff(false)?)
        }
        ScenarioKind::EntangledSqueezed => two_mode_squeezed_fock(cfg.r, squeezed_cutoff(true)?),
    }
}

fn numeric_series(cfg: &ScenarioConfig, taus: &[f64]) -> Result<Vec<Sample>> {
    let base = cfg.base();
    let psi = numeric_input(cfg)?;
    let gaussian = cfg.scenario.is_gaussian();
    let measure = |rho: &DensityOperator| -> Result<Sample> {
        let r = log_negativity_density(rho, base)?;
        if gaussian {
            let nu = ppt_symplectic_eigenvalues(&covariance_from_density(rho)?)?.min();
            Ok((r.log_negativity, nu))
        } else {
            Ok((r.log_negativity, r.negativity))
        }
    };
    if cfg.loss_ratio == 0.0 {
        let coupler = Coupler::new(psi.cutoff());
        return taus
            .par_iter()
            .map(|&t| measure(&coupler.evolve(&psi, t)?.density()))
            .collect();
    }
    let dim = psi.cutoff().dim() as f64;
    let bytes = 2.0 * taus.len() as f64 * dim * dim * 16.0;
    if bytes > TRAJECTORY_BYTES_LIMIT {
        return Err(Error::ResourceGuard(format!(
            "lossy trajectory of {} states at dimension {dim} needs {:.1} GiB; use fewer tau_points or a smaller n_max",
            taus.len(),
            bytes / (1024.0 * 1024.0 * 1024.0)
        )));
    }
    let mut config = IntegratorConfig::for_loss_ratio(cfg.loss_ratio);
    if let Some(h) = cfg.step {
        config = config.with_step(h);
    }
    if let Some(t) = cfg.trace_tolerance {
        config.trace_tolerance = t;
    }
    let states = integrate_trajectory(&psi.density(), taus, cfg.loss_ratio, &config)?;
    states.par_iter().map(measure).collect()
}
