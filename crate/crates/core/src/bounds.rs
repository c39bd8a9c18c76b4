//! Bounds relating Gaussian entanglement measures to the negativities, and
//! the random-state experiment that probes them.
//!
//! For every state, `ν̃_opt ≤ ν̃₋(σ)` (saturated by symmetric states), and
//! `ν̃_opt ≥ (1 − √(1 − ν̃₋²))/ν̃₋`, which is attained by GMEMMS in the limit
//! of infinite local mixedness and is proven for GMEMS and GLEMS only. In
//! terms of the Gaussian EoF and the log-negativity `E_N` the same curves
//! read `h(2^{−E_N}) ≤ G_EoF ≤ h(2^{E_N}(1 − √(1 − 2^{−2E_N})))`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::{build_state, ExtremalParams};
use crate::gaussian_em::{m_from_nu_tilde, minimize_m_with, GemOptions};
use crate::negativity::{h_function, log_negativity, LogBase};
use crate::report::sig17;
use crate::symplectic::{StandardForm, SymplecticSpectrum};
use crate::DEFAULT_TOL;

/// Slack on the inequality checks of the experiment.
pub const VIOLATION_SLACK: f64 = 1e-9;
/// Consecutive rejections after which the sampler gives up.
pub const MAX_REJECTIONS: usize = 1_000_000;

fn check_open_unit(nu: f64) -> Result<()> {
    if nu > 0.0 && nu <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("ν̃₋ must lie in (0, 1], got {nu}")))
    }
}

/// Upper bound on `ν̃_opt`, `ν̃₋(σ)` itself.
pub fn nu_opt_upper(nu_tilde_sigma: f64) -> Result<f64> {
    check_open_unit(nu_tilde_sigma)?;
    Ok(nu_tilde_sigma)
}

/// Lower bound on `ν̃_opt`, `(1 − √(1 − ν̃²))/ν̃`.
pub fn nu_opt_lower(nu_tilde_sigma: f64) -> Result<f64> {
    check_open_unit(nu_tilde_sigma)?;
    let nu = nu_tilde_sigma;
    Ok(nu / (1.0 + (1.0 - nu * nu).sqrt()))
}

/// `(lower, upper)` bounds on the Gaussian EoF (in bits) at log-negativity
/// `log_neg` (in bits).
pub fn geof_bounds(log_neg: f64) -> Result<(f64, f64)> {
    if !(log_neg > 0.0) || !log_neg.is_finite() {
        return Err(Error::domain(format!("E_N must be positive and finite, got {log_neg}")));
    }
    let x = (-log_neg).exp2();
    let lower = h_function(x, LogBase::Two)?;
    // 2^E (1 − √(1 − 2^{−2E})) = 1/(2^E + √(2^{2E} − 1))
    let y = 1.0 / x;
    let upper = h_function(1.0 / (y + (y * y - 1.0).sqrt()), LogBase::Two)?;
    Ok((lower, upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Uniform draws of `(s, d, λ, g)` fed through the extremal parametrization.
    #[default]
    ExtremalParams,
    /// Uniform draws of `(a, b, c₊, c₋)` in a box, kept if physical and entangled.
    RawStandardForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub count: usize,
    pub s_max: f64,
    pub mode: SamplingMode,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { seed: 0, count: 50_000, s_max: 20.0, mode: SamplingMode::ExtremalParams }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count < 1 {
            return Err(Error::domain("sample count must be at least 1"));
        }
        if !(self.s_max > 1.0) || !self.s_max.is_finite() {
            return Err(Error::domain(format!("s_max must exceed 1, got {}", self.s_max)));
        }
        Ok(())
    }
}

/// A random entangled state. Raw-mode samples carry `λ = NaN`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub index: usize,
    pub params: ExtremalParams,
    pub state: StandardForm,
    pub nu_tilde_sigma: f64,
}

/// States with `ν̃₋ ≥ 1 − ENTANGLED_TOL` count as separable for the sampler,
/// matching the separability cut of the minimiser.
const ENTANGLED_TOL: f64 = 1e-8;

fn accept(sf: &StandardForm) -> Option<f64> {
    if !sf.is_physical(DEFAULT_TOL) {
        return None;
    }
    let nu = SymplecticSpectrum::from_invariants(&sf.invariants()).ok()?.nu_tilde_minus;
    (nu < 1.0 - ENTANGLED_TOL).then_some(nu)
}

/// The `index`-th state of the stream defined by `cfg`. Each index owns the
/// ChaCha stream `index` of the seed, so samples can be drawn in any order.
pub fn sample_at(cfg: &SamplerConfig, index: usize) -> Result<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    for _ in 0..MAX_REJECTIONS {
        let drawn = match cfg.mode {
            SamplingMode::ExtremalParams => draw_params(&mut rng, cfg.s_max),
            SamplingMode::RawStandardForm => draw_raw(&mut rng, cfg.s_max),
        };
        if let Some((params, state)) = drawn {
            if let Some(nu) = accept(&state) {
                return Ok(Sample { index, params, state, nu_tilde_sigma: nu });
            }
        }
    }
    Err(Error::Numerical(format!("sample {index}: {MAX_REJECTIONS} consecutive rejections")))
}

fn draw_params(rng: &mut ChaCha8Rng, s_max: f64) -> Option<(ExtremalParams, StandardForm)> {
    let s = rng.random_range(1.0..s_max);
    let d = if s > 1.0 { rng.random_range(-(s - 1.0)..(s - 1.0)) } else { 0.0 };
    let lambda = rng.random_range(-1.0..=1.0);
    let (g_lo, g_hi) = (2.0 * d.abs() + 1.0, 2.0 * s - 1.0);
    if !(g_hi > g_lo) {
        return None;
    }
    let g = rng.random_range(g_lo..g_hi);
    let params = ExtremalParams::new(s, d, g, lambda).ok()?;
    Some((params, build_state(&params).ok()?))
}

fn draw_raw(rng: &mut ChaCha8Rng, s_max: f64) -> Option<(ExtremalParams, StandardForm)> {
    let a = rng.random_range(1.0..s_max);
    let b = rng.random_range(1.0..s_max);
    let c_max = (a * b).sqrt();
    let c_plus = rng.random_range(0.0..c_max);
    let c_minus = rng.random_range(-c_max..0.0);
    let sf = StandardForm::normalized(a, b, c_plus, c_minus).ok()?;
    let g = sf.invariants().det_sigma.sqrt();
    let params = ExtremalParams { s: 0.5 * (a + b), d: 0.5 * (a - b), g, lambda: f64::NAN };
    Some((params, sf))
}

/// The first `cfg.count` samples, in index order.
pub fn sample_random_cm(cfg: &SamplerConfig) -> Result<Vec<Sample>> {
    cfg.validate()?;
    (0..cfg.count).into_par_iter().map(|i| sample_at(cfg, i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub nu_tilde_sigma: f64,
    pub nu_tilde_opt: f64,
    pub log_negativity: f64,
    pub gaussian_eof: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRecord {
    pub index: usize,
    pub params: ExtremalParams,
    pub point: BoundPoint,
    pub m_opt: f64,
    /// `ν̃_opt > ν̃₋(σ)` beyond the slack.
    pub violates_42: bool,
    /// `ν̃_opt` below the lower curve beyond the slack.
    pub violates_46: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleFailure {
    pub index: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundExperiment {
    pub config: SamplerConfig,
    pub records: Vec<BoundRecord>,
    pub failures: Vec<SampleFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: SamplerConfig,
    pub samples: usize,
    pub violations_42: usize,
    pub violations_46: usize,
    pub failures: Vec<SampleFailure>,
    /// Minimum over samples of `1/ν̃₋(σ)² − m_opt`.
    pub min_m_max_slack: f64,
    /// Minimum over samples of `ν̃₋(σ) − ν̃_opt`.
    pub min_upper_slack: f64,
    /// Minimum over samples of `ν̃_opt − (1 − √(1 − ν̃₋²))/ν̃₋`.
    pub min_lower_slack: f64,
}

fn evaluate(sample: &Sample, gem: &GemOptions) -> Result<BoundRecord> {
    let nu = sample.nu_tilde_sigma;
    let opt = minimize_m_with(&sample.state, gem)?;
    let point = BoundPoint {
        nu_tilde_sigma: nu,
        nu_tilde_opt: opt.nu_tilde_opt,
        log_negativity: log_negativity(nu, LogBase::Two)?,
        gaussian_eof: opt.gaussian_eof,
    };
    Ok(BoundRecord {
        index: sample.index,
        params: sample.params,
        point,
        m_opt: opt.m_opt,
        violates_42: opt.nu_tilde_opt > nu_opt_upper(nu)? + VIOLATION_SLACK,
        violates_46: opt.nu_tilde_opt < nu_opt_lower(nu)? - VIOLATION_SLACK,
    })
}

/// Draws `cfg.count` states and records where their optimal `ν̃` falls
/// relative to the two bound curves. Per-sample failures are collected, not
/// propagated; the Gaussian EoF is always in bits.
pub fn bound_experiment(cfg: &SamplerConfig, gem: &GemOptions) -> Result<BoundExperiment> {
    cfg.validate()?;
    let gem = GemOptions { log_base: LogBase::Two, ..*gem };
    let outcomes: Vec<std::result::Result<BoundRecord, SampleFailure>> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            sample_at(cfg, i)
                .and_then(|s| evaluate(&s, &gem))
                .map_err(|e| SampleFailure { index: i, message: e.to_string() })
        })
        .collect();
    let mut records = Vec::with_capacity(cfg.count);
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }
    Ok(BoundExperiment { config: *cfg, records, failures })
}

impl BoundExperiment {
    pub fn summary(&self) -> ExperimentSummary {
        let min = |f: &dyn Fn(&BoundRecord) -> f64| self.records.iter().map(f).fold(f64::INFINITY, f64::min);
        ExperimentSummary {
            config: self.config,
            samples: self.records.len(),
            violations_42: self.records.iter().filter(|r| r.violates_42).count(),
            violations_46: self.records.iter().filter(|r| r.violates_46).count(),
            failures: self.failures.clone(),
            min_m_max_slack: min(&|r| 1.0 / (r.point.nu_tilde_sigma * r.point.nu_tilde_sigma) - r.m_opt),
            min_upper_slack: min(&|r| r.point.nu_tilde_sigma - r.point.nu_tilde_opt),
            min_lower_slack: min(&|r| {
                r.point.nu_tilde_opt - r.point.nu_tilde_sigma / (1.0 + (1.0 - r.point.nu_tilde_sigma.powi(2)).sqrt())
            }),
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Numerical(format!("writing CSV: {e}"))
}

fn io_error(e: std::io::Error) -> Error {
    Error::Numerical(format!("writing CSV: {e}"))
}

pub fn write_experiment_csv<W: Write>(out: W, records: &[BoundRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "index",
        "s",
        "d",
        "g",
        "lambda",
        "nu_tilde_sigma",
        "nu_tilde_opt",
        "log_neg",
        "geof",
        "violates_42",
        "violates_46",
    ])
    .map_err(csv_error)?;
    for r in records {
        let p = &r.params;
        let nums = [
            p.s,
            p.d,
            p.g,
            p.lambda,
            r.point.nu_tilde_sigma,
            r.point.nu_tilde_opt,
            r.point.log_negativity,
            r.point.gaussian_eof,
        ]
        .map(sig17);
        let mut row = vec![r.index.to_string()];
        row.extend(nums);
        row.push(r.violates_42.to_string());
        row.push(r.violates_46.to_string());
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(io_error)
}

/// The two `ν̃_opt` bound curves at `resolution` points of `ν̃ ∈ (0, 1]`.
pub fn write_nu_curve_csv<W: Write>(out: W, resolution: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["nu_tilde", "lower", "upper"]).map_err(csv_error)?;
    let n = resolution.max(1);
    for k in 1..=n {
        let nu = k as f64 / n as f64;
        w.write_record([nu, nu_opt_lower(nu)?, nu_opt_upper(nu)?].map(sig17)).map_err(csv_error)?;
    }
    w.flush().map_err(io_error)
}

/// The two Gaussian-EoF bound curves at `resolution` points of
/// `E_N ∈ (0, log_neg_max]`.
pub fn write_geof_curve_csv<W: Write>(out: W, log_neg_max: f64, resolution: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["log_neg", "lower", "upper"]).map_err(csv_error)?;
    let n = resolution.max(1);
    for k in 1..=n {
        let e = log_neg_max * k as f64 / n as f64;
        let (lo, hi) = geof_bounds(e)?;
        w.write_record([e, lo, hi].map(sig17)).map_err(csv_error)?;
    }
    w.flush().map_err(io_error)
}

/// Lower `m` curve `((ν̃ + 1/ν̃)/2)²` matching [`nu_opt_upper`].
pub fn m_lower(nu_tilde_sigma: f64) -> Result<f64> {
    check_open_unit(nu_tilde_sigma)?;
    Ok(m_from_nu_tilde(nu_tilde_sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nu_bounds_examples() {
        assert_eq!(nu_opt_upper(1.0).unwrap(), 1.0);
        assert_eq!(nu_opt_lower(1.0).unwrap(), 1.0);
        assert_relative_eq!(nu_opt_lower(0.8306).unwrap(), 0.533506501357044019, max_relative = 1e-14);
        assert_relative_eq!(nu_opt_lower(0.5).unwrap(), 0.267949192431122706, max_relative = 1e-14);
        assert!(nu_opt_lower(0.0).is_err());
        assert!(nu_opt_upper(1.5).is_err());
    }

    #[test]
    fn lower_nu_curve_is_increasing_and_below_upper() {
        let mut prev = 0.0;
        for k in 1..=1000 {
            let nu = k as f64 / 1000.0;
            let lo = nu_opt_lower(nu).unwrap();
            assert!(lo > prev && lo <= nu);
            prev = lo;
        }
    }

    #[test]
    fn geof_bounds_examples() {
        let (lo, hi) = geof_bounds(1.0).unwrap();
        assert_relative_eq!(lo, 0.566165626622601408, max_relative = 1e-13);
        assert_relative_eq!(hi, 1.377443751081734272, max_relative = 1e-13);
        let (lo, hi) = geof_bounds(1e-9).unwrap();
        assert!(lo < 1e-6 && hi < 1e-6 && lo <= hi);
        assert!(geof_bounds(0.0).is_err());
        assert!(geof_bounds(-1.0).is_err());
    }

    #[test]
    fn samples_are_entangled_and_reproducible() {
        for mode in [SamplingMode::ExtremalParams, SamplingMode::RawStandardForm] {
            let cfg = SamplerConfig { seed: 7, count: 200, s_max: 20.0, mode };
            let a = sample_random_cm(&cfg).unwrap();
            let b = sample_random_cm(&cfg).unwrap();
            let states = |v: &[Sample]| v.iter().map(|s| (s.index, s.state)).collect::<Vec<_>>();
            assert_eq!(states(&a), states(&b));
            for s in &a {
                assert!(s.state.is_physical(DEFAULT_TOL));
                assert!(s.nu_tilde_sigma < 1.0);
            }
            assert_eq!(sample_at(&cfg, 123).unwrap().state, a[123].state);
        }
    }

    #[test]
    fn small_experiment_has_no_violations() {
        let cfg = SamplerConfig { seed: 1, count: 300, ..Default::default() };
        let exp = bound_experiment(&cfg, &GemOptions::default()).unwrap();
        let sum = exp.summary();
        assert_eq!(sum.samples + sum.failures.len(), 300);
        assert!(sum.failures.is_empty(), "{:?}", sum.failures);
        assert_eq!((sum.violations_42, sum.violations_46), (0, 0));
        assert!(sum.min_m_max_slack >= -1e-9);
    }

    #[test]
    fn curve_csvs() {
        let mut buf = Vec::new();
        write_nu_curve_csv(&mut buf, 4).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("nu_tilde,lower,upper\n"));
        let mut buf = Vec::new();
        write_geof_curve_csv(&mut buf, 3.0, 3).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("log_neg,lower,upper\n"));
    }
}
