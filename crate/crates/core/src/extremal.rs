//! States of extremal negativity at fixed global and local purities.
//!
//! Every entangled two-mode standard form can be written in terms of
//!
//! * `s = (a + b)/2 ≥ 1`, the average local mixedness,
//! * `d = (a − b)/2` with `|d| ≤ s − 1`,
//! * `g = 1/μ ≥ 2|d| + 1`, the global mixedness,
//! * `λ ∈ [−1, 1]`, which sweeps the states of fixed purities from minimal
//!   (`λ = −1`, GLEMS) to maximal (`λ = +1`, GMEMS) negativity.
//!
//! At `g = 2|d| + 1` both families coalesce into the states of maximal
//! negativity at fixed marginals (GMEMMS). The module also holds the closed
//! forms of the optimal single-mode determinant for these families and the
//! comparison of which family is more entangled under Gaussian measures.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian_em::m_from_nu_tilde;
use crate::report::sig17;
use crate::symplectic::{StandardForm, SymplecticSpectrum};

/// Relative slop allowed on the parameter inequalities and the square-root
/// arguments of the construction.
const PARAM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalParams {
    pub s: f64,
    pub d: f64,
    pub g: f64,
    pub lambda: f64,
}

impl ExtremalParams {
    pub fn new(s: f64, d: f64, g: f64, lambda: f64) -> Result<Self> {
        let p = Self { s, d, g, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn gmems(s: f64, d: f64, g: f64) -> Result<Self> {
        Self::new(s, d, g, 1.0)
    }

    pub fn glems(s: f64, d: f64, g: f64) -> Result<Self> {
        Self::new(s, d, g, -1.0)
    }

    /// Parameters of the state with global purity `mu` and local purities
    /// `mu1`, `mu2`.
    pub fn from_purities(mu: f64, mu1: f64, mu2: f64, lambda: f64) -> Result<Self> {
        if !(mu > 0.0 && mu1 > 0.0 && mu2 > 0.0) {
            return Err(Error::domain(format!("purities must be positive (μ = {mu}, μ₁ = {mu1}, μ₂ = {mu2})")));
        }
        let (a, b) = (1.0 / mu1, 1.0 / mu2);
        Self::new(0.5 * (a + b), 0.5 * (a - b), 1.0 / mu, lambda)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { s, d, g, lambda } = *self;
        if ![s, d, g, lambda].iter().all(|x| x.is_finite()) {
            return Err(Error::domain(format!("non-finite parameter in (s, d, g, λ) = ({s}, {d}, {g}, {lambda})")));
        }
        let tol = PARAM_TOL * s.max(1.0);
        if s < 1.0 - tol {
            return Err(Error::domain(format!("s ≥ 1 violated (s = {s})")));
        }
        if d.abs() > s - 1.0 + tol {
            return Err(Error::domain(format!("|d| ≤ s − 1 violated (s = {s}, d = {d})")));
        }
        if g < 2.0 * d.abs() + 1.0 - tol {
            return Err(Error::domain(format!("g ≥ 2|d| + 1 violated (d = {d}, g = {g})")));
        }
        // Detσ ≤ Detα·Detβ for every physical CM
        if g > s * s - d * d + tol * s * s {
            return Err(Error::domain(format!("g ≤ s² − d² violated (s = {s}, d = {d}, g = {g})")));
        }
        if !(-1.0..=1.0).contains(&lambda) {
            return Err(Error::domain(format!("λ ∈ [−1, 1] violated (λ = {lambda})")));
        }
        Ok(())
    }

    /// `(μ, μ₁, μ₂) = (1/g, 1/(s + d), 1/(s − d))`.
    pub fn purities(&self) -> (f64, f64, f64) {
        (1.0 / self.g, 1.0 / (self.s + self.d), 1.0 / (self.s - self.d))
    }

    /// Whether the state sits on the coalescence surface `g = 2|d| + 1`.
    pub fn is_gmemms(&self) -> bool {
        (self.g - 2.0 * self.d.abs() - 1.0).abs() <= PARAM_TOL * self.g
    }
}

/// Standard form of the state with parameters `p`:
///
/// ```text
/// a = s + d,  b = s − d,  c± = (√t₁ ± √t₂) / (4√(s² − d²))
/// tₖ = [4kₖ² + (g² + 1)(λ − 1)/2 − (2d² + g)(λ + 1)]² − 4g²,  k₁ = d, k₂ = s
/// ```
pub fn build_state(p: &ExtremalParams) -> Result<StandardForm> {
    p.validate()?;
    let ExtremalParams { s, d, g, lambda } = *p;
    let shift = 0.5 * (g * g + 1.0) * (lambda - 1.0) - (2.0 * d * d + g) * (lambda + 1.0);
    let radicand = |k: f64| {
        let base = 4.0 * k * k + shift;
        let t = base * base - 4.0 * g * g;
        let scale = base * base + 4.0 * g * g;
        if t < -PARAM_TOL * scale {
            Err(Error::domain(format!("negative radicand {t:e} in the (s, d, g, λ) construction")))
        } else {
            Ok(t.max(0.0))
        }
    };
    let (t1, t2) = (radicand(d)?, radicand(s)?);
    let norm = 4.0 * ((s - d) * (s + d)).sqrt();
    let (r1, r2) = (t1.sqrt(), t2.sqrt());
    StandardForm::new(s + d, s - d, (r1 + r2) / norm, (r1 - r2) / norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entanglement {
    Entangled,
    Separable,
}

/// GMEMS are entangled iff `g < 2s − 1`.
pub fn gmems_separability_threshold(s: f64) -> f64 {
    2.0 * s - 1.0
}

/// GLEMS are entangled iff `g < √(2(s² + d²) − 1)`.
pub fn glems_separability_threshold(s: f64, d: f64) -> f64 {
    (2.0 * (s * s + d * d) - 1.0).sqrt()
}

pub fn classify_entanglement(p: &ExtremalParams) -> Result<Entanglement> {
    p.validate()?;
    // the GMEMS bound the whole λ family from above
    let entangled = if p.lambda == 1.0 || p.g >= gmems_separability_threshold(p.s) {
        p.g < gmems_separability_threshold(p.s)
    } else if p.lambda == -1.0 {
        p.g < glems_separability_threshold(p.s, p.d)
    } else {
        let sf = build_state(p)?;
        SymplecticSpectrum::from_invariants(&sf.invariants())?.nu_tilde_minus < 1.0
    };
    Ok(if entangled { Entanglement::Entangled } else { Entanglement::Separable })
}

/// Optimal single-mode determinant of the GMEMS with parameters `(s, d, g)`:
///
/// ```text
/// m = {(g + 1)s − √([(g − 1)² − 4d²](s² − d² − g))}² / [4(d² + g)²]   for g < 2s − 1
/// ```
///
/// and `m = 1` otherwise.
pub fn m_opt_gmems(s: f64, d: f64, g: f64) -> Result<f64> {
    ExtremalParams::gmems(s, d, g)?;
    if g >= gmems_separability_threshold(s) {
        return Ok(1.0);
    }
    let u = (g - 1.0) * (g - 1.0) - 4.0 * d * d;
    let v = s * s - d * d - g;
    let arg = u * v;
    if arg < -PARAM_TOL * (g * g + 4.0 * d * d) * (s * s + g) {
        return Err(Error::domain(format!("negative radicand {arg:e} in the GMEMS closed form")));
    }
    let num = (g + 1.0) * s - arg.max(0.0).sqrt();
    let den = 2.0 * (d * d + g);
    Ok((num / den).powi(2).max(1.0))
}

/// Which closed form produced a GLEMS optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlemsBranch {
    /// `g ≥ √(2(s² + d²) − 1)`, `m = 1`.
    Separable,
    /// Interior optimum, `m = 16 s² d² / (g² − 1)²`.
    Interior,
    /// Optimum on the end of the degenerate rim, the `δ` form.
    Endpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlemsOptimum {
    pub m: f64,
    pub branch: GlemsBranch,
}

/// Value of `g` below which the interior optimum of a GLEMS exists:
///
/// `g_*² = [(4s² + 1)d² + s² + 4s|d|√((s² + 1)d² + s²)] / (d² + s²)`.
pub fn glems_branch_threshold(s: f64, d: f64) -> f64 {
    let d = d.abs();
    let (s2, d2) = (s * s, d * d);
    (((4.0 * s2 + 1.0) * d2 + s2 + 4.0 * s * d * ((s2 + 1.0) * d2 + s2).sqrt()) / (d2 + s2)).sqrt()
}

fn glems_interior(s: f64, d: f64, g: f64) -> f64 {
    let q = g * g - 1.0;
    16.0 * s * s * d * d / (q * q)
}

fn glems_endpoint(s: f64, d: f64, g: f64) -> Result<f64> {
    let d = d.abs();
    let delta = (2.0 * d - g - 1.0)
        * (2.0 * d - g + 1.0)
        * (2.0 * d + g - 1.0)
        * (2.0 * d + g + 1.0)
        * (g - 2.0 * s - 1.0)
        * (g - 2.0 * s + 1.0)
        * (g + 2.0 * s - 1.0)
        * (g + 2.0 * s + 1.0);
    let scale = ((g + 2.0 * d + 1.0) * (g + 2.0 * s + 1.0)).powi(4);
    if delta < -PARAM_TOL * scale {
        return Err(Error::domain(format!("negative δ = {delta:e} in the GLEMS closed form")));
    }
    let g2 = g * g;
    let num = -g2 * g2 + 2.0 * (2.0 * d * d + 2.0 * s * s + 1.0) * g2
        - (4.0 * d * d - 1.0) * (4.0 * s * s - 1.0)
        - delta.max(0.0).sqrt();
    Ok(num / (8.0 * g2))
}

/// Optimal single-mode determinant of the GLEMS with parameters `(s, d, g)`.
///
/// The interior form applies for `2|d| + 1 ≤ g < g_*` and the `δ` form for
/// `g_* ≤ g < √(2(s² + d²) − 1)` (see [`glems_branch_threshold`]). Both
/// candidates are also checked against `((ν̃ + 1/ν̃)/2)² ≤ m ≤ 1/ν̃²` for the
/// state's own `ν̃₋`; if the preferred one fails, the other is taken.
pub fn m_opt_glems_detailed(s: f64, d: f64, g: f64) -> Result<GlemsOptimum> {
    let params = ExtremalParams::glems(s, d, g)?;
    if g >= glems_separability_threshold(s, d) {
        return Ok(GlemsOptimum { m: 1.0, branch: GlemsBranch::Separable });
    }
    let sf = build_state(&params)?;
    let nu = SymplecticSpectrum::from_invariants(&sf.invariants())?.nu_tilde_minus;
    let (lo, hi) = (m_from_nu_tilde(nu), 1.0 / (nu * nu));
    let admissible = |m: f64| m >= 1.0 && m >= lo * (1.0 - 1e-9) && m <= hi * (1.0 + 1e-9);

    let interior = (GlemsBranch::Interior, Ok(glems_interior(s, d, g)));
    let endpoint = (GlemsBranch::Endpoint, glems_endpoint(s, d, g));
    let order = if g < glems_branch_threshold(s, d) { [interior, endpoint] } else { [endpoint, interior] };
    let mut last_err = None;
    for (branch, value) in order {
        match value {
            Ok(m) if admissible(m) => return Ok(GlemsOptimum { m, branch }),
            Ok(m) => last_err = Some(format!("{branch:?} form gives {m}, outside [{lo}, {hi}]")),
            Err(e) => last_err = Some(e.to_string()),
        }
    }
    Err(Error::Numerical(format!(
        "no admissible GLEMS closed form at (s, d, g) = ({s}, {d}, {g}): {}",
        last_err.unwrap_or_default()
    )))
}

pub fn m_opt_glems(s: f64, d: f64, g: f64) -> Result<f64> {
    Ok(m_opt_glems_detailed(s, d, g)?.m)
}

fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("ν̃₋ must lie in (0, 1), got {nu}")))
    }
}

/// Optimal `m` of the GMEMMS with average local mixedness `s` and
/// `ν̃₋ = nu`: `(2s / (1 − ν̃² + 2ν̃ s))²`.
pub fn m_opt_gmemms(s: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    let s_min = (1.0 + nu * nu) / (2.0 * nu);
    if s < s_min * (1.0 - PARAM_TOL) {
        return Err(Error::domain(format!("s ≥ (1 + ν̃²)/(2ν̃) = {s_min} violated (s = {s})")));
    }
    Ok((2.0 * s / (1.0 - nu * nu + 2.0 * nu * s)).powi(2))
}

/// Supremum of `m_opt` over all states with `ν̃₋ = nu`, `1/ν̃²`.
pub fn m_max(nu: f64) -> Result<f64> {
    check_nu(nu)?;
    Ok(1.0 / (nu * nu))
}

/// `ν̃₋` of the GMEMMS with parameters `(s, d)`, the root of
/// `ν̃² − 2sν̃ + 1 + 2|d| = 0` below one.
pub fn gmemms_nu_tilde(s: f64, d: f64) -> Result<f64> {
    let disc = s * s - 1.0 - 2.0 * d.abs();
    if disc < 0.0 {
        return Err(Error::domain(format!("s² ≥ 1 + 2|d| violated (s = {s}, d = {d})")));
    }
    // (1 + 2|d|)/(s + √disc) avoids the cancellation of s − √disc
    Ok((1.0 + 2.0 * d.abs()) / (s + disc.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    OrderingPreserved,
    OrderingInverted,
    /// GMEMS entangled, GLEMS separable.
    Coexistence,
    BothSeparable,
    Unphysical,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::OrderingPreserved => "ordering_preserved",
            Regime::OrderingInverted => "ordering_inverted",
            Regime::Coexistence => "coexistence",
            Regime::BothSeparable => "both_separable",
            Regime::Unphysical => "unphysical",
        }
    }
}

/// Gaussian-measure comparison of GMEMS and GLEMS at equal purities.
/// `nu_tilde_*` are the `ν̃₋` of the two states themselves (their
/// negativities). They are NaN for unphysical cells and for GLEMS with
/// `g > 2s − 1`, where the parametrization has no real member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderingVerdict {
    pub s: f64,
    pub d: f64,
    pub g: f64,
    pub m_gmems: f64,
    pub m_glems: f64,
    pub nu_tilde_gmems: f64,
    pub nu_tilde_glems: f64,
    pub regime: Regime,
}

impl OrderingVerdict {
    fn unphysical(s: f64, d: f64, g: f64) -> Self {
        let nan = f64::NAN;
        Self { s, d, g, m_gmems: nan, m_glems: nan, nu_tilde_gmems: nan, nu_tilde_glems: nan, regime: Regime::Unphysical }
    }
}

fn nu_tilde_of(p: &ExtremalParams) -> f64 {
    build_state(p)
        .and_then(|sf| SymplecticSpectrum::from_invariants(&sf.invariants()))
        .map_or(f64::NAN, |sp| sp.nu_tilde_minus)
}

/// Relative difference of the two `m` below which they count as equal (the
/// families coincide on `g = 2|d| + 1`).
pub const ORDERING_TIE_TOL: f64 = 1e-12;

pub fn ordering_compare(s: f64, d: f64, g: f64) -> Result<OrderingVerdict> {
    let gmems = ExtremalParams::gmems(s, d, g)?;
    let glems = ExtremalParams::glems(s, d, g)?;
    let m_gmems = m_opt_gmems(s, d, g)?;
    let m_glems = m_opt_glems(s, d, g)?;
    let regime = match (classify_entanglement(&gmems)?, classify_entanglement(&glems)?) {
        (Entanglement::Separable, Entanglement::Separable) => Regime::BothSeparable,
        (Entanglement::Entangled, Entanglement::Separable) => Regime::Coexistence,
        (Entanglement::Separable, Entanglement::Entangled) => {
            return Err(Error::Numerical(format!(
                "GLEMS entangled while GMEMS separable at (s, d, g) = ({s}, {d}, {g})"
            )))
        }
        (Entanglement::Entangled, Entanglement::Entangled) if m_glems - m_gmems <= ORDERING_TIE_TOL * m_glems => {
            Regime::OrderingPreserved
        }
        (Entanglement::Entangled, Entanglement::Entangled) => Regime::OrderingInverted,
    };
    Ok(OrderingVerdict {
        s,
        d,
        g,
        m_gmems,
        m_glems,
        nu_tilde_gmems: nu_tilde_of(&gmems),
        nu_tilde_glems: nu_tilde_of(&glems),
        regime,
    })
}

/// Like [`ordering_compare`], but cells violating the parameter constraints
/// are labelled [`Regime::Unphysical`] instead of failing.
pub fn classify_cell(s: f64, d: f64, g: f64) -> Result<OrderingVerdict> {
    if ExtremalParams::new(s, d, g, 1.0).is_err() {
        return Ok(OrderingVerdict::unphysical(s, d, g));
    }
    ordering_compare(s, d, g)
}

/// Bisection tolerance on `g` for the ordering boundary.
pub const BOUNDARY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub s: f64,
    pub d: f64,
    pub g_boundary: f64,
}

/// The `g` above which the ordering is restored at fixed `(s, d)`: the first
/// sign change of `m_GMEMS − m_GLEMS` from negative to non-negative above the
/// coalescence point `g = 2|d| + 1`, where both coincide. `None` when the
/// ordering is never inverted before the GLEMS become separable.
pub fn ordering_boundary(s: f64, d: f64, samples: usize) -> Result<Option<f64>> {
    let g0 = 2.0 * d.abs() + 1.0;
    let g1 = glems_separability_threshold(s, d).min(gmems_separability_threshold(s));
    if !(g1 > g0) {
        return Ok(None);
    }
    let diff = |g: f64| -> Result<f64> { Ok(m_opt_gmems(s, d, g)? - m_opt_glems(s, d, g)?) };
    let samples = samples.max(2);
    let h = (g1 - g0) / samples as f64;
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..samples {
        let g = g0 + k as f64 * h;
        let v = diff(g)?;
        if let Some((gp, vp)) = prev {
            if vp < 0.0 && v >= 0.0 {
                let (mut lo, mut hi) = (gp, g);
                while hi - lo > BOUNDARY_TOL {
                    let mid = 0.5 * (lo + hi);
                    if diff(mid)? < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(Some(0.5 * (lo + hi)));
            }
        }
        prev = Some((g, v));
    }
    Ok(None)
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![range.0];
    }
    let step = (range.1 - range.0) / (n - 1) as f64;
    (0..n).map(|i| range.0 + i as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    /// Row-major over the grid axes.
    pub cells: Vec<OrderingVerdict>,
    pub boundary: Vec<BoundaryPoint>,
}

impl Scan {
    pub fn count(&self, regime: Regime) -> usize {
        self.cells.iter().filter(|c| c.regime == regime).count()
    }
}

/// Samples of `m_GMEMS − m_GLEMS` per row when bracketing the boundary.
const BOUNDARY_SAMPLES: usize = 400;

/// Scan of the `(b, g)` plane at fixed `a` (rows over `b`, columns over `g`).
pub fn scan_slice(a: f64, b_range: (f64, f64), g_range: (f64, f64), resolution: usize) -> Result<Scan> {
    let bs = linspace(b_range, resolution);
    let gs = linspace(g_range, resolution);
    let cells = bs
        .par_iter()
        .flat_map_iter(|&b| gs.iter().map(move |&g| classify_cell(0.5 * (a + b), 0.5 * (a - b), g)))
        .collect::<Result<Vec<_>>>()?;
    let boundary = boundary_rows(bs.iter().map(|&b| (0.5 * (a + b), 0.5 * (a - b))).collect(), g_range)?;
    Ok(Scan { cells, boundary })
}

/// Scan of the `(s, d, g)` volume (row-major in `s`, `d`, `g`).
pub fn scan_volume(
    s_range: (f64, f64),
    d_range: (f64, f64),
    g_range: (f64, f64),
    resolution: usize,
) -> Result<Scan> {
    let ss = linspace(s_range, resolution);
    let ds = linspace(d_range, resolution);
    let gs = linspace(g_range, resolution);
    let sd: Vec<(f64, f64)> = ss.iter().flat_map(|&s| ds.iter().map(move |&d| (s, d))).collect();
    let cells = sd
        .par_iter()
        .flat_map_iter(|&(s, d)| gs.iter().map(move |&g| classify_cell(s, d, g)))
        .collect::<Result<Vec<_>>>()?;
    let boundary = boundary_rows(sd, g_range)?;
    Ok(Scan { cells, boundary })
}

fn boundary_rows(rows: Vec<(f64, f64)>, g_range: (f64, f64)) -> Result<Vec<BoundaryPoint>> {
    let found = rows
        .into_par_iter()
        .map(|(s, d)| {
            if ExtremalParams::new(s, d, 2.0 * d.abs() + 1.0, 1.0).is_err() {
                return Ok(None);
            }
            Ok(ordering_boundary(s, d, BOUNDARY_SAMPLES)?
                .filter(|g| (g_range.0..=g_range.1).contains(g))
                .map(|g_boundary| BoundaryPoint { s, d, g_boundary }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Numerical(format!("writing CSV: {e}"))
}

pub fn write_scan_csv<W: Write>(out: W, cells: &[OrderingVerdict]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["s", "d", "g", "m_gmems", "m_glems", "nu_tilde_gmems", "nu_tilde_glems", "regime"])
        .map_err(csv_error)?;
    for c in cells {
        let nums = [c.s, c.d, c.g, c.m_gmems, c.m_glems, c.nu_tilde_gmems, c.nu_tilde_glems].map(sig17);
        w.write_record(nums.iter().map(String::as_str).chain([c.regime.as_str()])).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Numerical(format!("writing CSV: {e}")))
}

pub fn write_boundary_csv<W: Write>(out: W, points: &[BoundaryPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["s", "d", "g_boundary"]).map_err(csv_error)?;
    for p in points {
        w.write_record([p.s, p.d, p.g_boundary].map(sig17)).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Numerical(format!("writing CSV: {e}")))
}
