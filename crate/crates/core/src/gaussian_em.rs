//! Gaussian convex-roof entanglement measures of two-mode states.
//!
//! For a standard form `σ = γ_q ⊕ γ_p` the optimal pure state `Γ ⊕ Γ⁻¹` has
//! `Γ` on the ellipse where the backward light cone of `γ_q` meets the forward
//! light cone of `γ_p⁻¹`, with 2×2 symmetric matrices read as Minkowski vectors
//!
//! ```text
//!     Γ = ( x0 + x3   x1      )      det Γ = x0² − x1² − x3²
//!         ( x1        x0 − x3 )
//! ```
//!
//! Every Gaussian measure is a monotone function of the single-mode
//! determinant `m = 1 + x1²/det Γ` of that pure state, so the whole problem is
//! the one-dimensional minimisation of `m_θ` over the polar angle of the
//! ellipse. Two independent evaluations of `m_θ` are provided: the closed
//! algebraic form [`m_theta`] and the geometric rim point [`gamma_from_theta`].

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::negativity::{h_function, LogBase};
use crate::optimize::minimize_periodic;
use crate::symplectic::{StandardForm, SymplecticSpectrum};

/// Slack below zero (relative to the state's scale) still treated as roundoff.
const BRANCH_CUT_TOL: f64 = 1e-12;
/// Positive slack this small (relative) is roundoff on a minimum-uncertainty state.
const SLACK_ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// Minkowski coordinates of a 2×2 symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaCoordinates {
    pub x0: f64,
    pub x1: f64,
    pub x3: f64,
}

impl GammaCoordinates {
    pub fn from_block(m: &[[f64; 2]; 2]) -> Self {
        Self {
            x0: 0.5 * (m[0][0] + m[1][1]),
            x1: 0.5 * (m[0][1] + m[1][0]),
            x3: 0.5 * (m[0][0] - m[1][1]),
        }
    }

    pub fn to_block(&self) -> [[f64; 2]; 2] {
        [[self.x0 + self.x3, self.x1], [self.x1, self.x0 - self.x3]]
    }

    pub fn det(&self) -> f64 {
        self.x0 * self.x0 - self.x1 * self.x1 - self.x3 * self.x3
    }

    /// Single-mode determinant of the pure state `Γ ⊕ Γ⁻¹`.
    pub fn single_mode_det(&self) -> f64 {
        1.0 + self.x1 * self.x1 / self.det()
    }

    fn add_scaled(self, other: Self, k: f64) -> Self {
        Self { x0: self.x0 + k * other.x0, x1: self.x1 + k * other.x1, x3: self.x3 + k * other.x3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GemOptions {
    /// Seed points over one period of `θ`.
    pub grid: usize,
    /// Golden-section stopping width in `θ`.
    pub theta_tol: f64,
    /// States with `ν̃₋ ≥ 1 − separable_tol` are reported with `m_opt = 1`.
    pub separable_tol: f64,
    pub log_base: LogBase,
    /// Report `ν̃_opt = ν̃₋(σ)` exactly for symmetric states instead of the
    /// numerical minimum.
    pub symmetric_closed_form: bool,
}

impl Default for GemOptions {
    fn default() -> Self {
        Self { grid: 720, theta_tol: 1e-12, separable_tol: 1e-8, log_base: LogBase::Two, symmetric_closed_form: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GemResult {
    pub m_opt: f64,
    pub theta_opt: f64,
    pub nu_tilde_opt: f64,
    pub gaussian_eof: f64,
    /// Local minima of `m_θ` found over one period.
    pub extrema_found: usize,
}

/// `ν̃₋` of a pure state with single-mode determinant `m`, `√m − √(m − 1)`.
pub fn nu_tilde_from_m(m: f64) -> f64 {
    1.0 / (m.sqrt() + (m - 1.0).max(0.0).sqrt())
}

/// Inverse of [`nu_tilde_from_m`]: `((ν + 1/ν)/2)²`.
pub fn m_from_nu_tilde(nu: f64) -> f64 {
    let c = 0.5 * (nu + 1.0 / nu);
    c * c
}

/// Quantities of a standard form shared by both evaluations of `m_θ`.
struct RimData {
    a: f64,
    b: f64,
    c_plus: f64,
    c_minus: f64,
    /// `Det γ_p = ab − c₋²`
    p: f64,
    /// `(a − b p)(b − a p)`
    r: f64,
    /// `1 + Det σ − Δ`, clamped at zero
    slack: f64,
    pure: bool,
}

impl RimData {
    fn new(sf: &StandardForm) -> Result<Self> {
        let StandardForm { a, b, c_plus, c_minus } = *sf;
        if !(c_plus > 0.0 && c_minus < 0.0) {
            return Err(Error::domain(format!(
                "m_θ needs an entangled standard form with c₊ > 0 > c₋ (c₊ = {c_plus}, c₋ = {c_minus})"
            )));
        }
        let sp = SymplecticSpectrum::from_invariants(&sf.invariants())?;
        if sp.nu_tilde_minus >= 1.0 {
            return Err(Error::domain(format!(
                "m_θ needs an entangled state, ν̃₋ = {} ≥ 1",
                sp.nu_tilde_minus
            )));
        }
        let p = a * b - c_minus * c_minus;
        let scale = (a * b) * (a * b) + a * a + b * b;
        let mut slack = sf.uncertainty_slack();
        if slack < 0.0 {
            if slack < -BRANCH_CUT_TOL * scale {
                return Err(Error::domain(format!("Δ ≤ 1 + Det σ violated (slack {slack:e})")));
            }
            slack = 0.0;
        } else if slack <= SLACK_ROUNDOFF * scale {
            slack = 0.0;
        }
        let r = (a - b * p) * (b - a * p);
        let r_scale = (a * b).powi(3);
        if r < -BRANCH_CUT_TOL * r_scale {
            return Err(Error::domain(format!("(a − b·Detγ_p)(b − a·Detγ_p) < 0 ({r:e})")));
        }
        let pure = r <= 1e-20 * r_scale;
        Ok(Self { a, b, c_plus, c_minus, p, r: r.max(0.0), slack, pure })
    }

    /// The point the ellipse collapses to when `γ_q = γ_p⁻¹`.
    fn centre(&self) -> GammaCoordinates {
        let (a, b, p) = (self.a, self.b, self.p);
        GammaCoordinates {
            x0: 0.25 * (a + b) * (1.0 + 1.0 / p),
            x1: 0.5 * (self.c_plus - self.c_minus / p),
            x3: 0.25 * (a - b) * (1.0 - 1.0 / p),
        }
    }
}

/// Single-mode determinant of the candidate pure state at polar angle `θ`,
/// closed algebraic form:
///
/// ```text
/// m_θ = 1 + [c₊p − c₋ + cosθ √R]²
///         / (2p { a² + b² + 2c₊c₋ − cosθ · T/√R + sinθ (a² − b²) √(p·s/R) })
/// ```
///
/// with `p = ab − c₋²`, `R = (a − bp)(b − ap)`, `s = 1 + Det σ − Δ` and
/// `T = 2ab c₋³ + (a² + b²) c₊ c₋² + ((1 − 2b²) a² + b²) c₋ − ab (a² + b² − 2) c₊`.
pub fn m_theta(sf: &StandardForm, theta: f64) -> Result<f64> {
    let d = RimData::new(sf)?;
    m_theta_with(&d, theta)
}

fn m_theta_with(d: &RimData, theta: f64) -> Result<f64> {
    if d.pure {
        return Ok(d.centre().single_mode_det());
    }
    let RimData { a, b, c_plus: cp, c_minus: cm, p, r, slack, .. } = *d;
    let (sin, cos) = theta.sin_cos();
    let sqrt_r = r.sqrt();
    let num = cp * p - cm + cos * sqrt_r;
    let t = 2.0 * a * b * cm.powi(3) + (a * a + b * b) * cp * cm * cm + ((1.0 - 2.0 * b * b) * a * a + b * b) * cm
        - a * b * (a * a + b * b - 2.0) * cp;
    let inner = p * slack / r;
    let den = 2.0
        * p
        * ((a * a + b * b + 2.0 * cp * cm) - cos * t / sqrt_r + sin * (a * a - b * b) * inner.sqrt());
    if !(den > 0.0) {
        return Err(Error::domain(format!("non-positive determinant on the rim at θ = {theta}")));
    }
    Ok(1.0 + num * num / den)
}

/// Point `Γ(θ)` of the rim `det(γ_q − Γ) = det(Γ − γ_p⁻¹) = 0`.
///
/// With `P = γ_p⁻¹` and `D = γ_q − P` (a future-directed timelike or null
/// vector), the rim is `P + D/2 + (cosθ/2) w + (τ/2) sinθ f`, where `τ² = ⟨D, D⟩`,
/// `f ∝ (D3, 0, D0)` is the unit vector orthogonal to `D` with no `x1`
/// component and `w = (D0 D1, D0² − D3², D1 D3)/√(D0² − D3²)` completes the
/// frame. `θ = 0` is the rim point of largest `x1`. The construction stays
/// finite when the ellipse flattens to a segment (`τ → 0`).
pub fn gamma_from_theta(sf: &StandardForm, theta: f64) -> Result<GammaCoordinates> {
    let d = RimData::new(sf)?;
    Ok(rim_point(&d, theta))
}

fn rim_point(d: &RimData, theta: f64) -> GammaCoordinates {
    let (a, b, p) = (d.a, d.b, d.p);
    let q = GammaCoordinates::from_block(&[[a, d.c_plus], [d.c_plus, b]]);
    let pinv = GammaCoordinates::from_block(&[[b / p, -d.c_minus / p], [-d.c_minus / p, a / p]]);
    let dv = GammaCoordinates { x0: q.x0 - pinv.x0, x1: q.x1 - pinv.x1, x3: q.x3 - pinv.x3 };
    let centre = pinv.add_scaled(dv, 0.5);
    let n2 = dv.x0 * dv.x0 - dv.x3 * dv.x3;
    if d.pure || !(n2 > 0.0) {
        return centre;
    }
    let n = n2.sqrt();
    // ⟨D, D⟩ = det(γ_q − γ_p⁻¹) = (1 + Det σ − Δ)/Det γ_p
    let tau = (d.slack / p).sqrt();
    let w = GammaCoordinates { x0: dv.x0 * dv.x1 / n, x1: n, x3: dv.x1 * dv.x3 / n };
    let f = GammaCoordinates { x0: dv.x3 / n, x1: 0.0, x3: dv.x0 / n };
    let (sin, cos) = theta.sin_cos();
    centre.add_scaled(w, 0.5 * cos).add_scaled(f, 0.5 * tau * sin)
}

/// `m_θ` evaluated through the rim geometry, `1 + x1²/det Γ(θ)`.
pub fn m_theta_geometric(sf: &StandardForm, theta: f64) -> Result<f64> {
    Ok(gamma_from_theta(sf, theta)?.single_mode_det())
}

pub fn minimize_m(sf: &StandardForm) -> Result<GemResult> {
    minimize_m_with(sf, &GemOptions::default())
}

/// Global minimum of `m_θ` over one period, mapped to `ν̃₋` of the optimal
/// pure state and to the Gaussian entanglement of formation.
///
/// Separable (and numerically separable) states short-circuit to `m = 1`.
/// Symmetric states take `ν̃_opt = ν̃₋(σ)` exactly; the angle of the optimum is
/// still located on the rim.
pub fn minimize_m_with(sf: &StandardForm, opts: &GemOptions) -> Result<GemResult> {
    let sp = SymplecticSpectrum::from_invariants(&sf.invariants())?;
    if sp.nu_tilde_minus >= 1.0 - opts.separable_tol {
        return Ok(GemResult { m_opt: 1.0, theta_opt: 0.0, nu_tilde_opt: 1.0, gaussian_eof: 0.0, extrema_found: 1 });
    }
    let data = RimData::new(sf)?;
    let (theta_opt, m_num, extrema_found) = if data.pure {
        (0.0, data.centre().single_mode_det(), 1)
    } else {
        let found = minimize_periodic(|t| m_theta_with(&data, t), TAU, opts.grid, opts.theta_tol)?;
        (found.x, found.f, found.local_minima)
    };

    let (m_opt, nu_tilde_opt) = if opts.symmetric_closed_form && sf.is_symmetric() {
        (m_from_nu_tilde(sp.nu_tilde_minus), sp.nu_tilde_minus)
    } else {
        if m_num < 1.0 {
            return Err(Error::Numerical(format!(
                "minimum of m_θ below one ({m_num}) at θ = {theta_opt}"
            )));
        }
        (m_num, nu_tilde_from_m(m_num))
    };
    let gaussian_eof = if nu_tilde_opt >= 1.0 { 0.0 } else { h_function(nu_tilde_opt, opts.log_base)? };
    Ok(GemResult { m_opt, theta_opt, nu_tilde_opt, gaussian_eof, extrema_found })
}

/// Gaussian entanglement of formation, `h(ν̃_opt)`, in bits.
pub fn gaussian_eof(sf: &StandardForm) -> Result<f64> {
    Ok(minimize_m(sf)?.gaussian_eof)
}
