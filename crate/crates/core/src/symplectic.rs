//! Two-mode covariance matrices, standard forms and symplectic invariants.
//!
//! A covariance matrix (CM) is stored row-major in the quadrature ordering
//! `(q₁, p₁, q₂, p₂)` and split into 2×2 blocks
//!
//! ```text
//!     σ = ( α   γ )
//!         ( γᵀ  β )
//! ```
//!
//! Every local-symplectic invariant used downstream (`Det α`, `Det β`,
//! `Det γ`, `Det σ`, `Δ`, `Δ̃`) is computed from these blocks. Spectra are
//! evaluated from the invariants; the eigenvalue route through `|iΩσ|` is kept
//! as [`spectrum_by_eigenvalues`] for cross-checking.

use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_TOL;

pub type Block = [[f64; 2]; 2];

/// Relative tolerance used to clamp tiny negative discriminants.
const DISCRIMINANT_RTOL: f64 = 1e-10;

/// Real symmetric 4×4 covariance matrix of a zero-mean two-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 4]; 4]", into = "[[f64; 4]; 4]")]
pub struct CovarianceMatrix {
    entries: [[f64; 4]; 4],
}

impl TryFrom<[[f64; 4]; 4]> for CovarianceMatrix {
    type Error = Error;

    fn try_from(rows: [[f64; 4]; 4]) -> Result<Self> {
        CovarianceMatrix::new(rows)
    }
}

impl From<CovarianceMatrix> for [[f64; 4]; 4] {
    fn from(cm: CovarianceMatrix) -> Self {
        cm.entries
    }
}

impl CovarianceMatrix {
    /// Builds a CM from rows. Entries must be finite and symmetric to within
    /// [`DEFAULT_TOL`] relative to the largest entry; the stored matrix is the
    /// symmetrised input.
    pub fn new(rows: [[f64; 4]; 4]) -> Result<Self> {
        let raw = Self { entries: rows };
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Malformed("covariance matrix has non-finite entries".into()));
        }
        let asym = raw.asymmetry();
        if asym > DEFAULT_TOL * raw.scale() {
            return Err(Error::Malformed(format!(
                "covariance matrix is not symmetric (max |σij − σji| = {asym:e})"
            )));
        }
        Ok(raw.symmetrized())
    }

    /// Builds a CM without the symmetry check. Only [`validate_physical`] and the
    /// accessors are meaningful on a non-symmetric value.
    pub fn from_rows_unchecked(rows: [[f64; 4]; 4]) -> Self {
        Self { entries: rows }
    }

    pub fn identity() -> Self {
        Self::diagonal([1.0; 4])
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut entries = [[0.0; 4]; 4];
        for (i, v) in d.into_iter().enumerate() {
            entries[i][i] = v;
        }
        Self { entries }
    }

    pub fn from_blocks(alpha: Block, beta: Block, gamma: Block) -> Self {
        let mut e = [[0.0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                e[i][j] = alpha[i][j];
                e[i + 2][j + 2] = beta[i][j];
                e[i][j + 2] = gamma[i][j];
                e[j + 2][i] = gamma[i][j];
            }
        }
        Self { entries: e }
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn alpha(&self) -> Block {
        self.block(0, 0)
    }

    pub fn beta(&self) -> Block {
        self.block(2, 2)
    }

    pub fn gamma(&self) -> Block {
        self.block(0, 2)
    }

    fn block(&self, r: usize, c: usize) -> Block {
        let e = &self.entries;
        [[e[r][c], e[r][c + 1]], [e[r + 1][c], e[r + 1][c + 1]]]
    }

    fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                worst = worst.max((self.entries[i][j] - self.entries[j][i]).abs());
            }
        }
        worst
    }

    fn scale(&self) -> f64 {
        self.entries.iter().flatten().fold(1.0_f64, |m, x| m.max(x.abs()))
    }

    fn symmetrized(&self) -> Self {
        let mut e = self.entries;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let avg = 0.5 * (e[i][j] + e[j][i]);
                e[i][j] = avg;
                e[j][i] = avg;
            }
        }
        Self { entries: e }
    }

    fn to_matrix(self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| self.entries[i][j])
    }

    fn from_matrix(m: &Matrix4<f64>) -> Self {
        let mut e = [[0.0; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = m[(i, j)];
            }
        }
        Self { entries: e }.symmetrized()
    }

    /// Mirror reflection of the second mode's momentum, `p₂ → −p₂`.
    pub fn partial_transpose(&self) -> Self {
        let mut e = self.entries;
        for i in 0..4 {
            if i != 3 {
                e[i][3] = -e[i][3];
                e[3][i] = -e[3][i];
            }
        }
        Self { entries: e }
    }

    /// Congruence `Sᵀ σ S` with the local transformation `S = S₁ ⊕ S₂`.
    pub fn apply_local(&self, s1: Block, s2: Block) -> Self {
        let mut s = Matrix4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                s[(i, j)] = s1[i][j];
                s[(i + 2, j + 2)] = s2[i][j];
            }
        }
        let sigma = self.to_matrix();
        Self::from_matrix(&(s.transpose() * sigma * s))
    }

    /// Local phase rotations by `theta1` on mode 1 and `theta2` on mode 2.
    pub fn rotate_locally(&self, theta1: f64, theta2: f64) -> Self {
        self.apply_local(rotation(theta1), rotation(theta2))
    }
}

/// Single-mode phase rotation (symplectic, determinant one).
pub fn rotation(theta: f64) -> Block {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

/// Single-mode squeezer `diag(e^{-r}, e^{r})`.
pub fn squeezer(r: f64) -> Block {
    [[(-r).exp(), 0.0], [0.0, r.exp()]]
}

fn det2(m: &Block) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Standard-form quadruple `(a, b, c₊, c₋)`.
///
/// Normalised to `c₊ ≥ |c₋|` (and hence `c₊ ≥ 0`); any pair of correlations can
/// be brought to this ordering by local rotations and a local sign flip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardForm {
    pub a: f64,
    pub b: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

impl StandardForm {
    /// Builds and validates a standard form. Correlations are reordered to the
    /// `c₊ ≥ |c₋|` convention; unphysical quadruples are rejected.
    pub fn new(a: f64, b: f64, c_plus: f64, c_minus: f64) -> Result<Self> {
        let sf = Self::normalized(a, b, c_plus, c_minus)?;
        sf.check_physical(DEFAULT_TOL)?;
        Ok(sf)
    }

    /// Same as [`StandardForm::new`] but without the physicality check.
    pub fn normalized(a: f64, b: f64, c_plus: f64, c_minus: f64) -> Result<Self> {
        if ![a, b, c_plus, c_minus].iter().all(|x| x.is_finite()) {
            return Err(Error::Malformed("standard form has non-finite entries".into()));
        }
        let hi = c_plus.abs().max(c_minus.abs());
        let lo = c_plus.abs().min(c_minus.abs());
        let sign = if c_plus * c_minus < 0.0 { -1.0 } else { 1.0 };
        Ok(Self { a, b, c_plus: hi, c_minus: sign * lo })
    }

    /// Pure symmetric state with local determinant `a²`.
    pub fn pure(a: f64) -> Result<Self> {
        if !(a >= 1.0) {
            return Err(Error::domain(format!("pure state requires a ≥ 1, got {a}")));
        }
        let c = (a * a - 1.0).sqrt();
        Self::new(a, a, c, -c)
    }

    pub fn to_cm(&self) -> CovarianceMatrix {
        CovarianceMatrix::from_blocks(
            [[self.a, 0.0], [0.0, self.a]],
            [[self.b, 0.0], [0.0, self.b]],
            [[self.c_plus, 0.0], [0.0, self.c_minus]],
        )
    }

    /// Invariants straight from the quadruple (no physicality check).
    pub fn invariants(&self) -> SymplecticInvariants {
        let StandardForm { a, b, c_plus, c_minus } = *self;
        SymplecticInvariants::from_dets(a * a, b * b, c_plus * c_minus, (a * b - c_plus * c_plus) * (a * b - c_minus * c_minus))
    }

    /// Slack of the uncertainty relation, `1 + Det σ − Δ`. Zero when `ν₋ = 1`.
    pub fn uncertainty_slack(&self) -> f64 {
        let StandardForm { a, b, c_plus, c_minus } = *self;
        1.0 + (a * b - c_plus * c_plus) * (a * b - c_minus * c_minus)
            - a * a
            - b * b
            - 2.0 * c_plus * c_minus
    }

    pub fn is_symmetric(&self) -> bool {
        (self.a - self.b).abs() <= 1e-9 * self.a.max(self.b)
    }

    pub fn check_physical(&self, tol: f64) -> Result<()> {
        let StandardForm { a, b, c_plus, c_minus } = *self;
        if a < 1.0 - tol || b < 1.0 - tol {
            return Err(Error::domain(format!(
                "local determinants below vacuum (a = {a}, b = {b}; need a, b ≥ 1)"
            )));
        }
        let ab = a * b;
        if ab - c_plus * c_plus < -tol * ab || ab - c_minus * c_minus < -tol * ab {
            return Err(Error::domain("σ ≥ 0 violated (ab < c±²)"));
        }
        check_uncertainty(&self.invariants(), tol)
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.check_physical(tol).is_ok()
    }

    /// The two quadrature submatrices `γ_q` (positions) and `γ_p` (momenta).
    pub fn quadrature_blocks(&self) -> (Block, Block) {
        (
            [[self.a, self.c_plus], [self.c_plus, self.b]],
            [[self.a, self.c_minus], [self.c_minus, self.b]],
        )
    }

    /// Swaps the two modes.
    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a, ..*self }
    }
}

/// The local-symplectic invariants of a two-mode CM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticInvariants {
    pub det_alpha: f64,
    pub det_beta: f64,
    pub det_gamma: f64,
    pub det_sigma: f64,
    /// `Δ = Det α + Det β + 2 Det γ`
    pub delta: f64,
    /// `Δ̃ = Det α + Det β − 2 Det γ`, the value of `Δ` after partial transposition.
    pub delta_tilde: f64,
}

impl SymplecticInvariants {
    fn from_dets(det_alpha: f64, det_beta: f64, det_gamma: f64, det_sigma: f64) -> Self {
        Self {
            det_alpha,
            det_beta,
            det_gamma,
            det_sigma,
            delta: det_alpha + det_beta + 2.0 * det_gamma,
            delta_tilde: det_alpha + det_beta - 2.0 * det_gamma,
        }
    }

    fn of(cm: &CovarianceMatrix) -> Self {
        Self::from_dets(
            det2(&cm.alpha()),
            det2(&cm.beta()),
            det2(&cm.gamma()),
            cm.to_matrix().determinant(),
        )
    }
}

fn effective_tol(tol: f64, inv: &SymplecticInvariants) -> f64 {
    tol * inv.delta.abs().max(1.0)
}

fn check_uncertainty(inv: &SymplecticInvariants, tol: f64) -> Result<()> {
    let t = effective_tol(tol, inv);
    if inv.det_sigma < 1.0 - t {
        return Err(Error::domain(format!(
            "Det σ ≥ 1 violated (Det σ = {})",
            inv.det_sigma
        )));
    }
    if inv.delta > 1.0 + inv.det_sigma + t {
        return Err(Error::domain(format!(
            "Δ ≤ 1 + Det σ violated (Δ = {}, Det σ = {})",
            inv.delta, inv.det_sigma
        )));
    }
    Ok(())
}

/// Symplectic spectrum of `σ` and of its partial transpose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub nu_tilde_minus: f64,
    pub nu_tilde_plus: f64,
}

impl SymplecticSpectrum {
    pub fn from_invariants(inv: &SymplecticInvariants) -> Result<Self> {
        let (nu_minus, nu_plus) = eigen_pair(inv.delta, inv.det_sigma)?;
        let (nu_tilde_minus, nu_tilde_plus) = eigen_pair(inv.delta_tilde, inv.det_sigma)?;
        Ok(Self { nu_minus, nu_plus, nu_tilde_minus, nu_tilde_plus })
    }
}

/// Solves `ν⁴ − Δν² + Det σ = 0` for the ordered pair `(ν₋, ν₊)`.
///
/// The small root is taken as `2 Det σ / (Δ + √disc)` to avoid cancellation.
fn eigen_pair(delta: f64, det: f64) -> Result<(f64, f64)> {
    let mut disc = delta * delta - 4.0 * det;
    if disc < 0.0 {
        if disc < -DISCRIMINANT_RTOL * delta * delta {
            return Err(Error::domain(format!(
                "negative discriminant Δ² − 4 Det σ = {disc:e}"
            )));
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    let big = 0.5 * (delta + root);
    if !(big > 0.0) {
        return Err(Error::domain("non-positive symplectic spectrum"));
    }
    let small = det / big;
    Ok((small.max(0.0).sqrt(), big.sqrt()))
}

/// Physicality test: `Δ ≤ 1 + Det σ`, `Det σ ≥ 1` and `σ ≥ 0`, each to within
/// `tol` (scaled by `max(1, Δ)` for the two invariant inequalities).
pub fn validate_physical(cm: &CovarianceMatrix, tol: f64) -> Result<bool> {
    Ok(physicality_violation(cm, tol)?.is_none())
}

/// Like [`validate_physical`] but names the violated inequality.
pub fn physicality_violation(cm: &CovarianceMatrix, tol: f64) -> Result<Option<String>> {
    if cm.asymmetry() > tol * cm.scale() {
        return Err(Error::Malformed(format!(
            "covariance matrix is not symmetric within {tol:e}"
        )));
    }
    let eig = SymmetricEigen::new(cm.to_matrix());
    let min_eig = eig.eigenvalues.min();
    if min_eig < -tol * cm.scale() {
        return Ok(Some(format!("σ ≥ 0 violated (smallest eigenvalue {min_eig})")));
    }
    let inv = SymplecticInvariants::of(cm);
    Ok(check_uncertainty(&inv, tol).err().map(|e| e.to_string()))
}

fn require_physical(cm: &CovarianceMatrix) -> Result<()> {
    match physicality_violation(cm, DEFAULT_TOL)? {
        None => Ok(()),
        Some(why) => Err(Error::Domain(why)),
    }
}

pub fn local_invariants(cm: &CovarianceMatrix) -> Result<SymplecticInvariants> {
    require_physical(cm)?;
    Ok(SymplecticInvariants::of(cm))
}

/// Reduces a physical CM to its standard form.
///
/// Each diagonal block is normalised with the symplectic map
/// `(Det α)^{1/4} α^{-1/2}`, after which the correlation block `γ'` is
/// diagonalised by local rotations. With `E, F, G, H` the symmetric and
/// antisymmetric parts of `γ'`, the result is `c₊ = Q + R`, `c₋ = Q − R`
/// where `Q = |(E, H)|` and `R = |(F, G)|`.
pub fn to_standard_form(cm: &CovarianceMatrix) -> Result<StandardForm> {
    require_physical(cm)?;
    let alpha = cm.alpha();
    let beta = cm.beta();
    let (a, n1) = normalizer(&alpha)?;
    let (b, n2) = normalizer(&beta)?;
    let g = mul2(&mul2(&n1, &cm.gamma()), &n2);
    let e = 0.5 * (g[0][0] + g[1][1]);
    let f = 0.5 * (g[0][0] - g[1][1]);
    let gg = 0.5 * (g[1][0] + g[0][1]);
    let h = 0.5 * (g[1][0] - g[0][1]);
    let q = e.hypot(h);
    let r = f.hypot(gg);
    Ok(StandardForm { a, b, c_plus: q + r, c_minus: q - r })
}

/// Returns `(√Det m, (Det m)^{1/4} m^{-1/2})` for a 2×2 positive definite block.
fn normalizer(m: &Block) -> Result<(f64, Block)> {
    let det = det2(m);
    let tr = m[0][0] + m[1][1];
    if !(det > 0.0 && tr > 0.0) {
        return Err(Error::domain("single-mode block is not positive definite"));
    }
    let sd = det.sqrt();
    // m^{1/2} = (m + √det·I)/√(tr + 2√det), so m^{-1/2} = adj(m^{1/2})/√det
    let t = (tr + 2.0 * sd).sqrt();
    let sqrt_m = [[(m[0][0] + sd) / t, m[0][1] / t], [m[1][0] / t, (m[1][1] + sd) / t]];
    let ds = det2(&sqrt_m);
    let inv = [[sqrt_m[1][1] / ds, -sqrt_m[0][1] / ds], [-sqrt_m[1][0] / ds, sqrt_m[0][0] / ds]];
    let k = sd.sqrt();
    Ok((sd, [[k * inv[0][0], k * inv[0][1]], [k * inv[1][0], k * inv[1][1]]]))
}

fn mul2(x: &Block, y: &Block) -> Block {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

pub fn symplectic_spectrum(cm: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    require_physical(cm)?;
    SymplecticSpectrum::from_invariants(&SymplecticInvariants::of(cm))
}

/// Symplectic eigenvalues as the moduli of the eigenvalues of `iΩσ`, sorted
/// ascending. Independent of the invariant formulas; used for cross-checks.
pub fn spectrum_by_eigenvalues(cm: &CovarianceMatrix) -> [f64; 2] {
    let mut omega = Matrix4::zeros();
    omega[(0, 1)] = 1.0;
    omega[(1, 0)] = -1.0;
    omega[(2, 3)] = 1.0;
    omega[(3, 2)] = -1.0;
    let evs = (omega * cm.to_matrix()).complex_eigenvalues();
    let mut mods: Vec<f64> = evs.iter().map(|z| z.norm()).collect();
    mods.sort_by(|x, y| x.total_cmp(y));
    // eigenvalues of Ωσ come in pairs ±iν
    [0.5 * (mods[0] + mods[1]), 0.5 * (mods[2] + mods[3])]
}

/// Global purity `μ = 1/√Det σ`.
pub fn global_purity(cm: &CovarianceMatrix) -> Result<f64> {
    Ok(1.0 / local_invariants(cm)?.det_sigma.sqrt())
}

/// Local purities `(μ₁, μ₂) = (1/√Det α, 1/√Det β)`.
pub fn local_purities(cm: &CovarianceMatrix) -> Result<(f64, f64)> {
    let inv = local_invariants(cm)?;
    Ok((1.0 / inv.det_alpha.sqrt(), 1.0 / inv.det_beta.sqrt()))
}

/// CM of the two-mode squeezed vacuum with squeezing `r`.
pub fn make_two_mode_squeezed(r: f64) -> Result<CovarianceMatrix> {
    if !r.is_finite() {
        return Err(Error::Malformed(format!("squeezing must be finite, got {r}")));
    }
    let ch = (2.0 * r).cosh();
    let sh = (2.0 * r).sinh();
    Ok(CovarianceMatrix::from_blocks(
        [[ch, 0.0], [0.0, ch]],
        [[ch, 0.0], [0.0, ch]],
        [[sh, 0.0], [0.0, -sh]],
    ))
}
