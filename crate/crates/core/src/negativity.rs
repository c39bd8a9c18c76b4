//! PPT separability, negativities and the entanglement of formation of
//! symmetric states. Everything here is a function of `ν̃₋` alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{StandardForm, SymplecticSpectrum};

/// Logarithm used by the entropic quantities. `Two` gives ebits.
///
/// Serialized as the number `2` or the string `"e"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Two,
    E,
}

impl Serialize for LogBase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LogBase::Two => s.serialize_u8(2),
            LogBase::E => s.serialize_str("e"),
        }
    }
}

impl<'de> Deserialize<'de> for LogBase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(2.0) => Ok(LogBase::Two),
            Raw::Num(x) => Err(serde::de::Error::custom(format!("log base must be 2 or e, got {x}"))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            _ => Err(Error::Malformed(format!("log base must be 2 or e, got {s:?}"))),
        }
    }
}

impl LogBase {
    /// Converts a natural logarithm to this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Two => nats / std::f64::consts::LN_2,
            LogBase::E => nats,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    pub separable: bool,
    pub negativity: f64,
    pub log_negativity: f64,
    /// Present only for symmetric states.
    pub eof_symmetric: Option<f64>,
    pub log_base: LogBase,
}

impl NegativityReport {
    pub fn new(sf: &StandardForm, spectrum: &SymplecticSpectrum, tol: f64, base: LogBase) -> Result<Self> {
        let nu = spectrum.nu_tilde_minus;
        let separable = is_separable_ppt(spectrum, tol);
        let (negativity, log_negativity) = if separable {
            (0.0, 0.0)
        } else {
            (negativity(nu)?, log_negativity(nu, base)?)
        };
        let eof_symmetric = if sf.is_symmetric() {
            Some(if separable { 0.0 } else { h_function(nu, base)? })
        } else {
            None
        };
        Ok(Self { separable, negativity, log_negativity, eof_symmetric, log_base: base })
    }
}

/// PPT criterion: separable iff `ν̃₋ ≥ 1 − tol`.
pub fn is_separable_ppt(spectrum: &SymplecticSpectrum, tol: f64) -> bool {
    spectrum.nu_tilde_minus >= 1.0 - tol
}

fn require_positive(nu: f64) -> Result<()> {
    if nu > 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("ν̃₋ must be positive and finite, got {nu}")))
    }
}

/// `N = max[0, (1 − ν̃₋)/(2ν̃₋)]`.
pub fn negativity(nu_tilde_minus: f64) -> Result<f64> {
    require_positive(nu_tilde_minus)?;
    Ok(((1.0 - nu_tilde_minus) / (2.0 * nu_tilde_minus)).max(0.0))
}

/// `E_N = max[0, −log ν̃₋]`.
pub fn log_negativity(nu_tilde_minus: f64, base: LogBase) -> Result<f64> {
    require_positive(nu_tilde_minus)?;
    Ok(base.from_nats(-nu_tilde_minus.ln()).max(0.0))
}

/// Entanglement of formation of a pure state as a function of its `ν̃₋ = x`:
///
/// `h(x) = f₊ log f₊ − f₋ log f₋`, `f± = (1 ± x)²/(4x)`.
///
/// Evaluated as `ln f₊ + 4 f₋ artanh(x)` (since `f₊ − f₋ = 1` and
/// `ln(f₊/f₋) = 4 artanh x`), which has no cancellation near `x → 0⁺` and
/// tends to zero at `x = 1`.
pub fn h_function(x: f64, base: LogBase) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("h(x) needs x > 0, got {x}")));
    }
    if x > 1.0 {
        return Err(Error::domain(format!("h(x) needs x ≤ 1, got {x}")));
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    let f_plus = (1.0 + x) * (1.0 + x) / (4.0 * x);
    let f_minus = (1.0 - x) * (1.0 - x) / (4.0 * x);
    let nats = f_plus.ln() + 4.0 * f_minus * x.atanh();
    Ok(base.from_nats(nats))
}

/// Entanglement of formation of a symmetric state, `max[0, h(ν̃₋)]`.
pub fn eof_symmetric(sf: &StandardForm, base: LogBase) -> Result<f64> {
    if !sf.is_symmetric() {
        return Err(Error::NotApplicable(format!(
            "closed-form EoF needs a symmetric state (a = {}, b = {})",
            sf.a, sf.b
        )));
    }
    let sp = SymplecticSpectrum::from_invariants(&sf.invariants())?;
    let nu = sp.nu_tilde_minus;
    if nu >= 1.0 {
        Ok(0.0)
    } else {
        h_function(nu, base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Direct evaluation of the defining expression, base 2.
    fn h_naive(x: f64) -> f64 {
        let fp = (1.0 + x).powi(2) / (4.0 * x);
        let fm = (1.0 - x).powi(2) / (4.0 * x);
        let t = if fm > 0.0 { fm * fm.log2() } else { 0.0 };
        fp * fp.log2() - t
    }

    #[test]
    fn separability_examples() {
        let sp = |nu| SymplecticSpectrum { nu_minus: 1.0, nu_plus: 1.0, nu_tilde_minus: nu, nu_tilde_plus: 3.0 };
        assert!(!is_separable_ppt(&sp(1.0 / 3.0), 1e-10));
        assert!(is_separable_ppt(&sp(1.0), 1e-10));
        assert!(is_separable_ppt(&sp(2.0), 1e-10));
    }

    #[test]
    fn negativity_examples() {
        assert_eq!(negativity(1.0).unwrap(), 0.0);
        assert_eq!(log_negativity(1.0, LogBase::Two).unwrap(), 0.0);
        assert_relative_eq!(negativity(1.0 / 3.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(log_negativity(1.0 / 3.0, LogBase::Two).unwrap(), 1.584962500721156, epsilon = 1e-15);
        assert_eq!(negativity(0.5).unwrap(), 0.5);
        assert_eq!(log_negativity(0.5, LogBase::Two).unwrap(), 1.0);
        assert_relative_eq!(log_negativity(0.5, LogBase::E).unwrap(), std::f64::consts::LN_2);
        assert_eq!(negativity(3.0).unwrap(), 0.0);
        assert!(negativity(0.0).is_err());
        assert!(log_negativity(-1.0, LogBase::Two).is_err());
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_function(1.0, LogBase::Two).unwrap(), 0.0);
        assert_relative_eq!(h_function(0.5, LogBase::Two).unwrap(), 0.566165626622601408, epsilon = 1e-14);
        assert_relative_eq!(h_function(1.0 / 3.0, LogBase::Two).unwrap(), 1.081704165945510485, epsilon = 1e-14);
        assert!(h_function(0.0, LogBase::Two).is_err());
        assert!(h_function(1.5, LogBase::Two).is_err());
    }

    #[test]
    fn h_matches_naive_form() {
        for i in 1..200 {
            let x = i as f64 / 200.0;
            assert_relative_eq!(h_function(x, LogBase::Two).unwrap(), h_naive(x), max_relative = 1e-11, epsilon = 1e-14);
        }
    }

    #[test]
    fn h_is_stable_near_zero() {
        // f₊ ≈ 1/(4x) there, so h ≈ log₂(1/(4x)) + log₂ e
        let x: f64 = 1e-12;
        let approx = (1.0 / (4.0 * x)).log2() + std::f64::consts::LOG2_E;
        assert_relative_eq!(h_function(x, LogBase::Two).unwrap(), approx, max_relative = 1e-9);
    }

    #[test]
    fn eof_symmetric_examples() {
        let sq = StandardForm::new(5.0 / 3.0, 5.0 / 3.0, 4.0 / 3.0, -4.0 / 3.0).unwrap();
        assert_relative_eq!(eof_symmetric(&sq, LogBase::Two).unwrap(), 1.081704165945510485, epsilon = 1e-12);
        let product = StandardForm::new(2.0, 2.0, 0.0, 0.0).unwrap();
        assert_eq!(eof_symmetric(&product, LogBase::Two).unwrap(), 0.0);
        let asym = StandardForm::new(3.0, 2.0, 1.0, -1.0).unwrap();
        assert!(matches!(eof_symmetric(&asym, LogBase::Two), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn eof_symmetric_at_half() {
        // pure squeezed state with ν̃₋ = 1/2: cosh 2r = (x + 1/x)/2 = 5/4
        let sf = StandardForm::pure(1.25).unwrap();
        assert_relative_eq!(eof_symmetric(&sf, LogBase::Two).unwrap(), 0.566165626622601408, epsilon = 1e-12);
    }

    #[test]
    fn report_flags() {
        let sf = StandardForm::new(2.0, 2.0, 0.0, 0.0).unwrap();
        let sp = SymplecticSpectrum::from_invariants(&sf.invariants()).unwrap();
        let rep = NegativityReport::new(&sf, &sp, 1e-10, LogBase::Two).unwrap();
        assert!(rep.separable);
        assert_eq!((rep.negativity, rep.log_negativity, rep.eof_symmetric), (0.0, 0.0, Some(0.0)));
    }
}
