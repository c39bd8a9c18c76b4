//! Single-state reports, state input parsing and number formatting shared by
//! the JSON and CSV outputs.
//!
//! Every floating-point number written by this crate has 17 significant
//! digits, which round-trips any `f64` exactly.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::extremal::{self, ExtremalParams, GlemsBranch};
use crate::gaussian_em::{minimize_m_with, GemOptions, GemResult};
use crate::negativity::NegativityReport;
use crate::symplectic::{
    physicality_violation, to_standard_form, CovarianceMatrix, StandardForm, SymplecticInvariants,
    SymplecticSpectrum,
};
use crate::DEFAULT_TOL;

/// `x` with 17 significant digits in scientific notation; `NaN` for NaN.
pub fn sig17(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Pretty JSON whose floats are printed by [`sig17`].
struct Sig17Formatter<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(sig17(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes `value` as pretty JSON with 17-digit floats (non-finite floats
/// become `null`).
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(|e| Error::Numerical(format!("serializing JSON: {e}")))?;
    String::from_utf8(buf).map_err(|e| Error::Numerical(e.to_string()))
}

/// A state as given on input: a full covariance matrix, a standard form, or
/// the parameters `(s, d, g, λ)` of the extremal parametrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateInput {
    Cm([[f64; 4]; 4]),
    StandardForm { a: f64, b: f64, c_plus: f64, c_minus: f64 },
    Params(ExtremalParams),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStandardForm {
    a: f64,
    b: f64,
    c_plus: f64,
    c_minus: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    cm: Option<[[f64; 4]; 4]>,
    standard_form: Option<RawStandardForm>,
    params: Option<ExtremalParams>,
}

impl StateInput {
    /// Parses `{"cm": [[..4..] ×4]}`, `{"standard_form": {"a", "b", "c_plus",
    /// "c_minus"}}` or `{"params": {"s", "d", "g", "lambda"}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawInput = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("state JSON: {e}")))?;
        match (raw.cm, raw.standard_form, raw.params) {
            (Some(cm), None, None) => Ok(StateInput::Cm(cm)),
            (None, Some(sf), None) => {
                Ok(StateInput::StandardForm { a: sf.a, b: sf.b, c_plus: sf.c_plus, c_minus: sf.c_minus })
            }
            (None, None, Some(p)) => Ok(StateInput::Params(p)),
            _ => Err(Error::Malformed(
                "state JSON needs exactly one of \"cm\", \"standard_form\", \"params\"".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureOptions {
    /// Slack allowed on the physicality inequalities.
    pub physical_tol: f64,
    /// PPT tolerance, `ν̃₋ ≥ 1 − tol` counts as separable.
    pub separable_tol: f64,
    pub gem: GemOptions,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self { physical_tol: DEFAULT_TOL, separable_tol: DEFAULT_TOL, gem: GemOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Purities {
    pub global: f64,
    pub mode1: f64,
    pub mode2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gmems,
    Glems,
    Gmemms,
    /// `−1 < λ < 1`, no closed form.
    Intermediate,
}

/// Closed-form values of an extremal family member, next to the numerical
/// optimum of the same state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub params: ExtremalParams,
    pub family: Family,
    /// `d < 0`: the closed forms were evaluated with the modes exchanged.
    pub modes_swapped: bool,
    pub closed_form_m: Option<f64>,
    pub glems_branch: Option<GlemsBranch>,
    /// `|closed form − numerical| / numerical`.
    pub relative_difference: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub standard_form: StandardForm,
    pub purities: Purities,
    pub invariants: SymplecticInvariants,
    pub spectrum: SymplecticSpectrum,
    pub negativity: NegativityReport,
    pub gem: GemResult,
    pub family: Option<FamilyReport>,
}

/// Full report of a standard form that is already known to be physical.
pub fn measure_standard_form(sf: &StandardForm, opts: &MeasureOptions) -> Result<MeasureReport> {
    let invariants = sf.invariants();
    let spectrum = SymplecticSpectrum::from_invariants(&invariants)?;
    let negativity = NegativityReport::new(sf, &spectrum, opts.separable_tol, opts.gem.log_base)?;
    let gem = minimize_m_with(sf, &opts.gem)?;
    let purities = Purities { global: 1.0 / invariants.det_sigma.sqrt(), mode1: 1.0 / sf.a, mode2: 1.0 / sf.b };
    Ok(MeasureReport { standard_form: *sf, purities, invariants, spectrum, negativity, gem, family: None })
}

fn family_report(p: &ExtremalParams, report: &MeasureReport) -> Result<FamilyReport> {
    let (s, d, g) = (p.s, p.d.abs(), p.g);
    let nu = report.spectrum.nu_tilde_minus;
    let (family, closed_form_m, glems_branch) = if p.lambda == 1.0 {
        (Family::Gmems, Some(extremal::m_opt_gmems(s, d, g)?), None)
    } else if p.lambda == -1.0 {
        let opt = extremal::m_opt_glems_detailed(s, d, g)?;
        (Family::Glems, Some(opt.m), Some(opt.branch))
    } else if p.is_gmemms() {
        let m = if nu < 1.0 { extremal::m_opt_gmemms(s, nu)? } else { 1.0 };
        (Family::Gmemms, Some(m), None)
    } else {
        (Family::Intermediate, None, None)
    };
    let relative_difference = closed_form_m.map(|m| (m - report.gem.m_opt).abs() / report.gem.m_opt);
    Ok(FamilyReport { params: *p, family, modes_swapped: p.d < 0.0, closed_form_m, glems_branch, relative_difference })
}

/// Checks that `input` is physical and builds its full report.
pub fn measure(input: &StateInput, opts: &MeasureOptions) -> Result<MeasureReport> {
    match *input {
        StateInput::Cm(rows) => {
            let cm = CovarianceMatrix::new(rows)?;
            if let Some(msg) = physicality_violation(&cm, opts.physical_tol)? {
                return Err(Error::Domain(msg));
            }
            measure_standard_form(&to_standard_form(&cm)?, opts)
        }
        StateInput::StandardForm { a, b, c_plus, c_minus } => {
            let sf = StandardForm::normalized(a, b, c_plus, c_minus)?;
            sf.check_physical(opts.physical_tol)?;
            measure_standard_form(&sf, opts)
        }
        StateInput::Params(p) => {
            let sf = extremal::build_state(&p)?;
            let mut report = measure_standard_form(&sf, opts)?;
            report.family = Some(family_report(&p, &report)?);
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sig17_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(sig17(1.0), "1.0000000000000000e0");
        assert_eq!(sig17(f64::NAN), "NaN");
    }

    #[test]
    fn json_uses_17_digits_and_null_for_nan() {
        let text = to_json_string(&serde_json::json!({"x": 0.1, "y": f64::NAN, "n": 3})).unwrap();
        assert!(text.contains("\"x\": 1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"y\": null"));
        assert!(text.contains("\"n\": 3"));
    }

    #[test]
    fn input_variants() {
        let cm = StateInput::from_json(r#"{"cm": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#).unwrap();
        assert!(matches!(cm, StateInput::Cm(_)));
        let sf = StateInput::from_json(r#"{"standard_form": {"a": 2, "b": 2, "c_plus": 1, "c_minus": -1}}"#).unwrap();
        assert_eq!(sf, StateInput::StandardForm { a: 2.0, b: 2.0, c_plus: 1.0, c_minus: -1.0 });
        let p = StateInput::from_json(r#"{"params": {"s": 2, "d": 0.5, "g": 2.5, "lambda": 1}}"#).unwrap();
        assert!(matches!(p, StateInput::Params(_)));
        for bad in ["", "{}", r#"{"cm": [[1,0]]}"#, r#"{"cm": 1, "params": 2}"#, r#"{"foo": 1}"#] {
            assert!(matches!(StateInput::from_json(bad), Err(Error::Malformed(_))), "{bad}");
        }
    }

    #[test]
    fn vacuum_report_is_unentangled() {
        let id = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        let r = measure(&StateInput::Cm(id), &MeasureOptions::default()).unwrap();
        assert!(r.negativity.separable);
        assert_eq!(r.negativity.negativity, 0.0);
        assert_eq!(r.negativity.log_negativity, 0.0);
        assert_eq!(r.negativity.eof_symmetric, Some(0.0));
        assert_eq!(r.gem.gaussian_eof, 0.0);
        assert_eq!(r.purities.global, 1.0);
    }

    #[test]
    fn gmems_params_report() {
        let p = ExtremalParams::gmems(2.0, 0.5, 2.5).unwrap();
        let r = measure(&StateInput::Params(p), &MeasureOptions::default()).unwrap();
        let fam = r.family.unwrap();
        assert_eq!(fam.family, Family::Gmems);
        assert_relative_eq!(fam.closed_form_m.unwrap(), 1.0929752066115702, max_relative = 1e-15);
        assert!(fam.relative_difference.unwrap() < 1e-8);
    }

    #[test]
    fn unphysical_input_names_inequality() {
        let r = measure(
            &StateInput::StandardForm { a: 3.0, b: 3.0, c_plus: 2.5, c_minus: 2.5 },
            &MeasureOptions::default(),
        );
        assert!(matches!(r, Err(Error::Domain(ref m)) if m.contains("Δ ≤ 1 + Det σ")), "{r:?}");
    }

    #[test]
    fn report_serializes() {
        let r = measure(
            &StateInput::StandardForm { a: 5.0 / 3.0, b: 5.0 / 3.0, c_plus: 4.0 / 3.0, c_minus: -4.0 / 3.0 },
            &MeasureOptions::default(),
        )
        .unwrap();
        let text = to_json_string(&r).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["negativity"]["log_base"], 2);
        assert_eq!(v["family"], serde_json::Value::Null);
        let nu = v["spectrum"]["nu_tilde_minus"].as_f64().unwrap();
        assert_relative_eq!(nu, 1.0 / 3.0, epsilon = 1e-12);
        assert_eq!(v["gem"]["extrema_found"], 1);
    }
}
