//! Full entanglement report of a two-mode squeezed thermal state that has
//! been scrambled by local squeezing and rotations.
//!
//! ```text
//! cargo run --example squeezed_state_report
//! ```

use gaussent::report::{measure, to_json_string, MeasureOptions, StateInput};
use gaussent::symplectic::{rotation, squeezer, to_standard_form, CovarianceMatrix, StandardForm};

fn main() -> gaussent::Result<()> {
    // thermal occupation n in each mode, then two-mode squeezing r
    let (n, r): (f64, f64) = (0.3, 0.8);
    let a = (2.0 * n + 1.0) * (2.0 * r).cosh();
    let c = (2.0 * n + 1.0) * (2.0 * r).sinh();
    let sf = StandardForm::new(a, a, c, -c)?;

    // local operations hide the standard form but keep every invariant
    let cm = sf.to_cm().apply_local(squeezer(0.4), rotation(1.1));
    println!("scrambled CM:");
    for row in cm.entries() {
        println!("  {:>9.5} {:>9.5} {:>9.5} {:>9.5}", row[0], row[1], row[2], row[3]);
    }
    let back = to_standard_form(&cm)?;
    println!("recovered standard form: a = {:.6}, b = {:.6}, c+ = {:.6}, c- = {:.6}", back.a, back.b, back.c_plus, back.c_minus);

    let report = measure(&StateInput::Cm(*cm.entries()), &MeasureOptions::default())?;
    println!("{}", to_json_string(&report)?);

    let unphysical = CovarianceMatrix::from_rows_unchecked([
        [1.0, 0.0, 2.0, 0.0],
        [0.0, 1.0, 0.0, -2.0],
        [2.0, 0.0, 1.0, 0.0],
        [0.0, -2.0, 0.0, 1.0],
    ]);
    if let Err(e) = measure(&StateInput::Cm(*unphysical.entries()), &MeasureOptions::default()) {
        println!("rejected: {e}");
    }
    Ok(())
}
