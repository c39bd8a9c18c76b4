//! Gaussian entanglement of formation of a nonsymmetric state: the θ
//! landscape of the rim, its minimum, and the symmetric closed form for
//! comparison.
//!
//! ```text
//! cargo run --example gaussian_eof
//! ```

use std::f64::consts::PI;

use gaussent::gaussian_em::{m_theta, m_theta_geometric, minimize_m, minimize_m_with, GemOptions};
use gaussent::negativity::{eof_symmetric, LogBase};
use gaussent::StandardForm;

fn main() -> gaussent::Result<()> {
    let sf = StandardForm::new(3.0, 2.0, 1.9, -1.4)?;
    println!("state a = {}, b = {}, c+ = {}, c- = {}", sf.a, sf.b, sf.c_plus, sf.c_minus);
    println!("{:>8} {:>14} {:>14}", "theta", "m (formula)", "m (rim)");
    for k in 0..12 {
        let theta = 2.0 * PI * k as f64 / 12.0;
        println!("{theta:>8.4} {:>14.10} {:>14.10}", m_theta(&sf, theta)?, m_theta_geometric(&sf, theta)?);
    }
    let opt = minimize_m(&sf)?;
    println!(
        "minimum m = {:.12} at theta = {:.6}; nu_tilde_opt = {:.10}; G_EoF = {:.10} bits; {} local minima",
        opt.m_opt, opt.theta_opt, opt.nu_tilde_opt, opt.gaussian_eof, opt.extrema_found
    );

    // symmetric states: the optimum is known in closed form
    let sym = StandardForm::new(2.5, 2.5, 2.1, -1.7)?;
    let numeric = minimize_m_with(&sym, &GemOptions { symmetric_closed_form: false, ..GemOptions::default() })?;
    println!(
        "symmetric state: numeric G_EoF = {:.12}, closed form = {:.12}",
        numeric.gaussian_eof,
        eof_symmetric(&sym, LogBase::Two)?
    );
    Ok(())
}
